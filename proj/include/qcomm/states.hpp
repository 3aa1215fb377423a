// Copyright 2026 The qcomm Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <memory>

#include "qcomm/operators.hpp"

namespace qcomm {

/// Poisson amplitudes exp(-|a|^2/2) a^n / sqrt(n!), renormalized after
/// truncation. Throws TruncationError when the lost mass exceeds the
/// space's tail tolerance.
StateVector coherent_state(const FockSpace& space, Complex alpha);

/// Unnormalized truncation of |alpha> (no renormalization, no tail check).
/// Used for measurement kets, whose compression must stay exact.
Vector coherent_amplitudes(int dim, Complex alpha);

/// Probability mass of |alpha> on levels >= dim.
double coherent_tail_mass(int dim, Complex alpha);

/// Exponential of the truncated generator alpha a^dag - conj(alpha) a.
ComplexOperator displacement_operator(const FockSpace& space, Complex alpha);

/// Displacements on a fixed working space, sharing one eigendecomposition
/// of the generator i(a^dag - a). D(r e^{i theta}) = R D(r) R^dag with R the
/// phase rotation diag(e^{i theta n}).
class DisplacementFactory {
 public:
  explicit DisplacementFactory(int working_dim);

  int working_dim() const noexcept { return dim_; }
  /// Top-left rows x cols block of D(alpha) computed on the working space.
  Matrix block(Complex alpha, int rows, int cols) const;
  /// D(alpha) v for a vector of length working_dim().
  Vector apply(Complex alpha, const Vector& v) const;

 private:
  int dim_;
  Matrix u_;
  RealVector lambda_;
};

/// Process-wide memoized factory for a working dimension (thread safe).
std::shared_ptr<const DisplacementFactory> shared_displacement_factory(int working_dim);

/// Working dimension that keeps D(alpha)|n>, n < dim, inside the cutoff.
int displacement_working_dim(int dim, double max_abs_alpha);

/// Ground state with position wavefunction (eta/pi)^{1/4} exp(-eta q^2 / 2),
/// obtained by projecting onto a discrete position basis on an enlarged
/// working space and compressing.
StateVector squeezed_ground_state(const FockSpace& space, double eta);

/// D(alpha) applied to the squeezed ground state, alpha = (q_r + i p_r)/sqrt(2).
StateVector displaced_squeezed_state(const FockSpace& space, double p_r, double q_r,
                                     double eta);

/// Working dimension used for quadrature-derived states.
int quadrature_working_dim(int dim);

}  // namespace qcomm
