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

#include <string>
#include <utility>

#include "qcomm/fock_space.hpp"

namespace qcomm {

/// Dense complex square matrix bound to a truncated Fock space.
class ComplexOperator {
 public:
  ComplexOperator(FockSpace space, Matrix entries);

  static ComplexOperator identity(const FockSpace& space);
  static ComplexOperator zero(const FockSpace& space);

  const FockSpace& space() const noexcept { return space_; }
  const Matrix& matrix() const noexcept { return entries_; }
  int dim() const noexcept { return space_.dim(); }

  ComplexOperator adjoint() const;
  ComplexOperator operator*(const ComplexOperator& rhs) const;
  ComplexOperator operator+(const ComplexOperator& rhs) const;
  ComplexOperator operator-(const ComplexOperator& rhs) const;
  ComplexOperator operator*(Complex s) const;

 private:
  FockSpace space_;
  Matrix entries_;
};

/// Ket in a truncated Fock space. `tail_mass` is the probability that the
/// untruncated state would place above the cutoff.
struct StateVector {
  FockSpace space;
  Vector amplitudes;
  double tail_mass = 0.0;
  bool normalized = true;

  StateVector(FockSpace s, Vector amps, double tail = 0.0, bool is_normalized = true);

  /// |psi><psi|.
  ComplexOperator projector() const;
  Complex inner(const StateVector& other) const;  // <this|other>
};

/// Hermitian, positive semidefinite, unit-trace operator.
class DensityOperator {
 public:
  /// Throws InvariantError (trace, Hermiticity) or NotPsdError.
  explicit DensityOperator(ComplexOperator op, std::string label = {});

  static DensityOperator from_state(const StateVector& psi, std::string label = {});

  const ComplexOperator& op() const noexcept { return op_; }
  const Matrix& matrix() const noexcept { return op_.matrix(); }
  const FockSpace& space() const noexcept { return op_.space(); }
  const std::string& label() const noexcept { return label_; }
  int dim() const noexcept { return op_.dim(); }

 private:
  ComplexOperator op_;
  std::string label_;
};

StateVector number_state(const FockSpace& space, int n);

/// Returns (a, a_dag) with a|n> = sqrt(n)|n-1>.
std::pair<ComplexOperator, ComplexOperator> ladder_operators(const FockSpace& space);
ComplexOperator number_operator(const FockSpace& space);
/// q = (a + a_dag)/sqrt(2).
ComplexOperator position_operator(const FockSpace& space);
/// p = (a - a_dag)/(i sqrt(2)).
ComplexOperator momentum_operator(const FockSpace& space);

Complex trace_product(const ComplexOperator& a, const ComplexOperator& b);
Complex expectation(const ComplexOperator& a, const DensityOperator& rho);
Complex expectation(const ComplexOperator& a, const StateVector& psi);

/// Positive square root. Eigenvalues in [-eig_floor, 0) are clamped to 0.
ComplexOperator operator_sqrt(const ComplexOperator& a);

/// max |A - A^dag| entry.
double hermiticity_defect(const Matrix& a);
/// Smallest eigenvalue of the Hermitian part.
double min_eigenvalue(const Matrix& a);
/// (A + A^dag)/2.
Matrix hermitize(const Matrix& a);

/// Top-left dim x dim block, i.e. P A P with P the projector on the first
/// `space.dim()` levels.
ComplexOperator compress(const ComplexOperator& a, const FockSpace& space);
/// Embeds into a larger space with zero padding.
ComplexOperator embed(const ComplexOperator& a, const FockSpace& space);

/// Fidelity <psi|rho|psi> between a density operator and a pure state.
double fidelity(const DensityOperator& rho, const StateVector& psi);

}  // namespace qcomm
