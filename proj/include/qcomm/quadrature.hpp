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

/// Values psi_0(x) .. psi_{count-1}(x) of the normalized oscillator
/// eigenfunctions <x|n> = (2^n n! sqrt(pi))^{-1/2} H_n(x) exp(-x^2/2).
RealVector hermite_functions(double x, int count);

/// count x xs.size() table, column j holds hermite_functions(xs[j], count).
RealMatrix hermite_table(const RealVector& xs, int count);

/// Discrete position basis of a truncated space. Nodes are the eigenvalues
/// of the truncated q matrix; column k of `vectors` is the normalized
/// eigenvector sqrt(lambda_k) psi_n(x_k), where lambda_k is the Christoffel
/// weight, so that |x_k> ~ vectors.col(k) / sqrt(lambda_k).
struct QuadratureBasis {
  int dim = 0;
  RealVector nodes;
  RealVector christoffel;
  RealMatrix vectors;

  /// Momentum eigenvector for node k: components i^n vectors(n, k).
  Vector momentum_vector(int k) const;
  /// Gauss-Hermite weight for integrals against exp(-x^2).
  double gauss_weight(int k) const;
};

QuadratureBasis quadrature_basis(int dim);
/// Memoized quadrature_basis (thread safe).
std::shared_ptr<const QuadratureBasis> shared_quadrature_basis(int dim);

/// Gauss-Hermite nodes and weights for int f(t) exp(-t^2) dt.
struct GaussHermiteRule {
  RealVector nodes;
  RealVector weights;
};
GaussHermiteRule gauss_hermite(int order);

/// <x|psi> for a state given by Fock amplitudes.
Complex quadrature_wavefunction(const StateVector& psi, double x);
/// <p|psi>.
Complex momentum_wavefunction(const StateVector& psi, double p);

/// Position-representation density <x|rho|x>.
double position_density(const DensityOperator& rho, double x);
double momentum_density(const DensityOperator& rho, double p);

}  // namespace qcomm
