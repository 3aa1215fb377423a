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

#include "qcomm/operators.hpp"

#include <cmath>
#include <string>

#include <Eigen/Eigenvalues>

#include "qcomm/errors.hpp"

namespace qcomm {

ComplexOperator::ComplexOperator(FockSpace space, Matrix entries)
    : space_(space), entries_(std::move(entries)) {
  if (entries_.rows() != space_.dim() || entries_.cols() != space_.dim()) {
    throw DimensionMismatchError("ComplexOperator: matrix is " +
                                 std::to_string(entries_.rows()) + "x" +
                                 std::to_string(entries_.cols()) +
                                 ", space dim " + std::to_string(space_.dim()));
  }
  if (!entries_.allFinite()) {
    throw DomainError("ComplexOperator: non-finite entry");
  }
}

ComplexOperator ComplexOperator::identity(const FockSpace& space) {
  return {space, Matrix::Identity(space.dim(), space.dim())};
}

ComplexOperator ComplexOperator::zero(const FockSpace& space) {
  return {space, Matrix::Zero(space.dim(), space.dim())};
}

ComplexOperator ComplexOperator::adjoint() const {
  return {space_, entries_.adjoint()};
}

ComplexOperator ComplexOperator::operator*(const ComplexOperator& rhs) const {
  require_same_dim(space_, rhs.space_, "operator product");
  return {space_, entries_ * rhs.entries_};
}

ComplexOperator ComplexOperator::operator+(const ComplexOperator& rhs) const {
  require_same_dim(space_, rhs.space_, "operator sum");
  return {space_, entries_ + rhs.entries_};
}

ComplexOperator ComplexOperator::operator-(const ComplexOperator& rhs) const {
  require_same_dim(space_, rhs.space_, "operator difference");
  return {space_, entries_ - rhs.entries_};
}

ComplexOperator ComplexOperator::operator*(Complex s) const {
  return {space_, entries_ * s};
}

StateVector::StateVector(FockSpace s, Vector amps, double tail, bool is_normalized)
    : space(s), amplitudes(std::move(amps)), tail_mass(tail), normalized(is_normalized) {
  if (amplitudes.size() != space.dim()) {
    throw DimensionMismatchError("StateVector: amplitude count " +
                                 std::to_string(amplitudes.size()) +
                                 " != dim " + std::to_string(space.dim()));
  }
  if (normalized && std::abs(amplitudes.norm() - 1.0) > 1e-9) {
    throw InvariantError("StateVector: norm " + std::to_string(amplitudes.norm()) +
                         " is not 1");
  }
}

ComplexOperator StateVector::projector() const {
  return {space, amplitudes * amplitudes.adjoint()};
}

Complex StateVector::inner(const StateVector& other) const {
  require_same_dim(space, other.space, "inner product");
  return amplitudes.dot(other.amplitudes);
}

double hermiticity_defect(const Matrix& a) {
  if (a.size() == 0) return 0.0;
  return (a - a.adjoint()).cwiseAbs().maxCoeff();
}

Matrix hermitize(const Matrix& a) { return 0.5 * (a + a.adjoint()); }

double min_eigenvalue(const Matrix& a) {
  Eigen::SelfAdjointEigenSolver<Matrix> es(hermitize(a), Eigen::EigenvaluesOnly);
  return es.eigenvalues().minCoeff();
}

DensityOperator::DensityOperator(ComplexOperator op, std::string label)
    : op_(std::move(op)), label_(std::move(label)) {
  const double herm = hermiticity_defect(op_.matrix());
  if (herm > tol::kHermitian) {
    throw InvariantError("DensityOperator: Hermiticity defect " + std::to_string(herm));
  }
  const double tr = op_.matrix().trace().real();
  if (std::abs(tr - 1.0) > tol::kTrace) {
    throw InvariantError("DensityOperator: trace " + std::to_string(tr) + " is not 1");
  }
  const double lo = min_eigenvalue(op_.matrix());
  if (lo < -tol::kEigFloor) {
    throw NotPsdError("DensityOperator: eigenvalue " + std::to_string(lo), lo);
  }
}

DensityOperator DensityOperator::from_state(const StateVector& psi, std::string label) {
  Vector v = psi.amplitudes / psi.amplitudes.norm();
  return DensityOperator({psi.space, v * v.adjoint()}, std::move(label));
}

StateVector number_state(const FockSpace& space, int n) {
  if (n < 0 || n >= space.dim()) {
    throw OutOfRangeError("number_state: n=" + std::to_string(n) +
                          " outside [0, " + std::to_string(space.dim()) + ")");
  }
  Vector v = Vector::Zero(space.dim());
  v(n) = 1.0;
  return {space, v};
}

std::pair<ComplexOperator, ComplexOperator> ladder_operators(const FockSpace& space) {
  const int d = space.dim();
  Matrix a = Matrix::Zero(d, d);
  for (int n = 1; n < d; ++n) a(n - 1, n) = std::sqrt(static_cast<double>(n));
  Matrix ad = a.adjoint();
  return {ComplexOperator(space, std::move(a)), ComplexOperator(space, std::move(ad))};
}

ComplexOperator number_operator(const FockSpace& space) {
  Matrix n = Matrix::Zero(space.dim(), space.dim());
  for (int k = 0; k < space.dim(); ++k) n(k, k) = k;
  return {space, n};
}

ComplexOperator position_operator(const FockSpace& space) {
  auto [a, ad] = ladder_operators(space);
  return {space, (a.matrix() + ad.matrix()) / std::sqrt(2.0)};
}

ComplexOperator momentum_operator(const FockSpace& space) {
  auto [a, ad] = ladder_operators(space);
  return {space, (a.matrix() - ad.matrix()) / Complex(0.0, std::sqrt(2.0))};
}

Complex trace_product(const ComplexOperator& a, const ComplexOperator& b) {
  require_same_dim(a.space(), b.space(), "trace_product");
  // Tr(AB) = sum_ij A_ij B_ji
  return (a.matrix().cwiseProduct(b.matrix().transpose())).sum();
}

Complex expectation(const ComplexOperator& a, const DensityOperator& rho) {
  return trace_product(a, rho.op());
}

Complex expectation(const ComplexOperator& a, const StateVector& psi) {
  require_same_dim(a.space(), psi.space, "expectation");
  return psi.amplitudes.dot(a.matrix() * psi.amplitudes);
}

ComplexOperator operator_sqrt(const ComplexOperator& a) {
  const double herm = hermiticity_defect(a.matrix());
  if (herm > tol::kHermitian * std::max(1.0, a.matrix().cwiseAbs().maxCoeff())) {
    throw InvariantError("operator_sqrt: operator is not Hermitian (defect " +
                         std::to_string(herm) + ")");
  }
  auto root = [](auto ev, const auto& u) {
    if (ev.minCoeff() < -tol::kEigFloor) {
      throw NotPsdError("operator_sqrt: eigenvalue " + std::to_string(ev.minCoeff()),
                        ev.minCoeff());
    }
    for (Eigen::Index i = 0; i < ev.size(); ++i) ev(i) = std::sqrt(std::max(ev(i), 0.0));
    return Matrix((u * ev.asDiagonal() * u.adjoint()).template cast<Complex>());
  };
  if (a.matrix().imag().cwiseAbs().maxCoeff() == 0.0) {
    // Real symmetric input: the real solver is several times faster.
    const RealMatrix re = 0.5 * (a.matrix().real() + a.matrix().real().transpose());
    Eigen::SelfAdjointEigenSolver<RealMatrix> es(re);
    return {a.space(), root(es.eigenvalues(), es.eigenvectors())};
  }
  Eigen::SelfAdjointEigenSolver<Matrix> es(hermitize(a.matrix()));
  return {a.space(), root(es.eigenvalues(), es.eigenvectors())};
}

ComplexOperator compress(const ComplexOperator& a, const FockSpace& space) {
  if (space.dim() > a.dim()) {
    throw DimensionMismatchError("compress: target dim " + std::to_string(space.dim()) +
                                 " exceeds source dim " + std::to_string(a.dim()));
  }
  return {space, a.matrix().topLeftCorner(space.dim(), space.dim())};
}

ComplexOperator embed(const ComplexOperator& a, const FockSpace& space) {
  if (space.dim() < a.dim()) {
    throw DimensionMismatchError("embed: target dim smaller than source");
  }
  Matrix m = Matrix::Zero(space.dim(), space.dim());
  m.topLeftCorner(a.dim(), a.dim()) = a.matrix();
  return {space, m};
}

double fidelity(const DensityOperator& rho, const StateVector& psi) {
  return expectation(rho.op(), psi).real() / psi.amplitudes.squaredNorm();
}

}  // namespace qcomm
