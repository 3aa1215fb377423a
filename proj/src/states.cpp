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

#include "qcomm/states.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>
#include <string>

#include <Eigen/Eigenvalues>

#include <fmt/format.h>

#include "qcomm/errors.hpp"
#include "qcomm/quadrature.hpp"

namespace qcomm {

namespace {

// Smallest dim whose coherent tail is below tol.
int coherent_required_dim(Complex alpha, double tol) {
  int d = 2;
  while (d < 100000 && coherent_tail_mass(d, alpha) > tol) d = d < 64 ? d + 1 : d + d / 8;
  return d;
}

StateVector finish_state(const FockSpace& space, const Vector& working, const char* what) {
  const int d = space.dim();
  const double total = working.squaredNorm();
  const double kept = working.head(d).squaredNorm();
  const double tail = std::max(0.0, (total - kept) / total);
  if (tail > space.tail_tolerance()) {
    throw TruncationError(fmt::format("{}: tail mass {:.3g} exceeds tolerance {:.3g}", what, tail,
                                      space.tail_tolerance()),
                          tail, 0);
  }
  Vector v = working.head(d) / std::sqrt(kept);
  return {space, v, tail};
}

}  // namespace

Vector coherent_amplitudes(int dim, Complex alpha) {
  Vector v = Vector::Zero(dim);
  const double r = std::abs(alpha);
  if (r == 0.0) {
    v(0) = 1.0;
    return v;
  }
  const double theta = std::arg(alpha);
  const double lr = std::log(r);
  for (int n = 0; n < dim; ++n) {
    const double mag = std::exp(-0.5 * r * r + n * lr - 0.5 * std::lgamma(n + 1.0));
    v(n) = std::polar(mag, n * theta);
  }
  return v;
}

double coherent_tail_mass(int dim, Complex alpha) {
  const double mu = std::norm(alpha);
  if (mu == 0.0) return 0.0;
  // Direct Poisson tail sum from n = dim upward.
  double sum = 0.0;
  const double lmu = std::log(mu);
  for (int n = dim;; ++n) {
    const double term = std::exp(-mu + n * lmu - std::lgamma(n + 1.0));
    sum += term;
    if (n > mu && term < 1e-20 * std::max(sum, 1e-300)) break;
    if (n > dim + 100000) break;
  }
  return sum;
}

StateVector coherent_state(const FockSpace& space, Complex alpha) {
  const double tail = coherent_tail_mass(space.dim(), alpha);
  if (tail > space.tail_tolerance()) {
    throw TruncationError(fmt::format("coherent_state: tail mass {:.3g} exceeds tolerance {:.3g}", tail,
                                      space.tail_tolerance()),
                          tail, coherent_required_dim(alpha, space.tail_tolerance()));
  }
  Vector v = coherent_amplitudes(space.dim(), alpha);
  v /= v.norm();
  return {space, v, tail};
}

DisplacementFactory::DisplacementFactory(int working_dim) : dim_(working_dim) {
  if (working_dim < 2) throw DomainError("DisplacementFactory: dim must be at least 2");
  // K = i(a^dag - a) is Hermitian and purely imaginary; D(r) = exp(-i r K).
  Matrix k = Matrix::Zero(dim_, dim_);
  for (int n = 1; n < dim_; ++n) {
    const double s = std::sqrt(static_cast<double>(n));
    k(n, n - 1) = Complex(0.0, s);   // i a^dag
    k(n - 1, n) = Complex(0.0, -s);  // -i a
  }
  Eigen::SelfAdjointEigenSolver<Matrix> es(k);
  u_ = es.eigenvectors();
  lambda_ = es.eigenvalues();
}

Matrix DisplacementFactory::block(Complex alpha, int rows, int cols) const {
  if (rows > dim_ || cols > dim_) {
    throw DimensionMismatchError("DisplacementFactory::block: block exceeds working dim");
  }
  const double r = std::abs(alpha);
  const double theta = r == 0.0 ? 0.0 : std::arg(alpha);
  Vector phases(dim_);
  for (int i = 0; i < dim_; ++i) phases(i) = std::polar(1.0, -r * lambda_(i));
  Matrix b = u_.topRows(rows) * phases.asDiagonal() * u_.topRows(cols).adjoint();
  if (theta != 0.0) {
    for (int m = 0; m < rows; ++m) {
      for (int n = 0; n < cols; ++n) b(m, n) *= std::polar(1.0, theta * (m - n));
    }
  }
  return b;
}

std::shared_ptr<const DisplacementFactory> shared_displacement_factory(int working_dim) {
  static std::mutex mu;
  static std::map<int, std::shared_ptr<const DisplacementFactory>> cache;
  {
    std::lock_guard<std::mutex> lock(mu);
    auto it = cache.find(working_dim);
    if (it != cache.end()) return it->second;
  }
  auto f = std::make_shared<const DisplacementFactory>(working_dim);
  std::lock_guard<std::mutex> lock(mu);
  return cache.emplace(working_dim, std::move(f)).first->second;
}

Vector DisplacementFactory::apply(Complex alpha, const Vector& v) const {
  if (v.size() != dim_) throw DimensionMismatchError("DisplacementFactory::apply: length mismatch");
  const double r = std::abs(alpha);
  const double theta = r == 0.0 ? 0.0 : std::arg(alpha);
  Vector x(dim_);
  for (int n = 0; n < dim_; ++n) x(n) = std::polar(1.0, -theta * n) * v(n);
  Vector y = u_.adjoint() * x;
  for (int i = 0; i < dim_; ++i) y(i) *= std::polar(1.0, -r * lambda_(i));
  x = u_ * y;
  for (int n = 0; n < dim_; ++n) x(n) *= std::polar(1.0, theta * n);
  return x;
}

int displacement_working_dim(int dim, double max_abs_alpha) {
  const double s = std::sqrt(static_cast<double>(dim)) + max_abs_alpha + 6.0;
  return std::min(600, std::max(dim, static_cast<int>(std::ceil(s * s))));
}

ComplexOperator displacement_operator(const FockSpace& space, Complex alpha) {
  return {space, shared_displacement_factory(space.dim())->block(alpha, space.dim(), space.dim())};
}

int quadrature_working_dim(int dim) { return std::max(3 * dim, 120); }

namespace {

Vector squeezed_working(int working, double eta) {
  const QuadratureBasis& b = *shared_quadrature_basis(working);
  const double pref = std::pow(eta / kPi, 0.25);
  RealVector coeff(working);  // sqrt(lambda_k) f(x_k)
  for (int k = 0; k < working; ++k) {
    const double x = b.nodes(k);
    coeff(k) = std::sqrt(b.christoffel(k)) * pref * std::exp(-0.5 * eta * x * x);
  }
  RealVector c = b.vectors * coeff;
  return c.cast<Complex>();
}

}  // namespace

StateVector squeezed_ground_state(const FockSpace& space, double eta) {
  if (!(eta > 0.0) || !std::isfinite(eta)) {
    throw DomainError("squeezed_ground_state: eta must be positive");
  }
  const int working = quadrature_working_dim(space.dim());
  return finish_state(space, squeezed_working(working, eta), "squeezed_ground_state");
}

StateVector displaced_squeezed_state(const FockSpace& space, double p_r, double q_r,
                                     double eta) {
  if (!(eta > 0.0) || !std::isfinite(eta)) {
    throw DomainError("displaced_squeezed_state: eta must be positive");
  }
  const Complex alpha(q_r / std::sqrt(2.0), p_r / std::sqrt(2.0));
  const int working = std::max(quadrature_working_dim(space.dim()),
                               displacement_working_dim(space.dim(), std::abs(alpha)));
  Vector c = squeezed_working(working, eta);
  Vector shifted = shared_displacement_factory(working)->apply(alpha, c);
  return finish_state(space, shifted, "displaced_squeezed_state");
}

}  // namespace qcomm
