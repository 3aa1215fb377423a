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

#include "qcomm/quadrature.hpp"

#include <cmath>
#include <map>
#include <mutex>
#include <string>

#include <Eigen/Eigenvalues>

#include "qcomm/errors.hpp"

namespace qcomm {

namespace {
constexpr double kRescale = 1e150;
constexpr double kLogRescale = 345.38776394910684;  // ln(1e150)
}  // namespace

RealVector hermite_functions(double x, int count) {
  RealVector out = RealVector::Zero(count);
  if (count <= 0) return out;
  // Run the three-term recurrence on a scaled copy and keep the scale in
  // log form so that large |x| neither underflows nor overflows.
  double log_scale = -0.5 * x * x - 0.25 * std::log(kPi);
  double prev = 0.0;
  double cur = 1.0;
  double factor = std::exp(log_scale);
  out(0) = factor;
  for (int n = 0; n + 1 < count; ++n) {
    const double next = std::sqrt(2.0 / (n + 1)) * x * cur -
                        std::sqrt(static_cast<double>(n) / (n + 1)) * prev;
    prev = cur;
    cur = next;
    if (std::abs(cur) > kRescale) {
      cur /= kRescale;
      prev /= kRescale;
      log_scale += kLogRescale;
      factor = std::exp(log_scale);
    }
    if (log_scale > -700.0) {
      out(n + 1) = cur * factor;
    } else {
      out(n + 1) = cur == 0.0 ? 0.0 : std::copysign(std::exp(std::log(std::abs(cur)) + log_scale), cur);
    }
  }
  return out;
}

RealMatrix hermite_table(const RealVector& xs, int count) {
  RealMatrix t(count, xs.size());
  for (Eigen::Index j = 0; j < xs.size(); ++j) t.col(j) = hermite_functions(xs(j), count);
  return t;
}

Vector QuadratureBasis::momentum_vector(int k) const {
  Vector v(dim);
  static const Complex kPow[4] = {{1, 0}, {0, 1}, {-1, 0}, {0, -1}};
  for (int n = 0; n < dim; ++n) v(n) = kPow[n % 4] * vectors(n, k);
  return v;
}

double QuadratureBasis::gauss_weight(int k) const {
  return christoffel(k) * std::exp(-nodes(k) * nodes(k));
}

QuadratureBasis quadrature_basis(int dim) {
  if (dim < 2) throw DomainError("quadrature_basis: dim must be at least 2");
  RealVector diag = RealVector::Zero(dim);
  RealVector off(dim - 1);
  for (int k = 0; k + 1 < dim; ++k) off(k) = std::sqrt((k + 1) / 2.0);
  Eigen::SelfAdjointEigenSolver<RealMatrix> es;
  es.computeFromTridiagonal(diag, off, Eigen::EigenvaluesOnly);

  QuadratureBasis b;
  b.dim = dim;
  b.nodes = es.eigenvalues();
  // Symmetrize: the spectrum of the truncated q is exactly symmetric.
  for (int k = 0; k < dim / 2; ++k) {
    const double s = 0.5 * (b.nodes(dim - 1 - k) - b.nodes(k));
    b.nodes(k) = -s;
    b.nodes(dim - 1 - k) = s;
  }
  if (dim % 2 == 1) b.nodes(dim / 2) = 0.0;

  b.vectors = hermite_table(b.nodes, dim);
  b.christoffel.resize(dim);
  for (int k = 0; k < dim; ++k) {
    const double s = b.vectors.col(k).squaredNorm();
    b.christoffel(k) = 1.0 / s;
    b.vectors.col(k) /= std::sqrt(s);
  }
  return b;
}

std::shared_ptr<const QuadratureBasis> shared_quadrature_basis(int dim) {
  static std::mutex mu;
  static std::map<int, std::shared_ptr<const QuadratureBasis>> cache;
  {
    std::lock_guard<std::mutex> lock(mu);
    auto it = cache.find(dim);
    if (it != cache.end()) return it->second;
  }
  auto b = std::make_shared<const QuadratureBasis>(quadrature_basis(dim));
  std::lock_guard<std::mutex> lock(mu);
  return cache.emplace(dim, std::move(b)).first->second;
}

GaussHermiteRule gauss_hermite(int order) {
  const QuadratureBasis& b = *shared_quadrature_basis(order);
  GaussHermiteRule r;
  r.nodes = b.nodes;
  r.weights.resize(order);
  for (int k = 0; k < order; ++k) r.weights(k) = b.gauss_weight(k);
  return r;
}

Complex quadrature_wavefunction(const StateVector& psi, double x) {
  const RealVector h = hermite_functions(x, psi.space.dim());
  return (psi.amplitudes.array() * h.array().cast<Complex>()).sum();
}

Complex momentum_wavefunction(const StateVector& psi, double p) {
  const RealVector h = hermite_functions(p, psi.space.dim());
  static const Complex kPow[4] = {{1, 0}, {0, -1}, {-1, 0}, {0, 1}};
  Complex s = 0.0;
  for (int n = 0; n < psi.space.dim(); ++n) s += kPow[n % 4] * h(n) * psi.amplitudes(n);
  return s;
}

double position_density(const DensityOperator& rho, double x) {
  const Vector h = hermite_functions(x, rho.dim()).cast<Complex>();
  return h.dot(rho.matrix() * h).real();
}

double momentum_density(const DensityOperator& rho, double p) {
  const RealVector h = hermite_functions(p, rho.dim());
  static const Complex kPow[4] = {{1, 0}, {0, 1}, {-1, 0}, {0, -1}};
  Vector v(rho.dim());  // <n|p>
  for (int n = 0; n < rho.dim(); ++n) v(n) = kPow[n % 4] * h(n);
  return v.dot(rho.matrix() * v).real();
}

}  // namespace qcomm
