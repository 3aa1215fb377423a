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

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>

#include "qcomm/channels.hpp"
#include "qcomm/info.hpp"
#include "qcomm/operators.hpp"
#include "qcomm/wigner.hpp"

using namespace qcomm;

namespace {

// Random density matrix supported on the lowest `k` levels of `dim`.
Matrix random_density(std::mt19937& rng, int dim, int k) {
  std::normal_distribution<double> g;
  Matrix a = Matrix::Zero(dim, k);
  for (int i = 0; i < k; ++i)
    for (int j = 0; j < k; ++j) a(i, j) = Complex(g(rng), g(rng));
  Matrix rho = a * a.adjoint();
  return rho / rho.trace().real();
}

// Random positive operator with entries of order one.
Matrix random_effect(std::mt19937& rng, int dim, int k) {
  return random_density(rng, dim, k) * static_cast<double>(k);
}

double tr_real(const Matrix& a, const Matrix& b) { return (a * b).trace().real(); }

}  // namespace

TEST_CASE("channels preserve trace and positivity") {
  std::mt19937 rng(20261018);
  const int dim = 40;
  const std::vector<BandChannel> chans{compile(LossChannel(0.3), dim), compile(LossChannel(0.9), dim),
                                       compile(GainChannel(1.5), dim),
                                       compile(NoiseChannel(0.25), dim)};
  for (int trial = 0; trial < 5; ++trial) {
    const Matrix rho = random_density(rng, dim, 4);
    for (const auto& ch : chans) {
      const Matrix out = ch.apply(rho);
      CHECK(std::abs(out.trace().real() - 1.0) < 1e-8);
      CHECK(hermiticity_defect(out) < 1e-12);
      CHECK(min_eigenvalue(out) > -1e-12);
    }
  }
}

TEST_CASE("adjoint duality holds for random operators") {
  std::mt19937 rng(7);
  const int dim = 25;
  const std::vector<BandChannel> chans{compile(LossChannel(0.4), dim), compile(GainChannel(2.0), dim),
                                       compile(NoiseChannel(1.0), dim)};
  for (int trial = 0; trial < 5; ++trial) {
    const Matrix rho = random_density(rng, dim, dim);
    const Matrix sigma = random_effect(rng, dim, dim);
    for (const auto& ch : chans) {
      const double lhs = tr_real(sigma, ch.apply(rho));
      const double rhs = tr_real(ch.adjoint(sigma), rho);
      CHECK(std::abs(lhs - rhs) < 1e-11 * std::max(1.0, std::abs(lhs)));
    }
  }
}

TEST_CASE("probabilities do not depend on the cut") {
  std::mt19937 rng(99);
  const int dim = 60;
  const std::vector<double> cuts{0.0, 0.2, 0.5, 0.8, 1.0};
  for (int trial = 0; trial < 4; ++trial) {
    const Matrix rho = random_density(rng, dim, 4);
    const Matrix sigma = random_effect(rng, dim, 5);
    auto spread = [&](auto ch) {
      double lo = 1e300, hi = -1e300;
      for (double f : cuts) {
        const auto [st, rs] = split(ch, f);
        const double v = tr_real(compile(rs, dim).adjoint(sigma), compile(st, dim).apply(rho));
        lo = std::min(lo, v);
        hi = std::max(hi, v);
      }
      return hi - lo;
    };
    CHECK(spread(LossChannel(0.35)) < 1e-12);
    CHECK(spread(GainChannel(1.8)) < 1e-12);
    CHECK(spread(NoiseChannel(0.3)) < 1e-8);
  }
}

TEST_CASE("mutual information stays within its bounds") {
  std::mt19937 rng(3);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int trial = 0; trial < 50; ++trial) {
    const int rows = 2 + trial % 4;
    const int cols = 2 + (trial / 4) % 5;
    RealMatrix p(rows, cols);
    for (int i = 0; i < rows; ++i)
      for (int j = 0; j < cols; ++j) p(i, j) = u(rng);
    for (int i = 0; i < rows; ++i) p.row(i) /= p.row(i).sum();
    RealVector prior(rows);
    for (int i = 0; i < rows; ++i) prior(i) = u(rng) + 0.01;
    prior /= prior.sum();
    const double mi = mutual_information(p, prior);
    CHECK(mi >= -1e-12);
    CHECK(mi <= std::log2(std::min(rows, cols)) + 1e-12);
    const double cap = blahut_arimoto(p).capacity_bits;
    CHECK(cap >= mi - 1e-9);
  }
}

TEST_CASE("Wigner functions of random states integrate to one") {
  std::mt19937 rng(11);
  const FockSpace s(12);
  for (int trial = 0; trial < 3; ++trial) {
    const DensityOperator rho(ComplexOperator(s, hermitize(random_density(rng, 12, 3))));
    const WignerGrid w = wigner_of_density(rho);
    CHECK(std::abs(w.integral() - 1.0) < 1e-8);
    CHECK(std::abs(q_marginal(w).sum() * w.grid.dq() - 1.0) < 1e-8);
  }
}
