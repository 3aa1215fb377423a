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
#include <sstream>
#include <string>

#include "qcomm/errors.hpp"
#include "qcomm/povm.hpp"
#include "qcomm/quadrature.hpp"
#include "qcomm/states.hpp"
#include "qcomm/wigner.hpp"

using namespace qcomm;

namespace {

double laguerre(int n, double x) {
  double l0 = 1.0, l1 = 1.0 - x;
  if (n == 0) return l0;
  for (int k = 1; k < n; ++k) {
    const double l2 = ((2.0 * k + 1.0 - x) * l1 - k * l0) / (k + 1.0);
    l0 = l1;
    l1 = l2;
  }
  return l1;
}

// Number-state Wigner function (-1)^n pi^-1 exp(-r^2) L_n(2 r^2).
double number_wigner(int n, double q, double p) {
  const double r2 = q * q + p * p;
  return (n % 2 ? -1.0 : 1.0) * std::exp(-r2) * laguerre(n, 2.0 * r2) / kPi;
}

const GridSpec kSmall{-6.0, 6.0, -6.0, 6.0, 121, 121};

}  // namespace

TEST_CASE("grid geometry") {
  GridSpec g;
  CHECK(g.dq() == doctest::Approx(0.08));
  CHECK(g.q(0) == -8.0);
  CHECK(g.q(200) == doctest::Approx(8.0));
  CHECK(g.p(100) == doctest::Approx(0.0));
}

TEST_CASE("number-state Wigner functions match the Laguerre formula") {
  FockSpace s(12);
  for (int n : {0, 1, 2, 5}) {
    const WignerGrid w = wigner_of_density(DensityOperator::from_state(number_state(s, n)), kSmall);
    double err = 0.0;
    for (int i = 0; i < kSmall.nq; i += 7) {
      for (int j = 0; j < kSmall.np; j += 5) {
        err = std::max(err, std::abs(w.values(i, j) - number_wigner(n, kSmall.q(i), kSmall.p(j))));
      }
    }
    CHECK(err < 1e-12);
    CHECK(std::abs(w.integral() - 1.0) < 1e-9);
  }
  const WignerGrid one = wigner_of_density(DensityOperator::from_state(number_state(s, 1)), kSmall);
  CHECK(std::abs(one.values(60, 60) + 1.0 / kPi) < 1e-13);
  CHECK(one.min_value() < 0.0);
}

TEST_CASE("coherent and squeezed Wigner functions are the expected Gaussians") {
  FockSpace s(40);
  const double q0 = 1.2, p0 = -0.6;
  const StateVector psi = coherent_state(s, Complex(q0, p0) / std::sqrt(2.0));
  const WignerGrid w = wigner_of_density(DensityOperator::from_state(psi));
  const WignerGrid ref = gaussian_wigner(p0, q0, 0.0);
  CHECK((w.values - ref.values).cwiseAbs().maxCoeff() < 1e-12);

  const WignerGrid sq = wigner_of_density(DensityOperator::from_state(squeezed_ground_state(s, 2.0)));
  CHECK((sq.values - squeezed_vacuum_wigner(2.0).values).cwiseAbs().maxCoeff() < 1e-9);
}

TEST_CASE("marginals reproduce the quadrature densities") {
  FockSpace s(20);
  const DensityOperator rho = DensityOperator::from_state(coherent_state(s, Complex(0.4, 0.9)));
  const WignerGrid w = wigner_of_density(rho);
  const RealVector qm = q_marginal(w);
  const RealVector pm = p_marginal(w);
  for (int i = 40; i < 160; i += 17) {
    CHECK(std::abs(qm(i) - position_density(rho, w.grid.q(i))) < 1e-10);
    CHECK(std::abs(pm(i) - momentum_density(rho, w.grid.p(i))) < 1e-10);
  }
}

TEST_CASE("overlap of Wigner functions is the trace product") {
  FockSpace s(20);
  const DensityOperator a = DensityOperator::from_state(coherent_state(s, Complex(0.5, 0.0)));
  const DensityOperator b = DensityOperator::from_state(number_state(s, 2));
  const double tr = trace_product(a.op(), b.op()).real();
  CHECK(std::abs(overlap(wigner_of_density(a), wigner_of_density(b)) - tr / (2.0 * kPi)) < 1e-12);
  // A measurement element uses unit normalization: overlap gives Trace(sigma rho).
  const MeasurementFamily het = heterodyne_measurement(s);
  const auto& e = het.elements[883];
  CHECK(std::abs(overlap(wigner_of_measurement(e), wigner_of_density(a)) - probability(e, a)) <
        1e-12);
  // Identity on the space overlaps to 1 with any state in it.
  const WignerGrid id = wigner_of_measurement(ComplexOperator::identity(s));
  CHECK(std::abs(overlap(id, wigner_of_density(b)) - 1.0) < 1e-10);
  CHECK_THROWS_AS(overlap(wigner_of_density(a), wigner_of_density(a, kSmall)),
                  DimensionMismatchError);
}

TEST_CASE("states reaching the grid boundary are rejected") {
  FockSpace s(60);
  const DensityOperator far = DensityOperator::from_state(coherent_state(s, Complex(5.0, 0.0)));
  CHECK_THROWS_AS(wigner_of_density(far), GridCoverageError);
}

TEST_CASE("P distribution convolved with the vacuum gives the Wigner function") {
  // Thermal noise nbar: P is a Gaussian of variance nbar per axis (density per dq dp).
  const double nbar = 0.8;
  const GridSpec src{-9.0, 9.0, -9.0, 9.0, 181, 181};
  WignerGrid p{src, RealMatrix(src.nq, src.np)};
  for (int i = 0; i < src.nq; ++i) {
    for (int j = 0; j < src.np; ++j) {
      const double r2 = std::pow(src.q(i) - 1.0, 2) + std::pow(src.p(j) + 0.5, 2);
      p.values(i, j) = std::exp(-r2 / (2.0 * nbar)) / (2.0 * kPi * nbar);
    }
  }
  const PConversion conv = p_distribution_to_wigner(p);
  CHECK(conv.classical);
  CHECK((conv.wigner.values - gaussian_wigner(-0.5, 1.0, nbar).values).cwiseAbs().maxCoeff() <
        1e-9);
  p.values(3, 3) = -1e-6;
  CHECK_FALSE(p_distribution_to_wigner(p).classical);
}

TEST_CASE("csv and binary writers") {
  const GridSpec g{-1.0, 1.0, -2.0, 2.0, 3, 5};
  const WignerGrid w = gaussian_wigner(0.1, -0.2, 0.3, g);
  std::ostringstream csv;
  write_csv(w, csv);
  const std::string text = csv.str();
  CHECK(text.rfind("q,p,value\n", 0) == 0);
  CHECK(std::count(text.begin(), text.end(), '\n') == 1 + 15);
  CHECK(text.find("\r") == std::string::npos);
  std::stringstream bin;
  write_binary(w, bin);
  const WignerGrid back = read_binary(bin);
  CHECK(back.grid == g);
  CHECK(back.values == w.values);
}
