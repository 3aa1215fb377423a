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

#include <cmath>

#include "qcomm/errors.hpp"
#include "qcomm/povm.hpp"
#include "qcomm/quadrature.hpp"
#include "qcomm/states.hpp"

using namespace qcomm;

namespace {

DensityOperator coherent_rho(const FockSpace& s, Complex a) {
  return DensityOperator::from_state(coherent_state(s, a));
}

}  // namespace

TEST_CASE("number measurement is an exact resolution of the identity") {
  FockSpace s(10);
  const MeasurementFamily fam = number_measurement(s);
  CHECK(fam.size() == 10);
  CHECK(fam.certified_dim == 10);
  CHECK((fam.weighted_sum() - Matrix::Identity(10, 10)).cwiseAbs().maxCoeff() == 0.0);
  const ValidationReport rep = validate_family(fam);
  CHECK(rep.passed());
  CHECK(rep.completeness_defect == 0.0);
}

TEST_CASE("heterodyne elements are scaled coherent projectors") {
  FockSpace s(30);
  const MeasurementFamily fam = heterodyne_measurement(s);
  CHECK(fam.size() == 41 * 41);
  CHECK(fam.outcome_names == std::vector<std::string>{"re_beta", "im_beta"});
  CHECK(3 * fam.certified_dim >= 30);
  CHECK(fam.completeness_defect < 1e-4);
  const double area = 0.3 * 0.3;
  const DensityOperator rho = coherent_rho(s, Complex(0.5, -0.2));
  for (std::size_t idx : {std::size_t(840), std::size_t(800), std::size_t(1000)}) {
    const auto& e = fam.elements[idx];
    CHECK(std::abs(e.weight - area) < 1e-15);
    const Complex beta(e.outcome.coords[0], e.outcome.coords[1]);
    const double ref = std::exp(-std::norm(beta - Complex(0.5, -0.2))) / kPi;
    CHECK(std::abs(probability(e, rho) - ref) < 1e-10);
  }
  CHECK(validate_family(fam).passed());
}

TEST_CASE("heterodyne completeness fixes the phase-space measure") {
  // sum_beta dA <0|beta><beta|0> approaches pi, i.e. the element measure is
  // pi^-1 per d^2 beta, equivalently (2 pi)^-1 per dq dp.
  FockSpace s(20);
  const MeasurementFamily fam = heterodyne_measurement(s);
  double sum = 0.0;
  for (const auto& e : fam.elements) sum += e.weight * e.op.matrix()(0, 0).real();
  CHECK(std::abs(sum - 1.0) < 1e-6);
}

TEST_CASE("a grid that is too small is rejected") {
  FockSpace s(30);
  PhaseGrid tiny{-1.0, 1.0, -1.0, 1.0, 5, 5};
  try {
    heterodyne_measurement(s, tiny);
    FAIL("expected a grid coverage error");
  } catch (const GridCoverageError& e) {
    CHECK(e.defect() > 1e-4);
  }
}

TEST_CASE("noisy heterodyne reproduces the broadened Gaussian") {
  FockSpace s(40);
  const double nbar = 0.5;
  const MeasurementFamily fam =
      noisy_heterodyne_measurement(s, nbar, PhaseGrid{-8, 8, -8, 8, 41, 41});
  const Complex alpha(1.0, 0.5);
  const DensityOperator rho = coherent_rho(s, alpha);
  double err = 0.0;
  for (const auto& e : fam.elements) {
    const Complex beta(e.outcome.coords[0], e.outcome.coords[1]);
    const double ref = std::exp(-std::norm(beta - alpha) / (nbar + 1.0)) / (kPi * (nbar + 1.0));
    err = std::max(err, std::abs(probability(e, rho) - ref));
  }
  CHECK(err < 1e-6);
  CHECK(validate_family(fam).passed());
  CHECK_THROWS_AS(noisy_heterodyne_measurement(s, -1.0), DomainError);
}

TEST_CASE("position measurement samples the wavefunction") {
  FockSpace s(20);
  const MeasurementFamily fam = position_measurement(s);
  CHECK(fam.certified_dim == 20);
  CHECK(fam.completeness_defect < 1e-10);
  const StateVector psi = coherent_state(s, Complex(0.6, 0.3));
  const DensityOperator rho = DensityOperator::from_state(psi);
  for (std::size_t k = 20; k < 40; k += 5) {
    const auto& e = fam.elements[k];
    const double x = e.outcome.coords[0];
    CHECK(std::abs(probability(e, rho) - std::norm(quadrature_wavefunction(psi, x))) < 1e-12);
  }
  const MeasurementFamily mom = momentum_measurement(s);
  for (std::size_t k = 20; k < 40; k += 5) {
    const auto& e = mom.elements[k];
    const double p = e.outcome.coords[0];
    CHECK(std::abs(probability(e, rho) - std::norm(momentum_wavefunction(psi, p))) < 1e-12);
  }
}

TEST_CASE("Gaussian position measurement blurs the position density") {
  // For the vacuum: sqrt(eta/pi) int exp(-eta (qR - q)^2) pi^-1/2 exp(-q^2) dq
  //   = sqrt(eta / (pi (1 + eta))) exp(-eta qR^2 / (1 + eta)).
  FockSpace s(20);
  const double eta = 1.5;
  const MeasurementFamily fam = gaussian_position_measurement(s, eta);
  CHECK(fam.completeness_defect < 1e-4);
  const DensityOperator vac = DensityOperator::from_state(number_state(s, 0));
  for (const auto& e : fam.elements) {
    const double q = e.outcome.coords[0];
    const double ref = std::sqrt(eta / (kPi * (1.0 + eta))) * std::exp(-eta * q * q / (1.0 + eta));
    CHECK(std::abs(probability(e, vac) - ref) < 1e-8);
  }
  CHECK_THROWS_AS(gaussian_position_measurement(s, 1.0, RealGrid{-1.0, 1.0, 11}), GridCoverageError);
}

TEST_CASE("sequential composition keeps completeness") {
  FockSpace big(45), s(15);
  const MeasurementFamily first = gaussian_position_measurement(big, 1.0, RealGrid{-12, 12, 81}, 45, 15);
  const MeasurementFamily second = momentum_measurement(big, 45);
  const MeasurementFamily seq = compose_sequential(first, second, s);
  CHECK(seq.size() == first.size() * second.size());
  CHECK(seq.outcome_names == std::vector<std::string>{"q_R", "p"});
  CHECK(seq.certified_dim == 15);
  CHECK(seq.completeness_defect < 1e-8);
  const MeasurementFamily full = compose_sequential(first, second);
  CHECK((compress(full, s).elements[1234].op.matrix() - seq.elements[1234].op.matrix())
            .cwiseAbs()
            .maxCoeff() < 1e-12);
}

TEST_CASE("select and certify") {
  FockSpace s(12);
  const MeasurementFamily fam = number_measurement(s);
  const MeasurementFamily half =
      select(fam, [](const MeasurementElement& e) { return e.outcome.coords[0] < 6; });
  CHECK(half.size() == 6);
  CHECK(std::abs(half.completeness_defect - 1.0) < 1e-15);
  MeasurementFamily copy = half;
  certify(copy, 12);
  CHECK(copy.certified_dim == 6);
  CHECK(copy.completeness_defect == 0.0);
  CHECK(completeness_defect(fam, 12) == 0.0);
}

TEST_CASE("validation flags a non-positive element") {
  FockSpace s(3);
  MeasurementFamily fam = number_measurement(s);
  Matrix m = fam.elements[0].op.matrix();
  m(0, 0) = -0.5;
  fam.elements[0].op = ComplexOperator(s, m);
  const ValidationReport rep = validate_family(fam);
  CHECK_FALSE(rep.elements_ok);
  CHECK(rep.worst_min_eigenvalue < -0.4);
  CHECK_FALSE(rep.passed());
}

TEST_CASE("minimally invasive update") {
  FockSpace s(10);
  const DensityOperator rho = coherent_rho(s, Complex(0.7, 0.0));
  const MeasurementFamily fam = number_measurement(s);
  const auto [post, p] = minimally_invasive_update(rho, fam.elements[2]);
  CHECK(std::abs(p - std::exp(-0.49) * std::pow(0.49, 2) / 2.0) < 1e-10);
  CHECK(std::abs(post.matrix()(2, 2).real() - 1.0) < 1e-12);
  const DensityOperator vac = DensityOperator::from_state(number_state(s, 0));
  CHECK_THROWS_AS(minimally_invasive_update(vac, fam.elements[3]), ZeroProbabilityError);
  // A gentle (heterodyne) measurement moves the state toward the outcome.
  FockSpace s30(30);
  const MeasurementFamily het = heterodyne_measurement(s30);
  const auto [post2, p2] = minimally_invasive_update(DensityOperator::from_state(number_state(s30, 0)),
                                                     het.elements[883]);
  CHECK(p2 > 0.0);
  CHECK(std::abs(post2.matrix().trace().real() - 1.0) < 1e-12);
}
