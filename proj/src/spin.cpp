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

#include "qcomm/spin.hpp"

#include <cmath>
#include <string>

#include "qcomm/errors.hpp"

namespace qcomm {

Direction::Direction(double theta_in, double phi_in) : theta(theta_in), phi(phi_in) {
  if (!(theta >= -1e-12 && theta <= kPi + 1e-12) || !std::isfinite(phi)) {
    throw DomainError("Direction: theta must lie in [0, pi]");
  }
  theta = std::min(std::max(theta, 0.0), kPi);
  if (std::sin(theta) < 1e-12) {
    phi = 0.0;
  } else {
    phi = std::fmod(phi, 2.0 * kPi);
    if (phi < 0.0) phi += 2.0 * kPi;
    if (phi >= 2.0 * kPi) phi = 0.0;
  }
}

Direction Direction::from_cartesian(const Eigen::Vector3d& v) {
  const double n = v.norm();
  if (!(n > 0.0)) throw DomainError("Direction::from_cartesian: zero vector");
  const double z = std::max(-1.0, std::min(1.0, v.z() / n));
  return {std::acos(z), std::atan2(v.y(), v.x())};
}

Eigen::Vector3d Direction::cartesian() const {
  return {std::sin(theta) * std::cos(phi), std::sin(theta) * std::sin(phi), std::cos(theta)};
}

Direction Direction::antipode() const { return {kPi - theta, kPi + phi}; }

const std::array<SpinMatrix, 3>& pauli() {
  static const std::array<SpinMatrix, 3> s = [] {
    std::array<SpinMatrix, 3> m;
    m[0] << 0, 1, 1, 0;
    m[1] << 0, Complex(0, -1), Complex(0, 1), 0;
    m[2] << 1, 0, 0, -1;
    return m;
  }();
  return s;
}

SpinMatrix sigma_along(const Eigen::Vector3d& r) {
  const auto& s = pauli();
  return r.x() * s[0] + r.y() * s[1] + r.z() * s[2];
}

SpinState spin_state(const Direction& dir) {
  SpinState s;
  s.amplitudes << std::cos(0.5 * dir.theta), std::polar(std::sin(0.5 * dir.theta), dir.phi);
  return s;
}

SpinState antipodal_state(const Direction& dir) {
  SpinState s;
  s.amplitudes << std::sin(0.5 * dir.theta), -std::polar(std::cos(0.5 * dir.theta), dir.phi);
  return s;
}

OverlapProbability overlap_probability(const Direction& a, const Direction& b) {
  OverlapProbability r;
  r.amplitude_route = std::norm(spin_state(a).amplitudes.dot(spin_state(b).amplitudes));
  r.formula_route = 0.5 * (1.0 + a.cartesian().dot(b.cartesian()));
  return r;
}

FockSpace spin_space() { return FockSpace(2, 0.0); }

DirectionScheme direction_scheme(const std::vector<Direction>& dirs) {
  if (dirs.empty()) throw SchemeError("direction_scheme: no directions");
  Eigen::Vector3d sum = Eigen::Vector3d::Zero();
  for (const auto& d : dirs) sum += d.cartesian();
  if (sum.norm() > 1e-9) {
    throw SchemeError("direction_scheme: direction vectors sum to length " +
                      std::to_string(sum.norm()) + ", expected 0");
  }
  const FockSpace space = spin_space();
  const double n = static_cast<double>(dirs.size());
  DirectionScheme scheme{dirs, {}, {space, "spin_direction", {"x", "y", "z"}, {}, 2, 0.0}};
  for (std::size_t i = 0; i < dirs.size(); ++i) {
    const Eigen::Vector3d r = dirs[i].cartesian();
    const SpinMatrix base = SpinMatrix::Identity() + sigma_along(r);
    scheme.states.emplace_back(ComplexOperator(space, Matrix(base / 2.0)),
                               "dir" + std::to_string(i));
    scheme.measurement.elements.push_back(
        {Outcome{{r.x(), r.y(), r.z()}}, ComplexOperator(space, Matrix(base / n)), 1.0});
  }
  scheme.measurement.completeness_defect = completeness_defect(scheme.measurement, 2);
  return scheme;
}

Eigen::MatrixXd scheme_probabilities(const DirectionScheme& scheme) {
  const auto& els = scheme.measurement.elements;
  Eigen::MatrixXd p(scheme.states.size(), els.size());
  for (std::size_t t = 0; t < scheme.states.size(); ++t) {
    for (std::size_t r = 0; r < els.size(); ++r) p(t, r) = probability(els[r], scheme.states[t]);
  }
  return p;
}

std::vector<Direction> regular_polygon(int n) {
  if (n < 2) throw SchemeError("regular_polygon: need at least 2 directions");
  std::vector<Direction> out;
  for (int k = 0; k < n; ++k) {
    const double a = 2.0 * kPi * k / n;
    out.push_back(Direction::from_cartesian({std::sin(a), 0.0, std::cos(a)}));
  }
  return out;
}

std::vector<Direction> tetrahedron() {
  const double s = 1.0 / std::sqrt(3.0);
  return {Direction::from_cartesian({s, s, s}), Direction::from_cartesian({s, -s, -s}),
          Direction::from_cartesian({-s, s, -s}), Direction::from_cartesian({-s, -s, s})};
}

PairMatrix kron(const SpinMatrix& a, const SpinMatrix& b) {
  PairMatrix k;
  for (int i = 0; i < 2; ++i) {
    for (int j = 0; j < 2; ++j) k.block<2, 2>(2 * i, 2 * j) = a(i, j) * b;
  }
  return k;
}

PairMatrix sigma_a(int axis) { return kron(pauli().at(axis), SpinMatrix::Identity()); }
PairMatrix sigma_b(int axis) { return kron(SpinMatrix::Identity(), pauli().at(axis)); }

PairState product_state(const SpinState& a, const SpinState& b) {
  PairState p;
  for (int i = 0; i < 2; ++i) {
    for (int j = 0; j < 2; ++j) p.amplitudes(2 * i + j) = a.amplitudes(i) * b.amplitudes(j);
  }
  return p;
}

std::map<std::string, PairState> entangled_states() {
  const double h = 1.0 / std::sqrt(2.0);
  std::map<std::string, PairState> m;
  m["psi_plus"].amplitudes << 0, h, h, 0;
  m["psi_minus"].amplitudes << 0, h, -h, 0;
  m["psi_S"].amplitudes << h, 0, 0, h;
  m["psi_D"].amplitudes << h, 0, 0, -h;
  return m;
}

double singlet_joint_probability(const Direction& a, const Direction& b) {
  const PairState rr = product_state(spin_state(a), spin_state(b));
  const PairState singlet = entangled_states().at("psi_minus");
  return std::norm(rr.amplitudes.dot(singlet.amplitudes));
}

SignAgreement singlet_sign_agreement(const Direction& a, const Direction& b) {
  const PairState singlet = entangled_states().at("psi_minus");
  const SpinState ua = spin_state(a), da = antipodal_state(a);
  const SpinState ub = spin_state(b), db = antipodal_state(b);
  auto prob = [&](const SpinState& x, const SpinState& y) {
    return std::norm(product_state(x, y).amplitudes.dot(singlet.amplitudes));
  };
  return {prob(ua, ub) + prob(da, db), prob(ua, db) + prob(da, ub)};
}

}  // namespace qcomm
