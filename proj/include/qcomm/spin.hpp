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

#include <array>
#include <map>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "qcomm/operators.hpp"
#include "qcomm/povm.hpp"

namespace qcomm {

using SpinMatrix = Eigen::Matrix2cd;
using PairMatrix = Eigen::Matrix4cd;

/// Unit vector in polar coordinates. phi is reduced to [0, 2 pi) and set to
/// 0 at the poles (sin theta < 1e-12).
struct Direction {
  double theta = 0.0;
  double phi = 0.0;

  Direction() = default;
  Direction(double theta_in, double phi_in);

  static Direction from_cartesian(const Eigen::Vector3d& v);
  Eigen::Vector3d cartesian() const;
  /// (pi - theta, pi + phi).
  Direction antipode() const;
};

struct SpinState {
  Eigen::Vector2cd amplitudes;
};

/// Amplitudes in the basis up-up, up-down, down-up, down-down (first
/// arrow is particle A).
struct PairState {
  Eigen::Vector4cd amplitudes;
};

/// (sigma_x, sigma_y, sigma_z).
const std::array<SpinMatrix, 3>& pauli();

/// r . sigma.
SpinMatrix sigma_along(const Eigen::Vector3d& r);

/// cos(theta/2)|up> + sin(theta/2) e^{i phi}|down>.
SpinState spin_state(const Direction& dir);
/// sin(theta/2)|up> - cos(theta/2) e^{i phi}|down>, orthogonal to spin_state(dir).
SpinState antipodal_state(const Direction& dir);

struct OverlapProbability {
  double amplitude_route = 0.0;  // |<r|r'>|^2
  double formula_route = 0.0;    // (1 + r.r')/2
};
OverlapProbability overlap_probability(const Direction& a, const Direction& b);

/// States (I + r.sigma)/2 and measurement elements (I + r'.sigma)/N on the
/// two-level space.
struct DirectionScheme {
  std::vector<Direction> directions;
  std::vector<DensityOperator> states;
  MeasurementFamily measurement;
};

/// Throws SchemeError unless the direction vectors sum to zero within 1e-9.
DirectionScheme direction_scheme(const std::vector<Direction>& dirs);

/// P(r'|r) with rows indexed by the sent direction.
Eigen::MatrixXd scheme_probabilities(const DirectionScheme& scheme);

/// N directions evenly spaced on the great circle in the x-z plane,
/// starting at +z.
std::vector<Direction> regular_polygon(int n);
std::vector<Direction> tetrahedron();

/// Operators on the pair: sigma_i (x) I and I (x) sigma_i.
PairMatrix sigma_a(int axis);
PairMatrix sigma_b(int axis);
PairMatrix kron(const SpinMatrix& a, const SpinMatrix& b);
PairState product_state(const SpinState& a, const SpinState& b);

/// psi_plus, psi_minus (singlet), psi_S, psi_D.
std::map<std::string, PairState> entangled_states();

/// |<r r'|psi_minus>|^2 by explicit overlap.
double singlet_joint_probability(const Direction& a, const Direction& b);

/// Probability that the two outcomes carry the same sign (both along their
/// directions or both against), and opposite signs.
struct SignAgreement {
  double same = 0.0;
  double opposite = 0.0;
};
SignAgreement singlet_sign_agreement(const Direction& a, const Direction& b);

/// FockSpace of dimension 2 used for single-spin operators.
FockSpace spin_space();

}  // namespace qcomm
