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

#include <functional>
#include <string>
#include <utility>
#include <vector>

#include "qcomm/operators.hpp"

namespace qcomm {

/// Outcome label. Discrete counts use one coordinate, phase-space points two,
/// directions three; sequential outcomes concatenate. Ordering is
/// lexicographic.
struct Outcome {
  std::vector<double> coords;

  bool operator<(const Outcome& o) const { return coords < o.coords; }
  bool operator==(const Outcome& o) const { return coords == o.coords; }
};

struct MeasurementElement {
  Outcome outcome;
  ComplexOperator op;
  double weight = 1.0;
};

/// Weighted measurement family. `certified_dim` is the size of the low-level
/// subspace on which completeness is asserted; `completeness_defect` is the
/// max-entry deviation of sum(weight * op) from I there.
struct MeasurementFamily {
  FockSpace space;
  std::string kind;
  std::vector<std::string> outcome_names;
  std::vector<MeasurementElement> elements;
  int certified_dim = 0;
  double completeness_defect = 0.0;

  std::size_t size() const { return elements.size(); }
  /// sum_r weight(r) * op(r).
  Matrix weighted_sum() const;
};

/// Rectangular grid of complex amplitudes beta (heterodyne outcomes).
struct PhaseGrid {
  double re_min = -6.0, re_max = 6.0;
  double im_min = -6.0, im_max = 6.0;
  int n_re = 41, n_im = 41;

  double cell_area() const;
  Complex node(int i, int j) const;
};

/// Uniform real grid with `n` nodes on [min, max].
struct RealGrid {
  double min = -10.0, max = 10.0;
  int n = 201;

  double spacing() const;
  double node(int i) const;
};

struct ValidationReport {
  std::vector<double> hermiticity_defects;
  std::vector<double> min_eigenvalues;
  double max_hermiticity_defect = 0.0;
  double worst_min_eigenvalue = 0.0;
  int certified_dim = 0;
  double completeness_defect = 0.0;
  bool elements_ok = true;
  bool complete = true;

  bool passed() const { return elements_ok && complete; }
};

MeasurementFamily number_measurement(const FockSpace& space);

/// Elements pi^{-1}|beta><beta| on the grid nodes with cell-area weights.
/// Throws GridCoverageError when fewer than dim/3 levels are certified.
MeasurementFamily heterodyne_measurement(const FockSpace& space, const PhaseGrid& grid = {});

/// Coherent measurement seen through additive Gaussian noise nbar:
/// (pi^2 nbar)^{-1} int d^2xi exp(-|xi - beta|^2 / nbar) |xi><xi|, evaluated
/// by a Gauss-Hermite product rule of the given order.
MeasurementFamily noisy_heterodyne_measurement(const FockSpace& space, double nbar,
                                               const PhaseGrid& grid = {},
                                               int gh_order = 21);

/// Exact position measurement |x_k><x_k| on the discrete position basis of
/// a working space, compressed to `space`. working_dim <= 0 selects the
/// default padding.
MeasurementFamily position_measurement(const FockSpace& space, int working_dim = 0);
MeasurementFamily momentum_measurement(const FockSpace& space, int working_dim = 0);

/// sqrt(eta/pi) exp(-eta (q_R - q)^2) for q_R on the grid. Throws
/// GridCoverageError when fewer than `min_certified` levels are certified
/// (default: a third of the space).
MeasurementFamily gaussian_position_measurement(const FockSpace& space, double eta,
                                                const RealGrid& grid = {},
                                                int working_dim = 0, int min_certified = -1);

/// sqrt(s1) s2 sqrt(s1) over the outcome product; weights multiply.
MeasurementFamily compose_sequential(const MeasurementFamily& first,
                                     const MeasurementFamily& second);
/// As above, compressing each composed element onto `target` as it is
/// formed (the square roots are still taken on the full space).
MeasurementFamily compose_sequential(const MeasurementFamily& first,
                                     const MeasurementFamily& second, const FockSpace& target);

/// Compresses every element onto the first `space.dim()` levels.
MeasurementFamily compress(const MeasurementFamily& fam, const FockSpace& space);

/// Keeps the elements for which `keep` returns true; completeness is
/// recomputed on the original certified subspace.
MeasurementFamily select(const MeasurementFamily& fam,
                         const std::function<bool(const MeasurementElement&)>& keep);

/// Recomputes certified_dim (largest prefix with defect below tol, never
/// above `max_dim`) and the defect on it.
void certify(MeasurementFamily& fam, int max_dim, double tol = tol::kCompleteness);

/// Max-entry deviation of the weighted sum from I on the first `dim` levels.
double completeness_defect(const MeasurementFamily& fam, int dim);

ValidationReport validate_family(const MeasurementFamily& fam);

/// Trace(op * rho), real part.
double probability(const MeasurementElement& elem, const DensityOperator& rho);

/// (sqrt(s) rho sqrt(s) / P, P). Throws ZeroProbabilityError when
/// P <= prob_floor.
std::pair<DensityOperator, double> minimally_invasive_update(const DensityOperator& rho,
                                                             const MeasurementElement& elem);

}  // namespace qcomm
