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

#include <iosfwd>
#include <string>
#include <vector>

#include "qcomm/operators.hpp"
#include "qcomm/povm.hpp"

namespace qcomm {

/// Conditional outcome table. `densities(t, r)` = Trace(sigma(r) rho(t));
/// the probability mass of outcome r is weights(r) * densities(t, r).
struct ConditionalTable {
  std::vector<std::string> settings;
  std::vector<Outcome> outcomes;
  std::vector<std::string> outcome_names;
  RealMatrix densities;
  RealVector weights;
  int certified_dim = 0;
  double completeness_defect = 0.0;
  /// Per setting: allowed deviation of the row sum from 1 (completeness
  /// defect + 1e-9 + the state's mass outside the certified subspace
  /// scaled by the worst deviation of the family sum there).
  RealVector row_tolerance;

  RealMatrix masses() const;
  RealVector row_sums() const;
  /// Masses with every row rescaled to sum to 1.
  RealMatrix normalized() const;
  /// True when every entry is >= -1e-12 and every row sum lies within its
  /// tolerance of 1.
  bool rows_ok() const;
};

/// Throws InvariantError when an entry is below -1e-12.
ConditionalTable build_table(const std::vector<DensityOperator>& states,
                             const MeasurementFamily& fam);

/// Plain row-stochastic matrix wrapped as a table with unit weights.
ConditionalTable table_from_matrix(const RealMatrix& p);

/// I(T;R) in bits for a row-stochastic matrix and a prior over rows.
/// Throws InvalidPriorError for a malformed prior.
double mutual_information(const RealMatrix& p, const RealVector& prior);
double mutual_information(const ConditionalTable& table, const RealVector& prior);

RealVector uniform_prior(int n);

struct CapacityOptions {
  double tolerance = 1e-9;
  int max_iters = 10000;
  /// Grid step for the exhaustive cross-check (inputs <= 3 only); 0 skips it.
  double exhaustive_resolution = 0.0;
};

struct CapacityReport {
  double capacity_bits = 0.0;
  RealVector prior;
  int iterations = 0;
  bool converged = false;
  std::string warning;
  bool has_exhaustive = false;
  double exhaustive_bits = 0.0;
  RealVector exhaustive_prior;
};

/// Blahut-Arimoto ascent over priors for a fixed row-stochastic matrix.
CapacityReport blahut_arimoto(const RealMatrix& p, const CapacityOptions& opts = {});

/// Brute-force maximization over a simplex grid (2 or 3 inputs).
CapacityReport exhaustive_capacity(const RealMatrix& p, double resolution);

/// Ascent, plus the exhaustive search when requested and feasible.
CapacityReport capacity_sweep(const ConditionalTable& table, const CapacityOptions& opts = {});

/// sum_s P(r|s) P(s|t) with s running over number states:
/// P(s|t) = <s|rho_t|s>, P(r|s) = weight(r) <s|sigma_r|s>.
RealMatrix classical_decomposition(const std::vector<DensityOperator>& states,
                                   const MeasurementFamily& fam);

/// True when every state and element is diagonal in the number basis
/// within `tol`.
bool number_diagonal(const std::vector<DensityOperator>& states, const MeasurementFamily& fam,
                     double tol = 1e-12);

/// CSV: header "setting,<outcome labels>", one row per setting with the
/// densities, 17 significant digits.
void write_table_csv(const ConditionalTable& t, std::ostream& out);
/// JSON sidecar carrying labels, outcome coordinates and weights.
std::string table_sidecar_json(const ConditionalTable& t);
ConditionalTable read_table(std::istream& csv, const std::string& sidecar_json);

std::string outcome_label(const Outcome& o, const std::vector<std::string>& names);

}  // namespace qcomm
