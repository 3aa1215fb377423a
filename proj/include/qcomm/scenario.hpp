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

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "qcomm/info.hpp"
#include "qcomm/povm.hpp"
#include "qcomm/wigner.hpp"

namespace qcomm {

/// Transmitter settings. Each entry of `settings` parameterizes one state:
///   number             [N]
///   coherent           [re_alpha, im_alpha]
///   squeezed           [eta]
///   displaced_squeezed [p, q, eta]
///   spin_directions    [theta, phi]
/// spin_polygon generates `polygon` directions; singlet has one setting.
struct StateSpec {
  std::string kind;
  std::vector<std::vector<double>> settings;
  int polygon = 0;
};

/// Path between transmitter and receiver. `cuts` lists the cut fractions
/// f at which the path is split (0: S at the transmitter).
struct ChannelSpec {
  std::string kind = "none";
  double param = 1.0;
  std::vector<double> cuts{1.0};
};

struct MeasurementSpec {
  std::string kind;
  PhaseGrid phase_grid;
  RealGrid real_grid;
  double nbar = 0.0;
  double eta = 1.0;
  int working_dim = 0;
  int gh_order = 21;
  int polygon = 0;
  std::vector<std::vector<double>> directions;
  /// spin_pair: angle in degrees between the two analyzers (x-z plane).
  double angle_deg = 0.0;
};

/// Named check with its numeric parameters, e.g. binomial_peak with
/// {"outcome": 20, "peak_lo": 39, ...}.
struct CheckSpec {
  std::string kind;
  std::map<std::string, double> params;
  double tolerance = 0.0;
};

/// One fully specified configuration; a sweep expands into several.
struct ScenarioCase {
  std::string label;
  StateSpec states;
  ChannelSpec channel;
  MeasurementSpec measurement;
};

struct Scenario {
  std::string name;
  std::string description;
  /// Closed form or identity the scenario reproduces.
  std::string reproduces;
  bool spin = false;
  FockSpace space;
  std::vector<ScenarioCase> cases;
  std::vector<CheckSpec> checks;
  /// Any of "table", "wigner".
  std::vector<std::string> outputs;
};

/// Parses and validates a scenario document. Throws ConfigError.
Scenario parse_scenario(const std::string& json_text);
Scenario load_scenario(const std::filesystem::path& file);

struct CheckResult {
  std::string name;
  bool passed = false;
  double value = 0.0;
  double tolerance = 0.0;
  std::string detail;
};

/// Table for one case at one cut fraction.
struct ScenarioRun {
  std::string label;
  std::size_t case_index = 0;
  double cut = 0.0;
  std::string family_kind;
  ValidationReport validation;
  double max_tail_mass = 0.0;
  ConditionalTable table;
};

struct ScenarioResult {
  std::string name;
  std::vector<ScenarioRun> runs;
  std::vector<CheckResult> checks;
  /// Wigner grids of the first case's states, when requested.
  std::vector<WignerGrid> wigner;
  bool passed() const;
};

/// Runs every case at every cut and evaluates the generic and named
/// checks. Library errors raised while running are recorded as a failed
/// "execution" check.
ScenarioResult run_scenario(const Scenario& s);

/// Machine-readable report (schema_version 1).
std::string report_json(const Scenario& s, const ScenarioResult& r);

/// Writes report.json plus the requested artifacts into `dir`.
void write_artifacts(const Scenario& s, const ScenarioResult& r,
                     const std::filesystem::path& dir);

struct CatalogEntry {
  std::string name;
  std::string json;
};

/// Scenarios bundled with the library, sorted by name.
const std::vector<CatalogEntry>& catalog();
std::vector<std::string> list_scenarios();
/// Human-readable summary. Throws ConfigError listing the valid names for
/// an unknown scenario.
std::string describe(const std::string& name);
/// Bundled scenario by name. Throws ConfigError like describe().
Scenario bundled_scenario(const std::string& name);

}  // namespace qcomm
