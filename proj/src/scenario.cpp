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

#include "qcomm/scenario.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include <fmt/format.h>
#include <json.hpp>

#include "qcomm/channels.hpp"
#include "qcomm/errors.hpp"
#include "qcomm/serialization.hpp"
#include "qcomm/spin.hpp"
#include "qcomm/states.hpp"

namespace qcomm {

using nlohmann::json;
using ojson = nlohmann::ordered_json;

namespace {

const std::set<std::string> kStateKinds{"number",          "coherent",     "squeezed",
                                        "displaced_squeezed", "spin_directions",
                                        "spin_polygon",    "singlet"};
const std::set<std::string> kChannelKinds{"none", "loss", "gain", "noise"};
const std::set<std::string> kMeasurementKinds{
    "number",     "heterodyne",      "noisy_heterodyne", "position",     "momentum",
    "gaussian_position", "sequential", "spin_directions", "spin_polygon", "spin_pair"};
const std::set<std::string> kCheckKinds{"binomial_peak",
                                        "binomial_law",
                                        "coherent_heterodyne",
                                        "gain_number_distribution",
                                        "gain_mean_photons",
                                        "squeezed_loss_density",
                                        "wigner_overlap",
                                        "displaced_squeezed_equivalence",
                                        "spin_scheme",
                                        "mutual_information",
                                        "singlet_correlations"};
const std::set<std::string> kOutputs{"table", "wigner"};

bool is_spin_kind(const std::string& k) { return k.rfind("spin", 0) == 0 || k == "singlet"; }

[[noreturn]] void bad(const std::string& what) { throw ConfigError("scenario: " + what); }

std::vector<double> numbers(const json& j, const std::string& where) {
  if (j.is_number()) return {j.get<double>()};
  if (!j.is_array()) bad(where + " must be a number or an array of numbers");
  std::vector<double> out;
  for (const auto& x : j) {
    if (!x.is_number()) bad(where + " must contain numbers");
    out.push_back(x.get<double>());
  }
  return out;
}

void set_path(json& doc, const std::string& key, const json& value) {
  json* cur = &doc;
  std::stringstream ss(key);
  std::string part;
  std::vector<std::string> parts;
  while (std::getline(ss, part, '.')) parts.push_back(part);
  if (parts.empty()) bad("empty sweep key");
  for (std::size_t i = 0; i + 1 < parts.size(); ++i) {
    if (!cur->contains(parts[i]) || !(*cur)[parts[i]].is_object()) {
      bad("sweep key '" + key + "' does not name an object field");
    }
    cur = &(*cur)[parts[i]];
  }
  (*cur)[parts.back()] = value;
}

PhaseGrid phase_grid(const json& j) {
  PhaseGrid g;
  if (j.contains("radius")) {
    const double r = j.at("radius").get<double>();
    g.re_min = g.im_min = -r;
    g.re_max = g.im_max = r;
  }
  if (j.contains("points")) g.n_re = g.n_im = j.at("points").get<int>();
  if (!(g.re_max > g.re_min) || g.n_re < 2) bad("phase grid needs radius > 0 and points >= 2");
  return g;
}

RealGrid real_grid(const json& j) {
  RealGrid g;
  if (j.contains("min")) g.min = j.at("min").get<double>();
  if (j.contains("max")) g.max = j.at("max").get<double>();
  if (j.contains("points")) g.n = j.at("points").get<int>();
  if (!(g.max > g.min) || g.n < 2) bad("real grid needs max > min and points >= 2");
  return g;
}

StateSpec parse_states(const json& j, const Scenario& s) {
  StateSpec st;
  st.kind = j.at("kind").get<std::string>();
  if (!kStateKinds.count(st.kind)) bad("unknown state kind '" + st.kind + "'");
  if (is_spin_kind(st.kind) != s.spin) bad("state kind '" + st.kind + "' does not match the space");
  const std::size_t arity = st.kind == "number"             ? 1
                            : st.kind == "coherent"         ? 2
                            : st.kind == "squeezed"         ? 1
                            : st.kind == "displaced_squeezed" ? 3
                            : st.kind == "spin_directions"  ? 2
                                                            : 0;
  if (st.kind == "number" && j.contains("range")) {
    const auto r = numbers(j.at("range"), "states.range");
    if (r.size() != 2 || r[0] < 0 || r[1] <= r[0]) bad("states.range must be [lo, hi)");
    for (int n = static_cast<int>(r[0]); n < static_cast<int>(r[1]); ++n) {
      st.settings.push_back({static_cast<double>(n)});
    }
  } else if (arity > 0) {
    if (!j.contains("values") || !j.at("values").is_array() || j.at("values").empty()) {
      bad("states.values must be a non-empty array");
    }
    for (const auto& v : j.at("values")) {
      auto x = numbers(v, "states.values entry");
      if (x.size() != arity) bad(fmt::format("{} settings take {} numbers", st.kind, arity));
      st.settings.push_back(std::move(x));
    }
  }
  if (st.kind == "spin_polygon") {
    st.polygon = j.at("n").get<int>();
    if (st.polygon < 2) bad("spin_polygon needs n >= 2");
  }
  if (st.kind == "number") {
    for (const auto& v : st.settings) {
      if (v[0] < 0 || v[0] != std::floor(v[0]) || v[0] >= s.space.dim()) {
        bad(fmt::format("number state {} outside the space", v[0]));
      }
    }
  }
  return st;
}

ChannelSpec parse_channel(const json& j) {
  ChannelSpec ch;
  ch.kind = j.value("kind", std::string("none"));
  if (!kChannelKinds.count(ch.kind)) bad("unknown channel kind '" + ch.kind + "'");
  if (ch.kind != "none") ch.param = j.at("param").get<double>();
  if (j.contains("cuts")) ch.cuts = numbers(j.at("cuts"), "channel.cuts");
  if (ch.cuts.empty()) bad("channel.cuts must not be empty");
  for (double f : ch.cuts) {
    if (!(f >= 0.0 && f <= 1.0)) bad(fmt::format("cut fraction {} outside [0, 1]", f));
  }
  if (ch.kind == "loss" && !(ch.param > 0.0 && ch.param <= 1.0)) bad("loss param must lie in (0, 1]");
  if (ch.kind == "gain" && !(ch.param >= 1.0)) bad("gain param must be >= 1");
  if (ch.kind == "noise" && !(ch.param >= 0.0)) bad("noise param must be >= 0");
  return ch;
}

MeasurementSpec parse_measurement(const json& j, const Scenario& s) {
  MeasurementSpec m;
  m.kind = j.at("kind").get<std::string>();
  if (!kMeasurementKinds.count(m.kind)) bad("unknown measurement kind '" + m.kind + "'");
  if (is_spin_kind(m.kind) != s.spin) {
    bad("measurement kind '" + m.kind + "' does not match the space");
  }
  if (j.contains("grid")) {
    if (m.kind == "heterodyne" || m.kind == "noisy_heterodyne") {
      m.phase_grid = phase_grid(j.at("grid"));
    } else {
      m.real_grid = real_grid(j.at("grid"));
    }
  }
  m.nbar = j.value("nbar", 0.0);
  m.eta = j.value("eta", 1.0);
  m.working_dim = j.value("working_dim", 0);
  m.gh_order = j.value("gh_order", 21);
  m.angle_deg = j.value("angle", 0.0);
  if (m.kind == "spin_polygon") {
    m.polygon = j.at("n").get<int>();
    if (m.polygon < 2) bad("spin_polygon needs n >= 2");
  }
  if (m.kind == "spin_directions") {
    for (const auto& v : j.at("directions")) {
      auto x = numbers(v, "measurement.directions entry");
      if (x.size() != 2) bad("directions are [theta, phi]");
      m.directions.push_back(std::move(x));
    }
  }
  if (!(m.nbar >= 0.0)) bad("measurement.nbar must be >= 0");
  if (!(m.eta > 0.0)) bad("measurement.eta must be > 0");
  return m;
}

ScenarioCase parse_case(const json& doc, const Scenario& s, std::string label) {
  ScenarioCase c;
  c.label = std::move(label);
  c.states = parse_states(doc.at("states"), s);
  c.channel = doc.contains("channel") ? parse_channel(doc.at("channel")) : ChannelSpec{};
  c.measurement = parse_measurement(doc.at("measurement"), s);
  if (s.spin && c.channel.kind != "none") bad("spin scenarios take no channel");
  if (c.states.kind == "singlet" && c.measurement.kind != "spin_pair") {
    bad("singlet states need the spin_pair measurement");
  }
  if (c.measurement.kind == "spin_pair" && c.states.kind != "singlet") {
    bad("spin_pair measures singlet states only");
  }
  return c;
}

}  // namespace

Scenario parse_scenario(const std::string& json_text) {
  json doc;
  try {
    doc = json::parse(json_text);
  } catch (const json::exception& e) {
    bad(std::string("invalid JSON: ") + e.what());
  }
  try {
    Scenario s;
    s.name = doc.at("name").get<std::string>();
    if (s.name.empty()) bad("name must not be empty");
    s.description = doc.value("description", std::string());
    s.reproduces = doc.value("reproduces", std::string());
    if (doc.contains("spin")) s.spin = doc.at("spin").get<bool>();
    if (!s.spin) {
      const json sp = doc.value("space", json::object());
      s.space = FockSpace(sp.value("dim", default_dim()), sp.value("tail_tolerance", tol::kTail));
    } else {
      s.space = spin_space();
    }
    if (doc.contains("sweep")) {
      const auto& sw = doc.at("sweep");
      const std::string key = sw.at("key").get<std::string>();
      const auto values = numbers(sw.at("values"), "sweep.values");
      if (values.empty()) bad("sweep.values must not be empty");
      for (double v : values) {
        json patched = doc;
        set_path(patched, key, v);
        s.cases.push_back(parse_case(patched, s, key + "=" + format_double(v)));
      }
    } else {
      s.cases.push_back(parse_case(doc, s, "base"));
    }
    for (const auto& c : doc.value("checks", json::array())) {
      CheckSpec cs;
      cs.kind = c.at("kind").get<std::string>();
      if (!kCheckKinds.count(cs.kind)) bad("unknown check kind '" + cs.kind + "'");
      cs.tolerance = c.value("tolerance", 1e-6);
      for (const auto& [k, v] : c.items()) {
        if (k == "kind" || k == "tolerance") continue;
        if (!v.is_number()) bad("check parameter '" + k + "' must be a number");
        cs.params[k] = v.get<double>();
      }
      s.checks.push_back(std::move(cs));
    }
    for (const auto& o : doc.value("outputs", json::array({"table"}))) {
      const auto name = o.get<std::string>();
      if (!kOutputs.count(name)) bad("unknown output '" + name + "'");
      s.outputs.push_back(name);
    }
    return s;
  } catch (const json::exception& e) {
    bad(std::string("malformed field: ") + e.what());
  } catch (const DomainError& e) {
    bad(e.what());
  }
}

Scenario load_scenario(const std::filesystem::path& file) {
  std::ifstream in(file);
  if (!in) throw ConfigError("cannot read scenario file " + file.string());
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_scenario(ss.str());
}

bool ScenarioResult::passed() const {
  return std::all_of(checks.begin(), checks.end(), [](const CheckResult& c) { return c.passed; });
}

// ---------------------------------------------------------------------------
// Execution

namespace {

struct Prepared {
  std::vector<DensityOperator> states;
  std::vector<std::string> labels;
  double max_tail = 0.0;
};

std::vector<Direction> spin_directions(const std::vector<std::vector<double>>& v) {
  std::vector<Direction> out;
  for (const auto& d : v) out.emplace_back(d[0], d[1]);
  return out;
}

Prepared prepare_states(const Scenario& s, const StateSpec& st) {
  Prepared p;
  auto push_pure = [&](const StateVector& psi, std::string label) {
    p.max_tail = std::max(p.max_tail, psi.tail_mass);
    p.states.push_back(DensityOperator::from_state(psi, label));
    p.labels.push_back(std::move(label));
  };
  if (st.kind == "number") {
    for (const auto& v : st.settings) {
      push_pure(number_state(s.space, static_cast<int>(v[0])), fmt::format("N={}", v[0]));
    }
  } else if (st.kind == "coherent") {
    for (const auto& v : st.settings) {
      push_pure(coherent_state(s.space, {v[0], v[1]}),
                fmt::format("alpha={}{:+}i", format_double(v[0]), v[1]));
    }
  } else if (st.kind == "squeezed") {
    for (const auto& v : st.settings) {
      push_pure(squeezed_ground_state(s.space, v[0]), "eta=" + format_double(v[0]));
    }
  } else if (st.kind == "displaced_squeezed") {
    for (const auto& v : st.settings) {
      push_pure(displaced_squeezed_state(s.space, v[0], v[1], v[2]),
                fmt::format("p={};q={};eta={}", format_double(v[0]), format_double(v[1]),
                            format_double(v[2])));
    }
  } else if (st.kind == "spin_directions" || st.kind == "spin_polygon") {
    const auto dirs =
        st.kind == "spin_polygon" ? regular_polygon(st.polygon) : spin_directions(st.settings);
    for (const auto& d : dirs) {
      const SpinState u = spin_state(d);
      Matrix m = u.amplitudes * u.amplitudes.adjoint();
      std::string label =
          fmt::format("theta={};phi={}", format_double(d.theta), format_double(d.phi));
      p.states.emplace_back(ComplexOperator(spin_space(), std::move(m)), label);
      p.labels.push_back(std::move(label));
    }
  } else if (st.kind == "singlet") {
    const PairState psi = entangled_states().at("psi_minus");
    Matrix m = psi.amplitudes * psi.amplitudes.adjoint();
    p.states.emplace_back(ComplexOperator(FockSpace(4, 0.0), std::move(m)), "psi_minus");
    p.labels.push_back("psi_minus");
  }
  return p;
}

MeasurementFamily spin_pair_family(double angle_deg) {
  const Direction a(0.0, 0.0);
  const Direction b(angle_deg * kPi / 180.0, 0.0);
  const FockSpace space(4, 0.0);
  MeasurementFamily fam{space, "spin_pair", {"s_a", "s_b"}, {}, 4, 0.0};
  for (int sa : {1, -1}) {
    for (int sb : {1, -1}) {
      const SpinState ua = sa > 0 ? spin_state(a) : antipodal_state(a);
      const SpinState ub = sb > 0 ? spin_state(b) : antipodal_state(b);
      const PairState ab = product_state(ua, ub);
      Matrix m = ab.amplitudes * ab.amplitudes.adjoint();
      fam.elements.push_back({Outcome{{double(sa), double(sb)}}, {space, std::move(m)}, 1.0});
    }
  }
  certify(fam, 4);
  return fam;
}

MeasurementFamily build_family(const Scenario& s, const MeasurementSpec& m) {
  const auto& k = m.kind;
  if (k == "number") return number_measurement(s.space);
  if (k == "heterodyne") return heterodyne_measurement(s.space, m.phase_grid);
  if (k == "noisy_heterodyne") {
    return noisy_heterodyne_measurement(s.space, m.nbar, m.phase_grid, m.gh_order);
  }
  if (k == "position") return position_measurement(s.space, m.working_dim);
  if (k == "momentum") return momentum_measurement(s.space, m.working_dim);
  if (k == "gaussian_position") {
    return gaussian_position_measurement(s.space, m.eta, m.real_grid, m.working_dim);
  }
  if (k == "sequential") {
    const int n = m.working_dim > 0 ? m.working_dim : 3 * s.space.dim();
    const FockSpace big(n, s.space.tail_tolerance());
    const auto first =
        gaussian_position_measurement(big, m.eta, m.real_grid, n, s.space.dim());
    const auto second = momentum_measurement(big, n);
    return compose_sequential(first, second, s.space);
  }
  if (k == "spin_polygon") return direction_scheme(regular_polygon(m.polygon)).measurement;
  if (k == "spin_directions") return direction_scheme(spin_directions(m.directions)).measurement;
  return spin_pair_family(m.angle_deg);
}

template <class Ch>
std::pair<std::vector<DensityOperator>, MeasurementFamily> cut_path(
    const std::vector<DensityOperator>& states, const MeasurementFamily& fam, const Ch& ch,
    double f) {
  const auto [before, after] = split(ch, f);
  std::vector<DensityOperator> out;
  out.reserve(states.size());
  for (const auto& rho : states) {
    if constexpr (std::is_same_v<Ch, LossChannel>) out.push_back(apply_loss(rho, before));
    if constexpr (std::is_same_v<Ch, GainChannel>) out.push_back(apply_gain(rho, before));
    if constexpr (std::is_same_v<Ch, NoiseChannel>) {
      out.push_back(apply_gaussian_noise(rho, before));
    }
  }
  if constexpr (std::is_same_v<Ch, LossChannel>) return {out, relocate_cut_loss(fam, after)};
  if constexpr (std::is_same_v<Ch, GainChannel>) return {out, relocate_cut_gain(fam, after)};
  if constexpr (std::is_same_v<Ch, NoiseChannel>) return {out, relocate_cut_noise(fam, after)};
}

std::pair<std::vector<DensityOperator>, MeasurementFamily> at_cut(
    const std::vector<DensityOperator>& states, const MeasurementFamily& fam,
    const ChannelSpec& ch, double f) {
  if (ch.kind == "loss") return cut_path(states, fam, LossChannel(ch.param), f);
  if (ch.kind == "gain") return cut_path(states, fam, GainChannel(ch.param), f);
  if (ch.kind == "noise") return cut_path(states, fam, NoiseChannel(ch.param), f);
  return {states, fam};
}

CheckResult make_check(std::string name, double value, double tolerance, bool passed,
                       std::string detail = {}) {
  return {std::move(name), passed, value, tolerance, std::move(detail)};
}

const CheckSpec* find_check(const Scenario& s, const std::string& kind) {
  for (const auto& c : s.checks) {
    if (c.kind == kind) return &c;
  }
  return nullptr;
}

double param(const CheckSpec& c, const std::string& key, double fallback) {
  auto it = c.params.find(key);
  return it == c.params.end() ? fallback : it->second;
}

double param(const CheckSpec& c, const std::string& key) {
  auto it = c.params.find(key);
  if (it == c.params.end()) throw ConfigError("check " + c.kind + " needs parameter " + key);
  return it->second;
}

// Largest |table - model| over every run of every case.
template <class Model>
double max_model_error(const ScenarioResult& r, const Scenario& s, Model model) {
  double err = 0.0;
  for (const auto& run : r.runs) {
    const auto& cs = s.cases[run.case_index];
    for (Eigen::Index t = 0; t < run.table.densities.rows(); ++t) {
      for (Eigen::Index o = 0; o < run.table.densities.cols(); ++o) {
        const double ref = model(cs, cs.states.settings[t], run.table.outcomes[o].coords);
        err = std::max(err, std::abs(run.table.densities(t, o) - ref));
      }
    }
  }
  return err;
}

double gaussian2(double dx, double dy, double var) {
  return std::exp(-(dx * dx + dy * dy) / var) / (kPi * var);
}

double coherent_model(const ScenarioCase& c, const std::vector<double>& st,
                      const std::vector<double>& beta) {
  const Complex a(st[0], st[1]);
  const Complex b(beta[0], beta[1]);
  const auto& ch = c.channel;
  if (ch.kind == "loss") {
    const Complex d = b - a * std::sqrt(ch.param);
    return gaussian2(d.real(), d.imag(), 1.0);
  }
  if (ch.kind == "gain") {
    // (pi G)^{-1} exp(-|alpha - beta/sqrt(G)|^2)
    const Complex d = a - b / std::sqrt(ch.param);
    return std::exp(-std::norm(d)) / (kPi * ch.param);
  }
  double nbar = c.measurement.kind == "noisy_heterodyne" ? c.measurement.nbar : 0.0;
  if (ch.kind == "noise") nbar += ch.param;
  const Complex d = b - a;
  return gaussian2(d.real(), d.imag(), nbar + 1.0);
}

double squeezed_loss_model(const ScenarioCase& c, const std::vector<double>& st,
                           const std::vector<double>& beta) {
  const double eta = st[0];
  const double l = c.channel.kind == "loss" ? 1.0 / c.channel.param : 1.0;
  const double q = std::sqrt(2.0) * beta[0];
  const double p = std::sqrt(2.0) * beta[1];
  const double aq = 2.0 * l - 1.0 + 1.0 / eta;
  const double ap = 2.0 * l - 1.0 + eta;
  const double per_dqdp = l / (kPi * std::sqrt(aq * ap)) * std::exp(-l * q * q / aq - l * p * p / ap);
  // d^2 beta = dq dp / 2.
  return 2.0 * per_dqdp;
}

double gain_number_model(const ScenarioCase& c, const std::vector<double>& st,
                         const std::vector<double>& out) {
  const double g = c.channel.kind == "gain" ? c.channel.param : 1.0;
  const int big_n = static_cast<int>(st[0]);
  const int n = static_cast<int>(out[0]);
  if (g == 1.0) return n == big_n ? 1.0 : 0.0;
  // G^{-1} B_N^n(1/G), B_N^n(p) = C(n, N) p^N (1-p)^(n-N).
  return binomial_pmf(n, big_n, 1.0 / g) / g;
}

void named_table_checks(const Scenario& s, ScenarioResult& r) {
  for (const auto& c : s.checks) {
    const double tol = c.tolerance;
    if (c.kind == "binomial_peak") {
      const int m = static_cast<int>(param(c, "outcome"));
      const int want_lo = static_cast<int>(param(c, "peak_lo"));
      const int want_hi = static_cast<int>(param(c, "peak_hi"));
      const int want_half_lo = static_cast<int>(param(c, "half_lo"));
      const int want_half_hi = static_cast<int>(param(c, "half_hi"));
      bool ok = !r.runs.empty();
      std::string detail;
      for (const auto& run : r.runs) {
        const auto& settings = s.cases[run.case_index].states.settings;
        Eigen::Index col = -1;
        for (std::size_t o = 0; o < run.table.outcomes.size(); ++o) {
          if (run.table.outcomes[o].coords[0] == m) col = static_cast<Eigen::Index>(o);
        }
        if (col < 0) {
          ok = false;
          detail = "outcome missing";
          break;
        }
        const RealVector v = run.table.densities.col(col);
        const double top = v.maxCoeff();
        std::vector<int> peak;
        for (Eigen::Index i = 0; i < v.size(); ++i) {
          if (v(i) >= top * (1.0 - 1e-9)) peak.push_back(static_cast<int>(settings[i][0]));
        }
        int half_lo = -1, half_hi = -1;
        double best_lo = 1e300, best_hi = 1e300;
        for (Eigen::Index i = 0; i < v.size(); ++i) {
          const int n = static_cast<int>(settings[i][0]);
          const double gap = std::abs(v(i) - 0.5 * top);
          if (!peak.empty() && n < peak.front() && gap < best_lo) best_lo = gap, half_lo = n;
          if (!peak.empty() && n > peak.back() && gap < best_hi) best_hi = gap, half_hi = n;
        }
        const bool run_ok = peak == std::vector<int>{want_lo, want_hi} &&
                            half_lo == want_half_lo && half_hi == want_half_hi;
        if (detail.empty() || !run_ok) {
          detail = fmt::format("peak at {}, half maxima nearest at {} and {}",
                               fmt::join(peak, " and "), half_lo, half_hi);
        }
        ok = ok && run_ok;
      }
      r.checks.push_back(make_check("binomial_peak", ok ? 0.0 : 1.0, 0.0, ok, detail));
    } else if (c.kind == "binomial_law") {
      const double err = max_model_error(r, s, [](const ScenarioCase& cs, const auto& st,
                                                  const auto& out) {
        const double p = cs.channel.kind == "loss" ? cs.channel.param : 1.0;
        return binomial_pmf(static_cast<int>(st[0]), static_cast<int>(out[0]), p);
      });
      r.checks.push_back(make_check("binomial_law", err, tol, err <= tol));
    } else if (c.kind == "coherent_heterodyne") {
      const double err = max_model_error(r, s, coherent_model);
      r.checks.push_back(make_check("coherent_heterodyne", err, tol, err <= tol));
    } else if (c.kind == "squeezed_loss_density") {
      const double err = max_model_error(r, s, squeezed_loss_model);
      r.checks.push_back(make_check("squeezed_loss_density", err, tol, err <= tol));
    } else if (c.kind == "gain_number_distribution") {
      const double err = max_model_error(r, s, gain_number_model);
      r.checks.push_back(make_check("gain_number_distribution", err, tol, err <= tol));
    } else if (c.kind == "gain_mean_photons") {
      double err = 0.0;
      for (const auto& run : r.runs) {
        const auto& cs = s.cases[run.case_index];
        const double g = cs.channel.kind == "gain" ? cs.channel.param : 1.0;
        const RealMatrix mass = run.table.masses();
        for (Eigen::Index t = 0; t < mass.rows(); ++t) {
          double mean = 0.0;
          for (Eigen::Index o = 0; o < mass.cols(); ++o) {
            mean += run.table.outcomes[o].coords[0] * mass(t, o);
          }
          err = std::max(err, std::abs(mean - (g * cs.states.settings[t][0] + g - 1.0)));
        }
      }
      r.checks.push_back(make_check("gain_mean_photons", err, tol, err <= tol));
    } else if (c.kind == "spin_scheme") {
      double err = 0.0, same = 0.0;
      std::size_t rows = 0;
      for (const auto& run : r.runs) {
        const auto& cs = s.cases[run.case_index];
        const auto dirs = cs.states.kind == "spin_polygon" ? regular_polygon(cs.states.polygon)
                                                           : spin_directions(cs.states.settings);
        const auto meas = cs.measurement.kind == "spin_polygon"
                              ? regular_polygon(cs.measurement.polygon)
                              : spin_directions(cs.measurement.directions);
        const RealMatrix mass = run.table.masses();
        const double n = static_cast<double>(meas.size());
        for (std::size_t t = 0; t < dirs.size(); ++t) {
          for (std::size_t o = 0; o < meas.size(); ++o) {
            const double ref = (1.0 + dirs[t].cartesian().dot(meas[o].cartesian())) / n;
            err = std::max(err, std::abs(mass(t, o) - ref));
          }
          if (t < meas.size()) same += mass(t, t);
          ++rows;
        }
      }
      same /= std::max<std::size_t>(rows, 1);
      const double want = param(c, "p_same", same);
      const bool ok = err <= tol && std::abs(same - want) <= tol;
      r.checks.push_back(make_check("spin_scheme", err, tol, ok,
                                    fmt::format("P(same) = {}", format_double(same))));
    } else if (c.kind == "mutual_information") {
      for (const auto& run : r.runs) {
        CapacityOptions opts;
        if (run.table.settings.size() <= 3) opts.exhaustive_resolution = 1e-3;
        const CapacityReport rep = capacity_sweep(run.table, opts);
        const double uniform =
            mutual_information(run.table, uniform_prior(static_cast<int>(run.table.settings.size())));
        bool ok = rep.converged;
        std::string detail = fmt::format("uniform prior {} bits, {} iterations",
                                         format_double(uniform), rep.iterations);
        if (c.params.count("equals")) {
          ok = ok && std::abs(rep.capacity_bits - c.params.at("equals")) <= tol;
        }
        if (c.params.count("below")) ok = ok && rep.capacity_bits < c.params.at("below") - tol;
        if (rep.has_exhaustive) {
          ok = ok && rep.exhaustive_bits <= rep.capacity_bits + 1e-6;
          detail += fmt::format(", exhaustive {}", format_double(rep.exhaustive_bits));
        }
        r.checks.push_back(
            make_check("mutual_information[" + run.label + "]", rep.capacity_bits, tol, ok, detail));
      }
    } else if (c.kind == "singlet_correlations") {
      double err = 0.0;
      for (const auto& run : r.runs) {
        const double theta = s.cases[run.case_index].measurement.angle_deg * kPi / 180.0;
        const Direction a(0.0, 0.0), b(theta, 0.0);
        const SignAgreement sg = singlet_sign_agreement(a, b);
        const RealMatrix mass = run.table.masses();
        double same = 0.0;
        for (std::size_t o = 0; o < run.table.outcomes.size(); ++o) {
          const auto& oc = run.table.outcomes[o].coords;
          const double ref = (1.0 - oc[0] * oc[1] * std::cos(theta)) / 4.0;
          err = std::max(err, std::abs(mass(0, o) - ref));
          if (oc[0] == oc[1]) same += mass(0, o);
        }
        err = std::max({err, std::abs(same - std::pow(std::sin(theta / 2), 2)),
                        std::abs(same - sg.same)});
        err = std::max(err, std::abs(mass(0, 0) - singlet_joint_probability(a, b)));
      }
      r.checks.push_back(make_check("singlet_correlations", err, tol, err <= tol));
    }
  }
}

// Checks that need the operators of one run rather than its table.
void operator_checks(const Scenario& s, const ScenarioCase& cs,
                     const std::vector<DensityOperator>& states, const MeasurementFamily& fam,
                     ScenarioResult& r) {
  if (const CheckSpec* c = find_check(s, "wigner_overlap")) {
    const int samples = static_cast<int>(param(*c, "samples", 5));
    double err = 0.0;
    const std::size_t n = fam.size();
    std::vector<const MeasurementElement*> picked;
    std::vector<WignerGrid> we;
    for (int k = 0; k < samples; ++k) {
      picked.push_back(&fam.elements[(n - 1) * k / std::max(samples - 1, 1)]);
      we.push_back(wigner_of_measurement(*picked.back()));
    }
    for (const auto& rho : states) {
      const WignerGrid wr = wigner_of_density(rho);
      for (std::size_t k = 0; k < picked.size(); ++k) {
        err = std::max(err, std::abs(overlap(we[k], wr) - probability(*picked[k], rho)));
      }
    }
    r.checks.push_back(make_check("wigner_overlap[" + cs.label + "]", err, c->tolerance,
                                  err <= c->tolerance));
  }
  if (const CheckSpec* c = find_check(s, "displaced_squeezed_equivalence")) {
    const double window = param(*c, "window", 3.0);
    const int stride = std::max(1, static_cast<int>(param(*c, "stride", 1)));
    double err = 0.0, num = 0.0, den = 0.0;
    int count = 0, seen = 0;
    for (const auto& e : fam.elements) {
      const double q = e.outcome.coords[0], p = e.outcome.coords[1];
      if (std::abs(q) > window || std::abs(p) > window) continue;
      if (seen++ % stride != 0) continue;
      const StateVector ds = displaced_squeezed_state(fam.space, p, q, cs.measurement.eta);
      const Matrix ref = ds.amplitudes * ds.amplitudes.adjoint() / (2.0 * kPi);
      err = std::max(err, (e.op.matrix() - ref).cwiseAbs().maxCoeff());
      num += (ref.adjoint() * e.op.matrix()).trace().real();
      den += ref.squaredNorm();
      ++count;
    }
    const double scale = den > 0.0 ? num / den : 0.0;
    r.checks.push_back(make_check(
        "displaced_squeezed_equivalence[" + cs.label + "]", err, c->tolerance,
        count > 0 && err <= c->tolerance,
        fmt::format("{} elements, fitted scale {}, completeness defect {} on {} levels", count,
                    format_double(scale), format_double(fam.completeness_defect),
                    fam.certified_dim)));
  }
}

void generic_checks(const Scenario& s, ScenarioResult& r,
                    const std::vector<std::pair<std::size_t, double>>& classical_errors) {
  bool fam_ok = true, rows_ok = true;
  double worst_defect = 0.0, worst_row = 0.0, worst_entry = 0.0, worst_tail = 0.0;
  for (const auto& run : r.runs) {
    fam_ok = fam_ok && run.validation.passed();
    worst_defect = std::max(worst_defect, run.validation.completeness_defect);
    rows_ok = rows_ok && run.table.rows_ok();
    const RealVector sums = run.table.row_sums();
    for (Eigen::Index t = 0; t < sums.size(); ++t) {
      worst_row = std::max(worst_row, std::abs(sums(t) - 1.0) - run.table.row_tolerance(t));
    }
    worst_entry = std::min(worst_entry, run.table.densities.minCoeff());
    worst_tail = std::max(worst_tail, run.max_tail_mass);
  }
  r.checks.push_back(make_check("family_validation", worst_defect, tol::kCompleteness, fam_ok));
  r.checks.push_back(make_check("row_sums", std::max(worst_row, 0.0), 0.0, rows_ok,
                                "excess over the per-row tolerance"));
  r.checks.push_back(make_check("nonnegativity", worst_entry, -tol::kProbFloor,
                                worst_entry >= -tol::kProbFloor));
  r.checks.push_back(make_check("state_tails", worst_tail, s.space.tail_tolerance(),
                                worst_tail <= s.space.tail_tolerance()));
  // Cut invariance within each case.
  for (std::size_t c = 0; c < s.cases.size(); ++c) {
    const ScenarioRun* base = nullptr;
    double diff = 0.0;
    int cuts = 0;
    for (const auto& run : r.runs) {
      if (run.case_index != c) continue;
      ++cuts;
      if (!base) {
        base = &run;
        continue;
      }
      diff = std::max(diff, (run.table.densities - base->table.densities).cwiseAbs().maxCoeff());
    }
    if (cuts > 1) {
      r.checks.push_back(make_check("cut_invariance[" + s.cases[c].label + "]", diff, 1e-8,
                                    diff < 1e-8, fmt::format("{} cut positions", cuts)));
    }
  }
  for (const auto& [idx, err] : classical_errors) {
    r.checks.push_back(make_check("classical_decomposition[" + r.runs[idx].label + "]", err,
                                  1e-10, err <= 1e-10));
  }
}

}  // namespace

ScenarioResult run_scenario(const Scenario& s) {
  ScenarioResult r;
  r.name = s.name;
  std::vector<std::pair<std::size_t, double>> classical;
  try {
    for (std::size_t ci = 0; ci < s.cases.size(); ++ci) {
      const ScenarioCase& cs = s.cases[ci];
      const Prepared prep = prepare_states(s, cs.states);
      const MeasurementFamily fam = build_family(s, cs.measurement);
      if (ci == 0 && !s.spin &&
          std::find(s.outputs.begin(), s.outputs.end(), "wigner") != s.outputs.end()) {
        for (const auto& rho : prep.states) r.wigner.push_back(wigner_of_density(rho));
      }
      for (std::size_t k = 0; k < cs.channel.cuts.size(); ++k) {
        const double f = cs.channel.cuts[k];
        auto [states, family] = at_cut(prep.states, fam, cs.channel, f);
        ScenarioRun run;
        run.case_index = ci;
        run.cut = f;
        run.label = cs.label + (cs.channel.kind == "none" ? "" : ";cut=" + format_double(f));
        run.family_kind = family.kind;
        run.validation = validate_family(family);
        run.max_tail_mass = prep.max_tail;
        run.table = build_table(states, family);
        run.table.settings = prep.labels;
        if (number_diagonal(states, family)) {
          const RealMatrix ref = classical_decomposition(states, family);
          classical.emplace_back(r.runs.size(),
                                 (run.table.masses() - ref).cwiseAbs().maxCoeff());
        }
        if (k == 0) operator_checks(s, cs, states, family, r);
        r.runs.push_back(std::move(run));
      }
    }
    generic_checks(s, r, classical);
    named_table_checks(s, r);
  } catch (const ConfigError&) {
    throw;
  } catch (const Error& e) {
    r.checks.push_back(make_check("execution", 1.0, 0.0, false, e.what()));
  }
  return r;
}

std::string report_json(const Scenario& s, const ScenarioResult& r) {
  ojson j;
  j["schema_version"] = 1;
  j["scenario"] = s.name;
  j["description"] = s.description;
  j["passed"] = r.passed();
  ojson checks = ojson::array();
  for (const auto& c : r.checks) {
    checks.push_back({{"name", c.name},
                      {"passed", c.passed},
                      {"value", c.value},
                      {"tolerance", c.tolerance},
                      {"detail", c.detail}});
  }
  j["checks"] = std::move(checks);
  ojson runs = ojson::array();
  for (std::size_t i = 0; i < r.runs.size(); ++i) {
    const auto& run = r.runs[i];
    runs.push_back({{"label", run.label},
                    {"cut", run.cut},
                    {"family", run.family_kind},
                    {"elements", run.table.outcomes.size()},
                    {"certified_dim", run.validation.certified_dim},
                    {"completeness_defect", run.validation.completeness_defect},
                    {"max_hermiticity_defect", run.validation.max_hermiticity_defect},
                    {"worst_min_eigenvalue", run.validation.worst_min_eigenvalue},
                    {"max_tail_mass", run.max_tail_mass},
                    {"table", fmt::format("table_{}.csv", i)}});
  }
  j["runs"] = std::move(runs);
  return j.dump(2) + "\n";
}

void write_artifacts(const Scenario& s, const ScenarioResult& r,
                     const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  auto open = [&](const std::string& name, std::ios::openmode mode = std::ios::out) {
    std::ofstream out(dir / name, mode | std::ios::trunc);
    if (!out) throw ConfigError("cannot write " + (dir / name).string());
    return out;
  };
  const bool tables = std::find(s.outputs.begin(), s.outputs.end(), "table") != s.outputs.end();
  for (std::size_t i = 0; tables && i < r.runs.size(); ++i) {
    auto csv = open(fmt::format("table_{}.csv", i));
    write_table_csv(r.runs[i].table, csv);
    auto side = open(fmt::format("table_{}.json", i));
    side << table_sidecar_json(r.runs[i].table) << '\n';
  }
  for (std::size_t k = 0; k < r.wigner.size(); ++k) {
    auto csv = open(fmt::format("wigner_{}.csv", k));
    write_csv(r.wigner[k], csv);
    auto bin = open(fmt::format("wigner_{}.bin", k), std::ios::out | std::ios::binary);
    write_binary(r.wigner[k], bin);
  }
  auto rep = open("report.json");
  rep << report_json(s, r);
}

// ---------------------------------------------------------------------------
// Catalog

namespace detail {
// Defined in the generated catalog source: (name, json) pairs.
const std::vector<std::pair<std::string, std::string>>& bundled_sources();
}  // namespace detail

const std::vector<CatalogEntry>& catalog() {
  static const std::vector<CatalogEntry> entries = [] {
    std::vector<CatalogEntry> out;
    for (const auto& [file, text] : detail::bundled_sources()) {
      out.push_back({json::parse(text).at("name").get<std::string>(), text});
    }
    std::sort(out.begin(), out.end(),
              [](const CatalogEntry& a, const CatalogEntry& b) { return a.name < b.name; });
    return out;
  }();
  return entries;
}

std::vector<std::string> list_scenarios() {
  std::vector<std::string> names;
  for (const auto& e : catalog()) names.push_back(e.name);
  return names;
}

Scenario bundled_scenario(const std::string& name) {
  for (const auto& e : catalog()) {
    if (e.name == name) return parse_scenario(e.json);
  }
  throw ConfigError(fmt::format("unknown scenario '{}'; valid names: {}", name,
                                fmt::join(list_scenarios(), ", ")));
}

std::string describe(const std::string& name) {
  const Scenario s = bundled_scenario(name);
  std::string out = s.name + "\n  " + s.description + "\n";
  if (!s.reproduces.empty()) out += "  reproduces: " + s.reproduces + "\n";
  out += s.spin ? "  space: spin\n"
                : fmt::format("  space: dim {}, tail tolerance {}\n", s.space.dim(),
                              format_double(s.space.tail_tolerance()));
  const auto& c = s.cases.front();
  out += fmt::format("  states: {} ({} settings)\n", c.states.kind,
                     c.states.kind == "spin_polygon" ? c.states.polygon
                                                     : static_cast<int>(c.states.settings.size()));
  if (c.channel.kind != "none") {
    out += fmt::format("  channel: {} {} at cuts {}\n", c.channel.kind,
                       format_double(c.channel.param), fmt::join(c.channel.cuts, ", "));
  }
  out += "  measurement: " + c.measurement.kind + "\n";
  if (s.cases.size() > 1) {
    std::vector<std::string> labels;
    for (const auto& k : s.cases) labels.push_back(k.label);
    out += fmt::format("  sweep: {}\n", fmt::join(labels, ", "));
  }
  std::vector<std::string> checks;
  for (const auto& k : s.checks) checks.push_back(k.kind);
  if (!checks.empty()) out += fmt::format("  checks: {}\n", fmt::join(checks, ", "));
  return out;
}

}  // namespace qcomm
