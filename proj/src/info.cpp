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

#include "qcomm/info.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>

#include <fmt/format.h>
#include <json.hpp>

#include "qcomm/errors.hpp"

namespace qcomm {

using nlohmann::json;

RealMatrix ConditionalTable::masses() const { return densities * weights.asDiagonal(); }

RealVector ConditionalTable::row_sums() const { return masses().rowwise().sum(); }

RealMatrix ConditionalTable::normalized() const {
  RealMatrix m = masses();
  for (Eigen::Index t = 0; t < m.rows(); ++t) {
    const double s = m.row(t).sum();
    if (s > 0.0) m.row(t) /= s;
  }
  return m;
}

bool ConditionalTable::rows_ok() const {
  if (densities.size() > 0 && densities.minCoeff() < -1e-12) return false;
  const RealVector s = row_sums();
  for (Eigen::Index t = 0; t < s.size(); ++t) {
    const double allowed =
        row_tolerance.size() == s.size() ? row_tolerance(t) : completeness_defect + 1e-9;
    if (std::abs(s(t) - 1.0) > allowed) return false;
  }
  return true;
}

ConditionalTable build_table(const std::vector<DensityOperator>& states,
                             const MeasurementFamily& fam) {
  ConditionalTable t;
  t.outcome_names = fam.outcome_names;
  t.certified_dim = fam.certified_dim;
  t.completeness_defect = fam.completeness_defect;
  t.densities.resize(static_cast<Eigen::Index>(states.size()),
                     static_cast<Eigen::Index>(fam.size()));
  t.weights.resize(static_cast<Eigen::Index>(fam.size()));
  for (std::size_t r = 0; r < fam.size(); ++r) {
    t.outcomes.push_back(fam.elements[r].outcome);
    t.weights(static_cast<Eigen::Index>(r)) = fam.elements[r].weight;
  }
  const int d = fam.space.dim();
  const Matrix dev = fam.weighted_sum() - Matrix::Identity(d, d);
  const double worst = dev.size() ? dev.cwiseAbs().maxCoeff() : 0.0;
  t.row_tolerance.resize(static_cast<Eigen::Index>(states.size()));
  for (std::size_t i = 0; i < states.size(); ++i) {
    const auto& rho = states[i];
    require_same_dim(rho.space(), fam.space, "build_table");
    t.settings.push_back(rho.label().empty() ? "t" + std::to_string(i) : rho.label());
    for (std::size_t r = 0; r < fam.size(); ++r) {
      const double v = probability(fam.elements[r], rho);
      if (v < -1e-12) {
        throw InvariantError("build_table: negative probability " + std::to_string(v) +
                             " for setting " + t.settings.back());
      }
      t.densities(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(r)) = v;
    }
    double outside = 0.0;
    for (int n = fam.certified_dim; n < d; ++n) outside += rho.matrix()(n, n).real();
    t.row_tolerance(static_cast<Eigen::Index>(i)) =
        fam.completeness_defect + 1e-9 + std::max(0.0, outside) * std::max(1.0, worst);
  }
  return t;
}

ConditionalTable table_from_matrix(const RealMatrix& p) {
  ConditionalTable t;
  t.outcome_names = {"r"};
  t.densities = p;
  t.weights = RealVector::Ones(p.cols());
  for (Eigen::Index i = 0; i < p.rows(); ++i) t.settings.push_back("t" + std::to_string(i));
  for (Eigen::Index r = 0; r < p.cols(); ++r) t.outcomes.push_back({{static_cast<double>(r)}});
  t.certified_dim = static_cast<int>(p.cols());
  t.row_tolerance = RealVector::Constant(p.rows(), 1e-9);
  return t;
}

RealVector uniform_prior(int n) { return RealVector::Constant(n, 1.0 / n); }

namespace {

void check_prior(const RealVector& prior, Eigen::Index rows) {
  if (prior.size() != rows) {
    throw InvalidPriorError("prior has " + std::to_string(prior.size()) + " entries, table has " +
                            std::to_string(rows) + " settings");
  }
  if (prior.size() == 0 || prior.minCoeff() < -1e-12 || !prior.allFinite()) {
    throw InvalidPriorError("prior entries must be nonnegative");
  }
  if (std::abs(prior.sum() - 1.0) > 1e-9) {
    throw InvalidPriorError("prior sums to " + std::to_string(prior.sum()) + ", expected 1");
  }
}

// I(T;R) in nats for a row-stochastic matrix.
double mi_nats(const RealMatrix& p, const RealVector& prior) {
  const RealVector q = p.transpose() * prior;
  double mi = 0.0;
  for (Eigen::Index t = 0; t < p.rows(); ++t) {
    if (prior(t) <= 0.0) continue;
    for (Eigen::Index r = 0; r < p.cols(); ++r) {
      const double v = p(t, r);
      if (v > 0.0 && q(r) > 0.0) mi += prior(t) * v * std::log(v / q(r));
    }
  }
  return std::max(0.0, mi);
}

RealMatrix row_normalize(RealMatrix p) {
  for (Eigen::Index t = 0; t < p.rows(); ++t) {
    p.row(t) = p.row(t).cwiseMax(0.0);
    const double s = p.row(t).sum();
    if (s > 0.0) p.row(t) /= s;
  }
  return p;
}

}  // namespace

double mutual_information(const RealMatrix& p, const RealVector& prior) {
  check_prior(prior, p.rows());
  return mi_nats(row_normalize(p), prior) / std::log(2.0);
}

double mutual_information(const ConditionalTable& table, const RealVector& prior) {
  return mutual_information(table.masses(), prior);
}

CapacityReport blahut_arimoto(const RealMatrix& p_in, const CapacityOptions& opts) {
  const RealMatrix p = row_normalize(p_in);
  const Eigen::Index n = p.rows();
  CapacityReport rep;
  rep.prior = RealVector::Constant(n, 1.0 / static_cast<double>(n));
  RealVector c(n);
  for (int it = 1; it <= opts.max_iters; ++it) {
    const RealVector q = p.transpose() * rep.prior;
    for (Eigen::Index t = 0; t < n; ++t) {
      double d = 0.0;
      for (Eigen::Index r = 0; r < p.cols(); ++r) {
        if (p(t, r) > 0.0 && q(r) > 0.0) d += p(t, r) * std::log(p(t, r) / q(r));
      }
      c(t) = std::exp(d);
    }
    const double lower = std::log(rep.prior.dot(c));
    const double upper = std::log(c.maxCoeff());
    rep.iterations = it;
    rep.capacity_bits = lower / std::log(2.0);
    if (upper - lower < opts.tolerance) {
      rep.converged = true;
      break;
    }
    rep.prior = rep.prior.cwiseProduct(c) / rep.prior.dot(c);
  }
  if (!rep.converged) {
    rep.warning = "Blahut-Arimoto did not converge in " + std::to_string(opts.max_iters) +
                  " iterations; reporting last iterate";
  }
  rep.capacity_bits = mi_nats(p, rep.prior) / std::log(2.0);
  return rep;
}

CapacityReport exhaustive_capacity(const RealMatrix& p_in, double resolution) {
  const RealMatrix p = row_normalize(p_in);
  if (p.rows() < 2 || p.rows() > 3) {
    throw DomainError("exhaustive_capacity: only 2 or 3 inputs are supported");
  }
  if (!(resolution > 0.0 && resolution <= 0.5)) {
    throw DomainError("exhaustive_capacity: resolution must lie in (0, 0.5]");
  }
  const int steps = static_cast<int>(std::llround(1.0 / resolution));
  CapacityReport rep;
  rep.converged = true;
  rep.capacity_bits = -1.0;
  RealVector pr(p.rows());
  auto consider = [&](const RealVector& v) {
    const double mi = mi_nats(p, v) / std::log(2.0);
    if (mi > rep.capacity_bits) {
      rep.capacity_bits = mi;
      rep.prior = v;
    }
  };
  for (int i = 0; i <= steps; ++i) {
    if (p.rows() == 2) {
      pr << static_cast<double>(i) / steps, 1.0 - static_cast<double>(i) / steps;
      consider(pr);
      continue;
    }
    for (int j = 0; i + j <= steps; ++j) {
      pr << static_cast<double>(i) / steps, static_cast<double>(j) / steps,
          static_cast<double>(steps - i - j) / steps;
      consider(pr);
    }
  }
  rep.exhaustive_bits = rep.capacity_bits;
  rep.exhaustive_prior = rep.prior;
  rep.has_exhaustive = true;
  return rep;
}

CapacityReport capacity_sweep(const ConditionalTable& table, const CapacityOptions& opts) {
  const RealMatrix m = table.masses();
  CapacityReport rep = blahut_arimoto(m, opts);
  if (opts.exhaustive_resolution > 0.0 && (m.rows() == 2 || m.rows() == 3)) {
    const CapacityReport ex = exhaustive_capacity(m, opts.exhaustive_resolution);
    rep.has_exhaustive = true;
    rep.exhaustive_bits = ex.capacity_bits;
    rep.exhaustive_prior = ex.prior;
  }
  return rep;
}

RealMatrix classical_decomposition(const std::vector<DensityOperator>& states,
                                   const MeasurementFamily& fam) {
  const int d = fam.space.dim();
  RealMatrix p_s_t(static_cast<Eigen::Index>(states.size()), d);
  for (std::size_t t = 0; t < states.size(); ++t) {
    require_same_dim(states[t].space(), fam.space, "classical_decomposition");
    p_s_t.row(static_cast<Eigen::Index>(t)) = states[t].matrix().diagonal().real().transpose();
  }
  RealMatrix p_r_s(d, static_cast<Eigen::Index>(fam.size()));
  for (std::size_t r = 0; r < fam.size(); ++r) {
    p_r_s.col(static_cast<Eigen::Index>(r)) =
        fam.elements[r].weight * fam.elements[r].op.matrix().diagonal().real();
  }
  return p_s_t * p_r_s;
}

bool number_diagonal(const std::vector<DensityOperator>& states, const MeasurementFamily& fam,
                     double tol) {
  auto off = [](const Matrix& m) {
    Matrix o = m;
    o.diagonal().setZero();
    return o.size() ? o.cwiseAbs().maxCoeff() : 0.0;
  };
  for (const auto& s : states) {
    if (off(s.matrix()) > tol) return false;
  }
  for (const auto& e : fam.elements) {
    if (off(e.op.matrix()) > tol) return false;
  }
  return true;
}

std::string outcome_label(const Outcome& o, const std::vector<std::string>& names) {
  std::string s;
  for (std::size_t i = 0; i < o.coords.size(); ++i) {
    if (i) s += ';';
    s += (i < names.size() ? names[i] : "c" + std::to_string(i)) + "=" +
         fmt::format("{:.17g}", o.coords[i]);
  }
  return s;
}

namespace {
std::string sanitize(std::string s) {
  std::replace(s.begin(), s.end(), ',', ';');
  std::replace(s.begin(), s.end(), '\n', ' ');
  return s;
}
}  // namespace

void write_table_csv(const ConditionalTable& t, std::ostream& out) {
  out << "setting";
  for (const auto& o : t.outcomes) out << ',' << sanitize(outcome_label(o, t.outcome_names));
  out << '\n';
  for (Eigen::Index i = 0; i < t.densities.rows(); ++i) {
    out << sanitize(t.settings[static_cast<std::size_t>(i)]);
    for (Eigen::Index r = 0; r < t.densities.cols(); ++r) {
      out << ',' << fmt::format("{:.17g}", t.densities(i, r));
    }
    out << '\n';
  }
}

std::string table_sidecar_json(const ConditionalTable& t) {
  json j;
  j["schema_version"] = 1;
  j["settings"] = t.settings;
  j["outcome_names"] = t.outcome_names;
  json outs = json::array();
  for (const auto& o : t.outcomes) outs.push_back(o.coords);
  j["outcomes"] = outs;
  j["weights"] = std::vector<double>(t.weights.data(), t.weights.data() + t.weights.size());
  j["row_tolerance"] =
      std::vector<double>(t.row_tolerance.data(), t.row_tolerance.data() + t.row_tolerance.size());
  j["certified_dim"] = t.certified_dim;
  j["completeness_defect"] = t.completeness_defect;
  return j.dump(2) + "\n";
}

ConditionalTable read_table(std::istream& csv, const std::string& sidecar_json) {
  ConditionalTable t;
  json j;
  try {
    j = json::parse(sidecar_json);
    t.settings = j.at("settings").get<std::vector<std::string>>();
    t.outcome_names = j.at("outcome_names").get<std::vector<std::string>>();
    for (const auto& o : j.at("outcomes")) t.outcomes.push_back({o.get<std::vector<double>>()});
    const auto w = j.at("weights").get<std::vector<double>>();
    t.weights = Eigen::Map<const RealVector>(w.data(), static_cast<Eigen::Index>(w.size()));
    if (j.contains("row_tolerance")) {
      const auto rt = j.at("row_tolerance").get<std::vector<double>>();
      t.row_tolerance = Eigen::Map<const RealVector>(rt.data(), static_cast<Eigen::Index>(rt.size()));
    }
    t.certified_dim = j.at("certified_dim").get<int>();
    t.completeness_defect = j.at("completeness_defect").get<double>();
  } catch (const json::exception& e) {
    throw ConfigError(std::string("read_table: bad sidecar: ") + e.what());
  }
  const auto nr = static_cast<Eigen::Index>(t.outcomes.size());
  if (t.weights.size() != nr) throw ConfigError("read_table: weights and outcomes differ in size");
  t.densities.resize(static_cast<Eigen::Index>(t.settings.size()), nr);
  std::string line;
  if (!std::getline(csv, line)) throw ConfigError("read_table: missing CSV header");
  for (std::size_t i = 0; i < t.settings.size(); ++i) {
    if (!std::getline(csv, line)) throw ConfigError("read_table: missing CSV row");
    std::stringstream ss(line);
    std::string cell;
    std::getline(ss, cell, ',');
    for (Eigen::Index r = 0; r < nr; ++r) {
      if (!std::getline(ss, cell, ',')) throw ConfigError("read_table: short CSV row");
      try {
        t.densities(static_cast<Eigen::Index>(i), r) = std::stod(cell);
      } catch (const std::exception&) {
        throw ConfigError("read_table: bad number '" + cell + "'");
      }
    }
  }
  return t;
}

}  // namespace qcomm
