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

#include "qcomm/serialization.hpp"

#include <fmt/format.h>
#include <json.hpp>

#include "qcomm/errors.hpp"

namespace qcomm {

using nlohmann::json;

namespace {

json op_json(const ComplexOperator& op) {
  const int n = op.dim();
  json re = json::array(), im = json::array();
  for (int i = 0; i < n; ++i) {
    json r = json::array(), c = json::array();
    for (int j = 0; j < n; ++j) {
      r.push_back(op.matrix()(i, j).real());
      c.push_back(op.matrix()(i, j).imag());
    }
    re.push_back(std::move(r));
    im.push_back(std::move(c));
  }
  return {{"dim", n}, {"re", std::move(re)}, {"im", std::move(im)}};
}

ComplexOperator op_from(const json& j, double tail) {
  const int n = j.at("dim").get<int>();
  if (n < 1) throw ConfigError("operator json: dim must be positive");
  const auto& re = j.at("re");
  const auto& im = j.at("im");
  if (re.size() != static_cast<std::size_t>(n) || im.size() != static_cast<std::size_t>(n)) {
    throw ConfigError("operator json: expected " + std::to_string(n) + " rows");
  }
  Matrix m(n, n);
  for (int i = 0; i < n; ++i) {
    if (re[i].size() != static_cast<std::size_t>(n) ||
        im[i].size() != static_cast<std::size_t>(n)) {
      throw ConfigError("operator json: ragged row " + std::to_string(i));
    }
    for (int j2 = 0; j2 < n; ++j2) m(i, j2) = {re[i][j2].get<double>(), im[i][j2].get<double>()};
  }
  return {FockSpace(n, tail), std::move(m)};
}

std::string channel_json(const char* kind, double param) {
  return json{{"kind", kind}, {"param", param}}.dump();
}

}  // namespace

std::string format_double(double x) { return fmt::format("{:.17g}", x); }

std::string operator_to_json(const ComplexOperator& op) { return op_json(op).dump(); }

ComplexOperator operator_from_json(const std::string& text, double tail_tolerance) {
  try {
    return op_from(json::parse(text), tail_tolerance);
  } catch (const json::exception& e) {
    throw ConfigError(std::string("operator json: ") + e.what());
  }
}

std::string channel_to_json(const LossChannel& ch) { return channel_json("loss", ch.p); }
std::string channel_to_json(const GainChannel& ch) { return channel_json("gain", ch.gain); }
std::string channel_to_json(const NoiseChannel& ch) { return channel_json("noise", ch.nbar); }

std::string family_to_json(const MeasurementFamily& fam) {
  json els = json::array();
  for (const auto& e : fam.elements) {
    els.push_back({{"outcome", e.outcome.coords}, {"weight", e.weight}, {"op", op_json(e.op)}});
  }
  json j{{"kind", fam.kind},
         {"dim", fam.space.dim()},
         {"tail_tolerance", fam.space.tail_tolerance()},
         {"outcome_names", fam.outcome_names},
         {"certified_dim", fam.certified_dim},
         {"completeness_defect", fam.completeness_defect},
         {"elements", std::move(els)}};
  return j.dump();
}

MeasurementFamily family_from_json(const std::string& text) {
  try {
    const json j = json::parse(text);
    FockSpace space(j.at("dim").get<int>(), j.at("tail_tolerance").get<double>());
    MeasurementFamily fam{space, j.at("kind").get<std::string>(),
                          j.at("outcome_names").get<std::vector<std::string>>(), {},
                          j.at("certified_dim").get<int>(),
                          j.at("completeness_defect").get<double>()};
    for (const auto& e : j.at("elements")) {
      ComplexOperator op = op_from(e.at("op"), space.tail_tolerance());
      require_same_dim(op.space(), space, "family_from_json");
      fam.elements.push_back({Outcome{e.at("outcome").get<std::vector<double>>()},
                              std::move(op), e.at("weight").get<double>()});
    }
    return fam;
  } catch (const json::exception& e) {
    throw ConfigError(std::string("family json: ") + e.what());
  }
}

}  // namespace qcomm
