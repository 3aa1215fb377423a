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

#include <string>

#include "qcomm/channels.hpp"
#include "qcomm/operators.hpp"
#include "qcomm/povm.hpp"

namespace qcomm {

/// Shortest text that round-trips: 17 significant digits.
std::string format_double(double x);

/// {"dim": n, "re": [[...]], "im": [[...]]}.
std::string operator_to_json(const ComplexOperator& op);
/// Throws ConfigError on malformed input.
ComplexOperator operator_from_json(const std::string& text, double tail_tolerance = tol::kTail);

/// {"kind": "loss" | "gain" | "noise", "param": x}.
std::string channel_to_json(const LossChannel& ch);
std::string channel_to_json(const GainChannel& ch);
std::string channel_to_json(const NoiseChannel& ch);

/// Family header plus one {"outcome", "weight", "op"} entry per element.
std::string family_to_json(const MeasurementFamily& fam);
MeasurementFamily family_from_json(const std::string& text);

}  // namespace qcomm
