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

#include "qcomm/fock_space.hpp"

#include <cstdlib>
#include <string>

#include "qcomm/errors.hpp"

namespace qcomm {

FockSpace::FockSpace(int dim, double tail_tolerance)
    : dim_(dim), tail_tolerance_(tail_tolerance) {
  if (dim < 2) {
    throw DomainError("FockSpace: dim must be at least 2, got " +
                      std::to_string(dim));
  }
  if (!(tail_tolerance >= 0.0 && tail_tolerance < 1.0)) {
    throw DomainError("FockSpace: tail_tolerance must lie in [0, 1)");
  }
}

int default_dim() {
  const char* env = std::getenv("QCOMM_DEFAULT_DIM");
  if (env == nullptr || *env == '\0') return tol::kDefaultDim;
  char* end = nullptr;
  const long v = std::strtol(env, &end, 10);
  if (end == env || *end != '\0' || v < 2 || v > 4096) {
    throw ConfigError(std::string("QCOMM_DEFAULT_DIM is not a valid dimension: ") +
                      env);
  }
  return static_cast<int>(v);
}

void require_same_dim(const FockSpace& a, const FockSpace& b,
                      const char* where) {
  if (a.dim() != b.dim()) {
    throw DimensionMismatchError(std::string(where) + ": dimension mismatch (" +
                                 std::to_string(a.dim()) + " vs " +
                                 std::to_string(b.dim()) + ")");
  }
}

}  // namespace qcomm
