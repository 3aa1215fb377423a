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

#include <stdexcept>
#include <string>

namespace qcomm {

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class OutOfRangeError : public Error {
 public:
  using Error::Error;
};

class DimensionMismatchError : public Error {
 public:
  using Error::Error;
};

/// A parameter lies outside its mathematical domain (eta <= 0, p > 1, ...).
class DomainError : public Error {
 public:
  using Error::Error;
};

/// A construction would leave more probability mass above the truncation
/// than the space admits.
class TruncationError : public Error {
 public:
  TruncationError(const std::string& what, double tail_mass, int required_dim)
      : Error(required_dim > 0
                  ? what + "; increase dim to about " + std::to_string(required_dim)
                  : what),
        tail_mass_(tail_mass),
        required_dim_(required_dim) {}

  double tail_mass() const noexcept { return tail_mass_; }
  /// Smallest dimension estimated to bring the tail under tolerance, or 0
  /// when no estimate is available.
  int required_dim() const noexcept { return required_dim_; }

 private:
  double tail_mass_;
  int required_dim_;
};

class NotPsdError : public Error {
 public:
  NotPsdError(const std::string& what, double min_eigenvalue)
      : Error(what), min_eigenvalue_(min_eigenvalue) {}
  double min_eigenvalue() const noexcept { return min_eigenvalue_; }

 private:
  double min_eigenvalue_;
};

/// A density operator failed one of its invariants (trace, Hermiticity).
class InvariantError : public Error {
 public:
  using Error::Error;
};

class ZeroProbabilityError : public Error {
 public:
  using Error::Error;
};

class GridCoverageError : public Error {
 public:
  GridCoverageError(const std::string& what, double defect)
      : Error(what), defect_(defect) {}
  double defect() const noexcept { return defect_; }

 private:
  double defect_;
};

class DiscretizationError : public Error {
 public:
  using Error::Error;
};

class SchemeError : public Error {
 public:
  using Error::Error;
};

class InvalidPriorError : public Error {
 public:
  using Error::Error;
};

class ConfigError : public Error {
 public:
  using Error::Error;
};

}  // namespace qcomm
