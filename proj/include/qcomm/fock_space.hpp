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

#include <complex>

#include <Eigen/Dense>

namespace qcomm {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;
using RealMatrix = Eigen::MatrixXd;
using RealVector = Eigen::VectorXd;

inline constexpr double kPi = 3.14159265358979323846;

/// Numerical tolerances shared by every module.
namespace tol {
inline constexpr double kTrace = 1e-10;
inline constexpr double kHermitian = 1e-10;
inline constexpr double kEigFloor = 1e-9;
inline constexpr double kProbFloor = 1e-12;
inline constexpr double kCompleteness = 1e-4;
inline constexpr double kTail = 1e-8;
inline constexpr int kDefaultDim = 40;
}  // namespace tol

/// Truncated Fock space |0>...|dim-1>.
class FockSpace {
 public:
  explicit FockSpace(int dim = tol::kDefaultDim,
                     double tail_tolerance = tol::kTail);

  int dim() const noexcept { return dim_; }
  double tail_tolerance() const noexcept { return tail_tolerance_; }

  /// Same dimension and tolerance.
  bool operator==(const FockSpace&) const = default;

 private:
  int dim_;
  double tail_tolerance_;
};

/// Default truncation, overridable through QCOMM_DEFAULT_DIM.
int default_dim();

/// Throws DimensionMismatchError unless both spaces have the same dim.
void require_same_dim(const FockSpace& a, const FockSpace& b,
                      const char* where);

}  // namespace qcomm
