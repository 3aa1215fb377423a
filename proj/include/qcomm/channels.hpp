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

#include <vector>

#include "qcomm/operators.hpp"
#include "qcomm/povm.hpp"

namespace qcomm {

/// Pure loss with survival probability p in (0, 1].
struct LossChannel {
  double p = 1.0;
  explicit LossChannel(double survival);
};

/// Quantum-limited amplifier with gain G >= 1.
struct GainChannel {
  double gain = 1.0;
  explicit GainChannel(double g);
};

/// Additive Gaussian noise of nbar quanta, realized as a Gauss-Hermite
/// displacement mixture of the given order per axis.
struct NoiseChannel {
  double nbar = 0.0;
  int gh_order = 21;
  explicit NoiseChannel(double n, int order = 21);
};

/// C(n, k) p^k (1-p)^(n-k); zero outside 0 <= k <= n.
double binomial_pmf(int n, int k, double p);

/// Phase-covariant channel on a fixed truncation, stored as one transfer
/// matrix per diagonal band: out(m, m+k) = sum_n T_k(m, n) in(n, n+k).
class BandChannel {
 public:
  BandChannel(int dim, std::vector<Matrix> bands);

  int dim() const noexcept { return dim_; }
  const Matrix& band(int k) const { return bands_.at(k); }

  Matrix apply(const Matrix& rho) const;
  /// Heisenberg-picture dual: Trace(sigma apply(rho)) = Trace(adjoint(sigma) rho).
  Matrix adjoint(const Matrix& sigma) const;

 private:
  int dim_;
  std::vector<Matrix> bands_;
};

BandChannel compile(const LossChannel& ch, int dim);
BandChannel compile(const GainChannel& ch, int dim);
BandChannel compile(const NoiseChannel& ch, int dim);

/// Kraus operators of the loss and gain channels (for inspection and tests).
std::vector<Matrix> kraus_operators(const LossChannel& ch, int dim);
std::vector<Matrix> kraus_operators(const GainChannel& ch, int dim);

/// The outputs are renormalized when the mass pushed above the cutoff is
/// within the space's tail tolerance; otherwise TruncationError reports the
/// lost mass and an estimate of the dimension that would suffice.
DensityOperator apply_loss(const DensityOperator& rho, const LossChannel& ch);
DensityOperator apply_gain(const DensityOperator& rho, const GainChannel& ch);
DensityOperator apply_gaussian_noise(const DensityOperator& rho, const NoiseChannel& ch);

/// Adjoint images sigma'(r) = Lambda^dag(sigma(r)). Completeness is
/// re-certified on the largest prefix where Lambda^dag(I) stays within
/// tolerance of I.
MeasurementFamily relocate_cut_loss(const MeasurementFamily& fam, const LossChannel& ch);
MeasurementFamily relocate_cut_gain(const MeasurementFamily& fam, const GainChannel& ch);
MeasurementFamily relocate_cut_noise(const MeasurementFamily& fam, const NoiseChannel& ch);

/// Splits a path at the cut fraction f (0: cut at the transmitter, 1: at the
/// receiver). Returns (transmitter-to-cut, cut-to-receiver); for loss these
/// are p^f and p^{1-f}, for gain G^f and G^{1-f}, for noise f*nbar and
/// (1-f)*nbar.
std::pair<LossChannel, LossChannel> split(const LossChannel& ch, double f);
std::pair<GainChannel, GainChannel> split(const GainChannel& ch, double f);
std::pair<NoiseChannel, NoiseChannel> split(const NoiseChannel& ch, double f);

/// Choi matrix (1/d) sum_ij |i><j| (x) Lambda(|i><j|) on dim^2 levels.
Matrix choi_matrix(const BandChannel& ch);

}  // namespace qcomm
