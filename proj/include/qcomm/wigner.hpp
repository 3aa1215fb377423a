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

#include "qcomm/operators.hpp"
#include "qcomm/povm.hpp"

namespace qcomm {

/// Rectangular (q, p) sampling grid, nodes inclusive of both bounds.
struct GridSpec {
  double q_min = -8.0, q_max = 8.0;
  double p_min = -8.0, p_max = 8.0;
  int nq = 201, np = 201;

  double dq() const;
  double dp() const;
  double q(int i) const;
  double p(int j) const;
  bool operator==(const GridSpec&) const = default;
};

/// Real function sampled on a GridSpec; values(i, j) is the value at
/// (q(i), p(j)).
struct WignerGrid {
  GridSpec grid;
  RealMatrix values;

  double integral() const;
  double min_value() const { return values.minCoeff(); }
  /// Largest |value| on the outer ring of nodes.
  double boundary_max() const;
};

/// W(q, p) = c int ds <q - s/2|A|q + s/2> exp(i s p) for a Hermitian A.
WignerGrid wigner_transform(const ComplexOperator& a, const GridSpec& grid, double c);

/// c = 1/(2 pi). Throws GridCoverageError when the boundary exceeds 1e-8.
WignerGrid wigner_of_density(const DensityOperator& rho, const GridSpec& grid = {});

/// c = 1, so that overlap(wigner_of_measurement(s), wigner_of_density(rho))
/// equals Trace(s rho) and the identity maps to the constant 1.
WignerGrid wigner_of_measurement(const MeasurementElement& elem, const GridSpec& grid = {});
WignerGrid wigner_of_measurement(const ComplexOperator& op, const GridSpec& grid = {});

/// Riemann sum of w1 * w2 dq dp. Throws DimensionMismatchError on
/// different grids.
double overlap(const WignerGrid& w1, const WignerGrid& w2);

/// Signal plus Gaussian noise centred on (q', p').
WignerGrid gaussian_wigner(double p_prime, double q_prime, double nbar,
                           const GridSpec& grid = {});

/// pi^{-1} exp(-eta q^2 - p^2 / eta).
WignerGrid squeezed_vacuum_wigner(double eta, const GridSpec& grid = {});

struct PConversion {
  WignerGrid wigner;
  /// False when the input P grid has entries below -1e-12.
  bool classical = true;
};

/// Convolves a P distribution (density per dq dp, sampled on its own grid)
/// with the unit Gaussian pi^{-1} exp(-(q-q')^2 - (p-p')^2).
PConversion p_distribution_to_wigner(const WignerGrid& p_dist, const GridSpec& grid = {});

/// int W dp (indexed by q) and int W dq (indexed by p).
RealVector q_marginal(const WignerGrid& w);
RealVector p_marginal(const WignerGrid& w);

/// Rows "q,p,value" in grid order, 17 significant digits.
void write_csv(const WignerGrid& w, std::ostream& out);
/// 4 float64 bounds (q_min, q_max, p_min, p_max), 2 int32 (nq, np), then
/// nq * np float64 values, row-major in q. Little-endian host layout.
void write_binary(const WignerGrid& w, std::ostream& out);
WignerGrid read_binary(std::istream& in);

}  // namespace qcomm
