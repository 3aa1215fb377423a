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

#include "qcomm/wigner.hpp"

#include <cmath>
#include <cstdint>
#include <istream>
#include <ostream>
#include <string>

#include <fmt/format.h>

#include "qcomm/errors.hpp"
#include "qcomm/quadrature.hpp"

namespace qcomm {

double GridSpec::dq() const { return nq > 1 ? (q_max - q_min) / (nq - 1) : 1.0; }
double GridSpec::dp() const { return np > 1 ? (p_max - p_min) / (np - 1) : 1.0; }
double GridSpec::q(int i) const { return nq > 1 ? q_min + i * (q_max - q_min) / (nq - 1) : q_min; }
double GridSpec::p(int j) const { return np > 1 ? p_min + j * (p_max - p_min) / (np - 1) : p_min; }

double WignerGrid::integral() const { return values.sum() * grid.dq() * grid.dp(); }

double WignerGrid::boundary_max() const {
  const RealMatrix a = values.cwiseAbs();
  double m = std::max(a.row(0).maxCoeff(), a.row(a.rows() - 1).maxCoeff());
  return std::max({m, a.col(0).maxCoeff(), a.col(a.cols() - 1).maxCoeff()});
}

namespace {

constexpr double kStep = 0.1;

void check_spec(const GridSpec& g) {
  if (g.nq < 2 || g.np < 2 || !(g.q_max > g.q_min) || !(g.p_max > g.p_min)) {
    throw DomainError("GridSpec: need at least 2 nodes per axis and increasing bounds");
  }
}

}  // namespace

WignerGrid wigner_transform(const ComplexOperator& a, const GridSpec& grid, double c) {
  check_spec(grid);
  const double herm = hermiticity_defect(a.matrix());
  if (herm > tol::kHermitian * std::max(1.0, a.matrix().cwiseAbs().maxCoeff())) {
    throw InvariantError("wigner_transform: operator is not Hermitian (defect " +
                         std::to_string(herm) + ")");
  }
  const int d = a.dim();
  const Matrix h = hermitize(a.matrix());
  // psi_n(x) is negligible for |x| > radius when n < d.
  const double radius = std::sqrt(2.0 * d + 1.0) + 6.0;

  // Trigonometric table over the longest s range any row needs.
  const double min_abs_q =
      (grid.q_min <= 0.0 && grid.q_max >= 0.0) ? 0.0
                                               : std::min(std::abs(grid.q_min), std::abs(grid.q_max));
  const double max_reach = radius - min_abs_q;
  const int ns_max = std::max(1, static_cast<int>(std::ceil(2.0 * max_reach / kStep)) + 1);
  RealMatrix cs(ns_max, grid.np), sn(ns_max, grid.np);
  for (int j = 0; j < ns_max; ++j) {
    for (int k = 0; k < grid.np; ++k) {
      const double ph = j * kStep * grid.p(k);
      cs(j, k) = std::cos(ph);
      sn(j, k) = std::sin(ph);
    }
  }

  WignerGrid w{grid, RealMatrix::Zero(grid.nq, grid.np)};
  for (int i = 0; i < grid.nq; ++i) {
    const double q = grid.q(i);
    const double reach = radius - std::abs(q);
    if (reach <= 0.0) continue;
    // For Hermitian A the integrand at -s is the conjugate of that at s,
    // so W = c ds (A(0) + 2 Re sum_{s>0} A(s) e^{isp}).
    const int ns = std::min(ns_max, static_cast<int>(std::ceil(2.0 * reach / kStep)) + 1);
    RealVector xm(ns), xp(ns);
    for (int j = 0; j < ns; ++j) {
      xm(j) = q - 0.5 * j * kStep;
      xp(j) = q + 0.5 * j * kStep;
    }
    const Matrix psi_p = hermite_table(xp, d).cast<Complex>();
    const Matrix psi_m = hermite_table(xm, d).cast<Complex>();
    const Matrix m = h * psi_p;
    const Vector amp = psi_m.cwiseProduct(m).colwise().sum().transpose();
    RealVector re = 2.0 * amp.real();
    RealVector im = 2.0 * amp.imag();
    re(0) = amp(0).real();
    im(0) = 0.0;
    const RealVector row = cs.topRows(ns).transpose() * re - sn.topRows(ns).transpose() * im;
    w.values.row(i) = (c * kStep) * row.transpose();
  }
  return w;
}

WignerGrid wigner_of_density(const DensityOperator& rho, const GridSpec& grid) {
  WignerGrid w = wigner_transform(rho.op(), grid, 1.0 / (2.0 * kPi));
  const double edge = w.boundary_max();
  if (edge > 1e-8) {
    throw GridCoverageError("wigner_of_density: boundary value " + std::to_string(edge) +
                                " exceeds 1e-8; enlarge the grid",
                            edge);
  }
  return w;
}

WignerGrid wigner_of_measurement(const MeasurementElement& elem, const GridSpec& grid) {
  return wigner_transform(elem.op, grid, 1.0);
}

WignerGrid wigner_of_measurement(const ComplexOperator& op, const GridSpec& grid) {
  return wigner_transform(op, grid, 1.0);
}

double overlap(const WignerGrid& w1, const WignerGrid& w2) {
  if (!(w1.grid == w2.grid)) throw DimensionMismatchError("overlap: grids differ");
  return w1.values.cwiseProduct(w2.values).sum() * w1.grid.dq() * w1.grid.dp();
}

WignerGrid gaussian_wigner(double p_prime, double q_prime, double nbar, const GridSpec& grid) {
  check_spec(grid);
  if (!(nbar >= 0.0)) throw DomainError("gaussian_wigner: nbar must be nonnegative");
  const double v = 2.0 * nbar + 1.0;
  WignerGrid w{grid, RealMatrix(grid.nq, grid.np)};
  for (int i = 0; i < grid.nq; ++i) {
    for (int j = 0; j < grid.np; ++j) {
      const double dq = grid.q(i) - q_prime;
      const double dp = grid.p(j) - p_prime;
      w.values(i, j) = std::exp(-(dq * dq + dp * dp) / v) / (kPi * v);
    }
  }
  return w;
}

WignerGrid squeezed_vacuum_wigner(double eta, const GridSpec& grid) {
  check_spec(grid);
  if (!(eta > 0.0) || !std::isfinite(eta)) {
    throw DomainError("squeezed_vacuum_wigner: eta must be positive");
  }
  WignerGrid w{grid, RealMatrix(grid.nq, grid.np)};
  for (int i = 0; i < grid.nq; ++i) {
    for (int j = 0; j < grid.np; ++j) {
      const double q = grid.q(i);
      const double p = grid.p(j);
      w.values(i, j) = std::exp(-eta * q * q - p * p / eta) / kPi;
    }
  }
  return w;
}

PConversion p_distribution_to_wigner(const WignerGrid& p_dist, const GridSpec& grid) {
  check_spec(grid);
  const GridSpec& src = p_dist.grid;
  RealMatrix gq(grid.nq, src.nq), gp(grid.np, src.np);
  for (int i = 0; i < grid.nq; ++i) {
    for (int k = 0; k < src.nq; ++k) gq(i, k) = std::exp(-std::pow(grid.q(i) - src.q(k), 2));
  }
  for (int j = 0; j < grid.np; ++j) {
    for (int k = 0; k < src.np; ++k) gp(j, k) = std::exp(-std::pow(grid.p(j) - src.p(k), 2));
  }
  PConversion out;
  out.classical = p_dist.values.minCoeff() >= -1e-12;
  out.wigner.grid = grid;
  out.wigner.values = (src.dq() * src.dp() / kPi) * (gq * p_dist.values * gp.transpose());
  return out;
}

RealVector q_marginal(const WignerGrid& w) { return w.values.rowwise().sum() * w.grid.dp(); }

RealVector p_marginal(const WignerGrid& w) {
  return w.values.colwise().sum().transpose() * w.grid.dq();
}

void write_csv(const WignerGrid& w, std::ostream& out) {
  out << "q,p,value\n";
  for (int i = 0; i < w.grid.nq; ++i) {
    for (int j = 0; j < w.grid.np; ++j) {
      out << fmt::format("{:.17g},{:.17g},{:.17g}\n", w.grid.q(i), w.grid.p(j), w.values(i, j));
    }
  }
}

void write_binary(const WignerGrid& w, std::ostream& out) {
  const double bounds[4] = {w.grid.q_min, w.grid.q_max, w.grid.p_min, w.grid.p_max};
  const std::int32_t dims[2] = {w.grid.nq, w.grid.np};
  out.write(reinterpret_cast<const char*>(bounds), sizeof(bounds));
  out.write(reinterpret_cast<const char*>(dims), sizeof(dims));
  for (int i = 0; i < w.grid.nq; ++i) {
    for (int j = 0; j < w.grid.np; ++j) {
      const double v = w.values(i, j);
      out.write(reinterpret_cast<const char*>(&v), sizeof(v));
    }
  }
}

WignerGrid read_binary(std::istream& in) {
  double bounds[4];
  std::int32_t dims[2];
  in.read(reinterpret_cast<char*>(bounds), sizeof(bounds));
  in.read(reinterpret_cast<char*>(dims), sizeof(dims));
  if (!in || dims[0] < 1 || dims[1] < 1) throw ConfigError("read_binary: malformed header");
  WignerGrid w{{bounds[0], bounds[1], bounds[2], bounds[3], dims[0], dims[1]},
               RealMatrix(dims[0], dims[1])};
  for (int i = 0; i < dims[0]; ++i) {
    for (int j = 0; j < dims[1]; ++j) in.read(reinterpret_cast<char*>(&w.values(i, j)), sizeof(double));
  }
  if (!in) throw ConfigError("read_binary: truncated value block");
  return w;
}

}  // namespace qcomm
