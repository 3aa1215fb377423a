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

#include "qcomm/povm.hpp"

#include <algorithm>
#include <cmath>
#include <optional>
#include <string>

#include "qcomm/errors.hpp"
#include "qcomm/quadrature.hpp"
#include "qcomm/states.hpp"

namespace qcomm {

Matrix MeasurementFamily::weighted_sum() const {
  Matrix s = Matrix::Zero(space.dim(), space.dim());
  for (const auto& e : elements) s += e.weight * e.op.matrix();
  return s;
}

double PhaseGrid::cell_area() const {
  const double dr = n_re > 1 ? (re_max - re_min) / (n_re - 1) : 1.0;
  const double di = n_im > 1 ? (im_max - im_min) / (n_im - 1) : 1.0;
  return dr * di;
}

Complex PhaseGrid::node(int i, int j) const {
  const double dr = n_re > 1 ? (re_max - re_min) / (n_re - 1) : 0.0;
  const double di = n_im > 1 ? (im_max - im_min) / (n_im - 1) : 0.0;
  return {re_min + i * dr, im_min + j * di};
}

double RealGrid::spacing() const { return n > 1 ? (max - min) / (n - 1) : 1.0; }

double RealGrid::node(int i) const { return n > 1 ? min + i * (max - min) / (n - 1) : min; }

namespace {

void check_grid(const PhaseGrid& g) {
  if (g.n_re < 1 || g.n_im < 1 || !(g.re_max >= g.re_min) || !(g.im_max >= g.im_min)) {
    throw DomainError("PhaseGrid: invalid bounds or node counts");
  }
}

void check_grid(const RealGrid& g) {
  if (g.n < 1 || !(g.max >= g.min)) throw DomainError("RealGrid: invalid bounds or node count");
}

void require_coverage(const MeasurementFamily& fam, const char* what, int min_certified = -1) {
  const bool short_fall = min_certified < 0 ? 3 * fam.certified_dim < fam.space.dim()
                                            : fam.certified_dim < min_certified;
  if (short_fall) {
    const double defect = completeness_defect(fam, std::max(1, (fam.space.dim() + 2) / 3));
    throw GridCoverageError(std::string(what) + ": grid certifies only " +
                                std::to_string(fam.certified_dim) + " of " +
                                std::to_string(fam.space.dim()) + " levels",
                            defect);
  }
}

int working_for(const FockSpace& space, int working_dim) {
  if (working_dim <= 0) return 3 * space.dim();
  if (working_dim < space.dim()) {
    throw DimensionMismatchError("working dim smaller than target dim");
  }
  return working_dim;
}

}  // namespace

double completeness_defect(const MeasurementFamily& fam, int dim) {
  dim = std::min(dim, fam.space.dim());
  if (dim <= 0) return 0.0;
  const Matrix s = fam.weighted_sum();
  return (s.topLeftCorner(dim, dim) - Matrix::Identity(dim, dim)).cwiseAbs().maxCoeff();
}

void certify(MeasurementFamily& fam, int max_dim, double tol) {
  const int d = std::min(max_dim, fam.space.dim());
  const Matrix dev = fam.weighted_sum() - Matrix::Identity(fam.space.dim(), fam.space.dim());
  double defect = 0.0;
  int k = 0;
  for (; k < d; ++k) {
    // Extending the prefix from k to k+1 adds row k and column k.
    double add = 0.0;
    for (int j = 0; j <= k; ++j) add = std::max({add, std::abs(dev(k, j)), std::abs(dev(j, k))});
    if (std::max(defect, add) >= tol) break;
    defect = std::max(defect, add);
  }
  fam.certified_dim = k;
  fam.completeness_defect = defect;
}

MeasurementFamily number_measurement(const FockSpace& space) {
  MeasurementFamily fam{space, "number", {"n"}, {}, space.dim(), 0.0};
  fam.elements.reserve(space.dim());
  for (int m = 0; m < space.dim(); ++m) {
    Matrix op = Matrix::Zero(space.dim(), space.dim());
    op(m, m) = 1.0;
    fam.elements.push_back({Outcome{{static_cast<double>(m)}}, {space, std::move(op)}, 1.0});
  }
  return fam;
}

MeasurementFamily heterodyne_measurement(const FockSpace& space, const PhaseGrid& grid) {
  check_grid(grid);
  MeasurementFamily fam{space, "heterodyne", {"re_beta", "im_beta"}, {}, 0, 0.0};
  const double w = grid.cell_area();
  fam.elements.reserve(static_cast<std::size_t>(grid.n_re) * grid.n_im);
  for (int i = 0; i < grid.n_re; ++i) {
    for (int j = 0; j < grid.n_im; ++j) {
      const Complex beta = grid.node(i, j);
      const Vector k = coherent_amplitudes(space.dim(), beta);
      fam.elements.push_back(
          {Outcome{{beta.real(), beta.imag()}}, {space, (k * k.adjoint()) / kPi}, w});
    }
  }
  certify(fam, space.dim());
  require_coverage(fam, "heterodyne_measurement");
  return fam;
}

MeasurementFamily noisy_heterodyne_measurement(const FockSpace& space, double nbar,
                                               const PhaseGrid& grid, int gh_order) {
  if (!(nbar >= 0.0) || !std::isfinite(nbar)) {
    throw DomainError("noisy_heterodyne_measurement: nbar must be nonnegative");
  }
  if (nbar == 0.0) return heterodyne_measurement(space, grid);
  check_grid(grid);
  if (gh_order < 2) throw DomainError("noisy_heterodyne_measurement: gh_order < 2");
  const GaussHermiteRule gh = gauss_hermite(gh_order);
  const double s = std::sqrt(nbar);
  // Keep only product nodes with non-negligible weight.
  std::vector<std::pair<Complex, double>> offsets;
  for (int a = 0; a < gh_order; ++a) {
    for (int b = 0; b < gh_order; ++b) {
      const double wt = gh.weights(a) * gh.weights(b) / kPi;
      if (wt < 1e-18) continue;
      offsets.emplace_back(Complex(s * gh.nodes(a), s * gh.nodes(b)), wt);
    }
  }
  MeasurementFamily fam{space, "noisy_heterodyne", {"re_beta", "im_beta"}, {}, 0, 0.0};
  const double w = grid.cell_area();
  const int d = space.dim();
  Matrix kets(d, static_cast<Eigen::Index>(offsets.size()));
  for (int i = 0; i < grid.n_re; ++i) {
    for (int j = 0; j < grid.n_im; ++j) {
      const Complex beta = grid.node(i, j);
      for (std::size_t c = 0; c < offsets.size(); ++c) {
        kets.col(static_cast<Eigen::Index>(c)) =
            std::sqrt(offsets[c].second) * coherent_amplitudes(d, beta + offsets[c].first);
      }
      Matrix op = (kets * kets.adjoint()) / kPi;
      fam.elements.push_back({Outcome{{beta.real(), beta.imag()}}, {space, hermitize(op)}, w});
    }
  }
  certify(fam, d);
  require_coverage(fam, "noisy_heterodyne_measurement");
  return fam;
}

namespace {

MeasurementFamily quadrature_family(const FockSpace& space, int working_dim, bool momentum) {
  const int n = working_for(space, working_dim);
  const int d = space.dim();
  const QuadratureBasis& b = *shared_quadrature_basis(n);
  MeasurementFamily fam{space, momentum ? "momentum" : "position",
                        {momentum ? "p" : "q"}, {}, 0, 0.0};
  fam.elements.reserve(n);
  for (int k = 0; k < n; ++k) {
    Vector v = momentum ? Vector(b.momentum_vector(k).head(d))
                        : Vector(b.vectors.col(k).head(d).cast<Complex>());
    Matrix op = (v * v.adjoint()) / b.christoffel(k);
    fam.elements.push_back({Outcome{{b.nodes(k)}}, {space, std::move(op)}, b.christoffel(k)});
  }
  certify(fam, d);
  return fam;
}

}  // namespace

MeasurementFamily position_measurement(const FockSpace& space, int working_dim) {
  return quadrature_family(space, working_dim, false);
}

MeasurementFamily momentum_measurement(const FockSpace& space, int working_dim) {
  return quadrature_family(space, working_dim, true);
}

MeasurementFamily gaussian_position_measurement(const FockSpace& space, double eta,
                                                const RealGrid& grid, int working_dim,
                                                int min_certified) {
  if (!(eta > 0.0) || !std::isfinite(eta)) {
    throw DomainError("gaussian_position_measurement: eta must be positive");
  }
  check_grid(grid);
  const int n = working_for(space, working_dim);
  const int d = space.dim();
  const QuadratureBasis& b = *shared_quadrature_basis(n);
  const RealMatrix v = b.vectors.topRows(d);
  const double pref = std::sqrt(eta / kPi);
  MeasurementFamily fam{space, "gaussian_position", {"q_R"}, {}, 0, 0.0};
  fam.elements.reserve(grid.n);
  RealVector g(n);
  for (int i = 0; i < grid.n; ++i) {
    const double qr = grid.node(i);
    for (int k = 0; k < n; ++k) {
      const double x = qr - b.nodes(k);
      g(k) = pref * std::exp(-eta * x * x);
    }
    RealMatrix op = v * g.asDiagonal() * v.transpose();
    fam.elements.push_back({Outcome{{qr}}, {space, op.cast<Complex>()}, grid.spacing()});
  }
  certify(fam, d);
  require_coverage(fam, "gaussian_position_measurement", min_certified);
  return fam;
}

namespace {

// b with S = b b^dag when S is a rank-one projector multiple (to 1e-13 of
// its largest diagonal entry), else nothing.
std::optional<Vector> rank_one_factor(const Matrix& s) {
  Eigen::Index j = 0;
  const double top = s.diagonal().real().maxCoeff(&j);
  if (!(top > 0.0)) return std::nullopt;
  Vector b = s.col(j) / std::sqrt(top);
  if ((s - b * b.adjoint()).cwiseAbs().maxCoeff() > 1e-13 * top) return std::nullopt;
  return b;
}

}  // namespace

MeasurementFamily compose_sequential(const MeasurementFamily& first,
                                     const MeasurementFamily& second, const FockSpace& target) {
  require_same_dim(first.space, second.space, "compose_sequential");
  if (target.dim() > first.space.dim()) {
    throw DimensionMismatchError("compose_sequential: target larger than the family space");
  }
  const int d = target.dim();
  MeasurementFamily fam{target, first.kind + "+" + second.kind, first.outcome_names, {}, 0, 0.0};
  fam.outcome_names.insert(fam.outcome_names.end(), second.outcome_names.begin(),
                           second.outcome_names.end());
  fam.elements.reserve(first.size() * second.size());
  std::vector<std::optional<Vector>> factors;
  factors.reserve(second.size());
  for (const auto& e2 : second.elements) factors.push_back(rank_one_factor(e2.op.matrix()));
  for (const auto& e1 : first.elements) {
    const Matrix r = operator_sqrt(e1.op).matrix().topRows(d);
    for (std::size_t k = 0; k < second.size(); ++k) {
      const auto& e2 = second.elements[k];
      Outcome o = e1.outcome;
      o.coords.insert(o.coords.end(), e2.outcome.coords.begin(), e2.outcome.coords.end());
      Matrix op;
      if (factors[k]) {
        const Vector rb = r * *factors[k];
        op = rb * rb.adjoint();
      } else {
        op = hermitize(r * e2.op.matrix() * r.adjoint());
      }
      fam.elements.push_back({std::move(o), {target, std::move(op)}, e1.weight * e2.weight});
    }
  }
  certify(fam, d);
  return fam;
}

MeasurementFamily compose_sequential(const MeasurementFamily& first,
                                     const MeasurementFamily& second) {
  return compose_sequential(first, second, first.space);
}

MeasurementFamily compress(const MeasurementFamily& fam, const FockSpace& space) {
  MeasurementFamily out{space, fam.kind, fam.outcome_names, {}, 0, 0.0};
  out.elements.reserve(fam.size());
  for (const auto& e : fam.elements) {
    out.elements.push_back({e.outcome, compress(e.op, space), e.weight});
  }
  certify(out, std::min(fam.certified_dim, space.dim()));
  return out;
}

MeasurementFamily select(const MeasurementFamily& fam,
                         const std::function<bool(const MeasurementElement&)>& keep) {
  MeasurementFamily out{fam.space, fam.kind, fam.outcome_names, {}, fam.certified_dim, 0.0};
  for (const auto& e : fam.elements) {
    if (keep(e)) out.elements.push_back(e);
  }
  out.completeness_defect = completeness_defect(out, out.certified_dim);
  return out;
}

ValidationReport validate_family(const MeasurementFamily& fam) {
  ValidationReport rep;
  rep.hermiticity_defects.reserve(fam.size());
  rep.min_eigenvalues.reserve(fam.size());
  rep.worst_min_eigenvalue = fam.elements.empty() ? 0.0 : 1e300;
  for (const auto& e : fam.elements) {
    const double h = hermiticity_defect(e.op.matrix());
    const double lo = min_eigenvalue(e.op.matrix());
    rep.hermiticity_defects.push_back(h);
    rep.min_eigenvalues.push_back(lo);
    rep.max_hermiticity_defect = std::max(rep.max_hermiticity_defect, h);
    rep.worst_min_eigenvalue = std::min(rep.worst_min_eigenvalue, lo);
    if (h > tol::kHermitian || lo < -tol::kEigFloor || !(e.weight > 0.0)) rep.elements_ok = false;
  }
  rep.certified_dim = fam.certified_dim;
  rep.completeness_defect = completeness_defect(fam, fam.certified_dim);
  rep.complete = fam.certified_dim > 0 && rep.completeness_defect < tol::kCompleteness;
  return rep;
}

double probability(const MeasurementElement& elem, const DensityOperator& rho) {
  return trace_product(elem.op, rho.op()).real();
}

std::pair<DensityOperator, double> minimally_invasive_update(const DensityOperator& rho,
                                                             const MeasurementElement& elem) {
  require_same_dim(rho.space(), elem.op.space(), "minimally_invasive_update");
  const double p = probability(elem, rho);
  if (!(p > tol::kProbFloor)) {
    throw ZeroProbabilityError("minimally_invasive_update: outcome probability " +
                               std::to_string(p) + " is below the floor");
  }
  const Matrix r = operator_sqrt(elem.op).matrix();
  Matrix post = hermitize(r * rho.matrix() * r) / p;
  post /= post.trace().real();
  return {DensityOperator({rho.space(), std::move(post)}, rho.label()), p};
}

}  // namespace qcomm
