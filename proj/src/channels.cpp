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

#include "qcomm/channels.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include <fmt/format.h>

#include "qcomm/errors.hpp"
#include "qcomm/quadrature.hpp"
#include "qcomm/states.hpp"

namespace qcomm {

LossChannel::LossChannel(double survival) : p(survival) {
  if (!(survival > 0.0 && survival <= 1.0)) {
    throw DomainError("LossChannel: survival probability must lie in (0, 1], got " +
                      std::to_string(survival));
  }
}

GainChannel::GainChannel(double g) : gain(g) {
  if (!(g >= 1.0) || !std::isfinite(g)) {
    throw DomainError("GainChannel: gain must be >= 1, got " + std::to_string(g));
  }
}

NoiseChannel::NoiseChannel(double n, int order) : nbar(n), gh_order(order) {
  if (!(n >= 0.0) || !std::isfinite(n)) {
    throw DomainError("NoiseChannel: nbar must be nonnegative, got " + std::to_string(n));
  }
  if (order < 2 || order > 200) throw DomainError("NoiseChannel: gh_order out of range");
}

double binomial_pmf(int n, int k, double p) {
  if (k < 0 || k > n || n < 0) return 0.0;
  if (p <= 0.0) return k == 0 ? 1.0 : 0.0;
  if (p >= 1.0) return k == n ? 1.0 : 0.0;
  const double lc = std::lgamma(n + 1.0) - std::lgamma(k + 1.0) - std::lgamma(n - k + 1.0);
  return std::exp(lc + k * std::log(p) + (n - k) * std::log1p(-p));
}

BandChannel::BandChannel(int dim, std::vector<Matrix> bands)
    : dim_(dim), bands_(std::move(bands)) {
  if (static_cast<int>(bands_.size()) != dim_) {
    throw DimensionMismatchError("BandChannel: expected one band per diagonal");
  }
  for (int k = 0; k < dim_; ++k) {
    if (bands_[k].rows() != dim_ - k || bands_[k].cols() != dim_ - k) {
      throw DimensionMismatchError("BandChannel: band " + std::to_string(k) + " has wrong shape");
    }
  }
}

Matrix BandChannel::apply(const Matrix& rho) const {
  if (rho.rows() != dim_ || rho.cols() != dim_) {
    throw DimensionMismatchError("BandChannel::apply: operator dimension mismatch");
  }
  Matrix out = Matrix::Zero(dim_, dim_);
  out.diagonal() = bands_[0] * rho.diagonal();
  for (int k = 1; k < dim_; ++k) {
    out.diagonal(k) = bands_[k] * rho.diagonal(k);
    out.diagonal(-k) = bands_[k].conjugate() * rho.diagonal(-k);
  }
  return out;
}

Matrix BandChannel::adjoint(const Matrix& sigma) const {
  if (sigma.rows() != dim_ || sigma.cols() != dim_) {
    throw DimensionMismatchError("BandChannel::adjoint: operator dimension mismatch");
  }
  Matrix out = Matrix::Zero(dim_, dim_);
  out.diagonal() = bands_[0].adjoint() * sigma.diagonal();
  for (int k = 1; k < dim_; ++k) {
    out.diagonal(k) = bands_[k].adjoint() * sigma.diagonal(k);
    out.diagonal(-k) = bands_[k].transpose() * sigma.diagonal(-k);
  }
  return out;
}

namespace {

// <n-j|E_j|n>
double loss_amp(int n, int j, double p) { return std::sqrt(binomial_pmf(n, n - j, p)); }

// <n+j|A_j|n>
double gain_amp(int n, int j, double g) {
  return std::sqrt(binomial_pmf(n + j, n, 1.0 / g) / g);
}

}  // namespace

BandChannel compile(const LossChannel& ch, int dim) {
  RealMatrix amp = RealMatrix::Zero(dim, dim);  // amp(n, j) = <n-j|E_j|n>
  for (int n = 0; n < dim; ++n) {
    for (int j = 0; j <= n; ++j) amp(n, j) = loss_amp(n, j, ch.p);
  }
  std::vector<Matrix> bands;
  bands.reserve(dim);
  for (int k = 0; k < dim; ++k) {
    Matrix t = Matrix::Zero(dim - k, dim - k);
    for (int m = 0; m < dim - k; ++m) {
      for (int j = 0; m + k + j < dim; ++j) {
        t(m, m + j) = amp(m + j, j) * amp(m + k + j, j);
      }
    }
    bands.push_back(std::move(t));
  }
  return {dim, std::move(bands)};
}

BandChannel compile(const GainChannel& ch, int dim) {
  RealMatrix amp = RealMatrix::Zero(dim, dim);  // amp(n, j) = <n+j|A_j|n>
  for (int n = 0; n < dim; ++n) {
    for (int j = 0; n + j < dim; ++j) amp(n, j) = gain_amp(n, j, ch.gain);
  }
  std::vector<Matrix> bands;
  bands.reserve(dim);
  for (int k = 0; k < dim; ++k) {
    Matrix t = Matrix::Zero(dim - k, dim - k);
    for (int m = 0; m < dim - k; ++m) {
      for (int j = 0; j <= m; ++j) {
        t(m, m - j) = amp(m - j, j) * amp(m + k - j, j);
      }
    }
    bands.push_back(std::move(t));
  }
  return {dim, std::move(bands)};
}

BandChannel compile(const NoiseChannel& ch, int dim) {
  std::vector<Matrix> bands;
  bands.reserve(dim);
  for (int k = 0; k < dim; ++k) bands.push_back(Matrix::Zero(dim - k, dim - k));
  if (ch.nbar == 0.0) {
    for (int k = 0; k < dim; ++k) bands[k].setIdentity();
    return {dim, std::move(bands)};
  }
  const GaussHermiteRule gh = gauss_hermite(ch.gh_order);
  const double s = std::sqrt(ch.nbar);
  std::vector<std::pair<Complex, double>> nodes;
  double weight_sum = 0.0;
  double max_abs = 0.0;
  for (int a = 0; a < ch.gh_order; ++a) {
    for (int b = 0; b < ch.gh_order; ++b) {
      const double w = gh.weights(a) * gh.weights(b) / kPi;
      weight_sum += w;
      if (w < 1e-18) continue;
      const Complex xi(s * gh.nodes(a), s * gh.nodes(b));
      nodes.emplace_back(xi, w);
      max_abs = std::max(max_abs, std::abs(xi));
    }
  }
  if (std::abs(weight_sum - 1.0) > 1e-6) {
    throw DiscretizationError("NoiseChannel: quadrature weights sum to " +
                              std::to_string(weight_sum));
  }
  const auto factory_ptr = shared_displacement_factory(displacement_working_dim(dim, max_abs));
  const DisplacementFactory& factory = *factory_ptr;
  for (const auto& [xi, w] : nodes) {
    const Matrix blk = factory.block(xi, dim, dim);
    for (int k = 0; k < dim; ++k) {
      const int len = dim - k;
      bands[k] += w * blk.topLeftCorner(len, len).cwiseProduct(
                          blk.block(k, k, len, len).conjugate());
    }
  }
  return {dim, std::move(bands)};
}

std::vector<Matrix> kraus_operators(const LossChannel& ch, int dim) {
  std::vector<Matrix> ks;
  for (int j = 0; j < dim; ++j) {
    Matrix e = Matrix::Zero(dim, dim);
    for (int n = j; n < dim; ++n) e(n - j, n) = loss_amp(n, j, ch.p);
    ks.push_back(std::move(e));
  }
  return ks;
}

std::vector<Matrix> kraus_operators(const GainChannel& ch, int dim) {
  std::vector<Matrix> ks;
  for (int j = 0; j < dim; ++j) {
    Matrix a = Matrix::Zero(dim, dim);
    for (int n = 0; n + j < dim; ++n) a(n + j, n) = gain_amp(n, j, ch.gain);
    ks.push_back(std::move(a));
  }
  return ks;
}

namespace {

// Smallest dimension (from a geometric search capped at 600) whose
// band-0 transfer keeps the population tail within tol.
template <typename Ch>
int required_dim(const Ch& ch, const RealVector& pops, double tol) {
  for (int d = static_cast<int>(pops.size());;) {
    d = std::min(600, d + std::max(8, d / 4));
    const BandChannel c = compile(ch, d);
    Vector in = Vector::Zero(d);
    in.head(pops.size()) = pops.cast<Complex>();
    const double kept = (c.band(0) * in).real().sum();
    if (1.0 - kept <= tol || d >= 600) return d;
  }
}

int required_dim_noise(const DensityOperator& rho, double nbar) {
  double mean = 0.0;
  for (int n = 0; n < rho.dim(); ++n) mean += n * rho.matrix()(n, n).real();
  const double r = std::sqrt(mean) + 6.0 * std::sqrt(nbar + 1.0) + 3.0;
  return static_cast<int>(std::ceil(r * r));
}

DensityOperator finish(const DensityOperator& rho, Matrix out, const char* what,
                       int (*estimate)(const DensityOperator&, const void*), const void* ch) {
  out = hermitize(out);
  const double tr = out.trace().real();
  const double tail = std::max(0.0, 1.0 - tr);
  if (tail > rho.space().tail_tolerance()) {
    throw TruncationError(fmt::format("{}: output mass {:.3g} lost above the cutoff", what, tail),
                          tail, estimate(rho, ch));
  }
  out /= tr;
  return DensityOperator({rho.space(), std::move(out)}, rho.label());
}

RealVector populations(const DensityOperator& rho) { return rho.matrix().diagonal().real(); }

}  // namespace

DensityOperator apply_loss(const DensityOperator& rho, const LossChannel& ch) {
  if (ch.p == 1.0) return rho;
  auto est = [](const DensityOperator& r, const void*) { return r.dim(); };
  return finish(rho, compile(ch, rho.dim()).apply(rho.matrix()), "apply_loss", est, &ch);
}

DensityOperator apply_gain(const DensityOperator& rho, const GainChannel& ch) {
  if (ch.gain == 1.0) return rho;
  auto est = [](const DensityOperator& r, const void* c) {
    const auto* g = static_cast<const GainChannel*>(c);
    return required_dim(*g, populations(r), r.space().tail_tolerance());
  };
  return finish(rho, compile(ch, rho.dim()).apply(rho.matrix()), "apply_gain", est, &ch);
}

DensityOperator apply_gaussian_noise(const DensityOperator& rho, const NoiseChannel& ch) {
  if (ch.nbar == 0.0) return rho;
  auto est = [](const DensityOperator& r, const void* c) {
    return required_dim_noise(r, static_cast<const NoiseChannel*>(c)->nbar);
  };
  return finish(rho, compile(ch, rho.dim()).apply(rho.matrix()), "apply_gaussian_noise", est,
                &ch);
}

namespace {

MeasurementFamily relocate(const MeasurementFamily& fam, const BandChannel& c,
                           const std::string& tag) {
  MeasurementFamily out{fam.space, fam.kind + tag, fam.outcome_names, {}, 0, 0.0};
  out.elements.reserve(fam.size());
  for (const auto& e : fam.elements) {
    out.elements.push_back({e.outcome, {fam.space, hermitize(c.adjoint(e.op.matrix()))},
                            e.weight});
  }
  certify(out, fam.certified_dim);
  return out;
}

}  // namespace

MeasurementFamily relocate_cut_loss(const MeasurementFamily& fam, const LossChannel& ch) {
  if (ch.p == 1.0) return fam;
  return relocate(fam, compile(ch, fam.space.dim()), "@loss");
}

MeasurementFamily relocate_cut_gain(const MeasurementFamily& fam, const GainChannel& ch) {
  if (ch.gain == 1.0) return fam;
  return relocate(fam, compile(ch, fam.space.dim()), "@gain");
}

MeasurementFamily relocate_cut_noise(const MeasurementFamily& fam, const NoiseChannel& ch) {
  if (ch.nbar == 0.0) return fam;
  return relocate(fam, compile(ch, fam.space.dim()), "@noise");
}

namespace {
void check_fraction(double f) {
  if (!(f >= 0.0 && f <= 1.0)) {
    throw DomainError("cut fraction must lie in [0, 1], got " + std::to_string(f));
  }
}
}  // namespace

std::pair<LossChannel, LossChannel> split(const LossChannel& ch, double f) {
  check_fraction(f);
  return {LossChannel(std::pow(ch.p, f)), LossChannel(std::pow(ch.p, 1.0 - f))};
}

std::pair<GainChannel, GainChannel> split(const GainChannel& ch, double f) {
  check_fraction(f);
  return {GainChannel(std::pow(ch.gain, f)), GainChannel(std::pow(ch.gain, 1.0 - f))};
}

std::pair<NoiseChannel, NoiseChannel> split(const NoiseChannel& ch, double f) {
  check_fraction(f);
  return {NoiseChannel(f * ch.nbar, ch.gh_order), NoiseChannel((1.0 - f) * ch.nbar, ch.gh_order)};
}

Matrix choi_matrix(const BandChannel& ch) {
  const int d = ch.dim();
  Matrix j = Matrix::Zero(d * d, d * d);
  for (int a = 0; a < d; ++a) {
    for (int b = 0; b < d; ++b) {
      Matrix e = Matrix::Zero(d, d);
      e(a, b) = 1.0;
      j.block(a * d, b * d, d, d) = ch.apply(e) / static_cast<double>(d);
    }
  }
  return j;
}

}  // namespace qcomm
