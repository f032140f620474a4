/*
 * Copyright 2026 The qchk Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *      http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include "qchk/geometry.hpp"

#include <cmath>
#include <numeric>
#include <sstream>

#include "qchk/errors.hpp"

namespace qchk {

// ---------------------------------------------------------------------------
// JetMatrix / FunctionalMetric

JetMatrix::JetMatrix(std::size_t rows, std::size_t cols, std::size_t dim)
    : rows_(rows), cols_(cols), data_(rows * cols, Jet2::constant(0.0, dim)) {}

Mat JetMatrix::values() const {
  Mat m(rows_, cols_);
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t j = 0; j < cols_; ++j) m(i, j) = (*this)(i, j).value();
  return m;
}

FunctionalMetric::FunctionalMetric(std::size_t dim, MetricFn metric, MetricFn complex_structure)
    : dim_(dim), metric_(std::move(metric)), complex_(std::move(complex_structure)) {}

std::optional<JetMatrix> FunctionalMetric::complex_structure(std::span<const Jet2> x) const {
  if (!complex_) return std::nullopt;
  return complex_(x);
}

FunctionalMetric FunctionalMetric::euclidean(std::size_t dim) {
  return FunctionalMetric(dim, [dim](std::span<const Jet2> x) {
    JetMatrix g(dim, dim, x.size());
    for (std::size_t i = 0; i < dim; ++i) g(i, i) = Jet2::constant(1.0, x.size());
    return g;
  });
}

// ---------------------------------------------------------------------------
// Fubini–Study

FubiniStudyBase::FubiniStudyBase(int m, double c0, double chart_bound)
    : m_(m), c0_(c0), chart_bound_(chart_bound) {
  if (m < 1) throw DomainError("Fubini-Study base: m must be >= 1");
  if (!(c0 > 0.0)) throw DomainError("Fubini-Study base: c0 must be positive");
  if (!(chart_bound > 0.0)) throw DomainError("Fubini-Study base: chart bound must be positive");
}

void FubiniStudyBase::check_chart(std::span<const double> z) const {
  if (z.size() != real_dimension()) throw DomainError("Fubini-Study base: wrong coordinate count");
  double norm2 = 0.0;
  for (double v : z) norm2 += v * v;
  if (!(std::sqrt(norm2) < chart_bound_)) {
    std::ostringstream os;
    os << "point |z| = " << std::sqrt(norm2) << " exceeds the chart bound " << chart_bound_;
    throw DomainError(os.str());
  }
}

BaseFields FubiniStudyBase::evaluate(std::span<const Jet2> z) const {
  if (z.size() != real_dimension()) throw DomainError("Fubini-Study base: wrong coordinate count");
  const std::size_t dim = z.front().dim();
  const std::size_t n = real_dimension();

  Jet2 w = Jet2::constant(1.0, dim);
  for (const auto& c : z) w += c * c;
  const Jet2 inv_w = reciprocal(w);
  const Jet2 inv_w2 = inv_w * inv_w;
  const double scale = 4.0 / c0_;

  // Hermitian matrix H_{jk} = (4/c0) (delta_jk / w - conj(z_j) z_k / w^2);
  // h(d x_j, d x_k) = h(d y_j, d y_k) = Re H, h(d x_j, d y_k) = -h(d y_j, d x_k) = Im H.
  BaseFields out{JetMatrix(n, n, dim), JetVector(n, Jet2::constant(0.0, dim)), Mat::Zero(n, n)};
  for (int j = 0; j < m_; ++j) {
    const Jet2& xj = z[2 * j];
    const Jet2& yj = z[2 * j + 1];
    for (int k = 0; k < m_; ++k) {
      const Jet2& xk = z[2 * k];
      const Jet2& yk = z[2 * k + 1];
      Jet2 re = -(xj * xk + yj * yk) * inv_w2;
      if (j == k) re += inv_w;
      re *= scale;
      const Jet2 im = -(xj * yk - yj * xk) * inv_w2 * scale;
      out.h(2 * j, 2 * k) = re;
      out.h(2 * j + 1, 2 * k + 1) = re;
      out.h(2 * j, 2 * k + 1) = im;
      out.h(2 * j + 1, 2 * k) = -im;
    }
    // sigma = (2/c0) sum (x dy - y dx) / w, so that d sigma = Omega_N.
    out.sigma[2 * j] = -(2.0 / c0_) * yj * inv_w;
    out.sigma[2 * j + 1] = (2.0 / c0_) * xj * inv_w;
    out.J(2 * j + 1, 2 * j) = 1.0;
    out.J(2 * j, 2 * j + 1) = -1.0;
  }
  return out;
}

FubiniStudyProductBase::FubiniStudyProductBase(std::vector<int> factor_dims, double c0,
                                               double chart_bound) {
  if (factor_dims.empty()) throw DomainError("product base: no factors");
  for (int m : factor_dims) factors_.emplace_back(m, c0, chart_bound);
}

std::size_t FubiniStudyProductBase::real_dimension() const {
  std::size_t n = 0;
  for (const auto& f : factors_) n += f.real_dimension();
  return n;
}

void FubiniStudyProductBase::check_chart(std::span<const double> z) const {
  if (z.size() != real_dimension()) throw DomainError("product base: wrong coordinate count");
  std::size_t offset = 0;
  for (const auto& f : factors_) {
    f.check_chart(z.subspan(offset, f.real_dimension()));
    offset += f.real_dimension();
  }
}

BaseFields FubiniStudyProductBase::evaluate(std::span<const Jet2> z) const {
  if (z.size() != real_dimension()) throw DomainError("product base: wrong coordinate count");
  const std::size_t dim = z.front().dim();
  const std::size_t n = real_dimension();
  BaseFields out{JetMatrix(n, n, dim), JetVector(n, Jet2::constant(0.0, dim)), Mat::Zero(n, n)};
  std::size_t offset = 0;
  for (const auto& f : factors_) {
    const std::size_t k = f.real_dimension();
    const BaseFields part = f.evaluate(z.subspan(offset, k));
    for (std::size_t i = 0; i < k; ++i) {
      out.sigma[offset + i] = part.sigma[i];
      for (std::size_t j = 0; j < k; ++j) out.h(offset + i, offset + j) = part.h(i, j);
    }
    out.J.block(offset, offset, k, k) = part.J;
    offset += k;
  }
  return out;
}

Mat kahler_form(const BaseFields& base) { return base.J.transpose() * base.h.values(); }

BaseFields fubini_study(int m, double c0, std::span<const double> z) {
  FubiniStudyBase base(m, c0);
  base.check_chart(z);
  const auto jets = seed_all(z);
  return base.evaluate(jets);
}

ConnectionFormSample connection_form(int m, double c0, double s, std::span<const double> z) {
  FubiniStudyBase base(m, c0);
  base.check_chart(z);
  std::vector<double> coords{0.0};
  coords.insert(coords.end(), z.begin(), z.end());
  const auto x = seed_all(coords);
  const BaseFields fields = base.evaluate(std::span<const Jet2>(x).subspan(1));
  ConnectionFormSample out;
  out.sigma = fields.sigma;
  out.theta.push_back(Jet2::constant(1.0, coords.size()));
  for (const auto& c : fields.sigma) out.theta.push_back(s * c);
  out.omega_n = kahler_form(fields);
  return out;
}

Mat exterior_derivative(const JetVector& form, std::size_t offset, std::size_t n) {
  Mat d = Mat::Zero(n, n);
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = 0; b < n; ++b)
      d(a, b) = form[b].gradient(offset + a) - form[a].gradient(offset + b);
  return d;
}

// ---------------------------------------------------------------------------
// Parameters and points

std::vector<double> ChartPoint::coordinates() const {
  std::vector<double> x;
  switch (chart) {
    case ChartKind::total_space:
    case ChartKind::product:
      x = {t, psi};
      break;
    case ChartKind::circle_bundle:
      x = {psi};
      break;
    case ChartKind::base_only:
      break;
  }
  x.insert(x.end(), z.begin(), z.end());
  return x;
}

BundleParams BundleParams::from_k(int n, double c0, int k) {
  BundleParams p;
  p.n = n;
  p.m = n - 1;
  p.c0 = c0;
  p.k = k;
  p.q = n;
  p.s = 2.0 * k / n;
  return p;
}

void BundleParams::validate(bool warped) const {
  if (n < 3) throw ConfigError("n must be >= 3 (real dimension 2n >= 6)");
  if (m != n - 1) throw ConfigError("m must equal n - 1");
  if (!(c0 > 0.0)) throw ConfigError("c0 must be positive");
  if (warped && s == 0.0) throw ConfigError("warped mode requires s != 0");
  if (k.has_value() != q.has_value()) throw ConfigError("k and q must be given together");
  if (k && q) {
    if (*q != n) throw ConfigError("q must equal n for the base CP^{n-1}");
    if (std::abs(s - 2.0 * *k / *q) >= 1e-12) throw ConfigError("s must equal 2k/q");
  }
}

// ---------------------------------------------------------------------------
// Warped total space

WarpedBundleMetric::WarpedBundleMetric(BundleParams params, ProfileSolution profile,
                                       std::shared_ptr<const KahlerBase> base, WarpMode mode,
                                       WarpedOptions options)
    : params_(params), profile_(std::move(profile)), base_(std::move(base)), mode_(mode),
      options_(options) {
  if (!base_) throw DomainError("warped metric: missing base");
  if (mode_ == WarpMode::warped) {
    if (params_.s == 0.0) throw DomainError("warped metric: s = 0 requested in warped mode");
    if (std::abs(profile_.pitch() - params_.s) > 1e-12 * std::abs(params_.s)) {
      throw DomainError("warped metric: profile pitch differs from s");
    }
  }
  if (!(options_.f_scale > 0.0)) throw DomainError("warped metric: f scale must be positive");
  if (!(options_.end_margin >= 0.0 && options_.end_margin < 0.5)) {
    throw DomainError("warped metric: end margin must lie in [0, 0.5)");
  }
  params_.length = profile_.length();
}

WarpedBundleMetric WarpedBundleMetric::with_options(WarpedOptions options) const {
  return WarpedBundleMetric(params_, profile_, base_, mode_, options);
}

Jet2 WarpedBundleMetric::r_jet(const Jet2& t) const {
  const auto d = profile_.at(t.value());
  return t.compose(d.r, d.rp, d.rpp);
}

Jet2 WarpedBundleMetric::f_jet(const Jet2& t) const {
  const auto d = profile_.at(t.value());
  const double k = options_.f_scale * 2.0 / profile_.pitch();
  return t.compose(k * d.r * d.rp, k * (d.rp * d.rp + d.r * d.rpp),
                   k * (3.0 * d.rp * d.rpp + d.r * d.rppp));
}

void WarpedBundleMetric::validate_point(std::span<const double> x) const {
  if (x.size() != dimension()) throw DomainError("warped metric: wrong coordinate count");
  const double len = profile_.length();
  const double margin = end_margin();
  if (!(x[0] >= margin && x[0] <= len - margin)) {
    std::ostringstream os;
    os << "t = " << x[0] << " outside the interior [" << margin << ", " << len - margin << "]";
    throw DomainError(os.str());
  }
  base_->check_chart(x.subspan(2));
}

JetMatrix WarpedBundleMetric::metric(std::span<const Jet2> x) const {
  const std::size_t d = dimension();
  const std::size_t dim = x.front().dim();
  const BaseFields b = base_->evaluate(x.subspan(2));
  const Jet2 f = f_jet(x[0]);
  const Jet2 f2 = f * f;
  const double s = pitch();
  const std::size_t nb = d - 2;

  JetVector theta(nb, Jet2::constant(0.0, dim));
  for (std::size_t a = 0; a < nb; ++a) theta[a] = s * b.sigma[a];

  JetMatrix g(d, d, dim);
  g(0, 0) = Jet2::constant(1.0, dim);
  g(1, 1) = f2;
  if (mode_ == WarpMode::warped) {
    const Jet2 r = r_jet(x[0]);
    const Jet2 r2 = r * r;
    for (std::size_t a = 0; a < nb; ++a) {
      g(1, 2 + a) = f2 * theta[a];
      g(2 + a, 1) = g(1, 2 + a);
      for (std::size_t c = a; c < nb; ++c) {
        g(2 + a, 2 + c) = f2 * theta[a] * theta[c] + r2 * b.h(a, c);
        g(2 + c, 2 + a) = g(2 + a, 2 + c);
      }
    }
  } else {
    for (std::size_t a = 0; a < nb; ++a)
      for (std::size_t c = 0; c < nb; ++c) g(2 + a, 2 + c) = b.h(a, c);
  }
  return g;
}

std::optional<JetMatrix> WarpedBundleMetric::complex_structure(std::span<const Jet2> x) const {
  const std::size_t d = dimension();
  const std::size_t dim = x.front().dim();
  const BaseFields b = base_->evaluate(x.subspan(2));
  const Jet2 f = f_jet(x[0]);
  const double s = pitch();
  const std::size_t nb = d - 2;

  // J d/dt = d/dpsi / f, J d/dpsi = -f d/dt, and for base coordinates
  // J d/dz^a = (J_N d/dz^a)^* - f theta_a d/dt.
  JetMatrix J(d, d, dim);
  J(1, 0) = reciprocal(f);
  J(0, 1) = -f;
  for (std::size_t a = 0; a < nb; ++a) {
    J(0, 2 + a) = -(s * f * b.sigma[a]);
    Jet2 psi = Jet2::constant(0.0, dim);
    for (std::size_t c = 0; c < nb; ++c) {
      if (b.J(c, a) != 0.0) psi -= (s * b.J(c, a)) * b.sigma[c];
      J(2 + c, 2 + a) = Jet2::constant(b.J(c, a), dim);
    }
    J(1, 2 + a) = psi;
  }
  return J;
}

VectorField WarpedBundleMetric::field_H() const {
  const std::size_t d = dimension();
  return [d](std::span<const Jet2> x) {
    JetVector v(d, Jet2::constant(0.0, x.front().dim()));
    v[0] = Jet2::constant(1.0, x.front().dim());
    return v;
  };
}

VectorField WarpedBundleMetric::field_xi() const {
  const std::size_t d = dimension();
  return [d](std::span<const Jet2> x) {
    JetVector v(d, Jet2::constant(0.0, x.front().dim()));
    v[1] = Jet2::constant(1.0, x.front().dim());
    return v;
  };
}

VectorField WarpedBundleMetric::field_JH() const {
  const std::size_t d = dimension();
  return [this, d](std::span<const Jet2> x) {
    JetVector v(d, Jet2::constant(0.0, x.front().dim()));
    v[1] = reciprocal(f_jet(x[0]));
    return v;
  };
}

VectorField WarpedBundleMetric::horizontal_lift(const Vec& base_vector) const {
  const std::size_t d = dimension();
  if (static_cast<std::size_t>(base_vector.size()) != d - 2) {
    throw DomainError("horizontal_lift: base vector has the wrong size");
  }
  return [this, d, base_vector](std::span<const Jet2> x) {
    const std::size_t dim = x.front().dim();
    const BaseFields b = base_->evaluate(x.subspan(2));
    JetVector v(d, Jet2::constant(0.0, dim));
    Jet2 vert = Jet2::constant(0.0, dim);
    for (std::size_t a = 0; a + 2 < d; ++a) {
      v[2 + a] = Jet2::constant(base_vector(a), dim);
      vert -= (pitch() * base_vector(a)) * b.sigma[a];
    }
    v[1] = vert;
    return v;
  };
}

ScalarField WarpedBundleMetric::potential() const {
  return [this](std::span<const Jet2> x) {
    const Jet2 r = r_jet(x[0]);
    return r * r / profile_.pitch();
  };
}

FrameBasis WarpedBundleMetric::frame(std::span<const double> x) const {
  const auto jets = seed_all(x);
  const Mat g = metric(jets).values();
  const Mat J = complex_structure(jets)->values();
  const std::size_t d = dimension();
  const std::size_t nb = d - 2;

  const BaseFields b = base_->evaluate(std::span<const Jet2>(jets).subspan(2));
  std::vector<Vec> base_seeds;
  for (std::size_t a = 0; a < nb; ++a) base_seeds.push_back(Vec::Unit(nb, a));
  const auto base_frame = hermitian_gram_schmidt(b.h.values(), b.J, base_seeds);

  std::vector<Vec> seeds{Vec::Unit(d, 0)};
  for (const Vec& e : base_frame) seeds.push_back(values(horizontal_lift(e)(jets)));
  const auto ortho = hermitian_gram_schmidt(g, J, seeds);
  if (ortho.size() != d) throw NumericalError("warped frame: Gram-Schmidt lost rank");

  FrameBasis out;
  out.H = ortho[0];
  out.JH = ortho[1];
  out.xi = Vec::Unit(d, 1);
  out.E.assign(ortho.begin() + 2, ortho.end());
  return out;
}

MetricSample assemble_metric(const BundleParams& params, const ProfileSolution& profile,
                             const ChartPoint& p, WarpedOptions options) {
  auto base = std::make_shared<FubiniStudyBase>(params.m, params.c0);
  const WarpMode mode = p.chart == ChartKind::product ? WarpMode::product : WarpMode::warped;
  WarpedBundleMetric model(params, profile, base, mode, options);
  const auto x = p.coordinates();
  model.validate_point(x);
  const auto jets = seed_all(x);
  return {model.metric(jets), model.complex_structure(jets)->values(), model.frame(x)};
}

// ---------------------------------------------------------------------------
// Circle bundle

CircleBundleMetric::CircleBundleMetric(double alpha, double beta, double s,
                                       std::shared_ptr<const KahlerBase> base)
    : alpha_(alpha), beta_(beta), s_(s), base_(std::move(base)) {
  if (!(alpha > 0.0) || !(beta > 0.0)) {
    throw DomainError("circle bundle metric: scales alpha and beta must be positive");
  }
  if (!base_) throw DomainError("circle bundle metric: missing base");
}

void CircleBundleMetric::validate_point(std::span<const double> x) const {
  if (x.size() != dimension()) throw DomainError("circle bundle metric: wrong coordinate count");
  base_->check_chart(x.subspan(1));
}

JetMatrix CircleBundleMetric::metric(std::span<const Jet2> x) const {
  const std::size_t d = dimension();
  const std::size_t dim = x.front().dim();
  const BaseFields b = base_->evaluate(x.subspan(1));
  const double a2 = alpha_ * alpha_;
  const double b2 = beta_ * beta_;
  JetMatrix g(d, d, dim);
  g(0, 0) = Jet2::constant(a2, dim);
  for (std::size_t i = 0; i + 1 < d; ++i) {
    const Jet2 ti = s_ * b.sigma[i];
    g(0, 1 + i) = a2 * ti;
    g(1 + i, 0) = g(0, 1 + i);
    for (std::size_t j = i; j + 1 < d; ++j) {
      g(1 + i, 1 + j) = a2 * ti * (s_ * b.sigma[j]) + b2 * b.h(i, j);
      g(1 + j, 1 + i) = g(1 + i, 1 + j);
    }
  }
  return g;
}

VectorField CircleBundleMetric::field_xi() const {
  const std::size_t d = dimension();
  return [d](std::span<const Jet2> x) {
    JetVector v(d, Jet2::constant(0.0, x.front().dim()));
    v[0] = Jet2::constant(1.0, x.front().dim());
    return v;
  };
}

VectorField CircleBundleMetric::horizontal_lift(const Vec& base_vector) const {
  const std::size_t d = dimension();
  if (static_cast<std::size_t>(base_vector.size()) != d - 1) {
    throw DomainError("horizontal_lift: base vector has the wrong size");
  }
  return [this, d, base_vector](std::span<const Jet2> x) {
    const std::size_t dim = x.front().dim();
    const BaseFields b = base_->evaluate(x.subspan(1));
    JetVector v(d, Jet2::constant(0.0, dim));
    for (std::size_t a = 0; a + 1 < d; ++a) {
      v[1 + a] = Jet2::constant(base_vector(a), dim);
      v[0] -= (s_ * base_vector(a)) * b.sigma[a];
    }
    return v;
  };
}

MetricSample circle_bundle_metric(double alpha, double beta, int m, double c0, double s,
                                  const ChartPoint& p) {
  auto base = std::make_shared<FubiniStudyBase>(m, c0);
  CircleBundleMetric model(alpha, beta, s, base);
  ChartPoint q = p;
  q.chart = ChartKind::circle_bundle;
  const auto x = q.coordinates();
  model.validate_point(x);
  const auto jets = seed_all(x);
  MetricSample out{model.metric(jets), Mat(), {}};
  out.frame.xi = Vec::Unit(model.dimension(), 0);
  return out;
}

// ---------------------------------------------------------------------------
// Base-only chart

BaseMetric::BaseMetric(std::shared_ptr<const KahlerBase> base) : base_(std::move(base)) {
  if (!base_) throw DomainError("base metric: missing base");
}

JetMatrix BaseMetric::metric(std::span<const Jet2> x) const { return base_->evaluate(x).h; }

std::optional<JetMatrix> BaseMetric::complex_structure(std::span<const Jet2> x) const {
  const Mat J = base_->evaluate(x).J;
  JetMatrix out(J.rows(), J.cols(), x.front().dim());
  for (Eigen::Index i = 0; i < J.rows(); ++i)
    for (Eigen::Index j = 0; j < J.cols(); ++j)
      out(i, j) = Jet2::constant(J(i, j), x.front().dim());
  return out;
}

// ---------------------------------------------------------------------------
// Frames and helpers

namespace {

bool orthonormalize_into(const Mat& g, std::vector<Vec>& frame, Vec v) {
  const double scale = std::sqrt(std::abs(v.dot(g * v)));
  for (int pass = 0; pass < 2; ++pass)
    for (const Vec& e : frame) v -= e.dot(g * v) * e;
  const double norm = std::sqrt(std::max(0.0, v.dot(g * v)));
  if (!(norm > 1e-10 * std::max(scale, 1e-300))) return false;
  frame.push_back(v / norm);
  return true;
}

}  // namespace

std::vector<Vec> gram_schmidt(const Mat& g, std::span<const Vec> seeds) {
  std::vector<Vec> frame;
  for (const Vec& s : seeds) {
    if (frame.size() == static_cast<std::size_t>(g.rows())) break;
    orthonormalize_into(g, frame, s);
  }
  return frame;
}

std::vector<Vec> hermitian_gram_schmidt(const Mat& g, const Mat& J, std::span<const Vec> seeds) {
  std::vector<Vec> frame;
  for (const Vec& s : seeds) {
    if (frame.size() + 1 >= static_cast<std::size_t>(g.rows())) break;
    if (orthonormalize_into(g, frame, s)) {
      const Vec je = J * frame.back();
      if (!orthonormalize_into(g, frame, je)) {
        throw NumericalError("hermitian_gram_schmidt: J e is dependent on the frame");
      }
    }
  }
  return frame;
}

JetVector apply(const JetMatrix& m, const JetVector& v) {
  JetVector out;
  out.reserve(m.rows());
  for (std::size_t i = 0; i < m.rows(); ++i) {
    Jet2 acc = m(i, 0) * v[0];
    for (std::size_t j = 1; j < m.cols(); ++j) acc += m(i, j) * v[j];
    out.push_back(std::move(acc));
  }
  return out;
}

Vec values(const JetVector& v) {
  Vec out(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) out(i) = v[i].value();
  return out;
}

VectorField constant_field(const Vec& v) {
  return [v](std::span<const Jet2> x) {
    JetVector out;
    for (Eigen::Index i = 0; i < v.size(); ++i) out.push_back(Jet2::constant(v(i), x.front().dim()));
    return out;
  };
}

VectorField apply_complex_structure(const MetricModel& model, VectorField field) {
  return [&model, field = std::move(field)](std::span<const Jet2> x) {
    const auto J = model.complex_structure(x);
    if (!J) throw DomainError("model has no complex structure");
    return qchk::apply(*J, field(x));
  };
}

double kahler_form_defect(const MetricModel& model, std::span<const double> x) {
  const auto jets = seed_all(x);
  const auto J = model.complex_structure(jets);
  if (!J) throw DomainError("kahler_form_defect: model has no complex structure");
  const JetMatrix g = model.metric(jets);
  const std::size_t d = model.dimension();
  std::vector<Jet2> omega(d * d);
  for (std::size_t a = 0; a < d; ++a) {
    for (std::size_t b = 0; b < d; ++b) {
      Jet2 sum = Jet2::constant(0.0, d);
      for (std::size_t c = 0; c < d; ++c) sum += (*J)(c, a) * g(c, b);
      omega[a * d + b] = std::move(sum);
    }
  }
  double worst = 0.0;
  for (std::size_t a = 0; a < d; ++a) {
    for (std::size_t b = a + 1; b < d; ++b) {
      for (std::size_t c = b + 1; c < d; ++c) {
        const double dw = omega[b * d + c].gradient(a) + omega[c * d + a].gradient(b) +
                          omega[a * d + b].gradient(c);
        worst = std::max(worst, std::abs(dw));
      }
    }
  }
  return worst;
}

}  // namespace qchk
