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

#pragma once

#include <cstddef>
#include <functional>
#include <memory>
#include <optional>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "qchk/jet.hpp"
#include "qchk/profile.hpp"

namespace qchk {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;
using JetVector = std::vector<Jet2>;

/// Dense matrix of jets. For a complex structure, column b holds J(d/dx^b).
class JetMatrix {
 public:
  JetMatrix() = default;
  JetMatrix(std::size_t rows, std::size_t cols, std::size_t dim);

  Jet2& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
  const Jet2& operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }
  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  Mat values() const;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<Jet2> data_;
};

/// Fields are evaluated on seeded coordinate jets, so the returned components
/// carry their exact first and second coordinate derivatives.
using VectorField = std::function<JetVector(std::span<const Jet2>)>;
using ScalarField = std::function<Jet2(std::span<const Jet2>)>;

/// A Riemannian metric on a coordinate chart, evaluable in jets.
class MetricModel {
 public:
  virtual ~MetricModel() = default;
  virtual std::size_t dimension() const = 0;
  virtual JetMatrix metric(std::span<const Jet2> x) const = 0;
  /// Almost complex structure, when the model carries one.
  virtual std::optional<JetMatrix> complex_structure(std::span<const Jet2> /*x*/) const {
    return std::nullopt;
  }
  /// Throws DomainError when x is outside the region where the chart is trusted.
  virtual void validate_point(std::span<const double> /*x*/) const {}
};

/// Metric given by callables; used for flat and hand-built test metrics.
class FunctionalMetric final : public MetricModel {
 public:
  using MetricFn = std::function<JetMatrix(std::span<const Jet2>)>;
  FunctionalMetric(std::size_t dim, MetricFn metric, MetricFn complex_structure = {});

  std::size_t dimension() const override { return dim_; }
  JetMatrix metric(std::span<const Jet2> x) const override { return metric_(x); }
  std::optional<JetMatrix> complex_structure(std::span<const Jet2> x) const override;

  static FunctionalMetric euclidean(std::size_t dim);

 private:
  std::size_t dim_;
  MetricFn metric_;
  MetricFn complex_;
};

// ---------------------------------------------------------------------------
// Kähler bases

/// Base metric h, connection potential sigma (d sigma = Omega_N) and the
/// constant complex structure J_N, all in the real affine coordinates
/// (x_1, y_1, ..., x_m, y_m).
struct BaseFields {
  JetMatrix h;
  JetVector sigma;
  Mat J;
};

class KahlerBase {
 public:
  virtual ~KahlerBase() = default;
  virtual std::size_t real_dimension() const = 0;
  /// `z` may be seeded in a larger ambient chart; only their arithmetic is used.
  virtual BaseFields evaluate(std::span<const Jet2> z) const = 0;
  virtual void check_chart(std::span<const double> z) const = 0;
};

/// Fubini–Study metric on CP^m with holomorphic sectional curvature c0, from
/// the potential (4/c0) ln(1 + |z|^2) on one affine chart.
class FubiniStudyBase final : public KahlerBase {
 public:
  FubiniStudyBase(int m, double c0, double chart_bound = 4.0);

  std::size_t real_dimension() const override { return static_cast<std::size_t>(2 * m_); }
  BaseFields evaluate(std::span<const Jet2> z) const override;
  void check_chart(std::span<const double> z) const override;

  int complex_dimension() const noexcept { return m_; }
  double c0() const noexcept { return c0_; }

 private:
  int m_;
  double c0_;
  double chart_bound_;
};

/// Riemannian product of Fubini–Study factors with the same c0. For two or
/// more factors it is Kähler–Einstein without constant holomorphic curvature.
class FubiniStudyProductBase final : public KahlerBase {
 public:
  FubiniStudyProductBase(std::vector<int> factor_dims, double c0, double chart_bound = 4.0);

  std::size_t real_dimension() const override;
  BaseFields evaluate(std::span<const Jet2> z) const override;
  void check_chart(std::span<const double> z) const override;

 private:
  std::vector<FubiniStudyBase> factors_;
};

/// Omega_N(X, Y) = h(J X, Y) as a matrix of values.
Mat kahler_form(const BaseFields& base);

/// h and Omega_N at z, seeded in the 2m base coordinates.
BaseFields fubini_study(int m, double c0, std::span<const double> z);

struct ConnectionFormSample {
  JetVector sigma;  // components along (x_1, y_1, ...), seeded in (psi, z)
  JetVector theta;  // theta = d psi + s sigma, components along (psi, z)
  Mat omega_n;      // Omega_N values on the base coordinates
};

/// Seeds (psi = 0, z) in dimension 2m + 1.
ConnectionFormSample connection_form(int m, double c0, double s, std::span<const double> z);

/// Exterior derivative of a 1-form from jet gradients: (d w)_{ab} = d_a w_b - d_b w_a,
/// restricted to the coordinate indices [offset, offset + n).
Mat exterior_derivative(const JetVector& form, std::size_t offset, std::size_t n);

// ---------------------------------------------------------------------------
// Warped total space

enum class ChartKind { total_space, base_only, circle_bundle, product };

/// Coordinates (t, psi, z) on (0, L) x S^1 x (affine chart of the base).
struct ChartPoint {
  double t = 0.0;
  double psi = 0.0;
  std::vector<double> z;
  ChartKind chart = ChartKind::total_space;

  /// Flattened coordinates in the chart's own order.
  std::vector<double> coordinates() const;
};

struct BundleParams {
  int n = 3;
  int m = 2;
  double c0 = 4.0;
  double s = 2.0 / 3.0;
  std::optional<int> k;
  std::optional<int> q;
  double length = 0.0;

  /// s = 2k/q with q = n (base CP^{n-1}).
  static BundleParams from_k(int n, double c0, int k);
  /// Throws ConfigError describing the first violated invariant.
  void validate(bool warped) const;
};

/// Unit frame at a point: H = d/dt, the fiber generator xi (theta(xi) = 1),
/// JH = xi / f and the 2m horizontal lifts E_i (J-adapted: E_{2i+1} = J E_{2i}).
struct FrameBasis {
  Vec H;
  Vec xi;
  Vec JH;
  std::vector<Vec> E;
};

struct MetricSample {
  JetMatrix g;
  Mat J;  // empty on odd-dimensional charts
  FrameBasis frame;
};

enum class WarpMode { warped, product };

struct WarpedOptions {
  /// Multiplies f in both the metric and J; 1 gives the Kähler metric.
  double f_scale = 1.0;
  /// Interior margin as a fraction of L.
  double end_margin = 1e-3;
};

/// g = dt^2 + f(t)^2 theta^2 + r(t)^2 p*h (warped, s != 0) or
/// g = dt^2 + f(t)^2 dpsi^2 + p*h (product, s = 0), with f = 2 r r' / s_profile,
/// and J H = xi / f, J X^* = (J_N X)^*.
class WarpedBundleMetric final : public MetricModel {
 public:
  WarpedBundleMetric(BundleParams params, ProfileSolution profile,
                     std::shared_ptr<const KahlerBase> base, WarpMode mode = WarpMode::warped,
                     WarpedOptions options = {});

  std::size_t dimension() const override { return 2 + base_->real_dimension(); }
  JetMatrix metric(std::span<const Jet2> x) const override;
  std::optional<JetMatrix> complex_structure(std::span<const Jet2> x) const override;
  void validate_point(std::span<const double> x) const override;

  const BundleParams& params() const noexcept { return params_; }
  const ProfileSolution& profile() const noexcept { return profile_; }
  const KahlerBase& base() const noexcept { return *base_; }
  WarpMode mode() const noexcept { return mode_; }
  /// Connection pitch actually used in theta (0 in product mode).
  double pitch() const noexcept { return mode_ == WarpMode::warped ? params_.s : 0.0; }
  double end_margin() const noexcept { return options_.end_margin * profile_.length(); }
  const WarpedOptions& options() const noexcept { return options_; }
  /// Copy of this model with different options (same profile and base).
  WarpedBundleMetric with_options(WarpedOptions options) const;

  Jet2 r_jet(const Jet2& t) const;
  Jet2 f_jet(const Jet2& t) const;

  VectorField field_H() const;
  VectorField field_xi() const;
  VectorField field_JH() const;
  /// Horizontal lift of a coordinate-constant base vector v: v - (s sigma . v) d/dpsi.
  VectorField horizontal_lift(const Vec& base_vector) const;
  /// tau = r^2 / s.
  ScalarField potential() const;

  FrameBasis frame(std::span<const double> x) const;

 private:
  BundleParams params_;
  ProfileSolution profile_;
  std::shared_ptr<const KahlerBase> base_;
  WarpMode mode_;
  WarpedOptions options_;
};

/// Evaluates the warped metric with a Fubini–Study base at p.
MetricSample assemble_metric(const BundleParams& params, const ProfileSolution& profile,
                             const ChartPoint& p, WarpedOptions options = {});

/// g = alpha^2 theta (x) theta + beta^2 p*h on the (2m+1)-dimensional circle
/// bundle, coordinates (psi, z).
class CircleBundleMetric final : public MetricModel {
 public:
  CircleBundleMetric(double alpha, double beta, double s, std::shared_ptr<const KahlerBase> base);

  std::size_t dimension() const override { return 1 + base_->real_dimension(); }
  JetMatrix metric(std::span<const Jet2> x) const override;
  void validate_point(std::span<const double> x) const override;

  double alpha() const noexcept { return alpha_; }
  double beta() const noexcept { return beta_; }
  double pitch() const noexcept { return s_; }
  const KahlerBase& base() const noexcept { return *base_; }

  VectorField field_xi() const;
  VectorField horizontal_lift(const Vec& base_vector) const;

 private:
  double alpha_;
  double beta_;
  double s_;
  std::shared_ptr<const KahlerBase> base_;
};

MetricSample circle_bundle_metric(double alpha, double beta, int m, double c0, double s,
                                  const ChartPoint& p);

/// Kähler-type base-only chart (h, J_N), coordinates z.
class BaseMetric final : public MetricModel {
 public:
  explicit BaseMetric(std::shared_ptr<const KahlerBase> base);

  std::size_t dimension() const override { return base_->real_dimension(); }
  JetMatrix metric(std::span<const Jet2> x) const override;
  std::optional<JetMatrix> complex_structure(std::span<const Jet2> x) const override;
  void validate_point(std::span<const double> x) const override { base_->check_chart(x); }

 private:
  std::shared_ptr<const KahlerBase> base_;
};

// ---------------------------------------------------------------------------
// Frames and field helpers

/// Gram–Schmidt in g over `seeds`, skipping (numerically) dependent vectors.
std::vector<Vec> gram_schmidt(const Mat& g, std::span<const Vec> seeds);

/// J-adapted Gram–Schmidt: every accepted seed e is followed by J e.
std::vector<Vec> hermitian_gram_schmidt(const Mat& g, const Mat& J, std::span<const Vec> seeds);

JetVector apply(const JetMatrix& m, const JetVector& v);
Vec values(const JetVector& v);
VectorField constant_field(const Vec& v);
/// J applied to a field, using the model's jet-valued complex structure.
VectorField apply_complex_structure(const MetricModel& model, VectorField field);

/// max |d Omega| over coordinate triples, Omega(X, Y) = g(JX, Y), from jet gradients.
/// Throws DomainError when the model has no complex structure.
double kahler_form_defect(const MetricModel& model, std::span<const double> x);

}  // namespace qchk
