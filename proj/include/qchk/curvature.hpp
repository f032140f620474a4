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
#include <optional>
#include <span>
#include <vector>

#include "qchk/geometry.hpp"

namespace qchk {

/// Levi-Civita connection at a point, with the metric data it was built from.
struct Connection {
  std::size_t dim = 0;
  Mat g;
  Mat g_inv;
  std::vector<double> dg;      // d_i g_jk at [(i*d + j)*d + k]
  std::vector<double> ddg;     // d_i d_j g_kl
  std::vector<double> lower;   // Gamma_{l,jk} = g(nabla_j d_k, d_l) at [(l*d + j)*d + k]
  std::vector<double> gamma;   // Gamma^k_{ij} at [(k*d + i)*d + j]
  std::vector<double> dgamma;  // d_l Gamma^k_{ij} at [((l*d + k)*d + i)*d + j]

  double Gamma(std::size_t k, std::size_t i, std::size_t j) const {
    return gamma[(k * dim + i) * dim + j];
  }
  double Lower(std::size_t l, std::size_t j, std::size_t k) const {
    return lower[(l * dim + j) * dim + k];
  }
  double dGamma(std::size_t l, std::size_t k, std::size_t i, std::size_t j) const {
    return dgamma[((l * dim + k) * dim + i) * dim + j];
  }
  /// Gamma(X, Y)^k = Gamma^k_{ij} X^i Y^j.
  Vec contract(const Vec& X, const Vec& Y) const;
};

Connection christoffel(const MetricModel& model, std::span<const double> x);

/// R_{ijkl} = g(R(d_i, d_j) d_k, d_l) with R(X,Y) = [nabla_X, nabla_Y] - nabla_[X,Y].
class Curvature4 {
 public:
  Curvature4() = default;
  explicit Curvature4(std::size_t dim);

  std::size_t dimension() const noexcept { return dim_; }
  double& operator()(std::size_t i, std::size_t j, std::size_t k, std::size_t l) {
    return data_[((i * dim_ + j) * dim_ + k) * dim_ + l];
  }
  double operator()(std::size_t i, std::size_t j, std::size_t k, std::size_t l) const {
    return data_[((i * dim_ + j) * dim_ + k) * dim_ + l];
  }
  double evaluate(const Vec& X, const Vec& Y, const Vec& Z, const Vec& W) const;
  double max_abs() const;
  std::span<const double> data() const noexcept { return data_; }

 private:
  std::size_t dim_ = 0;
  std::vector<double> data_;
};

/// Symmetry defects of R, each relative to max |R_{ijkl}| (absolute when R = 0).
struct CurvatureSymmetry {
  double antisym_first = 0.0;
  double antisym_last = 0.0;
  double pair = 0.0;
  double bianchi = 0.0;
  std::optional<double> kahler;  // R(JX, JY, Z, W) - R(X, Y, Z, W), coordinate components
};

Curvature4 riemann(const Connection& conn);
Curvature4 riemann(const MetricModel& model, std::span<const double> x);
/// rho_{jk} = g^{il} R_{ijkl}.
Mat ricci(const Curvature4& R, const Mat& g_inv);
Mat ricci(const MetricModel& model, std::span<const double> x);
CurvatureSymmetry symmetry_defects(const Curvature4& R, const std::optional<Mat>& J = std::nullopt);

/// R(X,Y,Y,X) / (|X|^2 |Y|^2 - g(X,Y)^2). Throws DomainError for a degenerate plane.
double sectional(const Curvature4& R, const Mat& g, const Vec& X, const Vec& Y);
/// R(X,JX,JX,X) / |X|^4. Throws DomainError for X = 0.
double holomorphic_sectional(const Curvature4& R, const Mat& g, const Mat& J, const Vec& X);

/// Everything the pointwise checks need at one point of one model.
class LocalGeometry {
 public:
  LocalGeometry(const MetricModel& model, std::span<const double> x);

  const MetricModel& model() const noexcept { return *model_; }
  std::size_t dimension() const noexcept { return x_.size(); }
  std::span<const double> point() const noexcept { return x_; }
  std::span<const Jet2> jets() const noexcept { return jets_; }
  const Mat& g() const noexcept { return conn_.g; }
  const Mat& g_inv() const noexcept { return conn_.g_inv; }
  const Connection& connection() const noexcept { return conn_; }
  /// Complex structure values; throws DomainError when the model has none.
  const Mat& J() const;
  bool has_complex_structure() const noexcept { return J_.has_value(); }
  const std::optional<JetMatrix>& J_jets() const noexcept { return J_jets_; }
  const Curvature4& R() const noexcept { return R_; }
  const Mat& ricci() const noexcept { return ricci_; }

  double inner(const Vec& X, const Vec& Y) const { return X.dot(conn_.g * Y); }
  double norm(const Vec& X) const;
  JetVector field(const VectorField& Y) const { return Y(jets_); }
  /// nabla_X Y for a jet-evaluated field Y.
  Vec nabla(const Vec& X, const JetVector& Y) const;
  /// g(nabla_X Y, Z) from lowered Christoffel symbols; no inverse metric involved.
  double nabla_inner(const Vec& X, const JetVector& Y, const Vec& Z) const;
  /// Orthonormal frame from the coordinate basis.
  std::vector<Vec> orthonormal_frame() const;

 private:
  const MetricModel* model_;
  std::vector<double> x_;
  std::vector<Jet2> jets_;
  Connection conn_;
  std::optional<Mat> J_;
  std::optional<JetMatrix> J_jets_;
  Curvature4 R_;
  Mat ricci_;
};

/// (nabla_a J)^k_b at [(a*d + k)*d + b], plus the largest orthonormal-frame component.
struct NablaJ {
  std::vector<double> components;
  double max_frame = 0.0;
};
NablaJ nabla_J(const LocalGeometry& geom);

/// A vector field's value and Jacobian (jacobian(k, a) = d_a X^k) at one point.
struct FieldJet {
  Vec value;
  Mat jacobian;
};
FieldJet evaluate_field(const LocalGeometry& geom, const VectorField& X);

/// (L_X g)_{ab} in coordinates: X^k d_k g_ab + g_kb d_a X^k + g_ak d_b X^k.
Mat killing_deviation(const LocalGeometry& geom, const FieldJet& X);
Mat killing_deviation(const LocalGeometry& geom, const VectorField& X);
/// nabla d tau in coordinates.
Mat hessian_form(const LocalGeometry& geom, const ScalarField& tau);
/// sum_i g(nabla_{e_i} X, e_i) over an orthonormal frame of E.
double div_E(const LocalGeometry& geom, const VectorField& X, std::span<const Vec> E);
/// Largest |B(e_i, e_j)| over an orthonormal frame.
double frame_max(const LocalGeometry& geom, const Mat& bilinear);

/// |(nabla_U R)(V,W,X,Y) + (nabla_V R)(W,U,X,Y) + (nabla_W R)(U,V,X,Y)| with d R
/// taken by central differences of step h along U, V and W.
double second_bianchi_residual(const MetricModel& model, std::span<const double> x, const Vec& U,
                               const Vec& V, const Vec& W, const Vec& X, const Vec& Y,
                               double h = 1e-5);

}  // namespace qchk
