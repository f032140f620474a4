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

#include "qchk/curvature.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "qchk/errors.hpp"

namespace qchk {

Vec Connection::contract(const Vec& X, const Vec& Y) const {
  Vec out = Vec::Zero(dim);
  for (std::size_t k = 0; k < dim; ++k)
    for (std::size_t i = 0; i < dim; ++i) {
      if (X(i) == 0.0) continue;
      for (std::size_t j = 0; j < dim; ++j) out(k) += Gamma(k, i, j) * X(i) * Y(j);
    }
  return out;
}

namespace {

Mat checked_inverse(const Mat& g) {
  Eigen::LLT<Mat> llt(g);
  if (llt.info() != Eigen::Success) throw NumericalError("metric is not positive definite");
  Mat inv = llt.solve(Mat::Identity(g.rows(), g.cols()));
  return 0.5 * (inv + inv.transpose());
}

}  // namespace

Connection christoffel(const MetricModel& model, std::span<const double> x) {
  const std::size_t d = model.dimension();
  if (x.size() != d) throw DomainError("christoffel: wrong coordinate count");
  const auto jets = seed_all(x);
  const JetMatrix gj = model.metric(jets);

  Connection c;
  c.dim = d;
  c.g = gj.values();
  c.g = 0.5 * (c.g + c.g.transpose());
  c.g_inv = checked_inverse(c.g);

  const std::size_t d2 = d * d, d3 = d2 * d;
  c.dg.assign(d3, 0.0);
  c.ddg.assign(d3 * d, 0.0);
  for (std::size_t j = 0; j < d; ++j)
    for (std::size_t k = 0; k < d; ++k) {
      const Jet2& e = gj(j, k);
      for (std::size_t i = 0; i < d; ++i) {
        c.dg[(i * d + j) * d + k] = e.gradient(i);
        for (std::size_t l = 0; l < d; ++l) c.ddg[((i * d + l) * d + j) * d + k] = e.hessian(i, l);
      }
    }
  auto dg = [&](std::size_t i, std::size_t j, std::size_t k) { return c.dg[(i * d + j) * d + k]; };
  auto ddg = [&](std::size_t i, std::size_t j, std::size_t k, std::size_t l) {
    return c.ddg[((i * d + j) * d + k) * d + l];
  };

  c.lower.assign(d3, 0.0);
  for (std::size_t l = 0; l < d; ++l)
    for (std::size_t j = 0; j < d; ++j)
      for (std::size_t k = j; k < d; ++k) {
        const double v = 0.5 * (dg(j, k, l) + dg(k, j, l) - dg(l, j, k));
        c.lower[(l * d + j) * d + k] = v;
        c.lower[(l * d + k) * d + j] = v;
      }

  c.gamma.assign(d3, 0.0);
  for (std::size_t k = 0; k < d; ++k)
    for (std::size_t i = 0; i < d; ++i)
      for (std::size_t j = i; j < d; ++j) {
        double v = 0.0;
        for (std::size_t l = 0; l < d; ++l) v += c.g_inv(k, l) * c.Lower(l, i, j);
        c.gamma[(k * d + i) * d + j] = v;
        c.gamma[(k * d + j) * d + i] = v;
      }

  // d_l Gamma^k_ij = g^{km} (d_l Gamma_{m,ij} - d_l g_{mp} Gamma^p_ij)
  c.dgamma.assign(d3 * d, 0.0);
  std::vector<double> tmp(d);
  for (std::size_t l = 0; l < d; ++l)
    for (std::size_t i = 0; i < d; ++i)
      for (std::size_t j = i; j < d; ++j) {
        for (std::size_t m = 0; m < d; ++m) {
          double v = 0.5 * (ddg(l, i, j, m) + ddg(l, j, i, m) - ddg(l, m, i, j));
          for (std::size_t p = 0; p < d; ++p) v -= dg(l, m, p) * c.Gamma(p, i, j);
          tmp[m] = v;
        }
        for (std::size_t k = 0; k < d; ++k) {
          double v = 0.0;
          for (std::size_t m = 0; m < d; ++m) v += c.g_inv(k, m) * tmp[m];
          c.dgamma[((l * d + k) * d + i) * d + j] = v;
          c.dgamma[((l * d + k) * d + j) * d + i] = v;
        }
      }
  return c;
}

// ---------------------------------------------------------------------------

Curvature4::Curvature4(std::size_t dim) : dim_(dim), data_(dim * dim * dim * dim, 0.0) {}

double Curvature4::evaluate(const Vec& X, const Vec& Y, const Vec& Z, const Vec& W) const {
  const std::size_t d = dim_;
  double acc = 0.0;
  for (std::size_t i = 0; i < d; ++i) {
    if (X(i) == 0.0) continue;
    for (std::size_t j = 0; j < d; ++j) {
      const double xy = X(i) * Y(j);
      if (xy == 0.0) continue;
      for (std::size_t k = 0; k < d; ++k) {
        const double xyz = xy * Z(k);
        if (xyz == 0.0) continue;
        const double* row = &data_[((i * d + j) * d + k) * d];
        for (std::size_t l = 0; l < d; ++l) acc += xyz * row[l] * W(l);
      }
    }
  }
  return acc;
}

double Curvature4::max_abs() const {
  double m = 0.0;
  for (double v : data_) m = std::max(m, std::abs(v));
  return m;
}

Curvature4 riemann(const Connection& c) {
  const std::size_t d = c.dim;
  Curvature4 R(d);
  auto ddg = [&](std::size_t i, std::size_t j, std::size_t k, std::size_t l) {
    return c.ddg[((i * d + j) * d + k) * d + l];
  };
  for (std::size_t i = 0; i < d; ++i)
    for (std::size_t j = 0; j < d; ++j)
      for (std::size_t k = 0; k < d; ++k)
        for (std::size_t l = 0; l < d; ++l) {
          double v = 0.5 * (ddg(i, k, j, l) - ddg(i, l, j, k) - ddg(j, k, i, l) + ddg(j, l, i, k));
          for (std::size_t p = 0; p < d; ++p) {
            v += c.Gamma(p, i, k) * c.Lower(p, j, l) - c.Gamma(p, j, k) * c.Lower(p, i, l);
          }
          R(i, j, k, l) = v;
        }
  return R;
}

Curvature4 riemann(const MetricModel& model, std::span<const double> x) {
  return riemann(christoffel(model, x));
}

Mat ricci(const Curvature4& R, const Mat& g_inv) {
  const std::size_t d = R.dimension();
  Mat rho = Mat::Zero(d, d);
  for (std::size_t j = 0; j < d; ++j)
    for (std::size_t k = 0; k < d; ++k) {
      double v = 0.0;
      for (std::size_t i = 0; i < d; ++i)
        for (std::size_t l = 0; l < d; ++l) v += g_inv(i, l) * R(i, j, k, l);
      rho(j, k) = v;
    }
  return rho;
}

Mat ricci(const MetricModel& model, std::span<const double> x) {
  const Connection c = christoffel(model, x);
  return ricci(riemann(c), c.g_inv);
}

CurvatureSymmetry symmetry_defects(const Curvature4& R, const std::optional<Mat>& J) {
  const std::size_t d = R.dimension();
  const double scale = std::max(R.max_abs(), 1e-300) > 1e-300 ? R.max_abs() : 1.0;
  CurvatureSymmetry s;
  for (std::size_t i = 0; i < d; ++i)
    for (std::size_t j = 0; j < d; ++j)
      for (std::size_t k = 0; k < d; ++k)
        for (std::size_t l = 0; l < d; ++l) {
          const double r = R(i, j, k, l);
          s.antisym_first = std::max(s.antisym_first, std::abs(r + R(j, i, k, l)));
          s.antisym_last = std::max(s.antisym_last, std::abs(r + R(i, j, l, k)));
          s.pair = std::max(s.pair, std::abs(r - R(k, l, i, j)));
          s.bianchi = std::max(s.bianchi, std::abs(r + R(j, k, i, l) + R(k, i, j, l)));
        }
  s.antisym_first /= scale;
  s.antisym_last /= scale;
  s.pair /= scale;
  s.bianchi /= scale;
  if (J) {
    double worst = 0.0;
    for (std::size_t i = 0; i < d; ++i)
      for (std::size_t j = 0; j < d; ++j) {
        const Vec ji = J->col(i);
        const Vec jj = J->col(j);
        for (std::size_t k = 0; k < d; ++k)
          for (std::size_t l = 0; l < d; ++l) {
            const double v =
                R.evaluate(ji, jj, Vec::Unit(d, k), Vec::Unit(d, l)) - R(i, j, k, l);
            worst = std::max(worst, std::abs(v));
          }
      }
    s.kahler = worst / scale;
  }
  return s;
}

double sectional(const Curvature4& R, const Mat& g, const Vec& X, const Vec& Y) {
  const double xx = X.dot(g * X), yy = Y.dot(g * Y), xy = X.dot(g * Y);
  const double area = xx * yy - xy * xy;
  if (!(area > 1e-24 * std::max(xx * yy, 1e-300))) throw DomainError("sectional: degenerate plane");
  return R.evaluate(X, Y, Y, X) / area;
}

double holomorphic_sectional(const Curvature4& R, const Mat& g, const Mat& J, const Vec& X) {
  const double xx = X.dot(g * X);
  if (!(xx > 0.0)) throw DomainError("holomorphic_sectional: zero vector");
  const Vec JX = J * X;
  return R.evaluate(X, JX, JX, X) / (xx * xx);
}

// ---------------------------------------------------------------------------

LocalGeometry::LocalGeometry(const MetricModel& model, std::span<const double> x)
    : model_(&model), x_(x.begin(), x.end()) {
  model.validate_point(x);
  jets_ = seed_all(x_);
  conn_ = christoffel(model, x_);
  J_jets_ = model.complex_structure(jets_);
  if (J_jets_) J_ = J_jets_->values();
  R_ = riemann(conn_);
  ricci_ = qchk::ricci(R_, conn_.g_inv);
}

const Mat& LocalGeometry::J() const {
  if (!J_) throw DomainError("model has no complex structure");
  return *J_;
}

double LocalGeometry::norm(const Vec& X) const { return std::sqrt(std::max(0.0, inner(X, X))); }

Vec LocalGeometry::nabla(const Vec& X, const JetVector& Y) const {
  const std::size_t d = dimension();
  Vec y(d), dy = Vec::Zero(d);
  for (std::size_t k = 0; k < d; ++k) {
    y(k) = Y[k].value();
    for (std::size_t i = 0; i < d; ++i) dy(k) += X(i) * Y[k].gradient(i);
  }
  return dy + conn_.contract(X, y);
}

double LocalGeometry::nabla_inner(const Vec& X, const JetVector& Y, const Vec& Z) const {
  const std::size_t d = dimension();
  Vec dy = Vec::Zero(d);
  double acc = 0.0;
  for (std::size_t k = 0; k < d; ++k)
    for (std::size_t i = 0; i < d; ++i) dy(k) += X(i) * Y[k].gradient(i);
  acc += dy.dot(conn_.g * Z);
  for (std::size_t l = 0; l < d; ++l) {
    if (Z(l) == 0.0) continue;
    for (std::size_t i = 0; i < d; ++i) {
      if (X(i) == 0.0) continue;
      for (std::size_t j = 0; j < d; ++j) acc += conn_.Lower(l, i, j) * X(i) * Y[j].value() * Z(l);
    }
  }
  return acc;
}

std::vector<Vec> LocalGeometry::orthonormal_frame() const {
  std::vector<Vec> seeds;
  for (std::size_t i = 0; i < dimension(); ++i) seeds.push_back(Vec::Unit(dimension(), i));
  return gram_schmidt(conn_.g, seeds);
}

// ---------------------------------------------------------------------------

NablaJ nabla_J(const LocalGeometry& geom) {
  if (!geom.J_jets()) throw DomainError("nabla_J: model has no complex structure");
  const std::size_t d = geom.dimension();
  const JetMatrix& Jj = *geom.J_jets();
  const Mat& J = geom.J();
  const Connection& c = geom.connection();

  NablaJ out;
  out.components.assign(d * d * d, 0.0);
  for (std::size_t a = 0; a < d; ++a)
    for (std::size_t k = 0; k < d; ++k)
      for (std::size_t b = 0; b < d; ++b) {
        double v = Jj(k, b).gradient(a);
        for (std::size_t p = 0; p < d; ++p) v += c.Gamma(k, a, p) * J(p, b) - J(k, p) * c.Gamma(p, a, b);
        out.components[(a * d + k) * d + b] = v;
      }

  const auto frame = geom.orthonormal_frame();
  for (const Vec& ea : frame)
    for (const Vec& eb : frame) {
      Vec w = Vec::Zero(d);
      for (std::size_t a = 0; a < d; ++a)
        for (std::size_t k = 0; k < d; ++k)
          for (std::size_t b = 0; b < d; ++b) w(k) += ea(a) * out.components[(a * d + k) * d + b] * eb(b);
      out.max_frame = std::max(out.max_frame, geom.norm(w));
    }
  return out;
}

FieldJet evaluate_field(const LocalGeometry& geom, const VectorField& X) {
  const std::size_t d = geom.dimension();
  const JetVector xj = geom.field(X);
  FieldJet out{Vec(d), Mat(d, d)};
  for (std::size_t k = 0; k < d; ++k) {
    out.value(k) = xj[k].value();
    for (std::size_t a = 0; a < d; ++a) out.jacobian(k, a) = xj[k].gradient(a);
  }
  return out;
}

Mat killing_deviation(const LocalGeometry& geom, const FieldJet& X) {
  const std::size_t d = geom.dimension();
  const Connection& c = geom.connection();
  Mat L = Mat::Zero(d, d);
  for (std::size_t a = 0; a < d; ++a)
    for (std::size_t b = a; b < d; ++b) {
      double v = 0.0;
      for (std::size_t k = 0; k < d; ++k) {
        v += X.value(k) * c.dg[(k * d + a) * d + b];
        v += c.g(k, b) * X.jacobian(k, a) + c.g(a, k) * X.jacobian(k, b);
      }
      L(a, b) = v;
      L(b, a) = v;
    }
  return L;
}

Mat killing_deviation(const LocalGeometry& geom, const VectorField& X) {
  return killing_deviation(geom, evaluate_field(geom, X));
}

Mat hessian_form(const LocalGeometry& geom, const ScalarField& tau) {
  const std::size_t d = geom.dimension();
  const Jet2 t = tau(geom.jets());
  const Connection& c = geom.connection();
  Vec grad(d);
  for (std::size_t k = 0; k < d; ++k) grad(k) = t.gradient(k);
  Mat Hs(d, d);
  for (std::size_t a = 0; a < d; ++a)
    for (std::size_t b = a; b < d; ++b) {
      double v = t.hessian(a, b);
      for (std::size_t k = 0; k < d; ++k) v -= c.Gamma(k, a, b) * grad(k);
      Hs(a, b) = v;
      Hs(b, a) = v;
    }
  return Hs;
}

double div_E(const LocalGeometry& geom, const VectorField& X, std::span<const Vec> E) {
  const JetVector xj = geom.field(X);
  double acc = 0.0;
  for (const Vec& e : E) acc += geom.nabla_inner(e, xj, e);
  return acc;
}

double frame_max(const LocalGeometry& geom, const Mat& bilinear) {
  const auto frame = geom.orthonormal_frame();
  double m = 0.0;
  for (const Vec& a : frame)
    for (const Vec& b : frame) m = std::max(m, std::abs(a.dot(bilinear * b)));
  return m;
}

double second_bianchi_residual(const MetricModel& model, std::span<const double> x, const Vec& U,
                               const Vec& V, const Vec& W, const Vec& X, const Vec& Y, double h) {
  const Connection c = christoffel(model, x);
  const Curvature4 R0 = riemann(c);
  std::vector<double> base(x.begin(), x.end());

  // (nabla_A R)(B, C, X, Y) with A, B, C, X, Y coordinate-constant.
  auto covariant = [&](const Vec& A, const Vec& B, const Vec& C) {
    std::vector<double> plus = base, minus = base;
    for (std::size_t i = 0; i < base.size(); ++i) {
      plus[i] += h * A(i);
      minus[i] -= h * A(i);
    }
    const Curvature4 Rp = riemann(model, plus);
    const Curvature4 Rm = riemann(model, minus);
    const double dR = (Rp.evaluate(B, C, X, Y) - Rm.evaluate(B, C, X, Y)) / (2.0 * h);
    return dR - R0.evaluate(c.contract(A, B), C, X, Y) - R0.evaluate(B, c.contract(A, C), X, Y) -
           R0.evaluate(B, C, c.contract(A, X), Y) - R0.evaluate(B, C, X, c.contract(A, Y));
  };
  return std::abs(covariant(U, V, W) + covariant(V, W, U) + covariant(W, U, V));
}

}  // namespace qchk
