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

#include "qchk/qch.hpp"

#include <algorithm>
#include <cmath>

#include "qchk/errors.hpp"

namespace qchk {

using Index = Eigen::Index;

namespace {

IdentityCheck make_check(std::string name, double engine, double expected) {
  return {std::move(name), engine, expected, std::abs(engine - expected)};
}

IdentityCheck max_check(std::string name, double worst) {
  return {std::move(name), worst, 0.0, std::abs(worst)};
}

std::vector<Vec> full_frame(const FrameBasis& f) {
  std::vector<Vec> out{f.H, f.JH};
  out.insert(out.end(), f.E.begin(), f.E.end());
  return out;
}

double e_component_norm(const LocalGeometry& geom, const Vec& X, const JetVector& Y,
                        std::span<const Vec> E) {
  double acc = 0.0;
  for (const Vec& e : E) {
    const double c = geom.nabla_inner(X, Y, e);
    acc += c * c;
  }
  return std::sqrt(acc);
}

}  // namespace

SplitTensors split_tensors(const Mat& g, const Mat& J, const Vec& d_vector) {
  const double n1 = std::sqrt(d_vector.dot(g * d_vector));
  if (!(n1 > 0.0)) throw DomainError("split_tensors: zero D vector");
  const Vec d1 = d_vector / n1;
  Vec d2 = J * d1;
  d2 -= d2.dot(g * d1) * d1;
  const double n2 = std::sqrt(d2.dot(g * d2));
  if (!(n2 > 0.0)) throw DomainError("split_tensors: J d is parallel to d");
  d2 /= n2;

  const Index dim = g.rows();
  SplitTensors s;
  const Vec g1 = g * d1, g2 = g * d2;
  s.p_D = d1 * g1.transpose() + d2 * g2.transpose();
  s.p_E = Mat::Identity(dim, dim) - s.p_D;
  s.h = g1 * g1.transpose() + g2 * g2.transpose();
  s.m = g - s.h;
  s.omega = J.transpose() * s.h;
  s.Omega_m = J.transpose() * s.m;
  return s;
}

ModelTensorValues model_tensors(const Mat& g, const Mat& J, const SplitTensors& split,
                                const Vec& X, const Vec& Y, const Vec& Z, const Vec& U) {
  auto G = [&](const Vec& a, const Vec& b) { return a.dot(g * b); };
  auto Hb = [&](const Vec& a, const Vec& b) { return a.dot(split.h * b); };
  auto W = [&](const Vec& a, const Vec& b) { return a.dot(split.omega * b); };
  const Vec JX = J * X, JY = J * Y, JZ = J * Z;

  ModelTensorValues v;
  v.pi = 0.25 * (G(Y, Z) * G(X, U) - G(X, Z) * G(Y, U) + G(JY, Z) * G(JX, U) -
                 G(JX, Z) * G(JY, U) - 2.0 * G(JX, Y) * G(JZ, U));
  v.phi = 0.125 * (G(Y, Z) * Hb(X, U) - G(X, Z) * Hb(Y, U) + G(X, U) * Hb(Y, Z) -
                   G(Y, U) * Hb(X, Z) + G(JY, Z) * W(X, U) - G(JX, Z) * W(Y, U) +
                   G(JX, U) * W(Y, Z) - G(JY, U) * W(X, Z) - 2.0 * G(JX, Y) * W(Z, U) -
                   2.0 * G(JZ, U) * W(X, Y));
  v.psi = -W(X, Y) * W(Z, U);
  return v;
}

QCHCoefficients fit_coefficients(const HolomorphicCurvature& hol, const Mat& g,
                                 const SplitTensors& split, const Vec& e, const Vec& d,
                                 std::span<const Vec> frame, Rng& rng, std::size_t samples) {
  // phi(0) = a, phi(1/2) = a + b/2 + c/4, phi(1) = a + b + c
  const double r = std::sqrt(0.5);
  const double p0 = hol(e);
  const double ph = hol(r * e + r * d);
  const double p1 = hol(d);
  const double u = ph - p0, v = p1 - p0;

  QCHCoefficients q;
  q.a = p0;
  q.b = 4.0 * u - v;
  q.c = 2.0 * v - 4.0 * u;
  q.samples = samples;
  for (std::size_t i = 0; i < samples; ++i) {
    const Vec w = rng.gaussian(static_cast<Index>(frame.size()));
    Vec X = Vec::Zero(g.rows());
    for (std::size_t k = 0; k < frame.size(); ++k) X += w(static_cast<Index>(k)) * frame[k];
    X /= std::sqrt(X.dot(g * X));
    const double t2 = X.dot(split.h * X);
    const double model = q.a + q.b * t2 + q.c * t2 * t2;
    q.residual = std::max(q.residual, std::abs(hol(X) - model));
  }
  return q;
}

QCHCoefficients fit_coefficients(const LocalGeometry& geom, const FrameBasis& frame, Rng& rng,
                                 std::size_t samples) {
  const Mat& J = geom.J();
  const SplitTensors split = split_tensors(geom.g(), J, frame.H);
  const auto basis = full_frame(frame);
  if (frame.E.empty()) throw DomainError("fit_coefficients: empty E frame");
  auto hol = [&](const Vec& X) {
    const Vec JX = J * X;
    return geom.R().evaluate(X, JX, JX, X);
  };
  return fit_coefficients(hol, geom.g(), split, frame.E.front(), frame.H, basis, rng, samples);
}

RicciEigenvalues ricci_eigenvalues(int n, double a, double b, double c) {
  const double base = 0.5 * (n + 1) * a;
  return {base + 0.25 * b, base + 0.25 * (n + 3) * b + c};
}

RicciSplit ricci_split(const LocalGeometry& geom, const FrameBasis& frame,
                       const QCHCoefficients& coeffs) {
  const Mat& rho = geom.ricci();
  auto R = [&](const Vec& a, const Vec& b) { return a.dot(rho * b); };
  const std::vector<Vec> D{frame.H, frame.JH};
  const auto& E = frame.E;

  RicciSplit out;
  for (const Vec& e : E) out.lambda_engine += R(e, e);
  out.lambda_engine /= static_cast<double>(E.size());
  out.mu_engine = 0.5 * (R(D[0], D[0]) + R(D[1], D[1]));
  for (std::size_t i = 0; i < E.size(); ++i)
    for (std::size_t j = 0; j < E.size(); ++j)
      out.e_block_deviation = std::max(
          out.e_block_deviation, std::abs(R(E[i], E[j]) - (i == j ? out.lambda_engine : 0.0)));
  for (std::size_t i = 0; i < 2; ++i)
    for (std::size_t j = 0; j < 2; ++j)
      out.d_block_deviation = std::max(
          out.d_block_deviation, std::abs(R(D[i], D[j]) - (i == j ? out.mu_engine : 0.0)));
  for (const Vec& d : D)
    for (const Vec& e : E) out.off_block = std::max(out.off_block, std::abs(R(d, e)));

  const int n = static_cast<int>(geom.dimension() / 2);
  const auto ev = ricci_eigenvalues(n, coeffs.a, coeffs.b, coeffs.c);
  out.lambda_formula = ev.lambda;
  out.mu_formula = ev.mu;
  return out;
}

StructureScalars structure_scalars(const LocalGeometry& geom, const DSection& section,
                                   std::span<const Vec> E) {
  const JetVector xj = geom.field(section.X);
  const JetVector jxj = geom.field(section.JX);
  const Vec X = values(xj), JX = values(jxj);
  StructureScalars s;
  for (const Vec& e : E) {
    s.div_X += geom.nabla_inner(e, xj, e);
    s.div_JX += geom.nabla_inner(e, jxj, e);
  }
  s.kappa = std::hypot(s.div_X, s.div_JX);
  s.p = geom.nabla_inner(X, xj, JX);
  s.p_star = geom.nabla_inner(JX, jxj, X);
  const Mat& rho = geom.ricci();
  for (const Vec& e : E) s.lambda += e.dot(rho * e);
  if (!E.empty()) s.lambda /= static_cast<double>(E.size());
  s.mu = X.dot(rho * X);
  return s;
}

PrincipalSection kappa_and_principal_section(const LocalGeometry& geom, const DSection& section,
                                             std::span<const Vec> E, double zero_tol) {
  PrincipalSection ps;
  ps.scalars = structure_scalars(geom, section, E);
  if (!(ps.scalars.kappa > zero_tol)) {
    throw DomainError("principal section undefined: kappa = " + std::to_string(ps.scalars.kappa));
  }
  ps.cos_angle = ps.scalars.div_X / ps.scalars.kappa;
  ps.sin_angle = ps.scalars.div_JX / ps.scalars.kappa;
  const Vec X = values(geom.field(section.X));
  const Vec JX = values(geom.field(section.JX));
  ps.xi = ps.cos_angle * X + ps.sin_angle * JX;
  return ps;
}

DSection rotate_section(const DSection& section, double angle) {
  const double c = std::cos(angle), s = std::sin(angle);
  auto combine = [](VectorField A, VectorField B, double ca, double cb) -> VectorField {
    return [A = std::move(A), B = std::move(B), ca, cb](std::span<const Jet2> x) {
      JetVector a = A(x);
      const JetVector b = B(x);
      for (std::size_t k = 0; k < a.size(); ++k) a[k] = ca * a[k] + cb * b[k];
      return a;
    };
  };
  return {combine(section.X, section.JX, c, s), combine(section.X, section.JX, -s, c)};
}

FieldJet complex_gradient(const LocalGeometry& geom, const ScalarField& tau) {
  const std::size_t d = geom.dimension();
  const auto& Jj = geom.J_jets();
  if (!Jj) throw DomainError("complex_gradient: model has no complex structure");
  const Connection& c = geom.connection();
  const Jet2 t = tau(geom.jets());

  Vec dt(d);
  Mat ddt(d, d);
  for (std::size_t a = 0; a < d; ++a) {
    dt(a) = t.gradient(a);
    for (std::size_t b = 0; b < d; ++b) ddt(a, b) = t.hessian(a, b);
  }
  const Vec w = c.g_inv * dt;  // grad tau
  // d_c w^a = -g^{ap} (d_c g_pq) w^q + g^{ab} d_c d_b tau
  Mat dw(d, d);
  for (std::size_t cc = 0; cc < d; ++cc) {
    Vec tmp = ddt.col(cc);
    for (std::size_t p = 0; p < d; ++p)
      for (std::size_t q = 0; q < d; ++q) tmp(p) -= c.dg[(cc * d + p) * d + q] * w(q);
    dw.col(cc) = c.g_inv * tmp;
  }
  const Mat J = geom.J();
  FieldJet out{J * w, Mat::Zero(d, d)};
  for (std::size_t k = 0; k < d; ++k)
    for (std::size_t cc = 0; cc < d; ++cc) {
      double v = 0.0;
      for (std::size_t a = 0; a < d; ++a) v += (*Jj)(k, a).gradient(cc) * w(a) + J(k, a) * dw(a, cc);
      out.jacobian(k, cc) = v;
    }
  return out;
}

double five_point_derivative(const std::function<double(double)>& F, double t, double h) {
  return (F(t - 2.0 * h) - 8.0 * F(t - h) + 8.0 * F(t + h) - F(t + 2.0 * h)) / (12.0 * h);
}

// ---------------------------------------------------------------------------

namespace {

struct WarpedPointData {
  double r, rp, rpp, f, fp, s;
  int n;
};

WarpedPointData point_data(const WarpedBundleMetric& model, double t) {
  const auto d = model.profile().at(t);
  const Jet2 fj = model.f_jet(Jet2::variable(0, t, 1));
  return {d.r, d.rp, d.rpp, fj.value(), fj.gradient(0), model.pitch(), model.params().n};
}

// Step for t-derivatives: small against both the distance to the ends and 1.
double derivative_step(const WarpedBundleMetric& model, double t) {
  const double L = model.profile().length();
  return std::min(1e-3, 2e-3 * std::min(t, L - t));
}

}  // namespace

std::vector<IdentityCheck> structure_identities(const WarpedBundleMetric& model,
                                                std::span<const double> x) {
  if (model.mode() != WarpMode::warped) {
    throw DomainError("structure_identities: requires the warped mode");
  }
  const LocalGeometry geom(model, x);
  const FrameBasis frame = model.frame(x);
  const auto basis = full_frame(frame);
  const WarpedPointData P = point_data(model, x[0]);
  const double nm1 = P.n - 1.0;
  const DSection section{model.field_H(), model.field_JH()};
  const auto& E = frame.E;

  std::vector<IdentityCheck> out;
  const PrincipalSection ps = kappa_and_principal_section(geom, section, E);
  const StructureScalars& sc = ps.scalars;
  const double kappa = sc.kappa;
  out.push_back(make_check("kappa", kappa, 2.0 * nm1 * P.rp / P.r));
  out.push_back(make_check("div_E_H", sc.div_X, 2.0 * nm1 * P.rp / P.r));
  out.push_back(make_check("div_E_JH", sc.div_JX, 0.0));
  out.push_back(make_check("div_E_xi", div_E(geom, model.field_xi(), E), 0.0));
  out.push_back(max_check("principal_section_is_H", std::sqrt(geom.inner(ps.xi - frame.H, ps.xi - frame.H))));

  double rot = 0.0;
  for (double angle : {0.7, 2.3, -1.1}) {
    const auto rs = structure_scalars(geom, rotate_section(section, angle), E);
    rot = std::max(rot, std::abs(rs.kappa - kappa));
  }
  out.push_back(max_check("kappa_rotation_invariance", rot));

  out.push_back(make_check("p", sc.p, 0.0));
  out.push_back(make_check("p_star", sc.p_star, -P.fp / P.f));

  const JetVector Hj = geom.field(model.field_H());
  const JetVector JHj = geom.field(model.field_JH());
  out.push_back(max_check("epsilon", e_component_norm(geom, frame.H, Hj, E)));
  out.push_back(max_check("epsilon_star", e_component_norm(geom, frame.JH, JHj, E)));
  {
    double worst = 0.0;
    const std::vector<std::pair<const Vec*, const JetVector*>> fields{{&frame.H, &Hj},
                                                                     {&frame.JH, &JHj}};
    for (const auto& [X, _] : fields)
      for (const auto& [Yv, Yj] : fields) {
        (void)Yv;
        worst = std::max(worst, e_component_norm(geom, *X, *Yj, E));
      }
    out.push_back(max_check("totally_geodesic_D", worst));
  }

  const SplitTensors split = split_tensors(geom.g(), geom.J(), frame.H);
  {
    double worst = 0.0;
    for (const Vec& A : basis)
      for (const Vec& B : basis) {
        const double engine = geom.nabla_inner(A, Hj, B);
        const double expected = kappa / (2.0 * nm1) * A.dot(split.m * B) -
                                sc.p_star * geom.inner(frame.JH, A) * geom.inner(frame.JH, B);
        worst = std::max(worst, std::abs(engine - expected));
      }
    out.push_back(max_check("nabla_theta", worst));
  }

  // t-derivatives of kappa and of the fitted coefficients, from the engine at nearby t.
  const WarpedBundleMetric fd_model = model.with_options({model.options().f_scale, 0.0});
  std::vector<double> y(x.begin(), x.end());
  auto at_t = [&](double t) {
    y[0] = t;
    return LocalGeometry(fd_model, y);
  };
  const double h = derivative_step(model, x[0]);
  auto kappa_at = [&](double t) {
    const auto g = at_t(t);
    return structure_scalars(g, section, fd_model.frame(y).E).kappa;
  };
  const double dlnk = five_point_derivative([&](double t) { return std::log(kappa_at(t)); }, x[0], h);
  out.push_back(make_check("dlnkappa_along_t", dlnk, -(kappa / nm1 + sc.p_star)));

  Rng unused(0);
  auto coeff_at = [&](double t) {
    const auto g = at_t(t);
    return fit_coefficients(g, fd_model.frame(y), unused, 0);
  };
  const auto q0 = coeff_at(x[0]);
  const double da = five_point_derivative([&](double t) { return coeff_at(t).a; }, x[0], h);
  const double db = five_point_derivative([&](double t) { return coeff_at(t).b; }, x[0], h);
  out.push_back(make_check("grad_a", da, q0.b * kappa / (2.0 * nm1)));
  out.push_back(make_check("grad_b", db, (q0.b + 4.0 * q0.c) * kappa / nm1));
  {
    double worst = 0.0;
    for (std::size_t i = 2; i < y.size(); ++i) {
      std::vector<double> z(x.begin(), x.end());
      z[i] += 1e-3;
      const LocalGeometry gz(model, z);
      const auto qz = fit_coefficients(gz, model.frame(z), unused, 0);
      worst = std::max(worst, std::abs(qz.a - q0.a));
    }
    out.push_back(max_check("a_independent_of_base_point", worst));
  }

  // Special Kähler-Ricci potential tau = r^2 / s.
  const ScalarField tau = model.potential();
  const Mat hess = hessian_form(geom, tau);
  const double ftau = tau(std::vector<Jet2>{seed_all(x)}).gradient(0);
  {
    double worst = 0.0;
    for (const Vec& A : basis)
      for (const Vec& B : basis) {
        const double expected =
            ftau * kappa / (2.0 * nm1) * A.dot(split.m * B) - ftau * sc.p_star * A.dot(split.h * B);
        worst = std::max(worst, std::abs(A.dot(hess * B) - expected));
      }
    out.push_back(max_check("hessian_tau", worst));
  }
  {
    double nu = 0.0;
    for (const Vec& e : E) nu += e.dot(hess * e);
    nu /= static_cast<double>(E.size());
    double worst = 0.0;
    for (std::size_t i = 0; i < E.size(); ++i)
      for (std::size_t j = 0; j < E.size(); ++j)
        worst = std::max(worst, std::abs(E[i].dot(hess * E[j]) - (i == j ? nu : 0.0)));
    out.push_back(max_check("hessian_E_proportional_to_m", worst));
  }
  const FieldJet X = complex_gradient(geom, tau);
  out.push_back(max_check("krp_killing", frame_max(geom, killing_deviation(geom, X))));
  out.push_back(max_check("krp_field_is_fiber_generator",
                          std::sqrt(geom.inner(X.value - frame.xi, X.value - frame.xi))));
  out.push_back(max_check("killing_xi", frame_max(geom, killing_deviation(geom, model.field_xi()))));
  return out;
}

std::vector<IdentityCheck> submersion_formulas(const WarpedBundleMetric& model,
                                               std::span<const double> x) {
  if (model.mode() != WarpMode::warped) {
    throw DomainError("submersion_formulas: requires the warped mode");
  }
  const LocalGeometry geom(model, x);
  const FrameBasis frame = model.frame(x);
  const WarpedPointData P = point_data(model, x[0]);
  const auto& E = frame.E;
  const std::size_t nb = geom.dimension() - 2;
  const Curvature4& R = geom.R();
  const Mat hb = model.base().evaluate(geom.jets().subspan(2)).h.values();

  std::vector<IdentityCheck> out;
  {
    double worst = 0.0, engine_at_worst = 0.0;
    for (const Vec& e : E) {
      Vec u = e.tail(nb);
      u /= std::sqrt(u.dot(hb * u));
      const VectorField U = model.horizontal_lift(u);
      const JetVector Uj = geom.field(U);
      const double engine = geom.nabla_inner(values(Uj), Uj, frame.H);
      if (std::abs(engine + P.r * P.rp) >= worst) {
        worst = std::abs(engine + P.r * P.rp);
        engine_at_worst = engine;
      }
    }
    out.push_back({"T_UU", engine_at_worst, -P.r * P.rp, worst});
  }
  {
    double worst = 0.0;
    for (std::size_t i = 0; i < E.size(); ++i)
      for (std::size_t j = i + 1; j < E.size(); ++j) {
        const JetVector Ui = geom.field(model.horizontal_lift(E[i].tail(nb)));
        const JetVector Uj = geom.field(model.horizontal_lift(E[j].tail(nb)));
        const double t = 0.5 * (geom.nabla_inner(E[i], Uj, frame.H) + geom.nabla_inner(E[j], Ui, frame.H));
        worst = std::max(worst, std::abs(t));
      }
    out.push_back(max_check("T_UV_orthogonal", worst));
  }
  {
    const JetVector xij = geom.field(model.field_xi());
    const Vec v = geom.nabla(frame.xi, xij) + P.f * P.fp * frame.H;
    out.push_back({"T_xixi", geom.nabla_inner(frame.xi, xij, frame.H), -P.f * P.fp,
                   std::sqrt(std::max(0.0, geom.inner(v, v)))});
  }
  {
    const double stated =
        P.s * P.s * P.f * P.f / (4.0 * std::pow(P.r, 4)) + P.fp * P.rp / (P.f * P.r);
    const double corrected =
        P.s * P.s * P.f * P.f / (4.0 * std::pow(P.r, 4)) - P.fp * P.rp / (P.f * P.r);
    double wp = 0.0, wc = 0.0, engine = 0.0;
    for (const Vec& U : E) {
      engine = R.evaluate(frame.JH, U, U, frame.JH);
      wp = std::max(wp, std::abs(engine - stated));
      wc = std::max(wc, std::abs(engine - corrected));
    }
    out.push_back({"K_JH_U_plus_sign", engine, stated, wp});
    out.push_back({"K_JH_U", engine, corrected, wc});
  }
  {
    double worst = 0.0;
    for (std::size_t i = 0; i < E.size(); ++i)
      for (std::size_t j = 0; j < E.size(); ++j)
        if (i != j) worst = std::max(worst, std::abs(R.evaluate(frame.JH, E[i], E[j], frame.JH)));
    out.push_back(max_check("R_JH_U_V_JH_orthogonal", worst));
  }
  {
    double worst = 0.0;
    for (const Vec& U : E)
      for (const Vec& V : E)
        for (const Vec& W : E) worst = std::max(worst, std::abs(R.evaluate(U, V, frame.xi, W)));
    out.push_back(max_check("R_U_V_xi_W", worst));
  }
  {
    const std::vector<Vec> D{frame.H, frame.JH};
    double worst = 0.0;
    for (const Vec& X : D)
      for (const Vec& Y : D)
        for (const Vec& Z : D)
          for (const Vec& V : E) worst = std::max(worst, std::abs(R.evaluate(X, Y, Z, V)));
    out.push_back(max_check("R_DDDE", worst));
  }
  {
    const double f2 = geom.inner(frame.xi, frame.xi);
    const Mat& J = geom.J();
    double worst = 0.0;
    for (const Vec& Ev : E)
      for (const Vec& Fv : E) {
        const JetVector Fj = geom.field(model.horizontal_lift(Fv.tail(nb)));
        const double engine = geom.nabla_inner(Ev, Fj, frame.xi) / f2;
        const double expected = P.s / (2.0 * P.r * P.r) * geom.inner(Ev, J * Fv);
        worst = std::max(worst, std::abs(engine - expected));
      }
    out.push_back(max_check("A_EF_horizontal", worst));
  }
  return out;
}

std::vector<IdentityCheck> circle_bundle_formulas(const CircleBundleMetric& model,
                                                  std::span<const double> x, Rng& rng) {
  const LocalGeometry geom(model, x);
  const std::size_t d = geom.dimension();
  const std::size_t nb = d - 1;
  const double al = model.alpha(), be = model.beta(), s = model.pitch();
  const double m = static_cast<double>(nb / 2);
  const Curvature4& R = geom.R();
  const Vec xi = Vec::Unit(d, 0);
  const Mat hb = model.base().evaluate(geom.jets().subspan(1)).h.values();

  std::vector<Vec> seeds;
  for (std::size_t a = 0; a < nb; ++a) seeds.push_back(Vec::Unit(nb, a));
  const auto base_frame = gram_schmidt(hb, seeds);
  std::vector<Vec> H;
  for (const Vec& u : base_frame) H.push_back(values(geom.field(model.horizontal_lift(u / be))));

  std::vector<IdentityCheck> out;
  const double rho_xi = xi.dot(geom.ricci() * xi) / (al * al);
  out.push_back(make_check("ricci_xi_without_factor_two", rho_xi, s * s * al * al / (4.0 * std::pow(be, 4)) * m));
  out.push_back(make_check("ricci_xi", rho_xi, 2.0 * m * s * s * al * al / (4.0 * std::pow(be, 4))));
  {
    double worst = 0.0;
    for (std::size_t i = 0; i < H.size(); ++i)
      for (std::size_t j = 0; j < H.size(); ++j) {
        const double hij = base_frame[i].dot(hb * base_frame[j]) / (be * be);
        const double expected = -s * s * std::pow(al, 4) / (4.0 * be * be) * hij;
        worst = std::max(worst, std::abs(R.evaluate(H[i], xi, H[j], xi) - expected));
      }
    out.push_back(max_check("R_X_xi_Y_xi", worst));
  }
  {
    double worst = 0.0;
    const double expected = s * s * al * al / (4.0 * std::pow(be, 4));
    for (const Vec& e : H) worst = std::max(worst, std::abs(sectional(R, geom.g(), e, xi) - expected));
    out.push_back(max_check("K_E_xi", worst));
  }
  {
    double worst = 0.0;
    for (const Vec& X : H)
      for (const Vec& Y : H)
        for (const Vec& Z : H) worst = std::max(worst, std::abs(R.evaluate(X, Y, Z, xi)));
    out.push_back(max_check("R_X_Y_Z_xi", worst));
  }
  {
    // O'Neill A from its definition: A_E F = V(nabla_{HE} HF) + H(nabla_{HE} VF).
    const double a2 = al * al;
    auto theta_of = [&](const Vec& v) { return geom.inner(xi, v) / a2; };
    const JetVector xij = geom.field(model.field_xi());
    double worst = 0.0;
    for (int trial = 0; trial < 6; ++trial) {
      const Vec Ev = rng.gaussian(static_cast<Index>(d));
      const Vec Fv = rng.gaussian(static_cast<Index>(d));
      auto theta_F = [&](std::span<const Jet2> y) {
        const JetMatrix g = model.metric(y);
        Jet2 acc = g(0, 0) * Fv(0);
        for (std::size_t k = 1; k < d; ++k) acc += g(0, k) * Fv(static_cast<Index>(k));
        return acc / a2;
      };
      const VectorField HF = [&](std::span<const Jet2> y) {
        JetVector v;
        for (std::size_t k = 0; k < d; ++k) v.push_back(Jet2::constant(Fv(static_cast<Index>(k)), y.front().dim()));
        v[0] -= theta_F(y);
        return v;
      };
      const VectorField VF = [&](std::span<const Jet2> y) {
        JetVector v(d, Jet2::constant(0.0, y.front().dim()));
        v[0] = theta_F(y);
        return v;
      };
      const Vec HE = Ev - theta_of(Ev) * xi;
      const Vec u = geom.nabla(HE, geom.field(HF));
      const Vec v = geom.nabla(HE, geom.field(VF));
      const Vec engine = theta_of(u) * xi + (v - theta_of(v) * xi);
      const Vec TE = geom.nabla(Ev, xij), TF = geom.nabla(Fv, xij);
      const Vec expected = (geom.inner(Ev, TF) * xi + geom.inner(xi, Fv) * TE) / a2;
      const Vec diff = engine - expected;
      worst = std::max(worst, std::sqrt(std::max(0.0, geom.inner(diff, diff))) /
                                  (geom.norm(Ev) * geom.norm(Fv)));
    }
    out.push_back(max_check("A_EF", worst));
  }
  return out;
}

}  // namespace qchk
