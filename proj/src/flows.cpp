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

#include "qchk/flows.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iomanip>

#include <boost/numeric/odeint.hpp>

#include "qchk/errors.hpp"
#include "qchk/qch.hpp"

namespace qchk {

namespace odeint = boost::numeric::odeint;
using State = std::vector<double>;

namespace {

Vec segment(const State& y, std::size_t offset, std::size_t n) {
  return Eigen::Map<const Vec>(y.data() + offset, static_cast<Eigen::Index>(n));
}

void store(State& y, std::size_t offset, const Vec& v) {
  std::copy(v.data(), v.data() + v.size(), y.begin() + static_cast<std::ptrdiff_t>(offset));
}

Vec raise(const Connection& c, const Vec& lowered) { return c.g_inv * lowered; }

template <class System, class Observer>
void integrate_at(System sys, State y0, const std::vector<double>& times, const FlowOptions& o,
                  Observer obs) {
  auto stepper = odeint::make_controlled<odeint::runge_kutta_fehlberg78<State>>(o.abs_tol, o.rel_tol);
  try {
    odeint::integrate_times(stepper, sys, y0, times.begin(), times.end(), o.initial_step, obs);
  } catch (const odeint::step_adjustment_error& e) {
    throw NumericalError(std::string("step size underflow: ") + e.what());
  } catch (const odeint::no_progress_error& e) {
    throw NumericalError(std::string("integration made no progress: ") + e.what());
  }
}

// Times 0 = s_0 < s_1 < ... used to observe; spots get a five-point stencil each.
std::vector<double> stencil_times(std::span<const double> spots, double delta) {
  std::vector<double> t{0.0};
  for (double s : spots) {
    if (!(s - 2.0 * delta > 0.0)) throw DomainError("spot parameter too close to the start");
    for (int k = -2; k <= 2; ++k) t.push_back(s + k * delta);
  }
  std::sort(t.begin(), t.end());
  t.erase(std::unique(t.begin(), t.end()), t.end());
  return t;
}

double stencil_derivative(const std::vector<double>& v, std::size_t centre, double delta) {
  return (v[centre - 2] - 8.0 * v[centre - 1] + 8.0 * v[centre + 1] - v[centre + 2]) / (12.0 * delta);
}

struct GeodesicSystem {
  const MetricModel* model;
  std::size_t d;
  void operator()(const State& y, State& dy, double /*s*/) const {
    const Vec x = segment(y, 0, d), v = segment(y, d, d);
    model->validate_point(std::span<const double>(y.data(), d));
    const Connection c = christoffel(*model, std::span<const double>(y.data(), d));
    dy.assign(2 * d, 0.0);
    store(dy, 0, v);
    store(dy, d, -c.contract(v, v));
    (void)x;
  }
};

// State: x, v, frame columns E_1..E_d, coefficients c, c'.
struct JacobiSystem {
  const MetricModel* model;
  std::size_t d;
  void operator()(const State& y, State& dy, double /*s*/) const {
    std::span<const double> x(y.data(), d);
    model->validate_point(x);
    const Connection c = christoffel(*model, x);
    const Curvature4 R = riemann(c);
    const Vec v = segment(y, d, d);
    dy.assign(y.size(), 0.0);
    store(dy, 0, v);
    store(dy, d, -c.contract(v, v));
    Vec C = Vec::Zero(d);
    std::vector<Vec> E;
    for (std::size_t i = 0; i < d; ++i) {
      E.push_back(segment(y, 2 * d + i * d, d));
      store(dy, 2 * d + i * d, -c.contract(v, E.back()));
    }
    const std::size_t co = 2 * d + d * d;
    for (std::size_t i = 0; i < d; ++i) C += y[co + i] * E[i];
    for (std::size_t i = 0; i < d; ++i) {
      dy[co + i] = y[co + d + i];
      dy[co + d + i] = R.evaluate(v, C, v, E[i]);
    }
  }
};

State jacobi_initial(const MetricModel& model, const GeodesicState& start, const Vec& C0,
                     const Vec& DC0) {
  const std::size_t d = model.dimension();
  const LocalGeometry geom(model, std::vector<double>(start.position.data(), start.position.data() + d));
  const auto frame = geom.orthonormal_frame();
  if (frame.size() != d) throw NumericalError("jacobi: could not build an orthonormal frame");
  State y(2 * d + d * d + 2 * d, 0.0);
  store(y, 0, start.position);
  store(y, d, start.velocity);
  for (std::size_t i = 0; i < d; ++i) store(y, 2 * d + i * d, frame[i]);
  const std::size_t co = 2 * d + d * d;
  for (std::size_t i = 0; i < d; ++i) {
    y[co + i] = geom.inner(C0, frame[i]);
    y[co + d + i] = geom.inner(DC0, frame[i]);
  }
  return y;
}

JacobiSample unpack_jacobi(const State& y, std::size_t d, double s) {
  JacobiSample out;
  out.s = s;
  out.position = segment(y, 0, d);
  out.velocity = segment(y, d, d);
  out.C = Vec::Zero(d);
  out.DC = Vec::Zero(d);
  const std::size_t co = 2 * d + d * d;
  for (std::size_t i = 0; i < d; ++i) {
    const Vec e = segment(y, 2 * d + i * d, d);
    out.C += y[co + i] * e;
    out.DC += y[co + d + i] * e;
  }
  return out;
}

void check_start(const MetricModel& model, const GeodesicState& start) {
  const std::size_t d = model.dimension();
  if (static_cast<std::size_t>(start.position.size()) != d ||
      static_cast<std::size_t>(start.velocity.size()) != d) {
    throw DomainError("geodesic start has the wrong dimension");
  }
  model.validate_point(std::span<const double>(start.position.data(), d));
}

}  // namespace

GeodesicPath integrate_geodesic(const MetricModel& model, const GeodesicState& start, double T,
                                std::size_t samples, FlowOptions options) {
  check_start(model, start);
  if (!(T > 0.0) || samples == 0) throw DomainError("integrate_geodesic: need T > 0 and samples > 0");
  const std::size_t d = model.dimension();
  State y(2 * d);
  store(y, 0, start.position);
  store(y, d, start.velocity);
  std::vector<double> times;
  for (std::size_t i = 0; i <= samples; ++i) times.push_back(T * static_cast<double>(i) / samples);

  GeodesicPath path;
  integrate_at(GeodesicSystem{&model, d}, y, times, options, [&](const State& st, double s) {
    path.s.push_back(s);
    path.states.push_back({segment(st, 0, d), segment(st, d, d)});
  });
  return path;
}

double geodesic_residual(const MetricModel& model, const GeodesicState& start,
                         std::span<const double> spots, double delta, FlowOptions options) {
  check_start(model, start);
  const std::size_t d = model.dimension();
  const auto times = stencil_times(spots, delta);
  State y(2 * d);
  store(y, 0, start.position);
  store(y, d, start.velocity);
  std::vector<State> states;
  integrate_at(GeodesicSystem{&model, d}, y, times, options,
               [&](const State& st, double) { states.push_back(st); });

  double worst = 0.0;
  for (double s : spots) {
    const std::size_t i = static_cast<std::size_t>(
        std::lower_bound(times.begin(), times.end(), s) - times.begin());
    const Vec x = segment(states[i], 0, d), v = segment(states[i], d, d);
    const Connection c = christoffel(model, std::span<const double>(states[i].data(), d));
    Vec acc(d), vel(d);
    for (std::size_t k = 0; k < d; ++k) {
      std::vector<double> comp, pos;
      for (std::size_t j = i - 2; j <= i + 2; ++j) {
        comp.push_back(states[j][d + k]);
        pos.push_back(states[j][k]);
      }
      acc(static_cast<Eigen::Index>(k)) = stencil_derivative(comp, 2, delta);
      vel(static_cast<Eigen::Index>(k)) = stencil_derivative(pos, 2, delta);
    }
    const Vec r1 = acc + c.contract(v, v);
    const Vec r2 = vel - v;
    worst = std::max({worst, std::sqrt(std::max(0.0, r1.dot(c.g * r1))),
                      std::sqrt(std::max(0.0, r2.dot(c.g * r2)))});
    (void)x;
  }
  return worst;
}

std::vector<JacobiSample> integrate_jacobi(const MetricModel& model, const GeodesicPath& path,
                                           const Vec& C0, const Vec& DC0, FlowOptions options) {
  if (path.states.empty()) throw DomainError("integrate_jacobi: empty path");
  const std::size_t d = model.dimension();
  const State y = jacobi_initial(model, path.states.front(), C0, DC0);
  std::vector<JacobiSample> out;
  integrate_at(JacobiSystem{&model, d}, y, path.s, options,
               [&](const State& st, double s) { out.push_back(unpack_jacobi(st, d, s)); });
  return out;
}

double jacobi_residual(const MetricModel& model, const GeodesicState& start, const Vec& C0,
                       const Vec& DC0, std::span<const double> spots, double delta,
                       FlowOptions options) {
  check_start(model, start);
  const std::size_t d = model.dimension();
  const auto times = stencil_times(spots, delta);
  std::vector<JacobiSample> samples;
  integrate_at(JacobiSystem{&model, d}, jacobi_initial(model, start, C0, DC0), times, options,
               [&](const State& st, double s) { samples.push_back(unpack_jacobi(st, d, s)); });

  double worst = 0.0;
  for (double s : spots) {
    const std::size_t i = static_cast<std::size_t>(
        std::lower_bound(times.begin(), times.end(), s) - times.begin());
    const JacobiSample& js = samples[i];
    const Connection c = christoffel(model, std::span<const double>(js.position.data(), d));
    const Curvature4 R = riemann(c);
    Vec dDC(d);
    for (std::size_t k = 0; k < d; ++k) {
      std::vector<double> comp;
      for (std::size_t j = i - 2; j <= i + 2; ++j) comp.push_back(samples[j].DC(static_cast<Eigen::Index>(k)));
      dDC(static_cast<Eigen::Index>(k)) = stencil_derivative(comp, 2, delta);
    }
    const Vec second = dDC + c.contract(js.velocity, js.DC);
    Vec lowered(d);
    for (std::size_t l = 0; l < d; ++l)
      lowered(static_cast<Eigen::Index>(l)) = R.evaluate(js.velocity, js.C, js.velocity, Vec::Unit(d, l));
    const Vec diff = second - raise(c, lowered);
    worst = std::max(worst, std::sqrt(std::max(0.0, diff.dot(c.g * diff))));
  }
  return worst;
}

DecayReport special_jacobi_experiment(const WarpedBundleMetric& model, std::span<const double> x0,
                                      double t0, double t_end, std::size_t rows,
                                      FlowOptions options) {
  if (model.mode() != WarpMode::warped) {
    throw DomainError("special Jacobi experiment requires the warped mode");
  }
  const std::size_t d = model.dimension();
  if (x0.size() != d) throw DomainError("special Jacobi experiment: wrong coordinate count");
  const double L = model.profile().length();
  const double margin = model.end_margin();
  if (!(t0 >= margin && t0 < L - margin)) throw DomainError("t0 outside the interior");

  DecayReport rep;
  rep.t0 = t0;
  rep.t_end = t_end;
  if (t_end > L - margin) {
    rep.t_end = L - margin;
    rep.truncated = true;
  }
  if (!(rep.t_end > t0)) throw DomainError("t_end must exceed t0");

  Vec start_x = Eigen::Map<const Vec>(x0.data(), static_cast<Eigen::Index>(d));
  start_x(0) = t0;
  const std::vector<double> xs(start_x.data(), start_x.data() + d);
  const LocalGeometry g0(model, xs);
  const FrameBasis frame0 = model.frame(xs);

  // X_V = f J H, evaluated in jets so its derivative along H is exact.
  const VectorField JH = model.field_JH();
  const VectorField XV = [&model, JH](std::span<const Jet2> x) {
    JetVector v = JH(x);
    const Jet2 f = model.f_jet(x[0]);
    for (auto& c : v) c = f * c;
    return v;
  };
  const JetVector xvj = g0.field(XV);
  const Vec C0 = values(xvj);
  const Vec DC0 = g0.nabla(frame0.H, xvj);
  const GeodesicState start{start_x, frame0.H};

  const double T = rep.t_end - t0;
  const GeodesicPath path = integrate_geodesic(model, start, T, rows, options);
  const auto jac = integrate_jacobi(model, path, C0, DC0, options);

  const WarpedBundleMetric fd_model = model.with_options({model.options().f_scale, 0.0});
  const DSection section{fd_model.field_H(), fd_model.field_JH()};
  const double nm1 = model.params().n - 1.0;

  double g0cC = 0.0, C_start = 0.0, C_last = 0.0;
  for (std::size_t i = 0; i < jac.size(); ++i) {
    const JacobiSample& js = jac[i];
    std::vector<double> y(js.position.data(), js.position.data() + d);
    const Mat g = model.metric(seed_all(y)).values();
    const double Cn = std::sqrt(js.C.dot(g * js.C));
    const double t = y[0];
    const double f = model.f_jet(Jet2::constant(t, 1)).value();
    const double gcC = js.velocity.dot(g * js.C);

    auto kappa_at = [&](double tt) {
      std::vector<double> z = y;
      z[0] = tt;
      const LocalGeometry gz(fd_model, z);
      return structure_scalars(gz, section, fd_model.frame(z).E).kappa;
    };
    const double h = std::min(1e-3, 2e-3 * std::min(t, L - t));
    const double dlnk = five_point_derivative([&](double tt) { return std::log(kappa_at(tt)); }, t, h);
    const double kappa = kappa_at(t);
    const double dlnC = js.C.dot(g * js.DC) / (Cn * Cn);
    const Vec H = Vec::Unit(d, 0);
    const double theta_cdot = H.dot(g * js.velocity);
    const double ratio = std::abs(dlnk - dlnC + kappa * theta_cdot / nm1);

    if (i == 0) {
      g0cC = gcC;
      C_start = Cn;
    }
    C_last = Cn;
    rep.rows.push_back({t, Cn, f, ratio, gcC});
    rep.max_norm_vs_f = std::max(rep.max_norm_vs_f, std::abs(Cn - f));
    rep.max_ratio_residual = std::max(rep.max_ratio_residual, ratio);
    rep.g_cdot_C_drift = std::max(rep.g_cdot_C_drift, std::abs(gcC - g0cC));
  }
  rep.decay_ratio = C_last / C_start;

  std::vector<double> spots{0.25 * T, 0.5 * T, 0.75 * T};
  const double delta = std::min(1e-3, 0.01 * T);
  FlowOptions tight = options;
  tight.abs_tol = tight.rel_tol = std::min(options.abs_tol, 1e-13);
  rep.geodesic_residual = geodesic_residual(model, start, spots, delta, tight);
  rep.jacobi_residual = jacobi_residual(model, start, C0, DC0, spots, delta, tight);
  return rep;
}

void write_decay_csv(const DecayReport& report, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot open " + path.string() + " for writing");
  out << "t,|C|,f(t),ratio_residual,g_cdot_C\n" << std::setprecision(17);
  for (const auto& r : report.rows) {
    out << r.t << ',' << r.C_norm << ',' << r.f << ',' << r.ratio_residual << ',' << r.g_cdot_C << '\n';
  }
  if (!out) throw IoError("write failed for " + path.string());
}

}  // namespace qchk
