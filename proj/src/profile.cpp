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

#include "qchk/profile.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <numbers>
#include <sstream>

#include <Eigen/Dense>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/numeric/odeint.hpp>

#include "qchk/errors.hpp"

namespace qchk {

namespace odeint = boost::numeric::odeint;

// ---------------------------------------------------------------------------
// Polynomial

double CubicProfilePolynomial::operator()(double t) const noexcept {
  return ((coeffs[3] * t + coeffs[2]) * t + coeffs[1]) * t + coeffs[0];
}

double CubicProfilePolynomial::derivative(double t) const noexcept {
  return (3.0 * coeffs[3] * t + 2.0 * coeffs[2]) * t + coeffs[1];
}

double CubicProfilePolynomial::second_derivative(double t) const noexcept {
  return 6.0 * coeffs[3] * t + 2.0 * coeffs[2];
}

CubicProfilePolynomial build_polynomial(double x, double y, double s) {
  if (!(x > 0.0) || !(y > x)) {
    throw DomainError("build_polynomial: requires 0 < x < y");
  }
  if (!(s > 0.0)) throw DomainError("build_polynomial: requires s > 0");

  // Roots x, y, x + y; leading coefficient fixed by x P'(x) = s.
  const double lead = s / (x * y * (y - x));
  CubicProfilePolynomial p{x, y, s, {}};
  p.coeffs = {-lead * x * y * (x + y), lead * (x * x + 3.0 * x * y + y * y),
              -2.0 * lead * (x + y), lead};

  const double scale = std::max({1.0, std::abs(p.coeffs[0]), s});
  auto require = [&](bool ok, const char* what) {
    if (!ok) throw NumericalError(std::string("build_polynomial: invariant violated: ") + what);
  };
  require(std::abs(p(x)) <= 1e-12 * scale, "P(x) = 0");
  require(std::abs(p(y)) <= 1e-12 * scale, "P(y) = 0");
  require(std::abs(x * p.derivative(x) - s) <= 1e-12 * scale, "x P'(x) = s");
  require(std::abs(y * p.derivative(y) + s) <= 1e-12 * scale, "y P'(y) = -s");
  for (int i = 1; i <= 20; ++i) {
    require(p(x + (y - x) * i / 21.0) > 0.0, "P > 0 on (x, y)");
  }
  return p;
}

double period_length(const CubicProfilePolynomial& p) {
  const double x = p.x;
  const double y = p.y;
  // P(t) = (t - x)(y - t) Q(t) with Q linear.
  const double beta = p.coeffs[2] + p.coeffs[3] * (x + y);
  auto q = [&](double t) { return -(p.coeffs[3] * t + beta); };
  auto integrand = [&](double u) {
    const double su = std::sin(u);
    const double t = x + (y - x) * su * su;
    const double qt = q(t);
    if (!(qt > 0.0)) throw DomainError("period_length: P is not positive between its roots");
    return 2.0 / std::sqrt(qt);
  };
  double error = 0.0;
  const double len = boost::math::quadrature::gauss_kronrod<double, 31>::integrate(
      integrand, 0.0, std::numbers::pi / 2.0, 15, 1e-15, &error);
  if (!(error <= 1e-9) || !std::isfinite(len)) {
    std::ostringstream os;
    os << "period_length: quadrature did not converge (error estimate " << error << ")";
    throw NumericalError(os.str());
  }
  return len;
}

// ---------------------------------------------------------------------------
// Evaluators

class ProfileEvaluator {
 public:
  virtual ~ProfileEvaluator() = default;
  virtual double length() const = 0;
  virtual ProfileDerivatives at(double t) const = 0;
  virtual std::span<const double> grid() const = 0;
  virtual const std::optional<CubicProfilePolynomial>& polynomial() const = 0;
};

namespace {

using State = std::array<double, 2>;

struct ProfileRhs {
  const CubicProfilePolynomial* p;
  void operator()(const State& u, State& du, double /*t*/) const {
    du[0] = u[1];
    du[1] = 0.5 * p->derivative(u[0]);
  }
};

class CubicEvaluator final : public ProfileEvaluator {
 public:
  CubicEvaluator(CubicProfilePolynomial p, std::vector<double> t, std::vector<State> u)
      : poly_(p), t_(std::move(t)), u_(std::move(u)) {}

  double length() const override { return t_.back(); }
  std::span<const double> grid() const override { return t_; }
  const std::optional<CubicProfilePolynomial>& polynomial() const override { return poly_; }

  ProfileDerivatives at(double t) const override {
    if (!(t >= 0.0 && t <= length())) {
      throw DomainError("profile evaluated outside [0, L] at t = " + std::to_string(t));
    }
    const State u = advance(t);
    const auto& p = *poly_;
    return {u[0], u[1], 0.5 * p.derivative(u[0]), 0.5 * p.second_derivative(u[0]) * u[1]};
  }

  /// Integrates from the nearest stored node to t with fixed order-8 steps.
  State advance(double t) const {
    auto it = std::upper_bound(t_.begin(), t_.end(), t);
    std::size_t i = it == t_.begin() ? 0 : static_cast<std::size_t>(it - t_.begin()) - 1;
    if (i + 1 < t_.size() && t_[i + 1] - t < t - t_[i]) ++i;
    State u = u_[i];
    const double span = t - t_[i];
    if (span == 0.0) return u;
    const int steps = std::max(1, static_cast<int>(std::ceil(std::abs(span) / kSubstep)));
    const double h = span / steps;
    odeint::runge_kutta_fehlberg78<State> stepper;
    ProfileRhs rhs{&*poly_};
    double tc = t_[i];
    for (int k = 0; k < steps; ++k, tc += h) stepper.do_step(rhs, u, tc, h);
    return u;
  }

 private:
  static constexpr double kSubstep = 0.01;
  std::optional<CubicProfilePolynomial> poly_;
  std::vector<double> t_;
  std::vector<State> u_;
};

class TableEvaluator final : public ProfileEvaluator {
 public:
  TableEvaluator(std::vector<double> t, std::vector<double> r) : t_(std::move(t)), r_(std::move(r)) {}

  double length() const override { return t_.back() - t_.front(); }
  std::span<const double> grid() const override { return t_; }
  const std::optional<CubicProfilePolynomial>& polynomial() const override { return none_; }

  ProfileDerivatives at(double t) const override {
    const double tt = t + t_.front();
    if (!(t >= 0.0 && t <= length())) {
      throw DomainError("profile evaluated outside [0, L] at t = " + std::to_string(t));
    }
    constexpr std::size_t kWindow = 6;
    auto it = std::upper_bound(t_.begin(), t_.end(), tt);
    const std::size_t idx = it == t_.begin() ? 0 : static_cast<std::size_t>(it - t_.begin()) - 1;
    const std::size_t start = std::min(idx >= 2 ? idx - 2 : 0, t_.size() - kWindow);

    // Local polynomial in u = (t - center) / scale, fitted through the window.
    const double center = t_[start + 2];
    const double scale = t_[start + kWindow - 1] - t_[start];
    Eigen::Matrix<double, 6, 6> v;
    Eigen::Matrix<double, 6, 1> rhs;
    for (std::size_t i = 0; i < kWindow; ++i) {
      const double u = (t_[start + i] - center) / scale;
      double pw = 1.0;
      for (std::size_t k = 0; k < kWindow; ++k, pw *= u) v(i, k) = pw;
      rhs(i) = r_[start + i];
    }
    const Eigen::Matrix<double, 6, 1> a = v.fullPivLu().solve(rhs);
    const double u = (tt - center) / scale;
    double d[4] = {0, 0, 0, 0};
    for (int j = 0; j < 4; ++j) {
      for (int k = 5; k >= j; --k) {
        double falling = 1.0;
        for (int q = 0; q < j; ++q) falling *= k - q;
        d[j] = d[j] * u + a(k) * falling;
      }
    }
    return {d[0], d[1] / scale, d[2] / (scale * scale), d[3] / (scale * scale * scale)};
  }

 private:
  std::vector<double> t_;
  std::vector<double> r_;
  std::optional<CubicProfilePolynomial> none_;
};

}  // namespace

// ---------------------------------------------------------------------------
// ProfileSolution

ProfileSolution::ProfileSolution(std::shared_ptr<const ProfileEvaluator> impl, double pitch)
    : impl_(std::move(impl)), pitch_(pitch) {}

double ProfileSolution::length() const noexcept { return impl_->length(); }

ProfileDerivatives ProfileSolution::at(double t) const { return impl_->at(t); }

double ProfileSolution::f(double t) const {
  const auto d = at(t);
  return 2.0 * d.r * d.rp / pitch_;
}

double ProfileSolution::f_prime(double t) const {
  const auto d = at(t);
  return 2.0 * (d.rp * d.rp + d.r * d.rpp) / pitch_;
}

std::span<const double> ProfileSolution::grid() const noexcept { return impl_->grid(); }

const std::optional<CubicProfilePolynomial>& ProfileSolution::polynomial() const noexcept {
  return impl_->polynomial();
}

std::vector<ProfileRow> ProfileSolution::sample(std::size_t count) const {
  if (count < 2) throw std::invalid_argument("ProfileSolution::sample: need at least 2 rows");
  std::vector<ProfileRow> rows;
  rows.reserve(count);
  const double len = length();
  for (std::size_t i = 0; i < count; ++i) {
    const double t = i + 1 == count ? len : len * static_cast<double>(i) / (count - 1);
    const auto d = at(t);
    rows.push_back({t, d.r, d.rp, d.rpp, 2.0 * d.r * d.rp / pitch_,
                    2.0 * (d.rp * d.rp + d.r * d.rpp) / pitch_});
  }
  return rows;
}

ProfileSolution integrate_profile(const CubicProfilePolynomial& p) {
  const double len_estimate = period_length(p);
  const double max_step = len_estimate / 256.0;
  const double band = 1e-9 * std::max(1.0, p.y);

  ProfileRhs rhs{&p};
  auto stepper = odeint::make_controlled(1e-14, 1e-14, odeint::runge_kutta_fehlberg78<State>());

  std::vector<double> ts{0.0};
  std::vector<State> us{State{p.x, 0.0}};
  State u = us.front();
  double t = 0.0;
  double dt = max_step / 16.0;

  for (std::size_t iter = 0;; ++iter) {
    if (iter > 1000000) throw NumericalError("integrate_profile: too many steps");
    dt = std::min(dt, max_step);
    if (dt < 1e-14) throw NumericalError("integrate_profile: step-size underflow");
    const State before = u;
    const double t_before = t;
    if (stepper.try_step(rhs, u, t, dt) == odeint::fail) continue;
    if (u[0] < p.x - band || u[0] > p.y + band) {
      throw NumericalError("integrate_profile: r left [x, y] at t = " + std::to_string(t));
    }
    if (u[1] > 0.0) {
      ts.push_back(t);
      us.push_back(u);
      continue;
    }

    // r' changed sign in (t_before, t]: locate the root by Newton iteration,
    // integrating from the last accepted node.
    CubicEvaluator local(p, {t_before}, {before});
    double root = t_before - before[1] / (0.5 * p.derivative(before[0]));
    if (!(root > t_before && root <= t)) root = 0.5 * (t_before + t);
    State at_root{};
    for (int k = 0; k < 50; ++k) {
      at_root = local.advance(root);
      const double slope = 0.5 * p.derivative(at_root[0]);
      const double step = at_root[1] / slope;
      root -= step;
      if (std::abs(step) <= 1e-15 * std::max(1.0, root)) break;
    }
    at_root = local.advance(root);
    if (!(root > t_before)) throw NumericalError("integrate_profile: first passage not bracketed");
    ts.push_back(root);
    us.push_back(at_root);
    break;
  }

  auto impl = std::make_shared<CubicEvaluator>(p, std::move(ts), std::move(us));
  return ProfileSolution(std::move(impl), p.s);
}

ProfileSolution custom_profile_load(std::span<const double> t, std::span<const double> r,
                                    double pitch) {
  if (t.size() != r.size()) throw DomainError("custom profile: t and r lengths differ");
  if (t.size() < 6) throw DomainError("custom profile: need at least 6 samples");
  if (pitch == 0.0) throw DomainError("custom profile: pitch s must be nonzero");
  for (std::size_t i = 0; i < t.size(); ++i) {
    if (!std::isfinite(t[i]) || !std::isfinite(r[i])) {
      throw DomainError("custom profile: non-finite sample at row " + std::to_string(i));
    }
    if (!(r[i] > 0.0)) throw DomainError("custom profile: r must be positive");
    if (i > 0 && !(t[i] > t[i - 1])) throw DomainError("custom profile: t must be strictly increasing");
    if (i > 0 && !(r[i] > r[i - 1])) {
      throw DomainError("custom profile: r must be strictly increasing (r' > 0 on the interior)");
    }
  }
  auto impl = std::make_shared<TableEvaluator>(std::vector<double>(t.begin(), t.end()),
                                               std::vector<double>(r.begin(), r.end()));
  return ProfileSolution(std::move(impl), pitch);
}

// ---------------------------------------------------------------------------
// Reports

std::vector<NamedResidual> boundary_report(const ProfileSolution& sol) {
  const double len = sol.length();
  const double s = sol.pitch();
  const auto start = sol.at(0.0);
  const auto end = sol.at(len);
  // One-sided second-order difference of r''; exact to O(h^3) for an even r.
  const double h = 1e-3 * len;
  auto r3_estimate = [&](double t0, double dir) {
    const double a = sol.at(t0).rpp;
    const double b = sol.at(t0 + dir * h).rpp;
    const double c = sol.at(t0 + 2.0 * dir * h).rpp;
    return dir * (-3.0 * a + 4.0 * b - c) / (2.0 * h);
  };
  return {
      {"f_prime_start_minus_1", 2.0 * (start.rp * start.rp + start.r * start.rpp) / s - 1.0},
      {"f_prime_end_plus_1", 2.0 * (end.rp * end.rp + end.r * end.rpp) / s + 1.0},
      {"two_r_rpp_start_minus_s", 2.0 * start.r * start.rpp - s},
      {"two_r_rpp_end_plus_s", 2.0 * end.r * end.rpp + s},
      {"rp_start", start.rp},
      {"rp_end", end.rp},
      {"rppp_start_estimate", r3_estimate(0.0, 1.0)},
      {"rppp_end_estimate", r3_estimate(len, -1.0)},
  };
}

std::vector<NamedResidual> interior_report(const ProfileSolution& sol, std::size_t samples) {
  const double len = sol.length();
  const auto& poly = sol.polynomial();
  double first_integral = 0.0;
  double min_rp = std::numeric_limits<double>::infinity();
  double min_f = std::numeric_limits<double>::infinity();
  for (std::size_t i = 1; i < samples; ++i) {
    const double t = len * static_cast<double>(i) / samples;
    const auto d = sol.at(t);
    if (poly) first_integral = std::max(first_integral, std::abs(d.rp * d.rp - (*poly)(d.r)));
    min_rp = std::min(min_rp, d.rp);
    min_f = std::min(min_f, 2.0 * d.r * d.rp / sol.pitch());
  }
  std::vector<NamedResidual> out;
  if (poly) {
    out.push_back({"first_integral", first_integral});
    out.push_back({"r_start_minus_x", sol.at(0.0).r - poly->x});
    out.push_back({"r_end_minus_y", sol.at(len).r - poly->y});
  }
  out.push_back({"min_interior_rp", min_rp});
  out.push_back({"min_interior_f", min_f});
  return out;
}

// ---------------------------------------------------------------------------
// CSV

void write_profile_csv(const ProfileSolution& sol, const std::filesystem::path& path,
                       std::size_t rows) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot open " + path.string() + " for writing");
  out << "t,r,rp,rpp,f,fp\n" << std::setprecision(17);
  for (const auto& row : sol.sample(rows)) {
    out << row.t << ',' << row.r << ',' << row.rp << ',' << row.rpp << ',' << row.f << ','
        << row.fp << '\n';
  }
  if (!out) throw IoError("write failed: " + path.string());
}

ProfileSolution read_profile_csv(const std::filesystem::path& path, double pitch) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path.string());
  std::string line;
  if (!std::getline(in, line)) throw DomainError("profile table is empty: " + path.string());
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (line != "t,r") throw DomainError("profile table header must be `t,r`, got `" + line + "`");
  std::vector<double> t;
  std::vector<double> r;
  std::size_t row = 1;
  while (std::getline(in, line)) {
    ++row;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const auto comma = line.find(',');
    if (comma == std::string::npos) {
      throw DomainError("profile table row " + std::to_string(row) + ": expected two columns");
    }
    try {
      std::size_t used = 0;
      t.push_back(std::stod(line.substr(0, comma), &used));
      r.push_back(std::stod(line.substr(comma + 1), &used));
    } catch (const std::logic_error&) {
      throw DomainError("profile table row " + std::to_string(row) + ": not a number");
    }
  }
  return custom_profile_load(t, r, pitch);
}

}  // namespace qchk
