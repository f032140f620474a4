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

#include <array>
#include <filesystem>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace qchk {

/// Cubic P(t) = c0 + c1 t + c2 t^2 + c3 t^3 with simple roots x < y < x + y,
/// positive on (x, y), and x P'(x) = s, y P'(y) = -s.
struct CubicProfilePolynomial {
  double x = 0.0;
  double y = 0.0;
  double s = 0.0;
  std::array<double, 4> coeffs{};

  double operator()(double t) const noexcept;
  double derivative(double t) const noexcept;
  double second_derivative(double t) const noexcept;
  double third_derivative() const noexcept { return 6.0 * coeffs[3]; }
};

/// Throws DomainError unless 0 < x < y and s > 0. The invariants of the
/// polynomial are asserted on construction (NumericalError if violated).
CubicProfilePolynomial build_polynomial(double x, double y, double s);

/// Period L = int_x^y dt / sqrt(P(t)), computed with the substitution
/// t = x + (y - x) sin^2(u) that removes both endpoint singularities.
double period_length(const CubicProfilePolynomial& p);

struct ProfileDerivatives {
  double r = 0.0;
  double rp = 0.0;
  double rpp = 0.0;
  double rppp = 0.0;
};

struct ProfileRow {
  double t, r, rp, rpp, f, fp;
};

class ProfileEvaluator;

/// Warping function r on [0, L] with f = 2 r r' / s. Immutable and cheap to
/// copy; evaluation is thread-safe.
class ProfileSolution {
 public:
  ProfileSolution(std::shared_ptr<const ProfileEvaluator> impl, double pitch);

  double length() const noexcept;
  double pitch() const noexcept { return pitch_; }

  /// r and its first three derivatives at t in [0, L].
  ProfileDerivatives at(double t) const;
  double f(double t) const;
  double f_prime(double t) const;

  /// Integration nodes (cubic profiles) or table abscissae (loaded profiles).
  std::span<const double> grid() const noexcept;
  const std::optional<CubicProfilePolynomial>& polynomial() const noexcept;

  /// `count` rows uniformly spaced on [0, L], endpoints included.
  std::vector<ProfileRow> sample(std::size_t count) const;

 private:
  std::shared_ptr<const ProfileEvaluator> impl_;
  double pitch_;
};

/// Solves r'' = P'(r)/2 with r(0) = x, r'(0) = 0 up to the first time L at
/// which r' returns to zero (r(L) = y).
ProfileSolution integrate_profile(const CubicProfilePolynomial& p);

/// Loads a sampled profile. Requires at least 6 strictly increasing t values
/// and strictly increasing positive r. Derivatives come from local degree-5
/// interpolation. `pitch` is the s used in f = 2 r r' / s.
ProfileSolution custom_profile_load(std::span<const double> t, std::span<const double> r,
                                    double pitch);

struct NamedResidual {
  std::string name;
  double value = 0.0;
};

/// Endpoint residuals: f'(0) - 1, f'(L) + 1, 2 r(0) r''(0) - s, 2 r(L) r''(L) + s,
/// r'(0), r'(L), and finite-difference estimates of r''' at both ends.
std::vector<NamedResidual> boundary_report(const ProfileSolution& sol);

/// Interior residuals: max |r'^2 - P(r)| (cubic profiles only), r(0) - x,
/// r(L) - y, min r' and min f on the interior samples.
std::vector<NamedResidual> interior_report(const ProfileSolution& sol, std::size_t samples = 400);

/// CSV `t,r,rp,rpp,f,fp` with 17 significant digits.
void write_profile_csv(const ProfileSolution& sol, const std::filesystem::path& path,
                       std::size_t rows = 201);
/// CSV with header `t,r`.
ProfileSolution read_profile_csv(const std::filesystem::path& path, double pitch);

}  // namespace qchk
