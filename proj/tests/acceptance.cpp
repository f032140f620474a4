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


// Acceptance run at desk scale (n = 3, real dimension 6). Prints one PASS/FAIL
// line per criterion; `--criterion N` restricts the run to one criterion.
// Thresholds are fixed here and do not follow the configurable tolerances.

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "qchk/errors.hpp"
#include "qchk/suite.hpp"

namespace {

using qchk::RunConfig;
using qchk::RunMode;
using qchk::VerificationReport;

// Period of the cubic profile with x = 1, y = 2, s = 2/3 (mpmath, 30 digits).
constexpr double kLengthOracle = 4.5415369044037414;

struct Bound {
  std::string what;
  double value;
  bool below;  // value < limit when true, value > limit otherwise
  double limit;

  bool ok() const { return below ? value < limit : value > limit; }  // NaN fails both ways
};

const VerificationReport& run(RunMode mode, double f_scale = 1.0) {
  static std::map<std::pair<RunMode, double>, VerificationReport> cache;
  auto key = std::make_pair(mode, f_scale);
  if (auto it = cache.find(key); it != cache.end()) return it->second;
  RunConfig c = qchk::default_config();
  c.mode = mode;
  c.f_scale = f_scale;
  c.sample_count = 50;
  c.residual_vectors = 100;
  return cache.emplace(key, qchk::run_suite(c).report).first->second;
}

double max_of(const VerificationReport& r, const std::string& name) {
  const auto* rec = r.find(name);
  if (!rec) throw qchk::Error("report has no check '" + name + "'");
  return rec->max_residual;
}

double median_of(const VerificationReport& r, const std::string& name) {
  const auto* rec = r.find(name);
  if (!rec) throw qchk::Error("report has no check '" + name + "'");
  return rec->median_residual;
}

Bound below(const VerificationReport& r, const std::string& name, double limit) {
  return {name, max_of(r, name), true, limit};
}

std::vector<Bound> kahler_condition() {
  const auto& good = run(RunMode::warped);
  return {below(good, "nabla_J", 1e-7),
          {"nabla_J with f scaled by 1.01", max_of(run(RunMode::warped, 1.01), "nabla_J"), false, 1e-3}};
}

std::vector<Bound> qch_property() {
  const auto& good = run(RunMode::warped);
  return {below(good, "qch_fit_residual", 1e-7),
          below(good, "qch_a_closed_form", 1e-7),
          {"qch_fit_residual median on CP1 x CP1", median_of(run(RunMode::negative_control), "qch_fit_residual"),
           false, 1e-2}};
}

std::vector<Bound> ricci_split() {
  const auto& r = run(RunMode::warped);
  return {below(r, "ricci_lambda", 1e-7), below(r, "ricci_mu", 1e-7), below(r, "ricci_off_block", 1e-8)};
}

std::vector<Bound> structure_identities() {
  const auto& r = run(RunMode::warped);
  return {below(r, "kappa", 1e-7),          below(r, "p", 1e-8),
          below(r, "p_star", 1e-7),         below(r, "dlnkappa_along_t", 1e-7),
          below(r, "nabla_theta", 1e-7),    below(r, "grad_a", 1e-6),
          below(r, "grad_b", 1e-6),         below(r, "totally_geodesic_D", 1e-8)};
}

std::vector<Bound> special_potential() {
  const auto& r = run(RunMode::warped);
  return {below(r, "krp_killing", 1e-7), below(r, "hessian_E_proportional_to_m", 1e-7)};
}

std::vector<Bound> profile() {
  const auto& r = run(RunMode::warped);
  const auto sol = qchk::solve_profile(qchk::default_config());
  return {below(r, "profile_polynomial", 1e-12),
          below(r, "profile_boundary", 1e-7),
          below(r, "profile_endpoint_slope", 1e-7),
          below(r, "profile_first_integral", 1e-8),
          below(r, "profile_period_agreement", 1e-6),
          {"|L - frozen period|", std::abs(sol.length() - kLengthOracle), true, 1e-6}};
}

// Closed forms exactly as stated: the fiber Ricci value m s^2 a^2/(4 b^4)
// and s^2 f^2/(4 r^4) + f'r'/(f r) for the JH-U plane.
std::vector<Bound> oneill() {
  const auto& w = run(RunMode::warped);
  const auto& cb = run(RunMode::circle_bundle);
  return {{"ricci_xi (stated closed form)", max_of(cb, "ricci_xi_without_factor_two"), true, 1e-7},
          below(cb, "R_X_xi_Y_xi", 1e-7),
          below(w, "T_UU", 1e-7),
          below(w, "T_xixi", 1e-7),
          {"K_JH_U (stated closed form)", max_of(w, "K_JH_U_plus_sign"), true, 1e-7},
          below(w, "R_JH_U_V_JH_orthogonal", 1e-7),
          below(w, "R_DDDE", 1e-7)};
}

std::vector<Bound> jacobi_experiment() {
  const auto& r = run(RunMode::warped);
  return {below(r, "jacobi_norm_matches_f", 1e-6), below(r, "jacobi_ratio_law", 1e-6),
          below(r, "jacobi_decay", 1e-2), below(r, "jacobi_g_cdot_C_constant", 1e-8)};
}

std::vector<Bound> jets() {
  const auto a = qchk::jet_agreement(42, 100);
  return {{"gradient relative error over 100 compositions", a.gradient, true, 1e-6},
          {"Hessian relative error over 100 compositions", a.hessian, true, 1e-4}};
}

std::vector<Bound> product_mode() {
  const auto& r = run(RunMode::product);
  return {below(r, "nabla_J", 1e-7), below(r, "kappa_vanishes", 1e-10),
          below(r, "qch_fit_residual", 1e-7)};
}

struct Criterion {
  const char* title;
  std::function<std::vector<Bound>()> eval;
};

const std::vector<Criterion>& criteria() {
  static const std::vector<Criterion> all = {
      {"Kahler condition", kahler_condition},
      {"QCH property", qch_property},
      {"Ricci split", ricci_split},
      {"structure identities", structure_identities},
      {"special Kahler-Ricci potential", special_potential},
      {"profile", profile},
      {"O'Neill closed forms", oneill},
      {"special Jacobi field", jacobi_experiment},
      {"jets vs finite differences", jets},
      {"product mode", product_mode},
  };
  return all;
}

bool evaluate(std::size_t index, bool verbose) {
  const Criterion& c = criteria()[index];
  std::vector<Bound> bounds;
  try {
    bounds = c.eval();
  } catch (const std::exception& e) {
    std::printf("FAIL  %2zu %s: %s\n", index + 1, c.title, e.what());
    return false;
  }
  bool ok = true;
  for (const auto& b : bounds) ok = ok && b.ok();
  std::printf("%s  %2zu %s\n", ok ? "PASS" : "FAIL", index + 1, c.title);
  for (const auto& b : bounds) {
    if (verbose || !b.ok()) {
      std::printf("        %-4s %-48s %.3e %s %.0e\n", b.ok() ? "ok" : "bad", b.what.c_str(), b.value,
                  b.below ? "<" : ">", b.limit);
    }
  }
  return ok;
}

}  // namespace

int main(int argc, char** argv) {
  std::optional<std::size_t> only;
  bool verbose = false;
  for (int i = 1; i < argc; ++i) {
    const std::string arg = argv[i];
    if (arg == "--criterion" && i + 1 < argc) {
      const long n = std::strtol(argv[++i], nullptr, 10);
      if (n < 1 || n > static_cast<long>(criteria().size())) {
        std::fprintf(stderr, "criterion must be 1..%zu\n", criteria().size());
        return 2;
      }
      only = static_cast<std::size_t>(n - 1);
    } else if (arg == "-v" || arg == "--verbose") {
      verbose = true;
    } else {
      std::fprintf(stderr, "usage: %s [--criterion N] [-v]\n", argv[0]);
      return 2;
    }
  }
  bool ok = true;
  for (std::size_t i = 0; i < criteria().size(); ++i) {
    if (!only || *only == i) ok = evaluate(i, verbose) && ok;
  }
  return ok ? 0 : 1;
}
