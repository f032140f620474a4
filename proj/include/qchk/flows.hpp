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

#include <filesystem>
#include <vector>

#include "qchk/curvature.hpp"
#include "qchk/geometry.hpp"

namespace qchk {

struct FlowOptions {
  double abs_tol = 1e-10;
  double rel_tol = 1e-10;
  double initial_step = 1e-3;
};

struct GeodesicState {
  Vec position;
  Vec velocity;
};

struct GeodesicPath {
  std::vector<double> s;  // parameter values of the samples
  std::vector<GeodesicState> states;
};

/// Integrates nabla_c' c' = 0 from `start` for parameter length T and records
/// `samples` + 1 equally spaced states. Leaving the chart raises DomainError.
GeodesicPath integrate_geodesic(const MetricModel& model, const GeodesicState& start, double T,
                                std::size_t samples = 100, FlowOptions options = {});

/// |nabla_c' c'| at interior spot parameters, with c'' from a five-point stencil
/// of re-integrated positions (step `delta`).
double geodesic_residual(const MetricModel& model, const GeodesicState& start,
                         std::span<const double> spots, double delta = 1e-3,
                         FlowOptions options = {});

struct JacobiSample {
  double s = 0.0;
  Vec position;
  Vec velocity;
  Vec C;
  Vec DC;  // nabla_c' C
};

/// Jacobi field along the geodesic of `path`, integrated jointly with the
/// geodesic and a parallel orthonormal frame E_i: C = c_i E_i with
/// c_i'' = c_j R(c', E_j, c', E_i). Samples are taken at path.s.
std::vector<JacobiSample> integrate_jacobi(const MetricModel& model, const GeodesicPath& path,
                                           const Vec& C0, const Vec& DC0,
                                           FlowOptions options = {});

/// max |nabla^2 C - R(c', C) c'| at spot parameters, with the outer derivative
/// of nabla C taken by a five-point stencil of re-integrated samples.
double jacobi_residual(const MetricModel& model, const GeodesicState& start, const Vec& C0,
                       const Vec& DC0, std::span<const double> spots, double delta = 1e-3,
                       FlowOptions options = {});

struct DecayRow {
  double t = 0.0;
  double C_norm = 0.0;
  double f = 0.0;
  double ratio_residual = 0.0;
  double g_cdot_C = 0.0;
};

struct DecayReport {
  double t0 = 0.0;
  double t_end = 0.0;
  bool truncated = false;          // t_end was pulled back to the interior margin
  std::vector<DecayRow> rows;
  double max_norm_vs_f = 0.0;      // max | |C| - f |
  double max_ratio_residual = 0.0;
  double decay_ratio = 0.0;        // |C(t_end)| / |C(t0)|
  double g_cdot_C_drift = 0.0;     // max |g(c', C)(t) - g(c', C)(t0)|
  double jacobi_residual = 0.0;
  double geodesic_residual = 0.0;
};

/// Special Jacobi field along the t-line from t0 to t_end: C(0) = f JH,
/// nabla C(0) = nabla_H (f JH). `x0` supplies (psi, z); its t entry is ignored.
DecayReport special_jacobi_experiment(const WarpedBundleMetric& model, std::span<const double> x0,
                                      double t0, double t_end, std::size_t rows = 100,
                                      FlowOptions options = {});

/// CSV `t,|C|,f(t),ratio_residual,g_cdot_C`.
void write_decay_csv(const DecayReport& report, const std::filesystem::path& path);

}  // namespace qchk
