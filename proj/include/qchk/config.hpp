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

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>

namespace qchk {

inline constexpr std::string_view kVersion = "0.1.0";

enum class RunMode { warped, product, circle_bundle, negative_control };

std::string_view to_string(RunMode mode);
/// Throws ConfigError for an unknown name.
RunMode parse_mode(std::string_view name);

/// Everything a verification run depends on. Two equal configs produce
/// bit-identical reports.
struct RunConfig {
  RunMode mode = RunMode::warped;
  int n = 3;
  double c0 = 4.0;
  std::optional<int> k;
  double s = 2.0 / 3.0;  // always resolved; s = 2k/n when k is given
  double x = 1.0;
  double y = 2.0;
  std::uint64_t rng_seed = 42;
  int sample_count = 50;
  int residual_vectors = 100;
  /// Overrides of the built-in per-check tolerances.
  std::map<std::string, double> tolerances;
  std::string output_dir = "qchk-out";
  /// Multiplies f in the metric and J; anything but 1 breaks the Kähler condition.
  double f_scale = 1.0;
  double alpha = 1.0;
  double beta = 1.0;
  double end_margin = 1e-3;
  double chart_radius = 4.0;
  /// Sampled base points satisfy |z| <= sample_radius.
  double sample_radius = 2.0;
  /// Start of the special Jacobi experiment as a fraction of L.
  double jacobi_start = 0.5;
  /// Optional `t,r` table replacing the cubic profile.
  std::optional<std::string> profile_table;

  bool operator==(const RunConfig&) const = default;
};

/// The defaults above: warped, n = 3, c0 = 4, k = 1, x = 1, y = 2, seed 42.
RunConfig default_config();

/// Parses and validates a JSON object. Unknown keys, missing required keys,
/// type mismatches and violated invariants raise ConfigError naming the field.
RunConfig parse_config_json(std::string_view text);
RunConfig parse_config(const std::filesystem::path& path);

/// Throws ConfigError describing the first violated invariant.
void validate(const RunConfig& config);

/// Canonical JSON echo; parse_config_json(config_to_json(c)) == c.
std::string config_to_json(const RunConfig& config, int indent = 2);

}  // namespace qchk
