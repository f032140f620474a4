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
#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "qchk/config.hpp"
#include "qchk/flows.hpp"
#include "qchk/profile.hpp"

namespace qchk {

/// Static description of a check: what it compares and its default tolerance.
struct CheckInfo {
  std::string_view name;
  std::string_view description;
  double tolerance;
};

std::span<const CheckInfo> check_catalog();
const CheckInfo* find_check(std::string_view name);

struct CheckRecord {
  std::string name;
  std::string paper_ref;  // human-readable statement of the property checked
  double max_residual = 0.0;
  double median_residual = 0.0;
  double tolerance = 0.0;
  bool pass = false;
  bool expected_fail = false;
  std::size_t samples = 0;

  /// A record is satisfied when it passes, or when it fails by design.
  bool ok() const noexcept { return pass != expected_fail; }
};

struct VerificationReport {
  RunConfig config;
  std::vector<CheckRecord> checks;  // sorted by name

  bool all_ok() const noexcept;
  const CheckRecord* find(std::string_view name) const;
};

/// One row of the plotting table.
struct SummaryRow {
  double t, r, f, a, b, c, lambda, mu, kappa;
};

struct SuiteResult {
  VerificationReport report;
  std::optional<ProfileSolution> profile;
  std::vector<SummaryRow> summary;
  std::optional<DecayReport> decay;
};

/// Runs every check enabled for the configured mode. Deterministic in the config.
/// Module errors propagate (ConfigError, NumericalError, DomainError).
SuiteResult run_suite(const RunConfig& config);

/// The profile selected by the config: the solved cubic, or the loaded table.
ProfileSolution solve_profile(const RunConfig& config);

/// (t, r, f, a, b, c, lambda, mu, kappa) at `rows` values of t spread over the
/// interior, at the base point psi = 0, z = 0.
std::vector<SummaryRow> summary_table(const RunConfig& config, const ProfileSolution& profile,
                                      std::size_t rows = 100);

/// Agreement of jet derivatives with central differences over random
/// compositions, as the largest relative errors.
struct JetAgreement {
  double gradient = 0.0;
  double hessian = 0.0;
  std::size_t compositions = 0;
};
JetAgreement jet_agreement(std::uint64_t seed, std::size_t compositions = 100);

/// One JSON object with stable key order and no timestamp.
std::string report_to_json(const VerificationReport& report, int indent = 2);
VerificationReport report_from_json(std::string_view text);

void write_summary_csv(std::span<const SummaryRow> rows, const std::filesystem::path& path);

/// report.json plus profile.csv, summary.csv and decay.csv when available.
void emit_outputs(const SuiteResult& result, const std::filesystem::path& dir);

}  // namespace qchk
