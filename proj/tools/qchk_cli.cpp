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


// Command-line front end. Talks to the engine only through the C API.

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "qchk.h"

namespace {

struct Options {
  std::string config;
  std::string mode;
  std::optional<std::uint64_t> seed;
  std::string out;
  std::optional<int> points;
};

// Exit codes: 0 clean, 1 verification failure, 2 configuration or input error,
// 3 numerical failure.
int exit_code(qchk_status status) {
  switch (status) {
    case QCHK_OK: return 0;
    case QCHK_VERIFICATION_FAILED: return 1;
    case QCHK_NUMERICAL_ERROR: return 3;
    case QCHK_CONFIG_ERROR:
    case QCHK_IO_ERROR:
    case QCHK_INVALID_ARGUMENT: return 2;
  }
  return 3;
}

int report_error(qchk_status status) {
  std::cerr << "qchk: " << qchk_last_error() << "\n";
  return exit_code(status);
}

struct ConfigHandle {
  qchk_config* ptr = nullptr;
  ~ConfigHandle() { qchk_config_free(ptr); }
};

struct ReportHandle {
  qchk_report* ptr = nullptr;
  ~ReportHandle() { qchk_report_free(ptr); }
};

std::string take(char* s) {
  std::string out(s ? s : "");
  qchk_string_free(s);
  return out;
}

qchk_status load_config(const Options& opt, ConfigHandle& cfg) {
  qchk_status st = opt.config.empty() ? qchk_config_default(&cfg.ptr)
                                      : qchk_config_from_file(opt.config.c_str(), &cfg.ptr);
  if (st != QCHK_OK) return st;
  if (!opt.mode.empty() && (st = qchk_config_set_mode(cfg.ptr, opt.mode.c_str())) != QCHK_OK) {
    return st;
  }
  if (opt.seed && (st = qchk_config_set_seed(cfg.ptr, *opt.seed)) != QCHK_OK) return st;
  if (!opt.out.empty()) return qchk_config_set_output_dir(cfg.ptr, opt.out.c_str());
  return QCHK_OK;
}

std::filesystem::path output_dir(const ConfigHandle& cfg) {
  char* dir = nullptr;
  qchk_config_output_dir(cfg.ptr, &dir);
  return take(dir);
}

bool ensure_dir(const std::filesystem::path& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) std::cerr << "qchk: cannot create " << dir << ": " << ec.message() << "\n";
  return !ec;
}

std::string format_residual(double v) {
  if (std::isnan(v)) return "nan";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3e", v);
  return buf;
}

void print_checks(const qchk_report* report) {
  const std::size_t n = qchk_report_check_count(report);
  std::size_t bad = 0;
  for (std::size_t i = 0; i < n; ++i) {
    qchk_check_info info{};
    qchk_report_check(report, i, &info);
    const bool ok = (info.pass != 0) != (info.expected_fail != 0);
    bad += ok ? 0 : 1;
    const char* tag = info.pass ? "PASS " : (info.expected_fail ? "XFAIL" : "FAIL ");
    std::printf("%s %-30s max %-10s tol %.1e  n=%zu\n", tag, info.name,
                format_residual(info.max_residual).c_str(), info.tolerance, info.samples);
  }
  std::printf("%zu checks, %zu failing\n", n, bad);
}

int cmd_solve_profile(const Options& opt) {
  ConfigHandle cfg;
  if (qchk_status st = load_config(opt, cfg); st != QCHK_OK) return report_error(st);
  qchk_profile* profile = nullptr;
  if (qchk_status st = qchk_profile_solve(cfg.ptr, &profile); st != QCHK_OK) {
    return report_error(st);
  }
  const auto dir = output_dir(cfg);
  int code = 0;
  char* residuals = nullptr;
  qchk_status st = qchk_profile_residuals(profile, &residuals);
  if (st == QCHK_OK) {
    std::cout << take(residuals) << "\n";
    if (!ensure_dir(dir)) {
      code = 2;
    } else if ((st = qchk_profile_write_csv(profile, (dir / "profile.csv").c_str())) == QCHK_OK) {
      std::cout << "wrote " << (dir / "profile.csv").string() << "\n";
    }
  }
  if (st != QCHK_OK) code = report_error(st);
  qchk_profile_free(profile);
  return code;
}

int cmd_verify(const Options& opt) {
  ConfigHandle cfg;
  if (qchk_status st = load_config(opt, cfg); st != QCHK_OK) return report_error(st);
  if (opt.points) {
    if (qchk_status st = qchk_config_set_sample_count(cfg.ptr, *opt.points); st != QCHK_OK) {
      return report_error(st);
    }
  }
  ReportHandle report;
  if (qchk_status st = qchk_run_suite(cfg.ptr, &report.ptr); st != QCHK_OK) {
    return report_error(st);
  }
  const auto dir = output_dir(cfg);
  if (qchk_status st = qchk_report_write(report.ptr, dir.c_str()); st != QCHK_OK) {
    return report_error(st);
  }
  print_checks(report.ptr);
  std::cout << "wrote " << (dir / "report.json").string() << "\n";
  return exit_code(qchk_report_status(report.ptr));
}

int cmd_sample(const Options& opt) {
  ConfigHandle cfg;
  if (qchk_status st = load_config(opt, cfg); st != QCHK_OK) return report_error(st);
  const int rows = opt.points.value_or(100);
  if (rows < 2) {
    std::cerr << "qchk: --points must be at least 2\n";
    return 2;
  }
  const auto dir = output_dir(cfg);
  if (!ensure_dir(dir)) return 2;
  const auto path = dir / "summary.csv";
  if (qchk_status st = qchk_write_summary_csv(cfg.ptr, static_cast<std::size_t>(rows), path.c_str());
      st != QCHK_OK) {
    return report_error(st);
  }
  std::cout << "wrote " << path.string() << " (" << rows << " rows)\n";
  return 0;
}

int cmd_report(const Options& opt) {
  std::filesystem::path dir = opt.out;
  if (dir.empty()) {
    ConfigHandle cfg;
    if (qchk_status st = load_config(opt, cfg); st != QCHK_OK) return report_error(st);
    dir = output_dir(cfg);
  }
  const auto path = dir / "report.json";
  std::ifstream in(path);
  if (!in) {
    std::cerr << "qchk: cannot read " << path.string() << " (run `qchk verify` first)\n";
    return 2;
  }
  std::ostringstream text;
  text << in.rdbuf();
  ReportHandle report;
  if (qchk_status st = qchk_report_from_json(text.str().c_str(), &report.ptr); st != QCHK_OK) {
    return report_error(st);
  }
  print_checks(report.ptr);
  return exit_code(qchk_report_status(report.ptr));
}

void add_common(CLI::App* sub, Options& opt, bool with_points) {
  sub->add_option("--config", opt.config, "JSON run configuration")->check(CLI::ExistingFile);
  sub->add_option("--mode", opt.mode, "warped, product, circle-bundle or negative-control");
  sub->add_option("--seed", opt.seed, "64-bit RNG seed");
  sub->add_option("--out", opt.out, "output directory");
  if (with_points) sub->add_option("--points", opt.points, "number of sample points or rows");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"qchk: numerical verification of quasi-constant holomorphic sectional curvature"};
  app.set_version_flag("--version", std::string(qchk_version()));
  app.require_subcommand(1);
  Options opt;

  auto* solve = app.add_subcommand("solve-profile", "solve r(t) and write profile.csv");
  add_common(solve, opt, false);
  auto* verify = app.add_subcommand("verify", "run the verification suite and write report.json");
  add_common(verify, opt, true);
  auto* sample = app.add_subcommand("sample", "write the (t, r, f, a, b, c, lambda, mu, kappa) table");
  add_common(sample, opt, true);
  auto* report = app.add_subcommand("report", "print an existing report.json");
  add_common(report, opt, false);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }
  if (*solve) return cmd_solve_profile(opt);
  if (*verify) return cmd_verify(opt);
  if (*sample) return cmd_sample(opt);
  return cmd_report(opt);
}
