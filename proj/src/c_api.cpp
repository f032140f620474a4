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


#include "qchk.h"

#include <cstring>
#include <exception>
#include <new>
#include <string>

#include <nlohmann/json.hpp>

#include "qchk/config.hpp"
#include "qchk/errors.hpp"
#include "qchk/profile.hpp"
#include "qchk/suite.hpp"

struct qchk_config {
  qchk::RunConfig value;
};

struct qchk_profile {
  qchk::ProfileSolution value;
};

struct qchk_report {
  qchk::SuiteResult value;
};

namespace {

thread_local std::string g_last_error;

qchk_status fail(qchk_status code, const std::string& message) {
  g_last_error = message;
  return code;
}

// Runs `body`, mapping library exceptions onto status codes.
template <typename F>
qchk_status guarded(F&& body) {
  try {
    g_last_error.clear();
    return body();
  } catch (const qchk::ConfigError& e) {
    return fail(QCHK_CONFIG_ERROR, e.what());
  } catch (const qchk::IoError& e) {
    return fail(QCHK_IO_ERROR, e.what());
  } catch (const qchk::Error& e) {
    return fail(QCHK_NUMERICAL_ERROR, e.what());
  } catch (const std::bad_alloc&) {
    return fail(QCHK_NUMERICAL_ERROR, "out of memory");
  } catch (const std::exception& e) {
    return fail(QCHK_NUMERICAL_ERROR, e.what());
  }
}

char* duplicate(const std::string& s) {
  char* out = new char[s.size() + 1];
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

#define QCHK_REQUIRE(cond, what) \
  if (!(cond)) return fail(QCHK_INVALID_ARGUMENT, what)

}  // namespace

extern "C" {

const char* qchk_version(void) { return qchk::kVersion.data(); }

const char* qchk_last_error(void) { return g_last_error.c_str(); }

void qchk_string_free(char* s) { delete[] s; }

qchk_status qchk_config_default(qchk_config** out) {
  QCHK_REQUIRE(out, "out must not be null");
  return guarded([&] {
    *out = new qchk_config{qchk::default_config()};
    return QCHK_OK;
  });
}

qchk_status qchk_config_from_json(const char* json, qchk_config** out) {
  QCHK_REQUIRE(json && out, "json and out must not be null");
  return guarded([&] {
    *out = new qchk_config{qchk::parse_config_json(json)};
    return QCHK_OK;
  });
}

qchk_status qchk_config_from_file(const char* path, qchk_config** out) {
  QCHK_REQUIRE(path && out, "path and out must not be null");
  return guarded([&] {
    *out = new qchk_config{qchk::parse_config(path)};
    return QCHK_OK;
  });
}

qchk_status qchk_config_set_mode(qchk_config* config, const char* mode) {
  QCHK_REQUIRE(config && mode, "config and mode must not be null");
  return guarded([&] {
    qchk::RunConfig next = config->value;
    next.mode = qchk::parse_mode(mode);
    qchk::validate(next);
    config->value = next;
    return QCHK_OK;
  });
}

qchk_status qchk_config_set_seed(qchk_config* config, uint64_t seed) {
  QCHK_REQUIRE(config, "config must not be null");
  config->value.rng_seed = seed;
  return QCHK_OK;
}

qchk_status qchk_config_set_sample_count(qchk_config* config, int count) {
  QCHK_REQUIRE(config, "config must not be null");
  return guarded([&] {
    qchk::RunConfig next = config->value;
    next.sample_count = count;
    qchk::validate(next);
    config->value = next;
    return QCHK_OK;
  });
}

qchk_status qchk_config_set_output_dir(qchk_config* config, const char* dir) {
  QCHK_REQUIRE(config && dir, "config and dir must not be null");
  return guarded([&] {
    qchk::RunConfig next = config->value;
    next.output_dir = dir;
    qchk::validate(next);
    config->value = next;
    return QCHK_OK;
  });
}

qchk_status qchk_config_output_dir(const qchk_config* config, char** out) {
  QCHK_REQUIRE(config && out, "config and out must not be null");
  *out = duplicate(config->value.output_dir);
  return QCHK_OK;
}

qchk_status qchk_config_to_json(const qchk_config* config, char** out) {
  QCHK_REQUIRE(config && out, "config and out must not be null");
  return guarded([&] {
    *out = duplicate(qchk::config_to_json(config->value));
    return QCHK_OK;
  });
}

void qchk_config_free(qchk_config* config) { delete config; }

qchk_status qchk_profile_solve(const qchk_config* config, qchk_profile** out) {
  QCHK_REQUIRE(config && out, "config and out must not be null");
  return guarded([&] {
    if (config->value.mode == qchk::RunMode::circle_bundle) {
      throw qchk::ConfigError("the circle-bundle mode has no profile");
    }
    *out = new qchk_profile{qchk::solve_profile(config->value)};
    return QCHK_OK;
  });
}

qchk_status qchk_profile_length(const qchk_profile* profile, double* out) {
  QCHK_REQUIRE(profile && out, "profile and out must not be null");
  *out = profile->value.length();
  return QCHK_OK;
}

qchk_status qchk_profile_evaluate(const qchk_profile* profile, double t, double out[6]) {
  QCHK_REQUIRE(profile && out, "profile and out must not be null");
  QCHK_REQUIRE(t >= 0.0 && t <= profile->value.length(), "t must lie in [0, L]");
  return guarded([&] {
    const auto d = profile->value.at(t);
    out[0] = d.r;
    out[1] = d.rp;
    out[2] = d.rpp;
    out[3] = d.rppp;
    out[4] = profile->value.f(t);
    out[5] = profile->value.f_prime(t);
    return QCHK_OK;
  });
}

qchk_status qchk_profile_residuals(const qchk_profile* profile, char** out) {
  QCHK_REQUIRE(profile && out, "profile and out must not be null");
  return guarded([&] {
    nlohmann::ordered_json obj;
    obj["length"] = profile->value.length();
    for (const auto& e : qchk::boundary_report(profile->value)) obj[e.name] = e.value;
    for (const auto& e : qchk::interior_report(profile->value)) obj[e.name] = e.value;
    *out = duplicate(obj.dump(2));
    return QCHK_OK;
  });
}

qchk_status qchk_profile_write_csv(const qchk_profile* profile, const char* path) {
  QCHK_REQUIRE(profile && path, "profile and path must not be null");
  return guarded([&] {
    qchk::write_profile_csv(profile->value, path);
    return QCHK_OK;
  });
}

void qchk_profile_free(qchk_profile* profile) { delete profile; }

qchk_status qchk_write_summary_csv(const qchk_config* config, size_t rows, const char* path) {
  QCHK_REQUIRE(config && path, "config and path must not be null");
  QCHK_REQUIRE(rows >= 2, "rows must be at least 2");
  return guarded([&] {
    if (config->value.mode == qchk::RunMode::circle_bundle) {
      throw qchk::ConfigError("the circle-bundle mode has no profile to tabulate");
    }
    const auto profile = qchk::solve_profile(config->value);
    qchk::write_summary_csv(qchk::summary_table(config->value, profile, rows), path);
    return QCHK_OK;
  });
}

qchk_status qchk_run_suite(const qchk_config* config, qchk_report** out) {
  QCHK_REQUIRE(config && out, "config and out must not be null");
  return guarded([&] {
    *out = new qchk_report{qchk::run_suite(config->value)};
    return QCHK_OK;
  });
}

qchk_status qchk_report_from_json(const char* json, qchk_report** out) {
  QCHK_REQUIRE(json && out, "json and out must not be null");
  return guarded([&] {
    qchk::SuiteResult result;
    result.report = qchk::report_from_json(json);
    *out = new qchk_report{std::move(result)};
    return QCHK_OK;
  });
}

qchk_status qchk_report_status(const qchk_report* report) {
  QCHK_REQUIRE(report, "report must not be null");
  return report->value.report.all_ok() ? QCHK_OK : QCHK_VERIFICATION_FAILED;
}

size_t qchk_report_check_count(const qchk_report* report) {
  return report ? report->value.report.checks.size() : 0;
}

qchk_status qchk_report_check(const qchk_report* report, size_t index, qchk_check_info* out) {
  QCHK_REQUIRE(report && out, "report and out must not be null");
  const auto& checks = report->value.report.checks;
  QCHK_REQUIRE(index < checks.size(), "check index out of range");
  const auto& r = checks[index];
  *out = {r.name.c_str(), r.paper_ref.c_str(), r.max_residual, r.median_residual, r.tolerance,
          r.pass ? 1 : 0, r.expected_fail ? 1 : 0, r.samples};
  return QCHK_OK;
}

qchk_status qchk_report_to_json(const qchk_report* report, char** out) {
  QCHK_REQUIRE(report && out, "report and out must not be null");
  return guarded([&] {
    *out = duplicate(qchk::report_to_json(report->value.report));
    return QCHK_OK;
  });
}

qchk_status qchk_report_write(const qchk_report* report, const char* dir) {
  QCHK_REQUIRE(report && dir, "report and dir must not be null");
  return guarded([&] {
    qchk::emit_outputs(report->value, dir);
    return QCHK_OK;
  });
}

void qchk_report_free(qchk_report* report) { delete report; }

}  // extern "C"
