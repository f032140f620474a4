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


/* C interface to the qchk verification engine.
 *
 * Objects are opaque handles owned by the caller and released with the
 * matching *_free function. Every fallible call returns a qchk_status; on
 * failure qchk_last_error() describes the problem for the calling thread.
 * Strings returned through char** are released with qchk_string_free. */

#ifndef QCHK_H
#define QCHK_H

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#if defined(QCHK_BUILDING)
#define QCHK_API __declspec(dllexport)
#else
#define QCHK_API __declspec(dllimport)
#endif
#else
#define QCHK_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum qchk_status {
  QCHK_OK = 0,
  QCHK_VERIFICATION_FAILED = 1,
  QCHK_CONFIG_ERROR = 2,
  QCHK_NUMERICAL_ERROR = 3,
  QCHK_IO_ERROR = 4,
  QCHK_INVALID_ARGUMENT = 5
} qchk_status;

typedef struct qchk_config qchk_config;
typedef struct qchk_profile qchk_profile;
typedef struct qchk_report qchk_report;

typedef struct qchk_check_info {
  const char* name;        /* valid while the report lives */
  const char* paper_ref;
  double max_residual;
  double median_residual;
  double tolerance;
  int pass;
  int expected_fail;
  size_t samples;
} qchk_check_info;

QCHK_API const char* qchk_version(void);
/* Message of the last failed call on this thread; empty when none. */
QCHK_API const char* qchk_last_error(void);
QCHK_API void qchk_string_free(char* s);

/* Configuration. */
QCHK_API qchk_status qchk_config_default(qchk_config** out);
QCHK_API qchk_status qchk_config_from_json(const char* json, qchk_config** out);
QCHK_API qchk_status qchk_config_from_file(const char* path, qchk_config** out);
QCHK_API qchk_status qchk_config_set_mode(qchk_config* config, const char* mode);
QCHK_API qchk_status qchk_config_set_seed(qchk_config* config, uint64_t seed);
QCHK_API qchk_status qchk_config_set_sample_count(qchk_config* config, int count);
QCHK_API qchk_status qchk_config_set_output_dir(qchk_config* config, const char* dir);
QCHK_API qchk_status qchk_config_output_dir(const qchk_config* config, char** out);
QCHK_API qchk_status qchk_config_to_json(const qchk_config* config, char** out);
QCHK_API void qchk_config_free(qchk_config* config);

/* Profile r(t). */
QCHK_API qchk_status qchk_profile_solve(const qchk_config* config, qchk_profile** out);
QCHK_API qchk_status qchk_profile_length(const qchk_profile* profile, double* out);
/* out[0..5] = r, r', r'', r''', f, f' at t in [0, L]. */
QCHK_API qchk_status qchk_profile_evaluate(const qchk_profile* profile, double t, double out[6]);
/* JSON object of named boundary and interior residuals. */
QCHK_API qchk_status qchk_profile_residuals(const qchk_profile* profile, char** out);
QCHK_API qchk_status qchk_profile_write_csv(const qchk_profile* profile, const char* path);
QCHK_API void qchk_profile_free(qchk_profile* profile);

/* Plotting table t,r,f,a,b,c,lambda,mu,kappa with `rows` rows. */
QCHK_API qchk_status qchk_write_summary_csv(const qchk_config* config, size_t rows,
                                            const char* path);

/* Verification suite. A completed run returns QCHK_OK even when checks fail;
 * qchk_report_status tells whether the report itself is clean. */
QCHK_API qchk_status qchk_run_suite(const qchk_config* config, qchk_report** out);
QCHK_API qchk_status qchk_report_from_json(const char* json, qchk_report** out);
/* QCHK_OK when every check passes or fails by design, else QCHK_VERIFICATION_FAILED. */
QCHK_API qchk_status qchk_report_status(const qchk_report* report);
QCHK_API size_t qchk_report_check_count(const qchk_report* report);
QCHK_API qchk_status qchk_report_check(const qchk_report* report, size_t index,
                                       qchk_check_info* out);
QCHK_API qchk_status qchk_report_to_json(const qchk_report* report, char** out);
/* Writes report.json and, for reports from qchk_run_suite, profile.csv,
 * summary.csv and decay.csv into `dir` (created if missing). */
QCHK_API qchk_status qchk_report_write(const qchk_report* report, const char* dir);
QCHK_API void qchk_report_free(qchk_report* report);

#ifdef __cplusplus
}
#endif

#endif /* QCHK_H */
