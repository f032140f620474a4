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


#include <cmath>
#include <cstring>
#include <filesystem>
#include <string>

#include <gtest/gtest.h>

#include "qchk.h"

extern "C" int qchk_c_header_smoke(void);

namespace {

std::string take(char* s) {
  std::string out = s ? s : "";
  qchk_string_free(s);
  return out;
}

struct Config {
  qchk_config* ptr = nullptr;
  Config() { EXPECT_EQ(qchk_config_default(&ptr), QCHK_OK); }
  ~Config() { qchk_config_free(ptr); }
};

TEST(CApi, VersionAndCHeader) {
  EXPECT_STREQ(qchk_version(), "0.1.0");
  EXPECT_EQ(qchk_c_header_smoke(), 0);
}

TEST(CApi, ProfileOracle) {
  Config c;
  qchk_profile* p = nullptr;
  ASSERT_EQ(qchk_profile_solve(c.ptr, &p), QCHK_OK);
  double L = 0.0;
  ASSERT_EQ(qchk_profile_length(p, &L), QCHK_OK);
  EXPECT_NEAR(L, 4.5415369044037414, 1e-8);
  double v[6];
  ASSERT_EQ(qchk_profile_evaluate(p, 0.0, v), QCHK_OK);
  EXPECT_NEAR(v[0], 1.0, 1e-12);
  EXPECT_NEAR(v[1], 0.0, 1e-12);
  EXPECT_EQ(qchk_profile_evaluate(p, L + 1.0, v), QCHK_INVALID_ARGUMENT);
  char* res = nullptr;
  ASSERT_EQ(qchk_profile_residuals(p, &res), QCHK_OK);
  EXPECT_EQ(take(res).front(), '{');
  qchk_profile_free(p);
}

TEST(CApi, ConfigErrorsReportMessage) {
  qchk_config* c = nullptr;
  EXPECT_EQ(qchk_config_from_json(R"({"mode": "warped"})", &c), QCHK_CONFIG_ERROR);
  EXPECT_EQ(c, nullptr);
  EXPECT_NE(std::strlen(qchk_last_error()), 0u);
  EXPECT_EQ(qchk_config_from_file("/nonexistent/qchk.json", &c), QCHK_CONFIG_ERROR);
  Config ok;
  EXPECT_EQ(qchk_config_set_mode(ok.ptr, "sideways"), QCHK_CONFIG_ERROR);
  EXPECT_NE(std::string(qchk_last_error()).find("sideways"), std::string::npos);
  EXPECT_EQ(qchk_config_set_sample_count(ok.ptr, 3), QCHK_CONFIG_ERROR);
  EXPECT_EQ(qchk_config_default(nullptr), QCHK_INVALID_ARGUMENT);
  EXPECT_EQ(qchk_run_suite(nullptr, nullptr), QCHK_INVALID_ARGUMENT);
}

TEST(CApi, ConfigJsonRoundTrip) {
  Config c;
  ASSERT_EQ(qchk_config_set_mode(c.ptr, "product"), QCHK_OK);
  ASSERT_EQ(qchk_config_set_seed(c.ptr, 9), QCHK_OK);
  ASSERT_EQ(qchk_config_set_output_dir(c.ptr, "somewhere"), QCHK_OK);
  char* text = nullptr;
  ASSERT_EQ(qchk_config_to_json(c.ptr, &text), QCHK_OK);
  const std::string json = take(text);
  qchk_config* back = nullptr;
  ASSERT_EQ(qchk_config_from_json(json.c_str(), &back), QCHK_OK);
  char* dir = nullptr;
  ASSERT_EQ(qchk_config_output_dir(back, &dir), QCHK_OK);
  EXPECT_EQ(take(dir), "somewhere");
  qchk_config_free(back);
}

TEST(CApi, SuiteReportLifecycle) {
  Config c;
  ASSERT_EQ(qchk_config_set_sample_count(c.ptr, 10), QCHK_OK);
  qchk_report* r = nullptr;
  ASSERT_EQ(qchk_run_suite(c.ptr, &r), QCHK_OK);
  EXPECT_EQ(qchk_report_status(r), QCHK_OK);
  const size_t n = qchk_report_check_count(r);
  ASSERT_GT(n, 50u);
  bool saw_xfail = false;
  for (size_t i = 0; i < n; ++i) {
    qchk_check_info info{};
    ASSERT_EQ(qchk_report_check(r, i, &info), QCHK_OK);
    EXPECT_NE(info.pass, info.expected_fail) << info.name;
    saw_xfail = saw_xfail || info.expected_fail;
  }
  EXPECT_TRUE(saw_xfail);
  qchk_check_info info{};
  EXPECT_EQ(qchk_report_check(r, n, &info), QCHK_INVALID_ARGUMENT);

  char* text = nullptr;
  ASSERT_EQ(qchk_report_to_json(r, &text), QCHK_OK);
  const std::string json = take(text);
  qchk_report* back = nullptr;
  ASSERT_EQ(qchk_report_from_json(json.c_str(), &back), QCHK_OK);
  EXPECT_EQ(qchk_report_check_count(back), n);
  EXPECT_EQ(qchk_report_status(back), QCHK_OK);

  const auto dir = std::filesystem::temp_directory_path() / "qchk_test_capi_out";
  std::filesystem::remove_all(dir);
  ASSERT_EQ(qchk_report_write(r, dir.c_str()), QCHK_OK);
  EXPECT_TRUE(std::filesystem::exists(dir / "report.json"));
  EXPECT_TRUE(std::filesystem::exists(dir / "decay.csv"));
  std::filesystem::remove_all(dir);
  qchk_report_free(back);
  qchk_report_free(r);
}

TEST(CApi, FailedVerificationStatus) {
  qchk_config* c = nullptr;
  ASSERT_EQ(qchk_config_from_json(R"({"mode": "warped", "n": 3, "c0": 4.0, "k": 1, "x": 1.0,
      "y": 2.0, "rng_seed": 42, "sample_count": 10, "f_scale": 1.01})", &c), QCHK_OK);
  qchk_report* r = nullptr;
  ASSERT_EQ(qchk_run_suite(c, &r), QCHK_OK);
  EXPECT_EQ(qchk_report_status(r), QCHK_VERIFICATION_FAILED);
  qchk_report_free(r);
  qchk_config_free(c);
}

TEST(CApi, SummaryCsvAndIoErrors) {
  Config c;
  const auto path = std::filesystem::temp_directory_path() / "qchk_test_capi_summary.csv";
  ASSERT_EQ(qchk_write_summary_csv(c.ptr, 20, path.c_str()), QCHK_OK);
  EXPECT_TRUE(std::filesystem::exists(path));
  std::filesystem::remove(path);
  EXPECT_EQ(qchk_write_summary_csv(c.ptr, 20, "/proc/qchk/forbidden.csv"), QCHK_IO_ERROR);
}

}  // namespace
