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


#include <filesystem>
#include <fstream>
#include <string>

#include <gtest/gtest.h>

#include "qchk/config.hpp"
#include "qchk/errors.hpp"

namespace qchk {
namespace {

constexpr const char* kMinimal =
    R"({"mode": "warped", "n": 3, "c0": 4.0, "k": 1, "x": 1.0, "y": 2.0, "rng_seed": 42})";

std::string error_of(const std::string& text) {
  try {
    parse_config_json(text);
  } catch (const ConfigError& e) {
    return e.what();
  }
  return {};
}

TEST(Config, MinimalDocumentDerivesPitch) {
  const RunConfig c = parse_config_json(kMinimal);
  EXPECT_EQ(c.mode, RunMode::warped);
  EXPECT_EQ(c.n, 3);
  ASSERT_TRUE(c.k.has_value());
  EXPECT_DOUBLE_EQ(c.s, 2.0 / 3.0);
  EXPECT_EQ(c.rng_seed, 42u);
  EXPECT_EQ(c.sample_count, 50u);
  EXPECT_EQ(c, default_config());
}

TEST(Config, ModeNames) {
  for (RunMode m : {RunMode::warped, RunMode::product, RunMode::circle_bundle,
                    RunMode::negative_control}) {
    EXPECT_EQ(parse_mode(to_string(m)), m);
  }
  EXPECT_THROW(parse_mode("kahler"), ConfigError);
}

TEST(Config, PitchGivenDirectly) {
  const RunConfig c = parse_config_json(
      R"({"mode": "circle-bundle", "n": 4, "c0": 4.0, "s": 0.5, "rng_seed": 1})");
  EXPECT_FALSE(c.k.has_value());
  EXPECT_DOUBLE_EQ(c.s, 0.5);
}

TEST(Config, RejectsBadEndpoints) {
  const auto msg = error_of(
      R"({"mode": "warped", "n": 3, "c0": 4.0, "k": 1, "x": 2.0, "y": 2.0, "rng_seed": 42})");
  EXPECT_NE(msg.find("x < y"), std::string::npos) << msg;
}

TEST(Config, ErrorsNameTheField) {
  EXPECT_NE(error_of(R"({"mode": "warped", "n": 3, "c0": 4.0, "k": 1, "x": 1, "y": 2, "rng_seed": 1, "colour": 3})")
                .find("colour"),
            std::string::npos);
  EXPECT_NE(error_of(R"({"mode": "warped", "n": 3, "c0": 4.0, "k": 1, "x": 1, "y": 2})").find("rng_seed"),
            std::string::npos);
  EXPECT_NE(error_of(R"({"mode": "warped", "n": 3, "c0": 4.0, "x": 1, "y": 2, "rng_seed": 1})").find("'k'"),
            std::string::npos);
  EXPECT_NE(error_of(R"({"mode": "warped", "n": "three", "c0": 4.0, "k": 1, "x": 1, "y": 2, "rng_seed": 1})")
                .find("'n'"),
            std::string::npos);
  EXPECT_NE(error_of(R"({"mode": "warped", "n": 3, "c0": 4.0, "k": 1, "y": 2, "rng_seed": 1})").find("'x'"),
            std::string::npos);
  EXPECT_NE(error_of("{not json").find("JSON"), std::string::npos);
  EXPECT_NE(error_of("[1, 2]").find("object"), std::string::npos);
}

TEST(Config, ValidationRules) {
  RunConfig c = default_config();
  EXPECT_NO_THROW(validate(c));
  auto rejects = [](RunConfig bad) { EXPECT_THROW(validate(bad), ConfigError); };
  { auto b = c; b.n = 2; rejects(b); }
  { auto b = c; b.c0 = 0.0; rejects(b); }
  { auto b = c; b.s = 0.5; rejects(b); }  // inconsistent with k
  { auto b = c; b.sample_count = 5; rejects(b); }
  { auto b = c; b.f_scale = -1.0; rejects(b); }
  { auto b = c; b.end_margin = 0.3; rejects(b); }
  { auto b = c; b.sample_radius = 5.0; rejects(b); }
  { auto b = c; b.output_dir.clear(); rejects(b); }
  { auto b = c; b.mode = RunMode::negative_control; b.n = 4; rejects(b); }
  { auto b = c; b.tolerances["no_such_check"] = 1e-6; rejects(b); }
  { auto b = c; b.tolerances["nabla_J"] = 0.0; rejects(b); }
  { auto b = c; b.tolerances["nabla_J"] = 1e-6; EXPECT_NO_THROW(validate(b)); }
}

TEST(Config, JsonRoundTrip) {
  RunConfig c = default_config();
  c.mode = RunMode::product;
  c.rng_seed = 7;
  c.tolerances["nabla_J"] = 1e-6;
  c.f_scale = 1.25;
  c.output_dir = "elsewhere";
  EXPECT_EQ(parse_config_json(config_to_json(c)), c);
  EXPECT_EQ(config_to_json(parse_config_json(config_to_json(c))), config_to_json(c));
}

TEST(Config, FileLoading) {
  const auto path = std::filesystem::temp_directory_path() / "qchk_test_config.json";
  {
    std::ofstream out(path);
    out << kMinimal;
  }
  EXPECT_EQ(parse_config(path), default_config());
  std::filesystem::remove(path);
  EXPECT_THROW(parse_config(path), ConfigError);
}

}  // namespace
}  // namespace qchk
