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


#include "qchk/config.hpp"

#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include <nlohmann/json.hpp>

#include "qchk/errors.hpp"
#include "qchk/suite.hpp"

namespace qchk {

namespace {

using json = nlohmann::ordered_json;

const std::set<std::string, std::less<>> kKnownKeys = {
    "mode",          "n",           "c0",           "k",          "s",
    "x",             "y",           "rng_seed",     "sample_count", "residual_vectors",
    "tolerances",    "output_dir",  "f_scale",      "alpha",      "beta",
    "end_margin",    "chart_radius", "sample_radius", "jacobi_start", "profile_table"};

bool uses_profile(const RunConfig& c) { return c.mode != RunMode::circle_bundle; }

template <typename T>
T read(const json& obj, const char* key) {
  const json& v = obj.at(key);
  try {
    if constexpr (std::is_same_v<T, int>) {
      if (!v.is_number_integer()) throw ConfigError("");
      const auto wide = v.get<std::int64_t>();
      if (wide < INT32_MIN || wide > INT32_MAX) throw ConfigError("");
      return static_cast<int>(wide);
    } else if constexpr (std::is_same_v<T, std::uint64_t>) {
      if (!v.is_number_unsigned()) throw ConfigError("");
      return v.get<std::uint64_t>();
    } else if constexpr (std::is_same_v<T, double>) {
      if (!v.is_number()) throw ConfigError("");
      return v.get<double>();
    } else {
      if (!v.is_string()) throw ConfigError("");
      return v.get<std::string>();
    }
  } catch (const ConfigError&) {
    const char* want = std::is_same_v<T, int>             ? "an integer"
                       : std::is_same_v<T, std::uint64_t> ? "a non-negative 64-bit integer"
                       : std::is_same_v<T, double>        ? "a number"
                                                          : "a string";
    throw ConfigError("config field '" + std::string(key) + "' must be " + want);
  }
}

template <typename T>
void read_optional(const json& obj, const char* key, T& out) {
  if (obj.contains(key)) out = read<T>(obj, key);
}

void require(const json& obj, const char* key, std::string_view why) {
  if (!obj.contains(key)) {
    throw ConfigError("missing config field '" + std::string(key) + "'" +
                      (why.empty() ? std::string() : " (" + std::string(why) + ")"));
  }
}

}  // namespace

std::string_view to_string(RunMode mode) {
  switch (mode) {
    case RunMode::warped: return "warped";
    case RunMode::product: return "product";
    case RunMode::circle_bundle: return "circle-bundle";
    case RunMode::negative_control: return "negative-control";
  }
  return "warped";
}

RunMode parse_mode(std::string_view name) {
  for (RunMode m : {RunMode::warped, RunMode::product, RunMode::circle_bundle,
                    RunMode::negative_control}) {
    if (name == to_string(m)) return m;
  }
  throw ConfigError("unknown mode '" + std::string(name) +
                    "'; expected warped, product, circle-bundle or negative-control");
}

RunConfig default_config() {
  RunConfig c;
  c.k = 1;
  c.s = 2.0 * 1 / c.n;
  return c;
}

void validate(const RunConfig& c) {
  auto fail = [](const std::string& msg) { throw ConfigError(msg); };
  if (c.n < 3) fail("n must be an integer >= 3");
  if (!(c.c0 > 0.0) || !std::isfinite(c.c0)) fail("c0 must be positive");
  if (!std::isfinite(c.s)) fail("s must be finite");
  if (c.k && std::abs(c.s - 2.0 * *c.k / c.n) > 1e-12 * std::max(1.0, std::abs(c.s))) {
    fail("s must equal 2k/n");
  }
  if (uses_profile(c) && !(c.s > 0.0)) fail("s must be positive (s = 2k/n with k >= 1)");
  if (uses_profile(c) && !c.profile_table) {
    if (!(c.x > 0.0)) fail("x must be positive");
    if (!(c.x < c.y)) fail("x < y is required for the profile endpoints");
  }
  if (c.mode == RunMode::negative_control && (c.n - 1) % 2 != 0) {
    fail("negative-control splits the base into two equal factors, so n - 1 must be even");
  }
  if (c.sample_count < 10) fail("sample_count must be >= 10");
  if (c.residual_vectors < 10) fail("residual_vectors must be >= 10");
  for (const auto& [name, tol] : c.tolerances) {
    if (!find_check(name)) fail("tolerances: unknown check '" + name + "'");
    if (!(tol > 0.0) || !std::isfinite(tol)) fail("tolerances: '" + name + "' must be positive");
  }
  if (c.output_dir.empty()) fail("output_dir must not be empty");
  if (!(c.f_scale > 0.0)) fail("f_scale must be positive");
  if (!(c.alpha > 0.0)) fail("alpha must be positive");
  if (!(c.beta > 0.0)) fail("beta must be positive");
  if (!(c.end_margin > 0.0 && c.end_margin < 0.25)) fail("end_margin must lie in (0, 0.25)");
  if (!(c.chart_radius > 0.0)) fail("chart_radius must be positive");
  if (!(c.sample_radius > 0.0 && c.sample_radius < c.chart_radius)) {
    fail("sample_radius must lie in (0, chart_radius)");
  }
  if (!(c.jacobi_start >= c.end_margin && c.jacobi_start < 1.0 - 2.0 * c.end_margin)) {
    fail("jacobi_start must lie in [end_margin, 1 - 2 end_margin)");
  }
}

RunConfig parse_config_json(std::string_view text) {
  json obj;
  try {
    obj = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("config is not valid JSON: ") + e.what());
  }
  if (!obj.is_object()) throw ConfigError("config must be a JSON object");
  for (const auto& [key, value] : obj.items()) {
    if (!kKnownKeys.contains(key)) throw ConfigError("unknown config field '" + key + "'");
  }

  RunConfig c;
  require(obj, "mode", "");
  c.mode = parse_mode(read<std::string>(obj, "mode"));
  require(obj, "n", "");
  c.n = read<int>(obj, "n");
  require(obj, "c0", "");
  c.c0 = read<double>(obj, "c0");
  if (!obj.contains("k") && !obj.contains("s")) {
    throw ConfigError("missing config field 'k' (or 's'; s = 2k/n)");
  }
  if (obj.contains("k")) {
    c.k = read<int>(obj, "k");
    c.s = 2.0 * *c.k / c.n;
  }
  if (obj.contains("s")) c.s = read<double>(obj, "s");
  read_optional(obj, "profile_table", c.profile_table);
  if (c.mode != RunMode::circle_bundle && !c.profile_table) {
    require(obj, "x", "profile endpoint r(0)");
    require(obj, "y", "profile endpoint r(L)");
  }
  read_optional(obj, "x", c.x);
  read_optional(obj, "y", c.y);
  require(obj, "rng_seed", "");
  c.rng_seed = read<std::uint64_t>(obj, "rng_seed");
  read_optional(obj, "sample_count", c.sample_count);
  read_optional(obj, "residual_vectors", c.residual_vectors);
  if (obj.contains("tolerances")) {
    const json& tol = obj.at("tolerances");
    if (!tol.is_object()) throw ConfigError("config field 'tolerances' must be an object");
    for (const auto& [name, value] : tol.items()) {
      if (!value.is_number()) {
        throw ConfigError("tolerances: '" + name + "' must be a number");
      }
      c.tolerances[name] = value.get<double>();
    }
  }
  read_optional(obj, "output_dir", c.output_dir);
  read_optional(obj, "f_scale", c.f_scale);
  read_optional(obj, "alpha", c.alpha);
  read_optional(obj, "beta", c.beta);
  read_optional(obj, "end_margin", c.end_margin);
  read_optional(obj, "chart_radius", c.chart_radius);
  read_optional(obj, "sample_radius", c.sample_radius);
  read_optional(obj, "jacobi_start", c.jacobi_start);
  validate(c);
  return c;
}

RunConfig parse_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read config file " + path.string());
  std::ostringstream text;
  text << in.rdbuf();
  return parse_config_json(text.str());
}

std::string config_to_json(const RunConfig& c, int indent) {
  json obj;
  obj["mode"] = std::string(to_string(c.mode));
  obj["n"] = c.n;
  obj["c0"] = c.c0;
  if (c.k) obj["k"] = *c.k;
  obj["s"] = c.s;
  obj["x"] = c.x;
  obj["y"] = c.y;
  obj["rng_seed"] = c.rng_seed;
  obj["sample_count"] = c.sample_count;
  obj["residual_vectors"] = c.residual_vectors;
  obj["tolerances"] = json::object();
  for (const auto& [name, tol] : c.tolerances) obj["tolerances"][name] = tol;
  obj["output_dir"] = c.output_dir;
  obj["f_scale"] = c.f_scale;
  obj["alpha"] = c.alpha;
  obj["beta"] = c.beta;
  obj["end_margin"] = c.end_margin;
  obj["chart_radius"] = c.chart_radius;
  obj["sample_radius"] = c.sample_radius;
  obj["jacobi_start"] = c.jacobi_start;
  if (c.profile_table) obj["profile_table"] = *c.profile_table;
  return obj.dump(indent);
}

}  // namespace qchk
