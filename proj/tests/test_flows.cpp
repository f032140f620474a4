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
#include <filesystem>
#include <fstream>
#include <memory>
#include <string>

#include <gtest/gtest.h>

#include "qchk/errors.hpp"
#include "qchk/flows.hpp"
#include "qchk/rng.hpp"

namespace qchk {
namespace {

const ProfileSolution& cubic() {
  static const ProfileSolution sol = integrate_profile(build_polynomial(1.0, 2.0, 2.0 / 3.0));
  return sol;
}

WarpedBundleMetric warped() {
  return WarpedBundleMetric(BundleParams::from_k(3, 4.0, 1), cubic(),
                            std::make_shared<FubiniStudyBase>(2, 4.0));
}

Vec vec(std::initializer_list<double> v) {
  Vec out(static_cast<Eigen::Index>(v.size()));
  Eigen::Index i = 0;
  for (double x : v) out(i++) = x;
  return out;
}

TEST(Geodesic, StraightLineInFlatSpace) {
  const auto flat = FunctionalMetric::euclidean(3);
  const GeodesicState start{vec({1.0, 0.0, -1.0}), vec({0.5, 0.25, 1.0})};
  const auto path = integrate_geodesic(flat, start, 2.0, 20);
  ASSERT_EQ(path.states.size(), 21u);
  for (std::size_t i = 0; i < path.s.size(); ++i) {
    const Vec expected = start.position + path.s[i] * start.velocity;
    EXPECT_LT((path.states[i].position - expected).norm(), 1e-12);
    EXPECT_LT((path.states[i].velocity - start.velocity).norm(), 1e-12);
  }
  const std::vector<double> spots{0.5, 1.0};
  EXPECT_LT(geodesic_residual(flat, start, spots), 1e-8);
}

TEST(Jacobi, LinearInFlatSpace) {
  const auto flat = FunctionalMetric::euclidean(3);
  const GeodesicState start{vec({0.0, 0.0, 0.0}), vec({1.0, 0.0, 0.0})};
  const auto path = integrate_geodesic(flat, start, 1.5, 15);
  const Vec v = vec({0.0, 1.0, 0.0}), w = vec({0.0, 0.5, 2.0});
  const auto samples = integrate_jacobi(flat, path, v, w);
  ASSERT_EQ(samples.size(), path.s.size());
  for (const auto& smp : samples) {
    EXPECT_LT((smp.C - (v + smp.s * w)).norm(), 1e-10);
    EXPECT_LT((smp.DC - w).norm(), 1e-10);
  }
}

TEST(Jacobi, RoundSphereOscillates) {
  // CP^1 with holomorphic curvature 4 is the round sphere of curvature 4.
  const BaseMetric sphere(std::make_shared<FubiniStudyBase>(1, 4.0));
  const GeodesicState start{vec({0.0, 0.0}), vec({1.0, 0.0})};
  const auto path = integrate_geodesic(sphere, start, 0.6, 30);
  const auto samples = integrate_jacobi(sphere, path, vec({0.0, 1.0}), vec({0.0, 0.0}));
  for (const auto& smp : samples) {
    const Mat g = LocalGeometry(sphere, std::vector<double>(smp.position.data(), smp.position.data() + 2)).g();
    EXPECT_NEAR(std::sqrt(smp.C.dot(g * smp.C)), std::cos(2.0 * smp.s), 1e-8) << smp.s;
    EXPECT_NEAR(smp.velocity.dot(g * smp.velocity), 1.0, 1e-9);
  }
  const std::vector<double> spots{0.2, 0.4};
  EXPECT_LT(jacobi_residual(sphere, start, vec({0.0, 1.0}), vec({0.0, 0.3}), spots), 1e-7);
}

TEST(Geodesic, TLineOfWarpedMetric) {
  const auto model = warped();
  const double L = cubic().length();
  Vec x0 = vec({0.2 * L, 0.7, 0.1, -0.2, 0.3, 0.05});
  Vec v0 = Vec::Zero(6);
  v0(0) = 1.0;
  const auto path = integrate_geodesic(model, {x0, v0}, 0.5 * L, 25);
  for (std::size_t i = 0; i < path.s.size(); ++i) {
    Vec expected = x0;
    expected(0) += path.s[i];
    EXPECT_LT((path.states[i].position - expected).norm(), 1e-9);
  }
}

TEST(Geodesic, RandomWarpedGeodesicsKeepUnitSpeed) {
  const auto model = warped();
  const double L = cubic().length();
  Rng rng(41);
  for (int k = 0; k < 3; ++k) {
    Vec x0(6);
    x0 << rng.uniform(0.3 * L, 0.7 * L), rng.uniform(0.0, 6.0), 0.2, -0.1, 0.3, 0.1;
    const std::vector<double> xs(x0.data(), x0.data() + 6);
    const Mat g = LocalGeometry(model, xs).g();
    Vec v0 = rng.unit_vector(6);
    v0 /= std::sqrt(v0.dot(g * v0));
    const double T = 0.1 * L;
    const auto path = integrate_geodesic(model, {x0, v0}, T, 10);
    for (const auto& st : path.states) {
      const std::vector<double> p(st.position.data(), st.position.data() + 6);
      EXPECT_NEAR(st.velocity.dot(LocalGeometry(model, p).g() * st.velocity), 1.0, 1e-8);
    }
    const std::vector<double> spots{0.3 * T, 0.5 * T, 0.7 * T};
    EXPECT_LT(geodesic_residual(model, {x0, v0}, spots, 1e-3, {1e-13, 1e-13, 1e-3}), 1e-8);
  }
}

TEST(Geodesic, LeavingTheChartThrows) {
  const auto model = warped();
  const double L = cubic().length();
  Vec x0 = vec({0.9 * L, 0.0, 0.0, 0.0, 0.0, 0.0});
  Vec v0 = Vec::Zero(6);
  v0(0) = 1.0;
  EXPECT_THROW(integrate_geodesic(model, {x0, v0}, 0.5 * L, 10), DomainError);
}

TEST(SpecialJacobi, NormFollowsFAndDecays) {
  const auto model = warped();
  const double L = cubic().length();
  const std::vector<double> x0{0.0, 0.4, 0.1, 0.2, -0.1, 0.3};
  const DecayReport rep = special_jacobi_experiment(model, x0, 0.5 * L, L);
  EXPECT_TRUE(rep.truncated);
  EXPECT_LT(rep.t_end, L);
  EXPECT_EQ(rep.rows.size(), 101u);
  EXPECT_LT(rep.max_norm_vs_f, 1e-6);
  EXPECT_LT(rep.max_ratio_residual, 1e-6);
  EXPECT_LT(rep.g_cdot_C_drift, 1e-8);
  EXPECT_LT(rep.decay_ratio, 1e-2);
  EXPECT_LT(rep.jacobi_residual, 1e-7);
  EXPECT_NEAR(rep.rows.front().C_norm, cubic().f(rep.t0), 1e-10);
  for (std::size_t i = 1; i < rep.rows.size(); ++i) {
    EXPECT_LT(rep.rows[i].C_norm, rep.rows[i - 1].C_norm);
  }
}

TEST(SpecialJacobi, DecayCsv) {
  const auto model = warped();
  const double L = cubic().length();
  const std::vector<double> x0{0.0, 0.0, 0.0, 0.0, 0.0, 0.0};
  const DecayReport rep = special_jacobi_experiment(model, x0, 0.5 * L, 0.9 * L, 10);
  EXPECT_FALSE(rep.truncated);
  const auto path = std::filesystem::temp_directory_path() / "qchk_test_decay.csv";
  write_decay_csv(rep, path);
  std::ifstream in(path);
  std::string header;
  std::getline(in, header);
  EXPECT_EQ(header, "t,|C|,f(t),ratio_residual,g_cdot_C");
  int lines = 0;
  for (std::string line; std::getline(in, line);) ++lines;
  EXPECT_EQ(lines, 11);
  std::filesystem::remove(path);
}

}  // namespace
}  // namespace qchk
