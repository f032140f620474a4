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
#include <memory>
#include <numbers>
#include <random>

#include <gtest/gtest.h>

#include "qchk/curvature.hpp"
#include "qchk/errors.hpp"
#include "qchk/geometry.hpp"
#include "qchk/rng.hpp"

namespace qchk {
namespace {

const ProfileSolution& cubic() {
  static const ProfileSolution sol = integrate_profile(build_polynomial(1.0, 2.0, 2.0 / 3.0));
  return sol;
}

std::vector<double> random_z(Rng& rng, int m, double radius) {
  const Vec d = rng.unit_vector(2 * m);
  const double rho = radius * rng.uniform();
  std::vector<double> z(2 * m);
  for (int i = 0; i < 2 * m; ++i) z[i] = rho * d(i);
  return z;
}

ChartPoint random_chart_point(Rng& rng, ChartKind kind = ChartKind::total_space) {
  const double L = cubic().length();
  ChartPoint p;
  p.t = rng.uniform(0.01 * L, 0.99 * L);
  p.psi = 2.0 * std::numbers::pi * rng.uniform();
  p.z = random_z(rng, 2, 2.0);
  p.chart = kind;
  return p;
}

TEST(FubiniStudy, IdentityAtOriginForUnitScale) {
  const auto f = fubini_study(1, 4.0, std::vector<double>{0.0, 0.0});
  const Mat h = f.h.values();
  EXPECT_NEAR((h - Mat::Identity(2, 2)).cwiseAbs().maxCoeff(), 0.0, 1e-15);
}

TEST(FubiniStudy, OriginScalesAsFourOverC0) {
  for (int m : {1, 2, 3}) {
    for (double c0 : {1.0, 4.0, 0.5}) {
      const auto f = fubini_study(m, c0, std::vector<double>(2 * m, 0.0));
      const Mat h = f.h.values();
      EXPECT_NEAR((h - (4.0 / c0) * Mat::Identity(2 * m, 2 * m)).cwiseAbs().maxCoeff(), 0.0, 1e-14);
    }
  }
}

TEST(FubiniStudy, GaussianCurvatureOfCP1) {
  auto base = std::make_shared<FubiniStudyBase>(1, 4.0);
  const BaseMetric model(base);
  Rng rng(3);
  for (int i = 0; i < 5; ++i) {
    const auto z = random_z(rng, 1, 2.0);
    const LocalGeometry geom(model, z);
    EXPECT_NEAR(sectional(geom.R(), geom.g(), Vec::Unit(2, 0), Vec::Unit(2, 1)), 4.0, 1e-8);
  }
}

TEST(FubiniStudy, HolomorphicCurvatureEqualsC0) {
  for (double c0 : {4.0, 1.5}) {
    auto base = std::make_shared<FubiniStudyBase>(2, c0);
    const BaseMetric model(base);
    Rng rng(11);
    for (int i = 0; i < 20; ++i) {
      const auto z = random_z(rng, 2, 2.5);
      const LocalGeometry geom(model, z);
      const Vec X = rng.gaussian(4);
      EXPECT_NEAR(holomorphic_sectional(geom.R(), geom.g(), geom.J(), X), c0, 1e-8);
    }
  }
}

TEST(FubiniStudy, RotationInvariantDeterminant) {
  const double a = 0.9, b = -0.4, phi = 0.7;
  const double ra = std::cos(phi) * a - std::sin(phi) * b;
  const double rb = std::sin(phi) * a + std::cos(phi) * b;
  const auto f1 = fubini_study(2, 4.0, std::vector<double>{a, b, 0.3, 0.2});
  const auto f2 = fubini_study(2, 4.0, std::vector<double>{ra, rb, 0.3, 0.2});
  EXPECT_NEAR(f1.h.values().determinant(), f2.h.values().determinant(), 1e-13);
}

TEST(FubiniStudy, ChartBoundEnforced) {
  EXPECT_THROW(fubini_study(1, 4.0, std::vector<double>{4.0, 0.1}), DomainError);
  FubiniStudyBase narrow(1, 4.0, 1.0);
  EXPECT_THROW(narrow.check_chart(std::vector<double>{0.8, 0.8}), DomainError);
  EXPECT_NO_THROW(narrow.check_chart(std::vector<double>{0.5, 0.5}));
}

TEST(ConnectionForm, VanishesAtOrigin) {
  const auto c = connection_form(2, 4.0, 2.0 / 3.0, std::vector<double>(4, 0.0));
  for (const auto& s : c.sigma) EXPECT_EQ(s.value(), 0.0);
}

TEST(ConnectionForm, CurvatureIsKahlerForm) {
  Rng rng(5);
  const double s = 2.0 / 3.0;
  for (int i = 0; i < 10; ++i) {
    const auto z = random_z(rng, 2, 3.0);
    const auto c = connection_form(2, 4.0, s, z);
    // sigma is seeded in (psi, z); its z-derivatives sit at offset 1.
    const Mat dsigma = exterior_derivative(c.sigma, 1, 4);
    EXPECT_LT((dsigma - c.omega_n).cwiseAbs().maxCoeff(), 1e-8);
    // theta = dpsi + s sigma has components along (psi, z).
    const Mat dtheta = exterior_derivative(c.theta, 0, 5);
    EXPECT_LT(dtheta.row(0).cwiseAbs().maxCoeff(), 1e-15);
    EXPECT_LT((dtheta.bottomRightCorner(4, 4) - s * c.omega_n).cwiseAbs().maxCoeff(), 1e-8);
  }
}

TEST(WarpedMetric, BlocksAndComplexStructure) {
  const auto params = BundleParams::from_k(3, 4.0, 1);
  Rng rng(17);
  for (int i = 0; i < 100; ++i) {
    const ChartPoint p = random_chart_point(rng);
    const MetricSample ms = assemble_metric(params, cubic(), p);
    const Mat g = ms.g.values();
    const auto d = cubic().at(p.t);
    const double f = 2.0 * d.r * d.rp / params.s;

    EXPECT_EQ(g(0, 0), 1.0);
    EXPECT_NEAR(g(1, 1), f * f, 1e-13 * std::max(1.0, f * f));
    EXPECT_EQ(Eigen::LLT<Mat>(g).info(), Eigen::Success);
    EXPECT_EQ((g - g.transpose()).cwiseAbs().maxCoeff(), 0.0);

    const Mat& J = ms.J;
    EXPECT_LT((J * J + Mat::Identity(6, 6)).cwiseAbs().maxCoeff() / std::max(1.0, J.cwiseAbs().maxCoeff() * J.cwiseAbs().maxCoeff()), 1e-12);
    EXPECT_LT((J * ms.frame.H - ms.frame.xi / f).norm(), 1e-12 * std::max(1.0, 1.0 / f));

    const auto& F = ms.frame;
    EXPECT_EQ(F.xi(1), 1.0);  // theta(xi) = 1
    std::vector<Vec> basis{F.H, F.JH};
    basis.insert(basis.end(), F.E.begin(), F.E.end());
    ASSERT_EQ(basis.size(), 6u);
    for (std::size_t a = 0; a < basis.size(); ++a) {
      for (std::size_t b = 0; b < basis.size(); ++b) {
        EXPECT_NEAR(basis[a].dot(g * basis[b]), a == b ? 1.0 : 0.0, 1e-10);
        // Hermitian condition on frame pairs.
        EXPECT_NEAR((J * basis[a]).dot(g * (J * basis[b])), basis[a].dot(g * basis[b]), 1e-10);
      }
    }
    for (const Vec& e : F.E) {
      EXPECT_NEAR(e.dot(g * F.H), 0.0, 1e-12);
      EXPECT_NEAR(e.dot(g * F.xi), 0.0, 1e-12 * std::max(1.0, f));
    }
  }
}

TEST(WarpedMetric, ProductModeHasUnscaledBase) {
  const auto params = BundleParams::from_k(3, 4.0, 1);
  Rng rng(23);
  const ChartPoint p = random_chart_point(rng, ChartKind::product);
  const MetricSample ms = assemble_metric(params, cubic(), p);
  const auto base = fubini_study(2, 4.0, p.z);
  const Mat g = ms.g.values();
  EXPECT_LT((g.bottomRightCorner(4, 4) - base.h.values()).cwiseAbs().maxCoeff(), 1e-14);
  EXPECT_EQ(g.block(1, 2, 1, 4).cwiseAbs().maxCoeff(), 0.0);  // no connection term
}

TEST(WarpedMetric, KahlerFormClosedOnlyForKahlerF) {
  auto base = std::make_shared<FubiniStudyBase>(2, 4.0);
  const auto params = BundleParams::from_k(3, 4.0, 1);
  const WarpedBundleMetric good(params, cubic(), base);
  const WarpedBundleMetric bad(params, cubic(), base, WarpMode::warped, WarpedOptions{1.01, 1e-3});
  Rng rng(29);
  double worst_bad = 0.0;
  for (int i = 0; i < 10; ++i) {
    const auto x = random_chart_point(rng).coordinates();
    EXPECT_LT(kahler_form_defect(good, x), 1e-8);
    worst_bad = std::max(worst_bad, kahler_form_defect(bad, x));
  }
  EXPECT_GT(worst_bad, 1e-4);
}

TEST(WarpedMetric, RejectsZeroPitchInWarpedMode) {
  BundleParams p = BundleParams::from_k(3, 4.0, 1);
  p.k.reset();
  p.q.reset();
  p.s = 0.0;
  EXPECT_THROW(p.validate(true), ConfigError);
  auto base = std::make_shared<FubiniStudyBase>(2, 4.0);
  EXPECT_THROW(WarpedBundleMetric(p, cubic(), base), DomainError);
}

TEST(WarpedMetric, InteriorMarginEnforced) {
  auto base = std::make_shared<FubiniStudyBase>(2, 4.0);
  const WarpedBundleMetric model(BundleParams::from_k(3, 4.0, 1), cubic(), base);
  const double L = cubic().length();
  EXPECT_THROW(model.validate_point(std::vector<double>{0.5e-3 * L, 0, 0, 0, 0, 0}), DomainError);
  EXPECT_THROW(model.validate_point(std::vector<double>{L, 0, 0, 0, 0, 0}), DomainError);
  EXPECT_NO_THROW(model.validate_point(std::vector<double>{1e-3 * L, 0, 0, 0, 0, 0}));
  EXPECT_THROW(model.validate_point(std::vector<double>{0.5 * L, 0, 4.5, 0, 0, 0}), DomainError);
}

TEST(BundleParams, PitchFromK) {
  const auto p = BundleParams::from_k(3, 4.0, 1);
  EXPECT_DOUBLE_EQ(p.s, 2.0 / 3.0);
  EXPECT_NO_THROW(p.validate(true));
  BundleParams q = p;
  q.s = 0.5;
  EXPECT_THROW(q.validate(true), ConfigError);
}

TEST(CircleBundle, FiberAndHorizontalBlocks) {
  Rng rng(31);
  for (auto [alpha, beta] : {std::pair{1.0, 1.0}, std::pair{0.7, 1.8}}) {
    ChartPoint p;
    p.psi = 1.1;
    p.z = random_z(rng, 2, 2.0);
    const double s = 2.0 / 3.0;
    const MetricSample ms = circle_bundle_metric(alpha, beta, 2, 4.0, s, p);
    const Mat g = ms.g.values();
    EXPECT_NEAR(g(0, 0), alpha * alpha, 1e-15);
    // Horizontal lifts v - s sigma(v) d/dpsi see beta^2 h.
    const auto base = fubini_study(2, 4.0, p.z);
    const Vec sigma = values(base.sigma);
    Mat lift = Mat::Zero(5, 4);
    for (int a = 0; a < 4; ++a) {
      lift(0, a) = -s * sigma(a);
      lift(1 + a, a) = 1.0;
    }
    EXPECT_LT((lift.transpose() * g * lift - beta * beta * base.h.values()).cwiseAbs().maxCoeff(), 1e-13);
  }
}

TEST(CircleBundle, ZeroPitchIsProduct) {
  ChartPoint p;
  p.z = {0.3, -0.1, 0.2, 0.4};
  const MetricSample ms = circle_bundle_metric(1.0, 1.0, 2, 4.0, 0.0, p);
  const Mat g = ms.g.values();
  EXPECT_EQ(g.block(0, 1, 1, 4).cwiseAbs().maxCoeff(), 0.0);
  EXPECT_LT((g.bottomRightCorner(4, 4) - fubini_study(2, 4.0, p.z).h.values()).cwiseAbs().maxCoeff(), 1e-15);
}

TEST(CircleBundle, RejectsNonpositiveScales) {
  auto base = std::make_shared<FubiniStudyBase>(2, 4.0);
  EXPECT_ANY_THROW(CircleBundleMetric(0.0, 1.0, 0.5, base));
  EXPECT_ANY_THROW(CircleBundleMetric(1.0, -1.0, 0.5, base));
}

TEST(GramSchmidt, HermitianFrameIsJAdapted) {
  auto base = std::make_shared<FubiniStudyBase>(2, 4.0);
  const BaseMetric model(base);
  const std::vector<double> z{0.4, -0.3, 1.2, 0.5};
  const LocalGeometry geom(model, z);
  std::vector<Vec> seeds;
  for (int i = 0; i < 4; ++i) seeds.push_back(Vec::Unit(4, i));
  const auto frame = hermitian_gram_schmidt(geom.g(), geom.J(), seeds);
  ASSERT_EQ(frame.size(), 4u);
  EXPECT_LT((geom.J() * frame[0] - frame[1]).norm(), 1e-12);
  EXPECT_LT((geom.J() * frame[2] - frame[3]).norm(), 1e-12);
}

}  // namespace
}  // namespace qchk
