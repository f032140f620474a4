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

std::shared_ptr<const FubiniStudyBase> cp2() { return std::make_shared<FubiniStudyBase>(2, 4.0); }

WarpedBundleMetric warped(double f_scale = 1.0, WarpMode mode = WarpMode::warped) {
  return WarpedBundleMetric(BundleParams::from_k(3, 4.0, 1), cubic(), cp2(), mode,
                            WarpedOptions{f_scale, 1e-3});
}

std::vector<double> random_point(Rng& rng) {
  const double L = cubic().length();
  std::vector<double> x{rng.uniform(0.02 * L, 0.98 * L), 2.0 * std::numbers::pi * rng.uniform()};
  const Vec z = rng.unit_vector(4) * (2.0 * rng.uniform());
  for (int i = 0; i < 4; ++i) x.push_back(z(i));
  return x;
}

TEST(Christoffel, EuclideanVanishes) {
  const auto flat = FunctionalMetric::euclidean(4);
  const Connection c = christoffel(flat, std::vector<double>{0.1, 0.2, 0.3, 0.4});
  for (double v : c.gamma) EXPECT_EQ(v, 0.0);
  const Curvature4 R = riemann(flat, std::vector<double>{0.1, 0.2, 0.3, 0.4});
  EXPECT_EQ(R.max_abs(), 0.0);
}

TEST(Christoffel, WarpedTwoDimensional) {
  // g = dt^2 + r(t)^2 dx^2 with r = 1 + t^2.
  const FunctionalMetric model(2, [](std::span<const Jet2> x) {
    JetMatrix g(2, 2, x.front().dim());
    const Jet2 r = 1.0 + x[0] * x[0];
    g(0, 0) = Jet2::constant(1.0, x.front().dim());
    g(0, 1) = Jet2::constant(0.0, x.front().dim());
    g(1, 0) = g(0, 1);
    g(1, 1) = r * r;
    return g;
  });
  const double t = 0.6;
  const double r = 1.0 + t * t, rp = 2.0 * t;
  const Connection c = christoffel(model, std::vector<double>{t, 0.3});
  EXPECT_NEAR(c.Gamma(0, 1, 1), -r * rp, 1e-14);
  EXPECT_NEAR(c.Gamma(1, 0, 1), rp / r, 1e-14);
  EXPECT_NEAR(c.Gamma(1, 1, 0), rp / r, 1e-14);
  EXPECT_NEAR(c.Gamma(0, 0, 0), 0.0, 1e-15);
  // Gaussian curvature -r''/r.
  const Curvature4 R = riemann(c);
  EXPECT_NEAR(sectional(R, c.g, Vec::Unit(2, 0), Vec::Unit(2, 1)), -2.0 / r, 1e-13);
}

TEST(Christoffel, SymmetricInLowerIndices) {
  const auto model = warped();
  Rng rng(2);
  const Connection c = christoffel(model, random_point(rng));
  for (std::size_t k = 0; k < c.dim; ++k)
    for (std::size_t i = 0; i < c.dim; ++i)
      for (std::size_t j = 0; j < c.dim; ++j) EXPECT_EQ(c.Gamma(k, i, j), c.Gamma(k, j, i));
}

TEST(Riemann, FubiniStudyHolomorphicAndTotallyReal) {
  const BaseMetric model(cp2());
  Rng rng(13);
  for (int i = 0; i < 20; ++i) {
    const Vec zv = rng.unit_vector(4) * (2.5 * rng.uniform());
    const std::vector<double> z(zv.data(), zv.data() + 4);
    const LocalGeometry geom(model, z);
    const Mat& g = geom.g();
    const Mat& J = geom.J();
    const Vec X = rng.gaussian(4);
    EXPECT_NEAR(holomorphic_sectional(geom.R(), g, J, X), 4.0, 1e-8);
    // Y orthogonal to X and JX spans a totally real plane with X.
    Vec Y = rng.gaussian(4);
    for (const Vec& b : {Vec(X), Vec(J * X)}) Y -= (b.dot(g * Y) / b.dot(g * b)) * b;
    EXPECT_NEAR(sectional(geom.R(), g, X, Y), 1.0, 1e-8);
  }
}

TEST(Riemann, SymmetriesAndKahlerType) {
  const auto model = warped();
  Rng rng(19);
  for (int i = 0; i < 50; ++i) {
    const LocalGeometry geom(model, random_point(rng));
    const CurvatureSymmetry s = symmetry_defects(geom.R(), geom.J());
    EXPECT_LT(s.antisym_first, 1e-9);
    EXPECT_LT(s.antisym_last, 1e-9);
    EXPECT_LT(s.pair, 1e-9);
    EXPECT_LT(s.bianchi, 1e-9);
    ASSERT_TRUE(s.kahler.has_value());
    EXPECT_LT(*s.kahler, 1e-8);
    const Mat& rho = geom.ricci();
    const Mat& J = geom.J();
    EXPECT_LT((rho - rho.transpose()).cwiseAbs().maxCoeff(), 1e-8);
    EXPECT_LT((J.transpose() * rho * J - rho).cwiseAbs().maxCoeff(), 1e-8);
  }
}

TEST(Riemann, SecondBianchi) {
  const auto model = warped();
  Rng rng(37);
  for (int i = 0; i < 5; ++i) {
    const auto x = random_point(rng);
    const LocalGeometry geom(model, x);
    auto unit = [&] {
      const Vec v = rng.gaussian(6);
      return Vec(v / geom.norm(v));
    };
    EXPECT_LT(second_bianchi_residual(model, x, unit(), unit(), unit(), unit(), unit()), 1e-6);
  }
}

TEST(Riemann, DegenerateInputsThrow) {
  const BaseMetric model(cp2());
  const LocalGeometry geom(model, std::vector<double>{0.1, 0.2, 0.3, 0.4});
  const Vec X = Vec::Unit(4, 0);
  EXPECT_THROW(sectional(geom.R(), geom.g(), X, 2.0 * X), DomainError);
  EXPECT_THROW(holomorphic_sectional(geom.R(), geom.g(), geom.J(), Vec::Zero(4)), DomainError);
}

TEST(Riemann, MixedDDDEVanishes) {
  const auto model = warped();
  Rng rng(41);
  const auto x = random_point(rng);
  const LocalGeometry geom(model, x);
  const FrameBasis F = model.frame(x);
  for (const Vec& X : {F.H, F.JH})
    for (const Vec& Y : {F.H, F.JH})
      for (const Vec& Z : {F.H, F.JH})
        for (const Vec& V : F.E) EXPECT_NEAR(geom.R().evaluate(X, Y, Z, V), 0.0, 1e-9);
}

TEST(NablaJ, KahlerOnlyForMatchingF) {
  Rng rng(43);
  const auto good = warped();
  const auto bad = warped(1.01);
  const auto product = warped(1.0, WarpMode::product);
  double worst_bad = 0.0;
  for (int i = 0; i < 20; ++i) {
    const auto x = random_point(rng);
    EXPECT_LT(nabla_J(LocalGeometry(good, x)).max_frame, 1e-7);
    EXPECT_LT(nabla_J(LocalGeometry(product, x)).max_frame, 1e-7);
    worst_bad = std::max(worst_bad, nabla_J(LocalGeometry(bad, x)).max_frame);
  }
  EXPECT_GT(worst_bad, 1e-3);
}

TEST(Killing, FiberAndSpecialField) {
  const auto model = warped();
  Rng rng(47);
  for (int i = 0; i < 10; ++i) {
    const auto x = random_point(rng);
    const LocalGeometry geom(model, x);
    EXPECT_LT(frame_max(geom, killing_deviation(geom, model.field_xi())), 1e-9);
    // f JH is the fiber generator, written through f and JH separately.
    const VectorField fJH = [&model](std::span<const Jet2> y) {
      JetVector v = model.field_JH()(y);
      const Jet2 f = model.f_jet(y[0]);
      for (auto& c : v) c = f * c;
      return v;
    };
    EXPECT_LT(frame_max(geom, killing_deviation(geom, fJH)), 1e-7);
  }
}

TEST(Killing, RadialFieldStretchesBase) {
  const auto model = warped();
  Rng rng(53);
  const auto x = random_point(rng);
  const LocalGeometry geom(model, x);
  const Mat dev = killing_deviation(geom, model.field_H());
  const auto d = cubic().at(x[0]);
  for (const Vec& e : model.frame(x).E) EXPECT_NEAR(e.dot(dev * e), 2.0 * d.rp / d.r, 1e-10);
}

TEST(Hessian, PotentialAndDivergences) {
  const auto model = warped();
  Rng rng(59);
  for (int i = 0; i < 10; ++i) {
    const auto x = random_point(rng);
    const LocalGeometry geom(model, x);
    const FrameBasis F = model.frame(x);
    const auto d = cubic().at(x[0]);
    const double f = 2.0 * d.r * d.rp / (2.0 / 3.0);
    const double kappa = 2.0 * 2.0 * d.rp / d.r;
    const Mat hess = hessian_form(geom, model.potential());
    for (const Vec& e : F.E) EXPECT_NEAR(e.dot(hess * e), f * kappa / 4.0, 1e-9);
    EXPECT_NEAR(div_E(geom, model.field_H(), F.E), kappa, 1e-9);
    EXPECT_NEAR(div_E(geom, model.field_xi(), F.E), 0.0, 1e-10);
  }
}

}  // namespace
}  // namespace qchk
