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

#include <functional>
#include <span>
#include <string>
#include <vector>

#include "qchk/curvature.hpp"
#include "qchk/geometry.hpp"
#include "qchk/rng.hpp"

namespace qchk {

/// Orthogonal splitting T M = D + E at a point, D spanned by a vector and its J-image.
struct SplitTensors {
  Mat p_D;      // projection matrices acting on coordinate vectors
  Mat p_E;
  Mat h;        // bilinear forms: h = g(p_D, p_D), m = g(p_E, p_E)
  Mat m;
  Mat omega;    // omega(X, Y) = h(JX, Y)
  Mat Omega_m;  // Omega_m(X, Y) = m(JX, Y)
};

SplitTensors split_tensors(const Mat& g, const Mat& J, const Vec& d_vector);

struct ModelTensorValues {
  double pi = 0.0;
  double phi = 0.0;
  double psi = 0.0;
};

/// The Kähler curvature tensors Pi, Phi, Psi evaluated on (X, Y, Z, U).
ModelTensorValues model_tensors(const Mat& g, const Mat& J, const SplitTensors& split,
                                const Vec& X, const Vec& Y, const Vec& Z, const Vec& U);

/// R(X, JX, JX, X) for a g-unit vector X.
using HolomorphicCurvature = std::function<double(const Vec&)>;

struct QCHCoefficients {
  double a = 0.0;
  double b = 0.0;
  double c = 0.0;
  /// max |R(X,JX,JX,X) - (a + b t^2 + c t^4)|, t = |X_D|, over the random unit vectors.
  double residual = 0.0;
  std::size_t samples = 0;
};

/// Fits (a, b, c) from the probes cos(al) e + sin(al) d with |X_D|^2 in {0, 1/2, 1};
/// e is a unit vector in E, d a unit vector in D, and `frame` an orthonormal basis
/// used to draw the random residual vectors.
QCHCoefficients fit_coefficients(const HolomorphicCurvature& hol, const Mat& g,
                                 const SplitTensors& split, const Vec& e, const Vec& d,
                                 std::span<const Vec> frame, Rng& rng, std::size_t samples = 100);

/// Same fit on the engine curvature at a point; D = span{H, JH}.
QCHCoefficients fit_coefficients(const LocalGeometry& geom, const FrameBasis& frame, Rng& rng,
                                 std::size_t samples = 100);

struct RicciEigenvalues {
  double lambda = 0.0;
  double mu = 0.0;
};

/// lambda = (n+1)/2 a + b/4, mu = (n+1)/2 a + (n+3)/4 b + c.
RicciEigenvalues ricci_eigenvalues(int n, double a, double b, double c);

struct RicciSplit {
  double lambda_engine = 0.0;
  double mu_engine = 0.0;
  double lambda_formula = 0.0;
  double mu_formula = 0.0;
  double off_block = 0.0;          // max |rho(D, E)|
  double e_block_deviation = 0.0;  // max |rho - lambda m| on E
  double d_block_deviation = 0.0;  // max |rho - mu h| on D
};

RicciSplit ricci_split(const LocalGeometry& geom, const FrameBasis& frame,
                       const QCHCoefficients& coeffs);

/// A unit section X of D together with JX, as jet-evaluable fields.
struct DSection {
  VectorField X;
  VectorField JX;
};

struct StructureScalars {
  double kappa = 0.0;
  double div_X = 0.0;
  double div_JX = 0.0;
  double p = 0.0;       // g(nabla_X X, JX)
  double p_star = 0.0;  // g(nabla_JX JX, X)
  double lambda = 0.0;  // Ricci on E
  double mu = 0.0;      // Ricci on D
};

StructureScalars structure_scalars(const LocalGeometry& geom, const DSection& section,
                                   std::span<const Vec> E);

struct PrincipalSection {
  StructureScalars scalars;
  double cos_angle = 1.0;  // xi_p = cos X + sin JX
  double sin_angle = 0.0;
  Vec xi;
};

/// Throws DomainError when kappa vanishes (relative to `zero_tol`).
PrincipalSection kappa_and_principal_section(const LocalGeometry& geom, const DSection& section,
                                             std::span<const Vec> E, double zero_tol = 1e-10);

/// D section rotated by a constant angle.
DSection rotate_section(const DSection& section, double angle);

/// X = J grad(tau) with its exact Jacobian, built from the jets of g, J and tau.
FieldJet complex_gradient(const LocalGeometry& geom, const ScalarField& tau);

struct IdentityCheck {
  std::string name;
  double engine = 0.0;
  double expected = 0.0;
  double residual = 0.0;
};

/// Structure identities of the warped Kähler metric at x.
std::vector<IdentityCheck> structure_identities(const WarpedBundleMetric& model,
                                                std::span<const double> x);

/// Closed-form submersion curvature of the warped total space vs the engine.
/// K_JH_U_plus_sign evaluates s^2 f^2/(4 r^4) + f'r'/(f r), the variant with the
/// opposite sign on the second term; it is kept as a known-bad reference.
std::vector<IdentityCheck> submersion_formulas(const WarpedBundleMetric& model,
                                               std::span<const double> x);

/// Closed-form curvature of the circle bundle metric alpha^2 theta^2 + beta^2 h.
/// ricci_xi_without_factor_two is rho(xi/alpha, xi/alpha) against m s^2 alpha^2/(4 beta^4),
/// half the correct value, kept as a known-bad reference.
std::vector<IdentityCheck> circle_bundle_formulas(const CircleBundleMetric& model,
                                                  std::span<const double> x, Rng& rng);

/// Derivative of a smooth function of t by a five-point central stencil.
double five_point_derivative(const std::function<double(double)>& F, double t, double h);

}  // namespace qchk
