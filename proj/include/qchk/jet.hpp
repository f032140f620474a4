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

#include <cstddef>
#include <span>
#include <vector>

namespace qchk {

/// Truncated second-order jet: a value together with its exact gradient and
/// Hessian with respect to the d chart coordinates of the current computation.
///
/// The Hessian is stored as a packed upper triangle, so it is symmetric by
/// construction. All arithmetic is exact to second order (no differencing).
class Jet2 {
 public:
  Jet2() = default;

  static Jet2 constant(double value, std::size_t dim);
  /// The i-th coordinate function at x: gradient e_i, zero Hessian.
  static Jet2 variable(std::size_t index, double value, std::size_t dim);

  double value() const noexcept { return value_; }
  std::size_t dim() const noexcept { return grad_.size(); }
  std::span<const double> gradient() const noexcept { return grad_; }
  double gradient(std::size_t i) const { return grad_.at(i); }
  double hessian(std::size_t i, std::size_t j) const;

  Jet2& operator+=(const Jet2& other);
  Jet2& operator-=(const Jet2& other);
  Jet2& operator*=(const Jet2& other);
  Jet2& operator/=(const Jet2& other);
  Jet2& operator+=(double c) noexcept;
  Jet2& operator-=(double c) noexcept;
  Jet2& operator*=(double c) noexcept;
  Jet2& operator/=(double c);

  /// Chain rule through a scalar function with f(u)=f0, f'(u)=f1, f''(u)=f2.
  Jet2 compose(double f0, double f1, double f2) const;

 private:
  std::size_t packed(std::size_t i, std::size_t j) const noexcept;
  void require_same_dim(const Jet2& other) const;

  double value_ = 0.0;
  std::vector<double> grad_;
  std::vector<double> hess_;  // upper triangle, row-major
};

Jet2 operator+(Jet2 a, const Jet2& b);
Jet2 operator-(Jet2 a, const Jet2& b);
Jet2 operator*(Jet2 a, const Jet2& b);
Jet2 operator/(Jet2 a, const Jet2& b);
Jet2 operator+(Jet2 a, double c);
Jet2 operator+(double c, Jet2 a);
Jet2 operator-(Jet2 a, double c);
Jet2 operator-(double c, const Jet2& a);
Jet2 operator*(Jet2 a, double c);
Jet2 operator*(double c, Jet2 a);
Jet2 operator/(Jet2 a, double c);
Jet2 operator/(double c, const Jet2& a);
Jet2 operator-(const Jet2& a);

Jet2 sqrt(const Jet2& a);
Jet2 log(const Jet2& a);
Jet2 exp(const Jet2& a);
Jet2 reciprocal(const Jet2& a);
Jet2 pow(const Jet2& a, int k);

enum class BinaryOp { add, sub, mul, div };
enum class UnaryOp { sqrt, ln, exp, reciprocal, power, negate };

Jet2 seed_variable(std::size_t index, double x, std::size_t dim);
Jet2 combine(BinaryOp op, const Jet2& a, const Jet2& b);
/// `power` is only read for UnaryOp::power.
Jet2 map_unary(UnaryOp op, const Jet2& a, int power = 0);

/// Seeds every coordinate of x as an independent variable.
std::vector<Jet2> seed_all(std::span<const double> x);

}  // namespace qchk
