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

#include "qchk/jet.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

#include "qchk/errors.hpp"

namespace qchk {

namespace {

[[noreturn]] void domain_failure(const char* what, double value) {
  std::ostringstream os;
  os.precision(17);
  os << what << " outside its domain at value " << value;
  throw DomainError(os.str());
}

}  // namespace

Jet2 Jet2::constant(double value, std::size_t dim) {
  Jet2 j;
  j.value_ = value;
  j.grad_.assign(dim, 0.0);
  j.hess_.assign(dim * (dim + 1) / 2, 0.0);
  return j;
}

Jet2 Jet2::variable(std::size_t index, double value, std::size_t dim) {
  if (index >= dim) {
    throw std::out_of_range("Jet2::variable: coordinate index " + std::to_string(index) +
                            " out of range for dimension " + std::to_string(dim));
  }
  Jet2 j = constant(value, dim);
  j.grad_[index] = 1.0;
  return j;
}

std::size_t Jet2::packed(std::size_t i, std::size_t j) const noexcept {
  if (i > j) std::swap(i, j);
  const std::size_t d = grad_.size();
  return i * d - i * (i - 1) / 2 + (j - i);
}

double Jet2::hessian(std::size_t i, std::size_t j) const {
  if (i >= dim() || j >= dim()) throw std::out_of_range("Jet2::hessian index");
  return hess_[packed(i, j)];
}

void Jet2::require_same_dim(const Jet2& other) const {
  if (other.dim() != dim()) {
    throw std::invalid_argument("Jet2: dimension mismatch (" + std::to_string(dim()) + " vs " +
                                std::to_string(other.dim()) + ")");
  }
}

Jet2& Jet2::operator+=(const Jet2& other) {
  require_same_dim(other);
  value_ += other.value_;
  for (std::size_t i = 0; i < grad_.size(); ++i) grad_[i] += other.grad_[i];
  for (std::size_t i = 0; i < hess_.size(); ++i) hess_[i] += other.hess_[i];
  return *this;
}

Jet2& Jet2::operator-=(const Jet2& other) {
  require_same_dim(other);
  value_ -= other.value_;
  for (std::size_t i = 0; i < grad_.size(); ++i) grad_[i] -= other.grad_[i];
  for (std::size_t i = 0; i < hess_.size(); ++i) hess_[i] -= other.hess_[i];
  return *this;
}

Jet2& Jet2::operator*=(const Jet2& other) {
  require_same_dim(other);
  const std::size_t d = dim();
  const double a = value_;
  const double b = other.value_;
  std::size_t p = 0;
  for (std::size_t i = 0; i < d; ++i) {
    for (std::size_t j = i; j < d; ++j, ++p) {
      hess_[p] = hess_[p] * b + other.hess_[p] * a + grad_[i] * other.grad_[j] +
                 grad_[j] * other.grad_[i];
    }
  }
  for (std::size_t i = 0; i < d; ++i) grad_[i] = grad_[i] * b + other.grad_[i] * a;
  value_ = a * b;
  return *this;
}

Jet2& Jet2::operator/=(const Jet2& other) { return *this *= reciprocal(other); }

Jet2& Jet2::operator+=(double c) noexcept {
  value_ += c;
  return *this;
}

Jet2& Jet2::operator-=(double c) noexcept {
  value_ -= c;
  return *this;
}

Jet2& Jet2::operator*=(double c) noexcept {
  value_ *= c;
  for (double& g : grad_) g *= c;
  for (double& h : hess_) h *= c;
  return *this;
}

Jet2& Jet2::operator/=(double c) {
  if (c == 0.0) domain_failure("division", c);
  return *this *= (1.0 / c);
}

Jet2 Jet2::compose(double f0, double f1, double f2) const {
  Jet2 out = *this;
  const std::size_t d = dim();
  std::size_t p = 0;
  for (std::size_t i = 0; i < d; ++i) {
    for (std::size_t j = i; j < d; ++j, ++p) {
      out.hess_[p] = f1 * hess_[p] + f2 * grad_[i] * grad_[j];
    }
  }
  for (std::size_t i = 0; i < d; ++i) out.grad_[i] = f1 * grad_[i];
  out.value_ = f0;
  return out;
}

Jet2 operator+(Jet2 a, const Jet2& b) { return a += b; }
Jet2 operator-(Jet2 a, const Jet2& b) { return a -= b; }
Jet2 operator*(Jet2 a, const Jet2& b) { return a *= b; }
Jet2 operator/(Jet2 a, const Jet2& b) { return a /= b; }
Jet2 operator+(Jet2 a, double c) { return a += c; }
Jet2 operator+(double c, Jet2 a) { return a += c; }
Jet2 operator-(Jet2 a, double c) { return a -= c; }
Jet2 operator-(double c, const Jet2& a) { return (-a) += c; }
Jet2 operator*(Jet2 a, double c) { return a *= c; }
Jet2 operator*(double c, Jet2 a) { return a *= c; }
Jet2 operator/(Jet2 a, double c) { return a /= c; }
Jet2 operator/(double c, const Jet2& a) { return reciprocal(a) *= c; }
Jet2 operator-(const Jet2& a) { return a * -1.0; }

Jet2 sqrt(const Jet2& a) {
  const double u = a.value();
  if (!(u > 0.0)) domain_failure("sqrt", u);
  const double r = std::sqrt(u);
  return a.compose(r, 0.5 / r, -0.25 / (u * r));
}

Jet2 log(const Jet2& a) {
  const double u = a.value();
  if (!(u > 0.0)) domain_failure("ln", u);
  return a.compose(std::log(u), 1.0 / u, -1.0 / (u * u));
}

Jet2 exp(const Jet2& a) {
  const double e = std::exp(a.value());
  return a.compose(e, e, e);
}

Jet2 reciprocal(const Jet2& a) {
  const double u = a.value();
  if (u == 0.0 || !std::isfinite(u)) domain_failure("reciprocal", u);
  const double r = 1.0 / u;
  return a.compose(r, -r * r, 2.0 * r * r * r);
}

Jet2 pow(const Jet2& a, int k) {
  const double u = a.value();
  if (k < 0 && u == 0.0) domain_failure("negative integer power", u);
  if (k == 0) return Jet2::constant(1.0, a.dim());
  const double f0 = std::pow(u, k);
  const double f1 = k * std::pow(u, k - 1);
  const double f2 = k == 1 ? 0.0 : static_cast<double>(k) * (k - 1) * std::pow(u, k - 2);
  return a.compose(f0, f1, f2);
}

Jet2 seed_variable(std::size_t index, double x, std::size_t dim) {
  return Jet2::variable(index, x, dim);
}

Jet2 combine(BinaryOp op, const Jet2& a, const Jet2& b) {
  switch (op) {
    case BinaryOp::add:
      return a + b;
    case BinaryOp::sub:
      return a - b;
    case BinaryOp::mul:
      return a * b;
    case BinaryOp::div:
      if (b.dim() != a.dim()) throw std::invalid_argument("Jet2: dimension mismatch");
      if (b.value() == 0.0) domain_failure("division", b.value());
      return a / b;
  }
  throw std::invalid_argument("combine: unknown operation");
}

Jet2 map_unary(UnaryOp op, const Jet2& a, int power) {
  switch (op) {
    case UnaryOp::sqrt:
      return sqrt(a);
    case UnaryOp::ln:
      return log(a);
    case UnaryOp::exp:
      return exp(a);
    case UnaryOp::reciprocal:
      return reciprocal(a);
    case UnaryOp::power:
      return pow(a, power);
    case UnaryOp::negate:
      return -a;
  }
  throw std::invalid_argument("map_unary: unknown operation");
}

std::vector<Jet2> seed_all(std::span<const double> x) {
  std::vector<Jet2> out;
  out.reserve(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) out.push_back(Jet2::variable(i, x[i], x.size()));
  return out;
}

}  // namespace qchk
