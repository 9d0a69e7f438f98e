// Copyright 2026 The fracdyn Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Thin wrappers over Boost.Math quadrature used across the library.

#pragma once

#include <array>
#include <cmath>
#include <limits>

#include <boost/math/quadrature/exp_sinh.hpp>
#include <boost/math/quadrature/gauss.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/quadrature/tanh_sinh.hpp>

namespace fracdyn::quad {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

// Integrators cache their node tables lazily; one instance per thread.
inline boost::math::quadrature::tanh_sinh<double>& tanh_sinh_rule() {
  thread_local boost::math::quadrature::tanh_sinh<double> rule(12);
  return rule;
}

inline boost::math::quadrature::exp_sinh<double>& exp_sinh_rule() {
  thread_local boost::math::quadrature::exp_sinh<double> rule(12);
  return rule;
}

/// Finite interval, tolerant of integrable endpoint singularities. The
/// integrand receives (x, distance of x to the nearer endpoint).
template <class F>
double finite(F&& f, double a, double b, double tol = 1e-14, double* err = nullptr) {
  if (a == b) return 0.0;
  double e = 0.0;
  double l1 = 0.0;
  const double v = tanh_sinh_rule().integrate(f, a, b, tol, &e, &l1);
  if (err) *err = e;
  return v;
}

/// Half-infinite interval [a, inf).
template <class F>
double upper(F&& f, double a, double tol = 1e-14, double* err = nullptr) {
  double e = 0.0;
  double l1 = 0.0;
  const double v = exp_sinh_rule().integrate([&](double x) { return f(x); }, a, kInf, tol, &e, &l1);
  if (err) *err = e;
  return v;
}

/// Adaptive Gauss-Kronrod (15-point) on a smooth finite interval.
template <class F>
double kronrod(F&& f, double a, double b, double tol = 1e-13, double* err = nullptr,
               unsigned max_depth = 15) {
  double e = 0.0;
  const double v = boost::math::quadrature::gauss_kronrod<double, 15>::integrate(
      f, a, b, max_depth, tol, &e);
  if (err) *err = e;
  return v;
}

/// Single-panel 8-point Gauss-Legendre rule.
template <class F>
double gauss8(F&& f, double a, double b) {
  return boost::math::quadrature::gauss<double, 8>::integrate(f, a, b);
}

/// Fixed 20-point Gauss-Legendre nodes and weights on [-1, 1].
struct GaussLegendre20 {
  static constexpr int kNodes = 20;
  std::array<double, kNodes> x{};
  std::array<double, kNodes> w{};

  GaussLegendre20() {
    using Rule = boost::math::quadrature::gauss<double, kNodes>;
    const auto& abs = Rule::abscissa();
    const auto& wts = Rule::weights();
    // Boost stores the non-negative half of the symmetric rule.
    int k = 0;
    for (std::size_t i = 0; i < abs.size(); ++i) {
      if (abs[i] == 0.0) continue;
      x[k] = -abs[i];
      w[k] = wts[i];
      ++k;
      x[k] = abs[i];
      w[k] = wts[i];
      ++k;
    }
  }

  static const GaussLegendre20& get() {
    static const GaussLegendre20 rule;
    return rule;
  }
};

/// Composite 20-point Gauss-Legendre rule over n equal panels of [a, b].
template <class F>
double legendre(F&& f, double a, double b, int panels = 1) {
  const auto& rule = GaussLegendre20::get();
  const double width = (b - a) / panels;
  double total = 0.0;
  for (int p = 0; p < panels; ++p) {
    const double lo = a + p * width;
    const double half = 0.5 * width;
    const double mid = lo + half;
    double s = 0.0;
    for (int k = 0; k < GaussLegendre20::kNodes; ++k) s += rule.w[k] * f(mid + half * rule.x[k]);
    total += half * s;
  }
  return total;
}

}  // namespace fracdyn::quad
