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

#include "fracdyn/kernels.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "fracdyn/errors.hpp"

namespace fracdyn {

double kernel_eval(KernelKind kind, FractionalOrder alpha, double t) {
  if (!(t > 0.0)) throw DomainError("kernel_eval: t must be positive, got " + std::to_string(t));
  const double a = alpha.value();
  switch (kind) {
    case KernelKind::CaputoInner:
      return std::pow(t, -a) * rgamma(1.0 - a);
    case KernelKind::Volterra:
      return std::pow(t, a - 1.0) * rgamma(a);
    case KernelKind::DifferentialConvolution:
      return std::pow(t, a - 2.0) * rgamma(a - 1.0);
  }
  throw DomainError("kernel_eval: unknown kernel kind");
}

double SOEKernel::operator()(double t) const {
  double s = 0.0;
  for (const auto& q : terms) s += q.weight * std::exp(-q.rate * t);
  return s;
}

double SOEKernel::audit(int n) const {
  double worst = 0.0;
  const int m = t_max > t_min ? std::max(n, 2) : 1;
  for (int i = 0; i < m; ++i) {
    const double t = m == 1 ? t_min : t_min * std::pow(t_max / t_min, double(i) / (m - 1));
    const double exact = kernel_eval(KernelKind::Volterra, alpha, t);
    worst = std::max(worst, std::abs((*this)(t) - exact) / exact);
  }
  return worst;
}

namespace {

// Trapezoid rule in s = log(xi) over the whole line for
//   t^{a-1}/Gamma(a) = sin(pi a)/pi * int_0^inf xi^{-a} exp(-xi t) dxi.
// Nodes below xi0 have xi t ~ 0 and are summed geometrically into one term at rate 0.
std::vector<SOETerm> soe_terms(double a, double t_min, double t_max, double tol, double h) {
  const double c = std::sin(std::numbers::pi * a) / std::numbers::pi;
  // Lumping error ~ (xi0 t)^{2-a} / ((2-a) Gamma(1-a)), relative.
  const double lump_tol = 0.25 * tol * (2.0 - a) * gamma_fn(1.0 - a);
  const double xi0 = std::pow(lump_tol, 1.0 / (2.0 - a)) / t_max;
  const double xi1 = (std::log(1.0 / tol) + 6.0) / t_min;
  const double s0 = std::log(xi0);
  const int n = static_cast<int>(std::ceil((std::log(xi1) - s0) / h));

  std::vector<SOETerm> terms;
  terms.reserve(n + 2);
  const double r = std::exp(-(1.0 - a) * h);
  terms.push_back({c * h * std::exp((1.0 - a) * s0) * r / (1.0 - r), 0.0});
  for (int k = 0; k <= n; ++k) {
    const double s = s0 + k * h;
    terms.push_back({c * h * std::exp((1.0 - a) * s), std::exp(s)});
  }
  return terms;
}

}  // namespace

SOEKernel soe_compress(FractionalOrder alpha, double t_min, double t_max, double tol) {
  if (!(t_min > 0.0) || !(t_max >= t_min)) throw DomainError("soe_compress: need 0 < t_min <= t_max");
  if (!(tol > 0.0)) throw DomainError("soe_compress: tol must be positive");
  if (alpha.is_one()) return SOEKernel{alpha, {{1.0, 0.0}}, t_min, t_max, tol};

  const double a = alpha.value();
  // Trapezoid error on the strip |Im s| < pi/2 decays like exp(-pi^2 / h).
  double h = std::numbers::pi * std::numbers::pi / (std::log(1.0 / tol) + 2.0);
  double achieved = 0.0;
  for (int iter = 0; iter < 12; ++iter, h *= 0.8) {
    SOEKernel k{alpha, soe_terms(a, t_min, t_max, tol, h), t_min, t_max, tol};
    if (static_cast<int>(k.terms.size()) > kSOEMaxTerms) break;
    achieved = k.audit();
    if (achieved <= tol) return k;
  }
  throw AccuracyError("soe_compress: tolerance not reached within " + std::to_string(kSOEMaxTerms) + " terms",
                      achieved);
}

bool complete_monotonicity_probe(const std::function<double(double)>& f, std::span<const double> grid,
                                 int order) {
  if (order < 0 || order > 6) throw DomainError("complete_monotonicity_probe: order must be in [0, 6]");
  if (static_cast<int>(grid.size()) < order + 1)
    throw DomainError("complete_monotonicity_probe: grid needs at least order+1 points");
  std::vector<double> d(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i) d[i] = f(grid[i]);
  for (int m = 0; m <= order; ++m) {
    if (m > 0) {
      for (std::size_t i = 0; i + m < grid.size(); ++i) d[i] = (d[i + 1] - d[i]) / (grid[i + m] - grid[i]);
    }
    const double sign = m % 2 == 0 ? 1.0 : -1.0;
    for (std::size_t i = 0; i + m < grid.size(); ++i)
      if (sign * d[i] < 0.0) return false;
  }
  return true;
}

bool complete_monotonicity_probe(FractionalOrder alpha, KernelKind kind, std::span<const double> grid,
                                 int order) {
  return complete_monotonicity_probe([&](double t) { return kernel_eval(kind, alpha, t); }, grid, order);
}

}  // namespace fracdyn
