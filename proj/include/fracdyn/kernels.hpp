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

#pragma once

#include <functional>
#include <span>
#include <vector>

#include "fracdyn/specfun.hpp"

namespace fracdyn {

/// The three power-law kernels of a fractional master equation.
///
///   CaputoInner              t^{-alpha}   / Gamma(1 - alpha)
///   Volterra                 t^{alpha-1}  / Gamma(alpha)
///   DifferentialConvolution  t^{alpha-2}  / Gamma(alpha - 1)
enum class KernelKind { CaputoInner, Volterra, DifferentialConvolution };

double kernel_eval(KernelKind kind, FractionalOrder alpha, double t);

struct SOETerm {
  double weight;
  double rate;
};

/// Sum-of-exponentials approximation of the Volterra kernel,
/// K(t) ~ sum_q w_q exp(-xi_q t), relative error <= tol on [t_min, t_max].
struct SOEKernel {
  FractionalOrder alpha;
  std::vector<SOETerm> terms;
  double t_min;
  double t_max;
  double tol;

  double operator()(double t) const;
  /// Largest relative deviation from the exact kernel on a log grid of n points.
  double audit(int n = 256) const;
};

inline constexpr int kSOEMaxTerms = 256;

/// Throws AccuracyError if more than kSOEMaxTerms terms would be required.
SOEKernel soe_compress(FractionalOrder alpha, double t_min, double t_max, double tol);

/// Necessary-condition test for complete monotonicity: (-1)^m f[t_i..t_{i+m}] >= 0
/// for all divided differences of order m = 0..order on the grid.
bool complete_monotonicity_probe(FractionalOrder alpha, KernelKind kind, std::span<const double> grid,
                                 int order);
bool complete_monotonicity_probe(const std::function<double(double)>& f, std::span<const double> grid,
                                 int order);

}  // namespace fracdyn
