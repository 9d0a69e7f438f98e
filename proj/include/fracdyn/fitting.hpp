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
#include <optional>
#include <utility>
#include <vector>

#include "fracdyn/specfun.hpp"
#include "fracdyn/spinboson.hpp"

namespace fracdyn {

struct FitWindow {
  double t_start;
  double t_end;

  /// Throws ValidationError unless 0 < t_start < t_end.
  void validate() const;
  bool contains(double t) const noexcept { return t >= t_start && t <= t_end; }
};

/// Model u(t) = u_inf + (1 - u_inf) E_alpha(-lambda t^alpha); u_inf = 0 if absent.
double fractional_model(FractionalOrder alpha, double lambda, double t, std::optional<double> u_inf = {});

/// Root-mean-square deviation between the model and |u| over the in-window samples.
double rmse_objective(FractionalOrder alpha, double lambda, const CoherenceSeries& target, const FitWindow& window,
                      std::optional<double> u_inf = {});

/// How the long-time plateau enters a fit.
struct Plateau {
  enum class Mode { None, Fixed, Auto };
  Mode mode = Mode::None;
  double value = 0.0;               // Fixed
  std::optional<BathSpec> bath;     // Auto: analytic plateau when chi > 1

  static Plateau none() { return {}; }
  static Plateau fixed(double u_inf) { return {Mode::Fixed, u_inf, {}}; }
  static Plateau automatic(std::optional<BathSpec> bath = {}) { return {Mode::Auto, 0.0, bath}; }
};

struct FitResult {
  FractionalOrder alpha;
  double lambda;
  std::optional<double> u_inf;
  FitWindow window;
  double rmse;
  int evaluations;
  bool converged;
};

/// Coarse grid over alpha in {0.05, ..., 1} x 41 log-spaced lambda in
/// [1e-3, 1e2], then Nelder-Mead in (alpha, ln lambda) until the simplex
/// diameter drops below 1e-6, restarted once. Non-convergence within 1e4
/// evaluations returns the best point with converged = false.
FitResult fit_fractional(const CoherenceSeries& target, const FitWindow& window, const Plateau& plateau = {});

/// Resolves a plateau specification against a series (the value used by fit_fractional).
std::optional<double> resolve_plateau(const CoherenceSeries& target, const Plateau& plateau);

/// Median of the local log-log slope of X = -ln|v| over the longest run of
/// interior points whose successive slopes differ by < 0.05 (at least 5 points).
double local_order_estimate(const CoherenceSeries& target, std::optional<double> u_inf = {});

/// lambda such that the model passes through (t_star, u_star).
double lambda_from_point(FractionalOrder alpha, double t_star, double u_star, std::optional<double> u_inf = {});

/// Smallest t with |C(t)| <= |C(0)| / e.
double bath_correlation_time(const BathSpec& bath);

/// Fit window [2 tau_B, factor tau_B].
FitWindow default_window(double tau_b, double factor = 60.0);

struct NelderMeadResult {
  std::vector<double> x;
  double value;
  int evaluations;
  bool converged;
};

/// Nelder-Mead with coefficients (1, 2, 0.5, 0.5). Stops when the largest
/// vertex distance from the best vertex is below tol; restarts once from the
/// optimum with the initial step sizes.
NelderMeadResult nelder_mead(const std::function<double(const std::vector<double>&)>& f, std::vector<double> x0,
                             std::vector<double> step, double tol = 1e-6, int max_evaluations = 10000);

}  // namespace fracdyn
