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

#include "fracdyn/fitting.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "fracdyn/errors.hpp"

namespace fracdyn {

void FitWindow::validate() const {
  if (!(t_start > 0.0) || !(t_end > t_start)) throw ValidationError("fit window must satisfy 0 < t_start < t_end");
}

double fractional_model(FractionalOrder alpha, double lambda, double t, std::optional<double> u_inf) {
  const double e = t == 0.0 ? 1.0 : mittag_leffler(alpha, -lambda * std::pow(t, alpha.value()));
  const double p = u_inf.value_or(0.0);
  return p + (1.0 - p) * e;
}

namespace {

struct WindowData {
  std::vector<double> t, y;
};

WindowData window_data(const CoherenceSeries& target, const FitWindow& window) {
  window.validate();
  WindowData d;
  for (std::size_t k = 0; k < target.times.size(); ++k) {
    if (!window.contains(target.times[k])) continue;
    d.t.push_back(target.times[k]);
    d.y.push_back(std::abs(target.values[k]));
  }
  if (d.t.size() < 4) throw ValidationError("fit window holds fewer than 4 samples");
  return d;
}

double rmse(const WindowData& d, FractionalOrder alpha, double lambda, std::optional<double> u_inf) {
  double s = 0.0;
  for (std::size_t k = 0; k < d.t.size(); ++k) {
    const double r = fractional_model(alpha, lambda, d.t[k], u_inf) - d.y[k];
    s += r * r;
  }
  return std::sqrt(s / static_cast<double>(d.t.size()));
}

double median(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  const std::size_t n = v.size();
  return n % 2 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

}  // namespace

double rmse_objective(FractionalOrder alpha, double lambda, const CoherenceSeries& target, const FitWindow& window,
                      std::optional<double> u_inf) {
  if (!(lambda > 0.0)) throw DomainError("rmse_objective: lambda must be positive");
  return rmse(window_data(target, window), alpha, lambda, u_inf);
}

NelderMeadResult nelder_mead(const std::function<double(const std::vector<double>&)>& f, std::vector<double> x0,
                             std::vector<double> step, double tol, int max_evaluations) {
  const std::size_t n = x0.size();
  int evals = 0;
  const auto eval = [&](const std::vector<double>& x) {
    ++evals;
    return f(x);
  };
  std::vector<double> best = x0;
  double best_val = 0.0;
  bool converged = false;

  for (int round = 0; round < 2; ++round) {
    std::vector<std::vector<double>> s(n + 1, best);
    for (std::size_t i = 0; i < n; ++i) s[i + 1][i] += step[i];
    std::vector<double> v(n + 1);
    for (std::size_t i = 0; i <= n; ++i) v[i] = eval(s[i]);
    converged = false;
    while (evals < max_evaluations) {
      std::vector<std::size_t> idx(n + 1);
      std::iota(idx.begin(), idx.end(), 0);
      std::sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) { return v[a] < v[b]; });
      std::vector<std::vector<double>> s2;
      std::vector<double> v2;
      for (std::size_t i : idx) {
        s2.push_back(s[i]);
        v2.push_back(v[i]);
      }
      s = std::move(s2);
      v = std::move(v2);

      double diam = 0.0;
      for (std::size_t i = 1; i <= n; ++i) {
        double d2 = 0.0;
        for (std::size_t j = 0; j < n; ++j) d2 += (s[i][j] - s[0][j]) * (s[i][j] - s[0][j]);
        diam = std::max(diam, std::sqrt(d2));
      }
      if (diam < tol) {
        converged = true;
        break;
      }

      std::vector<double> c(n, 0.0);
      for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) c[j] += s[i][j] / static_cast<double>(n);
      const auto along = [&](double k) {
        std::vector<double> x(n);
        for (std::size_t j = 0; j < n; ++j) x[j] = c[j] + k * (s[n][j] - c[j]);
        return x;
      };
      const auto xr = along(-1.0);
      const double vr = eval(xr);
      if (vr < v[0]) {
        const auto xe = along(-2.0);
        const double ve = eval(xe);
        if (ve < vr) {
          s[n] = xe;
          v[n] = ve;
        } else {
          s[n] = xr;
          v[n] = vr;
        }
      } else if (vr < v[n - 1]) {
        s[n] = xr;
        v[n] = vr;
      } else {
        const bool outside = vr < v[n];
        const auto xc = along(outside ? -0.5 : 0.5);
        const double vc = eval(xc);
        if (vc < (outside ? vr : v[n])) {
          s[n] = xc;
          v[n] = vc;
        } else {
          for (std::size_t i = 1; i <= n; ++i) {
            for (std::size_t j = 0; j < n; ++j) s[i][j] = s[0][j] + 0.5 * (s[i][j] - s[0][j]);
            v[i] = eval(s[i]);
          }
        }
      }
    }
    const auto it = std::min_element(v.begin(), v.end());
    best = s[it - v.begin()];
    best_val = *it;
    if (!converged) break;
  }
  return {best, best_val, evals, converged};
}

std::optional<double> resolve_plateau(const CoherenceSeries& target, const Plateau& plateau) {
  switch (plateau.mode) {
    case Plateau::Mode::None:
      return std::nullopt;
    case Plateau::Mode::Fixed:
      if (!(plateau.value >= 0.0 && plateau.value < 1.0)) throw DomainError("plateau must lie in [0, 1)");
      return plateau.value;
    case Plateau::Mode::Auto:
      if (plateau.bath && plateau.bath->chi > 1.0)
        return std::exp(-asymptotic_Q(*plateau.bath, 1.0, Regime::SuperOhmic));
      {
        // Tail median: last 10 % of the samples.
        const std::size_t n = target.values.size();
        if (n < 10) throw EstimationError("plateau: series too short for a tail median");
        std::vector<double> tail;
        for (std::size_t k = n - n / 10; k < n; ++k) tail.push_back(std::abs(target.values[k]));
        const double m = median(tail);
        if (!(m >= 0.0 && m < 1.0)) throw EstimationError("plateau: tail median outside [0, 1)");
        return m;
      }
  }
  return std::nullopt;
}

FitResult fit_fractional(const CoherenceSeries& target, const FitWindow& window, const Plateau& plateau) {
  const WindowData d = window_data(target, window);
  for (double y : d.y)
    if (!(y > 0.0)) throw ValidationError("fit_fractional: target magnitude must be positive in the window");
  const std::optional<double> u_inf = resolve_plateau(target, plateau);

  int evaluations = 0;
  double best = std::numeric_limits<double>::infinity();
  double best_a = 1.0, best_l = 1.0;
  for (int i = 1; i <= 20; ++i) {
    const double a = 0.05 * i;
    for (int j = 0; j < 41; ++j) {
      const double l = std::pow(10.0, -3.0 + 5.0 * j / 40.0);
      const double v = rmse(d, FractionalOrder(a), l, u_inf);
      ++evaluations;
      if (v < best) {
        best = v;
        best_a = a;
        best_l = l;
      }
    }
  }

  const auto objective = [&](const std::vector<double>& x) {
    if (!(x[0] > 0.0 && x[0] <= 1.0) || !std::isfinite(x[1])) return 1e10;
    return rmse(d, FractionalOrder(x[0]), std::exp(x[1]), u_inf);
  };
  const auto nm = nelder_mead(objective, {best_a, std::log(best_l)}, {0.025, 0.5 * std::log(10.0) / 8.0}, 1e-6,
                              10000 - evaluations);
  evaluations += nm.evaluations;
  FitResult r{FractionalOrder(best_a), best_l, u_inf, window, best, evaluations, nm.converged};
  if (nm.value <= best) {
    r.alpha = FractionalOrder(nm.x[0]);
    r.lambda = std::exp(nm.x[1]);
    r.rmse = rmse(d, r.alpha, r.lambda, u_inf);
  }
  return r;
}

double local_order_estimate(const CoherenceSeries& target, std::optional<double> u_inf) {
  const double p = u_inf.value_or(0.0);
  std::vector<double> lt, lx;
  for (std::size_t k = 0; k < target.times.size(); ++k) {
    const double t = target.times[k];
    const double v = (std::abs(target.values[k]) - p) / (1.0 - p);
    if (!(t > 0.0) || !(v > 0.0)) continue;
    const double x = -std::log(v);
    if (!(x > 0.0)) continue;
    lt.push_back(std::log(t));
    lx.push_back(std::log(x));
  }
  if (lt.size() < 5) throw EstimationError("local_order_estimate: need at least 5 samples with -ln|v| > 0");
  std::vector<double> slope;
  for (std::size_t i = 1; i + 1 < lt.size(); ++i) slope.push_back((lx[i + 1] - lx[i - 1]) / (lt[i + 1] - lt[i - 1]));

  // Longest run of slopes whose successive differences stay below 0.05.
  std::size_t best_lo = 0, best_len = 0, lo = 0;
  for (std::size_t i = 1; i <= slope.size(); ++i) {
    if (i == slope.size() || std::abs(slope[i] - slope[i - 1]) >= 0.05) {
      if (i - lo > best_len) {
        best_len = i - lo;
        best_lo = lo;
      }
      lo = i;
    }
  }
  if (best_len < 5) throw EstimationError("local_order_estimate: no constant-slope region; use a wider series");
  return median(std::vector<double>(slope.begin() + best_lo, slope.begin() + best_lo + best_len));
}

double lambda_from_point(FractionalOrder alpha, double t_star, double u_star, std::optional<double> u_inf) {
  if (!(t_star > 0.0)) throw DomainError("lambda_from_point: t_star must be positive");
  const double p = u_inf.value_or(0.0);
  if (!(p >= 0.0 && p < 1.0)) throw DomainError("lambda_from_point: plateau must lie in [0, 1)");
  if (!(u_star > p && u_star < 1.0)) throw DomainError("lambda_from_point: u_star must lie strictly between plateau and 1");
  const double v = (u_star - p) / (1.0 - p);
  const double ta = std::pow(t_star, alpha.value());
  const auto g = [&](double log_l) { return mittag_leffler(alpha, -std::exp(log_l) * ta) - v; };
  // E decreases in lambda: bracket with g(lo) > 0 > g(hi).
  double lo = -1.0, hi = 1.0;
  while (g(lo) <= 0.0) {
    lo -= 4.0;
    if (lo < -700.0) throw DomainError("lambda_from_point: no bracket");
  }
  while (g(hi) >= 0.0) {
    hi += 4.0;
    if (hi > 700.0) throw DomainError("lambda_from_point: no bracket");
  }
  for (int it = 0; it < 200 && hi - lo > 1e-15 * std::max(1.0, std::abs(lo)); ++it) {
    const double mid = 0.5 * (lo + hi);
    (g(mid) > 0.0 ? lo : hi) = mid;
  }
  return std::exp(0.5 * (lo + hi));
}

double bath_correlation_time(const BathSpec& bath) {
  const double c0 = std::abs(bath_correlation(bath, 0.0));
  if (!(c0 > 0.0)) throw EstimationError("bath_correlation_time: C(0) = 0");
  const double level = c0 * std::exp(-1.0);
  const double limit = 1e3 / bath.omega_c;
  double a = 0.0;
  double step = 0.01 / bath.omega_c;
  while (a < limit) {
    const double b = a + step;
    if (std::abs(bath_correlation(bath, b)) <= level) {
      double lo = a, hi = b;
      for (int it = 0; it < 100 && hi - lo > 1e-9; ++it) {
        const double mid = 0.5 * (lo + hi);
        (std::abs(bath_correlation(bath, mid)) <= level ? hi : lo) = mid;
      }
      return 0.5 * (lo + hi);
    }
    a = b;
    step = std::max(step, 0.01 * a);
  }
  throw EstimationError("bath_correlation_time: |C| stays above |C(0)|/e up to 1e3/omega_c");
}

FitWindow default_window(double tau_b, double factor) {
  FitWindow w{2.0 * tau_b, factor * tau_b};
  w.validate();
  return w;
}

}  // namespace fracdyn
