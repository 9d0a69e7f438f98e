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

#include "fracdyn/spinboson.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "fracdyn/errors.hpp"
#include "fracdyn/specfun.hpp"
#include "quad.hpp"

namespace fracdyn {

using cplx = std::complex<double>;

void BathSpec::validate() const {
  if (!(eta > 0.0) || !std::isfinite(eta)) throw ValidationError("bath: eta must be positive");
  if (!(chi > 0.0) || !std::isfinite(chi)) throw ValidationError("bath: chi must be positive");
  if (!(omega_c > 0.0) || !std::isfinite(omega_c)) throw ValidationError("bath: omega_c must be positive");
  if (!(beta > 0.0)) throw ValidationError("bath: beta must be positive");
}

std::string to_string(SeriesKind kind) {
  switch (kind) {
    case SeriesKind::Exact: return "exact";
    case SeriesKind::Markov: return "markov";
    case SeriesKind::Tcl: return "tcl";
    case SeriesKind::Fractional: return "fractional";
    case SeriesKind::FractionalPlateau: return "fractional-plateau";
  }
  return "unknown";
}

double spectral_density(const BathSpec& bath, double omega) {
  if (!(omega >= 0.0)) throw DomainError("spectral_density: omega must be nonnegative");
  if (omega == 0.0) return 0.0;
  return bath.eta * std::pow(omega, bath.chi) * std::pow(bath.omega_c, 1.0 - bath.chi) * std::exp(-omega / bath.omega_c);
}

namespace {

double thermal(const BathSpec& bath, double omega) {
  if (bath.zero_temperature()) return 1.0;
  return 1.0 / std::tanh(0.5 * bath.beta * omega);
}

// Beyond this frequency J(w)/w^2 coth is below ~1e-17 of its scale.
double cutoff(const BathSpec& bath) { return (40.0 + 2.0 * bath.chi) * bath.omega_c; }

// int_0^inf g(w) dw: tanh-sinh on [0, b1] for the w -> 0 power law, then
// Gauss-Legendre panels no wider than one oscillation period and wc.
template <class G>
double spectral_integral(const BathSpec& bath, double t, G&& g) {
  const double top = cutoff(bath);
  const double b1 = std::min({t > 0.0 ? 1.0 / t : top, bath.omega_c, top});
  double v = quad::finite([&](double w) { return w > 0.0 ? g(w) : 0.0; }, 0.0, b1, 1e-15);
  const double width = std::min(bath.omega_c, t > 0.0 ? 2.0 * std::numbers::pi / t : bath.omega_c);
  const int panels = std::max(1, static_cast<int>(std::ceil((top - b1) / width)));
  v += quad::legendre(g, b1, top, panels);
  return v;
}

}  // namespace

double dephasing_Q(const BathSpec& bath, double t) {
  bath.validate();
  if (!(t >= 0.0)) throw DomainError("dephasing_Q: t must be nonnegative");
  if (t == 0.0) return 0.0;
  if (!bath.zero_temperature() && !(bath.chi > 0.0)) throw DomainError("dephasing_Q: divergent at finite temperature");
  // (1 - cos wt) / w^2 = (t^2/2) (sin x / x)^2 with x = wt/2, free of cancellation.
  const auto g = [&](double w) {
    const double x = 0.5 * w * t;
    const double sinc = x < 1e-8 ? 1.0 - x * x / 6.0 : std::sin(x) / x;
    return spectral_density(bath, w) * thermal(bath, w) * 0.5 * t * t * sinc * sinc;
  };
  return std::max(0.0, 2.0 / std::numbers::pi * spectral_integral(bath, t, g));
}

double bath_correlation(const BathSpec& bath, double t) {
  bath.validate();
  if (!(t >= 0.0)) throw DomainError("bath_correlation: t must be nonnegative");
  if (!bath.zero_temperature() && !(bath.chi > 0.0)) throw DomainError("bath_correlation: divergent");
  const auto g = [&](double w) { return spectral_density(bath, w) * thermal(bath, w) * std::cos(w * t); };
  return 2.0 / std::numbers::pi * spectral_integral(bath, t, g);
}

namespace {

void check_times(const std::vector<double>& times) {
  if (times.empty()) throw ValidationError("time grid is empty");
  if (!(times[0] >= 0.0)) throw ValidationError("time grid must start at t >= 0");
  for (std::size_t k = 1; k < times.size(); ++k)
    if (!(times[k] > times[k - 1])) throw ValidationError("time grid must be strictly increasing");
}

cplx rotation(double epsilon, double t) { return std::polar(1.0, epsilon * t); }

}  // namespace

CoherenceSeries exact_coherence(const BathSpec& bath, double epsilon, const std::vector<double>& times) {
  check_times(times);
  CoherenceSeries s{times, {}, SeriesKind::Exact};
  s.values.reserve(times.size());
  for (double t : times) s.values.push_back(rotation(epsilon, t) * std::exp(-dephasing_Q(bath, t)));
  return s;
}

double asymptotic_Q(const BathSpec& bath, double t, Regime regime) {
  bath.validate();
  if (!(t > 0.0)) throw DomainError("asymptotic_Q: t must be positive");
  const double eta = bath.eta, chi = bath.chi, wc = bath.omega_c;
  switch (regime) {
    case Regime::ShortTime:
      return 0.5 * eta * gamma_fn(chi + 1.0) * wc * wc * t * t;
    case Regime::SubOhmic:
      if (!(chi < 1.0)) throw DomainError("asymptotic_Q: sub-Ohmic regime needs chi < 1");
      return 2.0 / std::numbers::pi * eta * std::pow(wc, 1.0 - chi) * gamma_fn(1.0 - chi) *
             std::sin(std::numbers::pi * chi / 2.0) * std::pow(t, 1.0 - chi);
    case Regime::Ohmic:
      if (chi != 1.0) throw DomainError("asymptotic_Q: Ohmic regime needs chi = 1");
      return 0.5 * eta * std::log(wc * wc * t * t);
    case Regime::SuperOhmic:
      if (!(chi > 1.0)) throw DomainError("asymptotic_Q: super-Ohmic regime needs chi > 1");
      return 2.0 / std::numbers::pi * eta * gamma_fn(chi - 1.0);
  }
  throw DomainError("asymptotic_Q: unknown regime");
}

double markov_fit_rate(const CoherenceSeries& series, std::pair<double, double> window) {
  double sx = 0.0, sy = 0.0;
  std::vector<std::pair<double, double>> pts;
  for (std::size_t k = 0; k < series.times.size(); ++k) {
    const double t = series.times[k];
    if (t < window.first || t > window.second) continue;
    const double a = std::abs(series.values[k]);
    if (!(a > 0.0)) throw ValidationError("markov_fit_rate: zero coherence inside the window");
    pts.emplace_back(t, std::log(a));
    sx += t;
    sy += pts.back().second;
  }
  if (pts.size() < 8) throw ValidationError("markov_fit_rate: need at least 8 samples in the window");
  const double n = static_cast<double>(pts.size());
  const double mx = sx / n, my = sy / n;
  double sxx = 0.0, sxy = 0.0;
  for (const auto& [x, y] : pts) {
    sxx += (x - mx) * (x - mx);
    sxy += (x - mx) * (y - my);
  }
  if (!(sxx > 0.0)) throw ValidationError("markov_fit_rate: degenerate window");
  return -0.5 * sxy / sxx;
}

CoherenceSeries markov_coherence(double gamma, double epsilon, const std::vector<double>& times) {
  check_times(times);
  if (!(gamma > 0.0)) throw DomainError("markov_coherence: gamma must be positive");
  CoherenceSeries s{times, {}, SeriesKind::Markov};
  s.values.reserve(times.size());
  for (double t : times) s.values.push_back(rotation(epsilon, t) * std::exp(-2.0 * gamma * t));
  return s;
}

CoherenceSeries tcl_coherence(const BathSpec& bath, double epsilon, const std::vector<double>& times) {
  check_times(times);
  bath.validate();
  CoherenceSeries s{times, {}, SeriesKind::Tcl};
  s.values.reserve(times.size());
  // Start from the coherence at times[0] (1 at t = 0).
  cplx u = rotation(epsilon, times[0]) * std::exp(-dephasing_Q(bath, times[0]));
  s.values.push_back(u);
  for (std::size_t k = 1; k < times.size(); ++k) {
    const double a = times[k - 1], b = times[k];
    const double dt = b - a;
    const double h = std::min(dt, 1e-3) / 4.0;
    // gamma(tau) = Q'(tau) / 2; Q is even, so Q(tau - h) = Q(|tau - h|).
    const auto gamma_t = [&](double tau) {
      return 0.25 * (dephasing_Q(bath, tau + h) - dephasing_Q(bath, std::abs(tau - h))) / h;
    };
    // Smooth on a grid interval; long intervals are split on the bath time scale.
    const int panels = std::max(1, static_cast<int>(std::ceil(dt * bath.omega_c / 2.0)));
    double integral = 0.0;
    const double w = dt / panels;
    for (int p = 0; p < panels; ++p) integral += quad::gauss8(gamma_t, a + p * w, a + (p + 1) * w);
    u *= rotation(epsilon, dt) * std::exp(-2.0 * integral);
    s.values.push_back(u);
  }
  return s;
}

}  // namespace fracdyn
