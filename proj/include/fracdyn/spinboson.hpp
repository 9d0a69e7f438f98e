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

#include <complex>
#include <limits>
#include <string>
#include <utility>
#include <vector>

namespace fracdyn {

/// Bath with spectral density J(w) = eta w^chi wc^{1-chi} exp(-w / wc) at
/// inverse temperature beta (infinity: zero temperature, coth -> 1).
struct BathSpec {
  double eta;
  double chi;
  double omega_c;
  double beta = std::numeric_limits<double>::infinity();

  /// Throws ValidationError unless all fields are positive.
  void validate() const;
  bool zero_temperature() const noexcept { return beta == std::numeric_limits<double>::infinity(); }
};

enum class SeriesKind { Exact, Markov, Tcl, Fractional, FractionalPlateau };

std::string to_string(SeriesKind kind);

/// Qubit coherence u(t) = <sigma_+(t)> on a time grid, normalized to u(0) = 1.
struct CoherenceSeries {
  std::vector<double> times;
  std::vector<std::complex<double>> values;
  SeriesKind kind;
};

double spectral_density(const BathSpec& bath, double omega);

/// Q(t) = (2/pi) int_0^inf J(w)/w^2 (1 - cos w t) coth(beta w / 2) dw.
double dephasing_Q(const BathSpec& bath, double t);

/// C(t) = (2/pi) int_0^inf J(w) cos(w t) coth(beta w / 2) dw.
double bath_correlation(const BathSpec& bath, double t);

/// u(t) = exp(i eps t) exp(-Q(t)), same rotation sense as the Lindblad models.
CoherenceSeries exact_coherence(const BathSpec& bath, double epsilon, const std::vector<double>& times);

enum class Regime { ShortTime, SubOhmic, Ohmic, SuperOhmic };

/// Leading-order asymptotic forms of Q(t) as tabulated:
///   ShortTime   (1/2) eta Gamma(chi+1) wc^2 t^2
///   SubOhmic    (2/pi) eta wc^{1-chi} Gamma(1-chi) sin(pi chi / 2) t^{1-chi}
///   Ohmic       (eta/2) ln(wc^2 t^2)
///   SuperOhmic  (2/pi) eta Gamma(chi-1)
double asymptotic_Q(const BathSpec& bath, double t, Regime regime);

/// Least-squares slope m of ln|u| against t on [t_start, t_end]; returns -m/2.
double markov_fit_rate(const CoherenceSeries& series, std::pair<double, double> window);

/// u(t) = exp(i eps t) exp(-2 gamma t).
CoherenceSeries markov_coherence(double gamma, double epsilon, const std::vector<double>& times);

/// Integrates du/dt = (i eps - 2 gamma(t)) u with gamma = Q'/2 from central
/// differences of the quadrature.
CoherenceSeries tcl_coherence(const BathSpec& bath, double epsilon, const std::vector<double>& times);

}  // namespace fracdyn
