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

namespace fracdyn {

/// Order of a Caputo derivative, restricted to (0, 1].
class FractionalOrder {
 public:
  /// Throws DomainError unless 0 < alpha <= 1.
  explicit FractionalOrder(double alpha);

  double value() const noexcept { return alpha_; }
  bool is_one() const noexcept { return alpha_ == 1.0; }

  friend bool operator==(FractionalOrder, FractionalOrder) = default;

 private:
  double alpha_;
};

/// Gamma function. Throws DomainError at the poles 0, -1, -2, ...
double gamma_fn(double x);

/// 1 / Gamma(x), equal to zero at the poles.
double rgamma(double x);

/// Mittag-Leffler function E_alpha(z) = sum_n z^n / Gamma(alpha n + 1).
///
/// Uses the power series for |z| <= 1 and for z > 0. For z < -1 the value is
/// computed from the Laplace-type integral representation on the positive
/// real axis, which is free of the cancellation that ruins the series.
double mittag_leffler(FractionalOrder alpha, double z);

/// Complex-argument Mittag-Leffler function for 0 < alpha <= 1.
///
/// Series for |z| <= 1; otherwise the integral representation plus the
/// exponential residue when |arg z| < alpha pi. Near the ray |arg z| = alpha pi
/// the representation is singular and the value is taken from the Laplace
/// transform of the M-Wright function (requires Re z <= 0).
std::complex<double> mittag_leffler(FractionalOrder alpha, std::complex<double> z);

struct PartialSum {
  double value;
  double bound;
};

/// Truncated Mittag-Leffler series P_N(z) = sum_{n=0..N} z^n / Gamma(alpha n + 1)
/// and the remainder bound |z|^{N+1} / Gamma(alpha (N+1) + 1).
PartialSum ml_partial_sum(FractionalOrder alpha, double z, int n_terms);

/// M-Wright function M_alpha(z), z >= 0, 0 < alpha < 1.
///
/// M_alpha is a probability density on [0, inf) with Laplace transform
/// E_alpha(-s). Small arguments use the series; elsewhere a Zolotarev-type
/// integral over (0, pi) with a positive integrand is used.
double m_wright(FractionalOrder alpha, double z);

/// Upper tail mass of the M-Wright density, int_z^inf M_alpha(y) dy.
double m_wright_tail(FractionalOrder alpha, double z);

}  // namespace fracdyn
