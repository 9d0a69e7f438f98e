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

#include "fracdyn/specfun.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include <boost/math/special_functions/gamma.hpp>

#include "fracdyn/errors.hpp"
#include "quad.hpp"

namespace fracdyn {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr int kMaxSeriesTerms = 20000;

bool is_nonpositive_integer(double x) { return x <= 0.0 && x == std::floor(x); }

// Neumaier's variant of compensated summation.
class CompensatedSum {
 public:
  void add(double v) {
    const double t = sum_ + v;
    if (std::abs(sum_) >= std::abs(v)) {
      comp_ += (sum_ - t) + v;
    } else {
      comp_ += (v - t) + sum_;
    }
    sum_ = t;
  }
  double value() const { return sum_ + comp_; }

 private:
  double sum_ = 0.0;
  double comp_ = 0.0;
};

struct SeriesResult {
  double value;
  double max_term;
};

// sum_n z^n / Gamma(alpha n + 1) until the terms are negligible and decreasing.
SeriesResult ml_series(double alpha, double z) {
  CompensatedSum sum;
  double max_term = 0.0;
  const double log_abs_z = std::log(std::abs(z));
  double prev = quad::kInf;
  for (int n = 0; n < kMaxSeriesTerms; ++n) {
    double term = 1.0;
    if (n > 0) {
      const double mag = std::exp(n * log_abs_z - boost::math::lgamma(alpha * n + 1.0));
      term = (z < 0.0 && (n & 1)) ? -mag : mag;
    }
    sum.add(term);
    const double a = std::abs(term);
    max_term = std::max(max_term, a);
    if (n > 2 && a <= prev && a <= 1e-17 * std::max(1.0, std::abs(sum.value()))) {
      return {sum.value(), max_term};
    }
    prev = a;
  }
  throw AccuracyError("mittag_leffler: series did not converge", std::abs(prev));
}

std::complex<double> ml_series_complex(double alpha, std::complex<double> z) {
  CompensatedSum re;
  CompensatedSum im;
  std::complex<double> power(1.0, 0.0);
  double prev = quad::kInf;
  for (int n = 0; n < kMaxSeriesTerms; ++n) {
    const std::complex<double> term = power * rgamma(alpha * n + 1.0);
    re.add(term.real());
    im.add(term.imag());
    const double a = std::abs(term);
    const double scale = std::max(1.0, std::abs(std::complex<double>(re.value(), im.value())));
    if (n > 2 && a <= prev && a <= 1e-17 * scale) return {re.value(), im.value()};
    prev = a;
    power *= z;
  }
  throw AccuracyError("mittag_leffler: complex series did not converge", prev);
}

// E_alpha(-x), x > 0, from
//   E_alpha(-x) = x sin(pi alpha) / (alpha pi) * int_0^inf exp(-r^{1/alpha}) dr
//                 / (r^2 + 2 r x cos(pi alpha) + x^2).
// The denominator is smallest at r = -x cos(pi alpha) when alpha > 1/2; the
// integration is split there and at r = x so the peak sits on a panel edge.
double ml_negative_integral(double alpha, double x) {
  const double s = std::sin(kPi * alpha);
  const double c = std::cos(kPi * alpha);
  const double inv_alpha = 1.0 / alpha;
  auto f = [&](double r) {
    const double d = (r + x * c) * (r + x * c) + x * x * s * s;
    return std::exp(-std::pow(r, inv_alpha)) / d;
  };
  double split_lo = std::max(0.0, -x * c);
  double split_hi = x;
  if (split_lo > split_hi) std::swap(split_lo, split_hi);
  double total = 0.0;
  if (split_lo > 0.0) total += quad::finite(f, 0.0, split_lo, 1e-12);
  if (split_hi > split_lo) total += quad::finite(f, split_lo, split_hi, 1e-12);
  total += quad::upper(f, split_hi, 1e-12);
  return x * s / (alpha * kPi) * total;
}

// Integral part of E_alpha(z) for complex z off the ray |arg z| = alpha pi:
//   -(sin(pi alpha) / (alpha pi)) int_0^inf exp(-r^{1/alpha}) z / (r^2 - 2 r z cos(pi alpha) + z^2) dr.
std::complex<double> ml_complex_integral(double alpha, std::complex<double> z) {
  const double s = std::sin(kPi * alpha);
  const double c = std::cos(kPi * alpha);
  const double inv_alpha = 1.0 / alpha;
  auto kernel = [&](double r) {
    return std::exp(-std::pow(r, inv_alpha)) * z / (r * r - 2.0 * r * z * c + z * z);
  };
  const double split = std::abs(z);
  auto re = [&](double r) { return kernel(r).real(); };
  auto im = [&](double r) { return kernel(r).imag(); };
  const double vr = quad::finite(re, 0.0, split) + quad::upper(re, split);
  const double vi = quad::finite(im, 0.0, split) + quad::upper(im, split);
  return -(s / (alpha * kPi)) * std::complex<double>(vr, vi);
}

// Zolotarev-type kernel
//   a(phi) = (sin(alpha phi) / sin(phi))^{1/(1-alpha)} sin((1-alpha) phi) / sin(alpha phi)
// with sin(phi) supplied separately so it stays accurate near phi = pi.
double zolotarev_kernel(double alpha, double phi, double sin_phi) {
  const double sa = std::sin(alpha * phi);
  return std::pow(sa / sin_phi, 1.0 / (1.0 - alpha)) * std::sin((1.0 - alpha) * phi) / sa;
}

double sin_from_endpoint(double phi, double dist) {
  // tanh-sinh hands over the signed distance to the nearer endpoint.
  return dist > 0.0 ? std::sin(dist) : std::sin(phi);
}

double m_wright_integral(double alpha, double z) {
  const double c = std::pow(z, 1.0 / (1.0 - alpha));
  auto f = [&](double phi, double dist) {
    if (phi <= 0.0) {
      const double a0 = std::pow(alpha, alpha / (1.0 - alpha)) * (1.0 - alpha);
      return a0 * std::exp(-c * a0);
    }
    const double a = zolotarev_kernel(alpha, phi, sin_from_endpoint(phi, dist));
    const double e = c * a;
    if (!(e < 700.0)) return 0.0;
    return a * std::exp(-e);
  };
  const double v = quad::finite(f, 0.0, kPi, 1e-13);
  if (v == 0.0) return 0.0;  // far tail; the prefactor may have overflowed
  return std::pow(z, alpha / (1.0 - alpha)) / (kPi * (1.0 - alpha)) * v;
}

}  // namespace

FractionalOrder::FractionalOrder(double alpha) : alpha_(alpha) {
  if (!(alpha > 0.0 && alpha <= 1.0)) {
    std::ostringstream os;
    os << "fractional order must lie in (0, 1], got " << alpha;
    throw DomainError(os.str());
  }
}

double gamma_fn(double x) {
  if (is_nonpositive_integer(x)) {
    std::ostringstream os;
    os << "gamma_fn: pole at x = " << x;
    throw DomainError(os.str());
  }
  return boost::math::tgamma(x);
}

double rgamma(double x) {
  if (is_nonpositive_integer(x)) return 0.0;
  if (x > 171.0) return std::exp(-boost::math::lgamma(x));
  return 1.0 / boost::math::tgamma(x);
}

double mittag_leffler(FractionalOrder order, double z) {
  const double alpha = order.value();
  if (z == 0.0) return 1.0;
  if (order.is_one()) return std::exp(z);
  if (z > 0.0 || z >= -1.0) return ml_series(alpha, z).value;
  return ml_negative_integral(alpha, -z);
}

std::complex<double> mittag_leffler(FractionalOrder order, std::complex<double> z) {
  const double alpha = order.value();
  if (z.imag() == 0.0) return {mittag_leffler(order, z.real()), 0.0};
  if (order.is_one()) return std::exp(z);
  if (std::abs(z) <= 1.0) return ml_series_complex(alpha, z);

  const double theta = std::abs(std::arg(z));
  constexpr double kRayBand = 0.05;
  if (std::abs(theta - alpha * kPi) > kRayBand) {
    std::complex<double> v = ml_complex_integral(alpha, z);
    if (theta < alpha * kPi) v += std::exp(std::pow(z, 1.0 / alpha)) / alpha;
    return v;
  }
  if (z.real() <= 0.0) {
    // E_alpha(z) = int_0^inf M_alpha(y) exp(z y) dy for Re z <= 0.
    auto re = [&](double y) { return m_wright(order, y) * std::exp(z.real() * y) * std::cos(z.imag() * y); };
    auto im = [&](double y) { return m_wright(order, y) * std::exp(z.real() * y) * std::sin(z.imag() * y); };
    // Panels no wider than half a period; stop once the remaining M-Wright
    // mass is negligible.
    const double width = std::min(0.5, kPi / std::abs(z.imag()));
    double y = 0.0;
    double vr = 0.0;
    double vi = 0.0;
    while (m_wright_tail(order, y) > 1e-17) {
      vr += quad::legendre(re, y, y + width);
      vi += quad::legendre(im, y, y + width);
      y += width;
    }
    return {vr, vi};
  }
  // Re z > 0 near the ray only arises for generators with growing modes.
  const std::complex<double> v = ml_series_complex(alpha, z);
  if (std::abs(z) <= 3.0) return v;
  throw AccuracyError("mittag_leffler: argument near |arg z| = alpha pi with Re z > 0",
                      std::exp(std::abs(z)) * 1e-16);
}

PartialSum ml_partial_sum(FractionalOrder order, double z, int n_terms) {
  if (n_terms < 0) throw DomainError("ml_partial_sum: N must be non-negative");
  const double alpha = order.value();
  CompensatedSum sum;
  double power = 1.0;
  for (int n = 0; n <= n_terms; ++n) {
    sum.add(power * rgamma(alpha * n + 1.0));
    power *= z;
  }
  const double bound = std::pow(std::abs(z), n_terms + 1) * rgamma(alpha * (n_terms + 1) + 1.0);
  return {sum.value(), bound};
}

double m_wright(FractionalOrder order, double z) {
  const double alpha = order.value();
  if (order.is_one()) throw DomainError("m_wright: alpha = 1 degenerates to a point mass");
  if (!(z >= 0.0)) throw DomainError("m_wright: argument must be non-negative");
  if (z == 0.0) return rgamma(1.0 - alpha);

  if (z <= 1.0) {
    CompensatedSum sum;
    double factor = 1.0;  // (-z)^n / n!
    int small_run = 0;
    for (int n = 0; n < 400; ++n) {
      if (n > 0) factor *= -z / n;
      const double term = factor * rgamma(1.0 - alpha - alpha * n);
      if (std::abs(term) > 1e2) break;  // cancellation would dominate
      sum.add(term);
      small_run = std::abs(term) < 1e-17 ? small_run + 1 : 0;
      if (n > 2 && small_run >= 3) return std::max(0.0, sum.value());
    }
  }
  return m_wright_integral(alpha, z);
}

double m_wright_tail(FractionalOrder order, double z) {
  const double alpha = order.value();
  if (order.is_one()) throw DomainError("m_wright_tail: alpha = 1 degenerates to a point mass");
  if (!(z >= 0.0)) throw DomainError("m_wright_tail: argument must be non-negative");
  if (z == 0.0) return 1.0;
  const double c = std::pow(z, 1.0 / (1.0 - alpha));
  auto f = [&](double phi, double dist) {
    if (phi <= 0.0) {
      const double a0 = std::pow(alpha, alpha / (1.0 - alpha)) * (1.0 - alpha);
      return std::exp(-c * a0);
    }
    const double e = c * zolotarev_kernel(alpha, phi, sin_from_endpoint(phi, dist));
    return e < 700.0 ? std::exp(-e) : 0.0;
  };
  return quad::finite(f, 0.0, kPi, 1e-13) / kPi;
}

}  // namespace fracdyn
