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

#include <cmath>
#include <numbers>
#include <random>
#include <vector>

#include "doctest.h"
#include "fracdyn/errors.hpp"
#include "fracdyn/kernels.hpp"
#include "quad.hpp"

using namespace fracdyn;

namespace {

std::vector<double> logspace(double a, double b, int n) {
  std::vector<double> v(n);
  for (int i = 0; i < n; ++i) v[i] = a * std::pow(b / a, double(i) / (n - 1));
  return v;
}

}  // namespace

TEST_CASE("kernel_eval examples") {
  CHECK(kernel_eval(KernelKind::Volterra, FractionalOrder(0.5), 1.0) ==
        doctest::Approx(0.5641895835477563).epsilon(1e-14));
  CHECK(kernel_eval(KernelKind::Volterra, FractionalOrder(1.0), 7.3) == 1.0);
  CHECK(kernel_eval(KernelKind::CaputoInner, FractionalOrder(0.5), 4.0) ==
        doctest::Approx(0.28209479177387814).epsilon(1e-14));
  CHECK(kernel_eval(KernelKind::DifferentialConvolution, FractionalOrder(0.5), 1.0) ==
        doctest::Approx(-0.5 / std::sqrt(std::numbers::pi)).epsilon(1e-14));
  CHECK_THROWS_AS(kernel_eval(KernelKind::Volterra, FractionalOrder(0.5), 0.0), DomainError);
  CHECK_THROWS_AS(kernel_eval(KernelKind::CaputoInner, FractionalOrder(0.5), -1.0), DomainError);
}

TEST_CASE("differential kernel is the derivative of the Volterra kernel") {
  for (double alpha : {0.3, 0.5, 0.9}) {
    const FractionalOrder a(alpha);
    for (double t : logspace(0.5, 50.0, 40)) {
      const double h = 1e-4 * t;
      const double d = (kernel_eval(KernelKind::Volterra, a, t + h) - kernel_eval(KernelKind::Volterra, a, t - h)) / (2 * h);
      const double k = kernel_eval(KernelKind::DifferentialConvolution, a, t);
      CHECK(std::abs(d - k) <= 1e-6 * std::abs(k));
    }
  }
}

TEST_CASE("Laplace transform of the Volterra kernel is s^-alpha") {
  for (double alpha : {0.3, 0.5, 0.9}) {
    const FractionalOrder a(alpha);
    for (double s : {0.5, 1.0, 2.0}) {
      // Singular head handled by tanh-sinh; exponential tail by exp-sinh.
      const auto f = [&](double t) { return std::exp(-s * t) * kernel_eval(KernelKind::Volterra, a, t); };
      const double v = quad::finite(f, 0.0, 1.0) + quad::upper(f, 1.0);
      CHECK(std::abs(v - std::pow(s, -alpha)) <= 1e-6 * std::pow(s, -alpha));
    }
  }
}

TEST_CASE("soe_compress") {
  SUBCASE("moderate range") {
    const auto k = soe_compress(FractionalOrder(0.5), 1e-2, 1e2, 1e-6);
    CHECK(k.terms.size() <= 80);
    CHECK(k.audit(400) <= 1e-6);
    for (std::size_t i = 1; i < k.terms.size(); ++i) CHECK(k.terms[i].rate > k.terms[i - 1].rate);
  }
  SUBCASE("fresh random audit grid") {
    std::mt19937_64 rng(20261018);
    for (double alpha : {0.2, 0.5, 0.8, 0.95}) {
      const FractionalOrder a(alpha);
      const auto k = soe_compress(a, 1e-3, 1e3, 1e-8);
      std::uniform_real_distribution<double> u(std::log(1e-3), std::log(1e3));
      for (int i = 0; i < 300; ++i) {
        const double t = std::exp(u(rng));
        const double exact = kernel_eval(KernelKind::Volterra, a, t);
        CHECK(std::abs(k(t) - exact) <= 1e-8 * exact);
      }
    }
  }
  SUBCASE("alpha = 1 is a single constant term") {
    const auto k = soe_compress(FractionalOrder(1.0), 0.1, 10.0, 1e-3);
    REQUIRE(k.terms.size() == 1);
    CHECK(k.terms[0].weight == 1.0);
    CHECK(k.terms[0].rate == 0.0);
  }
  SUBCASE("degenerate range") {
    const auto k = soe_compress(FractionalOrder(0.5), 1.0, 1.0, 1e-3);
    CHECK(k.audit() <= 1e-3);
  }
  SUBCASE("budget exhaustion") {
    CHECK_THROWS_AS(soe_compress(FractionalOrder(0.5), 1e-12, 1e12, 1e-15), AccuracyError);
  }
  CHECK_THROWS_AS(soe_compress(FractionalOrder(0.5), 2.0, 1.0, 1e-3), DomainError);
  CHECK_THROWS_AS(soe_compress(FractionalOrder(0.5), 1.0, 2.0, 0.0), DomainError);
}

TEST_CASE("complete_monotonicity_probe") {
  const auto grid = logspace(0.1, 10.0, 50);
  CHECK(complete_monotonicity_probe(FractionalOrder(0.5), KernelKind::Volterra, grid, 4));
  CHECK(complete_monotonicity_probe(FractionalOrder(1.0), KernelKind::Volterra, grid, 3));
  CHECK_FALSE(complete_monotonicity_probe(FractionalOrder(0.5), KernelKind::DifferentialConvolution, grid, 1));
  CHECK(complete_monotonicity_probe(
      [](double t) { return -kernel_eval(KernelKind::DifferentialConvolution, FractionalOrder(0.5), t); }, grid, 1));
  // An oscillating function is not completely monotone.
  CHECK_FALSE(complete_monotonicity_probe([](double t) { return 2.0 + std::cos(t); }, grid, 2));
  CHECK_THROWS_AS(complete_monotonicity_probe(FractionalOrder(0.5), KernelKind::Volterra, std::vector<double>{1, 2}, 2),
                  DomainError);
}
