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

#include <chrono>
#include <cmath>

#include "doctest.h"
#include "fracdyn/errors.hpp"
#include "fracdyn/fracsolve.hpp"

using namespace fracdyn;

namespace {

double empirical_order(WeightScheme scheme, double alpha) {
  const FractionalOrder a(alpha);
  const double exact = mittag_leffler(a, -1.0);
  double err[3];
  int i = 0;
  for (int n : {50, 100, 200}) err[i++] = std::abs(fam_solve(1.0, a, 1.0 / n, n, 1.0, scheme).scalar.back() - exact);
  return std::log2(err[1] / err[2]);
}

}  // namespace

TEST_CASE("weights") {
  const auto b = predictor_weights(WeightScheme::PaperPrinted, FractionalOrder(0.5), 1);
  REQUIRE(b.size() == 2);
  CHECK(b[0] == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(b[1] == doctest::Approx(0.41421356237309515).epsilon(1e-14));
  for (auto s : {WeightScheme::StandardDFF, WeightScheme::PaperPrinted}) {
    for (double w : predictor_weights(s, FractionalOrder(1.0), 2)) CHECK(w == 1.0);
  }
  CHECK(interior_corrector_weight(WeightScheme::StandardDFF, FractionalOrder(0.5), 1) ==
        doctest::Approx(0.8284271247461903).epsilon(1e-14));
  CHECK(interior_corrector_weight(WeightScheme::PaperPrinted, FractionalOrder(0.5), 1) ==
        doctest::Approx(-0.5857864376269049).epsilon(1e-14));

  // alpha = 1: both reduce to the trapezoid rule h (f_0/2 + f_1 + ... + f_n + f_{n+1}/2).
  for (auto s : {WeightScheme::StandardDFF, WeightScheme::PaperPrinted}) {
    const FractionalOrder one(1.0);
    const double c = corrector_prefactor(s, one, 0.1);
    const auto w = corrector_weights(s, one, 4);
    CHECK(c * w[0] == doctest::Approx(0.05));
    for (int k = 1; k <= 4; ++k) CHECK(c * w[k] == doctest::Approx(0.1));
    CHECK(c * implicit_weight(s, one) == doctest::Approx(0.05));
  }
  // DFF weights integrate the kernel exactly: c * (sum w + implicit) = t^alpha / Gamma(alpha + 1).
  const FractionalOrder a(0.6);
  const auto w = corrector_weights(WeightScheme::StandardDFF, a, 9);
  double s = implicit_weight(WeightScheme::StandardDFF, a);
  for (double x : w) s += x;
  CHECK(corrector_prefactor(WeightScheme::StandardDFF, a, 0.1) * s ==
        doctest::Approx(std::pow(1.0, 0.6) * rgamma(1.6)).epsilon(1e-13));
}

TEST_CASE("fam_solve scalar examples") {
  const auto r = fam_solve(1.0, FractionalOrder(1.0), 0.01, 100, 1.0);
  CHECK(r.scalar.front() == 1.0);
  CHECK(std::abs(r.scalar.back() - std::exp(-1.0)) <= 2e-4);
  // Trapezoid error model: ~ h^2/12 * t e^{-t}.
  CHECK(std::abs(r.scalar.back() - std::exp(-1.0)) <= 1e-4 * std::exp(-1.0));

  const auto h = fam_solve(1.0, FractionalOrder(0.5), 1.0 / 400, 400, 1.0);
  CHECK(std::abs(h.scalar.back() - 0.4275835761558070) <= 2e-4);
  CHECK_THROWS_AS(fam_solve(1.0, FractionalOrder(0.5), 0.0, 10, 1.0), DomainError);
  CHECK_THROWS_AS(fam_solve(-1.0, FractionalOrder(0.5), 0.1, 10, 1.0), DomainError);
}

TEST_CASE("convergence order") {
  for (double alpha : {0.4, 0.6, 0.8}) {
    CAPTURE(alpha);
    CHECK(empirical_order(WeightScheme::StandardDFF, alpha) >= 1.0 + alpha - 0.25);
    // The printed weights are inconsistent: the error does not decrease.
    CHECK(empirical_order(WeightScheme::PaperPrinted, alpha) < 0.5);
  }
}

TEST_CASE("linear stability") {
  for (double alpha : {0.3, 0.6, 0.9}) {
    for (double z : {0.1, 1.0, 10.0}) {
      const double h = 0.05;
      const double lambda = z / std::pow(h, alpha);
      const auto r = fam_solve(lambda, FractionalOrder(alpha), h, 2000, 1.0);
      for (double u : r.scalar) CHECK(std::abs(u) <= 1.0 + 1e-12);
    }
  }
}

TEST_CASE("matrix mode") {
  const double gamma = 0.25;
  const FractionalOrder a(0.5);
  const auto gen = dephasing_qubit(0.0, gamma);
  const auto rho0 = qubit_state_with_coherence(0.5);
  const auto m = fam_solve(gen, a, 0.01, 300, rho0);
  const auto s = fam_solve(2 * gamma, a, 0.01, 300, 1.0);
  REQUIRE(m.states.size() == s.scalar.size());
  CHECK((m.states[0] - rho0.matrix()).norm() == 0.0);
  for (std::size_t n = 0; n < s.scalar.size(); ++n) {
    CHECK(std::abs(qubit_coherence(m.states[n]) - 0.5 * s.scalar[n]) <= 1e-10);
    CHECK(std::abs(m.states[n].trace() - cplx(1.0)) <= 1e-9);
  }
  // Against the Mittag-Leffler propagator at t = 1, 2, 3.
  for (int n : {100, 200, 300}) {
    const auto ml = ml_propagate(gen, a, n * 0.01, rho0);
    CHECK(std::abs(qubit_coherence(ml.matrix()) - qubit_coherence(m.states[n])) <= 1e-3);
  }
  // Trace conservation with a generic generator and the printed weights too.
  CMatrix h(3, 3);
  h << 1, 0.2, 0, 0.2, -0.5, cplx(0, 0.3), 0, cplx(0, -0.3), 0;
  CMatrix l = CMatrix::Zero(3, 3);
  l(0, 2) = 1.0;
  const GKSLGenerator g3(h, {{l, 0.4}});
  CMatrix r3 = CMatrix::Identity(3, 3) / 3.0;
  for (auto sc : {WeightScheme::StandardDFF, WeightScheme::PaperPrinted}) {
    const auto tr = fam_solve(g3, FractionalOrder(0.7), 0.02, 200, DensityMatrix(r3), sc);
    for (const auto& x : tr.states) CHECK(std::abs(x.trace() - cplx(1.0)) <= 1e-9);
  }
}

TEST_CASE("ml_propagate") {
  const auto gen = dephasing_qubit(0.0, 0.5);
  const auto rho0 = qubit_state_with_coherence(cplx(0.3, 0.2));
  const auto r = ml_propagate(gen, FractionalOrder(0.5), 1.0, rho0);
  CHECK(std::abs(qubit_coherence(r.matrix()) - 0.4275835761558070 * cplx(0.3, 0.2)) <= 1e-12);
  CHECK((ml_propagate(gen, FractionalOrder(0.5), 0.0, rho0).matrix() - rho0.matrix()).norm() == 0.0);
  const auto g2 = dephasing_qubit(1.3, 0.2);
  const auto e = ml_propagate(g2, FractionalOrder(1.0), 2.5, rho0);
  CHECK((e.matrix() - semigroup_apply(build_superoperator(g2), 2.5, rho0).matrix()).cwiseAbs().maxCoeff() <= 1e-10);
  // Liouville pair with a fractional order goes through the complex Mittag-Leffler function.
  const auto lv = ml_propagate(g2, FractionalOrder(0.8), 1.0, rho0);
  const cplx z = cplx(-0.4, 1.3);
  CHECK(std::abs(qubit_coherence(lv.matrix()) - mittag_leffler(FractionalOrder(0.8), z) * cplx(0.3, 0.2)) <= 1e-12);
  // Amplitude damping with a coherent drive is non-normal but diagonalizable.
  CMatrix sm = CMatrix::Zero(2, 2);
  sm(1, 0) = 1.0;
  const GKSLGenerator damp(0.5 * pauli_x(), {{sm, 0.3}});
  const auto ad = ml_propagate(damp, FractionalOrder(1.0), 1.5, rho0);
  CHECK((ad.matrix() - semigroup_apply(build_superoperator(damp), 1.5, rho0).matrix()).cwiseAbs().maxCoeff() <= 1e-10);
}

TEST_CASE("fam_solve_soe") {
  const FractionalOrder a(0.5);
  const double h = 0.01;
  const int n = 1000;
  const auto soe = soe_compress(a, h, n * h, 1e-6);
  const auto dense = fam_solve(1.0, a, h, n, 1.0);
  const auto fast = fam_solve_soe(1.0, a, h, n, 1.0, soe);
  double dev = 0.0;
  for (int i = 0; i <= n; ++i) dev = std::max(dev, std::abs(dense.scalar[i] - fast.scalar[i]));
  CHECK(dev <= 1e-5);
  CHECK(dev <= 10 * soe.tol);

  const FractionalOrder one(1.0);
  const auto s1 = soe_compress(one, h, n * h, 1e-6);
  const auto d1 = fam_solve(1.0, one, h, n, 1.0);
  const auto f1 = fam_solve_soe(1.0, one, h, n, 1.0, s1);
  for (int i = 0; i <= n; ++i) CHECK(std::abs(d1.scalar[i] - f1.scalar[i]) <= 1e-12);

  // Matrix mode agrees with its scalar reduction.
  const auto gen = dephasing_qubit(0.0, 0.5);
  const auto m = fam_solve_soe(gen, a, h, n, qubit_state_with_coherence(0.5), soe);
  for (int i = 0; i <= n; ++i) CHECK(std::abs(qubit_coherence(m.states[i]) - 0.5 * fast.scalar[i]) <= 1e-10);

  CHECK_THROWS_AS(fam_solve_soe(1.0, a, h, n, 1.0, soe_compress(a, h, 1.0, 1e-6)), ValidationError);
  CHECK_THROWS_AS(fam_solve_soe(1.0, a, h, n, 1.0, soe, WeightScheme::PaperPrinted), ValidationError);
}
