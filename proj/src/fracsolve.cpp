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

#include "fracdyn/fracsolve.hpp"

#include <cmath>
#include <string>

#include <Eigen/LU>

#include "fracdyn/errors.hpp"

namespace fracdyn {

namespace {

void check_grid(double h, int n_steps) {
  if (!(h > 0.0) || !std::isfinite(h)) throw DomainError("fam_solve: step h must be positive");
  if (n_steps < 1) throw DomainError("fam_solve: need at least one step");
}

// x^p with 0^0 = 1.
double pw(double x, double p) { return x == 0.0 ? (p == 0.0 ? 1.0 : 0.0) : std::pow(x, p); }

}  // namespace

std::vector<double> predictor_weights(WeightScheme scheme, FractionalOrder alpha, int n) {
  if (n < 0) throw DomainError("predictor_weights: n must be nonnegative");
  const double a = alpha.value();
  std::vector<double> b(n + 1);
  for (int j = 0; j <= n; ++j) {
    if (alpha.is_one()) {
      b[j] = 1.0;  // rectangle rule; the printed exponent 1 - alpha degenerates here
    } else {
      const double p = scheme == WeightScheme::PaperPrinted ? 1.0 - a : a;
      b[j] = pw(j + 1.0, p) - pw(j, p);
    }
  }
  return b;
}

double interior_corrector_weight(WeightScheme scheme, FractionalOrder alpha, int m) {
  if (m < 1) throw DomainError("interior_corrector_weight: lag must be >= 1");
  const double a = alpha.value();
  if (scheme == WeightScheme::PaperPrinted) {
    if (alpha.is_one()) return 1.0;
    return std::pow(m + 1.0, a) - 2.0 * std::pow(m, a) + std::pow(m - 1.0, a);
  }
  return std::pow(m + 1.0, a + 1.0) - 2.0 * std::pow(m, a + 1.0) + std::pow(m - 1.0, a + 1.0);
}

double corrector_prefactor(WeightScheme scheme, FractionalOrder alpha, double h) {
  const double a = alpha.value();
  return scheme == WeightScheme::PaperPrinted ? std::pow(h, a) * rgamma(1.0 + a) : std::pow(h, a) * rgamma(a + 2.0);
}

double implicit_weight(WeightScheme scheme, FractionalOrder alpha) {
  return scheme == WeightScheme::PaperPrinted && alpha.is_one() ? 0.5 : 1.0;
}

std::vector<double> corrector_weights(WeightScheme scheme, FractionalOrder alpha, int n) {
  if (n < 0) throw DomainError("corrector_weights: n must be nonnegative");
  const double a = alpha.value();
  std::vector<double> w(n + 1);
  if (scheme == WeightScheme::StandardDFF) {
    w[0] = std::pow(n, a + 1.0) - (n - a) * std::pow(n + 1.0, a);
    for (int k = 1; k <= n; ++k) w[k] = interior_corrector_weight(scheme, alpha, n - k + 1);
    return w;
  }
  if (alpha.is_one()) {
    // Classical trapezoid: 1/2 at both ends (the new point is implicit).
    for (int k = 0; k <= n; ++k) w[k] = k == 0 ? 0.5 : 1.0;
    return w;
  }
  // a_{n-k}: endpoints a_n = 1^alpha and a_0 = 1^alpha - 0^alpha, interior lag n - k.
  for (int k = 0; k <= n; ++k) w[k] = (k == 0 || k == n) ? 1.0 : interior_corrector_weight(scheme, alpha, n - k);
  return w;
}

namespace {

// The right-hand side f = L x and the implicit solve (I - c L)^{-1} for scalar
// and matrix problems.
struct ScalarProblem {
  using Vec = double;
  double lambda;
  double c;
  Vec apply(const Vec& x) const { return -lambda * x; }
  Vec solve(const Vec& r) const { return r / (1.0 + c * lambda); }
  static Vec zero_like(const Vec&) { return 0.0; }
};

struct MatrixProblem {
  using Vec = CVector;
  CMatrix m;
  Eigen::PartialPivLU<CMatrix> lu;
  MatrixProblem(const CMatrix& mat, double c) : m(mat), lu(CMatrix::Identity(mat.rows(), mat.cols()) - c * mat) {}
  Vec apply(const Vec& x) const { return m * x; }
  Vec solve(const Vec& r) const { return lu.solve(r); }
  static Vec zero_like(const Vec& x) { return Vec::Zero(x.size()); }
};

template <class P>
std::vector<typename P::Vec> dense_run(const P& prob, WeightScheme scheme, FractionalOrder alpha, double c,
                                       int n_steps, const typename P::Vec& x0) {
  using Vec = typename P::Vec;
  const double a = alpha.value();
  // Interior weights by lag, tabulated once.
  std::vector<double> inter(n_steps + 2, 0.0);
  for (int m = 1; m <= n_steps + 1; ++m) inter[m] = interior_corrector_weight(scheme, alpha, m);

  std::vector<Vec> x{x0};
  std::vector<Vec> f{prob.apply(x0)};
  x.reserve(n_steps + 1);
  f.reserve(n_steps + 1);
  for (int n = 0; n < n_steps; ++n) {
    Vec s = P::zero_like(x0);
    if (scheme == WeightScheme::StandardDFF) {
      s += (std::pow(n, a + 1.0) - (n - a) * std::pow(n + 1.0, a)) * f[0];
      for (int k = 1; k <= n; ++k) s += inter[n - k + 1] * f[k];
    } else if (alpha.is_one()) {
      s += 0.5 * f[0];
      for (int k = 1; k <= n; ++k) s += f[k];
    } else {
      s += f[0];
      if (n >= 1) s += f[n];
      for (int k = 1; k < n; ++k) s += inter[n - k] * f[k];
    }
    Vec rhs = x0 + c * s;
    x.push_back(prob.solve(rhs));
    f.push_back(prob.apply(x.back()));
  }
  return x;
}

// History integral over [t_n, t_{n+1}] of exp(-xi (t_{n+1} - tau)) times the
// linear interpolant of f: weights for f_n and f_{n+1}.
struct ExpWeights {
  double decay, w_old, w_new;
};

ExpWeights exp_weights(double xi, double h) {
  const double x = xi * h;
  if (x == 0.0) return {1.0, 0.5 * h, 0.5 * h};
  const double e0 = -std::expm1(-x) / xi;
  // e1 = h (1 - e^{-x}(1 + x)) / x^2
  double e1;
  if (x < 1e-3) {
    e1 = h * (0.5 - x / 3.0 + x * x / 8.0 - x * x * x / 30.0);
  } else {
    e1 = h * (1.0 - std::exp(-x) * (1.0 + x)) / (x * x);
  }
  return {std::exp(-x), e1, e0 - e1};
}

template <class P>
std::vector<typename P::Vec> soe_run(const P& prob, FractionalOrder alpha, double h, int n_steps,
                                     const typename P::Vec& x0, const SOEKernel& soe) {
  using Vec = typename P::Vec;
  const double a = alpha.value();
  const double c = std::pow(h, a) * rgamma(a + 2.0);
  std::vector<ExpWeights> ew;
  ew.reserve(soe.terms.size());
  for (const auto& q : soe.terms) ew.push_back(exp_weights(q.rate, h));

  // acc[q] = int_0^{t_n} exp(-xi_q (t_n - tau)) f(tau) dtau
  std::vector<Vec> acc(soe.terms.size(), P::zero_like(x0));
  std::vector<Vec> x{x0};
  x.reserve(n_steps + 1);
  Vec f_prev = prob.apply(x0);
  for (int n = 0; n < n_steps; ++n) {
    // Remote history [0, t_n] via the kernel at lags >= h; last interval exactly.
    Vec s = P::zero_like(x0);
    for (std::size_t q = 0; q < acc.size(); ++q) s += (soe.terms[q].weight * ew[q].decay) * acc[q];
    Vec rhs = x0 + s + (c * a) * f_prev;
    x.push_back(prob.solve(rhs));
    const Vec f_new = prob.apply(x.back());
    for (std::size_t q = 0; q < acc.size(); ++q)
      acc[q] = ew[q].decay * acc[q] + ew[q].w_old * f_prev + ew[q].w_new * f_new;
    f_prev = f_new;
  }
  return x;
}

void check_soe(const SOEKernel& soe, FractionalOrder alpha, double h, int n_steps) {
  if (!(soe.alpha == alpha)) throw ValidationError("fam_solve_soe: SOE kernel order does not match alpha");
  if (alpha.is_one()) return;
  const double span = h * n_steps;
  if (soe.t_min > h * (1.0 + 1e-12) || soe.t_max < span * (1.0 - 1e-12))
    throw ValidationError("fam_solve_soe: SOE kernel must cover [h, N h]");
}

FracTrajectory matrix_trajectory(std::vector<CVector> xs, FractionalOrder alpha, double h, WeightScheme scheme,
                                 int dim) {
  FracTrajectory tr{alpha, h, scheme, {}, {}};
  tr.states.reserve(xs.size());
  for (std::size_t n = 0; n < xs.size(); ++n) {
    CMatrix rho = unvec(xs[n], dim);
    try {
      DensityMatrix(rho, 1e-5, 1e-5);
    } catch (const ValidationError& e) {
      throw InstabilityError("fam_solve: state left the density matrices at step " + std::to_string(n) + ": " +
                             e.what());
    }
    tr.states.push_back(std::move(rho));
  }
  return tr;
}

}  // namespace

FracTrajectory fam_solve(double lambda, FractionalOrder alpha, double h, int n_steps, double init,
                         WeightScheme scheme) {
  check_grid(h, n_steps);
  if (!(lambda > 0.0)) throw DomainError("fam_solve: rate lambda must be positive");
  const double c = corrector_prefactor(scheme, alpha, h);
  const ScalarProblem p{lambda, c * implicit_weight(scheme, alpha)};
  return FracTrajectory{alpha, h, scheme, dense_run(p, scheme, alpha, c, n_steps, init), {}};
}

FracTrajectory fam_solve(const GKSLGenerator& gen, FractionalOrder alpha, double h, int n_steps,
                         const DensityMatrix& init, WeightScheme scheme) {
  check_grid(h, n_steps);
  if (init.dim() != gen.dim()) throw ValidationError("fam_solve: dimension mismatch");
  const double c = corrector_prefactor(scheme, alpha, h);
  const MatrixProblem p(build_superoperator(gen).matrix, c * implicit_weight(scheme, alpha));
  return matrix_trajectory(dense_run(p, scheme, alpha, c, n_steps, vec(init.matrix())), alpha, h, scheme, gen.dim());
}

FracTrajectory fam_solve_soe(double lambda, FractionalOrder alpha, double h, int n_steps, double init,
                             const SOEKernel& soe, WeightScheme scheme) {
  check_grid(h, n_steps);
  if (!(lambda > 0.0)) throw DomainError("fam_solve_soe: rate lambda must be positive");
  if (scheme != WeightScheme::StandardDFF)
    throw ValidationError("fam_solve_soe: history compression is defined for StandardDFF weights only");
  check_soe(soe, alpha, h, n_steps);
  const ScalarProblem p{lambda, corrector_prefactor(scheme, alpha, h)};
  return FracTrajectory{alpha, h, scheme, soe_run(p, alpha, h, n_steps, init, soe), {}};
}

FracTrajectory fam_solve_soe(const GKSLGenerator& gen, FractionalOrder alpha, double h, int n_steps,
                             const DensityMatrix& init, const SOEKernel& soe, WeightScheme scheme) {
  check_grid(h, n_steps);
  if (init.dim() != gen.dim()) throw ValidationError("fam_solve_soe: dimension mismatch");
  if (scheme != WeightScheme::StandardDFF)
    throw ValidationError("fam_solve_soe: history compression is defined for StandardDFF weights only");
  check_soe(soe, alpha, h, n_steps);
  const MatrixProblem p(build_superoperator(gen).matrix, corrector_prefactor(scheme, alpha, h));
  return matrix_trajectory(soe_run(p, alpha, h, n_steps, vec(init.matrix()), soe), alpha, h, scheme, gen.dim());
}

DensityMatrix ml_propagate(const GKSLGenerator& gen, FractionalOrder alpha, double t, const DensityMatrix& init) {
  if (!(t >= 0.0)) throw DomainError("ml_propagate: t must be nonnegative");
  if (init.dim() != gen.dim()) throw ValidationError("ml_propagate: dimension mismatch");
  if (t == 0.0) return init;
  const CMatrix m = build_superoperator(gen).matrix;
  Eigen::ComplexEigenSolver<CMatrix> es(m);
  if (es.info() != Eigen::Success) throw ValidationError("ml_propagate: eigendecomposition failed; use fam_solve");
  const CMatrix& v = es.eigenvectors();
  Eigen::JacobiSVD<CMatrix> svd(v);
  const auto& sv = svd.singularValues();
  const double cond = sv(0) / sv(sv.size() - 1);
  if (!(cond < 1e8))
    throw ValidationError("ml_propagate: generator not safely diagonalizable (condition number " +
                          std::to_string(cond) + "); use fam_solve");
  CVector c = v.partialPivLu().solve(vec(init.matrix()));
  const double ta = std::pow(t, alpha.value());
  for (Eigen::Index j = 0; j < c.size(); ++j) {
    const cplx lam = es.eigenvalues()(j);
    const double scale = std::max(1.0, std::abs(lam));
    cplx e;
    if (std::abs(lam) <= 1e-13 * scale) {
      e = 1.0;
    } else if (std::abs(lam.imag()) <= 1e-12 * scale) {
      e = mittag_leffler(alpha, lam.real() * ta);
    } else {
      e = mittag_leffler(alpha, lam * ta);
    }
    c(j) *= e;
  }
  const CMatrix out = unvec(v * c, gen.dim());
  try {
    return DensityMatrix(out, 1e-7, 1e-7);
  } catch (const ValidationError& e) {
    throw InstabilityError(std::string("ml_propagate: ") + e.what());
  }
}

}  // namespace fracdyn
