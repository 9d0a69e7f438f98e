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

#include "fracdyn/subordination.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>
#include <thread>
#include <vector>

#include <unsupported/Eigen/MatrixFunctions>

#include "fracdyn/errors.hpp"
#include "quad.hpp"

namespace fracdyn {

OperationalClock::OperationalClock(FractionalOrder alpha, double t) : alpha_(alpha), t_(t) {
  if (alpha.is_one()) throw DomainError("OperationalClock: alpha must be < 1");
  if (!(t > 0.0) || !std::isfinite(t)) throw DomainError("OperationalClock: t must be positive");
}

double levy_density(const OperationalClock& clock, double u) {
  if (!(u >= 0.0)) throw DomainError("levy_density: u must be nonnegative");
  const double s = std::pow(clock.t(), clock.alpha().value());
  return m_wright(clock.alpha(), u / s) / s;
}

double sample_clock(const OperationalClock& clock, Stream& stream) {
  const double a = clock.alpha().value();
  const double v = std::numbers::pi * stream.uniform();
  const double w = stream.exponential();
  // log S = log sin(a V) - log(sin V)/a + (1-a)/a (log sin((1-a)V) - log W)
  const double log_s = std::log(std::sin(a * v)) - std::log(std::sin(v)) / a +
                       (1.0 - a) / a * (std::log(std::sin((1.0 - a) * v)) - std::log(w));
  return std::exp(a * (std::log(clock.t()) - log_s));
}

namespace {

// Smallest z (to 1%) with M-Wright tail mass below eps.
double tail_cut(FractionalOrder alpha, double eps) {
  double hi = 1.0;
  while (m_wright_tail(alpha, hi) > eps) {
    hi *= 2.0;
    if (hi > 1e6) throw AccuracyError("subordination: tail-mass rule unreachable", m_wright_tail(alpha, hi));
  }
  double lo = hi / 2.0;
  while (hi - lo > 0.01 * hi) {
    const double mid = 0.5 * (lo + hi);
    (m_wright_tail(alpha, mid) > eps ? lo : hi) = mid;
  }
  return hi;
}

// Evaluates exp(u M) either through the eigendecomposition (as a diagonal
// scaling, when well conditioned) or by the matrix exponential.
class MapEvaluator {
 public:
  explicit MapEvaluator(const CMatrix& m) : m_(m) {
    Eigen::ComplexEigenSolver<CMatrix> es(m);
    if (es.info() != Eigen::Success) return;
    Eigen::JacobiSVD<CMatrix> svd(es.eigenvectors());
    const auto& s = svd.singularValues();
    if (!(s(s.size() - 1) > 0.0) || s(0) / s(s.size() - 1) >= 1e8) return;
    spectral_ = true;
    v_ = es.eigenvectors();
    vinv_ = v_.inverse();
    lambda_ = es.eigenvalues();
  }

  // Accumulator shape: the eigenvalue-wise factors or the full map.
  CMatrix zero() const { return spectral_ ? CMatrix::Zero(lambda_.size(), 1) : CMatrix::Zero(m_.rows(), m_.cols()); }

  void add(CMatrix& acc, double weight, double u) const {
    if (spectral_) {
      for (Eigen::Index j = 0; j < lambda_.size(); ++j) acc(j, 0) += weight * std::exp(u * lambda_(j));
    } else {
      acc += weight * (u * m_).exp();
    }
  }

  CMatrix finish(const CMatrix& acc) const {
    if (!spectral_) return acc;
    return v_ * acc.col(0).asDiagonal() * vinv_;
  }

 private:
  CMatrix m_;
  bool spectral_ = false;
  CMatrix v_, vinv_;
  CVector lambda_;
};

}  // namespace

CMatrix subordinated_map(const GKSLGenerator& gen, FractionalOrder alpha, double t, const SubordinationQuad& quad) {
  if (!(t >= 0.0)) throw DomainError("subordinated_map: t must be nonnegative");
  const CMatrix m = build_superoperator(gen).matrix;
  const int d2 = static_cast<int>(m.rows());
  if (t == 0.0) return CMatrix::Identity(d2, d2);
  if (alpha.is_one()) return (t * m).exp();

  // In z = u / t^alpha the weight is M_alpha(z), independent of t.
  const double s = std::pow(t, alpha.value());
  const double z_max = tail_cut(alpha, quad.tail_mass);
  const double tail = m_wright_tail(alpha, z_max);
  const MapEvaluator ev(m);
  const auto& gl = quad::GaussLegendre20::get();

  const auto integrate = [&](int panels) {
    CMatrix acc = ev.zero();
    const double w = z_max / panels;
    for (int p = 0; p < panels; ++p) {
      const double a = p * w;
      for (int k = 0; k < quad::GaussLegendre20::kNodes; ++k) {
        const double z = a + 0.5 * w * (gl.x[k] + 1.0);
        ev.add(acc, 0.5 * w * gl.w[k] * m_wright(alpha, z), s * z);
      }
    }
    // The truncated tail is attributed to the cut point, keeping the total mass exact.
    ev.add(acc, tail, s * z_max);
    return acc;
  };

  CMatrix prev = integrate(quad.initial_panels);
  for (int panels = 2 * quad.initial_panels; panels <= quad.max_panels; panels *= 2) {
    CMatrix cur = integrate(panels);
    const double diff = (cur - prev).cwiseAbs().maxCoeff();
    if (diff <= quad.tol) return ev.finish(cur);
    prev = std::move(cur);
  }
  throw AccuracyError("subordinated_map: panel refinement did not converge", 0.0);
}

DensityMatrix subordinated_propagate(const GKSLGenerator& gen, FractionalOrder alpha, double t,
                                     const DensityMatrix& init, const SubordinationQuad& quad) {
  if (init.dim() != gen.dim()) throw ValidationError("subordinated_propagate: dimension mismatch");
  if (t == 0.0) return init;
  const CMatrix phi = subordinated_map(gen, alpha, t, quad);
  const CMatrix out = unvec(phi * vec(init.matrix()), gen.dim());
  try {
    return DensityMatrix(out, 1e-8, 1e-8);
  } catch (const ValidationError& e) {
    throw InstabilityError(std::string("subordinated_propagate: ") + e.what());
  }
}

namespace {

struct Moments {
  double n = 0.0, mean = 0.0, m2 = 0.0;

  // Chan et al. pairwise combination.
  void merge(const Moments& o) {
    if (o.n == 0.0) return;
    const double n_tot = n + o.n;
    const double delta = o.mean - mean;
    mean += delta * o.n / n_tot;
    m2 += o.m2 + delta * delta * n * o.n / n_tot;
    n = n_tot;
  }
};

constexpr std::int64_t kChunk = 4096;

}  // namespace

TrajectoryEstimate trajectory_estimate(const GKSLGenerator& gen, FractionalOrder alpha, double t,
                                       const DensityMatrix& init, const CMatrix& observable, std::int64_t n_samples,
                                       std::uint64_t seed, int n_threads) {
  if (n_samples < 2) throw DomainError("trajectory_estimate: need at least 2 samples");
  if (observable.rows() != gen.dim() || observable.cols() != gen.dim())
    throw ValidationError("trajectory_estimate: observable dimension mismatch");
  if ((observable - observable.adjoint()).cwiseAbs().maxCoeff() > 1e-12)
    throw ValidationError("trajectory_estimate: observable must be Hermitian");
  if (init.dim() != gen.dim()) throw ValidationError("trajectory_estimate: dimension mismatch");
  const OperationalClock clock(alpha, t);

  // tr[O rho] = (tr O / d) tr rho + tr[O0 rho] with O0 traceless; the first
  // term is constant along any trace-preserving flow and is kept exact.
  const int d = gen.dim();
  const double shift = observable.trace().real() / d;
  const CMatrix o0 = observable - shift * CMatrix::Identity(d, d);
  const bool trivial = o0.cwiseAbs().maxCoeff() == 0.0;
  const SemigroupFlow flow(build_superoperator(gen), init);

  const std::int64_t n_chunks = (n_samples + kChunk - 1) / kChunk;
  std::vector<Moments> chunks(n_chunks);
  const auto run_chunk = [&](std::int64_t c) {
    const std::int64_t lo = c * kChunk, hi = std::min(n_samples, lo + kChunk);
    std::vector<double> x;
    x.reserve(hi - lo);
    for (std::int64_t k = lo; k < hi; ++k) {
      Stream st(seed, static_cast<std::uint64_t>(k));
      const double u = sample_clock(clock, st);
      x.push_back(trivial ? shift : shift + (o0 * flow.at(u)).trace().real());
    }
    // Two-pass within the chunk.
    Moments m;
    m.n = static_cast<double>(x.size());
    for (double v : x) m.mean += v;
    m.mean /= m.n;
    for (double v : x) m.m2 += (v - m.mean) * (v - m.mean);
    chunks[c] = m;
  };

  const int workers = std::max(1, std::min<int>(n_threads, static_cast<int>(n_chunks)));
  if (workers == 1) {
    for (std::int64_t c = 0; c < n_chunks; ++c) run_chunk(c);
  } else {
    std::vector<std::thread> pool;
    for (int w = 0; w < workers; ++w)
      pool.emplace_back([&, w] {
        for (std::int64_t c = w; c < n_chunks; c += workers) run_chunk(c);
      });
    for (auto& th : pool) th.join();
  }

  Moments total;
  for (const auto& m : chunks) total.merge(m);
  const double var = total.m2 / (total.n - 1.0);
  return {total.mean, std::sqrt(var / total.n), n_samples, seed};
}

double divisibility_defect(FractionalOrder alpha, double lambda, double t, double tau) {
  if (!(lambda > 0.0)) throw DomainError("divisibility_defect: lambda must be positive");
  if (!(tau > 0.0) || !(tau < t)) throw DomainError("divisibility_defect: need 0 < tau < t");
  if (alpha.is_one()) {
    return std::abs(std::exp(-lambda * t) - std::exp(-lambda * (t - tau)) * std::exp(-lambda * tau));
  }
  const double a = alpha.value();
  const auto e = [&](double x) { return mittag_leffler(alpha, -lambda * std::pow(x, a)); };
  return std::abs(e(t) - e(t - tau) * e(tau));
}

}  // namespace fracdyn
