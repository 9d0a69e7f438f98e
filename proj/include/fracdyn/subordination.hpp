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

#include <cstdint>

#include "fracdyn/lindblad.hpp"
#include "fracdyn/random.hpp"
#include "fracdyn/specfun.hpp"

namespace fracdyn {

/// Inverse-stable operational time U(t) of order alpha in (0, 1).
class OperationalClock {
 public:
  OperationalClock(FractionalOrder alpha, double t);

  FractionalOrder alpha() const noexcept { return alpha_; }
  double t() const noexcept { return t_; }

 private:
  FractionalOrder alpha_;
  double t_;
};

/// Density of U(t): f(u, t) = t^{-alpha} M_alpha(u t^{-alpha}).
double levy_density(const OperationalClock& clock, double u);

/// One draw of U(t) = t^alpha S^{-alpha}, with S standard one-sided alpha-stable
/// (Chambers-Mallows-Stuck / Kanter representation).
double sample_clock(const OperationalClock& clock, Stream& stream);

struct SubordinationQuad {
  double tail_mass = 1e-8;  // truncate u where the remaining clock mass drops below this
  double tol = 1e-8;        // panel doubling stops when two refinements agree to this
  int initial_panels = 4;
  int max_panels = 4096;
};

/// Phi_alpha(t) = int_0^inf f(u, t) exp(u L) du as a d^2 x d^2 matrix on
/// column-stacked states. Throws AccuracyError if the panel budget is exhausted.
CMatrix subordinated_map(const GKSLGenerator& gen, FractionalOrder alpha, double t, const SubordinationQuad& quad = {});

/// rho(t) = Phi_alpha(t) rho(0).
DensityMatrix subordinated_propagate(const GKSLGenerator& gen, FractionalOrder alpha, double t,
                                     const DensityMatrix& init, const SubordinationQuad& quad = {});

struct TrajectoryEstimate {
  double mean;
  double std_error;
  std::int64_t n_samples;
  std::uint64_t seed;
};

/// Monte-Carlo estimate of tr[O rho(t)] from M sampled operational times.
/// Trajectory k uses Stream(seed, k); the result is independent of n_threads.
TrajectoryEstimate trajectory_estimate(const GKSLGenerator& gen, FractionalOrder alpha, double t,
                                       const DensityMatrix& init, const CMatrix& observable, std::int64_t n_samples,
                                       std::uint64_t seed, int n_threads = 1);

/// |E(-lambda t^a) - E(-lambda (t-tau)^a) E(-lambda tau^a)|, the failure of the
/// semigroup law on a dephasing eigenmode.
double divisibility_defect(FractionalOrder alpha, double lambda, double t, double tau);

}  // namespace fracdyn
