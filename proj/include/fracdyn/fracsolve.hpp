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

#include <vector>

#include "fracdyn/kernels.hpp"
#include "fracdyn/lindblad.hpp"
#include "fracdyn/specfun.hpp"

namespace fracdyn {

/// Product-integration weights for the Volterra form of the Caputo equation.
///
/// StandardDFF is the Diethelm-Ford-Freed fractional trapezoid rule (order
/// 1 + alpha). PaperPrinted uses the exponents 1 - alpha (predictor) and alpha
/// (corrector) with prefactor h^alpha / Gamma(1 + alpha); it is kept for
/// comparison and does not converge for alpha < 1.
enum class WeightScheme { PaperPrinted, StandardDFF };

/// Predictor weights b_0 .. b_n.
std::vector<double> predictor_weights(WeightScheme scheme, FractionalOrder alpha, int n);

/// Corrector weights for the step t_n -> t_{n+1}, indexed by history point k = 0..n.
/// The weight of the new point is implicit_weight(); all are multiplied by
/// corrector_prefactor(h).
std::vector<double> corrector_weights(WeightScheme scheme, FractionalOrder alpha, int n);

/// Interior corrector weight at lag m >= 1.
double interior_corrector_weight(WeightScheme scheme, FractionalOrder alpha, int m);

double corrector_prefactor(WeightScheme scheme, FractionalOrder alpha, double h);
double implicit_weight(WeightScheme scheme, FractionalOrder alpha);

struct FracTrajectory {
  FractionalOrder alpha;
  double h;
  WeightScheme scheme;
  std::vector<double> scalar;   // scalar mode: u(t_n)
  std::vector<CMatrix> states;  // matrix mode: rho(t_n)

  bool is_scalar() const noexcept { return states.empty(); }
  std::size_t size() const noexcept { return is_scalar() ? scalar.size() : states.size(); }
  double time(std::size_t n) const noexcept { return static_cast<double>(n) * h; }
};

/// Solves D^alpha u = -lambda u on t_n = n h, n = 0..N.
FracTrajectory fam_solve(double lambda, FractionalOrder alpha, double h, int n_steps, double init,
                         WeightScheme scheme = WeightScheme::StandardDFF);

/// Solves D^alpha rho = L rho. The implicit left factor is LU-decomposed once.
/// Throws InstabilityError naming the step if a state leaves the density
/// matrices by more than 1e-5.
FracTrajectory fam_solve(const GKSLGenerator& gen, FractionalOrder alpha, double h, int n_steps,
                         const DensityMatrix& init, WeightScheme scheme = WeightScheme::StandardDFF);

/// As fam_solve with StandardDFF weights, but the history beyond the last step
/// is carried by one exponentially decaying accumulator per SOE term, O(Q) work
/// per step. soe must cover [h, N h].
FracTrajectory fam_solve_soe(double lambda, FractionalOrder alpha, double h, int n_steps, double init,
                             const SOEKernel& soe, WeightScheme scheme = WeightScheme::StandardDFF);
FracTrajectory fam_solve_soe(const GKSLGenerator& gen, FractionalOrder alpha, double h, int n_steps,
                             const DensityMatrix& init, const SOEKernel& soe,
                             WeightScheme scheme = WeightScheme::StandardDFF);

/// rho(t) = sum_j E_alpha(lambda_j t^alpha) P_j rho(0) over the eigenpairs of
/// the superoperator. Throws ValidationError if the eigenbasis condition number
/// is 1e8 or more (use fam_solve instead).
DensityMatrix ml_propagate(const GKSLGenerator& gen, FractionalOrder alpha, double t, const DensityMatrix& init);

}  // namespace fracdyn
