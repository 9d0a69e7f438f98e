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
#include <optional>
#include <vector>

#include <Eigen/Dense>

namespace fracdyn {

using cplx = std::complex<double>;
using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;

/// Hermitian, unit-trace, positive semidefinite d x d matrix.
class DensityMatrix {
 public:
  /// Validates Hermiticity and trace to herm_tol and the smallest eigenvalue
  /// to -psd_tol. Throws ValidationError.
  explicit DensityMatrix(CMatrix rho, double herm_tol = 1e-12, double psd_tol = 1e-10);

  int dim() const noexcept { return static_cast<int>(rho_.rows()); }
  const CMatrix& matrix() const noexcept { return rho_; }
  cplx operator()(int i, int j) const { return rho_(i, j); }
  double purity() const;

  /// |psi><psi| for a (not necessarily normalized) state vector.
  static DensityMatrix pure(const CVector& psi);

 private:
  CMatrix rho_;
};

struct Channel {
  CMatrix jump;
  double rate;
};

/// GKSL generator: Hermitian Hamiltonian plus jump operators with nonnegative rates.
class GKSLGenerator {
 public:
  GKSLGenerator(CMatrix hamiltonian, std::vector<Channel> channels = {});

  int dim() const noexcept { return static_cast<int>(h_.rows()); }
  const CMatrix& hamiltonian() const noexcept { return h_; }
  const std::vector<Channel>& channels() const noexcept { return channels_; }

 private:
  CMatrix h_;
  std::vector<Channel> channels_;
};

/// d^2 x d^2 matrix of a linear map on column-stacked d x d matrices,
/// vec(A X B) = (B^T kron A) vec(X).
struct Superoperator {
  int dim;
  CMatrix matrix;
};

CVector vec(const CMatrix& x);
CMatrix unvec(const CVector& v, int dim);

Superoperator build_superoperator(const GKSLGenerator& gen);

/// exp(u M) applied to rho. Throws InstabilityError if the result is not a
/// density matrix to 1e-7.
DensityMatrix semigroup_apply(const Superoperator& superop, double u, const DensityMatrix& rho);

struct CPTPReport {
  double trace_defect;
  double min_choi_eig;
};

/// Trace-preservation defect and smallest Choi eigenvalue of exp(u M).
CPTPReport cptp_diagnostics(const Superoperator& superop, double u);

/// The same diagnostics for an arbitrary d^2 x d^2 map on column-stacked matrices.
CPTPReport map_diagnostics(const CMatrix& phi, int dim);

/// Repeated evaluation of exp(u M) vec(rho0) for many u.
///
/// Uses the eigendecomposition of M when it is diagonalizable with an
/// eigenvector condition number below 1e8, and the matrix exponential otherwise.
class SemigroupFlow {
 public:
  SemigroupFlow(const Superoperator& superop, const DensityMatrix& rho0);

  CMatrix at(double u) const;
  bool spectral() const noexcept { return coeff_.has_value(); }

 private:
  Superoperator op_;
  CVector v0_;
  CMatrix modes_;
  CVector eig_;
  std::optional<CVector> coeff_;
};

// Qubit conventions: basis (|0>, |1>) with sigma_z = diag(1, -1). The
// coherence u = <sigma_+> = rho_{10} obeys du/dt = (i eps - 2 gamma) u under
// dephasing_qubit(eps, gamma).
CMatrix pauli_x();
CMatrix pauli_y();
CMatrix pauli_z();

/// H = (eps/2) sigma_z, single jump sigma_z at rate gamma.
GKSLGenerator dephasing_qubit(double eps, double gamma);

/// rho_{10} of a qubit state.
cplx qubit_coherence(const CMatrix& rho);

/// Qubit state with populations (1/2, 1/2) and rho_{10} = u, |u| <= 1/2.
DensityMatrix qubit_state_with_coherence(cplx u);

namespace detail {
/// Builds the superoperator without validating rates or Hermiticity. Used to
/// construct non-physical maps for diagnostics.
Superoperator build_superoperator_unchecked(const CMatrix& hamiltonian, const std::vector<Channel>& channels);
}  // namespace detail

}  // namespace fracdyn
