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

#include "fracdyn/lindblad.hpp"

#include <cmath>
#include <string>

#include <unsupported/Eigen/KroneckerProduct>
#include <unsupported/Eigen/MatrixFunctions>

#include "fracdyn/errors.hpp"

namespace fracdyn {

namespace {

double hermiticity_defect(const CMatrix& m) { return (m - m.adjoint()).cwiseAbs().maxCoeff(); }

void check_state(const CMatrix& rho, double herm_tol, double psd_tol) {
  if (rho.rows() != rho.cols() || rho.rows() == 0) throw ValidationError("density matrix must be square and nonempty");
  const double herm = hermiticity_defect(rho);
  if (herm > herm_tol) throw ValidationError("density matrix not Hermitian: defect " + std::to_string(herm));
  const double tr = std::abs(rho.trace() - cplx(1.0));
  if (tr > herm_tol) throw ValidationError("density matrix trace != 1: defect " + std::to_string(tr));
  const CMatrix sym = 0.5 * (rho + rho.adjoint());
  const double lo = Eigen::SelfAdjointEigenSolver<CMatrix>(sym, Eigen::EigenvaluesOnly).eigenvalues().minCoeff();
  if (lo < -psd_tol) throw ValidationError("density matrix not positive: min eigenvalue " + std::to_string(lo));
}

}  // namespace

DensityMatrix::DensityMatrix(CMatrix rho, double herm_tol, double psd_tol) : rho_(std::move(rho)) {
  check_state(rho_, herm_tol, psd_tol);
}

double DensityMatrix::purity() const { return (rho_ * rho_).trace().real(); }

DensityMatrix DensityMatrix::pure(const CVector& psi) {
  const double n = psi.norm();
  if (!(n > 0.0)) throw ValidationError("pure state vector is zero");
  const CVector p = psi / n;
  return DensityMatrix(p * p.adjoint());
}

GKSLGenerator::GKSLGenerator(CMatrix hamiltonian, std::vector<Channel> channels)
    : h_(std::move(hamiltonian)), channels_(std::move(channels)) {
  if (h_.rows() != h_.cols() || h_.rows() == 0) throw ValidationError("Hamiltonian must be square and nonempty");
  if (hermiticity_defect(h_) > 1e-12) throw ValidationError("Hamiltonian is not Hermitian");
  for (const auto& c : channels_) {
    if (c.jump.rows() != h_.rows() || c.jump.cols() != h_.cols())
      throw ValidationError("jump operator dimension does not match the Hamiltonian");
    if (!(c.rate >= 0.0) || !std::isfinite(c.rate))
      throw ValidationError("channel rate must be nonnegative, got " + std::to_string(c.rate));
  }
}

CVector vec(const CMatrix& x) { return Eigen::Map<const CVector>(x.data(), x.size()); }

CMatrix unvec(const CVector& v, int dim) { return Eigen::Map<const CMatrix>(v.data(), dim, dim); }

namespace detail {

Superoperator build_superoperator_unchecked(const CMatrix& h, const std::vector<Channel>& channels) {
  const int d = static_cast<int>(h.rows());
  const CMatrix id = CMatrix::Identity(d, d);
  const cplx i(0.0, 1.0);
  CMatrix m = -i * (Eigen::kroneckerProduct(id, h).eval() - Eigen::kroneckerProduct(h.transpose(), id).eval());
  for (const auto& c : channels) {
    const CMatrix ldl = c.jump.adjoint() * c.jump;
    m += c.rate * (Eigen::kroneckerProduct(c.jump.conjugate(), c.jump).eval() -
                   0.5 * Eigen::kroneckerProduct(id, ldl).eval() -
                   0.5 * Eigen::kroneckerProduct(ldl.transpose(), id).eval());
  }
  return {d, m};
}

}  // namespace detail

Superoperator build_superoperator(const GKSLGenerator& gen) {
  return detail::build_superoperator_unchecked(gen.hamiltonian(), gen.channels());
}

DensityMatrix semigroup_apply(const Superoperator& superop, double u, const DensityMatrix& rho) {
  if (!(u >= 0.0)) throw DomainError("semigroup_apply: u must be nonnegative");
  if (rho.dim() != superop.dim) throw ValidationError("semigroup_apply: dimension mismatch");
  if (u == 0.0) return rho;
  const CMatrix phi = (u * superop.matrix).exp();
  const CMatrix out = unvec(phi * vec(rho.matrix()), superop.dim);
  try {
    return DensityMatrix(out, 1e-7, 1e-7);
  } catch (const ValidationError& e) {
    throw InstabilityError(std::string("semigroup_apply: ") + e.what());
  }
}

CPTPReport cptp_diagnostics(const Superoperator& superop, double u) {
  if (!(u >= 0.0)) throw DomainError("cptp_diagnostics: u must be nonnegative");
  return map_diagnostics((u * superop.matrix).exp(), superop.dim);
}

CPTPReport map_diagnostics(const CMatrix& phi, int d) {
  if (phi.rows() != d * d || phi.cols() != d * d) throw ValidationError("map_diagnostics: map must be d^2 x d^2");
  // Choi matrix C = sum_ij E_ij kron Phi(E_ij); column j + d*i of phi is Phi(E_ij) stacked.
  CMatrix choi = CMatrix::Zero(d * d, d * d);
  double defect = 0.0;
  for (int i = 0; i < d; ++i) {
    for (int j = 0; j < d; ++j) {
      const CMatrix img = unvec(phi.col(i + d * j), d);
      choi.block(i * d, j * d, d, d) = img;
      defect = std::max(defect, std::abs(img.trace() - cplx(i == j ? 1.0 : 0.0)));
    }
  }
  const CMatrix sym = 0.5 * (choi + choi.adjoint());
  const double lo = Eigen::SelfAdjointEigenSolver<CMatrix>(sym, Eigen::EigenvaluesOnly).eigenvalues().minCoeff();
  return {defect, lo};
}

SemigroupFlow::SemigroupFlow(const Superoperator& superop, const DensityMatrix& rho0)
    : op_(superop), v0_(vec(rho0.matrix())) {
  if (rho0.dim() != superop.dim) throw ValidationError("SemigroupFlow: dimension mismatch");
  Eigen::ComplexEigenSolver<CMatrix> es(superop.matrix);
  if (es.info() != Eigen::Success) return;
  modes_ = es.eigenvectors();
  eig_ = es.eigenvalues();
  Eigen::JacobiSVD<CMatrix> svd(modes_);
  const auto& s = svd.singularValues();
  if (!(s(s.size() - 1) > 0.0) || s(0) / s(s.size() - 1) >= 1e8) return;
  coeff_ = modes_.partialPivLu().solve(v0_);
}

CMatrix SemigroupFlow::at(double u) const {
  if (!(u >= 0.0)) throw DomainError("SemigroupFlow: u must be nonnegative");
  if (coeff_) {
    CVector c = *coeff_;
    for (Eigen::Index k = 0; k < c.size(); ++k) c(k) *= std::exp(u * eig_(k));
    return unvec(modes_ * c, op_.dim);
  }
  return unvec((u * op_.matrix).exp() * v0_, op_.dim);
}

CMatrix pauli_x() {
  CMatrix m(2, 2);
  m << 0, 1, 1, 0;
  return m;
}

CMatrix pauli_y() {
  CMatrix m(2, 2);
  m << 0, cplx(0, -1), cplx(0, 1), 0;
  return m;
}

CMatrix pauli_z() {
  CMatrix m(2, 2);
  m << 1, 0, 0, -1;
  return m;
}

GKSLGenerator dephasing_qubit(double eps, double gamma) {
  // gamma (sz rho sz - rho) multiplies the coherence by -2 gamma, the rate of
  // the Markovian model; no rescaling of the channel is needed.
  return GKSLGenerator(0.5 * eps * pauli_z(), {{pauli_z(), gamma}});
}

cplx qubit_coherence(const CMatrix& rho) { return rho(1, 0); }

DensityMatrix qubit_state_with_coherence(cplx u) {
  CMatrix m(2, 2);
  m << 0.5, std::conj(u), u, 0.5;
  return DensityMatrix(m);
}

}  // namespace fracdyn
