// Copyright 2026 The aircomp-irs Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <algorithm>
#include <cmath>
#include <optional>

#include <Eigen/Eigenvalues>

#include "aircomp/types.hpp"

namespace aircomp {

// Solver for the unit-diagonal linear SDP
//
//   minimize tr(A V)  subject to  V >= 0,  V(m,m) = 1,
//
// over complex Hermitian V. Primal ADMM on the split V = Z with V in the
// affine set {diag(V) = 1} and Z in the PSD cone:
//
//   V <- Z - U - A/rho, then diag(V) <- 1
//   W <- r V + (1 - r) Z        (over-relaxation)
//   Z <- Proj_PSD(W + U)
//   U <- U + W - Z
//
// A is rescaled to unit RMS entry internally; the rescaling does not move the
// minimizer. The returned iterate is made exactly feasible by lifting the
// diagonal of Z to at least one and applying a diagonal congruence, both of
// which preserve semidefiniteness.

struct SdpProblem {
  CMatrix A;
  Eigen::Index n() const { return A.rows(); }
};

struct SdpOptions {
  double tol = 1e-7;
  int max_iter = 5000;
  double rho = 1.0;
  double relaxation = 1.0;  // over-relaxation factor in (0, 2)
  bool adapt_rho = true;
  int adapt_every = 10;
  double adapt_ratio = 10.0;
};

/// ADMM state carried between related solves.
struct SdpWarmStart {
  CMatrix Z;
  CMatrix Y;  // dual of V = Z in the unscaled problem
  double rho = 1.0;
};

struct SdpSolution {
  CMatrix V;
  double objective = 0.0;
  double primal_residual = 0.0;
  double dual_residual = 0.0;
  int iterations = 0;
  bool converged = false;
  SdpWarmStart warm;
};

inline CMatrix hermitian_part(const CMatrix& H) { return 0.5 * (H + H.adjoint()); }

/// Frobenius-nearest PSD matrix: negative eigenvalues clipped to zero.
inline CMatrix project_psd(const CMatrix& H) {
  Eigen::SelfAdjointEigenSolver<CMatrix> es(hermitian_part(H));
  const RVector lam = es.eigenvalues().cwiseMax(0.0);
  CMatrix out = es.eigenvectors() * lam.cast<cdouble>().asDiagonal() *
                es.eigenvectors().adjoint();
  return hermitian_part(out);
}

inline double min_eigenvalue(const CMatrix& H) {
  if (H.size() == 0) return 0.0;
  Eigen::SelfAdjointEigenSolver<CMatrix> es(hermitian_part(H), Eigen::EigenvaluesOnly);
  return es.eigenvalues()(0);
}

inline double max_diag_error(const CMatrix& V) {
  if (V.size() == 0) return 0.0;
  return (V.diagonal().real().array() - 1.0).abs().maxCoeff();
}

/// Real part of tr(A V) for Hermitian arguments.
inline double trace_product(const CMatrix& A, const CMatrix& V) {
  return (A.conjugate().cwiseProduct(V)).sum().real();
}

/// Exactly feasible point closest in spirit to a PSD matrix Z.
inline CMatrix restore_unit_diagonal(const CMatrix& Z) {
  CMatrix W = hermitian_part(Z);
  const Eigen::Index n = W.rows();
  for (Eigen::Index m = 0; m < n; ++m) {
    const double d = W(m, m).real();
    if (d < 1.0) W(m, m) += 1.0 - d;
  }
  RVector s(n);
  for (Eigen::Index m = 0; m < n; ++m) s(m) = 1.0 / std::sqrt(W(m, m).real());
  W = s.cast<cdouble>().asDiagonal() * W * s.cast<cdouble>().asDiagonal();
  W.diagonal().setOnes();
  return W;
}

inline SdpSolution solve_diag_sdp(const SdpProblem& problem, const SdpOptions& opts = {},
                                  const std::optional<SdpWarmStart>& warm = std::nullopt) {
  const Eigen::Index n = problem.n();
  detail::require(problem.A.cols() == n, "SDP cost matrix must be square");
  detail::require(problem.A.allFinite(), "SDP cost matrix must be finite");
  detail::require((problem.A - problem.A.adjoint()).norm() <=
                      1e-10 * std::max(1.0, problem.A.norm()),
                  "SDP cost matrix must be Hermitian");
  detail::require(opts.tol > 0.0, "SDP tolerance must be positive");

  SdpSolution sol;
  if (n == 0) {
    sol.converged = true;
    return sol;
  }

  const CMatrix A = hermitian_part(problem.A);
  const double scale = std::max(A.norm() / static_cast<double>(n), 1e-300);
  const CMatrix As = A / scale;
  const double nn = static_cast<double>(n);

  double rho = opts.rho;
  CMatrix Z, U;
  if (warm && warm->Z.rows() == n) {
    rho = warm->rho;
    Z = warm->Z;
    U = warm->Y / (scale * rho);
  } else {
    Z = CMatrix::Identity(n, n);
    U = CMatrix::Zero(n, n);
  }

  CMatrix V(n, n), Zprev(n, n);
  Eigen::SelfAdjointEigenSolver<CMatrix> es(n);
  int it = 0;
  double r_pri = 0.0, r_dual = 0.0;
  for (; it < opts.max_iter; ++it) {
    V = Z - U - As / rho;
    V.diagonal().setOnes();

    Zprev = Z;
    const CMatrix Vr = opts.relaxation * V + (1.0 - opts.relaxation) * Zprev;
    es.compute(hermitian_part(Vr + U));
    const RVector lam = es.eigenvalues().cwiseMax(0.0);
    Z.noalias() = es.eigenvectors() * lam.cast<cdouble>().asDiagonal() *
                  es.eigenvectors().adjoint();

    U += Vr - Z;

    r_pri = (V - Z).norm() / nn;
    r_dual = rho * (Z - Zprev).norm() / nn;
    if (r_pri <= opts.tol && r_dual <= opts.tol) {
      ++it;
      sol.converged = true;
      break;
    }
    if (opts.adapt_rho && it % opts.adapt_every == opts.adapt_every - 1) {
      double factor = 1.0;
      if (r_pri > opts.adapt_ratio * r_dual) factor = 2.0;
      else if (r_dual > opts.adapt_ratio * r_pri) factor = 0.5;
      if (factor != 1.0) {
        rho *= factor;
        U /= factor;
      }
    }
  }

  sol.iterations = it;
  sol.primal_residual = r_pri;
  sol.dual_residual = r_dual;
  sol.V = restore_unit_diagonal(project_psd(Z));
  sol.objective = trace_product(A, sol.V);
  sol.warm = {Z, U * (scale * rho), rho};
  return sol;
}

}  // namespace aircomp
