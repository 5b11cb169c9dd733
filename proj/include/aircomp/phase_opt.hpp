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

#include <cmath>
#include <optional>
#include <vector>

#include <Eigen/Eigenvalues>

#include "aircomp/channel.hpp"
#include "aircomp/detector.hpp"
#include "aircomp/sdp.hpp"
#include "aircomp/system.hpp"
#include "aircomp/types.hpp"

namespace aircomp {

/// Coefficients of the phase-only quadratic cost for a fixed detector f:
///
///   sum_k sigma_k^2 (|a_k^H v|^2 + 2 Re{b_k^* a_k^H v})
///     + sum_{i,k} (|c_{ik}^H v|^2 + 2 Re{d_{ik}^* c_{ik}^H v})
///
/// The c/d families are stored AP-major: index i * N_W + k.
struct QuadraticCoefficients {
  std::vector<CVector> a;
  std::vector<cdouble> b;
  std::vector<CVector> c;
  std::vector<cdouble> d;
  int num_workers = 0;
  int num_aps = 0;

  const CVector& c_at(int ap, int worker) const { return c[ap * num_workers + worker]; }
  cdouble d_at(int ap, int worker) const { return d[ap * num_workers + worker]; }
};

inline QuadraticCoefficients build_coefficients(const std::vector<ChannelDecomposition>& decomp,
                                                const Detector& det, const SystemParams& params) {
  const int nw = static_cast<int>(decomp.size());
  detail::require(nw == params.num_workers(), "worker count mismatch");
  const int na = static_cast<int>(det.f.size());
  const RVector alpha = transmit_scale(params);
  // sqrt(P / (2^C - 1)); zero for unbounded fronthaul.
  const double qscale =
      params.infinite_capacity() ? 0.0 : std::sqrt(params.power / params.capacity_factor());

  QuadraticCoefficients q;
  q.num_workers = nw;
  q.num_aps = na;
  q.a.reserve(nw);
  q.b.reserve(nw);
  for (int k = 0; k < nw; ++k) {
    detail::require(decomp[k].h_d.size() == na, "detector length mismatch");
    q.a.push_back(decomp[k].H_r.adjoint() * det.f * alpha(k));
    q.b.push_back(alpha(k) * det.f.dot(decomp[k].h_d) - 1.0);  // dot() conjugates f
  }
  q.c.reserve(static_cast<std::size_t>(na) * nw);
  q.d.reserve(static_cast<std::size_t>(na) * nw);
  for (int i = 0; i < na; ++i) {
    const double w = qscale * std::abs(det.f(i));
    for (int k = 0; k < nw; ++k) {
      q.c.push_back(w * decomp[k].H_r.row(i).adjoint());
      q.d.push_back(w * decomp[k].h_d(i));
    }
  }
  return q;
}

/// The phase-dependent part of the MSE evaluated directly from the coefficients.
inline double quadratic_cost(const QuadraticCoefficients& q, const SystemParams& params,
                             const CVector& v) {
  double e = 0.0;
  for (int k = 0; k < q.num_workers; ++k) {
    const cdouble av = q.a[k].dot(v);
    e += (std::norm(av) + 2.0 * std::real(std::conj(q.b[k]) * av)) * params.theta_power[k];
  }
  for (std::size_t n = 0; n < q.c.size(); ++n) {
    const cdouble cv = q.c[n].dot(v);
    e += std::norm(cv) + 2.0 * std::real(std::conj(q.d[n]) * cv);
  }
  return e;
}

struct LiftedMatrix {
  CMatrix V;
  Eigen::Index size() const { return V.rows(); }
};

/// V = [v; 1][v; 1]^H.
inline LiftedMatrix lift(const CVector& v) {
  CVector x(v.size() + 1);
  x.head(v.size()) = v;
  x(v.size()) = 1.0;
  return {x * x.adjoint()};
}

struct LiftedObjective {
  CMatrix M;
  double gamma = 1.0;
};

inline LiftedObjective build_lifted_objective(const QuadraticCoefficients& q,
                                              const SystemParams& params, double gamma) {
  detail::require(gamma >= 0.0, "penalty weight must be non-negative");
  const Eigen::Index n = q.a.empty() ? 0 : q.a.front().size();
  CMatrix M = CMatrix::Zero(n + 1, n + 1);
  auto add_block = [&](const CVector& x, cdouble y, double w) {
    M.topLeftCorner(n, n).noalias() += w * (x * x.adjoint());
    M.topRightCorner(n, 1) += (w * y) * x;
    M.bottomLeftCorner(1, n) += (w * std::conj(y)) * x.adjoint();
  };
  for (int k = 0; k < q.num_workers; ++k) add_block(q.a[k], q.b[k], params.theta_power[k]);
  for (std::size_t m = 0; m < q.c.size(); ++m) add_block(q.c[m], q.d[m], 1.0);
  return {hermitian_part(M), gamma};
}

/// Largest eigenvalue and its eigenvector; the first one in the solver's
/// ordering is taken when the top eigenvalue is repeated.
inline std::pair<double, CVector> top_eigenpair(const CMatrix& V) {
  Eigen::SelfAdjointEigenSolver<CMatrix> es(hermitian_part(V));
  const Eigen::Index last = V.rows() - 1;
  return {es.eigenvalues()(last), es.eigenvectors().col(last)};
}

inline double spectral_norm(const CMatrix& H) {
  if (H.size() == 0) return 0.0;
  Eigen::SelfAdjointEigenSolver<CMatrix> es(hermitian_part(H), Eigen::EigenvaluesOnly);
  return es.eigenvalues().cwiseAbs().maxCoeff();
}

/// tr(V) - sigma_1(V); zero exactly at rank <= 1 for PSD V.
inline double rank_penalty(const CMatrix& V) {
  return V.trace().real() - top_eigenpair(V).first;
}

/// tr(M V) + gamma (tr V - sigma_1(V)).
inline double penalized_objective(const LiftedObjective& obj, const CMatrix& V) {
  return trace_product(obj.M, V) + obj.gamma * rank_penalty(V);
}

/// Inner solves inside the CCP loop. The step safeguard keeps the penalized
/// objective monotone regardless of inner accuracy, so the inner tolerance
/// only trades speed against step quality.
inline SdpOptions ccp_inner_defaults() {
  SdpOptions o;
  o.tol = 1e-5;
  return o;
}

struct CcpOptions {
  double delta = 1e-4;
  int max_outer = 50;
  SdpOptions sdp = ccp_inner_defaults();
};

struct CcpResult {
  LiftedMatrix V;
  std::vector<double> objective_trace;  // penalized objective, one entry per iterate
  std::vector<double> sdp_diag_error;
  std::vector<double> sdp_min_eig;
  std::vector<int> inner_failures;      // outer indices whose SDP hit max_iter
  int outer_iterations = 0;
  bool converged = false;
};

/// Convex-concave procedure on the rank-penalized lifted problem. Each step
/// linearizes -gamma * sigma_1 at the current iterate and solves the
/// resulting unit-diagonal SDP. A step whose SDP answer scores worse on the
/// convex surrogate than the current iterate (possible only through inner
/// inexactness) keeps the current iterate, so the penalized objective never
/// increases.
inline CcpResult ccp_optimize(const LiftedObjective& obj, const LiftedMatrix& V0,
                              const CcpOptions& opts = {}) {
  const Eigen::Index n = obj.M.rows();
  detail::require(V0.size() == n, "initial lifted matrix has wrong size");
  detail::require(obj.gamma >= 0.0, "penalty weight must be non-negative");

  CcpResult res;
  CMatrix V = V0.V;
  res.objective_trace.push_back(penalized_objective(obj, V));
  std::optional<SdpWarmStart> warm;
  for (int t = 0; t < opts.max_outer; ++t) {
    const CVector u = top_eigenpair(V).second;
    SdpProblem sub{obj.M + obj.gamma * (CMatrix::Identity(n, n) - u * u.adjoint())};
    SdpSolution s = solve_diag_sdp(sub, opts.sdp, warm);
    warm = s.warm;
    if (!s.converged) res.inner_failures.push_back(t);
    res.sdp_diag_error.push_back(max_diag_error(s.V));
    res.sdp_min_eig.push_back(min_eigenvalue(s.V));

    CMatrix next = trace_product(sub.A, s.V) <= trace_product(sub.A, V) ? s.V : V;
    const double step = (next - V).squaredNorm();
    V = std::move(next);
    res.objective_trace.push_back(penalized_objective(obj, V));
    res.outer_iterations = t + 1;
    if (step <= opts.delta) {
      res.converged = true;
      break;
    }
  }
  res.V = {V};
  return res;
}

/// First N_I * n_I entries of the last column, projected to unit modulus.
/// Entries of magnitude below 1e-9 fall back to phase zero.
inline PhaseConfig extract_phases(const LiftedMatrix& L, int num_irs, int elements) {
  const Eigen::Index n = static_cast<Eigen::Index>(num_irs) * elements;
  detail::require(L.size() == n + 1, "lifted matrix size does not match IRS layout");
  CVector v = L.V.col(n).head(n);
  for (Eigen::Index m = 0; m < n; ++m) {
    const double r = std::abs(v(m));
    v(m) = r < 1e-9 ? cdouble(1.0, 0.0) : v(m) / r;
  }
  return PhaseConfig::from_stacked(v, num_irs, elements);
}

}  // namespace aircomp
