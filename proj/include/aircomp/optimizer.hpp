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

#include <cstdint>
#include <limits>
#include <vector>

#include "aircomp/channel.hpp"
#include "aircomp/detector.hpp"
#include "aircomp/phase_opt.hpp"
#include "aircomp/scenario.hpp"
#include "aircomp/system.hpp"

namespace aircomp {

enum class PhaseInit { kZero, kRandom };

struct AlternateOptions {
  double delta = 1e-4;
  int max_outer = 30;
  double gamma = 1.0;
  PhaseInit init = PhaseInit::kZero;
  std::uint64_t init_seed = 0;
  bool optimize_phases = true;   // false: keep the initial phases, detector only
  bool warm_start_ccp = true;    // start the CCP from the current phases
  // Divide M by its spectral norm before the CCP, making gamma a weight
  // relative to the cost curvature instead of an absolute one.
  bool relative_gamma = true;
  // Extra runs from seeded random phases; the lowest-MSE run is returned.
  int restarts = 0;
  CcpOptions ccp;
};

/// One outer iteration of the alternation.
struct TraceRecord {
  double mse_after_phase = 0.0;       // unprojected last-column vector, old detector
  double mse_after_projection = 0.0;  // unit-modulus phases, old detector
  double mse_after_detector = 0.0;    // unit-modulus phases, new detector
  int ccp_iterations = 0;
};

/// Diagnostics gathered from every inner solve.
struct SolveStats {
  int sdp_solves = 0;
  int sdp_failures = 0;
  double max_sdp_diag_error = 0.0;
  double min_sdp_eigenvalue = 0.0;
  double max_ccp_increase = 0.0;  // largest rise of the penalized objective
  double max_ccp_objective = 0.0; // largest |penalized objective| seen
};

struct Solution {
  PhaseConfig phases;
  Detector detector;
  double mse = 0.0;
  double normalized_mse = 0.0;
  std::vector<TraceRecord> trace;
  int iterations = 0;
  bool converged = false;
  bool inner_failure = false;
  SolveStats stats;
};

namespace detail {

inline Solution finish(const std::vector<ChannelDecomposition>& decomp, PhaseConfig phases,
                       Detector det, const SystemParams& params) {
  Solution s;
  s.mse = mse(decomp, phases, det.f, params);
  s.normalized_mse = normalized_mse(s.mse, params);
  s.phases = std::move(phases);
  s.detector = std::move(det);
  return s;
}

inline void absorb(SolveStats& st, const CcpResult& r) {
  st.sdp_solves += static_cast<int>(r.sdp_diag_error.size());
  st.sdp_failures += static_cast<int>(r.inner_failures.size());
  for (double e : r.sdp_diag_error) st.max_sdp_diag_error = std::max(st.max_sdp_diag_error, e);
  for (double e : r.sdp_min_eig) st.min_sdp_eigenvalue = std::min(st.min_sdp_eigenvalue, e);
  for (std::size_t t = 1; t < r.objective_trace.size(); ++t)
    st.max_ccp_increase =
        std::max(st.max_ccp_increase, r.objective_trace[t] - r.objective_trace[t - 1]);
  for (double o : r.objective_trace)
    st.max_ccp_objective = std::max(st.max_ccp_objective, std::abs(o));
}

}  // namespace detail

namespace detail {

inline void merge(SolveStats& into, const SolveStats& s) {
  into.sdp_solves += s.sdp_solves;
  into.sdp_failures += s.sdp_failures;
  into.max_sdp_diag_error = std::max(into.max_sdp_diag_error, s.max_sdp_diag_error);
  into.min_sdp_eigenvalue = std::min(into.min_sdp_eigenvalue, s.min_sdp_eigenvalue);
  into.max_ccp_increase = std::max(into.max_ccp_increase, s.max_ccp_increase);
  into.max_ccp_objective = std::max(into.max_ccp_objective, s.max_ccp_objective);
}

inline Solution alternate_once(const std::vector<ChannelDecomposition>& decomp, int num_irs,
                               int elements, const SystemParams& params,
                               const AlternateOptions& opts) {

  PhaseConfig v = opts.init == PhaseInit::kRandom
                      ? PhaseConfig::random(num_irs, elements, opts.init_seed)
                      : PhaseConfig::ones(num_irs, elements);
  Detector f = mmse_detector(effective_channels(decomp, v), params);

  Solution best = detail::finish(decomp, v, f, params);
  if (num_irs == 0 || !opts.optimize_phases) {
    best.iterations = 1;
    best.converged = true;
    return best;
  }

  std::vector<TraceRecord> trace;
  SolveStats stats;
  bool converged = false;
  bool inner_failure = false;
  int t = 0;
  const CVector v_cold = CVector::Ones(static_cast<Eigen::Index>(num_irs) * elements);
  while (t < opts.max_outer) {
    ++t;
    TraceRecord rec;
    const QuadraticCoefficients q = build_coefficients(decomp, f, params);
    LiftedObjective obj = build_lifted_objective(q, params, opts.gamma);
    if (opts.relative_gamma) obj.M /= std::max(spectral_norm(obj.M), 1e-300);
    const CcpResult ccp =
        ccp_optimize(obj, lift(opts.warm_start_ccp ? v.stacked() : v_cold), opts.ccp);
    detail::absorb(stats, ccp);
    inner_failure = inner_failure || !ccp.inner_failures.empty();
    rec.ccp_iterations = ccp.outer_iterations;

    const Eigen::Index n = ccp.V.size() - 1;
    rec.mse_after_phase = mse_for_channels(apply_affine(decomp, ccp.V.V.col(n).head(n)),
                                           f.f, params);
    PhaseConfig v_next = extract_phases(ccp.V, num_irs, elements);
    const CMatrix h = effective_channels(decomp, v_next);
    rec.mse_after_projection = mse_for_channels(h, f.f, params);
    Detector f_next = mmse_detector(h, params);
    rec.mse_after_detector = mse_for_channels(h, f_next.f, params);
    trace.push_back(rec);

    const double change = (v_next.stacked() - v.stacked()).squaredNorm() +
                          (f_next.f - f.f).squaredNorm();
    v = std::move(v_next);
    f = std::move(f_next);
    if (rec.mse_after_detector < best.mse) best = detail::finish(decomp, v, f, params);
    if (change <= opts.delta) {
      converged = true;
      break;
    }
  }
  best.trace = std::move(trace);
  best.iterations = t;
  best.converged = converged;
  best.inner_failure = inner_failure;
  best.stats = stats;
  return best;
}

}  // namespace detail

/// Alternating minimization of the MSE over IRS phases and the detector.
/// Each run returns the best iterate it visited, which is the last one
/// whenever the MSE decreased monotonically. With restarts, the diagnostics
/// cover every run while the trace belongs to the returned one.
inline Solution alternate(const std::vector<ChannelDecomposition>& decomp, int num_irs,
                          int elements, const SystemParams& params,
                          const AlternateOptions& opts = {}) {
  params.validate();
  detail::require(static_cast<int>(decomp.size()) == params.num_workers(),
                  "worker count mismatch");
  detail::require(opts.restarts >= 0, "restart count must be non-negative");
  Solution best = detail::alternate_once(decomp, num_irs, elements, params, opts);
  if (num_irs == 0 || !opts.optimize_phases) return best;
  SolveStats stats = best.stats;
  bool inner_failure = best.inner_failure;
  for (int r = 1; r <= opts.restarts; ++r) {
    AlternateOptions o = opts;
    o.init = PhaseInit::kRandom;
    o.init_seed = derive_seed(opts.init_seed, Stream::kInitPhases, {static_cast<std::uint64_t>(r)});
    Solution s = detail::alternate_once(decomp, num_irs, elements, params, o);
    detail::merge(stats, s.stats);
    inner_failure = inner_failure || s.inner_failure;
    if (s.mse < best.mse) best = std::move(s);
  }
  best.stats = stats;
  best.inner_failure = inner_failure;
  return best;
}

inline Solution alternate(const Topology& topo, const FadingRealization& fading,
                          const SystemParams& params, const AlternateOptions& opts = {}) {
  return alternate(decompose(topo, fading), topo.num_irs(), topo.irs_elements(), params, opts);
}

/// Direct paths only, optimal detector.
inline Solution baseline_no_irs(const Topology& topo, const FadingRealization& fading,
                                const SystemParams& params) {
  params.validate();
  const auto decomp = decompose(topo, fading);
  const CMatrix h = direct_channels(decomp);
  Solution s;
  s.detector = mmse_detector(h, params);
  s.mse = mse_for_channels(h, s.detector.f, params);
  s.normalized_mse = normalized_mse(s.mse, params);
  s.iterations = 1;
  s.converged = true;
  return s;
}

/// I.i.d. uniform phases, optimal detector.
inline Solution baseline_random_phases(const Topology& topo, const FadingRealization& fading,
                                       const SystemParams& params, std::uint64_t seed) {
  params.validate();
  const auto decomp = decompose(topo, fading);
  PhaseConfig v = PhaseConfig::random(topo.num_irs(), topo.irs_elements(), seed);
  Detector f = mmse_detector(effective_channels(decomp, v), params);
  Solution s = detail::finish(decomp, std::move(v), std::move(f), params);
  s.iterations = 1;
  s.converged = true;
  return s;
}

}  // namespace aircomp
