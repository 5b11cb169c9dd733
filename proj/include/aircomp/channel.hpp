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
#include <cstdint>
#include <numbers>
#include <random>
#include <vector>

#include "aircomp/rng.hpp"
#include "aircomp/scenario.hpp"
#include "aircomp/types.hpp"

namespace aircomp {

inline constexpr double kModulusTolerance = 1e-8;

/// Per-IRS reflection vectors with unit-modulus entries e^{j phi}.
struct PhaseConfig {
  std::vector<CVector> v;

  int num_irs() const { return static_cast<int>(v.size()); }
  int stacked_size() const {
    int n = 0;
    for (const auto& b : v) n += static_cast<int>(b.size());
    return n;
  }

  CVector stacked() const {
    CVector out(stacked_size());
    Eigen::Index off = 0;
    for (const auto& b : v) {
      out.segment(off, b.size()) = b;
      off += b.size();
    }
    return out;
  }

  /// Reflection angles in [0, 2*pi).
  std::vector<Eigen::VectorXd> angles() const {
    std::vector<Eigen::VectorXd> out;
    for (const auto& b : v) {
      Eigen::VectorXd a(b.size());
      for (Eigen::Index m = 0; m < b.size(); ++m) {
        double t = std::arg(b(m));
        if (t < 0) t += 2.0 * std::numbers::pi;
        a(m) = t;
      }
      out.push_back(std::move(a));
    }
    return out;
  }

  double max_modulus_error() const {
    double e = 0.0;
    for (const auto& b : v)
      for (Eigen::Index m = 0; m < b.size(); ++m) e = std::max(e, std::abs(std::abs(b(m)) - 1.0));
    return e;
  }

  static PhaseConfig from_stacked(const CVector& stacked, int num_irs, int elements) {
    detail::require(stacked.size() == static_cast<Eigen::Index>(num_irs) * elements,
                    "stacked phase vector has wrong length");
    PhaseConfig pc;
    for (int j = 0; j < num_irs; ++j) pc.v.push_back(stacked.segment(j * elements, elements));
    return pc;
  }

  static PhaseConfig from_angles(const std::vector<Eigen::VectorXd>& angles) {
    PhaseConfig pc;
    for (const auto& a : angles) {
      CVector b(a.size());
      for (Eigen::Index m = 0; m < a.size(); ++m) b(m) = std::polar(1.0, a(m));
      pc.v.push_back(std::move(b));
    }
    return pc;
  }

  /// Every angle zero.
  static PhaseConfig ones(int num_irs, int elements) {
    PhaseConfig pc;
    for (int j = 0; j < num_irs; ++j) pc.v.push_back(CVector::Ones(elements));
    return pc;
  }

  /// Angles i.i.d. uniform on [0, 2*pi).
  static PhaseConfig random(int num_irs, int elements, std::uint64_t seed) {
    Engine eng(seed);
    std::uniform_real_distribution<double> unif(0.0, 2.0 * std::numbers::pi);
    PhaseConfig pc;
    for (int j = 0; j < num_irs; ++j) {
      CVector b(elements);
      for (int m = 0; m < elements; ++m) b(m) = std::polar(1.0, unif(eng));
      pc.v.push_back(std::move(b));
    }
    return pc;
  }
};

/// Worker k's channel as an affine function of the stacked phases:
/// h_k = h_d + H_r * v.
struct ChannelDecomposition {
  CVector h_d;   // N_A, direct part including path loss
  CMatrix H_r;   // N_A x (N_I * n_I), reflected part including path loss
};

inline std::vector<ChannelDecomposition> decompose(const Topology& topo,
                                                   const FadingRealization& fading) {
  const int nw = topo.num_workers(), na = topo.num_aps(), ni = topo.num_irs();
  const int ne = topo.irs_elements();
  detail::require(fading.h_direct.rows() == na && fading.h_direct.cols() == nw,
                  "direct fading dimensions do not match topology");
  detail::require(static_cast<int>(fading.g_irs_ap.size()) == ni &&
                      static_cast<int>(fading.h_worker_irs.size()) == ni,
                  "IRS fading count does not match topology");
  for (int j = 0; j < ni; ++j) {
    detail::require(fading.g_irs_ap[j].rows() == na && fading.g_irs_ap[j].cols() == ne,
                    "IRS-to-AP fading dimensions do not match topology");
    detail::require(fading.h_worker_irs[j].rows() == ne && fading.h_worker_irs[j].cols() == nw,
                    "worker-to-IRS fading dimensions do not match topology");
  }

  std::vector<ChannelDecomposition> out(static_cast<std::size_t>(nw));
  for (int k = 0; k < nw; ++k) {
    auto& dk = out[k];
    dk.h_d = topo.rho_direct.col(k).cwiseSqrt().cast<cdouble>().cwiseProduct(fading.h_direct.col(k));
    dk.H_r.resize(na, ni * ne);
    for (int j = 0; j < ni; ++j) {
      const Eigen::VectorXd amp = topo.rho_irs[j].col(k).cwiseSqrt();
      dk.H_r.middleCols(j * ne, ne) =
          amp.cast<cdouble>().asDiagonal() * fading.g_irs_ap[j] *
          fading.h_worker_irs[j].col(k).asDiagonal();
    }
  }
  return out;
}

/// The affine map v -> [h_1 ... h_N_W] without any modulus requirement.
inline CMatrix apply_affine(const std::vector<ChannelDecomposition>& decomp,
                            const CVector& stacked) {
  detail::require(!decomp.empty(), "empty channel decomposition");
  const auto na = decomp.front().h_d.size();
  CMatrix h(na, static_cast<Eigen::Index>(decomp.size()));
  for (std::size_t k = 0; k < decomp.size(); ++k) {
    detail::require(decomp[k].H_r.cols() == stacked.size(), "phase vector length mismatch");
    h.col(static_cast<Eigen::Index>(k)) = decomp[k].h_d;
    if (stacked.size() > 0) h.col(static_cast<Eigen::Index>(k)) += decomp[k].H_r * stacked;
  }
  return h;
}

/// N_A x N_W effective channel matrix for the given phases.
inline CMatrix effective_channels(const std::vector<ChannelDecomposition>& decomp,
                                  const PhaseConfig& phases) {
  detail::require(phases.max_modulus_error() <= kModulusTolerance,
                  "phase entries must have unit modulus");
  return apply_affine(decomp, phases.stacked());
}

/// Direct paths only (the no-IRS channel).
inline CMatrix direct_channels(const std::vector<ChannelDecomposition>& decomp) {
  return apply_affine(decomp, CVector::Zero(decomp.empty() ? 0 : decomp.front().H_r.cols()));
}

}  // namespace aircomp
