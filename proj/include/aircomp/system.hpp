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
#include <limits>
#include <numbers>
#include <numeric>
#include <vector>

#include "aircomp/channel.hpp"
#include "aircomp/types.hpp"

namespace aircomp {

inline constexpr double kInfiniteCapacity = std::numeric_limits<double>::infinity();

struct SystemParams {
  double power = 1.0;                        // P, linear
  double noise_power = 1.0;                  // sigma_z^2, linear
  double capacity = kInfiniteCapacity;       // fronthaul C, bit/sample
  std::vector<double> theta_power;           // sigma_{theta,k}^2 per worker

  static SystemParams uniform(int num_workers, double power, double noise_power,
                              double capacity, double theta_power = 1.0) {
    return {power, noise_power, capacity,
            std::vector<double>(static_cast<std::size_t>(num_workers), theta_power)};
  }

  int num_workers() const { return static_cast<int>(theta_power.size()); }
  double target_power() const {
    return std::accumulate(theta_power.begin(), theta_power.end(), 0.0);
  }
  bool infinite_capacity() const { return std::isinf(capacity); }

  /// 2^C - 1, the fronthaul distortion divisor.
  double capacity_factor() const {
    return infinite_capacity() ? kInfiniteCapacity : std::expm1(capacity * std::numbers::ln2);
  }

  void validate() const {
    if (!(power > 0.0) || !std::isfinite(power)) throw ConfigError("power must be > 0");
    if (!(noise_power > 0.0) || !std::isfinite(noise_power))
      throw ConfigError("noise power must be > 0");
    if (!(capacity > 0.0)) throw ConfigError("fronthaul capacity must be > 0");
    if (theta_power.empty()) throw ConfigError("at least one worker is required");
    for (double s : theta_power)
      if (!(s > 0.0) || !std::isfinite(s)) throw ConfigError("parameter powers must be > 0");
  }
};

struct QuantizationProfile {
  RVector sigma_y2;  // received variance per AP
  RVector omega;     // quantization noise power per AP
};

/// Full-power scaling alpha_k = sqrt(P / sigma_{theta,k}^2).
inline RVector transmit_scale(const SystemParams& params) {
  RVector a(params.num_workers());
  for (int k = 0; k < params.num_workers(); ++k)
    a(k) = std::sqrt(params.power / params.theta_power[k]);
  return a;
}

/// Received variance and the minimum distortion meeting the fronthaul rate
/// with equality.
inline QuantizationProfile quantization(const CMatrix& channels, const SystemParams& params) {
  if (!(params.capacity > 0.0)) throw ConfigError("fronthaul capacity must be > 0");
  QuantizationProfile q;
  q.sigma_y2 = channels.rowwise().squaredNorm() * params.power;
  q.sigma_y2.array() += params.noise_power;
  if (params.infinite_capacity())
    q.omega = RVector::Zero(channels.rows());
  else
    q.omega = q.sigma_y2 / params.capacity_factor();
  return q;
}

/// Mean squared error of f^H y_hat against the sum of parameters, for a
/// given effective channel matrix (N_A x N_W).
inline double mse_for_channels(const CMatrix& channels, const CVector& f,
                               const SystemParams& params) {
  detail::require(channels.cols() == params.num_workers(), "worker count mismatch");
  detail::require(channels.rows() == f.size(), "detector length mismatch");
  const RVector alpha = transmit_scale(params);
  const QuantizationProfile q = quantization(channels, params);
  const CVector fh = channels.adjoint() * f;  // conj(f^H h_k)
  double e = 0.0;
  for (int k = 0; k < params.num_workers(); ++k)
    e += std::norm(alpha(k) * std::conj(fh(k)) - 1.0) * params.theta_power[k];
  e += (f.cwiseAbs2().array() * (params.noise_power + q.omega.array())).sum();
  return e;
}

inline double mse(const std::vector<ChannelDecomposition>& decomp, const PhaseConfig& phases,
                  const CVector& f, const SystemParams& params) {
  return mse_for_channels(effective_channels(decomp, phases), f, params);
}

inline double normalized_mse(double mse_value, const SystemParams& params) {
  return mse_value / params.target_power();
}

}  // namespace aircomp
