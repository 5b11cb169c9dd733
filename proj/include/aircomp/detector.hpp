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

#include <Eigen/Cholesky>

#include "aircomp/system.hpp"
#include "aircomp/types.hpp"

namespace aircomp {

struct Detector {
  CVector f;
};

/// Linear MMSE combiner for fixed channels:
/// f = (sum_k P h_k h_k^H + sigma_z^2 I + Omega)^{-1} sum_k alpha_k sigma_k^2 h_k.
inline Detector mmse_detector(const CMatrix& channels, const QuantizationProfile& quant,
                              const SystemParams& params) {
  detail::require(channels.allFinite(), "channels must be finite");
  detail::require(channels.cols() == params.num_workers(), "worker count mismatch");
  detail::require(quant.omega.size() == channels.rows(), "quantization profile length mismatch");
  detail::require(params.noise_power > 0.0, "noise power must be positive");
  const auto na = channels.rows();
  const RVector alpha = transmit_scale(params);

  CMatrix gram = params.power * (channels * channels.adjoint());
  gram.diagonal().array() += (params.noise_power + quant.omega.array()).cast<cdouble>();
  CVector rhs = CVector::Zero(na);
  for (int k = 0; k < params.num_workers(); ++k)
    rhs += (alpha(k) * params.theta_power[k]) * channels.col(k);

  Eigen::LLT<CMatrix> llt(gram);
  detail::require(llt.info() == Eigen::Success, "detector Gram matrix is not positive definite");
  return {llt.solve(rhs)};
}

/// Convenience: quantization profile recomputed from the channels first.
inline Detector mmse_detector(const CMatrix& channels, const SystemParams& params) {
  return mmse_detector(channels, quantization(channels, params), params);
}

}  // namespace aircomp
