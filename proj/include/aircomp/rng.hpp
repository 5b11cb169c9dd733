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
#include <initializer_list>
#include <random>

#include "aircomp/types.hpp"

namespace aircomp {

/// Named substreams of one master seed. Each (master, tag, indices...)
/// tuple maps to an independent 64-bit seed through SplitMix64 mixing, so
/// topology, fading and random-phase draws never share generator state.
enum class Stream : std::uint64_t {
  kTopology = 0x746f706f,
  kFading = 0x66616465,
  kInitPhases = 0x696e6974,
  kRandomPhases = 0x72616e64,
  kTrial = 0x7472696c,
};

inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

inline std::uint64_t derive_seed(std::uint64_t master, Stream tag,
                                 std::initializer_list<std::uint64_t> idx = {}) {
  std::uint64_t s = splitmix64(master ^ splitmix64(static_cast<std::uint64_t>(tag)));
  for (auto i : idx) s = splitmix64(s ^ splitmix64(i + 0x632be59bd9b4e019ULL));
  return s;
}

using Engine = std::mt19937_64;

/// Circularly symmetric complex Gaussian with unit variance.
class ComplexNormal {
 public:
  template <class Gen>
  cdouble operator()(Gen& g) {
    const double re = normal_(g);
    const double im = normal_(g);
    return {re, im};
  }

 private:
  std::normal_distribution<double> normal_{0.0, 0.70710678118654752440};
};

}  // namespace aircomp
