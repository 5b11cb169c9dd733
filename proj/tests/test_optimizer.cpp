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

#include <gtest/gtest.h>

#include <numbers>

#include "aircomp/optimizer.hpp"
#include "test_util.hpp"

namespace aircomp {
namespace {

TEST(Alternate, SinglePhaseAlignsWithDirectPath) {
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    const auto inst = testing::make_instance(1, 1, 1, 1, kInfiniteCapacity, seed);
    const auto d = decompose(inst.topo, inst.fading);
    const cdouble hd = d[0].h_d(0), hr = d[0].H_r(0, 0);
    double grid_best = 0.0;
    const int grid = 4096;
    for (int n = 0; n < grid; ++n)
      grid_best = std::max(grid_best, std::abs(hd + hr * std::polar(1.0, 2 * std::numbers::pi * n / grid)));
    const double resolution = std::abs(hr) * (2 * std::numbers::pi / grid);

    AlternateOptions o;
    o.delta = 1e-14;
    o.max_outer = 2000;
    o.ccp.delta = 1e-14;
    o.ccp.sdp.tol = 1e-9;
    const Solution s = alternate(inst.topo, inst.fading, inst.params, o);
    const double got = std::abs(effective_channels(d, s.phases)(0, 0));
    EXPECT_GE(got, grid_best - resolution) << "seed " << seed;
    EXPECT_NEAR(got, std::abs(hd) + std::abs(hr), 1e-6);
  }
}

TEST(Alternate, FrozenPhasesReduceToClosedFormDetector) {
  const auto inst = testing::make_instance(4, 3, 2, 3, 3.0, 2);
  AlternateOptions o;
  o.optimize_phases = false;
  const Solution s = alternate(inst.topo, inst.fading, inst.params, o);
  const auto d = decompose(inst.topo, inst.fading);
  const CVector f = mmse_detector(effective_channels(d, PhaseConfig::ones(2, 3)), inst.params).f;
  EXPECT_EQ(s.detector.f, f);
  EXPECT_EQ(s.iterations, 1);
  EXPECT_EQ(s.phases.stacked(), CVector::Ones(6));
}

TEST(Alternate, FullRunInvariants) {
  for (std::uint64_t seed = 10; seed < 16; ++seed) {
    const auto inst = testing::make_instance(4, 2, 2, 4, 1.0 + seed % 4, seed);
    const auto d = decompose(inst.topo, inst.fading);
    const PhaseConfig init = PhaseConfig::ones(2, 4);
    const CMatrix h0 = effective_channels(d, init);
    const double initial = mse_for_channels(h0, mmse_detector(h0, inst.params).f, inst.params);

    const Solution s = alternate(inst.topo, inst.fading, inst.params);
    EXPECT_LE(s.mse, initial + 1e-9);
    EXPECT_LE(s.normalized_mse, 1.0 + 1e-9);
    EXPECT_GE(s.normalized_mse, 0.0);
    EXPECT_NEAR(s.mse, mse(d, s.phases, s.detector.f, inst.params), 1e-12);
    EXPECT_LE(s.phases.max_modulus_error(), 1e-12);
    ASSERT_FALSE(s.trace.empty());
    for (const auto& r : s.trace) EXPECT_LE(r.mse_after_detector, r.mse_after_projection + 1e-9);
    EXPECT_LE(s.stats.max_sdp_diag_error, 1e-8);
    EXPECT_GE(s.stats.min_sdp_eigenvalue, -1e-8);
  }
}

TEST(Alternate, RandomInitializationIsSeeded) {
  const auto inst = testing::make_instance(3, 2, 1, 3, 3.0, 4);
  AlternateOptions o;
  o.init = PhaseInit::kRandom;
  o.init_seed = 77;
  const Solution a = alternate(inst.topo, inst.fading, inst.params, o);
  const Solution b = alternate(inst.topo, inst.fading, inst.params, o);
  EXPECT_EQ(a.phases.stacked(), b.phases.stacked());
  EXPECT_EQ(a.mse, b.mse);
}

TEST(Alternate, RestartsNeverHurt) {
  for (std::uint64_t seed = 20; seed < 24; ++seed) {
    const auto inst = testing::make_instance(2, 2, 1, 2, 4.0, seed, 20.0);
    AlternateOptions o;
    const Solution one = alternate(inst.topo, inst.fading, inst.params, o);
    o.restarts = 3;
    const Solution many = alternate(inst.topo, inst.fading, inst.params, o);
    EXPECT_LE(many.mse, one.mse);
    EXPECT_GE(many.stats.sdp_solves, one.stats.sdp_solves);
    EXPECT_NEAR(many.mse, mse(decompose(inst.topo, inst.fading), many.phases, many.detector.f,
                              inst.params), 1e-12);
  }
  const auto inst = testing::make_instance(2, 2, 1, 2, 4.0, 1);
  AlternateOptions bad;
  bad.restarts = -1;
  EXPECT_THROW(alternate(inst.topo, inst.fading, inst.params, bad), ContractViolation);
}

TEST(Baselines, NoIrsMatchesAlternateWithoutReflectors) {
  const auto inst = testing::make_instance(5, 3, 0, 4, 2.0, 6);
  const Solution a = alternate(inst.topo, inst.fading, inst.params);
  const Solution b = baseline_no_irs(inst.topo, inst.fading, inst.params);
  EXPECT_DOUBLE_EQ(a.mse, b.mse);
  EXPECT_EQ(a.detector.f, b.detector.f);
}

TEST(Baselines, NoIrsScalarChain) {
  Topology t;
  t.params.irs_elements = 1;
  t.workers = {Point(0, 0)};
  t.aps = {Point(0, 0)};
  t.rho_direct = Eigen::MatrixXd::Ones(1, 1);
  FadingRealization f;
  f.h_direct = CMatrix::Ones(1, 1);
  const SystemParams p{1.0, 1.0, kInfiniteCapacity, {1.0}};
  const Solution s = baseline_no_irs(t, f, p);
  EXPECT_NEAR(s.normalized_mse, 0.5, 1e-15);
  EXPECT_TRUE(s.phases.v.empty());
}

TEST(Baselines, NoIrsIgnoresReflectedFading) {
  auto inst = testing::make_instance(4, 2, 2, 3, 2.0, 7);
  const double before = baseline_no_irs(inst.topo, inst.fading, inst.params).mse;
  for (auto& g : inst.fading.g_irs_ap) g *= cdouble(0.3, -2.0);
  EXPECT_EQ(baseline_no_irs(inst.topo, inst.fading, inst.params).mse, before);
}

TEST(Baselines, RandomPhasesAreSeedDeterministic) {
  const auto inst = testing::make_instance(4, 2, 2, 3, 2.0, 8);
  const Solution a = baseline_random_phases(inst.topo, inst.fading, inst.params, 5);
  const Solution b = baseline_random_phases(inst.topo, inst.fading, inst.params, 5);
  EXPECT_EQ(a.phases.stacked(), b.phases.stacked());
  EXPECT_EQ(a.mse, b.mse);
  EXPECT_EQ(a.detector.f, b.detector.f);
}

TEST(Baselines, OptimizedBeatsRandomOnAverage) {
  double opt = 0.0, rnd = 0.0;
  const int draws = 200;
  for (int n = 0; n < draws; ++n) {
    const auto inst = testing::make_instance(3, 2, 1, 3, 3.0, 1000 + n);
    opt += alternate(inst.topo, inst.fading, inst.params).normalized_mse;
    rnd += baseline_random_phases(inst.topo, inst.fading, inst.params, 5000 + n).normalized_mse;
  }
  EXPECT_LT(opt / draws, rnd / draws);
}

TEST(Baselines, RandomPhasesCanLoseToNoIrs) {
  // Destructive interference is possible on individual draws.
  bool found = false;
  for (int n = 0; n < 200 && !found; ++n) {
    const auto inst = testing::make_instance(1, 1, 1, 1, kInfiniteCapacity, 3000 + n);
    found = baseline_random_phases(inst.topo, inst.fading, inst.params, n).mse >
            baseline_no_irs(inst.topo, inst.fading, inst.params).mse;
  }
  EXPECT_TRUE(found);
}

}  // namespace
}  // namespace aircomp
