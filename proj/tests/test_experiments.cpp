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

#include <filesystem>
#include <fstream>
#include <sstream>

#include "aircomp/config.hpp"
#include "aircomp/experiments.hpp"

namespace aircomp {
namespace {

ExperimentConfig small_config() {
  ExperimentConfig c = capacity_sweep_defaults();
  c.topology.num_workers = 3;
  c.topology.num_aps = 2;
  c.topology.num_irs = 1;
  c.topology.irs_elements = 3;
  c.sweep_values = {2, 4};
  c.snr_db = {10.0};
  c.trials = 3;
  c.threads = 1;
  return c;
}

TEST(Sweep, SingleTrialSingleScheme) {
  ExperimentConfig c = small_config();
  c.sweep_values = {3};
  c.trials = 1;
  c.schemes = {Scheme::kNoIrs};
  const SweepResult r = run_sweep(c);
  ASSERT_EQ(r.records.size(), 1u);
  EXPECT_TRUE(r.failures.empty());
  EXPECT_EQ(r.records[0].scheme, Scheme::kNoIrs);
  EXPECT_EQ(r.records[0].sweep_value, 3.0);
  EXPECT_EQ(r.records[0].trial, 0);
}

TEST(Sweep, SchemesSharePerTrialSeeds) {
  const SweepResult r = run_sweep(small_config());
  EXPECT_EQ(r.records.size(), 3u * 2u * 3u);
  for (const auto& x : r.records) EXPECT_EQ(x.seed, trial_seed(1, x.trial));
  std::set<std::uint64_t> seeds;
  for (const auto& x : r.records) seeds.insert(x.seed);
  EXPECT_EQ(seeds.size(), 3u);
}

TEST(Sweep, NoIrsIndependentOfCapacityOnlyThroughQuantization) {
  // Same trial, same draw: infinite-capacity limit dominates every finite C.
  ExperimentConfig c = small_config();
  c.schemes = {Scheme::kNoIrs};
  c.sweep_values = {1, 3, 6};
  const SweepResult r = run_sweep(c);
  for (int t = 0; t < c.trials; ++t) {
    std::vector<double> v;
    for (const auto& x : r.records)
      if (x.trial == t) v.push_back(x.normalized_mse);
    ASSERT_EQ(v.size(), 3u);
    EXPECT_GE(v[0], v[1]);
    EXPECT_GE(v[1], v[2]);
  }
}

TEST(Sweep, DeterministicAcrossThreadCounts) {
  ExperimentConfig c = small_config();
  c.threads = 1;
  const auto a = to_csv(run_sweep(c).records, false);
  c.threads = 4;
  const auto b = to_csv(run_sweep(c).records, false);
  EXPECT_EQ(a, b);
  EXPECT_EQ(a, to_csv(run_sweep(c).records, false));
}

TEST(Sweep, ApCountSweepUsesRequestedCounts) {
  ExperimentConfig c = ap_sweep_defaults();
  c.topology.num_workers = 2;
  c.topology.irs_elements = 2;
  c.sweep_values = {1, 3};
  c.trials = 2;
  c.schemes = {Scheme::kNoIrs, Scheme::kRandom};
  c.threads = 2;
  const SweepResult r = run_sweep(c);
  EXPECT_TRUE(r.failures.empty());
  EXPECT_EQ(r.records.size(), 8u);
}

TEST(Sweep, FailuresAreRecordedNotThrown) {
  ExperimentConfig c = small_config();
  c.noise_power = 0.0;
  c.trials = 2;
  c.threads = 2;
  const SweepResult r = run_sweep(c);
  EXPECT_TRUE(r.records.empty());
  EXPECT_EQ(r.failures.size(), 3u * 2u * 2u);
}

TEST(Sweep, InvalidConfigRejected) {
  ExperimentConfig c = small_config();
  c.trials = 0;
  EXPECT_THROW(run_sweep(c), ConfigError);
  c = small_config();
  c.sweep_values.clear();
  EXPECT_THROW(run_sweep(c), ConfigError);
  c = small_config();
  c.sweep = SweepKind::kNumAps;
  c.sweep_values = {2.5};
  EXPECT_THROW(run_sweep(c), ConfigError);
  c = small_config();
  c.sweep_values = {0};
  EXPECT_THROW(run_sweep(c), ConfigError);
}

std::vector<ResultRecord> three_records() {
  std::vector<ResultRecord> v(3);
  v[0] = {Scheme::kOptimized, 1.0, 5.0, 0, 11, 0.25, 4, 0.5};
  v[1] = {Scheme::kRandom, 1.0, 5.0, 0, 11, 0.1 + 0.2, 1, 0.01};
  v[2] = {Scheme::kNoIrs, kInfiniteCapacity, 20.0, 1, 12, 1.0 / 3.0, 1, 0.0};
  return v;
}

TEST(Csv, LineCountAndHeader) {
  const std::string s = to_csv(three_records());
  std::istringstream in(s);
  std::string line;
  int n = 0;
  std::getline(in, line);
  EXPECT_EQ(line, kCsvHeader);
  ++n;
  while (std::getline(in, line)) ++n;
  EXPECT_EQ(n, 4);
}

TEST(Csv, RoundTripIsExact) {
  const auto recs = three_records();
  std::istringstream in(to_csv(recs));
  const auto back = parse_csv(in);
  ASSERT_EQ(back.size(), recs.size());
  for (std::size_t i = 0; i < recs.size(); ++i) {
    EXPECT_EQ(back[i].scheme, recs[i].scheme);
    EXPECT_EQ(back[i].sweep_value, recs[i].sweep_value);
    EXPECT_EQ(back[i].snr_db, recs[i].snr_db);
    EXPECT_EQ(back[i].trial, recs[i].trial);
    EXPECT_EQ(back[i].seed, recs[i].seed);
    EXPECT_EQ(back[i].normalized_mse, recs[i].normalized_mse);
    EXPECT_EQ(back[i].iterations, recs[i].iterations);
    EXPECT_EQ(back[i].wall_time, recs[i].wall_time);
  }
}

TEST(Csv, EmptyHasHeaderOnly) {
  EXPECT_EQ(to_csv({}), std::string(kCsvHeader) + "\n");
}

TEST(Csv, FileRoundTripAndUnwritablePath) {
  const auto path = std::filesystem::temp_directory_path() / "aircomp_csv_test.csv";
  export_csv(three_records(), path.string());
  EXPECT_EQ(parse_csv_file(path.string()).size(), 3u);
  std::filesystem::remove(path);
  EXPECT_THROW(export_csv(three_records(), "/nonexistent-dir/x/out.csv"), std::runtime_error);
}

TEST(Aggregate, MeanAndStandardError) {
  auto [m, se] = mean_and_stderr({1.0, 2.0, 3.0, 4.0});
  EXPECT_DOUBLE_EQ(m, 2.5);
  EXPECT_NEAR(se, std::sqrt((2.25 + 0.25 + 0.25 + 2.25) / 3.0 / 4.0), 1e-15);
  auto [m1, se1] = mean_and_stderr({7.0});
  EXPECT_EQ(m1, 7.0);
  EXPECT_EQ(se1, 0.0);
}

TEST(Aggregate, GroupsBySchemeAndPoint) {
  std::vector<ResultRecord> v;
  for (int t = 0; t < 4; ++t) {
    v.push_back({Scheme::kOptimized, 2.0, 5.0, t, 0, 0.1 * t, 1, 0});
    v.push_back({Scheme::kRandom, 2.0, 5.0, t, 0, 0.1 * t + 0.05, 1, 0});
  }
  const auto cells = aggregate(v);
  ASSERT_EQ(cells.size(), 2u);
  EXPECT_EQ(cells[0].count, 4);
  EXPECT_NEAR(cells[0].mean, 0.15, 1e-15);
  auto [d, se] = paired_difference(v, Scheme::kRandom, Scheme::kOptimized, 2.0, 5.0);
  EXPECT_NEAR(d, 0.05, 1e-15);
  EXPECT_NEAR(se, 0.0, 1e-15);
}

TEST(Config, JsonOverridesDefaults) {
  ExperimentConfig c = capacity_sweep_defaults();
  apply_json(c, nlohmann::json::parse(R"({
    "sweep": "num_aps", "sweep_values": [2, 4], "num_workers": 4, "capacity": "inf",
    "snr_db": [0, 10], "trials": 7, "seed": 99, "schemes": ["no_irs", "random"],
    "solver": {"gamma": 0.5, "init": "random", "sdp_tol": 1e-6}
  })"));
  EXPECT_EQ(c.sweep, SweepKind::kNumAps);
  EXPECT_EQ(c.sweep_values, (std::vector<double>{2, 4}));
  EXPECT_EQ(c.topology.num_workers, 4);
  EXPECT_TRUE(std::isinf(c.capacity));
  EXPECT_EQ(c.trials, 7);
  EXPECT_EQ(c.master_seed, 99u);
  EXPECT_EQ(c.schemes, (std::vector<Scheme>{Scheme::kNoIrs, Scheme::kRandom}));
  EXPECT_EQ(c.solver.gamma, 0.5);
  EXPECT_EQ(c.solver.init, PhaseInit::kRandom);
  EXPECT_EQ(c.solver.ccp.sdp.tol, 1e-6);
}

TEST(Config, RoundTripThroughJson) {
  ExperimentConfig c = ap_sweep_defaults();
  c.capacity = kInfiniteCapacity;
  ExperimentConfig d = capacity_sweep_defaults();
  apply_json(d, to_json(c));
  EXPECT_EQ(to_json(d), to_json(c));
}

TEST(Config, UnknownKeysAndValuesRejected) {
  ExperimentConfig c;
  EXPECT_THROW(apply_json(c, nlohmann::json::parse(R"({"bogus": 1})")), ConfigError);
  EXPECT_THROW(apply_json(c, nlohmann::json::parse(R"({"solver": {"bogus": 1}})")),
               ConfigError);
  EXPECT_THROW(apply_json(c, nlohmann::json::parse(R"({"schemes": ["best"]})")), ConfigError);
  EXPECT_THROW(apply_json(c, nlohmann::json::parse(R"({"sweep": "power"})")), ConfigError);
  EXPECT_THROW(apply_json(c, nlohmann::json::parse("[1, 2]")), ConfigError);
  EXPECT_THROW(load_config_file(c, "/nonexistent/config.json"), ConfigError);
}

TEST(Schemes, StringRoundTrip) {
  for (Scheme s : {Scheme::kOptimized, Scheme::kRandom, Scheme::kNoIrs})
    EXPECT_EQ(scheme_from_string(to_string(s)), s);
  EXPECT_THROW(scheme_from_string("optimal"), ConfigError);
}

}  // namespace
}  // namespace aircomp
