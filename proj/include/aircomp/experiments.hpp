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
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <map>
#include <mutex>
#include <sstream>
#include <stdexcept>
#include <string>
#include <thread>
#include <tuple>
#include <vector>

#include "aircomp/optimizer.hpp"
#include "aircomp/rng.hpp"
#include "aircomp/scenario.hpp"
#include "aircomp/system.hpp"

namespace aircomp {

enum class Scheme { kOptimized = 0, kRandom = 1, kNoIrs = 2 };
enum class SweepKind { kCapacity, kNumAps };

inline std::string to_string(Scheme s) {
  switch (s) {
    case Scheme::kOptimized: return "optimized";
    case Scheme::kRandom: return "random";
    case Scheme::kNoIrs: return "no_irs";
  }
  return "unknown";
}

inline Scheme scheme_from_string(const std::string& s) {
  if (s == "optimized") return Scheme::kOptimized;
  if (s == "random") return Scheme::kRandom;
  if (s == "no_irs") return Scheme::kNoIrs;
  throw ConfigError("unknown scheme: " + s);
}

struct ExperimentConfig {
  SweepKind sweep = SweepKind::kCapacity;
  std::vector<double> sweep_values{1, 2, 3, 4, 5, 6};
  TopologyParams topology;              // num_aps ignored for an AP-count sweep
  double capacity = 5.0;                // used when sweeping the AP count
  std::vector<double> snr_db{5.0, 20.0};
  double noise_power = 1.0;
  double theta_power = 1.0;
  int trials = 100;
  std::uint64_t master_seed = 1;
  std::vector<Scheme> schemes{Scheme::kOptimized, Scheme::kRandom, Scheme::kNoIrs};
  AlternateOptions solver;
  bool fixed_topology = false;          // one placement shared by every trial
  int threads = 0;                      // 0: hardware concurrency

  void validate() const {
    if (trials < 1) throw ConfigError("trials must be >= 1");
    if (sweep_values.empty()) throw ConfigError("sweep list must be non-empty");
    if (snr_db.empty()) throw ConfigError("SNR list must be non-empty");
    if (schemes.empty()) throw ConfigError("scheme set must be non-empty");
    for (double s : sweep_values) {
      if (sweep == SweepKind::kNumAps && (s < 1 || s != std::floor(s)))
        throw ConfigError("AP counts must be positive integers");
      if (sweep == SweepKind::kCapacity && !(s > 0))
        throw ConfigError("fronthaul capacities must be > 0");
    }
  }
};

/// Capacity sweep: N_W=10, N_A=5, N_I=2, n_I=10, C swept, SNR in {5, 20} dB.
inline ExperimentConfig capacity_sweep_defaults() {
  ExperimentConfig c;
  c.sweep = SweepKind::kCapacity;
  c.sweep_values = {1, 2, 3, 4, 5, 6};
  c.topology.num_workers = 10;
  c.topology.num_aps = 5;
  c.topology.num_irs = 2;
  c.topology.irs_elements = 10;
  c.snr_db = {5.0, 20.0};
  return c;
}

/// AP-count sweep: N_W=5, N_I=2, n_I=20, C=5, SNR 10 dB, N_A swept.
inline ExperimentConfig ap_sweep_defaults() {
  ExperimentConfig c;
  c.sweep = SweepKind::kNumAps;
  c.sweep_values = {2, 3, 4, 5, 6, 7, 8, 9, 10, 11, 12};
  c.topology.num_workers = 5;
  c.topology.num_irs = 2;
  c.topology.irs_elements = 20;
  c.capacity = 5.0;
  c.snr_db = {10.0};
  return c;
}

struct ResultRecord {
  Scheme scheme = Scheme::kOptimized;
  double sweep_value = 0.0;
  double snr_db = 0.0;
  int trial = 0;
  std::uint64_t seed = 0;
  double normalized_mse = 0.0;
  int iterations = 0;
  double wall_time = 0.0;  // seconds; outside the determinism contract
  // In-memory diagnostics, not exported.
  bool converged = true;
  bool inner_failure = false;
  SolveStats stats;
};

struct TrialFailure {
  Scheme scheme;
  double sweep_value;
  double snr_db;
  int trial;
  std::string message;
};

struct SweepResult {
  std::vector<ResultRecord> records;
  std::vector<TrialFailure> failures;
};

inline std::uint64_t trial_seed(std::uint64_t master, int trial) {
  return derive_seed(master, Stream::kTrial, {static_cast<std::uint64_t>(trial)});
}

inline bool record_less(const ResultRecord& a, const ResultRecord& b) {
  return std::tuple(static_cast<int>(a.scheme), a.sweep_value, a.snr_db, a.trial) <
         std::tuple(static_cast<int>(b.scheme), b.sweep_value, b.snr_db, b.trial);
}

/// Runs every requested scheme on one realization.
inline void run_cell(const ExperimentConfig& cfg, double sweep_value, double snr_db, int trial,
                     std::vector<ResultRecord>& out, std::vector<TrialFailure>& failures) {
  const std::uint64_t seed = trial_seed(cfg.master_seed, trial);
  TopologyParams tp = cfg.topology;
  double capacity = cfg.capacity;
  if (cfg.sweep == SweepKind::kCapacity) capacity = sweep_value;
  else tp.num_aps = static_cast<int>(sweep_value);

  const std::uint64_t topo_seed = cfg.fixed_topology ? cfg.master_seed : seed;
  Topology topo;
  FadingRealization fading;
  SystemParams params;
  try {
    topo = gen_topology(tp, topo_seed);
    fading = sample_fading(topo, seed);
    params = SystemParams::uniform(tp.num_workers,
                                   cfg.noise_power * std::pow(10.0, snr_db / 10.0),
                                   cfg.noise_power, capacity, cfg.theta_power);
    params.validate();
  } catch (const std::exception& e) {
    for (Scheme scheme : cfg.schemes)
      failures.push_back({scheme, sweep_value, snr_db, trial, e.what()});
    return;
  }

  for (Scheme scheme : cfg.schemes) {
    const auto t0 = std::chrono::steady_clock::now();
    try {
      Solution sol;
      switch (scheme) {
        case Scheme::kOptimized: {
          AlternateOptions o = cfg.solver;
          o.init_seed = derive_seed(seed, Stream::kInitPhases);
          sol = alternate(topo, fading, params, o);
          break;
        }
        case Scheme::kRandom:
          sol = baseline_random_phases(topo, fading, params,
                                       derive_seed(seed, Stream::kRandomPhases));
          break;
        case Scheme::kNoIrs:
          sol = baseline_no_irs(topo, fading, params);
          break;
      }
      ResultRecord r;
      r.scheme = scheme;
      r.sweep_value = sweep_value;
      r.snr_db = snr_db;
      r.trial = trial;
      r.seed = seed;
      r.normalized_mse = sol.normalized_mse;
      r.iterations = sol.iterations;
      r.wall_time =
          std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
      r.converged = sol.converged;
      r.inner_failure = sol.inner_failure;
      r.stats = sol.stats;
      out.push_back(r);
    } catch (const std::exception& e) {
      failures.push_back({scheme, sweep_value, snr_db, trial, e.what()});
    }
  }
}

/// Monte Carlo sweep. Every (sweep value, SNR, trial) cell is an independent
/// task; all schemes inside a cell share one topology and fading draw. Trial
/// t uses the same realization at every sweep value and SNR.
inline SweepResult run_sweep(const ExperimentConfig& cfg) {
  cfg.validate();
  struct Task {
    double sweep;
    double snr;
    int trial;
  };
  std::vector<Task> tasks;
  for (double s : cfg.sweep_values)
    for (double snr : cfg.snr_db)
      for (int t = 0; t < cfg.trials; ++t) tasks.push_back({s, snr, t});

  std::vector<std::vector<ResultRecord>> recs(tasks.size());
  std::vector<std::vector<TrialFailure>> fails(tasks.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < tasks.size(); i = next++)
      run_cell(cfg, tasks[i].sweep, tasks[i].snr, tasks[i].trial, recs[i], fails[i]);
  };
  unsigned n = cfg.threads > 0 ? static_cast<unsigned>(cfg.threads)
                               : std::max(1u, std::thread::hardware_concurrency());
  n = std::min<unsigned>(n, static_cast<unsigned>(tasks.size()));
  if (n <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (unsigned w = 0; w < n; ++w) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }

  SweepResult res;
  for (std::size_t i = 0; i < tasks.size(); ++i) {
    res.records.insert(res.records.end(), recs[i].begin(), recs[i].end());
    res.failures.insert(res.failures.end(), fails[i].begin(), fails[i].end());
  }
  std::sort(res.records.begin(), res.records.end(), record_less);
  return res;
}

// ---------------------------------------------------------------------------
// CSV

inline constexpr const char* kCsvHeader =
    "scheme,sweep_value,snr_db,trial,seed,normalized_mse,iterations,wall_time_s";

inline std::string format_double(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

inline std::string to_csv_row(const ResultRecord& r, bool with_wall_time = true) {
  std::ostringstream os;
  os << to_string(r.scheme) << ',' << format_double(r.sweep_value) << ','
     << format_double(r.snr_db) << ',' << r.trial << ',' << r.seed << ','
     << format_double(r.normalized_mse) << ',' << r.iterations << ',';
  if (with_wall_time) os << format_double(r.wall_time);
  return os.str();
}

/// Records in deterministic order. With with_wall_time = false the timing
/// column is left empty so that reruns compare byte for byte.
inline std::string to_csv(std::vector<ResultRecord> records, bool with_wall_time = true) {
  std::sort(records.begin(), records.end(), record_less);
  std::string out = std::string(kCsvHeader) + '\n';
  for (const auto& r : records) out += to_csv_row(r, with_wall_time) + '\n';
  return out;
}

inline void export_csv(const std::vector<ResultRecord>& records, const std::string& path,
                       bool with_wall_time = true) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot open for writing: " + path);
  f << to_csv(records, with_wall_time);
  if (!f) throw std::runtime_error("write failed: " + path);
}

inline std::vector<ResultRecord> parse_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line) || line != kCsvHeader)
    throw std::runtime_error("unexpected CSV header");
  std::vector<ResultRecord> out;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::vector<std::string> cols;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) cols.push_back(cell);
    if (cols.size() == 7) cols.emplace_back();
    if (cols.size() != 8) throw std::runtime_error("malformed CSV row: " + line);
    ResultRecord r;
    r.scheme = scheme_from_string(cols[0]);
    r.sweep_value = std::stod(cols[1]);
    r.snr_db = std::stod(cols[2]);
    r.trial = std::stoi(cols[3]);
    r.seed = std::stoull(cols[4]);
    r.normalized_mse = std::stod(cols[5]);
    r.iterations = std::stoi(cols[6]);
    r.wall_time = cols[7].empty() ? 0.0 : std::stod(cols[7]);
    out.push_back(r);
  }
  return out;
}

inline std::vector<ResultRecord> parse_csv_file(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw std::runtime_error("cannot open for reading: " + path);
  return parse_csv(f);
}

// ---------------------------------------------------------------------------
// Aggregation

struct CellSummary {
  Scheme scheme;
  double sweep_value;
  double snr_db;
  int count = 0;
  double mean = 0.0;
  double stderr_ = 0.0;
};

inline std::pair<double, double> mean_and_stderr(const std::vector<double>& xs) {
  if (xs.empty()) return {0.0, 0.0};
  double m = 0.0;
  for (double x : xs) m += x;
  m /= static_cast<double>(xs.size());
  if (xs.size() < 2) return {m, 0.0};
  double ss = 0.0;
  for (double x : xs) ss += (x - m) * (x - m);
  const double var = ss / static_cast<double>(xs.size() - 1);
  return {m, std::sqrt(var / static_cast<double>(xs.size()))};
}

inline std::vector<CellSummary> aggregate(const std::vector<ResultRecord>& records) {
  std::map<std::tuple<int, double, double>, std::vector<double>> cells;
  for (const auto& r : records)
    cells[{static_cast<int>(r.scheme), r.sweep_value, r.snr_db}].push_back(r.normalized_mse);
  std::vector<CellSummary> out;
  for (const auto& [key, xs] : cells) {
    auto [m, se] = mean_and_stderr(xs);
    out.push_back({static_cast<Scheme>(std::get<0>(key)), std::get<1>(key), std::get<2>(key),
                   static_cast<int>(xs.size()), m, se});
  }
  return out;
}

inline void export_aggregate_csv(const std::vector<CellSummary>& cells, const std::string& path) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot open for writing: " + path);
  f << "scheme,sweep_value,snr_db,count,mean_normalized_mse,stderr\n";
  for (const auto& c : cells)
    f << to_string(c.scheme) << ',' << format_double(c.sweep_value) << ','
      << format_double(c.snr_db) << ',' << c.count << ',' << format_double(c.mean) << ','
      << format_double(c.stderr_) << '\n';
  if (!f) throw std::runtime_error("write failed: " + path);
}

/// Mean and standard error of (first - second) over trials present for both
/// schemes at one (sweep value, SNR) point.
inline std::pair<double, double> paired_difference(const std::vector<ResultRecord>& records,
                                                   Scheme first, Scheme second,
                                                   double sweep_value, double snr_db) {
  std::map<int, double> a, b;
  for (const auto& r : records) {
    if (r.sweep_value != sweep_value || r.snr_db != snr_db) continue;
    if (r.scheme == first) a[r.trial] = r.normalized_mse;
    if (r.scheme == second) b[r.trial] = r.normalized_mse;
  }
  std::vector<double> d;
  for (const auto& [t, x] : a)
    if (auto it = b.find(t); it != b.end()) d.push_back(x - it->second);
  return mean_and_stderr(d);
}

}  // namespace aircomp
