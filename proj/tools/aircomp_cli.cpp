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

// Command-line harness for the Monte Carlo sweeps.
//
//   aircomp sweep-c  [options]   normalized MSE versus fronthaul capacity
//   aircomp sweep-na [options]   normalized MSE versus number of APs
//   aircomp single   [options]   one realization with a verbose trace

#include <cstdio>
#include <functional>
#include <iostream>
#include <memory>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "aircomp/aircomp.hpp"

namespace {

using aircomp::ExperimentConfig;

/// Options parsed into holders and applied on top of the defaults and the
/// --config file, so that explicit flags always win.
class Overrides {
 public:
  template <class T>
  void add(CLI::App* app, const std::string& name, const std::string& desc,
           std::function<void(ExperimentConfig&, const T&)> apply) {
    auto holder = std::make_shared<T>();
    CLI::Option* opt = app->add_option(name, *holder, desc);
    if constexpr (CLI::detail::is_mutable_container<T>::value) opt->delimiter(',');
    entries_.push_back([opt, holder, apply](ExperimentConfig& c) {
      if (opt->count() > 0) apply(c, *holder);
    });
  }

  void add_flag(CLI::App* app, const std::string& name, const std::string& desc,
                std::function<void(ExperimentConfig&)> apply) {
    auto holder = std::make_shared<bool>(false);
    CLI::Option* opt = app->add_flag(name, *holder, desc);
    entries_.push_back([opt, apply](ExperimentConfig& c) {
      if (opt->count() > 0) apply(c);
    });
  }

  void apply(ExperimentConfig& c) const {
    for (const auto& e : entries_) e(c);
  }

 private:
  std::vector<std::function<void(ExperimentConfig&)>> entries_;
};

struct Common {
  std::string config_path;
  std::string out_path;
  std::string aggregate_path;
  bool allow_failures = false;
  bool no_wall_time = false;
  Overrides overrides;
};

void add_config_options(CLI::App* app, Common& c, bool sweep) {
  app->add_option("--config", c.config_path, "JSON configuration file")->check(CLI::ExistingFile);
  auto& o = c.overrides;
  using Cfg = ExperimentConfig;
  o.add<std::uint64_t>(app, "--seed", "master seed", [](Cfg& x, const auto& v) { x.master_seed = v; });
  o.add<int>(app, "--workers", "number of workers N_W",
             [](Cfg& x, const auto& v) { x.topology.num_workers = v; });
  o.add<int>(app, "--aps", "number of APs N_A (ignored by sweep-na)",
             [](Cfg& x, const auto& v) { x.topology.num_aps = v; });
  o.add<int>(app, "--irs", "number of IRSs N_I", [](Cfg& x, const auto& v) { x.topology.num_irs = v; });
  o.add<int>(app, "--elements", "elements per IRS n_I",
             [](Cfg& x, const auto& v) { x.topology.irs_elements = v; });
  o.add<double>(app, "--radius", "deployment radius in meters",
                [](Cfg& x, const auto& v) { x.topology.radius = v; });
  o.add<double>(app, "--c0", "linear gain at 1 m", [](Cfg& x, const auto& v) { x.topology.c0 = v; });
  o.add<double>(app, "--eta", "path-loss exponent", [](Cfg& x, const auto& v) { x.topology.eta = v; });
  o.add<double>(app, "--min-distance", "distance floor in meters",
                [](Cfg& x, const auto& v) { x.topology.min_distance = v; });
  o.add<std::string>(app, "--capacity", "fronthaul capacity in bit/sample, or inf (ignored by sweep-c)",
                     [](Cfg& x, const auto& v) {
                       x.capacity = (v == "inf") ? aircomp::kInfiniteCapacity : std::stod(v);
                     });
  o.add<std::vector<double>>(app, "--snr-db", "P/sigma_z^2 values in dB",
                             [](Cfg& x, const auto& v) { x.snr_db = v; });
  o.add<double>(app, "--noise-power", "sigma_z^2", [](Cfg& x, const auto& v) { x.noise_power = v; });
  o.add<double>(app, "--theta-power", "sigma_theta^2 of every worker",
                [](Cfg& x, const auto& v) { x.theta_power = v; });
  o.add<double>(app, "--delta", "alternation stopping tolerance",
                [](Cfg& x, const auto& v) { x.solver.delta = v; });
  o.add<int>(app, "--max-outer", "alternation iteration cap",
             [](Cfg& x, const auto& v) { x.solver.max_outer = v; });
  o.add<double>(app, "--gamma", "rank penalty weight", [](Cfg& x, const auto& v) { x.solver.gamma = v; });
  o.add<std::string>(app, "--init", "initial phases: zero or random", [](Cfg& x, const auto& v) {
    if (v == "zero") x.solver.init = aircomp::PhaseInit::kZero;
    else if (v == "random") x.solver.init = aircomp::PhaseInit::kRandom;
    else throw aircomp::ConfigError("--init must be zero or random");
  });
  o.add_flag(app, "--cold-start", "start every CCP run from zero phases",
             [](Cfg& x) { x.solver.warm_start_ccp = false; });
  o.add_flag(app, "--absolute-gamma", "use gamma as an absolute weight",
             [](Cfg& x) { x.solver.relative_gamma = false; });
  o.add<int>(app, "--restarts", "extra runs from random phases, best kept",
             [](Cfg& x, const auto& v) { x.solver.restarts = v; });
  o.add<double>(app, "--ccp-delta", "CCP stopping tolerance",
                [](Cfg& x, const auto& v) { x.solver.ccp.delta = v; });
  o.add<int>(app, "--ccp-max-outer", "CCP iteration cap",
             [](Cfg& x, const auto& v) { x.solver.ccp.max_outer = v; });
  o.add<double>(app, "--sdp-tol", "inner SDP residual tolerance",
                [](Cfg& x, const auto& v) { x.solver.ccp.sdp.tol = v; });
  o.add<int>(app, "--sdp-max-iter", "inner SDP iteration cap",
             [](Cfg& x, const auto& v) { x.solver.ccp.sdp.max_iter = v; });
  o.add<double>(app, "--sdp-rho", "initial ADMM penalty",
                [](Cfg& x, const auto& v) { x.solver.ccp.sdp.rho = v; });
  if (!sweep) return;
  o.add<std::vector<double>>(app, "--values", "sweep values (C or N_A)",
                             [](Cfg& x, const auto& v) { x.sweep_values = v; });
  o.add<int>(app, "--trials", "Monte Carlo trials per point", [](Cfg& x, const auto& v) { x.trials = v; });
  o.add<std::vector<std::string>>(app, "--schemes", "subset of optimized, random, no_irs",
                                  [](Cfg& x, const auto& v) {
                                    x.schemes.clear();
                                    for (const auto& s : v) x.schemes.push_back(aircomp::scheme_from_string(s));
                                  });
  o.add_flag(app, "--fixed-topology", "share one placement across trials",
             [](Cfg& x) { x.fixed_topology = true; });
  o.add<int>(app, "--threads", "worker threads (0 = all cores)",
             [](Cfg& x, const auto& v) { x.threads = v; });
  app->add_option("--out", c.out_path, "per-trial CSV output path");
  app->add_option("--aggregate-out", c.aggregate_path, "per-cell mean/stderr CSV output path");
  app->add_flag("--allow-failures", c.allow_failures, "exit 0 even when trials fail");
  app->add_flag("--no-wall-time", c.no_wall_time, "leave the wall-time column empty");
}

ExperimentConfig resolve(ExperimentConfig base, const Common& c) {
  if (!c.config_path.empty()) aircomp::load_config_file(base, c.config_path);
  c.overrides.apply(base);
  return base;
}

int run_sweep_command(const ExperimentConfig& cfg, const Common& c) {
  const auto res = aircomp::run_sweep(cfg);
  if (!c.out_path.empty()) aircomp::export_csv(res.records, c.out_path, !c.no_wall_time);
  const auto cells = aircomp::aggregate(res.records);
  if (!c.aggregate_path.empty()) aircomp::export_aggregate_csv(cells, c.aggregate_path);

  std::printf("%-10s %10s %8s %6s %14s %12s\n", "scheme", "sweep", "snr_db", "n", "mean_nmse",
              "stderr");
  for (const auto& cell : cells)
    std::printf("%-10s %10g %8g %6d %14.8f %12.3e\n", aircomp::to_string(cell.scheme).c_str(),
                cell.sweep_value, cell.snr_db, cell.count, cell.mean, cell.stderr_);
  for (const auto& f : res.failures)
    std::fprintf(stderr, "failed: scheme=%s sweep=%g snr_db=%g trial=%d: %s\n",
                 aircomp::to_string(f.scheme).c_str(), f.sweep_value, f.snr_db, f.trial,
                 f.message.c_str());
  if (!res.failures.empty() && !c.allow_failures) return 1;
  return 0;
}

int run_single(const ExperimentConfig& cfg) {
  using namespace aircomp;
  const TopologyParams& tp = cfg.topology;
  const std::uint64_t seed = trial_seed(cfg.master_seed, 0);
  const Topology topo = gen_topology(tp, seed);
  const FadingRealization fading = sample_fading(topo, seed);
  const double snr = cfg.snr_db.front();
  const SystemParams params = SystemParams::uniform(
      tp.num_workers, cfg.noise_power * std::pow(10.0, snr / 10.0), cfg.noise_power,
      cfg.capacity, cfg.theta_power);

  std::printf("N_W=%d N_A=%d N_I=%d n_I=%d C=%g SNR=%g dB seed=%llu\n", tp.num_workers,
              tp.num_aps, tp.num_irs, tp.irs_elements, cfg.capacity, snr,
              static_cast<unsigned long long>(cfg.master_seed));
  AlternateOptions o = cfg.solver;
  o.init_seed = derive_seed(seed, Stream::kInitPhases);
  const Solution opt = alternate(topo, fading, params, o);
  std::printf("%4s %16s %16s %16s %6s\n", "iter", "mse_phase_step", "mse_projected",
              "mse_detector", "ccp");
  for (std::size_t t = 0; t < opt.trace.size(); ++t)
    std::printf("%4zu %16.10g %16.10g %16.10g %6d\n", t + 1, opt.trace[t].mse_after_phase,
                opt.trace[t].mse_after_projection, opt.trace[t].mse_after_detector,
                opt.trace[t].ccp_iterations);
  const Solution rnd =
      baseline_random_phases(topo, fading, params, derive_seed(seed, Stream::kRandomPhases));
  const Solution none = baseline_no_irs(topo, fading, params);
  std::printf("optimized  nmse=%.12f iterations=%d converged=%d sdp_solves=%d sdp_failures=%d\n",
              opt.normalized_mse, opt.iterations, opt.converged ? 1 : 0, opt.stats.sdp_solves,
              opt.stats.sdp_failures);
  std::printf("random     nmse=%.12f\n", rnd.normalized_mse);
  std::printf("no_irs     nmse=%.12f\n", none.normalized_mse);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Over-the-air computation with IRS-aided C-RAN: phase/detector optimization"};
  app.require_subcommand(1);

  Common sweep_c, sweep_na, single;
  auto* cmd_c = app.add_subcommand("sweep-c", "normalized MSE versus fronthaul capacity");
  add_config_options(cmd_c, sweep_c, true);
  auto* cmd_na = app.add_subcommand("sweep-na", "normalized MSE versus number of APs");
  add_config_options(cmd_na, sweep_na, true);
  auto* cmd_single = app.add_subcommand("single", "one realization with a verbose trace");
  add_config_options(cmd_single, single, false);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : 2;
  }

  try {
    if (*cmd_c) {
      auto cfg = resolve(aircomp::capacity_sweep_defaults(), sweep_c);
      cfg.sweep = aircomp::SweepKind::kCapacity;
      return run_sweep_command(cfg, sweep_c);
    }
    if (*cmd_na) {
      auto cfg = resolve(aircomp::ap_sweep_defaults(), sweep_na);
      cfg.sweep = aircomp::SweepKind::kNumAps;
      return run_sweep_command(cfg, sweep_na);
    }
    ExperimentConfig base = aircomp::capacity_sweep_defaults();
    base.capacity = 4.0;
    base.snr_db = {20.0};
    return run_single(resolve(base, single));
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  }
}
