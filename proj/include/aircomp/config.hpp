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

#include <fstream>
#include <limits>
#include <string>

#include <json.hpp>

#include "aircomp/experiments.hpp"

namespace aircomp {

// Structured experiment configuration. Every key is optional and overrides
// the defaults of the selected sweep; unknown keys are rejected.
//
//   {
//     "sweep": "capacity" | "num_aps",
//     "sweep_values": [1, 2, 3],
//     "num_workers": 10, "num_aps": 5, "num_irs": 2, "irs_elements": 10,
//     "radius": 100, "c0": 0.01, "eta": 3, "min_distance": 1,
//     "capacity": 5 | "inf",
//     "snr_db": [5, 20], "noise_power": 1, "theta_power": 1,
//     "trials": 100, "seed": 1,
//     "schemes": ["optimized", "random", "no_irs"],
//     "fixed_topology": false, "threads": 0,
//     "solver": {"delta": 1e-4, "max_outer": 30, "gamma": 1, "init": "zero",
//                "warm_start": true, "relative_gamma": true,
//                "ccp_delta": 1e-4, "ccp_max_outer": 50,
//                "sdp_tol": 1e-5, "sdp_max_iter": 5000, "sdp_rho": 1}
//   }

namespace detail {

inline double capacity_from_json(const nlohmann::json& j) {
  if (j.is_string()) {
    const auto s = j.get<std::string>();
    if (s == "inf" || s == "infinity") return kInfiniteCapacity;
    throw ConfigError("capacity must be a number or \"inf\"");
  }
  return j.get<double>();
}

inline nlohmann::json capacity_to_json(double c) {
  if (std::isinf(c)) return "inf";
  return c;
}

}  // namespace detail

inline SweepKind sweep_from_string(const std::string& s) {
  if (s == "capacity") return SweepKind::kCapacity;
  if (s == "num_aps") return SweepKind::kNumAps;
  throw ConfigError("unknown sweep kind: " + s);
}

inline void apply_json(ExperimentConfig& c, const nlohmann::json& j) {
  if (!j.is_object()) throw ConfigError("configuration must be a JSON object");
  for (const auto& [key, val] : j.items()) {
    if (key == "sweep") c.sweep = sweep_from_string(val.get<std::string>());
    else if (key == "sweep_values") {
      c.sweep_values.clear();
      for (const auto& x : val) c.sweep_values.push_back(detail::capacity_from_json(x));
    }
    else if (key == "num_workers") c.topology.num_workers = val.get<int>();
    else if (key == "num_aps") c.topology.num_aps = val.get<int>();
    else if (key == "num_irs") c.topology.num_irs = val.get<int>();
    else if (key == "irs_elements") c.topology.irs_elements = val.get<int>();
    else if (key == "radius") c.topology.radius = val.get<double>();
    else if (key == "c0") c.topology.c0 = val.get<double>();
    else if (key == "eta") c.topology.eta = val.get<double>();
    else if (key == "min_distance") c.topology.min_distance = val.get<double>();
    else if (key == "capacity") c.capacity = detail::capacity_from_json(val);
    else if (key == "snr_db") c.snr_db = val.get<std::vector<double>>();
    else if (key == "noise_power") c.noise_power = val.get<double>();
    else if (key == "theta_power") c.theta_power = val.get<double>();
    else if (key == "trials") c.trials = val.get<int>();
    else if (key == "seed") c.master_seed = val.get<std::uint64_t>();
    else if (key == "schemes") {
      c.schemes.clear();
      for (const auto& s : val) c.schemes.push_back(scheme_from_string(s.get<std::string>()));
    }
    else if (key == "fixed_topology") c.fixed_topology = val.get<bool>();
    else if (key == "threads") c.threads = val.get<int>();
    else if (key == "solver") {
      auto& o = c.solver;
      for (const auto& [sk, sv] : val.items()) {
        if (sk == "delta") o.delta = sv.get<double>();
        else if (sk == "max_outer") o.max_outer = sv.get<int>();
        else if (sk == "gamma") o.gamma = sv.get<double>();
        else if (sk == "init") {
          const auto s = sv.get<std::string>();
          if (s == "zero") o.init = PhaseInit::kZero;
          else if (s == "random") o.init = PhaseInit::kRandom;
          else throw ConfigError("solver.init must be \"zero\" or \"random\"");
        }
        else if (sk == "warm_start") o.warm_start_ccp = sv.get<bool>();
        else if (sk == "relative_gamma") o.relative_gamma = sv.get<bool>();
        else if (sk == "restarts") o.restarts = sv.get<int>();
        else if (sk == "ccp_delta") o.ccp.delta = sv.get<double>();
        else if (sk == "ccp_max_outer") o.ccp.max_outer = sv.get<int>();
        else if (sk == "sdp_tol") o.ccp.sdp.tol = sv.get<double>();
        else if (sk == "sdp_max_iter") o.ccp.sdp.max_iter = sv.get<int>();
        else if (sk == "sdp_rho") o.ccp.sdp.rho = sv.get<double>();
        else throw ConfigError("unknown solver key: " + sk);
      }
    }
    else throw ConfigError("unknown configuration key: " + key);
  }
}

inline nlohmann::json to_json(const ExperimentConfig& c) {
  nlohmann::json j;
  j["sweep"] = c.sweep == SweepKind::kCapacity ? "capacity" : "num_aps";
  nlohmann::json sv = nlohmann::json::array();
  for (double x : c.sweep_values) sv.push_back(detail::capacity_to_json(x));
  j["sweep_values"] = sv;
  j["num_workers"] = c.topology.num_workers;
  j["num_aps"] = c.topology.num_aps;
  j["num_irs"] = c.topology.num_irs;
  j["irs_elements"] = c.topology.irs_elements;
  j["radius"] = c.topology.radius;
  j["c0"] = c.topology.c0;
  j["eta"] = c.topology.eta;
  j["min_distance"] = c.topology.min_distance;
  j["capacity"] = detail::capacity_to_json(c.capacity);
  j["snr_db"] = c.snr_db;
  j["noise_power"] = c.noise_power;
  j["theta_power"] = c.theta_power;
  j["trials"] = c.trials;
  j["seed"] = c.master_seed;
  nlohmann::json schemes = nlohmann::json::array();
  for (Scheme s : c.schemes) schemes.push_back(to_string(s));
  j["schemes"] = schemes;
  j["fixed_topology"] = c.fixed_topology;
  j["threads"] = c.threads;
  const auto& o = c.solver;
  j["solver"] = {{"delta", o.delta},
                 {"max_outer", o.max_outer},
                 {"gamma", o.gamma},
                 {"init", o.init == PhaseInit::kZero ? "zero" : "random"},
                 {"warm_start", o.warm_start_ccp},
                 {"relative_gamma", o.relative_gamma},
                 {"restarts", o.restarts},
                 {"ccp_delta", o.ccp.delta},
                 {"ccp_max_outer", o.ccp.max_outer},
                 {"sdp_tol", o.ccp.sdp.tol},
                 {"sdp_max_iter", o.ccp.sdp.max_iter},
                 {"sdp_rho", o.ccp.sdp.rho}};
  return j;
}

inline void load_config_file(ExperimentConfig& c, const std::string& path) {
  std::ifstream f(path);
  if (!f) throw ConfigError("cannot open configuration file: " + path);
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(f);
  } catch (const nlohmann::json::parse_error& e) {
    throw ConfigError(std::string("invalid JSON configuration: ") + e.what());
  }
  apply_json(c, j);
}

}  // namespace aircomp
