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
#include "aircomp/types.hpp"

namespace aircomp {

using Point = Eigen::Vector2d;

struct TopologyParams {
  int num_workers = 10;
  int num_aps = 5;
  int num_irs = 2;
  int irs_elements = 10;
  double radius = 100.0;       // deployment disk, meters
  double c0 = 1e-2;            // linear gain at the 1 m reference distance
  double eta = 3.0;            // path-loss exponent
  double min_distance = 1.0;   // floor applied before exponentiation
};

/// Node placement plus the large-scale gains derived from it.
struct Topology {
  TopologyParams params;
  std::vector<Point> workers;
  std::vector<Point> aps;
  std::vector<Point> irs;
  Eigen::MatrixXd rho_direct;              // N_A x N_W
  std::vector<Eigen::MatrixXd> rho_irs;    // per IRS j: N_A x N_W

  int num_workers() const { return static_cast<int>(workers.size()); }
  int num_aps() const { return static_cast<int>(aps.size()); }
  int num_irs() const { return static_cast<int>(irs.size()); }
  int irs_elements() const { return params.irs_elements; }
  int stacked_elements() const { return num_irs() * irs_elements(); }

  double rho_composite(int ap, int irs_idx, int worker) const {
    return rho_irs[static_cast<std::size_t>(irs_idx)](ap, worker);
  }
};

/// Small-scale fading for one Monte Carlo draw.
struct FadingRealization {
  CMatrix h_direct;                 // N_A x N_W, entries h_{d,i,k}
  std::vector<CMatrix> g_irs_ap;    // per IRS j: N_A x n_I, row i is g_{i,j}^H
  std::vector<CMatrix> h_worker_irs;  // per IRS j: n_I x N_W, column k is h_{r,j,k}
};

inline double distance(const Point& a, const Point& b) { return (a - b).norm(); }

inline double path_loss(double dist, double c0, double eta, double min_distance = 1.0) {
  return c0 * std::pow(std::max(dist, min_distance), -eta);
}

inline double path_loss_direct(const Point& worker, const Point& ap, double c0, double eta,
                               double min_distance = 1.0) {
  return path_loss(distance(worker, ap), c0, eta, min_distance);
}

/// Sum-distance model for the worker -> IRS -> AP link.
inline double path_loss_composite(const Point& worker, const Point& irs, const Point& ap,
                                  double c0, double eta, double min_distance = 1.0) {
  return path_loss(distance(worker, irs) + distance(irs, ap), c0, eta, min_distance);
}

inline void validate(const TopologyParams& p) {
  if (p.num_workers < 1) throw ConfigError("num_workers must be >= 1");
  if (p.num_aps < 1) throw ConfigError("num_aps must be >= 1");
  if (p.num_irs < 0) throw ConfigError("num_irs must be >= 0");
  if (p.irs_elements < 1) throw ConfigError("irs_elements must be >= 1");
  if (!(p.radius > 0.0) || !std::isfinite(p.radius)) throw ConfigError("radius must be > 0");
  if (!(p.c0 > 0.0) || !std::isfinite(p.c0)) throw ConfigError("c0 must be > 0");
  if (!(p.eta > 0.0) || !std::isfinite(p.eta)) throw ConfigError("eta must be > 0");
  if (!(p.min_distance > 0.0)) throw ConfigError("min_distance must be > 0");
}

/// Recomputes both gain tables from the stored positions.
inline void fill_gains(Topology& topo) {
  const auto& p = topo.params;
  const int nw = topo.num_workers(), na = topo.num_aps(), ni = topo.num_irs();
  topo.rho_direct.resize(na, nw);
  for (int i = 0; i < na; ++i)
    for (int k = 0; k < nw; ++k)
      topo.rho_direct(i, k) = path_loss_direct(topo.workers[k], topo.aps[i], p.c0, p.eta,
                                               p.min_distance);
  topo.rho_irs.assign(static_cast<std::size_t>(ni), Eigen::MatrixXd(na, nw));
  for (int j = 0; j < ni; ++j)
    for (int i = 0; i < na; ++i)
      for (int k = 0; k < nw; ++k)
        topo.rho_irs[j](i, k) = path_loss_composite(topo.workers[k], topo.irs[j], topo.aps[i],
                                                    p.c0, p.eta, p.min_distance);
}

/// Builds a topology from explicit positions (fixed-geometry runs and tests).
inline Topology make_topology(const TopologyParams& params, std::vector<Point> workers,
                              std::vector<Point> aps, std::vector<Point> irs) {
  Topology topo;
  topo.params = params;
  topo.params.num_workers = static_cast<int>(workers.size());
  topo.params.num_aps = static_cast<int>(aps.size());
  topo.params.num_irs = static_cast<int>(irs.size());
  validate(topo.params);
  topo.workers = std::move(workers);
  topo.aps = std::move(aps);
  topo.irs = std::move(irs);
  fill_gains(topo);
  return topo;
}

/// Uniform placement of every node in the disk of the configured radius.
inline Topology gen_topology(const TopologyParams& params, std::uint64_t seed) {
  validate(params);
  Engine eng(derive_seed(seed, Stream::kTopology));
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  auto draw = [&](int n) {
    std::vector<Point> pts;
    pts.reserve(static_cast<std::size_t>(n));
    for (int m = 0; m < n; ++m) {
      const double r = params.radius * std::sqrt(unif(eng));
      const double t = 2.0 * std::numbers::pi * unif(eng);
      pts.emplace_back(r * std::cos(t), r * std::sin(t));
    }
    return pts;
  };
  auto workers = draw(params.num_workers);
  auto aps = draw(params.num_aps);
  auto irs = draw(params.num_irs);
  return make_topology(params, std::move(workers), std::move(aps), std::move(irs));
}

/// Draws every small-scale coefficient i.i.d. CN(0, 1).
inline FadingRealization sample_fading(const Topology& topo, std::uint64_t seed) {
  Engine eng(derive_seed(seed, Stream::kFading));
  ComplexNormal cn;
  const int nw = topo.num_workers(), na = topo.num_aps(), ni = topo.num_irs();
  const int ne = topo.irs_elements();
  FadingRealization fr;
  fr.h_direct.resize(na, nw);
  for (int k = 0; k < nw; ++k)
    for (int i = 0; i < na; ++i) fr.h_direct(i, k) = cn(eng);
  fr.g_irs_ap.resize(static_cast<std::size_t>(ni));
  fr.h_worker_irs.resize(static_cast<std::size_t>(ni));
  for (int j = 0; j < ni; ++j) {
    CMatrix g(na, ne), h(ne, nw);
    for (int m = 0; m < ne; ++m)
      for (int i = 0; i < na; ++i) g(i, m) = cn(eng);
    for (int k = 0; k < nw; ++k)
      for (int m = 0; m < ne; ++m) h(m, k) = cn(eng);
    fr.g_irs_ap[j] = std::move(g);
    fr.h_worker_irs[j] = std::move(h);
  }
  return fr;
}

}  // namespace aircomp
