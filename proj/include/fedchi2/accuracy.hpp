// Copyright 2026 The fedchi2 Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
//
// Accuracy sweeps: multiplicative error of the federated statistic against
// the centralized chi-squared value, over a grid of (dataset, client count,
// sketch width). Every grid point runs several independent protocol
// instances whose seeds are derived from a single root, so a sweep is fully
// reproducible from its fingerprint and identical whether points are run
// serially or in any order.

#pragma once

#include <cmath>
#include <cstdint>
#include <map>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "fedchi2/contingency.hpp"
#include "fedchi2/protocol.hpp"
#include "fedchi2/seeds.hpp"
#include "fedchi2/synthetic.hpp"

namespace fedchi2 {

// Seed-derivation streams for the accuracy experiments (disjoint from the
// application experiments' streams).
inline constexpr std::uint64_t kAccuracyStreamCell = 30;        // per-grid-cell root
inline constexpr std::uint64_t kAccuracyStreamGraph = 31;       // per-run graph seed
inline constexpr std::uint64_t kAccuracyStreamProjection = 32;  // per-run projection seed
inline constexpr std::uint64_t kAccuracyStreamKa = 33;          // per-run key-agreement seed
inline constexpr std::uint64_t kAccuracyStreamSplit = 34;       // per-run table split seed
inline constexpr std::uint64_t kAccuracyStreamDataset = 35;     // per-dataset sampling seed

struct AccuracyOptions {
  std::vector<SynthKind> datasets = {SynthKind::kIndependent, SynthKind::kLinear,
                                     SynthKind::kQuadratic, SynthKind::kLogistic};
  std::vector<int> n_list = {10, 100};
  std::vector<int> ell_list = {10, 25, 50, 100, 200};
  int runs = 10;             // independent protocol instances per grid point
  int m_x = 20;
  int m_y = 20;
  std::int64_t samples = 100000;  // synthetic sample pairs per dataset
  double noise_sigma = 0.1;
  std::uint64_t scale = 1ull << 20;
  std::uint64_t seed = 42;

  void validate() const {
    if (datasets.empty() || n_list.empty() || ell_list.empty())
      throw ConfigError("accuracy sweep: grids must be non-empty");
    if (runs < 1) throw ConfigError("accuracy sweep: runs must be >= 1");
    if (samples < 1) throw ConfigError("accuracy sweep: samples must be >= 1");
    for (int n : n_list)
      if (n < 1) throw ConfigError("accuracy sweep: client counts must be >= 1");
    // Validate the whole grid up front (including the hiding condition) so a
    // bad sweep refuses to run instead of failing after partial output.
    for (int n : n_list) {
      for (int ell : ell_list) {
        ProtocolConfig cfg;
        cfg.n_clients = n;
        cfg.m_x = m_x;
        cfg.m_y = m_y;
        cfg.ell = ell;
        cfg.scale = scale;
        cfg.validate();
      }
    }
  }
};

struct AccuracyPoint {
  SynthKind dataset = SynthKind::kIndependent;
  int n = 0;
  int ell = 0;
  int runs = 0;
  double mean_rel_error = 0.0;
  double std_rel_error = 0.0;  // sample standard deviation over the runs
};

// |estimate/truth - 1| for `runs` independent protocol instances on one global
// table. Each run gets its own split, graph, projection, and key seeds derived
// from `cell_seed`.
inline std::vector<double> accuracy_error_samples(const ContingencyTable& global, int n, int ell,
                                                  int runs, std::uint64_t scale,
                                                  std::uint64_t cell_seed) {
  check_positive_marginals(marginals(global));
  const double truth = chi2_statistic(global);
  if (!(truth > 0.0))
    throw std::invalid_argument("accuracy_error_samples: centralized statistic must be positive");
  std::vector<double> errors;
  errors.reserve(static_cast<std::size_t>(runs));
  for (int r = 0; r < runs; ++r) {
    const auto run = static_cast<std::uint64_t>(r);
    auto clients = split_table(global, n, derive_seed(cell_seed, kAccuracyStreamSplit, run));
    ProtocolConfig cfg;
    cfg.n_clients = n;
    cfg.m_x = global.m_x;
    cfg.m_y = global.m_y;
    cfg.ell = ell;
    cfg.scale = scale;
    cfg.graph_seed = derive_seed(cell_seed, kAccuracyStreamGraph, run);
    cfg.projection_seed = derive_seed(cell_seed, kAccuracyStreamProjection, run);
    cfg.ka_seed = derive_seed(cell_seed, kAccuracyStreamKa, run);
    FederatedChi2 protocol(cfg);
    const ProtocolResult res = protocol.run(clients);
    errors.push_back(std::abs(res.estimate / truth - 1.0));
  }
  return errors;
}

inline std::uint64_t accuracy_cell_seed(std::uint64_t root, SynthKind dataset, int n, int ell) {
  // Cell coordinates packed by value, so reordering or extending the grid
  // lists never changes the seeds of existing cells.
  const auto packed = (static_cast<std::uint64_t>(dataset) << 48) ^
                      (static_cast<std::uint64_t>(static_cast<std::uint32_t>(n)) << 24) ^
                      static_cast<std::uint64_t>(static_cast<std::uint32_t>(ell));
  return derive_seed(root, kAccuracyStreamCell, packed);
}

inline ContingencyTable accuracy_dataset(const AccuracyOptions& opt, SynthKind kind) {
  SynthOptions synth;
  synth.kind = kind;
  synth.m_x = opt.m_x;
  synth.m_y = opt.m_y;
  synth.samples = opt.samples;
  synth.noise_sigma = opt.noise_sigma;
  synth.seed = derive_seed(opt.seed, kAccuracyStreamDataset, static_cast<std::uint64_t>(kind));
  return synth_dataset(synth);
}

inline std::vector<AccuracyPoint> run_accuracy_sweep(const AccuracyOptions& opt) {
  opt.validate();
  std::vector<AccuracyPoint> points;
  for (SynthKind kind : opt.datasets) {
    const ContingencyTable global = accuracy_dataset(opt, kind);
    for (int n : opt.n_list) {
      for (int ell : opt.ell_list) {
        const auto errors = accuracy_error_samples(global, n, ell, opt.runs, opt.scale,
                                                   accuracy_cell_seed(opt.seed, kind, n, ell));
        AccuracyPoint p;
        p.dataset = kind;
        p.n = n;
        p.ell = ell;
        p.runs = opt.runs;
        double sum = 0.0;
        for (double e : errors) sum += e;
        p.mean_rel_error = sum / static_cast<double>(errors.size());
        double ss = 0.0;
        for (double e : errors) ss += (e - p.mean_rel_error) * (e - p.mean_rel_error);
        p.std_rel_error =
            errors.size() > 1 ? std::sqrt(ss / static_cast<double>(errors.size() - 1)) : 0.0;
        points.push_back(p);
      }
    }
  }
  return points;
}

}  // namespace fedchi2
