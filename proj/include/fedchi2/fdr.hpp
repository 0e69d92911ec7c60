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

#pragma once

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <random>
#include <vector>

#include "fedchi2/contingency.hpp"
#include "fedchi2/protocol.hpp"
#include "fedchi2/saffron.hpp"
#include "fedchi2/seeds.hpp"
#include "fedchi2/stats.hpp"
#include "fedchi2/synthetic.hpp"

namespace fedchi2 {

// Online testing stream: at each step a batch of hypotheses arrives, half of
// them true nulls (independent Gaussian pairs) and half non-null (correlated
// pairs). Every hypothesis is one full federated test; its p-value feeds a
// single shared alpha-investing stream in arrival order.
struct FdrOptions {
  int steps = 100;
  int per_step = 100;
  double null_fraction = 0.5;  // fraction of true nulls within each step
  int n_clients = 10;
  int ell = 300;
  int bins = 20;              // per axis; tables are bins x bins
  std::int64_t samples = 4000;  // Gaussian pairs per hypothesis
  std::uint64_t seed = 0;
  std::uint64_t scale = 1ull << 20;
  bool use_sketch = true;  // false: exact pooled chi-squared p-values
  SaffronOptions saffron{};
};

struct FdrStepRow {
  int step = 0;             // 1-based batch index
  int rejections = 0;       // cumulative
  int false_rejections = 0;  // cumulative, true-null rejections only
  double fdr = 0.0;          // false_rejections / max(rejections, 1)
};

struct FdrResult {
  std::vector<FdrStepRow> rows;
  int rejections = 0;
  int false_rejections = 0;
  double fdr = 0.0;
};

inline double fdr_hypothesis_p_value(const FdrOptions& opt, bool is_null, int index) {
  GaussianPairOptions gopt;
  gopt.correlated = !is_null;
  gopt.bins = opt.bins;
  gopt.samples = opt.samples;
  gopt.seed = derive_seed(opt.seed, 1, static_cast<std::uint64_t>(index));
  ContingencyTable pooled = gaussian_pair_table(gopt);

  if (!opt.use_sketch)
    return chi2_sf(chi2_statistic(pooled), chi2_dof(opt.bins, opt.bins));

  auto clients = split_table(pooled, opt.n_clients,
                             derive_seed(opt.seed, 2, static_cast<std::uint64_t>(index)));
  ProtocolConfig cfg;
  cfg.n_clients = opt.n_clients;
  cfg.m_x = opt.bins;
  cfg.m_y = opt.bins;
  cfg.ell = opt.ell;
  cfg.scale = opt.scale;
  cfg.graph_seed = derive_seed(opt.seed, 3, static_cast<std::uint64_t>(index));
  cfg.projection_seed = derive_seed(opt.seed, 4, static_cast<std::uint64_t>(index));
  cfg.ka_seed = derive_seed(opt.seed, 5, static_cast<std::uint64_t>(index));
  return FederatedChi2(cfg).run(clients).p_value;
}

inline FdrResult run_fdr_experiment(const FdrOptions& opt) {
  if (opt.steps < 1 || opt.per_step < 1)
    throw std::invalid_argument("fdr: steps and per_step must be >= 1");
  if (!(opt.null_fraction >= 0.0 && opt.null_fraction <= 1.0))
    throw std::invalid_argument("fdr: null_fraction must be in [0, 1]");

  SaffronState saffron(opt.saffron);
  FdrResult out;
  const int nulls_per_step =
      static_cast<int>(std::llround(opt.null_fraction * opt.per_step));
  int index = 0;
  for (int step = 1; step <= opt.steps; ++step) {
    // Fixed null count per batch, shuffled arrival order.
    std::vector<char> is_null(static_cast<std::size_t>(opt.per_step), 0);
    std::fill(is_null.begin(), is_null.begin() + nulls_per_step, 1);
    std::mt19937_64 rng(derive_seed(opt.seed, 6, static_cast<std::uint64_t>(step)));
    std::shuffle(is_null.begin(), is_null.end(), rng);

    for (int k = 0; k < opt.per_step; ++k, ++index) {
      const bool null_hyp = is_null[static_cast<std::size_t>(k)] != 0;
      const double p = fdr_hypothesis_p_value(opt, null_hyp, index);
      const bool reject = saffron.step(p);
      if (reject) {
        ++out.rejections;
        if (null_hyp) ++out.false_rejections;
      }
    }
    FdrStepRow row;
    row.step = step;
    row.rejections = out.rejections;
    row.false_rejections = out.false_rejections;
    row.fdr = static_cast<double>(out.false_rejections) /
              static_cast<double>(std::max(out.rejections, 1));
    out.rows.push_back(row);
  }
  out.fdr = static_cast<double>(out.false_rejections) /
            static_cast<double>(std::max(out.rejections, 1));
  return out;
}

}  // namespace fedchi2
