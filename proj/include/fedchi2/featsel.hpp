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
#include <iterator>
#include <numeric>
#include <random>
#include <span>
#include <stdexcept>
#include <vector>

#include "fedchi2/contingency.hpp"
#include "fedchi2/protocol.hpp"
#include "fedchi2/seeds.hpp"

namespace fedchi2 {

struct FeatselOptions {
  int n_features = 200;
  int n_correlated = 50;  // features 0..n_correlated-1 carry class signal
  int n_classes = 20;
  int levels = 16;  // discretized feature values per feature
  int docs = 4000;
  int n_clients = 10;
  int ell = 200;
  std::uint64_t scale = 1ull << 20;
  std::uint64_t seed = 0;
};

struct FeatureCorpus {
  // tables[f][i]: client i's levels x classes table for feature f.
  std::vector<std::vector<ContingencyTable>> tables;
};

// Synthetic multi-class corpus. Correlated features draw their level from a
// class-conditioned binomial; null features use one class-independent
// binomial. A 10% uniform floor over levels keeps every level marginal
// populated so no pooled table can hit the zero-marginal abort.
inline FeatureCorpus synth_feature_corpus(const FeatselOptions& opt) {
  if (opt.n_correlated > opt.n_features)
    throw std::invalid_argument("featsel: n_correlated exceeds n_features");
  if (opt.levels < 2 || opt.n_classes < 2)
    throw std::invalid_argument("featsel: need at least 2 levels and 2 classes");

  std::mt19937_64 rng(derive_seed(opt.seed, 20));
  std::uniform_real_distribution<double> unif01(0.0, 1.0);
  std::uniform_real_distribution<double> success(0.2, 0.8);

  std::vector<std::vector<double>> p_corr(static_cast<std::size_t>(opt.n_correlated));
  for (auto& per_class : p_corr) {
    per_class.resize(static_cast<std::size_t>(opt.n_classes));
    for (auto& p : per_class) p = success(rng);
  }
  std::vector<double> p_null(static_cast<std::size_t>(opt.n_features));
  for (auto& p : p_null) p = success(rng);

  FeatureCorpus corpus;
  corpus.tables.assign(
      static_cast<std::size_t>(opt.n_features),
      std::vector<ContingencyTable>(static_cast<std::size_t>(opt.n_clients),
                                    ContingencyTable(opt.levels, opt.n_classes)));

  std::uniform_int_distribution<int> class_dist(0, opt.n_classes - 1);
  std::uniform_int_distribution<int> level_dist(0, opt.levels - 1);
  for (int d = 0; d < opt.docs; ++d) {
    const int label = class_dist(rng);
    const int client = d % opt.n_clients;
    for (int f = 0; f < opt.n_features; ++f) {
      int value;
      if (unif01(rng) < 0.1) {
        value = level_dist(rng);
      } else {
        const double p = f < opt.n_correlated
                             ? p_corr[static_cast<std::size_t>(f)][static_cast<std::size_t>(label)]
                             : p_null[static_cast<std::size_t>(f)];
        std::binomial_distribution<int> bin(opt.levels - 1, p);
        value = bin(rng);
      }
      ++corpus.tables[static_cast<std::size_t>(f)][static_cast<std::size_t>(client)].at(value,
                                                                                        label);
    }
  }
  return corpus;
}

// Indices of the k highest scores; ties break toward the lower index. The
// result is sorted ascending for set-style comparison.
inline std::vector<int> select_features(std::span<const double> scores, int k) {
  if (k < 0 || k > static_cast<int>(scores.size()))
    throw std::invalid_argument("select_features: k out of range");
  std::vector<int> order(scores.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](int lhs, int rhs) {
    if (scores[static_cast<std::size_t>(lhs)] != scores[static_cast<std::size_t>(rhs)])
      return scores[static_cast<std::size_t>(lhs)] > scores[static_cast<std::size_t>(rhs)];
    return lhs < rhs;
  });
  order.resize(static_cast<std::size_t>(k));
  std::sort(order.begin(), order.end());
  return order;
}

struct FeatselResult {
  std::vector<double> federated_scores;
  std::vector<double> centralized_scores;
  std::vector<int> federated_top;
  std::vector<int> centralized_top;
  double overlap = 0.0;  // |intersection| / k against the centralized oracle
};

inline FeatselResult run_featsel_experiment(const FeatselOptions& opt) {
  FeatureCorpus corpus = synth_feature_corpus(opt);
  FeatselResult res;
  res.federated_scores.resize(static_cast<std::size_t>(opt.n_features));
  res.centralized_scores.resize(static_cast<std::size_t>(opt.n_features));
  for (int f = 0; f < opt.n_features; ++f) {
    const auto& clients = corpus.tables[static_cast<std::size_t>(f)];
    res.centralized_scores[static_cast<std::size_t>(f)] = chi2_statistic(merge_tables(clients));

    ProtocolConfig cfg;
    cfg.n_clients = opt.n_clients;
    cfg.m_x = opt.levels;
    cfg.m_y = opt.n_classes;
    cfg.ell = opt.ell;
    cfg.scale = opt.scale;
    cfg.graph_seed = derive_seed(opt.seed, 21, static_cast<std::uint64_t>(f));
    cfg.projection_seed = derive_seed(opt.seed, 22, static_cast<std::uint64_t>(f));
    cfg.ka_seed = derive_seed(opt.seed, 23, static_cast<std::uint64_t>(f));
    res.federated_scores[static_cast<std::size_t>(f)] = FederatedChi2(cfg).run(clients).estimate;
  }
  res.federated_top = select_features(res.federated_scores, opt.n_correlated);
  res.centralized_top = select_features(res.centralized_scores, opt.n_correlated);
  std::vector<int> common;
  std::set_intersection(res.federated_top.begin(), res.federated_top.end(),
                        res.centralized_top.begin(), res.centralized_top.end(),
                        std::back_inserter(common));
  res.overlap = static_cast<double>(common.size()) /
                static_cast<double>(std::max(1, opt.n_correlated));
  return res;
}

}  // namespace fedchi2
