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
// Release acceptance suite: ten self-contained checks covering the algebraic
// recast, mask cancellation, decoder bias, end-to-end accuracy, leakage rank,
// tail-bound soundness, both case studies, and the cost model. Every
// tolerance and seed is pinned here so a run is reproducible bit for bit;
// each criterion also carries a wall-clock budget and fails if it blows it.

#pragma once

#include <algorithm>
#include <array>
#include <chrono>
#include <cmath>
#include <cstdarg>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "fedchi2/accuracy.hpp"
#include "fedchi2/caesar.hpp"
#include "fedchi2/config.hpp"
#include "fedchi2/contingency.hpp"
#include "fedchi2/cost.hpp"
#include "fedchi2/fdr.hpp"
#include "fedchi2/field.hpp"
#include "fedchi2/graph.hpp"
#include "fedchi2/keys.hpp"
#include "fedchi2/leakage.hpp"
#include "fedchi2/projection.hpp"
#include "fedchi2/protocol.hpp"
#include "fedchi2/secure_agg.hpp"
#include "fedchi2/seeds.hpp"
#include "fedchi2/stats.hpp"
#include "fedchi2/synthetic.hpp"
#include "fedchi2/tail_bounds.hpp"

namespace fedchi2 {

// One root seed for the whole suite; criteria fan out over disjoint streams.
inline constexpr std::uint64_t kAcceptanceSeed = 42;

struct CriterionResult {
  int id = 0;
  std::string name;
  bool passed = false;       // property held and the runtime budget was met
  bool property_ok = false;  // property alone, ignoring the budget
  double seconds = 0.0;
  double budget_seconds = 0.0;
  std::string detail;
};

namespace detail {

inline std::string fmt(const char* format, ...) {
  char buf[512];
  va_list args;
  va_start(args, format);
  std::vsnprintf(buf, sizeof buf, format, args);
  va_end(args);
  return std::string(buf);
}

class CriterionTimer {
 public:
  double seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0_).count();
  }

 private:
  std::chrono::steady_clock::time_point t0_ = std::chrono::steady_clock::now();
};

inline CriterionResult finish(int id, const char* name, double budget, double seconds,
                              bool property_ok, std::string detail) {
  CriterionResult r;
  r.id = id;
  r.name = name;
  r.budget_seconds = budget;
  r.seconds = seconds;
  r.property_ok = property_ok;
  r.passed = property_ok && seconds < budget;
  if (!(seconds < budget))
    detail += fmt("; runtime %.2f s exceeded the %.0f s budget", seconds, budget);
  r.detail = std::move(detail);
  return r;
}

}  // namespace detail

// 1. The federated decomposition is exact: for random tables split across
//    clients, the squared norm of the summed standardized residuals equals
//    the centralized chi-squared statistic to near machine precision.
inline CriterionResult acceptance_recast_identity() {
  constexpr double kBudget = 5.0;
  constexpr double kRelTol = 1e-9;
  constexpr int kTables = 100;
  const std::array<int, 3> client_counts{1, 5, 10};

  detail::CriterionTimer timer;
  std::mt19937_64 rng(derive_seed(kAcceptanceSeed, 40));
  std::uniform_int_distribution<int> dim(2, 20);
  std::uniform_int_distribution<std::int64_t> entry(0, 100);

  double worst = 0.0;
  int checks = 0;
  for (int t = 0; t < kTables; ++t) {
    ContingencyTable table(2, 2);
    for (;;) {
      table = ContingencyTable(dim(rng), dim(rng));
      for (auto& c : table.counts) c = entry(rng);
      Marginals marg = marginals(table);
      const bool has_zero =
          std::any_of(marg.row.begin(), marg.row.end(), [](std::int64_t v) { return v == 0; }) ||
          std::any_of(marg.col.begin(), marg.col.end(), [](std::int64_t v) { return v == 0; });
      if (!has_zero) break;
    }
    const Marginals global = marginals(table);
    const double stat = chi2_statistic(table);
    for (int n : client_counts) {
      const auto parts = split_table(
          table, n, derive_seed(kAcceptanceSeed, 41, static_cast<std::uint64_t>(t * 16 + n)));
      std::vector<double> sum(static_cast<std::size_t>(table.m_x * table.m_y), 0.0);
      for (const auto& part : parts) {
        const auto u = build_u_vector(part, global, n);
        for (std::size_t j = 0; j < sum.size(); ++j) sum[j] += u[j];
      }
      const double rel = std::abs(squared_norm(sum) - stat) / std::max(stat, 1.0);
      worst = std::max(worst, rel);
      ++checks;
    }
  }
  return detail::finish(1, "recast-identity", kBudget, timer.seconds(), worst <= kRelTol,
                        detail::fmt("%d table/client-count checks, worst relative deviation "
                                    "%.3g (tolerance %.0e)",
                                    checks, worst, kRelTol));
}

// 2. Pairwise masks cancel exactly: the ring sum of the masked uploads equals
//    the ring sum of the unmasked fixed-point encodings, bit for bit.
inline CriterionResult acceptance_mask_cancellation() {
  constexpr double kBudget = 10.0;
  constexpr int kRounds = 50;
  constexpr int kWidth = 16;
  constexpr std::uint64_t kScale = 1ull << 20;
  const std::array<int, 4> client_counts{2, 3, 10, 100};

  detail::CriterionTimer timer;
  bool all_exact = true;
  int invocations = 0;
  for (int n : client_counts) {
    const CommGraph graph =
        init_secure_agg(n, derive_seed(kAcceptanceSeed, 60, static_cast<std::uint64_t>(n)));
    auto ka =
        make_key_agreement(KaKind::kTest, derive_seed(kAcceptanceSeed, 61, static_cast<std::uint64_t>(n)));
    Transcript ts;
    SecureAggSession session(graph, *ka, &ts);
    std::mt19937_64 rng(derive_seed(kAcceptanceSeed, 62, static_cast<std::uint64_t>(n)));
    std::uniform_real_distribution<double> value(-100.0, 100.0);
    for (int round = 0; round < kRounds; ++round) {
      std::vector<std::vector<double>> inputs(static_cast<std::size_t>(n));
      for (auto& vec : inputs) {
        vec.resize(kWidth);
        for (auto& v : vec) v = value(rng);
      }
      const auto agg = session.aggregate(inputs, kScale);
      std::vector<std::uint64_t> expected(kWidth, 0);
      for (const auto& vec : inputs)
        field_add_in_place(expected,
                           fixed_point_encode_vector(vec, kScale, static_cast<std::uint64_t>(n)));
      all_exact = all_exact && expected == agg.field_sum;
      ++invocations;
    }
  }
  return detail::finish(2, "mask-cancel", kBudget, timer.seconds(), all_exact,
                        detail::fmt("%d masked invocations over n in {2,3,10,100}: ring sums %s",
                                    invocations, all_exact ? "all bit-exact" : "DIVERGED"));
}

// 3. The geometric-mean decoder is unbiased, which also pins the variance-2
//    Gaussian sampling convention of the projection.
inline CriterionResult acceptance_decoder_unbiasedness() {
  constexpr double kBudget = 30.0;
  constexpr int kTrials = 10000;
  constexpr int kEll = 50;
  constexpr int kM = 16;
  constexpr double kTruth = 100.0;
  constexpr double kRelTol = 0.02;

  detail::CriterionTimer timer;
  const std::vector<double> u(kM, std::sqrt(kTruth / kM));  // ||u||^2 = 100
  double sum = 0.0;
  for (int t = 0; t < kTrials; ++t) {
    const auto p =
        sample_projection(kEll, kM, derive_seed(kAcceptanceSeed, 63, static_cast<std::uint64_t>(t)));
    sum += decode_gm(encode(p, u));
  }
  const double mean = sum / kTrials;
  const bool ok = std::abs(mean / kTruth - 1.0) <= kRelTol;
  return detail::finish(3, "unbiasedness", kBudget, timer.seconds(), ok,
                        detail::fmt("mean decode over %d projections: %.3f (target %.0f +- %.0f%%)",
                                    kTrials, mean, kTruth, kRelTol * 100));
}

// 4. Desk-scale accuracy profile: the multiplicative error pooled over the
//    four synthetic relationships and both client counts sits in the expected
//    band at width 50 and decreases strictly as the sketch widens.
inline CriterionResult acceptance_accuracy_profile() {
  constexpr double kBudget = 300.0;
  constexpr double kBandLow = 0.1;
  constexpr double kBandHigh = 0.3;
  constexpr int kRuns = 30;  // per (dataset, n, ell) cell; pooled for the check
  const std::array<int, 3> ells{10, 50, 200};
  const std::array<int, 2> client_counts{10, 100};

  detail::CriterionTimer timer;
  AccuracyOptions opt;
  opt.runs = kRuns;
  opt.seed = derive_seed(kAcceptanceSeed, 64);

  std::array<double, 3> pooled_sum{};
  std::array<int, 3> pooled_count{};
  for (SynthKind kind : opt.datasets) {
    const ContingencyTable global = accuracy_dataset(opt, kind);
    for (int n : client_counts) {
      for (std::size_t e = 0; e < ells.size(); ++e) {
        const auto errors =
            accuracy_error_samples(global, n, ells[e], kRuns, opt.scale,
                                   accuracy_cell_seed(opt.seed, kind, n, ells[e]));
        for (double err : errors) pooled_sum[e] += err;
        pooled_count[e] += static_cast<int>(errors.size());
      }
    }
  }
  std::array<double, 3> mean{};
  for (std::size_t e = 0; e < ells.size(); ++e) mean[e] = pooled_sum[e] / pooled_count[e];
  const bool band_ok = mean[1] >= kBandLow && mean[1] <= kBandHigh;
  const bool monotone_ok = mean[0] > mean[1] && mean[1] > mean[2];
  return detail::finish(
      4, "accuracy-profile", kBudget, timer.seconds(), band_ok && monotone_ok,
      detail::fmt("pooled mean |est/chi2 - 1| (%d samples per width): ell=10: %.3f, ell=50: "
                  "%.3f, ell=200: %.3f; band [%.1f, %.1f] %s, strict decrease %s",
                  pooled_count[1], mean[0], mean[1], mean[2], kBandLow, kBandHigh,
                  band_ok ? "ok" : "VIOLATED", monotone_ok ? "ok" : "VIOLATED"));
}

// 5. Error is insensitive to how many clients hold the data: on one global
//    table, the error samples for 10 and for 100 clients are statistically
//    indistinguishable under a two-sample KS test at the 5% level.
inline CriterionResult acceptance_client_count_independence() {
  constexpr double kBudget = 300.0;
  constexpr int kRuns = 200;
  constexpr int kEll = 50;
  constexpr double kAlpha = 0.05;

  detail::CriterionTimer timer;
  AccuracyOptions opt;
  opt.seed = derive_seed(kAcceptanceSeed, 64);  // same tables as criterion 4
  const ContingencyTable global = accuracy_dataset(opt, SynthKind::kLinear);
  const std::uint64_t root = derive_seed(kAcceptanceSeed, 65);
  const auto errors10 = accuracy_error_samples(global, 10, kEll, kRuns, opt.scale,
                                               accuracy_cell_seed(root, SynthKind::kLinear, 10, kEll));
  const auto errors100 = accuracy_error_samples(global, 100, kEll, kRuns, opt.scale,
                                                accuracy_cell_seed(root, SynthKind::kLinear, 100, kEll));
  const KsResult ks = two_sample_ks(errors10, errors100);
  const bool ok = ks.p_value > kAlpha;
  return detail::finish(5, "client-count", kBudget, timer.seconds(), ok,
                        detail::fmt("KS on %d-vs-%d error samples (n=10 vs n=100, ell=%d): D=%.4f, "
                                    "p=%.4f (%s at the %.0f%% level)",
                                    kRuns, kRuns, kEll, ks.statistic, ks.p_value,
                                    ok ? "indistinguishable" : "REJECTED", kAlpha * 100));
}

// 6. What the server sees pins at most rank-many linear functionals of the
//    hidden table, and a concrete null-space perturbation changes the table
//    without changing the sketch.
inline CriterionResult acceptance_hiding_rank() {
  constexpr double kBudget = 60.0;
  constexpr int kSeeds = 100;
  constexpr int kEll = 50;
  constexpr int kMx = 20;
  constexpr int kMy = 20;
  constexpr int kRankCap = 90;       // ell + m_x + m_y
  constexpr int kNullFloor = 310;    // m - rank cap
  constexpr double kMarginTol = 1e-8;
  constexpr double kSketchTol = 1e-6;

  detail::CriterionTimer timer;
  int max_rank = 0;
  int min_null = kMx * kMy;
  for (int t = 0; t < kSeeds; ++t) {
    const auto p = sample_projection(kEll, kMx * kMy,
                                     derive_seed(kAcceptanceSeed, 66, static_cast<std::uint64_t>(t)));
    const RankCheck rc = leakage_rank_check(p, kMx, kMy);
    max_rank = std::max(max_rank, rc.rank);
    min_null = std::min(min_null, rc.nullspace_dim);
  }
  const bool rank_ok = max_rank <= kRankCap && min_null >= kNullFloor;

  // Concrete witness on the first seed and a realistic table.
  AccuracyOptions aopt;
  aopt.seed = derive_seed(kAcceptanceSeed, 64);
  const ContingencyTable global = accuracy_dataset(aopt, SynthKind::kLinear);
  const Marginals marg = marginals(global);
  const auto p0 = sample_projection(kEll, kMx * kMy, derive_seed(kAcceptanceSeed, 66, 0));
  const auto delta = hidden_table_delta(p0, marg);

  double margin_dev = 0.0;
  for (int x = 0; x < kMx; ++x) {
    double s = 0.0;
    for (int y = 0; y < kMy; ++y) s += delta[static_cast<std::size_t>(flat_index(x, y, kMy))];
    margin_dev = std::max(margin_dev, std::abs(s));
  }
  for (int y = 0; y < kMy; ++y) {
    double s = 0.0;
    for (int x = 0; x < kMx; ++x) s += delta[static_cast<std::size_t>(flat_index(x, y, kMy))];
    margin_dev = std::max(margin_dev, std::abs(s));
  }

  std::vector<double> shifted(global.counts.begin(), global.counts.end());
  double delta_norm = 0.0;
  for (std::size_t j = 0; j < shifted.size(); ++j) {
    shifted[j] += delta[j];
    delta_norm = std::max(delta_norm, std::abs(delta[j]));
  }
  const auto sketch_base = encode(p0, build_u_vector(global, marg, 1));
  const auto sketch_shift = encode(p0, u_from_counts(shifted, marg, 1));
  double sketch_dev = 0.0;
  for (std::size_t k = 0; k < sketch_base.size(); ++k)
    sketch_dev = std::max(sketch_dev, std::abs(sketch_base[k] - sketch_shift[k]));

  const bool witness_ok =
      delta_norm > 0.5 && margin_dev <= kMarginTol && sketch_dev <= kSketchTol;
  return detail::finish(
      6, "hiding-rank", kBudget, timer.seconds(), rank_ok && witness_ok,
      detail::fmt("over %d seeds: max rank %d (cap %d), min null dim %d (floor %d); witness "
                  "delta: margin dev %.2g, sketch dev %.2g",
                  kSeeds, max_rank, kRankCap, min_null, kNullFloor, margin_dev, sketch_dev));
}

// 7. The closed-form tail bounds really bound the decoder's failure
//    probability (two-sided, eps = 0.3, ell = 50).
inline CriterionResult acceptance_tail_bound_soundness() {
  constexpr double kBudget = 120.0;
  constexpr int kTrials = 100000;
  constexpr int kEll = 50;
  constexpr double kEps = 0.3;

  detail::CriterionTimer timer;
  const TailBoundParams params{kEps, kEll, kEll - 1};
  const double bound = right_tail_bound(params) + left_tail_bound(params);
  const std::vector<double> u{1.0};  // truth 1; the bound is scale-free
  int failures = 0;
  for (int t = 0; t < kTrials; ++t) {
    const auto p =
        sample_projection(kEll, 1, derive_seed(kAcceptanceSeed, 67, static_cast<std::uint64_t>(t)));
    const double est = decode_gm(encode(p, u));
    if (std::abs(est - 1.0) > kEps) ++failures;
  }
  const double freq = static_cast<double>(failures) / kTrials;
  const bool ok = freq <= bound;
  return detail::finish(7, "tail-bound", kBudget, timer.seconds(), ok,
                        detail::fmt("empirical two-sided failure %.4f over %d trials vs closed-form "
                                    "bound %.4f (right %.4f + left %.4f)",
                                    freq, kTrials, bound, right_tail_bound(params),
                                    left_tail_bound(params)));
}

// 8. Caesar case study: shift recovery from the federated statistic alone
//    succeeds on at least 9 of 10 fresh 100k-letter ciphertexts at width 50,
//    and widening the sketch never hurts the success count.
inline CriterionResult acceptance_caesar(const std::string& data_dir) {
  constexpr double kBudget = 300.0;
  constexpr int kTrials = 10;
  constexpr std::size_t kLength = 100000;
  const std::array<int, 3> ells{10, 30, 50};

  detail::CriterionTimer timer;
  std::ifstream in(data_dir + "/english_sample.txt", std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + data_dir + "/english_sample.txt");
  std::ostringstream buf;
  buf << in.rdbuf();
  const EnglishModel model = EnglishModel::train(normalize_text(buf.str()));
  const auto reference = load_letter_counts_csv(data_dir + "/english_letter_counts.csv");

  // One long stream cut into disjoint plaintexts, so the trials never share
  // text.
  const std::string stream =
      model.sample(kTrials * kLength, derive_seed(kAcceptanceSeed, kStreamCaesarModel));
  std::array<int, 3> wins{};
  for (int t = 0; t < kTrials; ++t) {
    const int shift = (7 * t + 3) % kAlphabet;
    CipherTrial trial;
    trial.ciphertext = caesar_encrypt(stream.substr(t * kLength, kLength), shift);
    trial.reference_counts = reference;
    for (std::size_t e = 0; e < ells.size(); ++e) {
      CaesarOptions copt;
      copt.ell = ells[e];
      copt.seed = derive_seed(
          derive_seed(kAcceptanceSeed, kStreamCaesarTrial, static_cast<std::uint64_t>(t)),
          kStreamCaesarEll, static_cast<std::uint64_t>(ells[e]));
      if (crack_caesar(trial, copt).shift == shift) ++wins[e];
    }
  }
  const bool rate_ok = wins[2] >= 9;
  const bool monotone_ok = wins[0] <= wins[1] && wins[1] <= wins[2];
  return detail::finish(
      8, "caesar", kBudget, timer.seconds(), rate_ok && monotone_ok,
      detail::fmt("successes out of %d ciphertexts (100k letters): ell=10: %d, ell=30: %d, "
                  "ell=50: %d; rate at 50 %s, non-decreasing %s",
                  kTrials, wins[0], wins[1], wins[2], rate_ok ? "ok" : "VIOLATED",
                  monotone_ok ? "ok" : "VIOLATED"));
}

// 9. Online testing keeps the false discovery rate controlled: across five
//    replicates of the 100x100 stream, mean final FDR stays within two
//    standard errors of the 5% target.
inline CriterionResult acceptance_fdr() {
  constexpr double kBudget = 600.0;
  constexpr int kReplicates = 5;
  constexpr double kTarget = 0.05;

  detail::CriterionTimer timer;
  std::vector<double> fdrs;
  std::string per_seed;
  for (int rep = 0; rep < kReplicates; ++rep) {
    FdrOptions opt;
    opt.seed = derive_seed(kAcceptanceSeed, kStreamFdrReplicate, static_cast<std::uint64_t>(rep));
    const FdrResult res = run_fdr_experiment(opt);
    fdrs.push_back(res.fdr);
    per_seed += detail::fmt("%s%.4f", rep == 0 ? "" : ", ", res.fdr);
  }
  double mean = 0.0;
  for (double f : fdrs) mean += f;
  mean /= fdrs.size();
  double ss = 0.0;
  for (double f : fdrs) ss += (f - mean) * (f - mean);
  const double se = std::sqrt(ss / (fdrs.size() - 1)) / std::sqrt(static_cast<double>(fdrs.size()));
  const bool ok = mean <= kTarget + 2.0 * se;
  return detail::finish(9, "fdr", kBudget, timer.seconds(), ok,
                        detail::fmt("final FDR per replicate: [%s]; mean %.4f, se %.4f, "
                                    "threshold %.4f",
                                    per_seed.c_str(), mean, se, kTarget + 2.0 * se));
}

// 10. Cost model: per-client transcript bytes are linear in the sketch width
//     and the masking degree (R^2 >= 0.99 over a 3x3 grid), and client encode
//     time is linear in the table size m at fixed width.
inline CriterionResult acceptance_cost_model() {
  constexpr double kBudget = 120.0;
  constexpr double kR2Floor = 0.99;
  const std::array<int, 3> n_grid{10, 50, 100};
  const std::array<int, 3> ell_grid{50, 100, 200};
  const std::array<int, 3> mx_grid{10, 20, 40};

  detail::CriterionTimer timer;
  SynthOptions synth;
  synth.kind = SynthKind::kQuadratic;
  synth.samples = 20000;
  synth.seed = derive_seed(kAcceptanceSeed, 72);
  const ContingencyTable global = synth_dataset(synth);

  Eigen::MatrixXd x_bytes(9, 4);
  Eigen::VectorXd y_bytes(9);
  int row = 0;
  for (int n : n_grid) {
    const auto clients =
        split_table(global, n, derive_seed(kAcceptanceSeed, 73, static_cast<std::uint64_t>(n)));
    for (int ell : ell_grid) {
      const auto point = static_cast<std::uint64_t>(n * 1000 + ell);
      ProtocolConfig cfg;
      cfg.n_clients = n;
      cfg.ell = ell;
      cfg.graph_seed = derive_seed(kAcceptanceSeed, 74, point);
      cfg.projection_seed = derive_seed(kAcceptanceSeed, 75, point);
      cfg.ka_seed = derive_seed(kAcceptanceSeed, 76, point);
      cfg.broadcast_projection_by_seed = true;
      FederatedChi2 protocol(cfg);
      protocol.run(clients);
      const CostReport report = cost_report_from_transcript(protocol.transcript(), n);
      x_bytes(row, 0) = 1.0;
      x_bytes(row, 1) = ell;
      x_bytes(row, 2) = cfg.m_x + cfg.m_y;
      x_bytes(row, 3) = protocol.graph().k;
      y_bytes(row) = report.mean_client_bytes();
      ++row;
    }
  }
  const LinearFit bytes_fit = fit_least_squares(x_bytes, y_bytes);

  // Encode-time scaling: time the projection of one client vector at fixed
  // width while the table size m grows.
  constexpr int kEll = 100;
  Eigen::MatrixXd x_time(3, 2);
  Eigen::VectorXd y_time(3);
  double guard = 0.0;  // consumes every sketch so the loop cannot be elided
  for (std::size_t i = 0; i < mx_grid.size(); ++i) {
    const int m = mx_grid[i] * mx_grid[i];  // square tables, m_y = m_x
    const auto p = sample_projection(kEll, m, derive_seed(kAcceptanceSeed, 77, mx_grid[i]));
    std::mt19937_64 rng(derive_seed(kAcceptanceSeed, 78, mx_grid[i]));
    std::normal_distribution<double> gauss(0.0, 1.0);
    std::vector<double> u(static_cast<std::size_t>(m));
    for (auto& v : u) v = gauss(rng);
    const auto t0 = std::chrono::steady_clock::now();
    int reps = 0;
    double elapsed = 0.0;
    while (elapsed < 0.08) {  // long enough to swamp timer noise
      guard += encode(p, u)[0];
      ++reps;
      elapsed = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    }
    x_time(static_cast<int>(i), 0) = 1.0;
    x_time(static_cast<int>(i), 1) = m;
    y_time(static_cast<int>(i)) = elapsed * 1000.0 / reps;  // ms per encode
  }
  const LinearFit time_fit = fit_least_squares(x_time, y_time);

  const bool ok = bytes_fit.r2 >= kR2Floor && time_fit.r2 >= kR2Floor && std::isfinite(guard);
  return detail::finish(
      10, "cost-model", kBudget, timer.seconds(), ok,
      detail::fmt("bytes/client fit over (n, ell) grid: R^2=%.6f (slope %.2f B per ell, %.2f B "
                  "per degree); encode-time fit vs m: R^2=%.6f (%.4f ms per 1k cells)",
                  bytes_fit.r2, bytes_fit.coef(1), bytes_fit.coef(3), time_fit.r2,
                  time_fit.coef(1) * 1000.0));
}

struct SuiteEntry {
  int id;
  const char* name;
};

inline const std::vector<SuiteEntry>& acceptance_suites() {
  static const std::vector<SuiteEntry> suites{
      {1, "recast-identity"}, {2, "mask-cancel"},  {3, "unbiasedness"}, {4, "accuracy-profile"},
      {5, "client-count"},    {6, "hiding-rank"},  {7, "tail-bound"},   {8, "caesar"},
      {9, "fdr"},             {10, "cost-model"},
  };
  return suites;
}

inline CriterionResult run_acceptance_criterion(int id, const std::string& data_dir) {
  switch (id) {
    case 1: return acceptance_recast_identity();
    case 2: return acceptance_mask_cancellation();
    case 3: return acceptance_decoder_unbiasedness();
    case 4: return acceptance_accuracy_profile();
    case 5: return acceptance_client_count_independence();
    case 6: return acceptance_hiding_rank();
    case 7: return acceptance_tail_bound_soundness();
    case 8: return acceptance_caesar(data_dir);
    case 9: return acceptance_fdr();
    case 10: return acceptance_cost_model();
    default: throw ConfigError("unknown acceptance criterion id " + std::to_string(id));
  }
}

// `suite` is "all", a criterion name, or a numeric id.
inline std::vector<CriterionResult> run_acceptance(const std::string& suite,
                                                   const std::string& data_dir) {
  std::vector<CriterionResult> results;
  if (suite == "all") {
    for (const auto& entry : acceptance_suites())
      results.push_back(run_acceptance_criterion(entry.id, data_dir));
    return results;
  }
  for (const auto& entry : acceptance_suites()) {
    if (suite == entry.name || suite == std::to_string(entry.id)) {
      results.push_back(run_acceptance_criterion(entry.id, data_dir));
      return results;
    }
  }
  throw ConfigError("unknown acceptance suite `" + suite + "`");
}

}  // namespace fedchi2
