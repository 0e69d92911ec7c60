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

#include <chrono>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <memory>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "fedchi2/config.hpp"
#include "fedchi2/contingency.hpp"
#include "fedchi2/graph.hpp"
#include "fedchi2/keys.hpp"
#include "fedchi2/projection.hpp"
#include "fedchi2/secure_agg.hpp"
#include "fedchi2/stats.hpp"
#include "fedchi2/transcript.hpp"

namespace fedchi2 {

enum class KaKind { kTest, kX25519 };

inline std::unique_ptr<KeyAgreement> make_key_agreement(KaKind kind, std::uint64_t seed) {
  if (kind == KaKind::kTest) return std::make_unique<TestKeyAgreement>(seed);
  return std::make_unique<X25519KeyAgreement>();
}

struct ProtocolConfig {
  int n_clients = 10;
  int m_x = 20;
  int m_y = 20;
  int ell = 50;                    // sketch width
  std::uint64_t scale = 1ull << 20;  // fixed-point resolution for sketch entries
  std::uint64_t graph_seed = 1;
  std::uint64_t projection_seed = 2;
  std::uint64_t ka_seed = 3;
  double significance = 0.05;
  bool broadcast_projection_by_seed = false;  // send the 8-byte seed instead of the matrix
  KaKind ka = KaKind::kTest;
  bool record_payloads = false;  // keep message payload bytes in the transcript
  bool plain_sum_oracle = false;  // bypass masking in round 2 (debug/reference path only)

  int m() const { return m_x * m_y; }
  int dof() const { return (m_x - 1) * (m_y - 1); }

  void validate() const {
    if (n_clients < 1) throw ConfigError("n_clients must be >= 1");
    if (m_x < 2 || m_y < 2) throw ConfigError("table must be at least 2x2");
    if (ell < kMinSketchWidth)
      throw ConfigError("sketch width must be >= " + std::to_string(kMinSketchWidth));
    if (scale < 1) throw ConfigError("scale must be >= 1");
    if (!(significance > 0.0 && significance < 1.0))
      throw ConfigError("significance must be in (0, 1)");
    // The marginals plus the sketch pin down at most m_x + m_y + ell linear
    // functionals of the m_x * m_y table; demand a nonzero hidden subspace.
    if (m() <= m_x + m_y + ell)
      throw ConfigError("hiding violated: need m_x*m_y > m_x + m_y + ell (got " +
                        std::to_string(m()) + " <= " +
                        std::to_string(m_x + m_y + ell) + ")");
  }
};

// Everything the server ends up holding: global marginals, the (public)
// projection seed, and the aggregate sketch with its decoded estimate.
struct ServerView {
  Marginals marginals;
  std::uint64_t projection_seed = 0;
  std::vector<double> aggregate_sketch;
  double estimate = 0.0;
};

struct ProtocolResult {
  double estimate = 0.0;       // decoded squared-norm statistic
  int dof = 0;
  double critical_value = 0.0;
  double p_value = 1.0;
  bool reject = false;
  Marginals marginals;
  double round1_ms = 0.0;
  double round2_ms = 0.0;
};

// Two-round federated independence test. Round 1 securely sums the per-client
// row and column marginals (integer payloads, scale 1) and broadcasts the
// global marginals; it aborts if any global marginal is zero. Round 2
// broadcasts a shared projection, has every client sketch its standardized
// residual vector, securely sums the sketches, and decodes the squared norm
// of the summed residual vector, which equals the chi-squared statistic of
// the pooled table up to sketching error.
class FederatedChi2 {
 public:
  explicit FederatedChi2(const ProtocolConfig& cfg) : cfg_(cfg) {
    cfg_.validate();
    ts_.record_payloads = cfg_.record_payloads;
  }

  Marginals run_round1(std::span<const ContingencyTable> clients) {
    const auto t0 = std::chrono::steady_clock::now();
    check_clients(clients);
    ensure_session();

    std::vector<std::vector<double>> rows(clients.size());
    std::vector<std::vector<double>> cols(clients.size());
    for (std::size_t i = 0; i < clients.size(); ++i) {
      Marginals local = marginals(clients[i]);
      rows[i].assign(local.row.begin(), local.row.end());
      cols[i].assign(local.col.begin(), local.col.end());
    }
    auto row_sum = session_->aggregate(rows, 1);
    auto col_sum = session_->aggregate(cols, 1);

    Marginals global;
    global.row.resize(static_cast<std::size_t>(cfg_.m_x));
    global.col.resize(static_cast<std::size_t>(cfg_.m_y));
    global.total = 0;
    for (int x = 0; x < cfg_.m_x; ++x) {
      global.row[static_cast<std::size_t>(x)] =
          std::llround(row_sum.values[static_cast<std::size_t>(x)]);
      global.total += global.row[static_cast<std::size_t>(x)];
    }
    for (int y = 0; y < cfg_.m_y; ++y)
      global.col[static_cast<std::size_t>(y)] =
          std::llround(col_sum.values[static_cast<std::size_t>(y)]);

    check_positive_marginals(global);  // protocol abort on a zero marginal

    const int round = session_->invocations_used();
    const std::uint64_t bytes = 8ull * static_cast<std::uint64_t>(cfg_.m_x + cfg_.m_y + 1);
    for (int i = 0; i < cfg_.n_clients; ++i)
      ts_.log_size_only(round, kServerId, i, MsgKind::kMarginalsBroadcast, bytes);

    marginals_ = global;
    round1_ms_ += elapsed_ms(t0);
    return global;
  }

  ProtocolResult run_round2(std::span<const ContingencyTable> clients) {
    if (!marginals_.has_value())
      throw std::logic_error("run_round2: round 1 has not produced marginals");
    const auto t0 = std::chrono::steady_clock::now();
    check_clients(clients);

    projection_ = sample_projection(cfg_.ell, cfg_.m(), cfg_.projection_seed);
    const std::uint64_t bcast_bytes =
        cfg_.broadcast_projection_by_seed
            ? 8ull
            : 8ull * static_cast<std::uint64_t>(cfg_.ell) * static_cast<std::uint64_t>(cfg_.m());
    const int round = session_->invocations_used() + 1;
    for (int i = 0; i < cfg_.n_clients; ++i)
      ts_.log_size_only(round, kServerId, i, MsgKind::kProjectionBroadcast, bcast_bytes);

    const auto t_enc = std::chrono::steady_clock::now();
    std::vector<std::vector<double>> sketches(clients.size());
    for (std::size_t i = 0; i < clients.size(); ++i) {
      std::vector<double> u = build_u_vector(clients[i], *marginals_, cfg_.n_clients);
      sketches[i] = encode(*projection_, u);
    }
    encode_ms_ += elapsed_ms(t_enc);

    ServerView view;
    view.marginals = *marginals_;
    view.projection_seed = cfg_.projection_seed;
    if (cfg_.plain_sum_oracle) {
      view.aggregate_sketch.assign(static_cast<std::size_t>(cfg_.ell), 0.0);
      for (const auto& s : sketches)
        for (std::size_t k = 0; k < s.size(); ++k) view.aggregate_sketch[k] += s[k];
    } else {
      auto agg = session_->aggregate(sketches, cfg_.scale);
      view.aggregate_sketch = std::move(agg.values);
    }
    view.estimate = decode_gm(view.aggregate_sketch);
    view_ = view;

    ProtocolResult res;
    res.estimate = view.estimate;
    res.dof = cfg_.dof();
    res.critical_value = chi2_critical(res.dof, cfg_.significance);
    res.p_value = chi2_sf(res.estimate, res.dof);
    res.reject = res.estimate > res.critical_value;
    res.marginals = *marginals_;
    round2_ms_ += elapsed_ms(t0);
    res.round1_ms = round1_ms_;
    res.round2_ms = round2_ms_;
    return res;
  }

  ProtocolResult run(std::span<const ContingencyTable> clients) {
    run_round1(clients);
    return run_round2(clients);
  }

  const Transcript& transcript() const { return ts_; }
  const ServerView& view() const {
    if (!view_.has_value()) throw std::logic_error("view: protocol has not completed round 2");
    return *view_;
  }
  const CommGraph& graph() const {
    if (!graph_.has_value()) throw std::logic_error("graph: setup has not run");
    return *graph_;
  }
  const ProjectionMatrix& projection() const {
    if (!projection_.has_value()) throw std::logic_error("projection: round 2 has not run");
    return *projection_;
  }
  const ProtocolConfig& config() const { return cfg_; }
  double encode_ms() const { return encode_ms_; }

 private:
  static double elapsed_ms(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0)
        .count();
  }

  void check_clients(std::span<const ContingencyTable> clients) const {
    if (static_cast<int>(clients.size()) != cfg_.n_clients)
      throw std::invalid_argument("expected one table per client");
    for (const auto& t : clients)
      if (t.m_x != cfg_.m_x || t.m_y != cfg_.m_y)
        throw std::invalid_argument("client table shape does not match the configuration");
  }

  void ensure_session() {
    if (session_) return;
    graph_ = init_secure_agg(cfg_.n_clients, cfg_.graph_seed);
    ka_ = make_key_agreement(cfg_.ka, cfg_.ka_seed);
    session_ = std::make_unique<SecureAggSession>(*graph_, *ka_, &ts_);
  }

  ProtocolConfig cfg_;
  Transcript ts_;
  std::optional<CommGraph> graph_;
  std::unique_ptr<KeyAgreement> ka_;
  std::unique_ptr<SecureAggSession> session_;
  std::optional<Marginals> marginals_;
  std::optional<ProjectionMatrix> projection_;
  std::optional<ServerView> view_;
  double round1_ms_ = 0.0;
  double round2_ms_ = 0.0;
  double encode_ms_ = 0.0;
};

}  // namespace fedchi2
