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

#include <cstdint>
#include <cstring>
#include <stdexcept>
#include <vector>

#include "fedchi2/field.hpp"
#include "fedchi2/graph.hpp"
#include "fedchi2/keys.hpp"
#include "fedchi2/prg.hpp"
#include "fedchi2/transcript.hpp"

namespace fedchi2 {

// One masked-aggregation session over a fixed communication graph. The
// constructor plays the setup phase: every client generates a key pair,
// uploads its public key, and receives its neighbors' keys forwarded by the
// server; each client then derives one pairwise seed per incident edge.
// Every aggregate() call afterwards is a fresh invocation whose pairwise
// pads are expanded from those seeds under the invocation id, so pads never
// repeat across invocations.
//
// Dropouts are out of scope: a missing input is an error and the invocation
// aborts.
class SecureAggSession {
 public:
  SecureAggSession(const CommGraph& graph, KeyAgreement& ka, Transcript* ts)
      : graph_(graph), ts_(ts) {
    const int n = graph_.n;
    std::vector<KeyPair> kp(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) kp[static_cast<std::size_t>(i)] = ka.generate(i);

    if (ts_) {
      for (int i = 0; i < n; ++i)
        ts_->log(0, i, kServerId, MsgKind::kPublicKey, kp[static_cast<std::size_t>(i)].pk);
      for (int i = 0; i < n; ++i) {
        // Neighbor list: count plus one id per neighbor.
        std::uint64_t info_bytes = 8 + 8 * static_cast<std::uint64_t>(graph_.degree(i));
        ts_->log_size_only(0, kServerId, i, MsgKind::kGraphInfo, info_bytes);
        for (int j : graph_.neighbors[static_cast<std::size_t>(i)]) {
          // Forwarded key: origin id plus the key itself.
          std::vector<std::uint8_t> fwd(8 + kp[static_cast<std::size_t>(j)].pk.size());
          std::uint64_t origin = static_cast<std::uint64_t>(j);
          std::memcpy(fwd.data(), &origin, 8);
          std::memcpy(fwd.data() + 8, kp[static_cast<std::size_t>(j)].pk.data(),
                      kp[static_cast<std::size_t>(j)].pk.size());
          ts_->log(0, kServerId, i, MsgKind::kPublicKeyForward, fwd);
        }
      }
    }

    // Each client derives its own copy of the per-edge seed; cancellation
    // relies on the key agreement being symmetric.
    edge_seeds_.resize(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) {
      const auto& adj = graph_.neighbors[static_cast<std::size_t>(i)];
      edge_seeds_[static_cast<std::size_t>(i)].reserve(adj.size());
      for (int j : adj)
        edge_seeds_[static_cast<std::size_t>(i)].push_back(
            ka.agree(kp[static_cast<std::size_t>(i)], kp[static_cast<std::size_t>(j)].pk));
    }
  }

  struct AggResult {
    std::vector<std::uint64_t> field_sum;  // exact ring sum of the masked inputs
    std::vector<double> values;            // fixed-point decode of field_sum
  };

  // Sums one real vector per client. All vectors must share a length; the
  // scale is the fixed-point resolution (1 for integer payloads).
  AggResult aggregate(const std::vector<std::vector<double>>& per_client, std::uint64_t scale) {
    const int n = graph_.n;
    if (static_cast<int>(per_client.size()) != n)
      throw std::invalid_argument("secure agg: need exactly one input per client (no dropouts)");
    const std::size_t width = per_client.empty() ? 0 : per_client[0].size();
    for (const auto& v : per_client)
      if (v.size() != width) throw std::invalid_argument("secure agg: input width mismatch");

    const int invocation = next_invocation_++;
    if (ts_) ts_->note_invocation(invocation, static_cast<int>(width));

    AggResult out;
    out.field_sum.assign(width, 0);
    for (int i = 0; i < n; ++i) {
      std::vector<std::uint64_t> y = fixed_point_encode_vector(
          per_client[static_cast<std::size_t>(i)], scale, static_cast<std::uint64_t>(n));
      const auto& adj = graph_.neighbors[static_cast<std::size_t>(i)];
      for (std::size_t idx = 0; idx < adj.size(); ++idx) {
        std::vector<std::uint64_t> pad = expand_mask(
            edge_seeds_[static_cast<std::size_t>(i)][idx],
            static_cast<std::uint64_t>(invocation), width);
        // Lower client id adds the pairwise pad, higher id subtracts it.
        if (i < adj[idx]) field_add_in_place(y, pad); else field_sub_in_place(y, pad);
      }
      if (ts_) {
        if (ts_->record_payloads) {
          std::vector<std::uint8_t> payload(width * 8);
          if (width > 0) std::memcpy(payload.data(), y.data(), payload.size());
          ts_->log(invocation, i, kServerId, MsgKind::kMaskedInput, payload);
        } else {
          ts_->log_size_only(invocation, i, kServerId, MsgKind::kMaskedInput, width * 8);
        }
      }
      field_add_in_place(out.field_sum, y);
    }
    out.values = fixed_point_decode_vector(out.field_sum, scale);
    return out;
  }

  int invocations_used() const { return next_invocation_ - 1; }

 private:
  CommGraph graph_;
  Transcript* ts_;
  std::vector<std::vector<Seed128>> edge_seeds_;  // aligned with neighbors[i]
  int next_invocation_ = 1;
};

}  // namespace fedchi2
