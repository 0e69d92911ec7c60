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
#include <stdexcept>
#include <vector>

#include <Eigen/Dense>

#include "fedchi2/transcript.hpp"

namespace fedchi2 {

struct CostReport {
  int n = 0;
  std::vector<std::uint64_t> client_bytes_sent;
  std::vector<std::uint64_t> client_bytes_received;
  std::uint64_t server_bytes_sent = 0;
  std::uint64_t server_bytes_received = 0;
  std::vector<int> masked_uploads;  // per client
  std::vector<int> key_messages_received;  // forwarded neighbor keys, per client
  std::uint64_t scalar_aggregations = 0;   // total scalars summed across invocations

  std::uint64_t client_bytes(int i) const {
    return client_bytes_sent[static_cast<std::size_t>(i)] +
           client_bytes_received[static_cast<std::size_t>(i)];
  }
  double mean_client_bytes() const {
    if (n == 0) return 0.0;
    long double acc = 0.0;
    for (int i = 0; i < n; ++i) acc += static_cast<long double>(client_bytes(i));
    return static_cast<double>(acc / n);
  }
  std::uint64_t max_client_bytes() const {
    std::uint64_t best = 0;
    for (int i = 0; i < n; ++i) best = std::max(best, client_bytes(i));
    return best;
  }
};

inline CostReport cost_report_from_transcript(const Transcript& ts, int n) {
  if (n < 1) throw std::invalid_argument("cost_report_from_transcript: n must be >= 1");
  CostReport r;
  r.n = n;
  r.client_bytes_sent.assign(static_cast<std::size_t>(n), 0);
  r.client_bytes_received.assign(static_cast<std::size_t>(n), 0);
  r.masked_uploads.assign(static_cast<std::size_t>(n), 0);
  r.key_messages_received.assign(static_cast<std::size_t>(n), 0);
  for (const auto& msg : ts.messages()) {
    if (msg.sender == kServerId) {
      r.server_bytes_sent += msg.bytes;
      if (msg.receiver >= 0 && msg.receiver < n) {
        r.client_bytes_received[static_cast<std::size_t>(msg.receiver)] += msg.bytes;
        if (msg.kind == MsgKind::kPublicKeyForward)
          ++r.key_messages_received[static_cast<std::size_t>(msg.receiver)];
      }
    } else if (msg.sender >= 0 && msg.sender < n) {
      r.client_bytes_sent[static_cast<std::size_t>(msg.sender)] += msg.bytes;
      if (msg.receiver == kServerId) r.server_bytes_received += msg.bytes;
      if (msg.kind == MsgKind::kMaskedInput)
        ++r.masked_uploads[static_cast<std::size_t>(msg.sender)];
    }
  }
  r.scalar_aggregations = ts.scalar_aggregations();
  return r;
}

struct LinearFit {
  Eigen::VectorXd coef;
  double r2 = 0.0;
};

// Ordinary least squares via a rank-revealing decomposition, with the
// coefficient of determination against the mean-only baseline.
inline LinearFit fit_least_squares(const Eigen::MatrixXd& x, const Eigen::VectorXd& y) {
  if (x.rows() != y.size())
    throw std::invalid_argument("fit_least_squares: row count mismatch");
  if (x.rows() == 0) throw std::invalid_argument("fit_least_squares: empty system");
  Eigen::CompleteOrthogonalDecomposition<Eigen::MatrixXd> cod(x);
  LinearFit fit;
  fit.coef = cod.solve(y);
  const Eigen::VectorXd resid = y - x * fit.coef;
  const double ss_res = resid.squaredNorm();
  const double mean = y.mean();
  const double ss_tot = (y.array() - mean).matrix().squaredNorm();
  fit.r2 = ss_tot > 0.0 ? 1.0 - ss_res / ss_tot : (ss_res <= 1e-12 ? 1.0 : 0.0);
  return fit;
}

}  // namespace fedchi2
