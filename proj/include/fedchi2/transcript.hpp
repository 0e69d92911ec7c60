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
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace fedchi2 {

// The server's party id in transcripts; clients are 0..n-1.
inline constexpr int kServerId = -1;

enum class MsgKind {
  kGraphInfo,        // server -> client: neighbor list
  kPublicKey,        // client -> server: own public key
  kPublicKeyForward, // server -> client: a neighbor's public key
  kMaskedInput,      // client -> server: masked ring vector
  kMarginalsBroadcast,
  kProjectionBroadcast,
};

inline const char* msg_kind_name(MsgKind k) {
  switch (k) {
    case MsgKind::kGraphInfo: return "graph_info";
    case MsgKind::kPublicKey: return "public_key";
    case MsgKind::kPublicKeyForward: return "pk_forward";
    case MsgKind::kMaskedInput: return "masked_input";
    case MsgKind::kMarginalsBroadcast: return "marginals";
    case MsgKind::kProjectionBroadcast: return "projection";
  }
  return "?";
}

inline MsgKind parse_msg_kind(const std::string& s) {
  if (s == "graph_info") return MsgKind::kGraphInfo;
  if (s == "public_key") return MsgKind::kPublicKey;
  if (s == "pk_forward") return MsgKind::kPublicKeyForward;
  if (s == "masked_input") return MsgKind::kMaskedInput;
  if (s == "marginals") return MsgKind::kMarginalsBroadcast;
  if (s == "projection") return MsgKind::kProjectionBroadcast;
  throw std::invalid_argument("unknown message kind: " + s);
}

struct Message {
  int round = 0;  // 0 = setup; aggregation invocations count from 1
  int sender = kServerId;
  int receiver = kServerId;
  MsgKind kind = MsgKind::kGraphInfo;
  std::uint64_t bytes = 0;
  std::vector<std::uint8_t> payload;  // kept only when payload recording is on
};

// One vector-valued aggregation invocation; `width` scalar sums ride in it.
struct AggInvocation {
  int round = 0;
  int width = 0;
};

// Ordered log of every message the simulated transport carried, plus the
// aggregation invocations that structured them. Payload bytes are optional
// (they only back the masking-entropy checks); sizes are always recorded.
class Transcript {
 public:
  bool record_payloads = true;

  void log(int round, int sender, int receiver, MsgKind kind,
           const std::vector<std::uint8_t>& payload) {
    Message m;
    m.round = round;
    m.sender = sender;
    m.receiver = receiver;
    m.kind = kind;
    m.bytes = payload.size();
    if (record_payloads) m.payload = payload;
    messages_.push_back(std::move(m));
  }

  void log_size_only(int round, int sender, int receiver, MsgKind kind, std::uint64_t bytes) {
    Message m;
    m.round = round;
    m.sender = sender;
    m.receiver = receiver;
    m.kind = kind;
    m.bytes = bytes;
    messages_.push_back(std::move(m));
  }

  void note_invocation(int round, int width) { invocations_.push_back({round, width}); }

  const std::vector<Message>& messages() const { return messages_; }
  const std::vector<AggInvocation>& invocations() const { return invocations_; }

  int scalar_aggregations() const {
    int total = 0;
    for (const auto& inv : invocations_) total += inv.width;
    return total;
  }

  std::uint64_t bytes_sent_by(int party) const {
    std::uint64_t total = 0;
    for (const auto& m : messages_)
      if (m.sender == party) total += m.bytes;
    return total;
  }

  std::uint64_t bytes_received_by(int party) const {
    std::uint64_t total = 0;
    for (const auto& m : messages_)
      if (m.receiver == party) total += m.bytes;
    return total;
  }

  int count(MsgKind kind, int sender = INT32_MIN, int receiver = INT32_MIN) const {
    int c = 0;
    for (const auto& m : messages_)
      if (m.kind == kind && (sender == INT32_MIN || m.sender == sender) &&
          (receiver == INT32_MIN || m.receiver == receiver))
        ++c;
    return c;
  }

  // Line format: round,sender,receiver,bytes,kind -- one message per line,
  // preceded by invocation lines "agg,round,width".
  void save(const std::string& path) const {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("transcript save: cannot open " + path);
    for (const auto& inv : invocations_) out << "agg," << inv.round << "," << inv.width << "\n";
    for (const auto& m : messages_)
      out << m.round << "," << m.sender << "," << m.receiver << "," << m.bytes << ","
          << msg_kind_name(m.kind) << "\n";
  }

  static Transcript load(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("transcript load: cannot open " + path);
    Transcript t;
    t.record_payloads = false;
    std::string line;
    while (std::getline(in, line)) {
      if (line.empty()) continue;
      std::istringstream ss(line);
      std::string field;
      std::getline(ss, field, ',');
      if (field == "agg") {
        AggInvocation inv;
        std::getline(ss, field, ',');
        inv.round = std::stoi(field);
        std::getline(ss, field, ',');
        inv.width = std::stoi(field);
        t.invocations_.push_back(inv);
        continue;
      }
      Message m;
      m.round = std::stoi(field);
      std::getline(ss, field, ',');
      m.sender = std::stoi(field);
      std::getline(ss, field, ',');
      m.receiver = std::stoi(field);
      std::getline(ss, field, ',');
      m.bytes = std::stoull(field);
      std::getline(ss, field, ',');
      m.kind = parse_msg_kind(field);
      t.messages_.push_back(std::move(m));
    }
    return t;
  }

 private:
  std::vector<Message> messages_;
  std::vector<AggInvocation> invocations_;
};

}  // namespace fedchi2
