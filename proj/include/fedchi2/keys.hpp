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
#include <sodium.h>
#include <span>
#include <stdexcept>
#include <vector>

#include "fedchi2/prg.hpp"

namespace fedchi2 {

struct KeyPair {
  std::vector<std::uint8_t> pk;
  std::vector<std::uint8_t> sk;
};

// Pairwise key agreement between clients. Both sides must derive the same
// 128-bit seed: agree(kp_i, pk_j) == agree(kp_j, pk_i).
class KeyAgreement {
 public:
  virtual ~KeyAgreement() = default;
  virtual KeyPair generate(int client_id) = 0;
  virtual Seed128 agree(const KeyPair& own, std::span<const std::uint8_t> peer_pk) = 0;
  virtual std::size_t public_key_bytes() const = 0;
};

// NOT SECURE. Test/simulation stand-in: the "public key" is just the client
// id, and the shared seed is a hash of the sorted id pair plus a round salt.
// It exists so protocol runs are bit-reproducible from seeds; anyone holding
// the salt can recompute every mask. Use X25519KeyAgreement for a real
// exchange.
class TestKeyAgreement : public KeyAgreement {
 public:
  explicit TestKeyAgreement(std::uint64_t salt) : salt_(salt) { ensure_sodium(); }

  KeyPair generate(int client_id) override {
    KeyPair kp;
    kp.pk.resize(8);
    std::uint64_t id = static_cast<std::uint64_t>(client_id);
    std::memcpy(kp.pk.data(), &id, 8);
    kp.sk = kp.pk;
    return kp;
  }

  Seed128 agree(const KeyPair& own, std::span<const std::uint8_t> peer_pk) override {
    if (peer_pk.size() != 8) throw std::invalid_argument("test KA: bad public key size");
    std::uint64_t a = 0, b = 0;
    std::memcpy(&a, own.sk.data(), 8);
    std::memcpy(&b, peer_pk.data(), 8);
    if (a > b) std::swap(a, b);
    std::uint8_t buf[24];
    std::memcpy(buf, &salt_, 8);
    std::memcpy(buf + 8, &a, 8);
    std::memcpy(buf + 16, &b, 8);
    Seed128 seed;
    crypto_generichash(seed.data(), seed.size(), buf, sizeof buf, nullptr, 0);
    return seed;
  }

  std::size_t public_key_bytes() const override { return 8; }

 private:
  std::uint64_t salt_;
};

// X25519 Diffie-Hellman; the shared seed hashes the raw DH point together
// with both public keys (sorted) so either side derives the same value.
class X25519KeyAgreement : public KeyAgreement {
 public:
  X25519KeyAgreement() { ensure_sodium(); }

  KeyPair generate(int /*client_id*/) override {
    KeyPair kp;
    kp.sk.resize(crypto_scalarmult_SCALARBYTES);
    kp.pk.resize(crypto_scalarmult_BYTES);
    randombytes_buf(kp.sk.data(), kp.sk.size());
    crypto_scalarmult_base(kp.pk.data(), kp.sk.data());
    return kp;
  }

  Seed128 agree(const KeyPair& own, std::span<const std::uint8_t> peer_pk) override {
    if (peer_pk.size() != crypto_scalarmult_BYTES)
      throw std::invalid_argument("x25519 KA: bad public key size");
    std::uint8_t point[crypto_scalarmult_BYTES];
    if (crypto_scalarmult(point, own.sk.data(), peer_pk.data()) != 0)
      throw std::runtime_error("x25519 KA: degenerate shared point");
    // Transcript-bind the seed to the sorted public keys.
    const std::uint8_t* lo = own.pk.data();
    const std::uint8_t* hi = peer_pk.data();
    if (std::memcmp(lo, hi, crypto_scalarmult_BYTES) > 0) std::swap(lo, hi);
    std::vector<std::uint8_t> buf(3 * crypto_scalarmult_BYTES);
    std::memcpy(buf.data(), point, crypto_scalarmult_BYTES);
    std::memcpy(buf.data() + crypto_scalarmult_BYTES, lo, crypto_scalarmult_BYTES);
    std::memcpy(buf.data() + 2 * crypto_scalarmult_BYTES, hi, crypto_scalarmult_BYTES);
    Seed128 seed;
    crypto_generichash(seed.data(), seed.size(), buf.data(), buf.size(), nullptr, 0);
    return seed;
  }

  std::size_t public_key_bytes() const override { return crypto_scalarmult_BYTES; }
};

}  // namespace fedchi2
