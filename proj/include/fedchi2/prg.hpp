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

#include <array>
#include <bit>
#include <cstdint>
#include <cstring>
#include <sodium.h>
#include <stdexcept>
#include <vector>

namespace fedchi2 {

inline void ensure_sodium() {
  static const int rc = sodium_init();
  if (rc < 0) throw std::runtime_error("libsodium failed to initialize");
}

// Pairwise secret shared by two clients; 128 bits.
using Seed128 = std::array<std::uint8_t, 16>;

// Expands a pairwise seed into `count` ring elements for one aggregation
// invocation. The seed is stretched to a ChaCha20 key via BLAKE2b, the
// invocation id becomes the stream nonce (so every invocation draws a fresh
// pad from the same seed), and the keystream is consumed eight bytes at a
// time, little-endian, as residues mod 2^64.
inline std::vector<std::uint64_t> expand_mask(const Seed128& seed, std::uint64_t invocation,
                                              std::size_t count) {
  ensure_sodium();
  std::array<std::uint8_t, crypto_stream_chacha20_KEYBYTES> key{};
  crypto_generichash(key.data(), key.size(), seed.data(), seed.size(), nullptr, 0);
  std::array<std::uint8_t, crypto_stream_chacha20_NONCEBYTES> nonce{};
  static_assert(crypto_stream_chacha20_NONCEBYTES == 8);
  for (int b = 0; b < 8; ++b)
    nonce[static_cast<std::size_t>(b)] = static_cast<std::uint8_t>(invocation >> (8 * b));
  std::vector<std::uint8_t> stream(count * 8);
  if (!stream.empty())
    crypto_stream_chacha20(stream.data(), stream.size(), nonce.data(), key.data());
  std::vector<std::uint64_t> out(count);
  for (std::size_t j = 0; j < count; ++j) {
    std::uint64_t w = 0;
    std::memcpy(&w, stream.data() + 8 * j, 8);  // little-endian host assumed below
    out[j] = w;
  }
  return out;
}

static_assert(std::endian::native == std::endian::little,
              "mask expansion assumes a little-endian host");

}  // namespace fedchi2
