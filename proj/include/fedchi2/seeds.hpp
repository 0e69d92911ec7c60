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

namespace fedchi2 {

// Deterministic sub-seed derivation: mixes a root seed with up to two
// coordinates through a SplitMix64 finalizer so sweeps and per-hypothesis
// runs get independent, reproducible randomness.
inline std::uint64_t derive_seed(std::uint64_t root, std::uint64_t stream,
                                 std::uint64_t index = 0) {
  std::uint64_t z = root + 0x9e3779b97f4a7c15ull * (stream + 1) +
                    0xc2b2ae3d27d4eb4full * (index + 1);
  z ^= z >> 30;
  z *= 0xbf58476d1ce4e5b9ull;
  z ^= z >> 27;
  z *= 0x94d049bb133111ebull;
  z ^= z >> 31;
  return z;
}

// Streams shared between the command-line experiments and the acceptance
// suite, so an acceptance replicate can be reproduced from the CLI with the
// same root seed.
inline constexpr std::uint64_t kStreamCaesarModel = 68;  // plaintext stream sampling
inline constexpr std::uint64_t kStreamCaesarTrial = 69;  // per-ciphertext root
inline constexpr std::uint64_t kStreamCaesarEll = 70;    // per-sketch-width root
inline constexpr std::uint64_t kStreamFdrReplicate = 71; // per-replicate root

}  // namespace fedchi2
