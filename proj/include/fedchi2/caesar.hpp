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
#include <array>
#include <cctype>
#include <cstdint>
#include <fstream>
#include <numeric>
#include <random>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "fedchi2/contingency.hpp"
#include "fedchi2/protocol.hpp"
#include "fedchi2/seeds.hpp"

namespace fedchi2 {

inline constexpr int kAlphabet = 26;

// Case-folds and strips everything that is not a letter.
inline std::string normalize_text(std::string_view raw) {
  std::string out;
  out.reserve(raw.size());
  for (unsigned char c : raw)
    if (std::isalpha(c)) out.push_back(static_cast<char>(std::tolower(c)));
  return out;
}

inline std::string caesar_encrypt(std::string_view plain, int shift) {
  const int s = ((shift % kAlphabet) + kAlphabet) % kAlphabet;
  std::string out(plain);
  for (char& c : out) {
    if (c < 'a' || c > 'z')
      throw std::invalid_argument("caesar_encrypt: input must be normalized lowercase letters");
    c = static_cast<char>('a' + (c - 'a' + s) % kAlphabet);
  }
  return out;
}

inline std::array<std::int64_t, kAlphabet> letter_counts(std::string_view text) {
  std::array<std::int64_t, kAlphabet> counts{};
  for (char c : text) {
    if (c < 'a' || c > 'z')
      throw std::invalid_argument("letter_counts: input must be normalized lowercase letters");
    ++counts[static_cast<std::size_t>(c - 'a')];
  }
  return counts;
}

inline std::array<std::int64_t, kAlphabet> load_letter_counts_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("load_letter_counts_csv: cannot open " + path);
  std::array<std::int64_t, kAlphabet> counts{};
  std::array<bool, kAlphabet> seen{};
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    std::istringstream row(line);
    std::string letter, value;
    if (!std::getline(row, letter, ',') || !std::getline(row, value, ','))
      throw std::runtime_error("load_letter_counts_csv: malformed line: " + line);
    if (letter.size() != 1 || letter[0] < 'a' || letter[0] > 'z')
      throw std::runtime_error("load_letter_counts_csv: bad letter: " + line);
    const std::size_t idx = static_cast<std::size_t>(letter[0] - 'a');
    counts[idx] = std::stoll(value);
    seen[idx] = true;
  }
  for (int a = 0; a < kAlphabet; ++a)
    if (!seen[static_cast<std::size_t>(a)])
      throw std::runtime_error("load_letter_counts_csv: missing letter " +
                               std::string(1, static_cast<char>('a' + a)));
  return counts;
}

// Scales a reference count vector to integers summing exactly to `target`
// (largest-remainder apportionment), then bumps every zero entry to one,
// paying from the largest entries, so no letter column can vanish.
inline std::array<std::int64_t, kAlphabet> apportion_counts(
    const std::array<std::int64_t, kAlphabet>& reference, std::int64_t target) {
  if (target < kAlphabet)
    throw std::invalid_argument("apportion_counts: target below one count per letter");
  const double total = static_cast<double>(
      std::accumulate(reference.begin(), reference.end(), std::int64_t{0}));
  if (!(total > 0)) throw std::invalid_argument("apportion_counts: empty reference");

  std::array<std::int64_t, kAlphabet> out{};
  std::array<double, kAlphabet> frac{};
  std::int64_t assigned = 0;
  for (int a = 0; a < kAlphabet; ++a) {
    const double share =
        static_cast<double>(reference[static_cast<std::size_t>(a)]) / total *
        static_cast<double>(target);
    out[static_cast<std::size_t>(a)] = static_cast<std::int64_t>(share);
    frac[static_cast<std::size_t>(a)] = share - static_cast<double>(out[static_cast<std::size_t>(a)]);
    assigned += out[static_cast<std::size_t>(a)];
  }
  std::array<int, kAlphabet> order{};
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](int lhs, int rhs) {
    if (frac[static_cast<std::size_t>(lhs)] != frac[static_cast<std::size_t>(rhs)])
      return frac[static_cast<std::size_t>(lhs)] > frac[static_cast<std::size_t>(rhs)];
    return lhs < rhs;
  });
  for (int i = 0; assigned < target; ++i, ++assigned)
    ++out[static_cast<std::size_t>(order[static_cast<std::size_t>(i % kAlphabet)])];

  for (int a = 0; a < kAlphabet; ++a) {
    while (out[static_cast<std::size_t>(a)] < 1) {
      auto big = std::max_element(out.begin(), out.end());
      --(*big);
      ++out[static_cast<std::size_t>(a)];
    }
  }
  return out;
}

struct CipherTrial {
  std::string ciphertext;  // normalized lowercase letters
  std::array<std::int64_t, kAlphabet> reference_counts{};
};

struct CaesarOptions {
  int n_clients = 10;
  int ell = 50;
  std::uint64_t scale = 1ull << 20;
  std::uint64_t seed = 0;  // root for per-shift protocol seeds
};

// Rotating decryption on counts: letter a of the decryption under shift s
// came from ciphertext letter a + s.
inline std::array<std::int64_t, kAlphabet> rotate_counts(
    const std::array<std::int64_t, kAlphabet>& cipher_counts, int shift) {
  std::array<std::int64_t, kAlphabet> out{};
  for (int a = 0; a < kAlphabet; ++a)
    out[static_cast<std::size_t>(a)] =
        cipher_counts[static_cast<std::size_t>((a + shift) % kAlphabet)];
  return out;
}

// Per-client share of the homogeneity table for one candidate shift. Rows:
// decrypted first ciphertext half, decrypted second half, and two reference
// rows apportioned to the half lengths (contributed by client 0, since the
// reference is public). Under the right shift all four rows follow the
// English letter law and the statistic sits near its degrees of freedom;
// under a wrong shift the decrypted rows follow a rotated law and the
// statistic scales with the ciphertext length.
inline std::vector<ContingencyTable> caesar_client_tables(const CipherTrial& trial,
                                                          int shift, int n_clients) {
  const std::int64_t len = static_cast<std::int64_t>(trial.ciphertext.size());
  if (len < 2 * kAlphabet) throw std::invalid_argument("caesar: ciphertext too short");
  if (n_clients < 1) throw std::invalid_argument("caesar: need at least one client");
  const std::int64_t half = len / 2;

  std::vector<ContingencyTable> tables(static_cast<std::size_t>(n_clients),
                                       ContingencyTable(4, kAlphabet));
  for (int i = 0; i < n_clients; ++i) {
    const std::int64_t begin = len * i / n_clients;
    const std::int64_t end = len * (i + 1) / n_clients;
    std::array<std::int64_t, kAlphabet> first{}, second{};
    for (std::int64_t pos = begin; pos < end; ++pos) {
      const char c = trial.ciphertext[static_cast<std::size_t>(pos)];
      auto& row = pos < half ? first : second;
      ++row[static_cast<std::size_t>(c - 'a')];
    }
    const auto first_dec = rotate_counts(first, shift);
    const auto second_dec = rotate_counts(second, shift);
    for (int a = 0; a < kAlphabet; ++a) {
      tables[static_cast<std::size_t>(i)].at(0, a) = first_dec[static_cast<std::size_t>(a)];
      tables[static_cast<std::size_t>(i)].at(1, a) = second_dec[static_cast<std::size_t>(a)];
    }
  }
  const auto ref_first = apportion_counts(trial.reference_counts, half);
  const auto ref_second = apportion_counts(trial.reference_counts, len - half);
  for (int a = 0; a < kAlphabet; ++a) {
    tables[0].at(2, a) = ref_first[static_cast<std::size_t>(a)];
    tables[0].at(3, a) = ref_second[static_cast<std::size_t>(a)];
  }
  return tables;
}

struct CaesarCrackResult {
  int shift = 0;                          // argmin of the decoded statistics
  std::array<double, kAlphabet> statistics{};  // decoded statistic per candidate
};

inline CaesarCrackResult crack_caesar(const CipherTrial& trial, const CaesarOptions& opt) {
  CaesarCrackResult res;
  double best = 0.0;
  for (int s = 0; s < kAlphabet; ++s) {
    auto clients = caesar_client_tables(trial, s, opt.n_clients);
    ProtocolConfig cfg;
    cfg.n_clients = opt.n_clients;
    cfg.m_x = 4;
    cfg.m_y = kAlphabet;
    cfg.ell = opt.ell;
    cfg.scale = opt.scale;
    cfg.graph_seed = derive_seed(opt.seed, 10, static_cast<std::uint64_t>(s));
    cfg.projection_seed = derive_seed(opt.seed, 11, static_cast<std::uint64_t>(s));
    cfg.ka_seed = derive_seed(opt.seed, 12, static_cast<std::uint64_t>(s));
    const double stat = FederatedChi2(cfg).run(clients).estimate;
    res.statistics[static_cast<std::size_t>(s)] = stat;
    if (s == 0 || stat < best) {
      best = stat;
      res.shift = s;
    }
  }
  return res;
}

// Letter-bigram generator fit on a normalized sample; used to synthesize
// arbitrarily long English-like plaintext with the sample's letter law.
class EnglishModel {
 public:
  static EnglishModel train(std::string_view normalized_text) {
    if (normalized_text.size() < 2)
      throw std::invalid_argument("EnglishModel: sample too short");
    EnglishModel m;
    std::array<std::array<std::int64_t, kAlphabet>, kAlphabet> bigram{};
    std::array<std::int64_t, kAlphabet> unigram{};
    for (std::size_t i = 0; i < normalized_text.size(); ++i) {
      const int a = normalized_text[i] - 'a';
      if (a < 0 || a >= kAlphabet)
        throw std::invalid_argument("EnglishModel: input must be normalized");
      ++unigram[static_cast<std::size_t>(a)];
      if (i + 1 < normalized_text.size()) {
        const int b = normalized_text[i + 1] - 'a';
        ++bigram[static_cast<std::size_t>(a)][static_cast<std::size_t>(b)];
      }
    }
    // Lightly smoothed cumulative transition tables; the small floor keeps
    // every state reachable without visibly tilting the letter law toward
    // uniform on a few-kilobyte training sample.
    const double smoothing = 0.05;
    for (int a = 0; a < kAlphabet; ++a) {
      double acc = 0.0;
      double total = 0.0;
      for (int b = 0; b < kAlphabet; ++b)
        total += static_cast<double>(bigram[static_cast<std::size_t>(a)][static_cast<std::size_t>(b)]) + smoothing;
      for (int b = 0; b < kAlphabet; ++b) {
        acc += (static_cast<double>(bigram[static_cast<std::size_t>(a)][static_cast<std::size_t>(b)]) + smoothing) / total;
        m.transition_cdf_[static_cast<std::size_t>(a)][static_cast<std::size_t>(b)] = acc;
      }
      m.transition_cdf_[static_cast<std::size_t>(a)][kAlphabet - 1] = 1.0;
    }
    double acc = 0.0;
    const double total = static_cast<double>(normalized_text.size());
    for (int a = 0; a < kAlphabet; ++a) {
      acc += static_cast<double>(unigram[static_cast<std::size_t>(a)]) / total;
      m.start_cdf_[static_cast<std::size_t>(a)] = acc;
    }
    m.start_cdf_[kAlphabet - 1] = 1.0;
    return m;
  }

  std::string sample(std::size_t length, std::uint64_t seed) const {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    std::string out;
    out.reserve(length);
    int state = pick(start_cdf_, unif(rng));
    for (std::size_t i = 0; i < length; ++i) {
      out.push_back(static_cast<char>('a' + state));
      state = pick(transition_cdf_[static_cast<std::size_t>(state)], unif(rng));
    }
    return out;
  }

 private:
  static int pick(const std::array<double, kAlphabet>& cdf, double u) {
    const auto it = std::lower_bound(cdf.begin(), cdf.end(), u);
    return static_cast<int>(std::min<std::ptrdiff_t>(it - cdf.begin(), kAlphabet - 1));
  }

  std::array<std::array<double, kAlphabet>, kAlphabet> transition_cdf_{};
  std::array<double, kAlphabet> start_cdf_{};
};

}  // namespace fedchi2
