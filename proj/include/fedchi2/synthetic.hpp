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

#include <boost/math/distributions/normal.hpp>
#include <cmath>
#include <cstdint>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

#include "fedchi2/contingency.hpp"

namespace fedchi2 {

// Synthetic (x, y) relationships used by the accuracy experiments. Samples are
// drawn as x ~ U(0,1), y = f(x) + Gaussian noise, then binned on a uniform
// grid over the unit square (values outside [0,1] land in the edge bins).
enum class SynthKind { kIndependent, kLinear, kQuadratic, kLogistic };

inline SynthKind parse_synth_kind(const std::string& s) {
  if (s == "independent") return SynthKind::kIndependent;
  if (s == "linear") return SynthKind::kLinear;
  if (s == "quadratic") return SynthKind::kQuadratic;
  if (s == "logistic") return SynthKind::kLogistic;
  throw std::invalid_argument("unknown dataset kind: " + s);
}

inline const char* synth_kind_name(SynthKind k) {
  switch (k) {
    case SynthKind::kIndependent: return "independent";
    case SynthKind::kLinear: return "linear";
    case SynthKind::kQuadratic: return "quadratic";
    case SynthKind::kLogistic: return "logistic";
  }
  return "?";
}

struct SynthOptions {
  SynthKind kind = SynthKind::kIndependent;
  int m_x = 20;
  int m_y = 20;
  std::int64_t samples = 100000;
  double noise_sigma = 0.1;  // sigma of the additive noise; response range is 1
  std::uint64_t seed = 0;
};

inline int unit_bin(double value, int bins) {
  int b = static_cast<int>(value * bins);
  if (b < 0) b = 0;
  if (b >= bins) b = bins - 1;
  return b;
}

inline ContingencyTable synth_dataset(const SynthOptions& opt) {
  ContingencyTable t(opt.m_x, opt.m_y);
  std::mt19937_64 rng(opt.seed);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  std::normal_distribution<double> noise(0.0, opt.noise_sigma);
  for (std::int64_t i = 0; i < opt.samples; ++i) {
    double x = unif(rng);
    double y;
    switch (opt.kind) {
      case SynthKind::kIndependent:
        y = unif(rng);
        break;
      case SynthKind::kLinear:
        y = x + noise(rng);
        break;
      case SynthKind::kQuadratic:
        y = 4.0 * (x - 0.5) * (x - 0.5) + noise(rng);
        break;
      case SynthKind::kLogistic:
        y = 1.0 / (1.0 + std::exp(-10.0 * (x - 0.5))) + noise(rng);
        break;
      default:
        throw std::logic_error("synth_dataset: bad kind");
    }
    ++t.at(unit_bin(x, opt.m_x), unit_bin(y, opt.m_y));
  }
  return t;
}

// Splits a global table into n per-client tables that sum back cell-exactly:
// each cell count is partitioned uniformly at random (multinomial with equal
// weights) across the clients.
inline std::vector<ContingencyTable> split_table(const ContingencyTable& t, int n,
                                                 std::uint64_t seed) {
  if (n <= 0) throw std::invalid_argument("split_table: n must be positive");
  std::vector<ContingencyTable> parts(static_cast<std::size_t>(n), ContingencyTable(t.m_x, t.m_y));
  std::mt19937_64 rng(seed);
  for (std::size_t j = 0; j < t.counts.size(); ++j) {
    std::int64_t remaining = t.counts[j];
    for (int i = 0; i < n - 1 && remaining > 0; ++i) {
      std::binomial_distribution<std::int64_t> bin(remaining, 1.0 / (n - i));
      std::int64_t take = bin(rng);
      parts[static_cast<std::size_t>(i)].counts[j] = take;
      remaining -= take;
    }
    parts[static_cast<std::size_t>(n - 1)].counts[j] = remaining;
  }
  return parts;
}

// Bivariate-Gaussian table for the online-testing experiments. Correlated
// pairs use a uniformly sampled covariance A*A^T (A entries U(-1,1), so the
// implied correlation varies over the full range); independent pairs use a
// diagonal covariance with uniform entries. Each axis is cut into
// equal-probability bins from its own marginal quantiles so expected cell
// counts are uniform.
struct GaussianPairOptions {
  bool correlated = false;
  int bins = 20;
  std::int64_t samples = 4000;
  std::uint64_t seed = 0;
};

inline ContingencyTable gaussian_pair_table(const GaussianPairOptions& opt) {
  std::mt19937_64 rng(opt.seed);
  std::uniform_real_distribution<double> unif(-1.0, 1.0);
  double c00, c01, c11;
  if (opt.correlated) {
    // A*A^T for A with U(-1,1) entries; regenerate while numerically singular.
    for (;;) {
      double a = unif(rng), b = unif(rng), c = unif(rng), d = unif(rng);
      c00 = a * a + b * b;
      c01 = a * c + b * d;
      c11 = c * c + d * d;
      if (c00 > 1e-3 && c11 > 1e-3 && c00 * c11 - c01 * c01 > 1e-6) break;
    }
  } else {
    c00 = 0.5 + 0.75 * (unif(rng) + 1.0);  // U(0.5, 2)
    c01 = 0.0;
    c11 = 0.5 + 0.75 * (unif(rng) + 1.0);
  }
  // Cholesky factor of the 2x2 covariance.
  double l00 = std::sqrt(c00);
  double l10 = c01 / l00;
  double l11 = std::sqrt(c11 - l10 * l10);

  // Equal-probability bin edges from the true axis scales.
  boost::math::normal_distribution<double> std_normal;
  std::vector<double> xe(static_cast<std::size_t>(opt.bins) - 1), ye(xe.size());
  for (int i = 1; i < opt.bins; ++i) {
    double q = boost::math::quantile(std_normal, static_cast<double>(i) / opt.bins);
    xe[static_cast<std::size_t>(i - 1)] = q * std::sqrt(c00);
    ye[static_cast<std::size_t>(i - 1)] = q * std::sqrt(c11);
  }
  auto bin_of = [&](double v, const std::vector<double>& edges) {
    int lo = 0, hi = static_cast<int>(edges.size());
    while (lo < hi) {
      int mid = (lo + hi) / 2;
      if (v < edges[static_cast<std::size_t>(mid)]) hi = mid; else lo = mid + 1;
    }
    return lo;
  };

  ContingencyTable t(opt.bins, opt.bins);
  std::normal_distribution<double> gauss(0.0, 1.0);
  for (std::int64_t i = 0; i < opt.samples; ++i) {
    double z1 = gauss(rng), z2 = gauss(rng);
    double x = l00 * z1;
    double y = l10 * z1 + l11 * z2;
    ++t.at(bin_of(x, xe), bin_of(y, ye));
  }
  return t;
}

}  // namespace fedchi2
