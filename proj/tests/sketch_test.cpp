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

#include <gtest/gtest.h>

#include <cmath>
#include <numeric>
#include <random>
#include <vector>

#include "fedchi2/projection.hpp"
#include "fedchi2/tail_bounds.hpp"

namespace fedchi2 {
namespace {

TEST(ProjectionTest, EntryMomentsMatchVarianceTwoGaussian) {
  // 10^6 entries: mean within 0.01, variance within 2.00 +- 0.02.
  ProjectionMatrix p = sample_projection(1000, 1000, 12345);
  double mean = p.rows.mean();
  double var = (p.rows.array() - mean).square().sum() / (p.rows.size() - 1.0);
  EXPECT_NEAR(mean, 0.0, 0.01);
  EXPECT_NEAR(var, 2.0, 0.02);
}

TEST(ProjectionTest, DeterministicPerSeed) {
  ProjectionMatrix a = sample_projection(16, 10, 9);
  ProjectionMatrix b = sample_projection(16, 10, 9);
  EXPECT_TRUE(a.rows == b.rows);
  ProjectionMatrix c = sample_projection(16, 10, 10);
  EXPECT_FALSE(a.rows == c.rows);
}

TEST(ProjectionTest, RejectsTooNarrowSketch) {
  EXPECT_THROW(sample_projection(7, 10, 0), std::invalid_argument);
  std::vector<double> tiny(7, 1.0);
  EXPECT_THROW(decode_gm(tiny), std::invalid_argument);
}

TEST(EncodeTest, ZeroVectorGivesZeroSketchAndZeroDecode) {
  ProjectionMatrix p = sample_projection(16, 12, 4);
  std::vector<double> zero(12, 0.0);
  SketchVector e = encode(p, zero);
  for (double v : e) EXPECT_EQ(v, 0.0);
  EXPECT_EQ(decode_gm(e), 0.0);
}

TEST(EncodeTest, IsLinear) {
  ProjectionMatrix p = sample_projection(32, 20, 77);
  std::mt19937_64 rng(5);
  std::normal_distribution<double> g(0.0, 1.0);
  std::vector<double> u(20), v(20), w(20);
  for (int j = 0; j < 20; ++j) {
    u[static_cast<std::size_t>(j)] = g(rng);
    v[static_cast<std::size_t>(j)] = g(rng);
    w[static_cast<std::size_t>(j)] = 3.0 * u[static_cast<std::size_t>(j)] - 0.5 * v[static_cast<std::size_t>(j)];
  }
  SketchVector eu = encode(p, u), ev = encode(p, v), ew = encode(p, w);
  for (int k = 0; k < 32; ++k) {
    double expect = 3.0 * eu[static_cast<std::size_t>(k)] - 0.5 * ev[static_cast<std::size_t>(k)];
    EXPECT_NEAR(ew[static_cast<std::size_t>(k)], expect, 1e-12 * std::max(1.0, std::fabs(expect)));
  }
}

TEST(EncodeTest, CoordinatesAreGaussianWithTwiceTheSquaredNorm) {
  // Each sketch coordinate is a Gaussian with variance 2 * ||u||^2.
  std::vector<double> u{1.0, -2.0, 0.5, 3.0};  // ||u||^2 = 14.25
  const double want_var = 2.0 * 14.25;
  const int trials = 10000;
  double sum = 0.0, sq = 0.0, quart = 0.0;
  for (int t = 0; t < trials; ++t) {
    ProjectionMatrix p = sample_projection(8, 4, 50000 + static_cast<std::uint64_t>(t));
    double e0 = encode(p, u)[0];
    sum += e0;
    sq += e0 * e0;
    quart += e0 * e0 * e0 * e0;
  }
  double mean = sum / trials;
  double var = sq / trials - mean * mean;
  EXPECT_NEAR(mean, 0.0, 0.25);
  EXPECT_NEAR(var / want_var, 1.0, 0.05);
  // Normal kurtosis: fourth moment ~ 3 var^2.
  EXPECT_NEAR(quart / trials / (3.0 * want_var * want_var), 1.0, 0.15);
}

TEST(DecodeTest, MonteCarloUnbiasedAcrossScales) {
  // The oracle that pins both the sampling convention and the decoder
  // constants: across fresh projections the mean decode must sit on the true
  // squared norm to within 2 percent, at ||u||^2 of 1, 100, and 10^4.
  const int ell = 50, m = 25, trials = 10000;
  for (double base : {0.2, 2.0, 20.0}) {
    std::vector<double> u(m, base);  // ||u||^2 = 25 * base^2
    double truth = 25.0 * base * base;
    double acc = 0.0;
    for (int t = 0; t < trials; ++t) {
      ProjectionMatrix p =
          sample_projection(ell, m, 777000 + static_cast<std::uint64_t>(t));
      acc += decode_gm(encode(p, u));
    }
    double mean = acc / trials;
    EXPECT_NEAR(mean / truth, 1.0, 0.02) << "||u||^2 = " << truth;
  }
}

TEST(DecodeTest, ScaleEquivariant) {
  ProjectionMatrix p = sample_projection(24, 10, 31);
  std::mt19937_64 rng(6);
  std::normal_distribution<double> g(0.0, 1.0);
  std::vector<double> u(10);
  for (auto& x : u) x = g(rng);
  double d = decode_gm(encode(p, u));
  for (double c : {2.0, 10.0}) {
    std::vector<double> cu(10);
    for (int j = 0; j < 10; ++j) cu[static_cast<std::size_t>(j)] = c * u[static_cast<std::size_t>(j)];
    double dc = decode_gm(encode(p, cu));
    EXPECT_NEAR(dc / (c * c * d), 1.0, 1e-12);
  }
}

TEST(DecodeTest, SingleShotErrorConcentration) {
  // At sketch width 50 the one-shot multiplicative error sits near 0.2.
  const int ell = 50, m = 16, trials = 2000;
  std::vector<double> u(m, 2.5);
  double truth = m * 2.5 * 2.5;
  double err = 0.0;
  for (int t = 0; t < trials; ++t) {
    ProjectionMatrix p = sample_projection(ell, m, 31000 + static_cast<std::uint64_t>(t));
    err += std::fabs(decode_gm(encode(p, u)) - truth) / truth;
  }
  double mean_err = err / trials;
  EXPECT_GT(mean_err, 0.1);
  EXPECT_LT(mean_err, 0.3);
}

TEST(TailBoundTest, RightBoundDecreasesInWidthAndEpsilon) {
  double prev = 1.1;
  for (int ell : {10, 25, 50, 100, 200}) {
    double b = right_tail_bound({0.2, ell, 8});
    EXPECT_LE(b, 1.0);
    EXPECT_GT(b, 0.0);
    EXPECT_LT(b, prev);
    prev = b;
  }
  prev = 1.1;
  for (double eps : {0.05, 0.1, 0.2, 0.3, 0.4, 0.5}) {
    double b = right_tail_bound({eps, 400, 8});
    EXPECT_LE(b, prev);
    prev = b;
  }
}

TEST(TailBoundTest, LeftBoundDecreasesInWidth) {
  double prev = 1.1;
  for (int ell : {64, 128, 256, 512}) {
    double b = left_tail_bound({0.3, ell, 32});
    EXPECT_LE(b, 1.0);
    EXPECT_GT(b, 0.0);
    EXPECT_LE(b, prev);
    prev = b;
  }
}

TEST(TailBoundTest, LeftBoundValidatesParams) {
  EXPECT_THROW(left_tail_bound({0.3, 8, 8}), std::invalid_argument);   // ell == ell0
  EXPECT_THROW(left_tail_bound({0.3, 10, 2}), std::invalid_argument);  // ell0 < 3
  EXPECT_THROW(left_tail_bound({1.2, 50, 8}), std::invalid_argument);  // eps >= 1
}

TEST(TailBoundTest, MonteCarloFrequenciesRespectBounds) {
  // 10^5 one-shot decodes at eps = 0.3, l = 50; the empirical over- and
  // under-estimation frequencies must not exceed the closed-form bounds,
  // including the tightest admissible left bound at l0 = 49.
  const int ell = 50, m = 10, trials = 100000;
  std::vector<double> u(m, 1.0);
  double truth = static_cast<double>(m);
  int over = 0, under = 0;
  for (int t = 0; t < trials; ++t) {
    ProjectionMatrix p = sample_projection(ell, m, 90000000 + static_cast<std::uint64_t>(t));
    double d = decode_gm(encode(p, u));
    if (d > 1.3 * truth) ++over;
    if (d < 0.7 * truth) ++under;
  }
  double over_freq = static_cast<double>(over) / trials;
  double under_freq = static_cast<double>(under) / trials;
  EXPECT_LE(over_freq, right_tail_bound({0.3, ell, 8}));
  EXPECT_LE(under_freq, left_tail_bound({0.3, ell, 8}));
  EXPECT_LE(under_freq, left_tail_bound({0.3, ell, ell - 1}));
}

TEST(RequiredEllTest, ReturnedWidthIsTheFirstCrossing) {
  int ell = required_ell(0.2, 0.05);
  EXPECT_GE(ell, kMinSketchWidth);
  TailBoundParams at{0.2, ell, ell - 1};
  EXPECT_LE(right_tail_bound(at) + left_tail_bound(at), 0.05);
  if (ell > kMinSketchWidth) {
    TailBoundParams before{0.2, ell - 1, ell - 2};
    EXPECT_GT(right_tail_bound(before) + left_tail_bound(before), 0.05);
  }
}

TEST(RequiredEllTest, MonotoneInDelta) {
  EXPECT_GE(required_ell(0.2, 0.01), required_ell(0.2, 0.05));
  EXPECT_GE(required_ell(0.2, 0.05), required_ell(0.2, 0.2));
}

TEST(RequiredEllTest, InverseQuadraticEpsilonScaling) {
  // Halving eps should cost about 4x the width.
  double ratio = static_cast<double>(required_ell(0.05, 0.05)) /
                 static_cast<double>(required_ell(0.1, 0.05));
  EXPECT_GT(ratio, 3.2);
  EXPECT_LT(ratio, 4.8);
}

}  // namespace
}  // namespace fedchi2
