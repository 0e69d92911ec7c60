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

#include <cmath>
#include <random>
#include <vector>

#include <gtest/gtest.h>

#include "fedchi2/saffron.hpp"
#include "fedchi2/stats.hpp"

namespace fedchi2 {
namespace {

// Independent reference for the regularized upper incomplete gamma Q(a, x):
// power series for x < a + 1, modified Lentz continued fraction otherwise.
// Deliberately a different algorithm from the library-backed chi2_sf route.
double ReferenceGammaQ(double a, double x) {
  if (x < 0.0 || a <= 0.0) throw std::invalid_argument("bad arguments");
  if (x == 0.0) return 1.0;
  const double log_prefix = a * std::log(x) - x - std::lgamma(a);
  if (x < a + 1.0) {
    // P(a,x) series: sum_{n>=0} x^n Gamma(a) / Gamma(a+1+n)
    double term = 1.0 / a;
    double sum = term;
    double ap = a;
    for (int n = 0; n < 1000; ++n) {
      ap += 1.0;
      term *= x / ap;
      sum += term;
      if (std::fabs(term) < std::fabs(sum) * 1e-16) break;
    }
    return 1.0 - sum * std::exp(log_prefix);
  }
  // Q(a,x) continued fraction: x^a e^-x / Gamma(a) * 1/(x+1-a- 1(1-a)/(x+3-a- ...))
  const double tiny = 1e-300;
  double b = x + 1.0 - a;
  double c = 1.0 / tiny;
  double d = 1.0 / b;
  double h = d;
  for (int i = 1; i <= 1000; ++i) {
    const double an = -static_cast<double>(i) * (static_cast<double>(i) - a);
    b += 2.0;
    d = an * d + b;
    if (std::fabs(d) < tiny) d = tiny;
    c = b + an / c;
    if (std::fabs(c) < tiny) c = tiny;
    d = 1.0 / d;
    const double delta = d * c;
    h *= delta;
    if (std::fabs(delta - 1.0) < 1e-16) break;
  }
  return std::exp(log_prefix) * h;
}

TEST(Chi2Test, FrozenSurvivalValues) {
  // 3.8414588206941245 is the 95th percentile of chi-squared with 1 dof.
  EXPECT_NEAR(chi2_sf(3.8414588206941245, 1), 0.05, 1e-12);
  // With 2 dof the survival function is exp(-x/2).
  EXPECT_NEAR(chi2_sf(4.0, 2), std::exp(-2.0), 1e-14);
  EXPECT_DOUBLE_EQ(chi2_sf(0.0, 5), 1.0);
  EXPECT_LT(chi2_sf(1000.0, 5), 1e-200);
}

TEST(Chi2Test, MatchesContinuedFractionOracle) {
  const double stats[] = {0.5, 1.0, 3.84, 5.0, 10.0, 50.0, 200.0, 361.0, 500.0};
  const int dofs[] = {1, 2, 5, 10, 75, 100, 361};
  for (double s : stats) {
    for (int d : dofs) {
      const double mine = chi2_sf(s, d);
      const double ref = ReferenceGammaQ(0.5 * d, 0.5 * s);
      EXPECT_NEAR(mine, ref, 1e-10 * std::max(1.0, std::fabs(ref)))
          << "stat=" << s << " dof=" << d;
    }
  }
}

TEST(Chi2Test, CriticalValueInvertsSurvival) {
  EXPECT_NEAR(chi2_critical(1, 0.05), 3.8414588206941245, 1e-9);
  for (int dof : {1, 5, 75, 361}) {
    for (double sig : {0.01, 0.05, 0.5}) {
      EXPECT_NEAR(chi2_sf(chi2_critical(dof, sig), dof), sig, 1e-10)
          << "dof=" << dof << " sig=" << sig;
    }
  }
  EXPECT_THROW(chi2_critical(0, 0.05), std::invalid_argument);
  EXPECT_THROW(chi2_critical(5, 0.0), std::invalid_argument);
  EXPECT_THROW(chi2_sf(-1.0, 5), std::invalid_argument);
}

TEST(KsTest, IdenticalSamplesScoreZero) {
  std::vector<double> a{1.0, 2.0, 3.0, 4.0};
  KsResult r = two_sample_ks(a, a);
  EXPECT_DOUBLE_EQ(r.statistic, 0.0);
  EXPECT_DOUBLE_EQ(r.p_value, 1.0);
}

TEST(KsTest, DisjointSamplesScoreOne) {
  std::vector<double> a{1.0, 2.0, 3.0};
  std::vector<double> b{10.0, 11.0, 12.0};
  KsResult r = two_sample_ks(a, b);
  EXPECT_DOUBLE_EQ(r.statistic, 1.0);
  EXPECT_LT(r.p_value, 0.1);
}

TEST(KsTest, InterleavedSmallSample) {
  std::vector<double> a{1.0, 2.0, 3.0, 4.0, 5.0};
  std::vector<double> b{1.5, 2.5, 3.5, 4.5, 5.5};
  KsResult r = two_sample_ks(a, b);
  EXPECT_NEAR(r.statistic, 0.2, 1e-12);
  EXPECT_GT(r.p_value, 0.99);
}

TEST(KsTest, SameDistributionRarelyRejects) {
  std::mt19937_64 rng(2024);
  std::normal_distribution<double> dist(0.0, 1.0);
  int rejections = 0;
  for (int rep = 0; rep < 50; ++rep) {
    std::vector<double> a(200), b(200);
    for (auto& v : a) v = dist(rng);
    for (auto& v : b) v = dist(rng);
    if (two_sample_ks(a, b).p_value < 0.05) ++rejections;
  }
  EXPECT_LE(rejections, 8);  // ~2.5 expected at the 5% level
}

TEST(KsTest, ShiftedDistributionDetected) {
  std::mt19937_64 rng(2025);
  std::normal_distribution<double> base(0.0, 1.0), shifted(1.0, 1.0);
  std::vector<double> a(500), b(500);
  for (auto& v : a) v = base(rng);
  for (auto& v : b) v = shifted(rng);
  EXPECT_LT(two_sample_ks(a, b).p_value, 1e-6);
}

// ---------------------------------------------------------------------------
// Alpha-investing stream
// ---------------------------------------------------------------------------

TEST(SaffronTest, GammaSequenceFrozen) {
  const auto g = gamma_sequence();
  ASSERT_EQ(g.size(), 10001u);
  // Ratio of the first two weights is 2^1.6.
  EXPECT_NEAR(g[0] / g[1], std::pow(2.0, 1.6), 1e-12);
  double sum = 0.0;
  for (double v : g) sum += v;
  EXPECT_NEAR(sum, 1.0, 1e-12);
  for (std::size_t j = 1; j < g.size(); ++j) EXPECT_LE(g[j], g[j - 1]);
}

TEST(SaffronTest, FirstLevelFrozen) {
  const auto g = gamma_sequence();
  SaffronState s;
  EXPECT_FALSE(s.step(0.9));
  // alpha_1 = (1 - lambda) * gamma_1 * W0 with lambda = 0.5, W0 = 0.0125.
  EXPECT_NEAR(s.last_alpha(), 0.5 * g[1] * 0.0125, 1e-15);
}

TEST(SaffronTest, CandidacyPreservesTheLevel) {
  const auto g = gamma_sequence();
  // A candidate (p < lambda) that is not rejected freezes the spending index.
  SaffronState with_candidate;
  with_candidate.step(0.3);
  with_candidate.step(0.9);
  EXPECT_NEAR(with_candidate.last_alpha(), 0.5 * g[1] * 0.0125, 1e-15);

  // A non-candidate advances it.
  SaffronState without;
  without.step(0.9);
  without.step(0.9);
  EXPECT_NEAR(without.last_alpha(), 0.5 * g[2] * 0.0125, 1e-15);
}

TEST(SaffronTest, RejectionEarnsWealth) {
  const auto g = gamma_sequence();
  SaffronState s;
  EXPECT_TRUE(s.step(1e-9));  // alpha_1 ~ 9e-4, so this rejects
  ASSERT_EQ(s.rejections(), 1);
  EXPECT_EQ(s.rejection_times().front(), 1);
  s.step(0.9);
  // alpha_2 = 0.5 * (W0 * gamma_1 + (alpha - W0) * gamma_1) = 0.5 * alpha * gamma_1.
  EXPECT_NEAR(s.last_alpha(), 0.5 * 0.05 * g[1], 1e-15);
}

TEST(SaffronTest, HighStreamNeverRejects) {
  SaffronState s;
  for (int t = 0; t < 200; ++t) EXPECT_FALSE(s.step(1.0));
  EXPECT_EQ(s.rejections(), 0);
  EXPECT_EQ(s.tests(), 200);
}

TEST(SaffronTest, ReplayDeterminism) {
  std::mt19937_64 rng(77);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  std::vector<double> stream(500);
  for (auto& p : stream) p = std::pow(unif(rng), 3.0);  // some small p-values

  SaffronState a, b;
  std::vector<int> ra, rb;
  for (double p : stream) {
    if (a.step(p)) ra.push_back(a.tests());
  }
  for (double p : stream) {
    if (b.step(p)) rb.push_back(b.tests());
  }
  EXPECT_EQ(ra, rb);
  EXPECT_GT(a.rejections(), 0);
}

TEST(SaffronTest, UniformNullStreamStaysQuiet) {
  std::mt19937_64 rng(2026);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  SaffronState s;
  for (int t = 0; t < 2000; ++t) s.step(unif(rng));
  // All-null uniform stream: rejections are rare under wealth control.
  EXPECT_LE(s.rejections(), 20);
}

TEST(SaffronTest, OptionValidation) {
  SaffronOptions bad;
  bad.alpha = 0.0;
  EXPECT_THROW(SaffronState{bad}, std::invalid_argument);
  bad = SaffronOptions{};
  bad.w0 = 0.2;  // exceeds alpha
  EXPECT_THROW(SaffronState{bad}, std::invalid_argument);
  bad = SaffronOptions{};
  bad.lambda = 1.0;
  EXPECT_THROW(SaffronState{bad}, std::invalid_argument);
  SaffronState ok;
  EXPECT_THROW(ok.step(1.5), std::invalid_argument);
}

}  // namespace
}  // namespace fedchi2
