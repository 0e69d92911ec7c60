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

#include <cstdio>
#include <random>

#include "fedchi2/contingency.hpp"
#include "fedchi2/synthetic.hpp"

namespace fedchi2 {
namespace {

ContingencyTable MakeTable(int mx, int my, std::initializer_list<std::int64_t> vals) {
  ContingencyTable t(mx, my);
  int j = 0;
  for (auto v : vals) t.counts[static_cast<std::size_t>(j++)] = v;
  return t;
}

// Random table with every marginal positive (resampled on the rare misses).
ContingencyTable RandomTable(int mx, int my, std::int64_t max_count, std::mt19937_64& rng) {
  std::uniform_int_distribution<std::int64_t> cell(0, max_count);
  for (;;) {
    ContingencyTable t(mx, my);
    for (auto& c : t.counts) c = cell(rng);
    Marginals m = marginals(t);
    bool ok = m.total > 0;
    for (auto v : m.row) ok = ok && v > 0;
    for (auto v : m.col) ok = ok && v > 0;
    if (ok) return t;
  }
}

TEST(FlatIndexTest, RoundTripIsExhaustivelyBijective) {
  const int mx = 5, my = 7;
  std::vector<bool> seen(static_cast<std::size_t>(mx * my), false);
  for (int x = 0; x < mx; ++x) {
    for (int y = 0; y < my; ++y) {
      int idx = flat_index(x, y, my);
      ASSERT_GE(idx, 0);
      ASSERT_LT(idx, mx * my);
      EXPECT_FALSE(seen[static_cast<std::size_t>(idx)]);
      seen[static_cast<std::size_t>(idx)] = true;
      auto [bx, by] = unflat_index(idx, my);
      EXPECT_EQ(bx, x);
      EXPECT_EQ(by, y);
    }
  }
}

TEST(FlatIndexTest, RowMajorArithmetic) {
  // Second row, third column of a 4-wide table sits at slot 6.
  EXPECT_EQ(flat_index(1, 2, 4), 6);
  EXPECT_EQ(flat_index(0, 0, 4), 0);
}

TEST(MarginalsTest, SmallExample) {
  ContingencyTable t = MakeTable(2, 2, {10, 20, 20, 10});
  Marginals m = marginals(t);
  EXPECT_EQ(m.row, (std::vector<std::int64_t>{30, 30}));
  EXPECT_EQ(m.col, (std::vector<std::int64_t>{30, 30}));
  EXPECT_EQ(m.total, 60);
}

TEST(Chi2StatisticTest, FrozenSmallExample) {
  // Expected counts are all 15, deviations all +-5: 4 * 25/15 = 100/15.
  ContingencyTable t = MakeTable(2, 2, {10, 20, 20, 10});
  EXPECT_NEAR(chi2_statistic(t), 100.0 / 15.0, 1e-12);
}

TEST(Chi2StatisticTest, ExactOuterProductGivesZero) {
  // counts[x][y] = a_x * b_y makes observed == expected cell-for-cell.
  const std::vector<std::int64_t> a{2, 3, 5}, b{1, 4, 2, 3};
  ContingencyTable t(3, 4);
  for (int x = 0; x < 3; ++x)
    for (int y = 0; y < 4; ++y) t.at(x, y) = a[static_cast<std::size_t>(x)] * b[static_cast<std::size_t>(y)];
  EXPECT_NEAR(chi2_statistic(t), 0.0, 1e-12);
}

TEST(Chi2StatisticTest, InvariantUnderTransposition) {
  std::mt19937_64 rng(7);
  for (int rep = 0; rep < 20; ++rep) {
    ContingencyTable t = RandomTable(6, 9, 50, rng);
    ContingencyTable tt(t.m_y, t.m_x);
    for (int x = 0; x < t.m_x; ++x)
      for (int y = 0; y < t.m_y; ++y) tt.at(y, x) = t.at(x, y);
    double a = chi2_statistic(t), b = chi2_statistic(tt);
    EXPECT_NEAR(a, b, 1e-9 * std::max(1.0, a));
  }
}

TEST(Chi2StatisticTest, ZeroMarginalRaisesWithLocation) {
  ContingencyTable t = MakeTable(3, 2, {5, 5, 0, 0, 5, 5});
  try {
    chi2_statistic(t);
    FAIL() << "expected ZeroMarginalError";
  } catch (const ZeroMarginalError& e) {
    EXPECT_EQ(e.axis(), 'x');
    EXPECT_EQ(e.index(), 1);
  }
  ContingencyTable c = MakeTable(2, 3, {5, 0, 5, 5, 0, 5});
  try {
    chi2_statistic(c);
    FAIL() << "expected ZeroMarginalError";
  } catch (const ZeroMarginalError& e) {
    EXPECT_EQ(e.axis(), 'y');
    EXPECT_EQ(e.index(), 1);
  }
}

TEST(UVectorTest, SingleClientNormRecoversStatistic) {
  std::mt19937_64 rng(11);
  for (int rep = 0; rep < 10; ++rep) {
    ContingencyTable t = RandomTable(4, 5, 100, rng);
    Marginals m = marginals(t);
    std::vector<double> u = build_u_vector(t, m, 1);
    EXPECT_NEAR(squared_norm(u), chi2_statistic(t), 1e-9 * std::max(1.0, chi2_statistic(t)));
  }
}

TEST(UVectorTest, SplitAndSumRecoversStatistic) {
  // Ground truth for the federated decomposition: sum the per-client shares
  // of a random 10-way split and compare the squared norm to the direct
  // statistic on the merged table.
  std::mt19937_64 rng(13);
  for (int rep = 0; rep < 10; ++rep) {
    ContingencyTable t = RandomTable(4, 4, 100, rng);
    Marginals m = marginals(t);
    const int n = 10;
    auto parts = split_table(t, n, 1000 + static_cast<std::uint64_t>(rep));
    std::vector<double> sum(static_cast<std::size_t>(t.cells()), 0.0);
    for (const auto& p : parts) {
      std::vector<double> u = build_u_vector(p, m, n);
      for (std::size_t j = 0; j < sum.size(); ++j) sum[j] += u[j];
    }
    double s = chi2_statistic(t);
    EXPECT_NEAR(squared_norm(sum), s, 1e-9 * std::max(1.0, s));
  }
}

TEST(UVectorTest, ZeroLocalTableMatchesClosedForm) {
  // A client with no data still contributes -sqrt(expected)/n per cell.
  ContingencyTable t = MakeTable(2, 2, {10, 20, 20, 10});
  Marginals m = marginals(t);
  ContingencyTable empty(2, 2);
  const int n = 4;
  std::vector<double> u = build_u_vector(empty, m, n);
  for (double val : u) EXPECT_NEAR(val, -std::sqrt(15.0) / n, 1e-12);
}

TEST(CsvTest, TableRoundTripsExactly) {
  std::mt19937_64 rng(17);
  ContingencyTable t = RandomTable(5, 3, 1000, rng);
  std::string path = ::testing::TempDir() + "fedchi2_table.csv";
  save_table_csv(path, t, "counts");
  ContingencyTable back = load_table_csv(path);
  EXPECT_EQ(back, t);
  std::remove(path.c_str());
}

TEST(MergeTest, MergeIsCellwiseSum) {
  std::mt19937_64 rng(19);
  ContingencyTable a = RandomTable(3, 3, 20, rng);
  ContingencyTable b = RandomTable(3, 3, 20, rng);
  ContingencyTable m = merge_tables(std::vector<ContingencyTable>{a, b});
  for (int j = 0; j < m.cells(); ++j)
    EXPECT_EQ(m.counts[static_cast<std::size_t>(j)],
              a.counts[static_cast<std::size_t>(j)] + b.counts[static_cast<std::size_t>(j)]);
}

TEST(SplitTest, PartsSumBackCellExactAndDeterministic) {
  std::mt19937_64 rng(23);
  ContingencyTable t = RandomTable(6, 6, 500, rng);
  auto parts = split_table(t, 7, 99);
  EXPECT_EQ(merge_tables(parts), t);
  auto again = split_table(t, 7, 99);
  for (int i = 0; i < 7; ++i) EXPECT_EQ(parts[static_cast<std::size_t>(i)], again[static_cast<std::size_t>(i)]);
}

TEST(SynthTest, DeterministicPerSeed) {
  SynthOptions opt;
  opt.kind = SynthKind::kLinear;
  opt.samples = 20000;
  opt.seed = 5;
  ContingencyTable a = synth_dataset(opt);
  ContingencyTable b = synth_dataset(opt);
  EXPECT_EQ(a, b);
  opt.seed = 6;
  EXPECT_NE(synth_dataset(opt), a);
}

TEST(SynthTest, IndependentKindHasNullScaleStatistic) {
  SynthOptions opt;
  opt.kind = SynthKind::kIndependent;
  opt.samples = 100000;
  opt.seed = 42;
  ContingencyTable t = synth_dataset(opt);
  double s = chi2_statistic(t);
  double dof = chi2_dof(opt.m_x, opt.m_y);
  // Null statistic concentrates around the dof; allow six sigmas.
  EXPECT_GT(s, dof - 6.0 * std::sqrt(2.0 * dof));
  EXPECT_LT(s, dof + 6.0 * std::sqrt(2.0 * dof));
}

TEST(SynthTest, NoiselessLinearIsDiagonal) {
  SynthOptions opt;
  opt.kind = SynthKind::kLinear;
  opt.m_x = opt.m_y = 10;
  opt.samples = 5000;
  opt.noise_sigma = 0.0;
  opt.seed = 3;
  ContingencyTable t = synth_dataset(opt);
  for (int x = 0; x < 10; ++x)
    for (int y = 0; y < 10; ++y)
      if (x != y) EXPECT_EQ(t.at(x, y), 0) << x << "," << y;
  EXPECT_GT(chi2_statistic(t), 1000.0);
}

TEST(GaussianPairTest, IndependentKindIsNullScale) {
  GaussianPairOptions opt;
  opt.correlated = false;
  opt.samples = 4000;
  opt.seed = 101;
  ContingencyTable t = gaussian_pair_table(opt);
  EXPECT_EQ(t.m_x, 20);
  Marginals m = marginals(t);
  EXPECT_EQ(m.total, 4000);
  double s = chi2_statistic(t);
  double dof = chi2_dof(20, 20);
  EXPECT_GT(s, dof - 6.0 * std::sqrt(2.0 * dof));
  EXPECT_LT(s, dof + 6.0 * std::sqrt(2.0 * dof));
}

TEST(GaussianPairTest, CorrelatedKindSeparatesFromNull) {
  // Correlation strength varies by seed; over a handful of seeds the bulk
  // must clear the null band by a wide margin.
  int strong = 0;
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    GaussianPairOptions opt;
    opt.correlated = true;
    opt.samples = 4000;
    opt.seed = seed;
    double s = chi2_statistic(gaussian_pair_table(opt));
    if (s > 2.0 * chi2_dof(20, 20)) ++strong;
  }
  EXPECT_GE(strong, 7);
}

TEST(GaussianPairTest, Deterministic) {
  GaussianPairOptions opt;
  opt.correlated = true;
  opt.seed = 7;
  EXPECT_EQ(gaussian_pair_table(opt), gaussian_pair_table(opt));
}

}  // namespace
}  // namespace fedchi2
