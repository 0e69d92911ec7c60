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

#include <cmath>
#include <cstdint>
#include <fstream>
#include <span>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace fedchi2 {

// Row-major cell index for an m_x-by-m_y table, x in [0, m_x), y in [0, m_y).
inline int flat_index(int x, int y, int m_y) { return x * m_y + y; }

inline std::pair<int, int> unflat_index(int idx, int m_y) {
  return {idx / m_y, idx % m_y};
}

// Two-way contingency table of integer counts, stored row-major.
struct ContingencyTable {
  int m_x = 0;
  int m_y = 0;
  std::vector<std::int64_t> counts;  // counts[flat_index(x, y, m_y)]

  ContingencyTable() = default;
  ContingencyTable(int mx, int my)
      : m_x(mx), m_y(my), counts(static_cast<std::size_t>(mx) * my, 0) {
    if (mx <= 0 || my <= 0) throw std::invalid_argument("table dims must be positive");
  }

  std::int64_t& at(int x, int y) { return counts[static_cast<std::size_t>(flat_index(x, y, m_y))]; }
  std::int64_t at(int x, int y) const { return counts[static_cast<std::size_t>(flat_index(x, y, m_y))]; }
  int cells() const { return m_x * m_y; }

  bool operator==(const ContingencyTable&) const = default;
};

struct Marginals {
  std::vector<std::int64_t> row;  // per-row totals, length m_x
  std::vector<std::int64_t> col;  // per-column totals, length m_y
  std::int64_t total = 0;

  bool operator==(const Marginals&) const = default;
};

// Raised when a marginal needed as a chi-squared denominator is zero.
class ZeroMarginalError : public std::runtime_error {
 public:
  // axis: 'x' for a row total, 'y' for a column total, 't' for the grand total.
  ZeroMarginalError(char axis, int index)
      : std::runtime_error(std::string("zero marginal on ") +
                           (axis == 'x' ? "row " : axis == 'y' ? "column " : "total, index ") +
                           std::to_string(index)),
        axis_(axis),
        index_(index) {}
  char axis() const { return axis_; }
  int index() const { return index_; }

 private:
  char axis_;
  int index_;
};

inline Marginals marginals(const ContingencyTable& t) {
  Marginals m;
  m.row.assign(t.m_x, 0);
  m.col.assign(t.m_y, 0);
  for (int x = 0; x < t.m_x; ++x) {
    for (int y = 0; y < t.m_y; ++y) {
      std::int64_t v = t.at(x, y);
      m.row[x] += v;
      m.col[y] += v;
      m.total += v;
    }
  }
  return m;
}

inline void check_positive_marginals(const Marginals& m) {
  if (m.total <= 0) throw ZeroMarginalError('t', 0);
  for (std::size_t x = 0; x < m.row.size(); ++x)
    if (m.row[x] == 0) throw ZeroMarginalError('x', static_cast<int>(x));
  for (std::size_t y = 0; y < m.col.size(); ++y)
    if (m.col[y] == 0) throw ZeroMarginalError('y', static_cast<int>(y));
}

// Cell-wise sum of per-client tables with identical dimensions.
inline ContingencyTable merge_tables(std::span<const ContingencyTable> parts) {
  if (parts.empty()) throw std::invalid_argument("merge_tables: no tables");
  ContingencyTable out(parts[0].m_x, parts[0].m_y);
  for (const auto& p : parts) {
    if (p.m_x != out.m_x || p.m_y != out.m_y)
      throw std::invalid_argument("merge_tables: dimension mismatch");
    for (std::size_t j = 0; j < out.counts.size(); ++j) out.counts[j] += p.counts[j];
  }
  return out;
}

// Pearson chi-squared statistic sum_{x,y} (v_xy - v_x*v_y/v)^2 / (v_x*v_y/v).
// Requires every row and column total to be positive.
inline double chi2_statistic(const ContingencyTable& t) {
  Marginals m = marginals(t);
  check_positive_marginals(m);
  double v = static_cast<double>(m.total);
  double s = 0.0;
  for (int x = 0; x < t.m_x; ++x) {
    for (int y = 0; y < t.m_y; ++y) {
      double expected = static_cast<double>(m.row[x]) * static_cast<double>(m.col[y]) / v;
      double dev = static_cast<double>(t.at(x, y)) - expected;
      s += dev * dev / expected;
    }
  }
  return s;
}

inline int chi2_dof(int m_x, int m_y) { return (m_x - 1) * (m_y - 1); }

// Standardized client share: u[j] = (v_j_local - expected_j / n) / sqrt(expected_j),
// where expected_j is the independence-expected count from the global marginals.
// Summed over all n clients, ||sum u||^2 equals the global chi-squared statistic.
inline std::vector<double> u_from_counts(std::span<const double> local_flat,
                                         const Marginals& global, int n_clients) {
  check_positive_marginals(global);
  int m_x = static_cast<int>(global.row.size());
  int m_y = static_cast<int>(global.col.size());
  if (local_flat.size() != static_cast<std::size_t>(m_x) * m_y)
    throw std::invalid_argument("u_from_counts: size mismatch");
  if (n_clients <= 0) throw std::invalid_argument("u_from_counts: n_clients must be positive");
  double v = static_cast<double>(global.total);
  std::vector<double> u(local_flat.size());
  for (int x = 0; x < m_x; ++x) {
    for (int y = 0; y < m_y; ++y) {
      int j = flat_index(x, y, m_y);
      double expected = static_cast<double>(global.row[x]) * static_cast<double>(global.col[y]) / v;
      u[static_cast<std::size_t>(j)] =
          (local_flat[static_cast<std::size_t>(j)] - expected / n_clients) / std::sqrt(expected);
    }
  }
  return u;
}

inline std::vector<double> build_u_vector(const ContingencyTable& local,
                                          const Marginals& global, int n_clients) {
  if (static_cast<int>(global.row.size()) != local.m_x ||
      static_cast<int>(global.col.size()) != local.m_y)
    throw std::invalid_argument("build_u_vector: dimension mismatch");
  std::vector<double> flat(local.counts.begin(), local.counts.end());
  return u_from_counts(flat, global, n_clients);
}

inline double squared_norm(std::span<const double> v) {
  double s = 0.0;
  for (double x : v) s += x * x;
  return s;
}

// --- CSV round trip -------------------------------------------------------
//
// Format: first row holds column labels (leading cell names the table),
// each following row starts with its row label. Counts are plain integers.

inline void save_table_csv(const std::string& path, const ContingencyTable& t,
                           const std::string& name = "table") {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("save_table_csv: cannot open " + path);
  out << name;
  for (int y = 0; y < t.m_y; ++y) out << ",y" << (y + 1);
  out << "\n";
  for (int x = 0; x < t.m_x; ++x) {
    out << "x" << (x + 1);
    for (int y = 0; y < t.m_y; ++y) out << "," << t.at(x, y);
    out << "\n";
  }
}

inline ContingencyTable load_table_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("load_table_csv: cannot open " + path);
  std::string line;
  if (!std::getline(in, line)) throw std::runtime_error("load_table_csv: empty file " + path);
  int m_y = 0;
  for (char c : line)
    if (c == ',') ++m_y;
  if (m_y == 0) throw std::runtime_error("load_table_csv: no data columns in " + path);
  std::vector<std::int64_t> counts;
  int rows = 0;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::istringstream ss(line);
    std::string cell;
    if (!std::getline(ss, cell, ',')) break;  // row label
    int got = 0;
    while (std::getline(ss, cell, ',')) {
      counts.push_back(std::stoll(cell));
      ++got;
    }
    if (got != m_y)
      throw std::runtime_error("load_table_csv: ragged row in " + path);
    ++rows;
  }
  if (rows == 0) throw std::runtime_error("load_table_csv: no rows in " + path);
  ContingencyTable t(rows, m_y);
  t.counts = std::move(counts);
  return t;
}

}  // namespace fedchi2
