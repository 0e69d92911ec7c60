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
#include <stdexcept>
#include <vector>

#include <Eigen/Dense>

#include "fedchi2/contingency.hpp"
#include "fedchi2/projection.hpp"

namespace fedchi2 {

struct RankCheck {
  int rank = 0;           // rank of [projection rows; marginal indicator rows]
  int nullspace_dim = 0;  // m_x*m_y minus that rank
};

// What the server learns about the pooled table is at most the span of the
// ell projection rows plus the m_x + m_y marginal-sum functionals. This
// bounds that span's dimension; a positive nullspace dimension certifies a
// whole affine subspace of tables indistinguishable from the released view.
inline RankCheck leakage_rank_check(const ProjectionMatrix& p, int m_x, int m_y) {
  if (p.m() != m_x * m_y)
    throw std::invalid_argument("leakage_rank_check: projection width != m_x*m_y");
  const int m = m_x * m_y;
  Eigen::MatrixXd a(p.ell() + m_x + m_y, m);
  a.topRows(p.ell()) = p.rows;
  a.bottomRows(m_x + m_y).setZero();
  for (int x = 0; x < m_x; ++x)
    for (int y = 0; y < m_y; ++y) a(p.ell() + x, flat_index(x, y, m_y)) = 1.0;
  for (int y = 0; y < m_y; ++y)
    for (int x = 0; x < m_x; ++x) a(p.ell() + m_x + y, flat_index(x, y, m_y)) = 1.0;
  Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(a);
  RankCheck out;
  out.rank = static_cast<int>(qr.rank());
  out.nullspace_dim = m - out.rank;
  return out;
}

// A concrete witness: a nonzero real-valued table perturbation with zero row
// and column margins whose standardized residual lies in the projection's
// kernel. Adding it to any table leaves the server's entire view (marginals,
// sketch, estimate) bit-for-bit unchanged on the real-valued path.
inline std::vector<double> hidden_table_delta(const ProjectionMatrix& p,
                                              const Marginals& global) {
  const int m_x = static_cast<int>(global.row.size());
  const int m_y = static_cast<int>(global.col.size());
  const int m = m_x * m_y;
  if (p.m() != m)
    throw std::invalid_argument("hidden_table_delta: projection width != m_x*m_y");
  check_positive_marginals(global);

  // Constraint rows act on the table delta directly: the projection rows are
  // rescaled by 1/sqrt(expected count) because the sketch sees the
  // standardized residual, not the raw cell delta.
  Eigen::MatrixXd b(p.ell() + m_x + m_y, m);
  b.setZero();
  const double total = static_cast<double>(global.total);
  for (int x = 0; x < m_x; ++x) {
    for (int y = 0; y < m_y; ++y) {
      const int j = flat_index(x, y, m_y);
      const double expected = static_cast<double>(global.row[static_cast<std::size_t>(x)]) *
                              static_cast<double>(global.col[static_cast<std::size_t>(y)]) /
                              total;
      for (int k = 0; k < p.ell(); ++k) b(k, j) = p.rows(k, j) / std::sqrt(expected);
      b(p.ell() + x, j) = 1.0;
      b(p.ell() + m_x + y, j) = 1.0;
    }
  }
  Eigen::FullPivLU<Eigen::MatrixXd> lu(b);
  if (lu.dimensionOfKernel() == 0)
    throw std::runtime_error("hidden_table_delta: constraint system has full column rank");
  Eigen::VectorXd w = lu.kernel().col(0);
  w /= w.cwiseAbs().maxCoeff();  // unit infinity norm, for a well-scaled witness
  return std::vector<double>(w.data(), w.data() + w.size());
}

}  // namespace fedchi2
