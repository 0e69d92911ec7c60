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
#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <vector>

#include <boost/math/distributions/chi_squared.hpp>
#include <boost/math/special_functions/gamma.hpp>

namespace fedchi2 {

// Survival function of the chi-squared distribution,
// P[X >= stat] = Q(dof/2, stat/2).
inline double chi2_sf(double stat, int dof) {
  if (dof < 1) throw std::invalid_argument("chi2_sf: dof must be >= 1");
  if (!(stat >= 0.0)) throw std::invalid_argument("chi2_sf: statistic must be >= 0");
  return boost::math::gamma_q(0.5 * static_cast<double>(dof), 0.5 * stat);
}

// Critical value c with P[X >= c] = significance.
inline double chi2_critical(int dof, double significance) {
  if (dof < 1) throw std::invalid_argument("chi2_critical: dof must be >= 1");
  if (!(significance > 0.0 && significance < 1.0))
    throw std::invalid_argument("chi2_critical: significance must be in (0, 1)");
  boost::math::chi_squared_distribution<double> dist(static_cast<double>(dof));
  return boost::math::quantile(boost::math::complement(dist, significance));
}

struct KsResult {
  double statistic = 0.0;  // sup-distance between the two empirical CDFs
  double p_value = 1.0;    // asymptotic two-sided p-value
};

// Two-sample Kolmogorov-Smirnov test with the standard asymptotic p-value
// Q(lambda) = 2 * sum_{k>=1} (-1)^{k-1} exp(-2 k^2 lambda^2) evaluated at
// lambda = (sqrt(ne) + 0.12 + 0.11/sqrt(ne)) * D, ne = na*nb/(na+nb).
inline KsResult two_sample_ks(std::vector<double> a, std::vector<double> b) {
  if (a.empty() || b.empty())
    throw std::invalid_argument("two_sample_ks: both samples must be non-empty");
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  const std::size_t na = a.size();
  const std::size_t nb = b.size();
  std::size_t ia = 0;
  std::size_t ib = 0;
  double d = 0.0;
  while (ia < na && ib < nb) {
    const double xa = a[ia];
    const double xb = b[ib];
    if (xa <= xb) ++ia;
    if (xb <= xa) ++ib;
    const double fa = static_cast<double>(ia) / static_cast<double>(na);
    const double fb = static_cast<double>(ib) / static_cast<double>(nb);
    d = std::max(d, std::abs(fa - fb));
  }
  KsResult out;
  out.statistic = d;
  const double ne = static_cast<double>(na) * static_cast<double>(nb) /
                    static_cast<double>(na + nb);
  const double lambda = (std::sqrt(ne) + 0.12 + 0.11 / std::sqrt(ne)) * d;
  double q = 0.0;
  double sign = 1.0;
  bool converged = false;
  for (int k = 1; k <= 100; ++k) {
    const double term = std::exp(-2.0 * k * k * lambda * lambda);
    q += 2.0 * sign * term;
    sign = -sign;
    if (term < 1e-12) {
      converged = true;
      break;
    }
  }
  // The alternating series only converges for lambda away from zero; a
  // non-converged sum means the distance is so small the p-value is ~1.
  out.p_value = converged ? std::clamp(q, 0.0, 1.0) : 1.0;
  return out;
}

}  // namespace fedchi2
