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
#include <stdexcept>

#include "fedchi2/projection.hpp"

namespace fedchi2 {

// Closed-form deviation bounds for the geometric-mean decoder, specialized to
// the 2-stable sketch. Both decay as exp(-l * rate(eps)) and are clamped into
// (0, 1]; for some (eps, l0) the left rate is nonpositive and the clamped
// bound is the vacuous 1.

inline constexpr double kEulerGamma = 0.577215665;

struct TailBoundParams {
  double epsilon = 0.2;
  int ell = 50;
  int ell0 = 8;  // only the left bound uses this; must satisfy 3 <= ell0 < ell
};

// P(estimate > (1+eps) * truth) <= exp(-l * rate) with
//   C1   = (2/pi) * atan(log(1+eps) / pi)
//   rate = C1*log(1+eps) - C1*euler_gamma
//          - log((2/pi) * Gamma(2*C1) * Gamma(1-C1) * sin(pi*C1)).
inline double right_tail_bound(const TailBoundParams& p) {
  if (p.epsilon <= 0.0) throw std::invalid_argument("right_tail_bound: epsilon must be positive");
  if (p.ell < 1) throw std::invalid_argument("right_tail_bound: ell must be positive");
  double log1e = std::log1p(p.epsilon);
  double c1 = (2.0 / M_PI) * std::atan(log1e / M_PI);
  double rate = c1 * log1e - c1 * kEulerGamma -
                std::log((2.0 / M_PI) * std::tgamma(2.0 * c1) * std::tgamma(1.0 - c1) *
                         std::sin(M_PI * c1));
  return std::min(1.0, std::exp(-static_cast<double>(p.ell) * rate));
}

// P(estimate < (1-eps) * truth) <= exp(-l * rate) for any 3 <= l0 < l, with
//   C2   = (2/pi^2) * eps
//   rate = -C2*log(1-eps)
//          - log(-(2/pi) * Gamma(-2*C2) * Gamma(1+C2) * sin(pi*C2))
//          - l0*C2 * log((2/pi) * Gamma(2/l0) * Gamma(1-1/l0) * sin(pi/l0)).
// The rate improves monotonically in l0, so larger admissible l0 give
// tighter bounds.
inline double left_tail_bound(const TailBoundParams& p) {
  if (p.epsilon <= 0.0 || p.epsilon >= 1.0)
    throw std::invalid_argument("left_tail_bound: epsilon must be in (0,1)");
  if (p.ell0 < 3) throw std::invalid_argument("left_tail_bound: ell0 must be at least 3");
  if (p.ell <= p.ell0) throw std::invalid_argument("left_tail_bound: requires ell > ell0");
  double c2 = (2.0 / (M_PI * M_PI)) * p.epsilon;
  double mid = -(2.0 / M_PI) * std::tgamma(-2.0 * c2) * std::tgamma(1.0 + c2) *
               std::sin(M_PI * c2);
  double rate = -c2 * std::log1p(-p.epsilon) - std::log(mid) -
                static_cast<double>(p.ell0) * c2 * gm_log_normalizer(p.ell0);
  return std::min(1.0, std::exp(-static_cast<double>(p.ell) * rate));
}

inline constexpr int kRequiredEllCap = 1000000;

// Smallest sketch width whose two-sided failure probability (right bound plus
// left bound, the left evaluated at its tightest admissible l0 = l-1) is at
// most delta. Linear upward scan from the decoder's minimum width; throws if
// no width up to the cap qualifies.
inline int required_ell(double epsilon, double delta) {
  if (epsilon <= 0.0 || epsilon >= 1.0)
    throw std::invalid_argument("required_ell: epsilon must be in (0,1)");
  if (delta <= 0.0 || delta >= 1.0)
    throw std::invalid_argument("required_ell: delta must be in (0,1)");
  for (int ell = kMinSketchWidth; ell <= kRequiredEllCap; ++ell) {
    TailBoundParams p{epsilon, ell, ell - 1};
    if (right_tail_bound(p) + left_tail_bound(p) <= delta) return ell;
  }
  throw std::runtime_error("required_ell: no sketch width up to cap satisfies the target");
}

}  // namespace fedchi2
