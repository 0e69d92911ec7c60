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
#include <cstddef>
#include <stdexcept>
#include <vector>

namespace fedchi2 {

// Spending sequence gamma_j = (1/(j+1)^exponent) / sum_{j=0}^{horizon} of the
// same, indexed from 0. Non-increasing, sums to one over the horizon.
inline std::vector<double> gamma_sequence(double exponent = 1.6, int horizon = 10000) {
  if (horizon < 1) throw std::invalid_argument("gamma_sequence: horizon must be >= 1");
  if (!(exponent > 1.0)) throw std::invalid_argument("gamma_sequence: exponent must be > 1");
  std::vector<double> g(static_cast<std::size_t>(horizon) + 1);
  double z = 0.0;
  for (int j = 0; j <= horizon; ++j) {
    g[static_cast<std::size_t>(j)] = std::pow(static_cast<double>(j + 1), -exponent);
    z += g[static_cast<std::size_t>(j)];
  }
  for (auto& v : g) v /= z;
  return g;
}

struct SaffronOptions {
  double alpha = 0.05;    // target false discovery rate
  double w0 = 0.0125;     // initial wealth
  double lambda = 0.5;    // constant candidacy threshold
  double exponent = 1.6;  // spending-sequence decay
  int horizon = 10000;    // spending-sequence normalization horizon
};

// Online alpha-investing with candidacy. Each step consumes one p-value,
// computes the current testing level
//   alpha_t = (1 - lambda) * ( W0 * gamma_{t - C_{0+}}
//                            + (alpha - W0) * gamma_{t - tau_1 - C_{1+}}
//                            + sum_{j >= 2} alpha * gamma_{t - tau_j - C_{j+}} )
// where tau_j is the time of the j-th rejection and C_{j+} counts candidates
// (p_i < lambda) strictly between tau_j and t, then records candidacy and
// rejection (p_t <= alpha_t) for the new test.
class SaffronState {
 public:
  explicit SaffronState(const SaffronOptions& opt = {})
      : opt_(opt), gamma_(gamma_sequence(opt.exponent, opt.horizon)) {
    if (!(opt.alpha > 0.0 && opt.alpha < 1.0))
      throw std::invalid_argument("saffron: alpha must be in (0, 1)");
    if (!(opt.w0 > 0.0 && opt.w0 <= opt.alpha))
      throw std::invalid_argument("saffron: need 0 < W0 <= alpha");
    if (!(opt.lambda > 0.0 && opt.lambda < 1.0))
      throw std::invalid_argument("saffron: lambda must be in (0, 1)");
    cand_prefix_.push_back(0);  // prefix[t] = candidates among tests 1..t
  }

  // Processes the next p-value; returns true iff the hypothesis is rejected.
  bool step(double p) {
    if (!(p >= 0.0 && p <= 1.0)) throw std::invalid_argument("saffron: p-value out of [0, 1]");
    const int t = t_ + 1;
    const int cand_before = cand_prefix_[static_cast<std::size_t>(t - 1)];

    double level = opt_.w0 * gamma_at(t - cand_before);
    for (std::size_t j = 0; j < tau_.size(); ++j) {
      const int tau = tau_[j];
      const int cand_between = cand_before - cand_prefix_[static_cast<std::size_t>(tau)];
      const double budget = j == 0 ? opt_.alpha - opt_.w0 : opt_.alpha;
      level += budget * gamma_at(t - tau - cand_between);
    }
    last_alpha_ = (1.0 - opt_.lambda) * level;

    const bool candidate = p < opt_.lambda;
    cand_prefix_.push_back(cand_before + (candidate ? 1 : 0));
    const bool reject = p <= last_alpha_;
    if (reject) tau_.push_back(t);
    t_ = t;
    return reject;
  }

  int tests() const { return t_; }
  int rejections() const { return static_cast<int>(tau_.size()); }
  const std::vector<int>& rejection_times() const { return tau_; }
  double last_alpha() const { return last_alpha_; }
  const SaffronOptions& options() const { return opt_; }

 private:
  double gamma_at(int idx) const {
    if (idx < 1) throw std::logic_error("saffron: spending index must be >= 1");
    if (idx >= static_cast<int>(gamma_.size())) return 0.0;
    return gamma_[static_cast<std::size_t>(idx)];
  }

  SaffronOptions opt_;
  std::vector<double> gamma_;
  std::vector<int> cand_prefix_;
  std::vector<int> tau_;
  int t_ = 0;
  double last_alpha_ = 0.0;
};

}  // namespace fedchi2
