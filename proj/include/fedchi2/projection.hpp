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

#include <Eigen/Dense>
#include <cmath>
#include <cstdint>
#include <random>
#include <span>
#include <stdexcept>
#include <vector>

namespace fedchi2 {

// Smallest sketch width the geometric-mean decoder accepts.
inline constexpr int kMinSketchWidth = 8;

// Dense l-by-m matrix with i.i.d. N(0, 2) entries. The variance-2 convention
// matches the characteristic function exp(-t^2) of the symmetric 2-stable law
// the decoder constants assume; with it the decoder is exactly unbiased for
// the squared norm of the projected vector.
struct ProjectionMatrix {
  Eigen::MatrixXd rows;  // shape l x m
  std::uint64_t seed = 0;

  int ell() const { return static_cast<int>(rows.rows()); }
  int m() const { return static_cast<int>(rows.cols()); }
};

inline ProjectionMatrix sample_projection(int ell, int m, std::uint64_t seed) {
  if (ell < kMinSketchWidth) throw std::invalid_argument("sample_projection: sketch width below minimum");
  if (m < 1) throw std::invalid_argument("sample_projection: m must be positive");
  ProjectionMatrix p;
  p.seed = seed;
  p.rows.resize(ell, m);
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss(0.0, std::sqrt(2.0));
  for (int k = 0; k < ell; ++k)
    for (int j = 0; j < m; ++j) p.rows(k, j) = gauss(rng);
  return p;
}

using SketchVector = std::vector<double>;

// Linear sketch e = P * u. Linearity is what lets per-client sketches be
// summed by the masking layer before decoding.
inline SketchVector encode(const ProjectionMatrix& p, std::span<const double> u) {
  if (static_cast<int>(u.size()) != p.m())
    throw std::invalid_argument("encode: input length does not match projection width");
  Eigen::Map<const Eigen::VectorXd> uv(u.data(), static_cast<Eigen::Index>(u.size()));
  Eigen::VectorXd e = p.rows * uv;
  return SketchVector(e.data(), e.data() + e.size());
}

// log of the per-coordinate normalizer (2/pi)*Gamma(2/l)*Gamma(1-1/l)*sin(pi/l).
inline double gm_log_normalizer(int ell) {
  double inv = 1.0 / ell;
  return std::log(2.0 / M_PI) + std::lgamma(2.0 * inv) + std::lgamma(1.0 - inv) +
         std::log(std::sin(M_PI * inv));
}

// Geometric-mean estimate of the squared norm behind a sketch:
//   d = prod_k |e_k|^(2/l) / ((2/pi)*Gamma(2/l)*Gamma(1-1/l)*sin(pi/l))^l,
// evaluated in log space. A sketch with any exactly-zero coordinate (in
// particular the all-zero sketch of a zero vector) decodes to 0.
inline double decode_gm(std::span<const double> sketch) {
  int ell = static_cast<int>(sketch.size());
  if (ell < kMinSketchWidth) throw std::invalid_argument("decode_gm: sketch width below minimum");
  double log_sum = 0.0;
  for (double e : sketch) {
    double a = std::fabs(e);
    if (a == 0.0) return 0.0;
    log_sum += std::log(a);
  }
  double log_d = (2.0 / ell) * log_sum - ell * gm_log_normalizer(ell);
  return std::exp(log_d);
}

}  // namespace fedchi2
