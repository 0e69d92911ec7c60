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

#include <bit>
#include <cmath>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <vector>

namespace fedchi2 {

// Masked aggregation works in the ring of integers mod 2^64; native unsigned
// wrap-around gives the ring arithmetic for free. Reals enter through a
// fixed-point map (value * scale rounded to nearest, two's complement for
// negatives) and leave by the signed inverse.

inline std::uint64_t fixed_point_encode(double value, std::uint64_t scale,
                                        std::uint64_t n_summands) {
  double scaled = value * static_cast<double>(scale);
  if (!(std::fabs(scaled) < 9.223372036854775807e18 / static_cast<double>(n_summands)))
    throw std::overflow_error("fixed_point_encode: value out of range for summand budget");
  return std::bit_cast<std::uint64_t>(std::llround(scaled));
}

inline double fixed_point_decode(std::uint64_t residue, std::uint64_t scale) {
  return static_cast<double>(std::bit_cast<std::int64_t>(residue)) /
         static_cast<double>(scale);
}

inline std::vector<std::uint64_t> fixed_point_encode_vector(std::span<const double> values,
                                                            std::uint64_t scale,
                                                            std::uint64_t n_summands) {
  std::vector<std::uint64_t> out(values.size());
  for (std::size_t j = 0; j < values.size(); ++j)
    out[j] = fixed_point_encode(values[j], scale, n_summands);
  return out;
}

inline std::vector<double> fixed_point_decode_vector(std::span<const std::uint64_t> residues,
                                                     std::uint64_t scale) {
  std::vector<double> out(residues.size());
  for (std::size_t j = 0; j < residues.size(); ++j)
    out[j] = fixed_point_decode(residues[j], scale);
  return out;
}

inline void field_add_in_place(std::span<std::uint64_t> acc, std::span<const std::uint64_t> x) {
  if (acc.size() != x.size()) throw std::invalid_argument("field_add_in_place: size mismatch");
  for (std::size_t j = 0; j < acc.size(); ++j) acc[j] += x[j];
}

inline void field_sub_in_place(std::span<std::uint64_t> acc, std::span<const std::uint64_t> x) {
  if (acc.size() != x.size()) throw std::invalid_argument("field_sub_in_place: size mismatch");
  for (std::size_t j = 0; j < acc.size(); ++j) acc[j] -= x[j];
}

}  // namespace fedchi2
