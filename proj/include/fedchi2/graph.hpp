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
#include <cstdint>
#include <numeric>
#include <queue>
#include <random>
#include <stdexcept>
#include <vector>

namespace fedchi2 {

// Undirected communication graph over clients 0..n-1.
struct CommGraph {
  int n = 0;
  int k = 0;  // degree parameter the construction aimed for
  std::vector<std::vector<int>> neighbors;  // sorted adjacency lists

  bool has_edge(int i, int j) const {
    const auto& adj = neighbors[static_cast<std::size_t>(i)];
    return std::binary_search(adj.begin(), adj.end(), j);
  }
  int degree(int i) const { return static_cast<int>(neighbors[static_cast<std::size_t>(i)].size()); }
};

// Circulant k-connected graph: vertices i and j are adjacent iff the cyclic
// offset j-i (mod n) is at most (k+1)/2 or at least n - k/2 (evaluated in
// either orientation).
inline CommGraph harary(int n, int k) {
  if (n < 2) throw std::invalid_argument("harary: need at least 2 vertices");
  if (k < 1 || k > n - 1) throw std::invalid_argument("harary: k must be in [1, n-1]");
  CommGraph g;
  g.n = n;
  g.k = k;
  g.neighbors.assign(static_cast<std::size_t>(n), {});
  auto oriented = [&](int i, int j) {
    int d = j - i;
    d %= n;
    if (d < 0) d += n;
    // d <= (k+1)/2  or  d >= n - k/2, compared without integer truncation.
    return 2 * d <= k + 1 || 2 * d >= 2 * n - k;
  };
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      if (oriented(i, j) || oriented(j, i)) {
        g.neighbors[static_cast<std::size_t>(i)].push_back(j);
        g.neighbors[static_cast<std::size_t>(j)].push_back(i);
      }
    }
  }
  for (auto& adj : g.neighbors) std::sort(adj.begin(), adj.end());
  return g;
}

// Logarithmic degree target: min(n-1, 2*ceil(log2(n+1))).
inline int default_degree(int n) {
  if (n < 1) throw std::invalid_argument("default_degree: n must be positive");
  int c = 0;
  // smallest c with 2^c >= n+1
  while ((1ll << c) < n + 1) ++c;
  return std::min(n - 1, 2 * c);
}

// Server-side graph setup: a Harary graph of logarithmic degree with vertex
// labels scrambled by a seeded permutation, so neighborhoods are not tied to
// client-id order.
inline CommGraph init_secure_agg(int n, std::uint64_t seed) {
  if (n < 1) throw std::invalid_argument("init_secure_agg: n must be positive");
  if (n == 1) {
    CommGraph g;
    g.n = 1;
    g.k = 0;
    g.neighbors.assign(1, {});
    return g;
  }
  CommGraph base = harary(n, default_degree(n));
  std::vector<int> perm(static_cast<std::size_t>(n));
  std::iota(perm.begin(), perm.end(), 0);
  std::mt19937_64 rng(seed);
  std::shuffle(perm.begin(), perm.end(), rng);
  CommGraph g;
  g.n = n;
  g.k = base.k;
  g.neighbors.assign(static_cast<std::size_t>(n), {});
  for (int i = 0; i < n; ++i)
    for (int j : base.neighbors[static_cast<std::size_t>(i)])
      if (i < j) {
        int a = perm[static_cast<std::size_t>(i)], b = perm[static_cast<std::size_t>(j)];
        g.neighbors[static_cast<std::size_t>(a)].push_back(b);
        g.neighbors[static_cast<std::size_t>(b)].push_back(a);
      }
  for (auto& adj : g.neighbors) std::sort(adj.begin(), adj.end());
  return g;
}

inline bool is_connected(const CommGraph& g) {
  if (g.n == 0) return false;
  std::vector<bool> seen(static_cast<std::size_t>(g.n), false);
  std::queue<int> q;
  q.push(0);
  seen[0] = true;
  int visited = 1;
  while (!q.empty()) {
    int v = q.front();
    q.pop();
    for (int w : g.neighbors[static_cast<std::size_t>(v)])
      if (!seen[static_cast<std::size_t>(w)]) {
        seen[static_cast<std::size_t>(w)] = true;
        ++visited;
        q.push(w);
      }
  }
  return visited == g.n;
}

}  // namespace fedchi2
