// Copyright 2026 The percq Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Closed-form percolation predicates on Q_{n,k}.
//
//   r = 2: percolates  <=>  some pair of initial vertices is within 2k.
//   r = 3 (k >= 2): percolates  <=>  some triple has all sides within 2k.
//
// For r >= 4 no such pairwise criterion exists; r4_counterexample builds an
// r-set with all sides within 2k that does not grow at all.

#pragma once

#include <algorithm>
#include <array>
#include <cstdint>
#include <functional>
#include <span>
#include <utility>
#include <vector>

#include "percq/cube.hpp"
#include "percq/points.hpp"

namespace percq {

/// Below this many points the close-pair search is a plain quadratic scan.
inline constexpr std::size_t kBucketingThreshold = 512;

struct TriangleShape {
  int d12 = 0;
  int d13 = 0;
  int d23 = 0;

  bool valid() const {
    return d12 >= 1 && d13 >= 1 && d23 >= 1 && d12 <= d13 + d23 && d13 <= d12 + d23 &&
           d23 <= d12 + d13 && (d12 + d13 + d23) % 2 == 0;
  }

  /// Sides sorted ascending; identifies the unordered shape.
  TriangleShape sorted() const {
    std::array<int, 3> s{d12, d13, d23};
    std::sort(s.begin(), s.end());
    return {s[0], s[1], s[2]};
  }

  int max_side() const { return std::max({d12, d13, d23}); }

  // Decomposition x1 = 0, x2 = 1^{a1+a2}, x3 = 0^{a1} 1^{a2+a3}.
  int a1() const { return (d12 + d13 - d23) / 2; }
  int a2() const { return (d12 + d23 - d13) / 2; }
  int a3() const { return (d13 + d23 - d12) / 2; }

  friend auto operator<=>(const TriangleShape&, const TriangleShape&) = default;
};

template <typename Label>
TriangleShape triangle_shape(const Label& x1, const Label& x2, const Label& x3) {
  return {hamming_distance(x1, x2), hamming_distance(x1, x3), hamming_distance(x2, x3)};
}

/// All unordered realizable shapes with every side in [1, max_side].
inline std::vector<TriangleShape> triangle_shapes(int max_side) {
  std::vector<TriangleShape> out;
  for (int a = 1; a <= max_side; ++a) {
    for (int b = a; b <= max_side; ++b) {
      for (int c = b; c <= max_side; ++c) {
        TriangleShape t{a, b, c};
        if (t.valid()) out.push_back(t);
      }
    }
  }
  return out;
}

namespace detail {

// Calls visit(i, j) with i < j for every pair of points within `radius`.
// visit returns true to stop early; the function then returns true.
//
// Large inputs use pigeonhole multi-index bucketing: the n coordinates are
// split into radius + 1 contiguous blocks, and two points within distance
// `radius` must agree on at least one whole block. A pair is reported only
// from the first block on which it agrees.
template <typename Visit>
bool for_each_close_pair(std::span<const WideLabel> pts, int n, int radius, Visit&& visit) {
  const std::size_t m = pts.size();
  const int blocks = radius + 1;
  if (m < kBucketingThreshold || blocks > n) {
    for (std::size_t i = 0; i < m; ++i) {
      for (std::size_t j = i + 1; j < m; ++j) {
        if (hamming_distance(pts[i], pts[j]) <= radius && visit(i, j)) return true;
      }
    }
    return false;
  }

  std::vector<int> start(static_cast<std::size_t>(blocks) + 1);
  for (int b = 0; b <= blocks; ++b) start[static_cast<std::size_t>(b)] = b * n / blocks;
  auto block_of = [&](const WideLabel& x, int b) {
    const int s = start[static_cast<std::size_t>(b)];
    return extract_bits(x, s, start[static_cast<std::size_t>(b) + 1] - s);
  };

  std::vector<std::pair<std::uint64_t, std::uint32_t>> keyed(m);
  for (int b = 0; b < blocks; ++b) {
    for (std::size_t i = 0; i < m; ++i) keyed[i] = {block_of(pts[i], b), static_cast<std::uint32_t>(i)};
    std::sort(keyed.begin(), keyed.end());
    for (std::size_t lo = 0; lo < m;) {
      std::size_t hi = lo + 1;
      while (hi < m && keyed[hi].first == keyed[lo].first) ++hi;
      for (std::size_t x = lo; x < hi; ++x) {
        for (std::size_t y = x + 1; y < hi; ++y) {
          std::size_t i = keyed[x].second;
          std::size_t j = keyed[y].second;
          if (i > j) std::swap(i, j);
          if (hamming_distance(pts[i], pts[j]) > radius) continue;
          bool earlier = false;
          for (int e = 0; e < b && !earlier; ++e) earlier = block_of(pts[i], e) == block_of(pts[j], e);
          if (!earlier && visit(i, j)) return true;
        }
      }
      lo = hi;
    }
  }
  return false;
}

inline SparsePointList deduplicated(const SparsePointList& in) {
  if (in.n < 1 || in.n > kMaxSparseDimension) throw ParameterError("point list dimension out of range");
  SparsePointList out = in;
  for (auto& p : out.points) p = truncate_label(p, out.n);
  out.normalize();
  return out;
}

}  // namespace detail

/// Every pair (i, j), i < j, of the deduplicated point list within `radius`.
inline std::vector<std::pair<std::uint32_t, std::uint32_t>> close_pairs(const SparsePointList& pts,
                                                                        int radius) {
  std::vector<std::pair<std::uint32_t, std::uint32_t>> out;
  detail::for_each_close_pair(pts.points, pts.n, radius, [&](std::size_t i, std::size_t j) {
    out.emplace_back(static_cast<std::uint32_t>(i), static_cast<std::uint32_t>(j));
    return false;
  });
  std::sort(out.begin(), out.end());
  return out;
}

/// True iff two distinct points lie within distance 2k.
inline bool pair_condition(const SparsePointList& a, int k) {
  if (k < 1) throw ParameterError("pair_condition requires k >= 1");
  const SparsePointList pts = detail::deduplicated(a);
  return detail::for_each_close_pair(pts.points, pts.n, 2 * k,
                                     [](std::size_t, std::size_t) { return true; });
}

inline bool pair_condition(const VertexSet& a, int k) { return pair_condition(to_points(a), k); }

/// True iff three distinct points have all pairwise distances within 2k.
/// Lists close pairs first, then looks for a common close neighbor.
inline bool triple_condition(const SparsePointList& a, int k) {
  if (k < 2) throw ParameterError("triple_condition is characterized only for k >= 2");
  const SparsePointList pts = detail::deduplicated(a);
  if (pts.size() < 3) return false;
  std::vector<std::vector<std::uint32_t>> adj(pts.size());
  for (auto [i, j] : close_pairs(pts, 2 * k)) {
    adj[i].push_back(j);  // only larger neighbors; sorted by construction
  }
  for (std::size_t i = 0; i < adj.size(); ++i) {
    const auto& ai = adj[i];
    for (std::size_t x = 0; x < ai.size(); ++x) {
      const auto& aj = adj[ai[x]];
      // Common larger neighbor of i and ai[x].
      auto it1 = ai.begin() + static_cast<std::ptrdiff_t>(x) + 1;
      auto it2 = aj.begin();
      while (it1 != ai.end() && it2 != aj.end()) {
        if (*it1 == *it2) return true;
        if (*it1 < *it2) ++it1;
        else ++it2;
      }
    }
  }
  return false;
}

inline bool triple_condition(const VertexSet& a, int k) { return triple_condition(to_points(a), k); }

/// {x_1, ..., x_{r-1}, 0^n} with x_i = 0^{(i-1)k} 1^k 0^{n-ik}: all sides
/// within 2k, yet no vertex is adjacent to all r of them.
inline VertexSet r4_counterexample(const GraphParams& params) {
  params.require_dense();
  const auto [n, k, r] = params;
  if (r < 4) throw ParameterError("the counterexample needs r >= 4");
  if (static_cast<long>(r) * k > n) throw ParameterError("the counterexample needs r*k <= n");
  VertexSet out(n);
  out.insert(Vertex{0});
  const std::uint64_t block = (std::uint64_t{1} << k) - 1;
  for (int i = 1; i <= r - 1; ++i) out.insert(Vertex{block << ((i - 1) * k)});
  return out;
}

/// True iff no vertex lies within distance 1..k of every element of `a`.
inline bool common_neighborhood_empty(std::span<const Vertex> a, const GraphParams& params) {
  params.require_dense();
  if (a.empty()) return false;
  const auto table = neighbor_masks(params.n, params.k);
  for (const std::uint32_t m : table->masks()) {
    const Vertex y = a.front() ^ Vertex{m};
    bool common = true;
    for (Vertex x : a.subspan(1)) {
      const int d = hamming_distance(x, y);
      if (d < 1 || d > params.k) {
        common = false;
        break;
      }
    }
    if (common) return false;
  }
  return true;
}

inline bool common_neighborhood_empty(const VertexSet& a, const GraphParams& params) {
  const auto members = a.members();
  return common_neighborhood_empty(members, params);
}

}  // namespace percq
