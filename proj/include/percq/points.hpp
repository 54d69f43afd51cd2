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

// Sparse point lists: vertices of {0,1}^n for n up to 128, used where a
// dense 2^n membership vector cannot be materialized.

#pragma once

#include <algorithm>
#include <bit>
#include <compare>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "percq/cube.hpp"

namespace percq {

inline constexpr int kMaxSparseDimension = 128;

/// 128-bit vertex label; coordinate i lives in lo (i < 64) or hi (i >= 64).
struct WideLabel {
  std::uint64_t lo = 0;
  std::uint64_t hi = 0;

  friend constexpr auto operator<=>(const WideLabel& a, const WideLabel& b) {
    if (auto c = a.hi <=> b.hi; c != 0) return c;
    return a.lo <=> b.lo;
  }
  friend constexpr bool operator==(const WideLabel&, const WideLabel&) = default;

  static constexpr WideLabel from(Vertex v) { return WideLabel{v.label, 0}; }
};

constexpr int hamming_distance(const WideLabel& a, const WideLabel& b) {
  return std::popcount(a.lo ^ b.lo) + std::popcount(a.hi ^ b.hi);
}

/// Bits [start, start + len) of x as an integer, len <= 64.
constexpr std::uint64_t extract_bits(const WideLabel& x, int start, int len) {
  if (len <= 0) return 0;
  unsigned __int128 whole = (static_cast<unsigned __int128>(x.hi) << 64) | x.lo;
  whole >>= start;
  const std::uint64_t mask = len >= 64 ? ~std::uint64_t{0} : ((std::uint64_t{1} << len) - 1);
  return static_cast<std::uint64_t>(whole) & mask;
}

/// Keeps only the low n bits.
constexpr WideLabel truncate_label(WideLabel x, int n) {
  if (n < 64) return WideLabel{n == 0 ? 0 : (x.lo & ((std::uint64_t{1} << n) - 1)), 0};
  if (n < 128) x.hi &= (std::uint64_t{1} << (n - 64)) - 1;
  return x;
}

struct SparsePointList {
  int n = 0;
  std::vector<WideLabel> points;

  /// Sorts and removes duplicates.
  void normalize() {
    std::sort(points.begin(), points.end());
    points.erase(std::unique(points.begin(), points.end()), points.end());
  }

  std::size_t size() const { return points.size(); }
};

inline SparsePointList to_points(const VertexSet& set) {
  SparsePointList out{set.dimension(), {}};
  out.points.reserve(set.size());
  set.for_each([&](Vertex v) { out.points.push_back(WideLabel::from(v)); });
  return out;
}

inline SparsePointList to_points(int n, std::span<const Vertex> vertices) {
  if (n < 1 || n > 64) throw ParameterError("vertex collections support 1 <= n <= 64");
  SparsePointList out{n, {}};
  out.points.reserve(vertices.size());
  for (Vertex v : vertices) out.points.push_back(WideLabel::from(v));
  out.normalize();
  return out;
}

inline std::string format_point(const WideLabel& x, int n) {
  std::string out(static_cast<std::size_t>(n), '0');
  for (int i = 0; i < n; ++i) {
    if (extract_bits(x, i, 1)) out[static_cast<std::size_t>(i)] = '1';
  }
  return out;
}

}  // namespace percq
