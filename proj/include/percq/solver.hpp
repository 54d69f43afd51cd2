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

// Exact minimum contagious sets for small n, searched up to the symmetry
// group of Q_{n,k} (XOR translations and coordinate permutations).

#pragma once

#include <algorithm>
#include <chrono>
#include <cstdint>
#include <numeric>
#include <optional>
#include <set>
#include <span>
#include <tuple>
#include <vector>

#include "percq/cube.hpp"
#include "percq/engine.hpp"
#include "percq/oracle.hpp"
#include "percq/points.hpp"

namespace percq {

inline constexpr std::size_t kExactCanonicalLimit = 6;
inline constexpr int kSolverMaxDimension = 10;

/// Canonical representative of a vertex set's orbit, as sorted labels.
/// Always a member of the orbit, so distinct keys never merge orbits; for
/// sets of at most kExactCanonicalLimit members the key is also a complete
/// orbit invariant.
struct CanonicalKey {
  int n = 0;
  bool exact = true;
  std::vector<std::uint64_t> labels;

  friend bool operator==(const CanonicalKey& a, const CanonicalKey& b) {
    return a.n == b.n && a.labels == b.labels;
  }
  friend auto operator<=>(const CanonicalKey& a, const CanonicalKey& b) {
    if (auto c = a.n <=> b.n; c != 0) return c;
    return a.labels <=> b.labels;
  }
};

namespace detail {

// Rows from descending-sorted column codes: row j (j >= 1) has coordinate i
// iff bit j-1 of codes[i]. Row 0 is the zero vector.
inline std::vector<std::uint64_t> rows_from_columns(std::span<const std::uint64_t> codes,
                                                    std::size_t rows) {
  std::vector<std::uint64_t> out(rows, 0);
  for (std::size_t i = 0; i < codes.size(); ++i) {
    for (std::size_t j = 1; j < rows; ++j) {
      if ((codes[i] >> (j - 1)) & 1u) out[j] |= std::uint64_t{1} << i;
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

inline std::vector<std::uint64_t> exact_canonical(const std::vector<std::uint64_t>& set, int n) {
  const std::size_t m = set.size();
  std::vector<std::uint64_t> best;
  std::vector<std::uint64_t> codes(static_cast<std::size_t>(n));
  std::vector<std::uint64_t> rest;
  std::vector<std::size_t> order(m - 1);
  for (std::size_t t = 0; t < m; ++t) {
    rest.clear();
    for (std::size_t j = 0; j < m; ++j) {
      if (j != t) rest.push_back(set[j] ^ set[t]);
    }
    std::iota(order.begin(), order.end(), std::size_t{0});
    do {
      for (int i = 0; i < n; ++i) {
        std::uint64_t code = 0;
        for (std::size_t j = 0; j < order.size(); ++j) code |= ((rest[order[j]] >> i) & 1u) << j;
        codes[static_cast<std::size_t>(i)] = code;
      }
      std::sort(codes.begin(), codes.end(), std::greater<>());
      if (best.empty() || codes < best) best = codes;
    } while (std::next_permutation(order.begin(), order.end()));
  }
  return rows_from_columns(best, m);
}

// Sorted-column-signature heuristic: translate by each member, order the
// coordinates by descending column weight (ties by index) and keep the
// lexicographically smallest relabeled set.
inline std::vector<std::uint64_t> heuristic_canonical(const std::vector<std::uint64_t>& set, int n) {
  std::vector<std::uint64_t> best;
  std::vector<int> weight(static_cast<std::size_t>(n));
  std::vector<int> perm(static_cast<std::size_t>(n));
  std::vector<std::uint64_t> moved(set.size());
  for (std::uint64_t t : set) {
    std::fill(weight.begin(), weight.end(), 0);
    for (std::uint64_t x : set) {
      for (int i = 0; i < n; ++i) weight[static_cast<std::size_t>(i)] += static_cast<int>(((x ^ t) >> i) & 1u);
    }
    std::iota(perm.begin(), perm.end(), 0);
    std::stable_sort(perm.begin(), perm.end(), [&](int a, int b) {
      return weight[static_cast<std::size_t>(a)] > weight[static_cast<std::size_t>(b)];
    });
    for (std::size_t j = 0; j < set.size(); ++j) {
      std::uint64_t y = 0;
      for (int i = 0; i < n; ++i) y |= (((set[j] ^ t) >> perm[static_cast<std::size_t>(i)]) & 1u) << i;
      moved[j] = y;
    }
    std::sort(moved.begin(), moved.end());
    if (best.empty() || moved < best) best = moved;
  }
  return best;
}

}  // namespace detail

inline CanonicalKey canonicalize(std::span<const Vertex> a, int n) {
  if (n < 1 || n > 64) throw ParameterError("canonicalize supports 1 <= n <= 64");
  std::vector<std::uint64_t> set;
  set.reserve(a.size());
  for (Vertex v : a) set.push_back(v.label);
  std::sort(set.begin(), set.end());
  set.erase(std::unique(set.begin(), set.end()), set.end());
  CanonicalKey key{n, true, {}};
  if (set.empty()) return key;
  if (set.size() <= kExactCanonicalLimit) {
    key.labels = detail::exact_canonical(set, n);
  } else {
    key.exact = false;
    key.labels = detail::heuristic_canonical(set, n);
  }
  return key;
}

struct MinSetResult {
  std::optional<int> m;           // minimum contagious size, if found
  std::vector<Vertex> witness;    // percolating set of size *m
  int exhausted_to = 0;           // largest size searched completely without a witness
  std::uint64_t nodes_searched = 0;
  double seconds = 0;
};

struct SolverOptions {
  std::uint64_t max_nodes = 200'000'000;
};

namespace detail {

inline std::uint64_t total_weight(std::span<const std::uint64_t> labels) {
  std::uint64_t w = 0;
  for (auto x : labels) w += static_cast<std::uint64_t>(std::popcount(x));
  return w;
}

// Canonical sets of size s+1 from canonical sets of size s.
inline std::vector<std::vector<std::uint64_t>> extend_level(
    const std::vector<std::vector<std::uint64_t>>& level, int n) {
  std::set<std::vector<std::uint64_t>> seen;
  const std::uint64_t total = std::uint64_t{1} << n;
  std::vector<Vertex> scratch;
  for (const auto& s : level) {
    for (std::uint64_t v = 0; v < total; ++v) {
      if (std::binary_search(s.begin(), s.end(), v)) continue;
      scratch.clear();
      for (auto x : s) scratch.push_back(Vertex{x});
      scratch.push_back(Vertex{v});
      seen.insert(canonicalize(scratch, n).labels);
    }
  }
  std::vector<std::vector<std::uint64_t>> out(seen.begin(), seen.end());
  std::stable_sort(out.begin(), out.end(), [](const auto& a, const auto& b) {
    return total_weight(a) < total_weight(b);
  });
  return out;
}

}  // namespace detail

/// Smallest contagious set size in [r, m_max], searched exhaustively over
/// orbit representatives. Size-m candidates are canonical (m-1)-sets that
/// contain 0^n, each extended by one more vertex, tried in ascending total
/// Hamming weight. The first percolating candidate in that order is the
/// reported witness.
inline MinSetResult min_contagious_exact(const GraphParams& params, int m_max,
                                         const SolverOptions& options = {}) {
  params.require_dense();
  if (params.n > kSolverMaxDimension) throw ParameterError("exact solver supports n <= 10");
  if (m_max < params.r) throw ParameterError("m_max must be at least r");
  const auto start = std::chrono::steady_clock::now();
  const int n = params.n;
  const std::uint64_t total = std::uint64_t{1} << n;

  MinSetResult res;
  res.exhausted_to = params.r - 1;
  auto finish = [&] {
    res.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return res;
  };

  // Sizes below r never grow; the base level is the single orbit {0^n}.
  std::vector<std::vector<std::uint64_t>> level{{0}};
  int level_size = 1;
  ClosureWorkspace ws;
  VertexSet candidate(n);
  std::vector<std::uint64_t> members;

  const int m_stop = static_cast<int>(std::min<std::uint64_t>(static_cast<std::uint64_t>(m_max), total));
  for (int m = params.r; m <= m_stop; ++m) {
    while (level_size < m - 1) {
      level = detail::extend_level(level, n);
      ++level_size;
    }

    struct Candidate {
      std::uint64_t weight;
      std::uint32_t set_index;
      std::uint32_t extra;
    };
    std::vector<Candidate> order;
    if (m == 1) {
      order.push_back({0, 0, 0});
    } else {
      for (std::uint32_t i = 0; i < level.size(); ++i) {
        const std::uint64_t base = detail::total_weight(level[i]);
        for (std::uint64_t v = 0; v < total; ++v) {
          if (std::binary_search(level[i].begin(), level[i].end(), v)) continue;
          order.push_back({base + static_cast<std::uint64_t>(std::popcount(v)), i, static_cast<std::uint32_t>(v)});
        }
      }
      std::stable_sort(order.begin(), order.end(),
                       [](const Candidate& a, const Candidate& b) { return a.weight < b.weight; });
    }

    for (const Candidate& c : order) {
      if (res.nodes_searched >= options.max_nodes) return finish();
      ++res.nodes_searched;
      members.assign(level[c.set_index].begin(), level[c.set_index].end());
      if (m > 1) members.push_back(c.extra);
      candidate.clear();
      for (auto x : members) candidate.set_unchecked(x);

      // Exact pruning from the pair / triple characterizations.
      if (params.r == 2 && !pair_condition(candidate, params.k)) continue;
      if (params.r == 3 && params.k >= 2 && !triple_condition(candidate, params.k)) continue;

      if (percolates(candidate, params, ws)) {
        res.m = m;
        for (auto x : members) res.witness.push_back(Vertex{x});
        std::sort(res.witness.begin(), res.witness.end());
        return finish();
      }
    }
    res.exhausted_to = m;
  }
  return finish();
}

}  // namespace percq
