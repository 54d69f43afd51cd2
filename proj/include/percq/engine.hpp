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

// Exact r-neighbor bootstrap percolation closure on Q_{n,k}.

#pragma once

#include <cstdint>
#include <limits>
#include <vector>

#include "percq/cube.hpp"

namespace percq {

struct ProcessResult {
  VertexSet final_set;
  bool percolated = false;
  std::uint64_t generations = 0;
  std::vector<std::uint64_t> growth;  // newly infected per generation, all > 0
};

/// Scratch buffers reused across closure runs on one thread.
class ClosureWorkspace {
 public:
  template <typename Counter>
  std::vector<Counter>& counters();

  std::vector<std::uint32_t> frontier;
  std::vector<std::uint32_t> next;

 private:
  std::vector<std::uint16_t> narrow_;
  std::vector<std::uint32_t> wide_;
};

template <>
inline std::vector<std::uint16_t>& ClosureWorkspace::counters<std::uint16_t>() {
  return narrow_;
}
template <>
inline std::vector<std::uint32_t>& ClosureWorkspace::counters<std::uint32_t>() {
  return wide_;
}

namespace detail {

inline void check_closure_input(const VertexSet& a0, const GraphParams& params) {
  params.require_dense();
  if (a0.dimension() != params.n) throw ParameterError("initial set dimension differs from n");
}

// Frontier propagation: each newly infected vertex pushes one increment to
// every healthy neighbor. Counters saturate at r, so a vertex is scheduled
// exactly once, on the increment that reaches r.
template <typename Counter>
ProcessResult frontier_closure(const VertexSet& a0, const GraphParams& params,
                               ClosureWorkspace& ws) {
  ProcessResult res{a0, false, 0, {}};
  VertexSet& infected = res.final_set;
  const auto table = neighbor_masks(params.n, params.k);
  const auto masks = table->masks();
  const auto threshold = static_cast<Counter>(params.r);

  auto& counters = ws.counters<Counter>();
  counters.assign(static_cast<std::size_t>(a0.universe_size()), 0);
  auto& frontier = ws.frontier;
  auto& next = ws.next;
  frontier.clear();
  a0.for_each([&](Vertex v) { frontier.push_back(static_cast<std::uint32_t>(v.label)); });

  if (static_cast<std::uint64_t>(params.r) <= masks.size()) {
    while (!frontier.empty() && !infected.is_full()) {
      next.clear();
      for (const std::uint32_t u : frontier) {
        for (const std::uint32_t m : masks) {
          const std::uint32_t w = u ^ m;
          if (infected.test(w)) continue;
          Counter& c = counters[w];
          if (c < threshold && ++c == threshold) next.push_back(w);
        }
      }
      if (next.empty()) break;
      for (const std::uint32_t w : next) infected.set_unchecked(w);
      res.growth.push_back(next.size());
      ++res.generations;
      std::swap(frontier, next);
    }
  }
  res.percolated = infected.is_full();
  return res;
}

}  // namespace detail

/// Least fixpoint containing a0 under the synchronous r-neighbor rule.
inline ProcessResult closure(const VertexSet& a0, const GraphParams& params, ClosureWorkspace& ws) {
  detail::check_closure_input(a0, params);
  if (params.r <= std::numeric_limits<std::uint16_t>::max()) {
    return detail::frontier_closure<std::uint16_t>(a0, params, ws);
  }
  return detail::frontier_closure<std::uint32_t>(a0, params, ws);
}

inline ProcessResult closure(const VertexSet& a0, const GraphParams& params) {
  ClosureWorkspace ws;
  return closure(a0, params, ws);
}

/// Reference engine: recounts |N_v cap A_i| from scratch for every healthy v
/// each round. Quadratic-ish; kept as an independent oracle for tests.
inline ProcessResult closure_naive(const VertexSet& a0, const GraphParams& params) {
  detail::check_closure_input(a0, params);
  ProcessResult res{a0, false, 0, {}};
  const auto table = neighbor_masks(params.n, params.k);
  const auto masks = table->masks();
  const std::uint64_t total = a0.universe_size();
  while (!res.final_set.is_full()) {
    std::vector<std::uint64_t> joined;
    for (std::uint64_t v = 0; v < total; ++v) {
      if (res.final_set.test(v)) continue;
      int count = 0;
      for (const std::uint32_t m : masks) count += res.final_set.test(v ^ m) ? 1 : 0;
      if (count >= params.r) joined.push_back(v);
    }
    if (joined.empty()) break;
    for (auto v : joined) res.final_set.set_unchecked(v);
    res.growth.push_back(joined.size());
    ++res.generations;
  }
  res.percolated = res.final_set.is_full();
  return res;
}

inline bool percolates(const VertexSet& a0, const GraphParams& params, ClosureWorkspace& ws) {
  return closure(a0, params, ws).percolated;
}

inline bool percolates(const VertexSet& a0, const GraphParams& params) {
  return closure(a0, params).percolated;
}

/// True iff every v in `healthy` has fewer than r neighbors outside it, i.e.
/// the complement of `healthy` is closed under the process.
inline bool check_stall_certificate(const VertexSet& healthy, const GraphParams& params) {
  params.require_dense();
  if (healthy.dimension() != params.n) throw ParameterError("certificate dimension differs from n");
  const auto table = neighbor_masks(params.n, params.k);
  const auto masks = table->masks();
  bool ok = true;
  healthy.for_each([&](Vertex v) {
    if (!ok) return;
    int outside = 0;
    for (const std::uint32_t m : masks) {
      if (!healthy.test(v.label ^ m) && ++outside >= params.r) {
        ok = false;
        return;
      }
    }
  });
  return ok;
}

}  // namespace percq
