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

// Explicit percolating sets for Q_{n,k} and lower-bound blocker certificates.
// Coordinate 0 is the first written coordinate, so "1^j 0^{n-j}" is the
// label with bits 0..j-1 set.

#pragma once

#include <cmath>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "percq/cube.hpp"
#include "percq/engine.hpp"

namespace percq {

class NoBoundApplicable : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

enum class LayerMode { subcube, fullcube };

inline std::string_view to_string(LayerMode mode) {
  return mode == LayerMode::subcube ? "subcube" : "fullcube";
}

inline LayerMode parse_layer_mode(std::string_view text) {
  if (text == "subcube") return LayerMode::subcube;
  if (text == "fullcube") return LayerMode::fullcube;
  throw ParameterError("unknown layer mode '" + std::string(text) + "'");
}

/// floor(sqrt(x)) exactly.
inline std::uint64_t isqrt(std::uint64_t x) {
  auto y = static_cast<std::uint64_t>(std::sqrt(static_cast<double>(x)));
  while (y > 0 && y * y > x) --y;
  while ((y + 1) * (y + 1) <= x) ++y;
  return y;
}

namespace detail {

// base^exp, saturating at 2^127.
inline unsigned __int128 saturating_pow(std::uint64_t base, int exp) {
  const unsigned __int128 cap = static_cast<unsigned __int128>(1) << 127;
  unsigned __int128 acc = 1;
  for (int i = 0; i < exp; ++i) {
    if (base != 0 && acc > cap / base) return cap;
    acc *= base;
  }
  return acc;
}

}  // namespace detail

/// m_r = floor(sqrt(2r)), the k = 2 target layer.
inline int layer_index_k2(int r) { return static_cast<int>(isqrt(2 * static_cast<std::uint64_t>(r))); }

/// m_{k,r} = floor(k * r^{1/k}) = max{m : m^k <= k^k r}, in exact integers.
inline int layer_index(int k, int r) {
  if (k < 1 || r < 1) throw ParameterError("layer_index requires k, r >= 1");
  const unsigned __int128 bound = detail::saturating_pow(static_cast<std::uint64_t>(k), k) *
                                  static_cast<unsigned __int128>(r);
  std::uint64_t m = 0;
  while (detail::saturating_pow(m + 1, k) <= bound) ++m;
  return static_cast<int>(m);
}

struct LayerSpec {
  LayerMode mode = LayerMode::subcube;
  int m = 0;            // target layer index
  int first_layer = 0;  // lowest infected weight layer
  int layer_count = 0;  // number of consecutive infected layers
  int ambient = 0;      // dimension the layers live in: r-1 or n
};

inline LayerSpec layer_spec(int r, const GraphParams& params, LayerMode mode) {
  params.validate();
  if (params.k < 2) throw ParameterError("layer constructions need k >= 2");
  LayerSpec spec;
  spec.mode = mode;
  spec.ambient = mode == LayerMode::subcube ? r - 1 : params.n;
  if (params.k == 2) {
    spec.m = layer_index_k2(r);
    spec.layer_count = 2;
    spec.first_layer = mode == LayerMode::subcube ? spec.m - 1 : spec.m;
  } else {
    spec.m = layer_index(params.k, r);
    spec.layer_count = params.k;
    spec.first_layer = spec.m;
  }
  return spec;
}

/// All 2^{r-1} vertices supported on the first r-1 coordinates.
inline VertexSet subcube_seed(int r, const GraphParams& params) {
  params.require_dense();
  if (r < 1) throw ParameterError("subcube_seed requires r >= 1");
  if (r - 1 > params.n) throw ParameterError("subcube_seed requires r - 1 <= n");
  return subcube_vertices(Vertex{(std::uint64_t{1} << (r - 1)) - 1}, Vertex{0}, params.n);
}

/// r-vertex contagious set for 2 <= r <= 2k: 0^n, 1^{r-1}0^{n-r+1}, and that
/// vertex with one of coordinates 1..r-2 cleared.
inline VertexSet small_r_set(int r, const GraphParams& params) {
  params.require_dense();
  if (r < 2) throw ParameterError("small_r_set requires r >= 2");
  if (r > 2 * params.k) throw ParameterError("small_r_set requires r <= 2k");
  if (r > params.n) throw ParameterError("small_r_set requires r <= n");
  VertexSet out(params.n);
  const std::uint64_t top = (std::uint64_t{1} << (r - 1)) - 1;
  out.insert(Vertex{0});
  out.insert(Vertex{top});
  for (int j = 3; j <= r; ++j) out.insert(Vertex{top & ~(std::uint64_t{1} << (r + 1 - j))});
  return out;
}

/// The explicit k = 2 witnesses for r = 5 and r = 6.
inline VertexSet fixed_small_sets(int r, int n) {
  std::vector<std::string_view> patterns;
  if (r == 5) {
    patterns = {"", "1", "11", "111", "1111"};
  } else if (r == 6) {
    patterns = {"", "011", "00111", "1111", "01111", "001111"};
  } else {
    throw ParameterError("fixed_small_sets covers only r = 5 and r = 6");
  }
  std::size_t longest = 0;
  for (auto p : patterns) longest = std::max(longest, p.size());
  if (n < static_cast<int>(longest)) {
    throw ParameterError("fixed_small_sets(r=" + std::to_string(r) + ") needs n >= " +
                         std::to_string(longest));
  }
  VertexSet out(n);
  for (auto p : patterns) {
    std::uint64_t label = 0;
    for (std::size_t i = 0; i < p.size(); ++i) {
      if (p[i] == '1') label |= std::uint64_t{1} << i;
    }
    out.insert(Vertex{label});
  }
  return out;
}

/// Union of consecutive weight layers inside Q^0_{r-1} (subcube) or Q_n (fullcube).
inline VertexSet layer_seed(int r, const GraphParams& params, LayerMode mode) {
  params.require_dense();
  const LayerSpec spec = layer_spec(r, params, mode);
  if (spec.ambient < 0 || spec.ambient > params.n) {
    throw ParameterError("layer ambient dimension must lie in [0, n]");
  }
  const int last = spec.first_layer + spec.layer_count - 1;
  if (spec.first_layer < 0 || last > spec.ambient) {
    throw ParameterError("layers " + std::to_string(spec.first_layer) + ".." + std::to_string(last) +
                         " do not fit in dimension " + std::to_string(spec.ambient));
  }
  VertexSet out(params.n);
  const std::uint64_t limit = std::uint64_t{1} << spec.ambient;
  for (std::uint64_t v = 0; v < limit; ++v) {
    const int w = std::popcount(v);
    if (w >= spec.first_layer && w <= last) out.set_unchecked(v);
  }
  return out;
}

/// Downward and upward spreading inequalities at their tightest index,
/// evaluated literally as binomial comparisons.
inline bool layer_conditions(int r, const GraphParams& params, LayerMode mode) {
  const LayerSpec spec = layer_spec(r, params, mode);
  const auto rr = static_cast<std::uint64_t>(r);
  const int k = params.k;
  const int m = spec.m;
  if (k == 2) {
    const int down_top = mode == LayerMode::subcube ? r - 1 - m + 1 : params.n - m + 1;
    return binomial(down_top, 2) >= rr && binomial(m + spec.layer_count, 2) >= rr;
  }
  const int down_top = mode == LayerMode::subcube ? r - 1 - (m - 1) : params.n - (m - 1);
  return binomial(down_top, k) >= rr && binomial(m + spec.layer_count, k) >= rr;
}

/// The first r unit vectors; contagious for k >= 3.
inline VertexSet weight_one_seed(int r, const GraphParams& params) {
  params.require_dense();
  if (params.k < 3) throw ParameterError("weight_one_seed requires k >= 3");
  if (r < 1 || r > params.n) throw ParameterError("weight_one_seed requires 1 <= r <= n");
  VertexSet out(params.n);
  for (int i = 0; i < r; ++i) out.insert(Vertex{std::uint64_t{1} << i});
  return out;
}

// ---------------------------------------------------------------------------
// Lower-bound blockers

struct BlockerSpec {
  int n_prime = 0;
  double c = 0.5;
  double ell = 1.0;
  double delta = 0.0;  // infected fraction of each n'-subcube
  std::vector<std::uint64_t> healthy_patterns;
};

/// Healthy patterns default to every n'-bit pattern except all-ones, so
/// delta = 2^{-n'}.
inline BlockerSpec default_blocker_spec(int n_prime, double c, double ell) {
  if (n_prime < 1 || n_prime > 20) throw ParameterError("blocker n' must lie in [1, 20]");
  BlockerSpec spec{n_prime, c, ell, 0.0, {}};
  const std::uint64_t all = std::uint64_t{1} << n_prime;
  for (std::uint64_t p = 0; p + 1 < all; ++p) spec.healthy_patterns.push_back(p);
  spec.delta = 1.0 - static_cast<double>(spec.healthy_patterns.size()) / static_cast<double>(all);
  return spec;
}

struct BlockerSums {
  double inside = 0;  // sum_{i=1..k} C(n', i)
  double cross = 0;   // sum_{i=1..k-1} sum_{j=1..k-i} C(n', j) C(n-n', i)
  double budget = 0;  // c r^ell
};

inline BlockerSums blocker_sums(int n, const BlockerSpec& spec, int k, int r) {
  const int np = spec.n_prime;
  if (np < 1 || np >= n) throw ParameterError("blocker requires 1 <= n' < n");
  BlockerSums s;
  for (int i = 1; i <= k; ++i) s.inside += static_cast<double>(binomial(np, i));
  for (int i = 1; i <= k - 1; ++i) {
    for (int j = 1; j <= k - i; ++j) {
      s.cross += static_cast<double>(binomial(np, j)) * static_cast<double>(binomial(n - np, i));
    }
  }
  s.budget = spec.c * std::pow(static_cast<double>(r), spec.ell);
  return s;
}

inline bool blocker_feasible(int n, const BlockerSpec& spec, int k, int r) {
  const BlockerSums s = blocker_sums(n, spec, k, r);
  // Integer sums against real budgets; allow for the rounding of c * r^ell.
  const double eps = 1e-9 * std::max(1.0, static_cast<double>(r));
  return s.inside <= s.budget + eps && s.cross <= static_cast<double>(r) - s.budget + eps;
}

struct BlockerSets {
  VertexSet infected;  // A0 = V \ B
  VertexSet healthy;   // B
};

/// B = every vertex whose first n' coordinates form a healthy pattern.
inline BlockerSets blocker_construct(int n, const BlockerSpec& spec, const GraphParams& params) {
  params.require_dense();
  if (params.n != n) throw ParameterError("blocker dimension differs from graph dimension");
  if (!blocker_feasible(n, spec, params.k, params.r)) {
    throw ParameterError("blocker spec is infeasible for (n, k, r)");
  }
  const std::uint64_t patterns = std::uint64_t{1} << spec.n_prime;
  std::vector<bool> healthy(patterns, false);
  std::uint64_t distinct = 0;
  for (auto p : spec.healthy_patterns) {
    if (p >= patterns) throw ParameterError("healthy pattern wider than n'");
    if (!healthy[p]) ++distinct;
    healthy[p] = true;
  }
  if (distinct == 0) throw ParameterError("blocker needs at least one healthy pattern");
  if (distinct == patterns) throw ParameterError("blocker with every pattern healthy leaves A0 empty");

  BlockerSets out{VertexSet(n), VertexSet(n)};
  const std::uint64_t total = std::uint64_t{1} << n;
  for (std::uint64_t v = 0; v < total; ++v) {
    if (healthy[v & (patterns - 1)]) out.healthy.set_unchecked(v);
    else out.infected.set_unchecked(v);
  }
  return out;
}

struct CorollaryBound {
  int case_id = 0;  // 1..4 in the order (k=2, l<1), (k=2, l=1), (k>=3, l<1), (k>=3, l=1)
  std::string description;
  double log_value = 0;  // natural log of the bound
  double value = 0;      // may be +inf when exp overflows
};

/// Closed-form lower bound on m(r) for the regime (k, l) falls in.
inline CorollaryBound corollary_bound(int k, int r, int n, double c, double ell, double delta) {
  if (!(c > 0 && c < 1)) throw ParameterError("corollary requires 0 < c < 1");
  if (!(delta > 0 && delta < 1)) throw ParameterError("corollary requires 0 < delta < 1");
  if (!(ell > 0 && ell <= 1)) throw ParameterError("corollary requires 0 < l <= 1");
  if (k < 2 || r < 1 || n < 1) throw ParameterError("corollary requires k >= 2, r >= 1, n >= 1");
  const double R = r;
  const double N = n;
  const double K = k;
  const double e = std::exp(1.0);
  const bool full = ell == 1.0;

  CorollaryBound out;
  double threshold = 0;
  if (k == 2) {
    if (!full) {
      out.case_id = 1;
      const double expo = 2.0 / (2.0 - ell);
      threshold = std::pow(N, expo) * std::pow(std::sqrt(2 * c) / (2 * (1 - c)), expo);
    } else {
      out.case_id = 2;
      const double s = std::sqrt(2 * c) + (1 - c) / std::sqrt(2 * c);
      threshold = N * N / (s * s);
    }
    out.description = "delta * 2^sqrt(2 c r)";
    out.log_value = std::log(delta) + std::sqrt(2 * c * R) * std::log(2.0);
  } else if (!full) {
    out.case_id = 3;
    const double expo = K * (K - 1) / (K - ell);
    threshold = std::pow(N, expo) * std::pow(e / (K - 1), expo) *
                std::pow(c / 2, (K / (K * (K - ell))) * (1 / (1 - c)));
    out.description = "delta * exp(r^(l/k) (k/e) (c/k)^(1/k))";
    out.log_value = std::log(delta) + std::pow(R, ell / K) * (K / e) * std::pow(c / K, 1 / K);
  } else {
    out.case_id = 4;
    const double inner =
        2 / (1 - c) * std::pow(e / (K - 1), K - 1) * std::pow(c / 2, 1 / K) * (K / e);
    threshold = std::pow(N, K) * std::pow(inner, K / (K - 1));
    out.description = "delta * exp(r^(1/k) (k/e) (c/2)^(1/k))";
    out.log_value = std::log(delta) + std::pow(R, 1 / K) * (K / e) * std::pow(c / 2, 1 / K);
  }
  if (!(R >= threshold)) {
    throw NoBoundApplicable("no bound applicable: r = " + std::to_string(r) +
                            " is below the regime threshold " + std::to_string(threshold));
  }
  out.value = std::exp(out.log_value);
  return out;
}

}  // namespace percq
