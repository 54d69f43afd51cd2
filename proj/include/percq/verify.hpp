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

// Verification suites: engine against the closed-form oracles, and every
// explicit construction against the engine.

#pragma once

#include <algorithm>
#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "percq/construct.hpp"
#include "percq/cube.hpp"
#include "percq/engine.hpp"
#include "percq/oracle.hpp"
#include "percq/rng.hpp"

namespace percq {

struct CheckLine {
  std::string name;
  bool passed = false;
  std::string detail;
};

struct SuiteReport {
  std::string suite;
  std::vector<CheckLine> lines;

  bool passed() const {
    return !lines.empty() &&
           std::all_of(lines.begin(), lines.end(), [](const CheckLine& l) { return l.passed; });
  }

  void add(std::string name, bool ok, std::string detail = {}) {
    lines.push_back({std::move(name), ok, std::move(detail)});
  }
};

struct VerifyOptions {
  std::optional<int> n_min;         // suite default when unset
  std::optional<int> n_max;         // suite default when unset
  std::vector<int> ks;              // suite default when empty
  std::uint64_t random_sets = 10'000;
  int exhaustive_triple_n_max = 9;
  std::uint64_t seed = kDefaultSeed;
};

inline const std::vector<std::string>& suite_names() {
  static const std::vector<std::string> names{"oracle-r2", "oracle-r3", "constructions",
                                              "counterexample-r4", "blocker", "m16-stall"};
  return names;
}

namespace detail {

inline std::vector<int> ks_or(const VerifyOptions& opt, std::vector<int> fallback) {
  return opt.ks.empty() ? fallback : opt.ks;
}

// Random set of 1..max_size vertices (duplicates collapse).
inline VertexSet random_set(int n, int max_size, const CounterRng& rng) {
  VertexSet s(n);
  const auto size = 1 + rng.below(0, static_cast<std::uint64_t>(max_size));
  for (std::uint64_t i = 0; i < size; ++i) s.set_unchecked(rng.below(i + 1, std::uint64_t{1} << n));
  return s;
}

inline std::string describe(const VertexSet& s) {
  std::string out = "{";
  bool first = true;
  s.for_each([&](Vertex v) {
    out += (first ? "" : ",") + format_vertex(v, s.dimension());
    first = false;
  });
  return out + "}";
}

// Compares engine percolation with `oracle` on one set; records the first
// disagreement.
struct Agreement {
  std::uint64_t tested = 0;
  std::uint64_t positives = 0;
  std::uint64_t mismatches = 0;
  std::string first_mismatch;

  template <typename Oracle>
  void check(const VertexSet& a, const GraphParams& params, ClosureWorkspace& ws, Oracle&& oracle) {
    const bool engine = percolates(a, params, ws);
    const bool predicted = oracle(a);
    ++tested;
    positives += engine ? 1 : 0;
    if (engine != predicted) {
      if (mismatches++ == 0) {
        first_mismatch = describe(a) + " engine=" + (engine ? "1" : "0") +
                         " oracle=" + (predicted ? "1" : "0");
      }
    }
  }

  std::string summary() const {
    std::ostringstream os;
    os << tested << " sets, " << positives << " percolating, " << mismatches << " mismatches";
    if (mismatches) os << "; first " << first_mismatch;
    return os.str();
  }
};

inline std::string tag(int n, int k, int r) {
  return "n=" + std::to_string(n) + " k=" + std::to_string(k) + " r=" + std::to_string(r);
}

}  // namespace detail

/// Engine percolation vs pair_condition at r = 2: every {0, x} plus random sets.
inline SuiteReport verify_oracle_r2(const VerifyOptions& opt = {}) {
  SuiteReport rep{"oracle-r2", {}};
  const CounterRng master(opt.seed);
  for (int k : detail::ks_or(opt, {2, 3})) {
    for (int n = opt.n_min.value_or(6); n <= opt.n_max.value_or(11); ++n) {
      const GraphParams params{n, k, 2};
      params.require_dense();
      ClosureWorkspace ws;
      detail::Agreement exhaustive;
      detail::Agreement random;
      auto oracle = [k](const VertexSet& a) { return pair_condition(a, k); };
      for (std::uint64_t x = 1; x < (std::uint64_t{1} << n); ++x) {
        exhaustive.check(VertexSet::of(n, {0, x}), params, ws, oracle);
      }
      const CounterRng rng = master.split(static_cast<std::uint64_t>(n * 16 + k));
      for (std::uint64_t i = 0; i < opt.random_sets; ++i) {
        random.check(detail::random_set(n, 6, rng.split(i)), params, ws, oracle);
      }
      rep.add("pairs " + detail::tag(n, k, 2), exhaustive.mismatches == 0, exhaustive.summary());
      rep.add("random " + detail::tag(n, k, 2), random.mismatches == 0, random.summary());
    }
  }
  return rep;
}

/// Engine percolation vs triple_condition at r = 3, over permutation-canonical
/// triples (0, 1^a 0^{n-a}, y) with a, |y| <= 2k+2 plus random sets, and
/// every k = 2 triangle shape with sides at most 4.
inline SuiteReport verify_oracle_r3(const VerifyOptions& opt = {}) {
  SuiteReport rep{"oracle-r3", {}};
  const CounterRng master(opt.seed ^ 0x33);
  for (int k : detail::ks_or(opt, {2, 3})) {
    if (k < 2) throw ParameterError("oracle-r3 needs k >= 2");
    const int reach = 2 * k + 2;
    for (int n = opt.n_min.value_or(6); n <= opt.n_max.value_or(11); ++n) {
      const GraphParams params{n, k, 3};
      params.require_dense();
      ClosureWorkspace ws;
      auto oracle = [k](const VertexSet& a) { return triple_condition(a, k); };
      if (n <= opt.exhaustive_triple_n_max) {
        detail::Agreement exhaustive;
        for (int a = 1; a <= std::min(reach, n); ++a) {
          const std::uint64_t x = (std::uint64_t{1} << a) - 1;
          // y has b ones inside x's support and c ones outside it.
          for (int b = 0; b <= a; ++b) {
            for (int c = 0; c <= n - a && b + c <= reach; ++c) {
              if (b + c == 0 || (b == a && c == 0)) continue;
              const std::uint64_t y = ((std::uint64_t{1} << b) - 1) | (((std::uint64_t{1} << c) - 1) << a);
              exhaustive.check(VertexSet::of(n, {0, x, y}), params, ws, oracle);
            }
          }
        }
        rep.add("triples " + detail::tag(n, k, 3), exhaustive.mismatches == 0, exhaustive.summary());
      }
      detail::Agreement random;
      const CounterRng rng = master.split(static_cast<std::uint64_t>(n * 16 + k));
      for (std::uint64_t i = 0; i < opt.random_sets; ++i) {
        random.check(detail::random_set(n, 8, rng.split(i)), params, ws, oracle);
      }
      rep.add("random " + detail::tag(n, k, 3), random.mismatches == 0, random.summary());
    }
  }

  // The nine k = 2 shapes, realized at the smallest dimension that fits
  // them and at the top of the tested range.
  const auto shapes = triangle_shapes(4);
  int certified = 0;
  std::string failures;
  for (const TriangleShape& t : shapes) {
    bool ok = true;
    const int need = std::max(6, t.a1() + t.a2() + t.a3());
    for (int n : {need, std::max(need, opt.n_max.value_or(11))}) {
      const GraphParams params{n, 2, 3};
      const std::uint64_t x2 = (std::uint64_t{1} << (t.a1() + t.a2())) - 1;
      const std::uint64_t x3 = ((std::uint64_t{1} << (t.a2() + t.a3())) - 1) << t.a1();
      const VertexSet a = VertexSet::of(n, {0, x2, x3});
      const bool shape_ok = triangle_shape(Vertex{0}, Vertex{x2}, Vertex{x3}).sorted() == t.sorted();
      ok = ok && shape_ok && percolates(a, params) && triple_condition(a, 2);
    }
    if (ok) ++certified;
    else failures += " (" + std::to_string(t.d12) + "," + std::to_string(t.d13) + "," + std::to_string(t.d23) + ")";
  }
  rep.add("k=2 triangle shapes", shapes.size() == 9 && certified == 9,
          std::to_string(certified) + "/" + std::to_string(shapes.size()) + " shapes percolate" +
              (failures.empty() ? "" : "; failing" + failures));
  return rep;
}

/// r4_counterexample stalls with an empty common neighborhood.
inline SuiteReport verify_counterexample_r4(const VerifyOptions& opt = {}) {
  SuiteReport rep{"counterexample-r4", {}};
  const std::vector<std::pair<int, int>> cases{{2, 4}, {2, 5}, {2, 6}, {3, 4}};
  for (auto [k, r] : cases) {
    if (!opt.ks.empty() && std::find(opt.ks.begin(), opt.ks.end(), k) == opt.ks.end()) continue;
    for (int n = std::max(r * k, opt.n_min.value_or(0)); n <= opt.n_max.value_or(14); ++n) {
      const GraphParams params{n, k, r};
      const VertexSet a0 = r4_counterexample(params);
      const auto members = a0.members();
      int max_side = 0;
      for (std::size_t i = 0; i < members.size(); ++i) {
        for (std::size_t j = i + 1; j < members.size(); ++j) {
          max_side = std::max(max_side, hamming_distance(members[i], members[j]));
        }
      }
      const ProcessResult res = closure(a0, params);
      const bool stalls = res.final_set == a0;
      const bool empty = common_neighborhood_empty(members, params);
      std::ostringstream os;
      os << "|A0|=" << a0.size() << " max side=" << max_side << " closure size=" << res.final_set.size()
         << " common neighborhood empty=" << (empty ? "true" : "false");
      rep.add(detail::tag(n, k, r), stalls && empty && max_side <= 2 * k &&
                                        static_cast<int>(a0.size()) == r,
              os.str());
    }
  }
  return rep;
}

/// Every explicit contagious construction percolates; layer_conditions
/// true implies percolation.
inline SuiteReport verify_constructions(const VerifyOptions& opt = {}) {
  SuiteReport rep{"constructions", {}};
  const int n_top = opt.n_max.value_or(14);
  const auto ks = detail::ks_or(opt, {});
  auto want_k = [&](int k) { return ks.empty() || std::find(ks.begin(), ks.end(), k) != ks.end(); };

  auto group = [&](const std::string& name, auto&& body) {
    std::uint64_t tested = 0;
    std::vector<std::string> failed;
    body([&](const std::string& label, const VertexSet& a0, const GraphParams& params) {
      ++tested;
      if (!percolates(a0, params)) failed.push_back(label);
    });
    std::string detail = std::to_string(tested) + " instances, " + std::to_string(failed.size()) + " failed";
    for (std::size_t i = 0; i < std::min<std::size_t>(failed.size(), 5); ++i) detail += "; " + failed[i];
    rep.add(name, tested > 0 && failed.empty(), detail);
  };

  group("subcube_seed", [&](auto&& check) {
    for (int k : {2, 3}) {
      if (!want_k(k)) continue;
      for (int r = 1; r <= 7; ++r) {
        for (int n = std::max(r - 1, k); n <= n_top; ++n) {
          const GraphParams params{n, k, r};
          check(detail::tag(n, k, r), subcube_seed(r, params), params);
        }
      }
    }
  });

  group("small_r_set", [&](auto&& check) {
    for (int k = 2; k <= 5; ++k) {
      if (!want_k(k)) continue;
      for (int r = 2; r <= 2 * k; ++r) {
        for (int n = std::max(r, k); n <= n_top; ++n) {
          const GraphParams params{n, k, r};
          check(detail::tag(n, k, r), small_r_set(r, params), params);
        }
      }
    }
  });

  if (want_k(2)) {
    group("fixed_small_sets", [&](auto&& check) {
      for (int r : {5, 6}) {
        for (int n = 8; n <= n_top; ++n) {
          const GraphParams params{n, 2, r};
          check(detail::tag(n, 2, r), fixed_small_sets(r, n), params);
        }
      }
    });
  }

  struct LayerCase {
    int n, k, r;
    LayerMode mode;
  };
  std::vector<LayerCase> layer_cases;
  if (want_k(2)) {
    for (int r = 10; r <= 12; ++r) {
      for (int n = r; n <= n_top; ++n) layer_cases.push_back({n, 2, r, LayerMode::subcube});
    }
    for (int n : {12, 13}) {
      if (n > n_top) continue;
      for (int r = n; r <= n + 6; ++r) layer_cases.push_back({n, 2, r, LayerMode::fullcube});
    }
  }
  if (want_k(3) && opt.n_max.value_or(15) >= 15) layer_cases.push_back({15, 3, 15, LayerMode::fullcube});

  std::uint64_t conditions_true = 0;
  std::vector<std::string> conditions_failed;
  group("layer_seed", [&](auto&& check) {
    for (const auto& c : layer_cases) {
      const GraphParams params{c.n, c.k, c.r};
      const VertexSet a0 = layer_seed(c.r, params, c.mode);
      const std::string label = detail::tag(c.n, c.k, c.r) + " " + std::string(to_string(c.mode));
      check(label, a0, params);
      if (layer_conditions(c.r, params, c.mode)) {
        ++conditions_true;
        if (!percolates(a0, params)) conditions_failed.push_back(label);
      }
    }
  });
  rep.add("layer_conditions implies percolation", conditions_failed.empty(),
          std::to_string(conditions_true) + " instances with conditions true, " +
              std::to_string(conditions_failed.size()) + " failed to percolate");

  if (want_k(3)) {
    group("weight_one_seed", [&](auto&& check) {
      for (int n = 3; n <= n_top; ++n) {
        for (int r = 2; r <= n; ++r) {
          const GraphParams params{n, 3, r};
          check(detail::tag(n, 3, r), weight_one_seed(r, params), params);
        }
      }
    });
  }
  return rep;
}

/// Default blocker at (n=8, n'=2, k=2, r=16): feasible, certified, stalls.
inline SuiteReport verify_blocker(const VerifyOptions& = {}) {
  SuiteReport rep{"blocker", {}};
  const int n = 8;
  const GraphParams params{n, 2, 16};
  const BlockerSpec spec = default_blocker_spec(2, 3.0 / 16.0, 1.0);
  const BlockerSums sums = blocker_sums(n, spec, params.k, params.r);
  const bool feasible = blocker_feasible(n, spec, params.k, params.r);
  std::ostringstream os;
  os << "inside=" << sums.inside << " cross=" << sums.cross << " budget=" << sums.budget;
  rep.add("feasible n=8 n'=2 k=2 r=16", feasible, os.str());
  if (!feasible) return rep;
  const BlockerSets sets = blocker_construct(n, spec, params);
  rep.add("certificate", check_stall_certificate(sets.healthy, params),
          "|A0|=" + std::to_string(sets.infected.size()) + " |B|=" + std::to_string(sets.healthy.size()));
  const ProcessResult res = closure(sets.infected, params);
  rep.add("closure stalls", res.final_set == sets.infected && !res.percolated,
          "closure size=" + std::to_string(res.final_set.size()));
  return rep;
}

/// k = 2, r = 16: the union of layers 0..4 is closed, with the layer-5 and
/// layer-6 neighbor counts that show it.
inline SuiteReport verify_m16_stall(const VerifyOptions& opt = {}) {
  SuiteReport rep{"m16-stall", {}};
  for (int n = std::max(10, opt.n_min.value_or(10)); n <= opt.n_max.value_or(14); ++n) {
    const GraphParams params{n, 2, 16};
    VertexSet a0(n);
    for (int j = 0; j <= 4; ++j) a0 |= weight_layer(n, j);
    const ProcessResult res = closure(a0, params);
    rep.add("closed " + detail::tag(n, 2, 16), res.final_set == a0,
            "|A0|=" + std::to_string(a0.size()) + " closure size=" + std::to_string(res.final_set.size()));

    // Neighbor counts into a layer, collected over every vertex of the source layer.
    auto counts = [&](int from, int into) {
      std::set<int> seen;
      weight_layer(n, from).for_each([&](Vertex v) {
        int c = 0;
        for (Vertex w : neighbors(v, params)) c += w.weight() == into ? 1 : 0;
        seen.insert(c);
      });
      return seen;
    };
    auto expect = [&](int from, int into, int value) {
      const auto seen = counts(from, into);
      std::string got;
      for (int c : seen) got += (got.empty() ? "" : ",") + std::to_string(c);
      rep.add("|N_v cap V_" + std::to_string(into) + "| for v in V_" + std::to_string(from) + " n=" +
                  std::to_string(n),
              seen == std::set<int>{value}, "observed {" + got + "} expected " + std::to_string(value));
    };
    expect(5, 4, 5);
    expect(5, 3, 10);
    expect(6, 4, 15);
  }
  return rep;
}

inline SuiteReport run_suite(std::string_view name, const VerifyOptions& opt = {}) {
  if (name == "oracle-r2") return verify_oracle_r2(opt);
  if (name == "oracle-r3") return verify_oracle_r3(opt);
  if (name == "constructions") return verify_constructions(opt);
  if (name == "counterexample-r4") return verify_counterexample_r4(opt);
  if (name == "blocker") return verify_blocker(opt);
  if (name == "m16-stall") return verify_m16_stall(opt);
  throw ParameterError("unknown suite '" + std::string(name) + "'");
}

}  // namespace percq
