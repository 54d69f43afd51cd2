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


#include <gtest/gtest.h>

#include <random>

#include "percq/engine.hpp"
#include "percq/mc.hpp"
#include "percq/oracle.hpp"

namespace percq {
namespace {

VertexSet parse_set(std::initializer_list<const char*> texts, int n) {
  VertexSet s(n);
  for (const char* t : texts) s.insert(parse_vertex(t, n));
  return s;
}

// Direct definitions, independent of the bucketing code path.
bool brute_pair(const std::vector<WideLabel>& pts, int k) {
  for (std::size_t i = 0; i < pts.size(); ++i) {
    for (std::size_t j = i + 1; j < pts.size(); ++j) {
      if (pts[i] != pts[j] && hamming_distance(pts[i], pts[j]) <= 2 * k) return true;
    }
  }
  return false;
}

bool brute_triple(const std::vector<WideLabel>& pts, int k) {
  const std::size_t m = pts.size();
  for (std::size_t a = 0; a < m; ++a) {
    for (std::size_t b = a + 1; b < m; ++b) {
      for (std::size_t c = b + 1; c < m; ++c) {
        if (hamming_distance(pts[a], pts[b]) <= 2 * k && hamming_distance(pts[a], pts[c]) <= 2 * k &&
            hamming_distance(pts[b], pts[c]) <= 2 * k)
          return true;
      }
    }
  }
  return false;
}

TEST(PairCondition, Examples) {
  EXPECT_TRUE(pair_condition(parse_set({"000000", "111100"}, 6), 2));
  EXPECT_FALSE(pair_condition(parse_set({"000000", "111110"}, 6), 2));
  EXPECT_FALSE(pair_condition(parse_set({"000000"}, 6), 2));
  EXPECT_FALSE(pair_condition(VertexSet(6), 2));
  EXPECT_THROW(pair_condition(VertexSet(6), 0), ParameterError);
}

TEST(PairCondition, DuplicatesDoNotCount) {
  SparsePointList pts{20, {WideLabel{5, 0}, WideLabel{5, 0}}};
  EXPECT_FALSE(pair_condition(pts, 2));
}

TEST(TripleCondition, Examples) {
  EXPECT_TRUE(triple_condition(parse_set({"000000", "100000", "010000"}, 6), 2));
  EXPECT_FALSE(triple_condition(parse_set({"000000", "100000"}, 6), 2));
  EXPECT_FALSE(triple_condition(parse_set({"000000", "100000", "011111"}, 6), 2));
  EXPECT_THROW(triple_condition(parse_set({"000000", "100000", "010000"}, 6), 1), ParameterError);
}

TEST(TriangleShapes, NineForKTwo) {
  const auto shapes = triangle_shapes(4);
  EXPECT_EQ(shapes.size(), 9u);
  for (const auto& t : shapes) {
    EXPECT_TRUE(t.valid());
    EXPECT_EQ(t.a1() + t.a2(), t.d12);
    EXPECT_EQ(t.a1() + t.a3(), t.d13);
    EXPECT_EQ(t.a2() + t.a3(), t.d23);
  }
}

// Large inputs go through block bucketing; it must find exactly the pairs
// the quadratic scan finds.
TEST(ClosePairs, BucketingMatchesQuadraticScan) {
  for (int n : {20, 48, 100, 128}) {
    for (int radius : {2, 4, 6}) {
      const CounterRng rng(static_cast<std::uint64_t>(n * 10 + radius));
      SparsePointList pts{n, {}};
      // Clustered points so that close pairs exist.
      for (std::uint64_t i = 0; i < 700; ++i) {
        WideLabel base = truncate_label({rng.bits(4 * i), rng.bits(4 * i + 1)}, n);
        if (i % 3 == 1) {
          base = pts.points.back();
          for (int f = 0; f < static_cast<int>(rng.below(4 * i + 2, 8)); ++f) {
            const int bit = static_cast<int>(rng.below(4 * i + 3 + 1000 * static_cast<std::uint64_t>(f), static_cast<std::uint64_t>(n)));
            if (bit < 64) base.lo ^= std::uint64_t{1} << bit;
            else base.hi ^= std::uint64_t{1} << (bit - 64);
          }
        }
        pts.points.push_back(base);
      }
      pts.normalize();
      ASSERT_GE(pts.size(), kBucketingThreshold);
      std::vector<std::pair<std::uint32_t, std::uint32_t>> expected;
      for (std::uint32_t i = 0; i < pts.size(); ++i) {
        for (std::uint32_t j = i + 1; j < pts.size(); ++j) {
          if (hamming_distance(pts.points[i], pts.points[j]) <= radius) expected.emplace_back(i, j);
        }
      }
      EXPECT_EQ(close_pairs(pts, radius), expected) << "n=" << n << " radius=" << radius;
      EXPECT_FALSE(expected.empty());
    }
  }
}

TEST(Oracles, MatchBruteForceOnSparseLists) {
  for (int n : {16, 40, 90}) {
    for (int k : {2, 3}) {
      for (std::uint64_t seed = 0; seed < 60; ++seed) {
        // Around the r = 2 / r = 3 thresholds, so both outcomes occur.
        const double p = std::ldexp(1.0, -n) * (2 + static_cast<double>(seed % 40) * 40);
        const SparsePointList pts = sample_points(n, std::min(p, 1.0), seed);
        EXPECT_EQ(pair_condition(pts, k), brute_pair(pts.points, k));
        if (pts.size() <= 120) EXPECT_EQ(triple_condition(pts, k), brute_triple(pts.points, k));
      }
    }
  }
}

TEST(Oracles, MonotoneUnderAddingVertices) {
  std::mt19937_64 gen(8);
  for (int trial = 0; trial < 300; ++trial) {
    VertexSet a(9);
    for (int i = 0; i < 1 + static_cast<int>(gen() % 4); ++i) a.insert(Vertex{gen() & 511});
    VertexSet b = a;
    b.insert(Vertex{gen() & 511});
    if (pair_condition(a, 2)) EXPECT_TRUE(pair_condition(b, 2));
    if (triple_condition(a, 2)) EXPECT_TRUE(triple_condition(b, 2));
  }
}

TEST(Oracles, AgreeWithEngineOnRandomSets) {
  std::mt19937_64 gen(21);
  for (int trial = 0; trial < 1500; ++trial) {
    const int n = 6 + static_cast<int>(gen() % 4);
    const int k = 2 + static_cast<int>(gen() % 2);
    VertexSet a(n);
    const int size = 1 + static_cast<int>(gen() % 6);
    for (int i = 0; i < size; ++i) a.insert(Vertex{gen() & ((1u << n) - 1)});
    EXPECT_EQ(percolates(a, {n, k, 2}), pair_condition(a, k));
    EXPECT_EQ(percolates(a, {n, k, 3}), triple_condition(a, k));
  }
}

TEST(Counterexample, Construction) {
  const VertexSet a = r4_counterexample({8, 2, 4});
  EXPECT_EQ(a, parse_set({"11000000", "00110000", "00001100", "00000000"}, 8));
  EXPECT_EQ(closure(a, {8, 2, 4}).final_set, a);
  EXPECT_TRUE(common_neighborhood_empty(a, {8, 2, 4}));

  const VertexSet b = r4_counterexample({12, 3, 4});
  EXPECT_EQ(b.size(), 4u);
  EXPECT_EQ(closure(b, {12, 3, 4}).final_set, b);
  EXPECT_TRUE(common_neighborhood_empty(b, {12, 3, 4}));

  EXPECT_THROW(r4_counterexample({7, 2, 4}), ParameterError);
  EXPECT_THROW(r4_counterexample({8, 2, 3}), ParameterError);
}

TEST(Counterexample, PairwiseWithinTwoK) {
  for (auto [k, r] : std::vector<std::pair<int, int>>{{2, 4}, {2, 5}, {2, 6}, {3, 4}}) {
    const auto m = r4_counterexample({r * k, k, r}).members();
    for (std::size_t i = 0; i < m.size(); ++i) {
      for (std::size_t j = i + 1; j < m.size(); ++j) EXPECT_LE(hamming_distance(m[i], m[j]), 2 * k);
    }
  }
}

TEST(CommonNeighborhood, Examples) {
  EXPECT_FALSE(common_neighborhood_empty(VertexSet::of(6, {0}), {6, 2, 2}));
  EXPECT_FALSE(common_neighborhood_empty(parse_set({"0000", "1100"}, 4), {4, 2, 2}));
}

}  // namespace
}  // namespace percq
