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

#include <cmath>

#include "percq/mc.hpp"

namespace percq {
namespace {

TEST(Sampling, ExtremesAndDeterminism) {
  const GraphParams params{10, 2, 2};
  EXPECT_TRUE(sample_initial(params, 0.0, 1).empty());
  EXPECT_TRUE(sample_initial(params, 1.0, 1).is_full());
  EXPECT_EQ(sample_initial(params, 0.3, 5), sample_initial(params, 0.3, 5));
  EXPECT_NE(sample_initial(params, 0.3, 5), sample_initial(params, 0.3, 6));
  EXPECT_THROW(sample_initial(params, 1.5, 1), ParameterError);
  EXPECT_THROW(sample_initial(params, -0.1, 1), ParameterError);
}

TEST(Sampling, DenseMonotoneCoupling) {
  const GraphParams params{11, 2, 2};
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    VertexSet prev(11);
    for (double p : {0.001, 0.01, 0.05, 0.2, 0.5, 0.9}) {
      const VertexSet cur = sample_initial(params, p, seed);
      EXPECT_TRUE(prev.is_subset_of(cur));
      prev = cur;
    }
  }
}

TEST(Sampling, DenseDensity) {
  const GraphParams params{16, 2, 2};
  const VertexSet s = sample_initial(params, 0.25, 3);
  const double expected = 65536 * 0.25;
  EXPECT_NEAR(static_cast<double>(s.size()), expected, 5 * std::sqrt(expected * 0.75));
}

TEST(SparseSampling, ExtremesAndBudget) {
  EXPECT_EQ(sample_points(40, 0.0, 1).size(), 0u);
  EXPECT_THROW(sample_points(40, 1e-3, 1), CapacityError);
  EXPECT_THROW(sample_points(129, 1e-30, 1), ParameterError);
  // Labels are drawn with replacement and deduplicated.
  const auto full = sample_points(8, 1.0, 1);
  EXPECT_GT(full.size(), 100u);
  EXPECT_LE(full.size(), 256u);
}

TEST(SparseSampling, LargeCountFiveSigma) {
  const double expected = std::ldexp(1.0, 20);
  const auto pts = sample_points(40, std::ldexp(1.0, -20), kDefaultSeed);
  EXPECT_LT(std::abs(static_cast<double>(pts.size()) - expected), 5 * std::sqrt(expected));
}

TEST(SparseSampling, DeterministicAndPrefixMonotone) {
  for (int n : {12, 40, 100}) {
    const double base = std::ldexp(1.0, -n);
    EXPECT_EQ(sample_points(n, 50 * base, 9).points, sample_points(n, 50 * base, 9).points);
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
      const auto small = sample_points(n, 20 * base, seed).points;
      const auto big = sample_points(n, 60 * base, seed).points;
      for (const auto& x : small) EXPECT_TRUE(std::binary_search(big.begin(), big.end(), x));
    }
  }
}

TEST(SparseSampling, LabelsFitDimension) {
  for (int n : {5, 33, 64, 70, 128}) {
    const auto pts = sample_points(n, std::min(1.0, 100 * std::ldexp(1.0, -n)), 4);
    for (const auto& x : pts.points) EXPECT_EQ(truncate_label(x, n), x);
  }
}

// Count is Binomial(2^n, p) for n <= 32 and Poisson(2^n p) above; both have
// mean 2^n p and variance about 2^n p here.
TEST(SparseSampling, CountMeanWithinFiveSigma) {
  for (int n : {14, 40}) {
    const double lambda = 30;
    const double p = lambda * std::ldexp(1.0, -n);
    const int runs = 2000;
    double total = 0;
    for (int s = 0; s < runs; ++s) total += static_cast<double>(sample_points(n, p, static_cast<std::uint64_t>(s)).size());
    const double mean = total / runs;
    EXPECT_NEAR(mean, lambda, 5 * std::sqrt(lambda / runs)) << "n=" << n;
  }
}

TEST(SparseSampling, CountVariance) {
  for (int n : {14, 40}) {
    const double lambda = 30;
    const int runs = 2000;
    double sum = 0, sq = 0;
    for (int s = 0; s < runs; ++s) {
      const double c = static_cast<double>(sample_points(n, lambda * std::ldexp(1.0, -n), static_cast<std::uint64_t>(s) + 5000).size());
      sum += c;
      sq += c * c;
    }
    const double mean = sum / runs;
    EXPECT_NEAR(sq / runs - mean * mean, lambda, 5.0) << "n=" << n;
  }
}

// Fed the same dense sample, the oracles and the engine agree trial by trial.
TEST(Backends, ExactAgreementOnSharedDenseSamples) {
  for (int r : {2, 3}) {
    const GraphParams params{12, 2, r};
    const double p = r == 2 ? 1.5e-4 : 4e-4;
    int positives = 0;
    for (std::uint64_t seed = 0; seed < 400; ++seed) {
      const VertexSet a0 = sample_initial(params, p * static_cast<double>(1 + seed % 8), seed);
      const bool engine = percolates(a0, params);
      const SparsePointList pts = to_points(a0);
      const bool oracle = r == 2 ? pair_condition(pts, 2) : triple_condition(pts, 2);
      ASSERT_EQ(engine, oracle) << "seed " << seed;
      positives += engine ? 1 : 0;
    }
    EXPECT_GT(positives, 20);
    EXPECT_LT(positives, 380);
  }
}

TEST(Wilson, Properties) {
  auto [lo0, hi0] = wilson_interval(0, 100);
  EXPECT_EQ(lo0, 0.0);
  EXPECT_GT(hi0, 0.0);
  auto [lo1, hi1] = wilson_interval(100, 100);
  EXPECT_LT(lo1, 1.0);
  EXPECT_EQ(hi1, 1.0);
  auto [lo, hi] = wilson_interval(50, 100);
  EXPECT_NEAR(lo, 0.4038, 1e-3);
  EXPECT_NEAR(hi, 0.5962, 1e-3);
}

// 95% intervals cover the true rate in at least 93% of repetitions.
TEST(Wilson, Calibration) {
  const CounterRng rng(2024);
  for (double q : {0.1, 0.5, 0.8}) {
    int covered = 0;
    const int reps = 1000, trials = 200;
    for (int rep = 0; rep < reps; ++rep) {
      std::uint64_t succ = 0;
      const CounterRng sub = rng.split(static_cast<std::uint64_t>(rep));
      for (int t = 0; t < trials; ++t) succ += sub.uniform(static_cast<std::uint64_t>(t)) < q ? 1 : 0;
      auto [lo, hi] = wilson_interval(succ, trials);
      covered += (lo <= q && q <= hi) ? 1 : 0;
    }
    EXPECT_GE(covered, 930) << "q=" << q;
  }
}

TEST(Estimate, ExtremeProbabilities) {
  for (Backend b : {Backend::engine, Backend::oracle}) {
    const GraphParams params{8, 2, 2};
    EXPECT_EQ(estimate_prob(params, 1.0, 50, 1, b).point, 1.0);
    EXPECT_EQ(estimate_prob(params, 0.0, 50, 1, b).point, 0.0);
  }
}

TEST(Estimate, BackendRestrictions) {
  EXPECT_THROW(estimate_prob({8, 2, 4}, 0.1, 10, 1, Backend::oracle), ParameterError);
  EXPECT_THROW(estimate_prob({8, 1, 3}, 0.1, 10, 1, Backend::oracle), ParameterError);
  EXPECT_THROW(estimate_prob({40, 2, 2}, 1e-9, 10, 1, Backend::engine), CapacityError);
  EXPECT_NO_THROW(estimate_prob({40, 2, 2}, 1e-10, 10, 1, Backend::oracle));
  EXPECT_THROW(parse_backend("gpu"), ParameterError);
}

TEST(Estimate, ThreadCountDoesNotChangeResults) {
  const GraphParams params{10, 2, 2};
  for (Backend b : {Backend::engine, Backend::oracle}) {
    const Estimate one = estimate_prob(params, 0.004, 300, 17, b, 1);
    for (int t : {2, 3, 8}) {
      const Estimate many = estimate_prob(params, 0.004, 300, 17, b, t);
      EXPECT_EQ(one.successes, many.successes);
      EXPECT_EQ(one.point, many.point);
      EXPECT_EQ(one.ci_low, many.ci_low);
    }
  }
}

TEST(Estimate, PerSeedOutcomesMonotoneInP) {
  const GraphParams params{10, 2, 2};
  for (Backend b : {Backend::engine, Backend::oracle}) {
    std::vector<std::uint8_t> prev(200, 0);
    for (double p : log_grid(1e-4, 0.05, 8)) {
      const auto cur = trial_outcomes(params, p, 200, 3, b);
      for (std::size_t t = 0; t < cur.size(); ++t) EXPECT_LE(prev[t], cur[t]);
      prev = cur;
    }
  }
}

TEST(Estimate, ThreadsEnvFallback) {
  EXPECT_EQ(resolve_threads(3), 3);
  setenv("PERCQ_THREADS", "4", 1);
  EXPECT_EQ(resolve_threads(0), 4);
  unsetenv("PERCQ_THREADS");
  EXPECT_EQ(resolve_threads(0), 1);
}

TEST(Sweep, GridEndpoints) {
  const auto rows = sweep({8, 2, 2}, {0.0, 1.0}, 20, 1, Backend::engine);
  ASSERT_EQ(rows.size(), 2u);
  EXPECT_EQ(rows[0].point, 0.0);
  EXPECT_EQ(rows[1].point, 1.0);
}

TEST(Sweep, LogGrid) {
  const auto g = log_grid(1e-4, 1e-2, 3);
  ASSERT_EQ(g.size(), 3u);
  EXPECT_DOUBLE_EQ(g[0], 1e-4);
  EXPECT_NEAR(g[1], 1e-3, 1e-15);
  EXPECT_NEAR(g[2], 1e-2, 1e-15);
  EXPECT_THROW(log_grid(0, 1, 3), ParameterError);
}

// The bracket returned by find_pc contains the 1/2 crossing of an
// independent sweep over the same seed.
TEST(FindPc, BracketMatchesSweepCrossing) {
  const GraphParams params{12, 2, 2};
  const std::uint64_t trials = 400, seed = 99;
  const PcResult pc = find_pc(params, trials, seed, Backend::engine, 1.2);
  EXPECT_LE(pc.p_high / pc.p_low, 1.2 + 1e-12);
  EXPECT_LE(pc.rate_low, 0.5);
  EXPECT_GT(pc.rate_high, 0.5);
  const double center = std::exp2(-6.0) / 144;
  const auto grid = log_grid(center / 8, center * 8, 20);
  const auto rows = sweep(params, grid, trials, seed, Backend::engine);
  // Coupled outcomes make the per-seed rate monotone; find the crossing.
  double cross_lo = 0, cross_hi = 1;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (rows[i].point <= 0.5) cross_lo = rows[i].p;
    if (rows[i].point > 0.5) {
      cross_hi = rows[i].p;
      break;
    }
  }
  EXPECT_GT(cross_hi, cross_lo);
  EXPECT_LT(cross_hi, 1.0);
  EXPECT_GE(pc.p_high, cross_lo);
  EXPECT_LE(pc.p_low, cross_hi);
  for (std::size_t i = 1; i < rows.size(); ++i) EXPECT_GE(rows[i].successes, rows[i - 1].successes);
}

TEST(FindPc, Refusals) {
  EXPECT_THROW(find_pc({4, 1, 5}, 10, 1, Backend::engine, 1.5), ParameterError);
  EXPECT_THROW(find_pc({8, 2, 2}, 10, 1, Backend::engine, 1.0), ParameterError);
  EXPECT_THROW(find_pc({8, 2, 4}, 10, 1, Backend::oracle, 1.5), ParameterError);
}

}  // namespace
}  // namespace percq
