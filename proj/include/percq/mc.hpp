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

// Monte Carlo estimation of P_p(A0 percolates) and of the critical
// probability p_c = sup{p : P_p <= 1/2}.
//
// Randomness is counter based. Trial t of master seed s draws from
// CounterRng(s).split(t); inside a trial, vertex v (dense) or arrival j
// (sparse) uses counter v or j. Results therefore do not depend on how
// trials are spread over threads, and for a fixed seed the initial set is
// monotone in p, which makes every trial's outcome monotone in p.

#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdlib>
#include <exception>
#include <tuple>
#include <stdexcept>
#include <string>
#include <string_view>
#include <thread>
#include <vector>

#include "percq/cube.hpp"
#include "percq/engine.hpp"
#include "percq/oracle.hpp"
#include "percq/points.hpp"
#include "percq/rng.hpp"

namespace percq {

enum class Backend { engine, oracle };

inline std::string_view to_string(Backend b) { return b == Backend::engine ? "engine" : "oracle"; }

inline Backend parse_backend(std::string_view text) {
  if (text == "engine") return Backend::engine;
  if (text == "oracle") return Backend::oracle;
  throw ParameterError("unknown backend '" + std::string(text) + "'");
}

/// Expected sparse sample sizes above this are refused.
inline constexpr double kSparseBudget = 1e7;

struct Estimate {
  double p = 0;
  std::uint64_t trials = 0;
  std::uint64_t successes = 0;
  double point = 0;
  double ci_low = 0;
  double ci_high = 0;
};

struct PcResult {
  double p_low = 0;
  double p_high = 0;
  double p_hat = 0;
  std::uint64_t trials_per_eval = 0;
  Backend backend = Backend::engine;
  int evals = 0;
  double rate_low = 0;   // success rate measured at p_low
  double rate_high = 0;  // success rate measured at p_high
};

/// Effective thread count: explicit request, else PERCQ_THREADS, else 1.
inline int resolve_threads(int requested) {
  if (requested > 0) return requested;
  if (const char* env = std::getenv("PERCQ_THREADS")) {
    const int v = std::atoi(env);
    if (v > 0) return v;
  }
  return 1;
}

/// 95% Wilson score interval.
inline std::pair<double, double> wilson_interval(std::uint64_t successes, std::uint64_t trials) {
  if (trials == 0) return {0.0, 1.0};
  constexpr double z = 1.959963984540054;
  const double nn = static_cast<double>(trials);
  const double phat = static_cast<double>(successes) / nn;
  const double z2 = z * z;
  const double denom = 1 + z2 / nn;
  const double center = (phat + z2 / (2 * nn)) / denom;
  const double half = z * std::sqrt(phat * (1 - phat) / nn + z2 / (4 * nn * nn)) / denom;
  double lo = std::max(0.0, center - half);
  double hi = std::min(1.0, center + half);
  // Guard the ordering against rounding at the extremes.
  lo = std::min(lo, phat);
  hi = std::max(hi, phat);
  return {lo, hi};
}

inline void check_probability(double p) {
  if (!(p >= 0.0 && p <= 1.0)) throw ParameterError("probability must lie in [0, 1]");
}

/// Fills `out` with {v : U_v < p}, U_v = rng.uniform(v).
inline void sample_initial_into(VertexSet& out, const CounterRng& rng, double p) {
  out.clear();
  if (p <= 0) return;
  const double scaled = p * 0x1.0p53;  // exact; U_v < p  <=>  bits53 < p * 2^53
  const std::uint64_t total = out.universe_size();
  for (std::uint64_t v = 0; v < total; ++v) {
    if (static_cast<double>(rng.bits53(v)) < scaled) out.set_unchecked(v);
  }
}

/// Each vertex independently with probability p, keyed by (seed, v).
inline VertexSet sample_initial(const GraphParams& params, double p, std::uint64_t seed) {
  params.require_dense();
  check_probability(p);
  VertexSet out(params.n);
  sample_initial_into(out, CounterRng(seed), p);
  return out;
}

namespace detail {

inline void check_sparse_request(int n, double p) {
  if (n < 1 || n > kMaxSparseDimension) throw ParameterError("sparse sampling needs 1 <= n <= 128");
  check_probability(p);
  if (std::ldexp(p, n) > kSparseBudget) {
    throw CapacityError("expected sample size 2^n * p = " + std::to_string(std::ldexp(p, n)) +
                        " exceeds the budget of 1e7 points");
  }
}

inline WideLabel random_label(const CounterRng& rng, std::uint64_t j, int n) {
  const CounterRng sub = rng.split(j);
  return truncate_label(WideLabel{sub.bits(0), sub.bits(1)}, n);
}

}  // namespace detail

/// Sparse analogue of sample_initial for n up to 128.
///
/// The count M is the number of "arrival times" below p: arrivals are the
/// order statistics of 2^n uniforms (exactly Binomial(2^n, p)) when
/// 2^n <= 2^32, and a rate-2^n Poisson process otherwise. Arrival j carries
/// an independent uniform n-bit label. For a fixed seed the list for p is a
/// prefix of the list for any p' > p, so outcomes are monotone in p.
inline SparsePointList sample_points(int n, double p, std::uint64_t seed) {
  detail::check_sparse_request(n, p);
  SparsePointList out{n, {}};
  if (p <= 0) return out;
  const CounterRng times = CounterRng(seed).split(0);
  const CounterRng labels = CounterRng(seed).split(1);
  const double population = std::ldexp(1.0, n);

  if (n <= 32) {
    // log(1 - U_(j)) accumulates log1p(-W)/(N - j): the next order statistic.
    const auto total = std::uint64_t{1} << n;
    const double log_keep = std::log1p(-p);
    double log_tail = 0.0;
    for (std::uint64_t j = 0; j < total; ++j) {
      log_tail += std::log1p(-times.uniform(j)) / static_cast<double>(total - j);
      if (!(log_tail > log_keep)) break;  // U_(j+1) >= p
      out.points.push_back(detail::random_label(labels, j, n));
    }
  } else {
    double t = 0.0;
    for (std::uint64_t j = 0;; ++j) {
      t += -std::log1p(-times.uniform(j)) / population;
      if (!(t < p)) break;
      out.points.push_back(detail::random_label(labels, j, n));
    }
  }
  out.normalize();
  return out;
}

namespace detail {

inline void check_backend(const GraphParams& params, Backend backend) {
  params.validate();
  if (backend == Backend::oracle) {
    if (params.r != 2 && params.r != 3) {
      throw ParameterError("oracle backend is valid only for r = 2 or r = 3");
    }
    if (params.r == 3 && params.k < 2) throw ParameterError("oracle backend with r = 3 needs k >= 2");
    if (params.n > kMaxSparseDimension) throw ParameterError("oracle backend supports n <= 128");
  } else {
    params.require_dense();
  }
}

}  // namespace detail

/// Outcome (0/1) of each trial t in [0, trials); trial t uses seed stream t.
inline std::vector<std::uint8_t> trial_outcomes(const GraphParams& params, double p,
                                                std::uint64_t trials, std::uint64_t seed,
                                                Backend backend, int threads = 0) {
  detail::check_backend(params, backend);
  check_probability(p);
  if (backend == Backend::oracle) detail::check_sparse_request(params.n, p);
  std::vector<std::uint8_t> outcome(trials, 0);
  const CounterRng master(seed);

  auto run_range = [&](std::uint64_t begin, std::uint64_t end) {
    if (backend == Backend::engine) {
      ClosureWorkspace ws;
      VertexSet a0(params.n);
      for (std::uint64_t t = begin; t < end; ++t) {
        sample_initial_into(a0, master.split(t), p);
        outcome[t] = percolates(a0, params, ws) ? 1 : 0;
      }
    } else {
      for (std::uint64_t t = begin; t < end; ++t) {
        const SparsePointList pts = sample_points(params.n, p, master.split(t).key());
        const bool hit = params.r == 2 ? pair_condition(pts, params.k) : triple_condition(pts, params.k);
        outcome[t] = hit ? 1 : 0;
      }
    }
  };

  const int nthreads = static_cast<int>(std::min<std::uint64_t>(
      static_cast<std::uint64_t>(resolve_threads(threads)), std::max<std::uint64_t>(trials, 1)));
  if (nthreads <= 1) {
    run_range(0, trials);
  } else {
    std::vector<std::thread> pool;
    std::vector<std::exception_ptr> errors(static_cast<std::size_t>(nthreads));
    for (int i = 0; i < nthreads; ++i) {
      const std::uint64_t b = trials * static_cast<std::uint64_t>(i) / static_cast<std::uint64_t>(nthreads);
      const std::uint64_t e = trials * static_cast<std::uint64_t>(i + 1) / static_cast<std::uint64_t>(nthreads);
      pool.emplace_back([&, b, e, i] {
        try {
          run_range(b, e);
        } catch (...) {
          errors[static_cast<std::size_t>(i)] = std::current_exception();
        }
      });
    }
    for (auto& th : pool) th.join();
    for (auto& err : errors) {
      if (err) std::rethrow_exception(err);
    }
  }
  return outcome;
}

inline Estimate estimate_prob(const GraphParams& params, double p, std::uint64_t trials,
                              std::uint64_t seed, Backend backend, int threads = 0) {
  const auto outcome = trial_outcomes(params, p, trials, seed, backend, threads);
  Estimate e;
  e.p = p;
  e.trials = trials;
  for (auto o : outcome) e.successes += o;
  e.point = trials == 0 ? 0.0 : static_cast<double>(e.successes) / static_cast<double>(trials);
  std::tie(e.ci_low, e.ci_high) = wilson_interval(e.successes, trials);
  return e;
}

/// 2^{-n/r} n^{-k}: the scale at which p_c sits for r = 2, 3.
inline double threshold_scale(const GraphParams& params) {
  return std::exp2(-static_cast<double>(params.n) / params.r) *
         std::pow(static_cast<double>(params.n), -params.k);
}

/// Bracket-and-bisect on log p for the 1/2 crossing of the success rate.
/// p_low always has rate <= 1/2 and p_high rate > 1/2.
inline PcResult find_pc(const GraphParams& params, std::uint64_t trials_per_eval, std::uint64_t seed,
                        Backend backend, double ratio_tol, int threads = 0) {
  detail::check_backend(params, backend);
  if (!(ratio_tol > 1.0)) throw ParameterError("ratio_tol must exceed 1");
  if (trials_per_eval == 0) throw ParameterError("trials_per_eval must be positive");
  if (params.k <= params.n && static_cast<std::uint64_t>(params.r) > ball_size(params.n, params.k)) {
    throw ParameterError("r exceeds the vertex degree; no vertex can ever be infected");
  }

  PcResult res;
  res.trials_per_eval = trials_per_eval;
  res.backend = backend;
  auto rate = [&](double p) {
    ++res.evals;
    return estimate_prob(params, p, trials_per_eval, seed, backend, threads).point;
  };

  double p = std::min(threshold_scale(params), 1.0);
  double rp = rate(p);
  if (rp > 0.5) {
    res.p_high = p;
    res.rate_high = rp;
    while (true) {
      p /= 2;
      if (p < 1e-300) throw std::runtime_error("find_pc: no lower bracket found");
      rp = rate(p);
      if (rp <= 0.5) break;
      res.p_high = p;
      res.rate_high = rp;
    }
    res.p_low = p;
    res.rate_low = rp;
  } else {
    res.p_low = p;
    res.rate_low = rp;
    while (true) {
      if (p >= 1.0) throw std::runtime_error("find_pc: success rate never exceeds 1/2");
      p = std::min(2 * p, 1.0);
      rp = rate(p);
      if (rp > 0.5) break;
      res.p_low = p;
      res.rate_low = rp;
    }
    res.p_high = p;
    res.rate_high = rp;
  }

  while (res.p_high / res.p_low > ratio_tol) {
    const double mid = std::sqrt(res.p_low * res.p_high);
    const double rm = rate(mid);
    if (rm > 0.5) {
      res.p_high = mid;
      res.rate_high = rm;
    } else {
      res.p_low = mid;
      res.rate_low = rm;
    }
  }
  res.p_hat = std::sqrt(res.p_low * res.p_high);
  return res;
}

/// One Estimate per grid point, all sharing the same seed (coupled samples).
inline std::vector<Estimate> sweep(const GraphParams& params, const std::vector<double>& p_grid,
                                   std::uint64_t trials, std::uint64_t seed, Backend backend,
                                   int threads = 0) {
  std::vector<Estimate> out;
  out.reserve(p_grid.size());
  for (double p : p_grid) out.push_back(estimate_prob(params, p, trials, seed, backend, threads));
  return out;
}

/// count points geometrically spaced over [lo, hi].
inline std::vector<double> log_grid(double lo, double hi, int count) {
  if (!(lo > 0 && hi >= lo) || count < 1) throw ParameterError("log_grid needs 0 < lo <= hi, count >= 1");
  std::vector<double> out;
  for (int i = 0; i < count; ++i) {
    const double t = count == 1 ? 0.0 : static_cast<double>(i) / (count - 1);
    out.push_back(lo * std::pow(hi / lo, t));
  }
  return out;
}

}  // namespace percq
