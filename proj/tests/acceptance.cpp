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


// End-to-end acceptance run. Prints one [PASS]/[FAIL] line per criterion
// and exits nonzero if any fails. Pass criterion numbers as arguments to
// run a subset; --verbose prints every sub-check.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "percq/io.hpp"
#include "percq/mc.hpp"
#include "percq/solver.hpp"
#include "percq/verify.hpp"

namespace {

using namespace percq;

bool g_verbose = false;

struct Outcome {
  bool passed = false;
  std::string summary;
};

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

std::string fixed(double x, int digits = 3) {
  std::ostringstream os;
  os.precision(digits);
  os << x;
  return os.str();
}

Outcome from_suite(const SuiteReport& rep) {
  std::size_t failed = 0;
  for (const auto& line : rep.lines) {
    if (!line.passed) ++failed;
    if (g_verbose || !line.passed) {
      std::cout << "    " << (line.passed ? "ok   " : "FAIL ") << line.name << " (" << line.detail << ")\n";
    }
  }
  return {rep.passed(), std::to_string(rep.lines.size()) + " checks, " + std::to_string(failed) + " failed"};
}

Outcome criterion_solver() {
  struct Case {
    int n, k, r;
  };
  std::vector<Case> cases;
  for (int r = 2; r <= 6; ++r) {
    for (int n = std::max(r, 5); n <= 8; ++n) cases.push_back({n, 2, r});
  }
  for (int r = 2; r <= 4; ++r) {
    for (int n = 5; n <= 8; ++n) cases.push_back({n, 3, r});
  }
  int ok = 0;
  for (const Case& c : cases) {
    const MinSetResult res = min_contagious_exact({c.n, c.k, c.r}, c.r);
    const bool pass = res.m && *res.m == c.r;
    ok += pass ? 1 : 0;
    if (g_verbose || !pass) {
      std::cout << "    " << (pass ? "ok   " : "FAIL ") << "n=" << c.n << " k=" << c.k << " r=" << c.r
                << " m=" << (res.m ? std::to_string(*res.m) : "none") << " exhausted_to=" << res.exhausted_to
                << " nodes=" << res.nodes_searched << " " << fixed(res.seconds) << "s\n";
    }
  }
  return {ok == static_cast<int>(cases.size()),
          std::to_string(ok) + "/" + std::to_string(cases.size()) + " instances return m = r"};
}

// ---------------------------------------------------------------------------
// Monte Carlo criteria

constexpr std::uint64_t kTrials = 10'000;
constexpr double kRatioTol = 1.05;
constexpr std::uint64_t kSeed = kDefaultSeed;

struct PcRun {
  GraphParams params;
  Backend backend;
  PcResult pc;
};

std::vector<PcRun> run_pc_schedule(int threads) {
  std::vector<std::pair<GraphParams, Backend>> plan;
  for (int n : {12, 14, 16, 18}) {
    if (n <= 14) plan.push_back({{n, 2, 2}, Backend::engine});
    plan.push_back({{n, 2, 2}, Backend::oracle});
  }
  for (int n : {12, 14}) {
    plan.push_back({{n, 2, 3}, Backend::engine});
    plan.push_back({{n, 2, 3}, Backend::oracle});
  }
  std::vector<PcRun> out;
  for (const auto& [params, backend] : plan) {
    const auto t0 = std::chrono::steady_clock::now();
    PcRun run{params, backend, find_pc(params, kTrials, kSeed, backend, kRatioTol, threads)};
    if (g_verbose) {
      std::cout << "    threads=" << threads << " n=" << params.n << " r=" << params.r << " "
                << to_string(backend) << " p_hat=" << run.pc.p_hat << " evals=" << run.pc.evals << " "
                << fixed(seconds_since(t0)) << "s\n";
    }
    out.push_back(run);
  }
  return out;
}

std::string pc_csv(const std::vector<PcRun>& runs) {
  Table t;
  for (const auto& run : runs) t.rows.push_back(pc_record(run.params, run.pc, kSeed));
  for (const auto& f : t.rows.front().fields) t.columns.push_back(f.first);
  return to_csv(t);
}

double normalized(const PcRun& run) {
  return run.pc.p_hat * std::exp2(static_cast<double>(run.params.n) / run.params.r) *
         std::pow(static_cast<double>(run.params.n), run.params.k);
}

double spread(const std::vector<double>& xs) {
  const auto [lo, hi] = std::minmax_element(xs.begin(), xs.end());
  return *hi / *lo;
}

const PcRun* find_run(const std::vector<PcRun>& runs, int n, int r, Backend b) {
  for (const auto& run : runs) {
    if (run.params.n == n && run.params.r == r && run.backend == b) return &run;
  }
  return nullptr;
}

Outcome criterion_scaling(const std::vector<PcRun>& runs) {
  bool ok = true;
  std::ostringstream os;
  for (const auto& run : runs) {
    const double v = normalized(run);
    const bool in = v >= 0.05 && v <= 20;
    ok = ok && in;
    if (g_verbose || !in) {
      std::cout << "    " << (in ? "ok   " : "FAIL ") << "n=" << run.params.n << " r=" << run.params.r << " "
                << to_string(run.backend) << " p_hat=" << run.pc.p_hat << " normalized=" << v << "\n";
    }
  }
  // Normalizing must tighten the r = 2 sequence for each backend.
  for (Backend b : {Backend::oracle, Backend::engine}) {
    std::vector<double> raw, norm;
    for (const auto& run : runs) {
      if (run.params.r == 2 && run.backend == b) {
        raw.push_back(run.pc.p_hat);
        norm.push_back(normalized(run));
      }
    }
    const bool tighter = spread(norm) < spread(raw);
    ok = ok && tighter;
    os << to_string(b) << " r=2 spread normalized " << fixed(spread(norm)) << " vs raw " << fixed(spread(raw))
       << "; ";
    if (!tighter) std::cout << "    FAIL " << to_string(b) << " normalization does not tighten spread\n";
  }
  std::vector<double> all;
  for (const auto& run : runs) all.push_back(normalized(run));
  const auto [lo, hi] = std::minmax_element(all.begin(), all.end());
  os << "normalized values in [" << fixed(*lo) << ", " << fixed(*hi) << "]";
  return {ok, os.str()};
}

Outcome criterion_cross_validation(const std::vector<PcRun>& runs) {
  bool ok = true;
  std::ostringstream os;
  for (int r : {2, 3}) {
    const PcRun* e = find_run(runs, 12, r, Backend::engine);
    const PcRun* o = find_run(runs, 12, r, Backend::oracle);
    const double ratio = e->pc.p_hat / o->pc.p_hat;
    const bool in = ratio >= 0.8 && ratio <= 1.25;
    ok = ok && in;
    os << "r=" << r << " engine/oracle=" << fixed(ratio, 4) << (r == 2 ? "; " : "");
  }
  return {ok, os.str()};
}

Outcome criterion_determinism(const std::string& reference_csv) {
  const auto dir = std::filesystem::temp_directory_path() / "percq_acceptance";
  std::filesystem::create_directories(dir);
  std::map<int, std::string> bytes;
  bytes[1] = reference_csv;
  for (int threads : {2, 8}) bytes[threads] = pc_csv(run_pc_schedule(threads));
  // Round-trip through files, as the CLI would write them.
  for (auto& [threads, text] : bytes) {
    const auto path = (dir / ("pc_threads_" + std::to_string(threads) + ".csv")).string();
    write_text(text, path);
    std::ifstream in(path, std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    text = ss.str();
  }
  std::filesystem::remove_all(dir);
  const bool same = bytes[1] == bytes[2] && bytes[1] == bytes[8];
  return {same, std::string(same ? "identical" : "different") + " CSV bytes under 1, 2 and 8 threads (" +
                    std::to_string(bytes[1].size()) + " bytes)"};
}

}  // namespace

int main(int argc, char** argv) {
  std::set<int> selected;
  for (int i = 1; i < argc; ++i) {
    const std::string arg = argv[i];
    if (arg == "--verbose" || arg == "-v") g_verbose = true;
    else selected.insert(std::atoi(arg.c_str()));
  }
  auto want = [&](int c) { return selected.empty() || selected.count(c) > 0; };

  int failures = 0;
  auto report = [&](int id, const std::string& title, auto&& body) {
    if (!want(id)) return;
    const auto t0 = std::chrono::steady_clock::now();
    Outcome out;
    try {
      out = body();
    } catch (const std::exception& e) {
      out = {false, std::string("exception: ") + e.what()};
    }
    failures += out.passed ? 0 : 1;
    std::cout << (out.passed ? "[PASS] " : "[FAIL] ") << id << ". " << title << ": " << out.summary << " ("
              << fixed(seconds_since(t0)) << "s)" << std::endl;
  };

  report(1, "oracle equivalence r=2", [] { return from_suite(verify_oracle_r2()); });
  report(2, "oracle equivalence r=3", [] { return from_suite(verify_oracle_r3()); });
  report(3, "r>=4 counterexample stalls", [] { return from_suite(verify_counterexample_r4()); });
  report(4, "constructions percolate", [] { return from_suite(verify_constructions()); });
  report(5, "k=2 r=16 layer stall", [] { return from_suite(verify_m16_stall()); });
  report(6, "blocker certificate", [] { return from_suite(verify_blocker()); });
  report(7, "exact solver m = r", [] { return criterion_solver(); });

  if (want(8) || want(9) || want(10)) {
    std::vector<PcRun> runs;
    std::string csv;
    double base_seconds = 0;
    try {
      const auto t0 = std::chrono::steady_clock::now();
      runs = run_pc_schedule(1);
      base_seconds = seconds_since(t0);
      csv = pc_csv(runs);
    } catch (const std::exception& e) {
      std::cout << "    find_pc failed: " << e.what() << "\n";
    }
    auto guarded = [&](auto&& f) {
      return [&, f] { return runs.empty() ? Outcome{false, "no find_pc results"} : f(); };
    };
    std::cout << "    find_pc schedule: " << runs.size() << " runs, " << fixed(base_seconds) << "s\n";
    report(8, "critical probability scaling", guarded([&] { return criterion_scaling(runs); }));
    report(9, "engine/oracle cross-validation", guarded([&] { return criterion_cross_validation(runs); }));
    report(10, "thread-count determinism", guarded([&] { return criterion_determinism(csv); }));
  }

  std::cout << (failures == 0 ? "all selected criteria passed" : std::to_string(failures) + " criteria failed")
            << std::endl;
  return failures == 0 ? 0 : 1;
}
