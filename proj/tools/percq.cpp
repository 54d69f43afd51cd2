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

// percq: command-line driver for bootstrap percolation on Q_{n,k}.
//
// Exit status: 0 success, 1 verification failure or I/O error, 2 usage,
// parameter or capacity error.

#include <CLI11.hpp>

#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "percq/construct.hpp"
#include "percq/cube.hpp"
#include "percq/engine.hpp"
#include "percq/io.hpp"
#include "percq/mc.hpp"
#include "percq/oracle.hpp"
#include "percq/solver.hpp"
#include "percq/verify.hpp"

namespace {

using namespace percq;

constexpr int kExitOk = 0;
constexpr int kExitFailed = 1;
constexpr int kExitUsage = 2;

class UsageError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

struct Config {
  int n = 0;
  std::vector<int> ks;
  int r = 0;
  std::vector<std::string> set;
  std::string set_file;
  std::optional<double> p;
  std::string p_grid;
  std::uint64_t trials = 1000;
  std::uint64_t seed = kDefaultSeed;
  std::string backend = "engine";
  std::string construction;
  std::string mode = "subcube";
  int m_max = 0;
  std::string format;
  std::string out;
  int threads = 0;
  double ratio_tol = 1.1;
  std::optional<int> n_min;
  std::optional<int> n_max;
  std::string suite = "all";
  std::uint64_t random_sets = 10'000;
  bool final_set = false;
  int n_prime = 2;
  double c = 0.5;
  double ell = 1.0;
  std::uint64_t max_nodes = SolverOptions{}.max_nodes;
};

int single_k(const Config& cfg) {
  if (cfg.ks.size() != 1) throw UsageError("--k takes exactly one value here");
  return cfg.ks.front();
}

GraphParams graph(const Config& cfg) {
  if (cfg.n == 0 || cfg.ks.empty() || cfg.r == 0) throw UsageError("--n, --k and --r are required");
  GraphParams params{cfg.n, single_k(cfg), cfg.r};
  params.validate();
  return params;
}

Format format_or(const Config& cfg, Format fallback) {
  return cfg.format.empty() ? fallback : parse_format(cfg.format);
}

std::vector<std::string> set_tokens(const Config& cfg) {
  std::vector<std::string> tokens = cfg.set;
  if (!cfg.set_file.empty()) {
    std::ifstream file(cfg.set_file);
    if (!file) throw UsageError("cannot read --set-file '" + cfg.set_file + "'");
    std::string line;
    while (std::getline(file, line)) {
      const auto first = line.find_first_not_of(" \t\r");
      if (first == std::string::npos || line[first] == '#') continue;
      const auto last = line.find_last_not_of(" \t\r");
      tokens.push_back(line.substr(first, last - first + 1));
    }
  }
  if (tokens.empty()) throw UsageError("an initial set is required (--set or --set-file)");
  return tokens;
}

std::vector<Vertex> parse_set(const Config& cfg, int n) {
  std::vector<Vertex> out;
  for (const auto& t : set_tokens(cfg)) out.push_back(parse_vertex(t, n));
  return out;
}

int run_simulate(const Config& cfg) {
  const GraphParams params = graph(cfg);
  params.require_dense();
  const auto vertices = parse_set(cfg, params.n);
  const ProcessResult res = closure(VertexSet::of(params.n, vertices), params);
  emit(to_record(res, cfg.final_set), format_or(cfg, Format::json), cfg.out);
  return kExitOk;
}

int run_oracle_check(const Config& cfg) {
  const GraphParams params = graph(cfg);
  if (params.r != 2 && params.r != 3) throw UsageError("oracle-check covers r = 2 and r = 3");
  const auto vertices = parse_set(cfg, params.n);
  const SparsePointList pts = to_points(params.n, vertices);
  const bool predicted = params.r == 2 ? pair_condition(pts, params.k) : triple_condition(pts, params.k);

  Record rec;
  rec.add("n", std::int64_t{params.n})
      .add("k", std::int64_t{params.k})
      .add("r", std::int64_t{params.r})
      .add("oracle", predicted);
  bool agree = true;
  if (params.n <= max_dense_dimension()) {
    const bool engine = percolates(VertexSet::of(params.n, vertices), params);
    agree = engine == predicted;
    rec.add("engine", engine).add("agree", agree);
  } else {
    rec.add("engine", nullptr).add("agree", nullptr);
  }
  emit(rec, format_or(cfg, Format::json), cfg.out);
  return agree ? kExitOk : kExitFailed;
}

int run_pc(const Config& cfg) {
  const GraphParams params = graph(cfg);
  const PcResult pc = find_pc(params, cfg.trials, cfg.seed, parse_backend(cfg.backend), cfg.ratio_tol,
                              resolve_threads(cfg.threads));
  emit(pc_record(params, pc, cfg.seed), format_or(cfg, Format::json), cfg.out);
  return kExitOk;
}

// "a,b,c" or "log:lo:hi:count".
std::vector<double> parse_grid(const std::string& text) {
  std::vector<double> out;
  std::vector<std::string> parts;
  const bool log_form = text.rfind("log:", 0) == 0;
  std::stringstream ss(log_form ? text.substr(4) : text);
  for (std::string part; std::getline(ss, part, log_form ? ':' : ',');) parts.push_back(part);
  try {
    if (log_form) {
      if (parts.size() != 3) throw UsageError("--p-grid log form is log:lo:hi:count");
      return log_grid(std::stod(parts[0]), std::stod(parts[1]), std::stoi(parts[2]));
    }
    for (const auto& part : parts) out.push_back(std::stod(part));
  } catch (const std::logic_error& e) {
    if (dynamic_cast<const ParameterError*>(&e)) throw;
    throw UsageError("cannot parse --p-grid '" + text + "'");
  }
  return out;
}

int run_sweep(const Config& cfg) {
  const GraphParams params = graph(cfg);
  std::vector<double> grid;
  if (!cfg.p_grid.empty()) grid = parse_grid(cfg.p_grid);
  if (cfg.p) grid.push_back(*cfg.p);
  if (grid.empty()) throw UsageError("sweep needs --p or --p-grid");
  const Backend backend = parse_backend(cfg.backend);
  const auto rows = sweep(params, grid, cfg.trials, cfg.seed, backend, resolve_threads(cfg.threads));
  emit(estimate_table(params, backend, rows, cfg.seed), format_or(cfg, Format::csv), cfg.out);
  return kExitOk;
}

int run_construct(const Config& cfg) {
  const GraphParams params = graph(cfg);
  params.require_dense();
  const std::string& name = cfg.construction;
  Record rec;
  rec.add("construction", name)
      .add("n", std::int64_t{params.n})
      .add("k", std::int64_t{params.k})
      .add("r", std::int64_t{params.r});

  if (name == "blocker") {
    const BlockerSpec spec = default_blocker_spec(cfg.n_prime, cfg.c, cfg.ell);
    const bool feasible = blocker_feasible(params.n, spec, params.k, params.r);
    rec.add("n_prime", std::int64_t{cfg.n_prime}).add("feasible", feasible);
    if (!feasible) {
      emit(rec, format_or(cfg, Format::json), cfg.out);
      return kExitFailed;
    }
    const BlockerSets sets = blocker_construct(params.n, spec, params);
    const bool certified = check_stall_certificate(sets.healthy, params);
    const ProcessResult res = closure(sets.infected, params);
    const bool stalls = res.final_set == sets.infected;
    rec.add("infected", sets.infected.size())
        .add("healthy", sets.healthy.size())
        .add("certificate", certified)
        .add("stalls", stalls);
    emit(rec, format_or(cfg, Format::json), cfg.out);
    return certified && stalls ? kExitOk : kExitFailed;
  }

  VertexSet a0;
  std::optional<bool> conditions;
  if (name == "subcube") {
    a0 = subcube_seed(params.r, params);
  } else if (name == "small-r") {
    a0 = small_r_set(params.r, params);
  } else if (name == "fixed") {
    a0 = fixed_small_sets(params.r, params.n);
  } else if (name == "layer-subcube" || name == "layer-fullcube") {
    const LayerMode mode = name == "layer-subcube" ? LayerMode::subcube : LayerMode::fullcube;
    a0 = layer_seed(params.r, params, mode);
    conditions = layer_conditions(params.r, params, mode);
  } else if (name == "weight1") {
    a0 = weight_one_seed(params.r, params);
  } else {
    throw UsageError("unknown --construction '" + name + "'");
  }
  const ProcessResult res = closure(a0, params);
  rec.add("size", a0.size()).add("percolated", res.percolated).add("generations", res.generations);
  if (conditions) rec.add("layer_conditions", *conditions);
  const auto members = a0.members();
  rec.add("members", vertex_strings(members, params.n));
  emit(rec, format_or(cfg, Format::json), cfg.out);
  return res.percolated ? kExitOk : kExitFailed;
}

int run_minset(const Config& cfg) {
  const GraphParams params = graph(cfg);
  const int m_max = cfg.m_max > 0 ? cfg.m_max : params.r;
  const MinSetResult res = min_contagious_exact(params, m_max, SolverOptions{cfg.max_nodes});
  emit(minset_record(res, params.n), format_or(cfg, Format::json), cfg.out);
  return kExitOk;
}

int run_verify(const Config& cfg) {
  VerifyOptions opt;
  opt.n_min = cfg.n_min;
  opt.n_max = cfg.n_max;
  opt.ks = cfg.ks;
  opt.random_sets = cfg.random_sets;
  opt.seed = cfg.seed;
  std::vector<std::string> suites;
  if (cfg.suite == "all") suites = suite_names();
  else suites.push_back(cfg.suite);

  std::ostringstream text;
  bool all_passed = true;
  for (const auto& name : suites) {
    const SuiteReport rep = run_suite(name, opt);
    for (const auto& line : rep.lines) {
      text << (line.passed ? "PASS " : "FAIL ") << rep.suite << ": " << line.name;
      if (!line.detail.empty()) text << " (" << line.detail << ")";
      text << "\n";
    }
    text << (rep.passed() ? "PASS " : "FAIL ") << rep.suite << "\n";
    all_passed = all_passed && rep.passed();
  }
  write_text(text.str(), cfg.out);
  return all_passed ? kExitOk : kExitFailed;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Bootstrap percolation on Q_{n,k}: simulation, oracles, constructions, thresholds"};
  app.require_subcommand(1);
  Config cfg;

  auto add_graph = [&](CLI::App* sub) {
    sub->add_option("--n", cfg.n, "dimension");
    sub->add_option("--k", cfg.ks, "neighborhood radius")->delimiter(',');
    sub->add_option("--r", cfg.r, "infection threshold");
  };
  auto add_output = [&](CLI::App* sub) {
    sub->add_option("--format", cfg.format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
    sub->add_option("--out", cfg.out, "output path (default stdout)");
  };
  auto add_set = [&](CLI::App* sub) {
    sub->add_option("--set", cfg.set, "comma-separated vertices")->delimiter(',');
    sub->add_option("--set-file", cfg.set_file, "file with one vertex per line");
  };
  auto add_mc = [&](CLI::App* sub) {
    sub->add_option("--trials", cfg.trials, "trials per evaluation");
    sub->add_option("--seed", cfg.seed, "master seed");
    sub->add_option("--backend", cfg.backend, "engine or oracle")->check(CLI::IsMember({"engine", "oracle"}));
    sub->add_option("--threads", cfg.threads, "worker threads (default PERCQ_THREADS or 1)");
  };

  auto* simulate = app.add_subcommand("simulate", "run the process from an initial set");
  add_graph(simulate);
  add_set(simulate);
  add_output(simulate);
  simulate->add_flag("--final-set", cfg.final_set, "include the final infected set");

  auto* oracle_check = app.add_subcommand("oracle-check", "evaluate the r = 2 / r = 3 oracle");
  add_graph(oracle_check);
  add_set(oracle_check);
  add_output(oracle_check);

  auto* pc = app.add_subcommand("pc", "estimate the critical probability");
  add_graph(pc);
  add_mc(pc);
  add_output(pc);
  pc->add_option("--ratio-tol", cfg.ratio_tol, "stop when p_high / p_low is at most this");

  auto* sweep_cmd = app.add_subcommand("sweep", "percolation probability over a p grid");
  add_graph(sweep_cmd);
  add_mc(sweep_cmd);
  add_output(sweep_cmd);
  sweep_cmd->add_option("--p", cfg.p, "single probability");
  sweep_cmd->add_option("--p-grid", cfg.p_grid, "comma list or log:lo:hi:count");

  auto* construct = app.add_subcommand("construct", "build and check an explicit construction");
  add_graph(construct);
  add_output(construct);
  construct
      ->add_option("--construction", cfg.construction, "construction name")
      ->required()
      ->check(CLI::IsMember({"subcube", "small-r", "fixed", "layer-subcube", "layer-fullcube", "weight1",
                             "blocker"}));
  construct->add_option("--mode", cfg.mode, "layer mode for --construction layer")
      ->check(CLI::IsMember({"subcube", "fullcube"}));
  construct->add_option("--n-prime", cfg.n_prime, "blocker pattern width");
  construct->add_option("--c", cfg.c, "blocker budget constant");
  construct->add_option("--ell", cfg.ell, "blocker budget exponent");

  auto* minset = app.add_subcommand("minset", "exact minimum contagious set search");
  add_graph(minset);
  add_output(minset);
  minset->add_option("--m-max", cfg.m_max, "largest size to search (default r)");
  minset->add_option("--max-nodes", cfg.max_nodes, "candidate budget");

  auto* verify = app.add_subcommand("verify", "run a verification suite");
  verify->add_option("--k", cfg.ks, "radii to test")->delimiter(',');
  verify->add_option("--suite", cfg.suite, "suite name or all")
      ->check(CLI::IsMember({"all", "oracle-r2", "oracle-r3", "constructions", "counterexample-r4", "blocker",
                             "m16-stall"}));
  verify->add_option("--n-min", cfg.n_min, "smallest dimension");
  verify->add_option("--n-max", cfg.n_max, "largest dimension");
  verify->add_option("--random-sets", cfg.random_sets, "random sets per (n, k)");
  verify->add_option("--seed", cfg.seed, "seed for random sets");
  verify->add_option("--out", cfg.out, "report path (default stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (*simulate) return run_simulate(cfg);
    if (*oracle_check) return run_oracle_check(cfg);
    if (*pc) return run_pc(cfg);
    if (*sweep_cmd) return run_sweep(cfg);
    if (*construct) {
      // --mode selects the layer variant when the name is given without it.
      Config c = cfg;
      if (c.construction == "layer-subcube" || c.construction == "layer-fullcube") {
        if (construct->count("--mode")) c.construction = "layer-" + cfg.mode;
      }
      return run_construct(c);
    }
    if (*minset) return run_minset(cfg);
    if (*verify) return run_verify(cfg);
  } catch (const OutputError& e) {
    std::cerr << "percq: " << e.what() << "\n";
    return kExitFailed;
  } catch (const CapacityError& e) {
    std::cerr << "percq: capacity: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::invalid_argument& e) {  // ParameterError, UsageError
    std::cerr << "percq: " << e.what() << "\n";
    return kExitUsage;
  } catch (const NoBoundApplicable& e) {
    std::cerr << "percq: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "percq: error: " << e.what() << "\n";
    return kExitFailed;
  }
  return kExitUsage;
}
