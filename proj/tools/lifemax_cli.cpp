// lifemax command line: gen, solve, sweep, compare.
//
// Exit codes: 0 ok, 1 internal, 2 usage / invalid input, 3 connectivity,
// 4 no convergence within max_iter, 5 numerical divergence.

#include <cstdio>
#include <cstdlib>
#include <iostream>
#include <memory>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "lifemax/lifemax.h"
#include "run_config.hpp"

namespace {

using lifemax::cli::RunConfig;

enum Exit { kOk = 0, kInternal = 1, kUsage = 2, kTopology = 3, kNoConvergence = 4, kDiverged = 5 };

int exit_for(lifemax_status s) {
  switch (s) {
    case LIFEMAX_OK: return kOk;
    case LIFEMAX_E_INVALID_PARAM:
    case LIFEMAX_E_PARSE:
    case LIFEMAX_E_IO: return kUsage;
    case LIFEMAX_E_CONNECTIVITY:
    case LIFEMAX_E_INFEASIBLE: return kTopology;
    case LIFEMAX_E_DIVERGENCE: return kDiverged;
    default: return kInternal;
  }
}

int report_error(lifemax_status s) {
  std::cerr << "error: " << lifemax_status_string(s);
  const std::string detail = lifemax_last_error();
  if (!detail.empty()) std::cerr << ": " << detail;
  std::cerr << '\n';
  return exit_for(s);
}

struct TopologyDeleter {
  void operator()(lifemax_topology* t) const { lifemax_topology_free(t); }
};
struct ResultDeleter {
  void operator()(lifemax_result* r) const { lifemax_result_free(r); }
};
struct SweepDeleter {
  void operator()(lifemax_sweep* s) const { lifemax_sweep_free(s); }
};
struct ComparisonDeleter {
  void operator()(lifemax_comparison* c) const { lifemax_comparison_free(c); }
};
using TopologyPtr = std::unique_ptr<lifemax_topology, TopologyDeleter>;
using ResultPtr = std::unique_ptr<lifemax_result, ResultDeleter>;
using SweepPtr = std::unique_ptr<lifemax_sweep, SweepDeleter>;
using ComparisonPtr = std::unique_ptr<lifemax_comparison, ComparisonDeleter>;

// Flag values; unset ones leave the config untouched.
struct Overrides {
  std::optional<std::string> config_path;
  bool print_config = false;

  std::optional<int> n;
  std::optional<double> radius, comm_range, alpha, beta, energy, gen_rate;
  std::optional<std::string> sink;
  std::optional<std::uint64_t> seed;
  std::optional<int> max_attempts;

  std::optional<std::string> algo, objective, init, step_rule, grid;
  std::optional<double> rho, eps, eps_dual, init_value, divergence_bound, step_a, step_b, gap_tol,
      target;
  std::optional<int> max_iter, subgrad_max_iter, stall_window, budget, jobs;
  bool no_early_stop = false;
  bool oracle = false;

  std::optional<std::string> out, report, trace, json;
  std::string topology_file;
};

void add_common(CLI::App* cmd, Overrides& o) {
  cmd->add_option("--config", o.config_path, "INI run config; flags override it");
  cmd->add_flag("--print-config", o.print_config, "Print the effective config and exit");
}

void add_topology_flags(CLI::App* cmd, Overrides& o) {
  cmd->add_option("--n", o.n, "Sensor count");
  cmd->add_option("--radius", o.radius, "Deployment disk radius");
  cmd->add_option("--comm-range", o.comm_range, "Link range");
  cmd->add_option("--sink", o.sink, "center | random");
  cmd->add_option("--alpha", o.alpha, "Electronics energy per bit");
  cmd->add_option("--beta", o.beta, "Amplifier energy per bit per length^2");
  cmd->add_option("--energy", o.energy, "Initial sensor energy");
  cmd->add_option("--gen-rate", o.gen_rate, "Sensor generation rate");
  cmd->add_option("--seed", o.seed, "Placement seed");
  cmd->add_option("--max-attempts", o.max_attempts, "Placement attempts before giving up");
}

void add_admm_flags(CLI::App* cmd, Overrides& o) {
  cmd->add_option("--rho", o.rho, "ADMM penalty");
  cmd->add_option("--eps", o.eps, "Primal residual tolerance");
  cmd->add_option("--eps-dual", o.eps_dual, "Dual residual tolerance");
  cmd->add_option("--max-iter", o.max_iter, "ADMM round cap");
  cmd->add_option("--objective", o.objective, "linear | quadratic");
  cmd->add_option("--init", o.init, "heuristic | zero | constant");
  cmd->add_option("--init-value", o.init_value, "q for --init constant, offset for heuristic");
  cmd->add_option("--divergence-bound", o.divergence_bound, "Magnitude treated as divergence");
  cmd->add_flag("--no-early-stop", o.no_early_stop, "Run every round up to the cap");
}

void add_subgrad_flags(CLI::App* cmd, Overrides& o) {
  cmd->add_option("--step-rule", o.step_rule, "harmonic | inverse_sqrt");
  cmd->add_option("--step-a", o.step_a, "Step numerator");
  cmd->add_option("--step-b", o.step_b, "Step offset");
  cmd->add_option("--subgrad-max-iter", o.subgrad_max_iter, "Subgradient iteration cap");
  cmd->add_option("--gap-tol", o.gap_tol, "Subgradient gap tolerance");
  cmd->add_option("--stall-window", o.stall_window, "Iterations of dual stall before stopping");
}

void add_topology_input(CLI::App* cmd, Overrides& o) {
  cmd->add_option("topology", o.topology_file,
                  "Topology JSON; generated from [topology] when omitted");
}

template <class T>
void put(std::optional<T>& flag, T& field) {
  if (flag) field = *flag;
}

// config file < LIFEMAX_SEED < flags
RunConfig effective_config(Overrides& o) {
  RunConfig c;
  if (o.config_path) c = lifemax::cli::load_config(*o.config_path);
  if (const char* env = std::getenv("LIFEMAX_SEED"); env && *env) {
    lifemax::cli::set_value(c, "topology", "seed", env);
  }
  auto& t = c.topology;
  put(o.n, t.n);
  put(o.radius, t.radius);
  put(o.comm_range, t.comm_range);
  if (o.sink) lifemax::cli::set_value(c, "topology", "sink", *o.sink);
  put(o.alpha, t.alpha);
  put(o.beta, t.beta);
  put(o.energy, t.energy);
  put(o.gen_rate, t.gen_rate);
  put(o.seed, t.seed);
  put(o.max_attempts, t.max_attempts);
  auto& s = c.solver;
  if (o.algo) lifemax::cli::set_value(c, "solver", "algorithm", *o.algo);
  if (o.objective) lifemax::cli::set_value(c, "solver", "objective", *o.objective);
  if (o.init) lifemax::cli::set_value(c, "solver", "init", *o.init);
  if (o.step_rule) lifemax::cli::set_value(c, "solver", "step_rule", *o.step_rule);
  if (o.grid) s.rho_grid = lifemax::cli::parse_grid(*o.grid);
  put(o.rho, s.rho);
  put(o.eps, s.eps);
  put(o.eps_dual, s.eps_dual);
  put(o.init_value, s.init_value);
  put(o.divergence_bound, s.divergence_bound);
  put(o.step_a, s.step_a);
  put(o.step_b, s.step_b);
  put(o.gap_tol, s.gap_tol);
  put(o.target, s.target);
  put(o.max_iter, s.max_iter);
  put(o.subgrad_max_iter, s.subgrad_max_iter);
  put(o.stall_window, s.stall_window);
  put(o.budget, s.budget);
  put(o.jobs, s.jobs);
  if (o.no_early_stop) s.early_stop = false;
  if (o.oracle) s.oracle = true;
  c.validate();
  return c;
}

lifemax_admm_config admm_config(const RunConfig& c) {
  lifemax_admm_config a;
  lifemax_admm_config_default(&a);
  const auto& s = c.solver;
  a.rho = s.rho;
  a.eps = s.eps;
  a.eps_dual = s.eps_dual;
  a.max_iter = s.max_iter;
  a.objective = s.objective == "quadratic" ? LIFEMAX_QUADRATIC : LIFEMAX_LINEAR;
  a.init = s.init == "zero"       ? LIFEMAX_INIT_ZERO
           : s.init == "constant" ? LIFEMAX_INIT_CONSTANT
                                  : LIFEMAX_INIT_HEURISTIC;
  a.init_value = s.init_value;
  a.divergence_bound = s.divergence_bound;
  a.early_stop = s.early_stop ? 1 : 0;
  return a;
}

lifemax_subgrad_config subgrad_config(const RunConfig& c) {
  lifemax_subgrad_config g;
  lifemax_subgrad_config_default(&g);
  const auto& s = c.solver;
  g.rule = s.step_rule == "inverse_sqrt" ? LIFEMAX_STEP_INVERSE_SQRT : LIFEMAX_STEP_HARMONIC;
  g.step_a = s.step_a;
  g.step_b = s.step_b;
  g.max_iter = s.subgrad_max_iter;
  g.eps = s.eps;
  g.gap_tol = s.gap_tol;
  g.stall_window = s.stall_window;
  g.divergence_bound = s.divergence_bound;
  g.early_stop = s.early_stop ? 1 : 0;
  return g;
}

lifemax_status build_topology(const RunConfig& c, TopologyPtr& out) {
  lifemax_gen_params p;
  lifemax_gen_params_default(&p);
  const auto& t = c.topology;
  p.sensors = t.n;
  p.radius = t.radius;
  p.comm_range = t.comm_range;
  p.sink_random = t.sink == "random" ? 1 : 0;
  p.seed = t.seed;
  p.alpha = t.alpha;
  p.beta = t.beta;
  p.energy = t.energy;
  p.gen_rate = t.gen_rate;
  p.max_attempts = t.max_attempts;
  lifemax_topology* raw = nullptr;
  const lifemax_status s = lifemax_topology_generate(&p, &raw);
  out.reset(raw);
  return s;
}

lifemax_status input_topology(const Overrides& o, const RunConfig& c, TopologyPtr& out) {
  if (o.topology_file.empty()) return build_topology(c, out);
  lifemax_topology* raw = nullptr;
  const lifemax_status s = lifemax_topology_load(o.topology_file.c_str(), &raw);
  out.reset(raw);
  return s;
}

int cmd_gen(Overrides& o, const RunConfig& c) {
  TopologyPtr topo;
  if (lifemax_status s = build_topology(c, topo); s != LIFEMAX_OK) return report_error(s);
  const std::string path = o.out.value_or(c.output.topology);
  if (lifemax_status s = lifemax_topology_save(topo.get(), path.c_str()); s != LIFEMAX_OK) {
    return report_error(s);
  }
  std::cout << "nodes=" << lifemax_topology_node_count(topo.get())
            << " edges=" << lifemax_topology_edge_count(topo.get())
            << " attempts=" << lifemax_topology_attempts(topo.get()) << " -> " << path << '\n';
  return kOk;
}

const char* status_name(lifemax_solve_status s) {
  switch (s) {
    case LIFEMAX_SOLVE_OPTIMAL: return "optimal";
    case LIFEMAX_SOLVE_CONVERGED: return "converged";
    case LIFEMAX_SOLVE_STALLED: return "stalled";
    case LIFEMAX_SOLVE_MAX_ITER: return "max_iter";
  }
  return "unknown";
}

int cmd_solve(Overrides& o, const RunConfig& c) {
  TopologyPtr topo;
  if (lifemax_status s = input_topology(o, c, topo); s != LIFEMAX_OK) return report_error(s);

  const std::string& algo = c.solver.algorithm;
  lifemax_result* raw = nullptr;
  lifemax_status s = LIFEMAX_OK;
  if (algo == "lp") {
    s = lifemax_solve_lp(topo.get(), &raw);
  } else if (algo == "admm") {
    const lifemax_admm_config a = admm_config(c);
    s = lifemax_solve_admm(topo.get(), &a, &raw);
  } else {
    const lifemax_subgrad_config g = subgrad_config(c);
    s = lifemax_solve_subgrad(topo.get(), &g, c.solver.oracle ? 1 : 0, &raw);
  }
  ResultPtr result(raw);
  if (s != LIFEMAX_OK) return report_error(s);

  if (algo == "admm" && c.solver.oracle) {
    lifemax_result* lp = nullptr;
    if (lifemax_status ls = lifemax_solve_lp(topo.get(), &lp); ls != LIFEMAX_OK) {
      return report_error(ls);
    }
    ResultPtr lp_result(lp);
    lifemax_result_attach_oracle(result.get(), lifemax_result_q(lp_result.get()));
  }

  const std::string report = o.report.value_or(c.output.report);
  if (lifemax_status ws = lifemax_result_write_report(result.get(), report.c_str());
      ws != LIFEMAX_OK) {
    return report_error(ws);
  }
  if (algo != "lp") {
    const std::string trace = o.trace.value_or(c.output.trace);
    if (lifemax_status ws = lifemax_result_write_trace(result.get(), trace.c_str());
        ws != LIFEMAX_OK) {
      return report_error(ws);
    }
  }

  const lifemax_solve_status st = lifemax_result_status(result.get());
  std::cout << "algo=" << algo << " status=" << status_name(st)
            << " iterations=" << lifemax_result_iterations(result.get())
            << " q=" << lifemax::cli::format_double(lifemax_result_q(result.get()))
            << " lifetime=" << lifemax::cli::format_double(lifemax_result_lifetime(result.get()));
  if (double gap = 0.0; lifemax_result_gap(result.get(), &gap)) {
    std::cout << " gap=" << lifemax::cli::format_double(gap);
  }
  std::cout << '\n';
  return st == LIFEMAX_SOLVE_OPTIMAL || st == LIFEMAX_SOLVE_CONVERGED ? kOk : kNoConvergence;
}

int cmd_sweep(Overrides& o, const RunConfig& c) {
  TopologyPtr topo;
  if (lifemax_status s = input_topology(o, c, topo); s != LIFEMAX_OK) return report_error(s);
  const lifemax_admm_config base = admm_config(c);
  const auto& grid = c.solver.rho_grid;
  lifemax_sweep* raw = nullptr;
  const lifemax_status s = lifemax_rho_sweep(topo.get(), grid.data(), grid.size(), c.solver.budget,
                                             &base, c.solver.jobs, &raw);
  SweepPtr sweep(raw);
  if (s != LIFEMAX_OK) return report_error(s);
  const std::string path = o.out.value_or(c.output.sweep);
  if (lifemax_status ws = lifemax_sweep_write_csv(sweep.get(), path.c_str()); ws != LIFEMAX_OK) {
    return report_error(ws);
  }
  const int best = lifemax_sweep_best(sweep.get());
  std::size_t failed = 0;
  for (std::size_t i = 0; i < lifemax_sweep_size(sweep.get()); ++i) {
    failed += static_cast<std::size_t>(lifemax_sweep_failed(sweep.get(), i));
  }
  if (best < 0) {
    std::cerr << "error: every rho diverged\n";
    return kDiverged;
  }
  std::cout << "cells=" << grid.size() << " failed=" << failed << " best_rho="
            << lifemax::cli::format_double(lifemax_sweep_rho(sweep.get(), static_cast<std::size_t>(best)))
            << " gap="
            << lifemax::cli::format_double(lifemax_sweep_gap(sweep.get(), static_cast<std::size_t>(best)))
            << " -> " << path << '\n';
  return kOk;
}

int cmd_compare(Overrides& o, const RunConfig& c) {
  TopologyPtr topo;
  if (lifemax_status s = input_topology(o, c, topo); s != LIFEMAX_OK) return report_error(s);
  const lifemax_admm_config a = admm_config(c);
  const lifemax_subgrad_config g = subgrad_config(c);
  lifemax_comparison* raw = nullptr;
  const lifemax_status s = lifemax_compare(topo.get(), &a, &g, c.solver.target, &raw);
  ComparisonPtr cmp(raw);
  if (s != LIFEMAX_OK) return report_error(s);
  const std::string csv = o.out.value_or(c.output.compare);
  const std::string json = o.json.value_or(c.output.compare_json);
  if (lifemax_status ws = lifemax_comparison_write_csv(cmp.get(), csv.c_str()); ws != LIFEMAX_OK) {
    return report_error(ws);
  }
  if (lifemax_status ws = lifemax_comparison_write_json(cmp.get(), json.c_str());
      ws != LIFEMAX_OK) {
    return report_error(ws);
  }
  auto iters = [](int v) { return v < 0 ? std::string("none") : std::to_string(v); };
  std::cout << "admm_to_target=" << iters(lifemax_comparison_admm_iterations(cmp.get()))
            << " subgrad_to_target=" << iters(lifemax_comparison_subgrad_iterations(cmp.get()));
  double ratio = 0.0;
  int lower = 0;
  if (lifemax_comparison_ratio(cmp.get(), &ratio, &lower)) {
    std::cout << " ratio=" << (lower ? ">=" : "") << lifemax::cli::format_double(ratio);
  }
  std::printf(" admm_wall=%.3fs subgrad_wall=%.3fs\n", lifemax_comparison_admm_seconds(cmp.get()),
              lifemax_comparison_subgrad_seconds(cmp.get()));
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Sensor-network lifetime maximisation: LP oracle, distributed ADMM, subgradient"};
  app.require_subcommand(1);
  Overrides o;

  CLI::App* gen = app.add_subcommand("gen", "Generate a random connected topology");
  add_common(gen, o);
  add_topology_flags(gen, o);
  gen->add_option("-o,--output", o.out, "Topology JSON path");

  CLI::App* solve = app.add_subcommand("solve", "Run one solver");
  add_common(solve, o);
  add_topology_input(solve, o);
  add_topology_flags(solve, o);
  solve->add_option("--algo", o.algo, "lp | admm | subgrad");
  add_admm_flags(solve, o);
  add_subgrad_flags(solve, o);
  solve->add_flag("--oracle", o.oracle, "Attach the LP optimum and gap to the report");
  solve->add_option("--report", o.report, "Report JSON path");
  solve->add_option("--trace", o.trace, "Trace CSV path");

  CLI::App* sweep = app.add_subcommand("sweep", "Fixed-budget ADMM runs over a rho grid");
  add_common(sweep, o);
  add_topology_input(sweep, o);
  add_topology_flags(sweep, o);
  add_admm_flags(sweep, o);
  sweep->add_option("--grid", o.grid, "Comma-separated rho values");
  sweep->add_option("--budget", o.budget, "Rounds per cell");
  sweep->add_option("--jobs", o.jobs, "Parallel cells");
  sweep->add_option("-o,--output", o.out, "Sweep CSV path");

  CLI::App* cmp = app.add_subcommand("compare", "ADMM against the subgradient baseline");
  add_common(cmp, o);
  add_topology_input(cmp, o);
  add_topology_flags(cmp, o);
  add_admm_flags(cmp, o);
  add_subgrad_flags(cmp, o);
  cmp->add_option("--target", o.target, "Relative oracle gap both solvers must reach");
  cmp->add_option("-o,--output", o.out, "Comparison CSV path");
  cmp->add_option("--json", o.json, "Comparison summary JSON path");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kUsage;
  }

  RunConfig config;
  try {
    config = effective_config(o);
  } catch (const lifemax::cli::ConfigError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kUsage;
  }
  if (o.print_config) {
    std::cout << lifemax::cli::to_ini(config);
    return kOk;
  }

  try {
    if (*gen) return cmd_gen(o, config);
    if (*solve) return cmd_solve(o, config);
    if (*sweep) return cmd_sweep(o, config);
    return cmd_compare(o, config);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kInternal;
  }
}
