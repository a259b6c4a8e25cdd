#include "lifemax/harness.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <limits>
#include <thread>

#include "lifemax/error.hpp"

namespace lifemax {

MessageLedger count_messages(const Topology& topo, int rounds, int floats_per_bundle) {
  if (rounds < 0) throw Error(ErrorCode::InvalidParam, "rounds must be >= 0");
  MessageLedger ledger;
  const auto k = static_cast<std::uint64_t>(rounds);
  ledger.rounds = rounds;
  ledger.per_round = bundles_per_round(topo);
  ledger.total = ledger.per_round * k;
  ledger.per_node.resize(topo.node_count());
  for (std::size_t i = 0; i < topo.node_count(); ++i) {
    ledger.per_node[i] = static_cast<std::uint64_t>(topo.degree(static_cast<int>(i))) * k;
  }
  ledger.floats_per_bundle = floats_per_bundle;
  ledger.total_floats = ledger.total * static_cast<std::uint64_t>(std::max(floats_per_bundle, 0));
  return ledger;
}

namespace {

SweepCell run_cell(const Topology& topo, double rho, int budget, const AdmmConfig& base,
                   double q_star) {
  SweepCell cell;
  cell.rho = rho;
  AdmmConfig config = base;
  config.rho = rho;
  config.max_iter = budget;
  config.early_stop = false;
  try {
    const AdmmResult run = run_admm(topo, config);
    cell.gap = std::abs(run.report.q_estimate - q_star);
    cell.primal_norm = run.report.residuals.primal_norm;
    cell.dual_norm = run.report.residuals.dual_norm;
    cell.iterations = run.report.iterations;
  } catch (const Error& e) {
    cell.failed = true;
    cell.error = e.what();
  }
  return cell;
}

void normalize(std::vector<SweepCell>& cells, double SweepCell::*value, double SweepCell::*out) {
  double lo = std::numeric_limits<double>::infinity();
  double hi = -lo;
  for (const SweepCell& c : cells) {
    if (c.failed) continue;
    lo = std::min(lo, c.*value);
    hi = std::max(hi, c.*value);
  }
  for (SweepCell& c : cells) {
    if (c.failed) {
      c.*out = std::numeric_limits<double>::quiet_NaN();
    } else {
      c.*out = hi > lo ? (c.*value - lo) / (hi - lo) : 0.0;
    }
  }
}

}  // namespace

SweepResult rho_sweep(const Topology& topo, std::span<const double> grid, int budget,
                      const AdmmConfig& base, double q_star, int jobs) {
  if (grid.empty()) throw Error(ErrorCode::InvalidParam, "rho grid is empty");
  if (budget < 1) throw Error(ErrorCode::InvalidParam, "budget must be >= 1");
  for (double rho : grid) {
    if (!(rho > 0.0)) throw Error(ErrorCode::InvalidParam, "rho values must be > 0");
  }

  SweepResult result;
  result.q_star = q_star;
  result.budget = budget;
  result.cells.resize(grid.size());

  const std::size_t workers =
      std::clamp<std::size_t>(static_cast<std::size_t>(std::max(jobs, 1)), 1, grid.size());
  std::atomic<std::size_t> next{0};
  auto work = [&] {
    for (std::size_t i = next++; i < grid.size(); i = next++) {
      result.cells[i] = run_cell(topo, grid[i], budget, base, q_star);
    }
  };
  if (workers == 1) {
    work();
  } else {
    std::vector<std::jthread> pool;
    for (std::size_t w = 0; w < workers; ++w) pool.emplace_back(work);
  }

  normalize(result.cells, &SweepCell::gap, &SweepCell::norm_gap);
  normalize(result.cells, &SweepCell::primal_norm, &SweepCell::norm_primal);
  normalize(result.cells, &SweepCell::dual_norm, &SweepCell::norm_dual);
  for (std::size_t i = 0; i < result.cells.size(); ++i) {
    const SweepCell& c = result.cells[i];
    if (c.failed) continue;
    if (result.best < 0 || c.gap < result.cells[static_cast<std::size_t>(result.best)].gap) {
      result.best = static_cast<int>(i);
    }
  }
  return result;
}

std::optional<int> iterations_to_target(const std::vector<IterationTrace>& trace, double q_star,
                                        double target) {
  std::optional<int> first;
  for (const IterationTrace& row : trace) {
    const double diff = std::abs(row.q_estimate - q_star);
    const double gap = q_star > 0.0 ? diff / q_star : diff;
    if (gap <= target) {
      if (!first) first = row.iter;
    } else {
      first.reset();
    }
  }
  return first;
}

namespace {

template <class Run>
SolverOutcome timed(const char* name, const Topology& topo, double q_star, double target,
                    Run&& run) {
  SolverOutcome out;
  out.algorithm = name;
  const auto t0 = std::chrono::steady_clock::now();
  try {
    auto [report, trace] = run();
    out.status = report.status;
    out.iterations_run = report.iterations;
    const double diff = std::abs(report.q_estimate - q_star);
    out.final_gap = q_star > 0.0 ? diff / q_star : diff;
    out.trace = std::move(trace);
  } catch (const Error& e) {
    out.failed = true;
    out.error = e.what();
  }
  out.wall_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  if (!out.failed) out.iterations_to_target = iterations_to_target(out.trace, q_star, target);
  out.timed_out = !out.iterations_to_target.has_value();
  if (out.iterations_to_target) {
    out.messages_to_target =
        bundles_per_round(topo) * static_cast<std::uint64_t>(*out.iterations_to_target);
  }
  return out;
}

}  // namespace

CompareRecord compare(const Topology& topo, const AdmmConfig& admm, const SubgradConfig& subgrad,
                      double q_star, double target) {
  admm.validate();
  subgrad.validate();
  if (!(target > 0.0)) throw Error(ErrorCode::InvalidParam, "gap target must be > 0");

  CompareRecord rec;
  rec.q_star = q_star;
  rec.target = target;
  rec.admm = timed("admm", topo, q_star, target, [&] {
    AdmmResult r = run_admm(topo, admm);
    return std::pair{std::move(r.report), std::move(r.trace)};
  });
  rec.subgrad = timed("subgrad", topo, q_star, target, [&] {
    SubgradConfig config = subgrad;
    config.gap_tol = std::min(config.gap_tol, target);
    config.stall_window = 0;  // run to the target or max_iter
    SubgradResult r = run_subgradient(topo, config, q_star);
    return std::pair{std::move(r.report), std::move(r.trace)};
  });

  if (rec.admm.iterations_to_target) {
    const double a = *rec.admm.iterations_to_target;
    if (rec.subgrad.iterations_to_target) {
      rec.ratio = *rec.subgrad.iterations_to_target / a;
    } else if (!rec.subgrad.failed) {
      rec.ratio = rec.subgrad.iterations_run / a;
      rec.ratio_is_lower_bound = true;
    }
  }
  return rec;
}

}  // namespace lifemax
