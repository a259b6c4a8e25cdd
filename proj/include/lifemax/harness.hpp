#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "lifemax/admm.hpp"
#include "lifemax/net_model.hpp"
#include "lifemax/report.hpp"
#include "lifemax/subgradient.hpp"

namespace lifemax {

/// Floats carried by one bundle: ADMM sends r_ij, A_ij, q_i and the shared
/// lambda, phi of the link; the subgradient method sends v_i and r_ij.
inline constexpr int kAdmmBundleFloats = 5;
inline constexpr int kSubgradBundleFloats = 2;

struct MessageLedger {
  int rounds = 0;
  std::uint64_t per_round = 0;
  std::uint64_t total = 0;
  std::vector<std::uint64_t> per_node;  // bundles sent by each node
  int floats_per_bundle = 0;            // 0 when payload is not tracked
  std::uint64_t total_floats = 0;

  bool operator==(const MessageLedger&) const = default;
};

/// One bundle per node per neighbor per round.
MessageLedger count_messages(const Topology& topo, int rounds, int floats_per_bundle = 0);

struct SweepCell {
  double rho = 0.0;
  bool failed = false;
  std::string error;
  double gap = 0.0;  // |q_bar - q*|
  double primal_norm = 0.0;
  double dual_norm = 0.0;
  int iterations = 0;
  // Per-metric min-max over the non-failed cells; NaN on failed cells.
  double norm_gap = 0.0;
  double norm_primal = 0.0;
  double norm_dual = 0.0;
};

struct SweepResult {
  std::vector<SweepCell> cells;  // grid order
  int best = -1;                 // argmin gap over non-failed cells, first on ties
  double q_star = 0.0;
  int budget = 0;
  std::string normalization = "minmax";
};

/// Runs ADMM for exactly `budget` rounds at each rho. `base` supplies every
/// other setting. Divergent cells are recorded as failed. Cells run on up to
/// `jobs` threads and are merged in grid order.
SweepResult rho_sweep(const Topology& topo, std::span<const double> grid, int budget,
                      const AdmmConfig& base, double q_star, int jobs = 1);

/// First iteration from which the gap stays within `target` to the end of
/// the trace. Relative gap, or absolute when q* == 0.
std::optional<int> iterations_to_target(const std::vector<IterationTrace>& trace, double q_star,
                                        double target);

struct SolverOutcome {
  std::string algorithm;
  SolveStatus status = SolveStatus::MaxIterations;
  bool failed = false;     // threw (divergence)
  std::string error;
  int iterations_run = 0;
  std::optional<int> iterations_to_target;
  std::uint64_t messages_to_target = 0;  // 0 when the target was not reached
  bool timed_out = false;  // target not reached within max_iter
  double final_gap = 0.0;
  double wall_seconds = 0.0;
  std::vector<IterationTrace> trace;
};

struct CompareRecord {
  double q_star = 0.0;
  double target = 0.05;
  SolverOutcome admm;
  SolverOutcome subgrad;
  /// subgrad / admm iterations to target. When only the subgradient timed
  /// out, the rounds it ran stand in and ratio_is_lower_bound is set.
  std::optional<double> ratio;
  bool ratio_is_lower_bound = false;
};

CompareRecord compare(const Topology& topo, const AdmmConfig& admm, const SubgradConfig& subgrad,
                      double q_star, double target = 0.05);

}  // namespace lifemax
