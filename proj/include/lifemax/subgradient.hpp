#pragma once

#include <optional>
#include <vector>

#include "lifemax/net_model.hpp"
#include "lifemax/report.hpp"

namespace lifemax {

enum class StepRule {
  Harmonic,     // a / (b + k)
  InverseSqrt,  // a / sqrt(b + k)
};

struct SubgradConfig {
  StepRule rule = StepRule::Harmonic;
  double step_a = 1.0;
  double step_b = 0.0;
  int max_iter = 5000;
  double eps = 0.01;             // feasibility of the averaged primal
  double gap_tol = 0.05;         // used only when an oracle value is given
  int stall_window = 500;        // 0 disables the stall test
  double stall_tol = 1e-6;
  double divergence_bound = 1e12;
  bool early_stop = true;
  // Box of the Lagrangian minimisation; <= 0 picks the defaults below.
  double r_max = 0.0;
  double q_max = 0.0;

  void validate() const;
};

/// 10 * sum_i g_i * max degree, and at least 1.
double default_rate_bound(const Topology& topo);
/// 10 * max C * sum g / min e: ten times the inverse lifetime of routing
/// everything over the most expensive link of the weakest node. At least 1.
double default_q_bound(const Topology& topo);

/// Multipliers of the lifetime LP. lambda[i] >= 0 prices the energy row of
/// sensor i (lambda[0] unused, 0); v[i] prices the flow row of node i, with
/// v[0] pinned at 0 because the sink row is redundant.
struct Multipliers {
  std::vector<double> lambda;
  std::vector<double> v;

  static Multipliers zero(const Topology& topo);
};

struct PrimalPoint {
  double q = 0.0;
  std::vector<double> rates;  // per slot
};

/// Minimiser of the plain Lagrangian over 0 <= r <= r_max, 0 <= q <= q_max.
/// Every coordinate goes to its upper bound iff its reduced cost is negative.
PrimalPoint primal_argmin(const Topology& topo, const Multipliers& m, double r_max, double q_max);

/// Reduced cost of q and of every slot rate at the given multipliers.
double q_reduced_cost(const Topology& topo, const Multipliers& m);
double rate_reduced_cost(const Topology& topo, const Multipliers& m, std::size_t slot);

/// L(x, lambda, v) = q + sum lambda_i (load_i - q e_i) + sum v_i (g_i - net_out_i).
double lagrangian(const Topology& topo, const Multipliers& m, const PrimalPoint& x);

/// Energy row values load_i - q e_i (0 at the sink) and flow row values
/// g_i - net_out_i (0 at the sink).
std::vector<double> energy_rows(const Topology& topo, const PrimalPoint& x);
std::vector<double> flow_rows(const Topology& topo, const PrimalPoint& x);

double step_size(const SubgradConfig& config, int k);

/// lambda <- (lambda + a_k * energy)_+ , v <- v + a_k * flow.
void subgrad_step(const Topology& topo, Multipliers& m, const PrimalPoint& x, double step);

struct SubgradResult {
  SolveReport report;
  std::vector<IterationTrace> trace;
  Multipliers multipliers;
  PrimalPoint average;
  double best_dual = 0.0;
};

/// Dual subgradient ascent with running-average primal recovery. `q_star`
/// enables the oracle part of the stopping test and the report gap.
SubgradResult run_subgradient(const Topology& topo, const SubgradConfig& config,
                              std::optional<double> q_star = std::nullopt);

}  // namespace lifemax
