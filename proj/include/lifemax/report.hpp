#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "lifemax/net_model.hpp"

namespace lifemax {

/// Constraint residuals of the consensus model after one round.
///   vI   : r_ij - r_ji - A_ij            (every directed link)
///   vII  : sum_j A_ij - g_i              (every node)
///   vIII : sum_j C_ij r_ij - (q_i - z_i) e_i   (every sensor)
///   vIV  : q_i - q_j                     (every undirected link)
struct ResidualReport {
  double primal_norm = 0.0;
  double dual_norm = 0.0;
  double v_flow_diff = 0.0;   // vI
  double v_conservation = 0.0;  // vII
  double v_energy = 0.0;      // vIII
  double v_consensus = 0.0;   // vIV
  double total_violation = 0.0;
};

struct IterationTrace {
  int iter = 0;
  std::vector<double> q;  // per node, sink included
  std::vector<double> z;  // per node; 0 at the sink
  ResidualReport residuals;
  std::uint64_t messages_cum = 0;
  double q_estimate = 0.0;  // mean q over sensors (ADMM) or running average (subgradient)
  double dual_value = 0.0;  // subgradient only: best dual bound so far
};

enum class SolveStatus { Optimal, Converged, Stalled, MaxIterations };

const char* to_string(SolveStatus status);

struct SolveReport {
  std::string algorithm;
  SolveStatus status = SolveStatus::MaxIterations;
  int iterations = 0;
  double q_estimate = 0.0;
  double lifetime = kInfinity;
  ResidualReport residuals;
  std::optional<double> q_star;
  std::optional<double> relative_gap;
  std::vector<double> q;
  std::vector<double> rates;  // per topology slot
  std::uint64_t messages = 0;
};

/// One variable bundle per neighbor per round.
inline std::uint64_t bundles_per_round(const Topology& topo) {
  return 2 * static_cast<std::uint64_t>(topo.edge_count());
}

/// Fills q_star and the relative gap |q_est - q*| / q* (absolute gap when q* == 0).
void attach_oracle(SolveReport& report, double q_star);

}  // namespace lifemax
