#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

#include "lifemax/net_model.hpp"
#include "lifemax/report.hpp"

namespace lifemax {

enum class Objective {
  Linear,     // sum q_i
  Quadratic,  // sum q_i^2, strongly convex
};

struct AdmmInit {
  enum class Kind {
    Heuristic,  // q_i = (sum_j C_ij) g_i / e_i + offset
    Zero,
    Constant,   // q_i = value
  };
  Kind kind = Kind::Heuristic;
  double value = 1.0;
};

struct AdmmConfig {
  double rho = 7.0;
  double eps = 0.01;
  double eps_dual = 0.01;
  int max_iter = 500;
  Objective objective = Objective::Linear;
  AdmmInit init;
  double divergence_bound = 1e12;
  bool early_stop = true;  // false runs exactly max_iter rounds

  void validate() const;  // InvalidParam on rho <= 0, eps <= 0, max_iter < 1
};

// --- Per-variable subproblems ---------------------------------------------
// Each update is the minimiser of a scalar convex quadratic assembled from
// the node's own values and what its neighbors last sent. The structs carry
// exactly those inputs so the closed forms can be checked in isolation.

struct RateSubproblem {
  double rho = 1.0;
  double reverse_rate = 0.0;    // r_ji, k+- value
  double own_diff = 0.0;        // A_ij, previous round
  double own_lambda = 0.0;      // lambda_ij, previous round
  double reverse_diff = 0.0;    // A_ji, k+- value
  double reverse_lambda = 0.0;  // lambda_ji, previous round
  double cost = 0.0;            // C_ij
  double other_load = 0.0;      // sum_{l != j} C_il r_il, freshest values
  double q = 0.0;               // previous round
  double z = 0.0;               // previous round
  double energy = 1.0;
  double gamma = 0.0;
  bool has_energy_row = true;   // false at the sink
};

/// Returns max(0, unconstrained minimiser).
double minimize_rate(const RateSubproblem& p);

struct InverseLifetimeSubproblem {
  Objective objective = Objective::Linear;
  double rho = 1.0;
  double load = 0.0;   // sum_j C_ij r_ij at the current round
  double z = 0.0;      // previous round
  double energy = 1.0;
  double gamma = 0.0;
  bool has_energy_row = true;
  std::vector<double> neighbor_q;  // k+- values
  std::vector<double> phi;         // phi_ij oriented from this node
};

/// Unconstrained; q may be transiently negative.
double minimize_inverse_lifetime(const InverseLifetimeSubproblem& p);

struct SlackSubproblem {
  double rho = 1.0;
  double load = 0.0;  // current round
  double q = 0.0;     // current round
  double energy = 1.0;
  double gamma = 0.0;
};

/// max(0, q - (load + gamma/rho)/e). DegenerateNode for unbounded energy.
double minimize_slack(const SlackSubproblem& p);

struct FlowDiffSubproblem {
  double rho = 1.0;
  double rate = 0.0;          // r_ij, current round
  double reverse_rate = 0.0;  // r_ji, k+- value
  double lambda = 0.0;        // lambda_ij, previous round
  double other_diffs = 0.0;   // sum_{l != j} A_il, freshest values
  double gen_rate = 0.0;
  double mu = 0.0;
};

/// Sign-unconstrained minimiser.
double minimize_flow_diff(const FlowDiffSubproblem& p);

// --- Network state -------------------------------------------------------

/// All primal and dual variables, stored network-wide. Per-slot vectors use
/// the topology's slot numbering; lambda[s] multiplies the flow-difference
/// constraint of slot s. phi[e] multiplies q_i - q_j = 0 for undirected
/// edge e = (i, j), i < j, so the owner-oriented value is -phi[e] at j.
struct AdmmState {
  std::vector<double> rate;
  std::vector<double> flow_diff;
  std::vector<double> lambda;
  std::vector<double> phi;
  std::vector<double> q;
  std::vector<double> slack;
  std::vector<double> gamma;
  std::vector<double> mu;

  static AdmmState initial(const Topology& topo, const AdmmConfig& config);

  double phi_from(const Topology& topo, std::size_t slot) const;
};

/// One node's view of the state, for inspection.
struct NodeState {
  int id = 0;
  std::vector<int> neighbors;
  std::vector<double> rate, flow_diff, lambda, phi;
  double q = 0.0, slack = 0.0, gamma = 0.0, mu = 0.0;
};

NodeState node_state(const Topology& topo, const AdmmState& state, int i);

enum class SharedVar { Rate, FlowDiff, InverseLifetime };

/// Enforces the k+- rule: a requester reads a predecessor's value from the
/// current round and a successor's value from the previous round.
class RoundSchedule {
 public:
  RoundSchedule(const Topology& topo, const AdmmState& state);

  /// Snapshots the previous-round values and opens round k.
  void begin_round(int k);
  void mark_updated(int node);
  int round() const { return round_; }
  bool updated(int node) const;

  /// x_ji^(k+-) where `index` is a slot owned by `owner` (Rate, FlowDiff)
  /// or the owner's id (InverseLifetime). Throws ProtocolViolation when a
  /// predecessor has not yet produced its round-k value.
  double select(SharedVar var, int owner, int requester, std::size_t index) const;

  const AdmmState& previous() const { return previous_; }

 private:
  const Topology* topo_;
  const AdmmState* state_;
  AdmmState previous_;
  std::vector<int> updated_round_;
  int round_ = 0;
};

/// Gauss-Seidel engine: one call to step() is one full round over the nodes
/// in ascending id. Individual updates are public for tests.
class AdmmEngine {
 public:
  AdmmEngine(const Topology& topo, AdmmConfig config);
  AdmmEngine(const Topology& topo, AdmmConfig config, AdmmState initial);
  AdmmEngine(const AdmmEngine&) = delete;
  AdmmEngine& operator=(const AdmmEngine&) = delete;

  void begin_round();
  double update_rate(int i, std::size_t slot);
  double update_inverse_lifetime(int i);
  double update_slack(int i);
  double update_flow_diff(int i, std::size_t slot);
  void update_duals(int i);
  void update_node(int i);
  void end_round();

  ResidualReport step();

  const AdmmState& state() const { return state_; }
  AdmmState& mutable_state() { return state_; }
  const RoundSchedule& schedule() const { return schedule_; }
  RoundSchedule& mutable_schedule() { return schedule_; }
  int round() const { return schedule_.round(); }
  const Topology& topology() const { return *topo_; }
  const AdmmConfig& config() const { return config_; }

  RateSubproblem rate_subproblem(int i, std::size_t slot) const;
  InverseLifetimeSubproblem inverse_lifetime_subproblem(int i) const;
  SlackSubproblem slack_subproblem(int i) const;
  FlowDiffSubproblem flow_diff_subproblem(int i, std::size_t slot) const;

 private:
  void check_finite() const;

  const Topology* topo_;
  AdmmConfig config_;
  AdmmState state_;
  RoundSchedule schedule_;
};

ResidualReport compute_residuals(const Topology& topo, const AdmmState& current,
                                 const AdmmState& previous, double rho);

bool check_stop(const ResidualReport& report, double eps, double eps_dual);

/// Mean inverse lifetime over sensors.
double mean_sensor_q(const Topology& topo, std::span<const double> q);

struct AdmmResult {
  SolveReport report;
  std::vector<IterationTrace> trace;
  AdmmState state;
};

/// Runs rounds until check_stop holds (when early_stop) or max_iter.
/// Throws NumericalDivergence when a value leaves the divergence bound.
AdmmResult run_admm(const Topology& topo, const AdmmConfig& config);

}  // namespace lifemax
