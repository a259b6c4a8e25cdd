#include "lifemax/admm.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "lifemax/error.hpp"

namespace lifemax {

void AdmmConfig::validate() const {
  if (!(rho > 0.0) || !std::isfinite(rho)) throw Error(ErrorCode::InvalidParam, "rho must be > 0");
  if (!(eps > 0.0) || !(eps_dual > 0.0)) {
    throw Error(ErrorCode::InvalidParam, "tolerances must be > 0");
  }
  if (max_iter < 1) throw Error(ErrorCode::InvalidParam, "max_iter must be >= 1");
  if (!(divergence_bound > 0.0)) {
    throw Error(ErrorCode::InvalidParam, "divergence bound must be > 0");
  }
}

double minimize_rate(const RateSubproblem& p) {
  // Stationarity of (r - a)^2 + (r - b)^2 + (C r + k)^2.
  const double a = p.reverse_rate + p.own_diff - p.own_lambda / p.rho;
  const double b = p.reverse_rate - p.reverse_diff + p.reverse_lambda / p.rho;
  double r = 0.0;
  if (p.has_energy_row) {
    const double k = p.other_load - (p.q - p.z) * p.energy + p.gamma / p.rho;
    r = (a + b - p.cost * k) / (2.0 + p.cost * p.cost);
  } else {
    r = 0.5 * (a + b);
  }
  return std::max(0.0, r);
}

double minimize_inverse_lifetime(const InverseLifetimeSubproblem& p) {
  double numer = 0.0;
  double denom = 0.0;
  if (p.has_energy_row) {
    const double target = p.load + p.z * p.energy + p.gamma / p.rho;
    numer += p.rho * p.energy * target;
    denom += p.rho * p.energy * p.energy;
  }
  for (std::size_t k = 0; k < p.neighbor_q.size(); ++k) {
    numer += p.rho * p.neighbor_q[k] - p.phi[k];
    denom += p.rho;
  }
  if (p.objective == Objective::Linear) {
    numer -= 1.0;
  } else {
    denom += 2.0;
  }
  return numer / denom;
}

double minimize_slack(const SlackSubproblem& p) {
  if (!std::isfinite(p.energy) || !(p.energy > 0.0)) {
    throw Error(ErrorCode::DegenerateNode, "slack update requires finite positive energy");
  }
  return std::max(0.0, p.q - (p.load + p.gamma / p.rho) / p.energy);
}

double minimize_flow_diff(const FlowDiffSubproblem& p) {
  const double own = p.rate - p.reverse_rate + p.lambda / p.rho;
  const double rest = p.other_diffs - p.gen_rate + p.mu / p.rho;
  return 0.5 * (own - rest);
}

AdmmState AdmmState::initial(const Topology& topo, const AdmmConfig& config) {
  AdmmState s;
  const std::size_t n = topo.node_count();
  s.rate.assign(topo.slot_count(), 0.0);
  s.flow_diff.assign(topo.slot_count(), 0.0);
  s.lambda.assign(topo.slot_count(), 0.0);
  s.phi.assign(topo.edge_count(), 0.0);
  s.q.assign(n, 0.0);
  s.slack.assign(n, 0.0);
  s.gamma.assign(n, 0.0);
  s.mu.assign(n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    const int id = static_cast<int>(i);
    switch (config.init.kind) {
      case AdmmInit::Kind::Zero:
        break;
      case AdmmInit::Kind::Constant:
        s.q[i] = config.init.value;
        break;
      case AdmmInit::Kind::Heuristic: {
        double q = config.init.value;
        if (id != kSinkId) {
          double cost_sum = 0.0;
          for (const Neighbor& nb : topo.neighbors(id)) cost_sum += nb.cost;
          q += cost_sum * topo.node(id).gen_rate / topo.node(id).initial_energy;
        }
        s.q[i] = q;
        break;
      }
    }
  }
  return s;
}

double AdmmState::phi_from(const Topology& topo, std::size_t slot) const {
  const double v = phi[topo.slot(slot).edge];
  return topo.slot_owner(slot) < topo.slot(slot).node ? v : -v;
}

NodeState node_state(const Topology& topo, const AdmmState& state, int i) {
  NodeState ns;
  ns.id = i;
  for (std::size_t s = topo.slot_begin(i); s < topo.slot_end(i); ++s) {
    ns.neighbors.push_back(topo.slot(s).node);
    ns.rate.push_back(state.rate[s]);
    ns.flow_diff.push_back(state.flow_diff[s]);
    ns.lambda.push_back(state.lambda[s]);
    ns.phi.push_back(state.phi_from(topo, s));
  }
  const auto k = static_cast<std::size_t>(i);
  ns.q = state.q[k];
  ns.slack = state.slack[k];
  ns.gamma = state.gamma[k];
  ns.mu = state.mu[k];
  return ns;
}

// --- RoundSchedule ---------------------------------------------------------

RoundSchedule::RoundSchedule(const Topology& topo, const AdmmState& state)
    : topo_(&topo), state_(&state), previous_(state), updated_round_(topo.node_count(), 0) {}

void RoundSchedule::begin_round(int k) {
  previous_ = *state_;
  round_ = k;
}

void RoundSchedule::mark_updated(int node) {
  updated_round_[static_cast<std::size_t>(node)] = round_;
}

bool RoundSchedule::updated(int node) const {
  return updated_round_[static_cast<std::size_t>(node)] == round_;
}

double RoundSchedule::select(SharedVar var, int owner, int requester, std::size_t index) const {
  const bool predecessor = owner < requester;
  if (predecessor && !updated(owner)) {
    throw Error(ErrorCode::ProtocolViolation,
                "node " + std::to_string(requester) + " requested round-" +
                    std::to_string(round_) + " value of predecessor " + std::to_string(owner) +
                    " before it updated");
  }
  const AdmmState& src = predecessor ? *state_ : previous_;
  switch (var) {
    case SharedVar::Rate: return src.rate[index];
    case SharedVar::FlowDiff: return src.flow_diff[index];
    case SharedVar::InverseLifetime: return src.q[index];
  }
  return 0.0;
}

// --- AdmmEngine ------------------------------------------------------------

AdmmEngine::AdmmEngine(const Topology& topo, AdmmConfig config)
    : AdmmEngine(topo, config, AdmmState::initial(topo, config)) {}

AdmmEngine::AdmmEngine(const Topology& topo, AdmmConfig config, AdmmState initial)
    : topo_(&topo), config_(config), state_(std::move(initial)), schedule_(topo, state_) {
  config_.validate();
}

void AdmmEngine::begin_round() { schedule_.begin_round(schedule_.round() + 1); }

RateSubproblem AdmmEngine::rate_subproblem(int i, std::size_t slot) const {
  const Topology& t = *topo_;
  const Neighbor& nb = t.slot(slot);
  const auto id = static_cast<std::size_t>(i);
  RateSubproblem p;
  p.rho = config_.rho;
  p.reverse_rate = schedule_.select(SharedVar::Rate, nb.node, i, nb.mirror);
  p.own_diff = state_.flow_diff[slot];
  p.own_lambda = state_.lambda[slot];
  p.reverse_diff = schedule_.select(SharedVar::FlowDiff, nb.node, i, nb.mirror);
  p.reverse_lambda = state_.lambda[nb.mirror];
  p.cost = nb.cost;
  for (std::size_t s = t.slot_begin(i); s < t.slot_end(i); ++s) {
    if (s != slot) p.other_load += t.slot(s).cost * state_.rate[s];
  }
  p.has_energy_row = i != kSinkId;
  p.q = state_.q[id];
  p.z = state_.slack[id];
  p.energy = p.has_energy_row ? t.node(i).initial_energy : 0.0;
  p.gamma = state_.gamma[id];
  return p;
}

InverseLifetimeSubproblem AdmmEngine::inverse_lifetime_subproblem(int i) const {
  const Topology& t = *topo_;
  const auto id = static_cast<std::size_t>(i);
  InverseLifetimeSubproblem p;
  p.objective = config_.objective;
  p.rho = config_.rho;
  p.has_energy_row = i != kSinkId;
  for (std::size_t s = t.slot_begin(i); s < t.slot_end(i); ++s) {
    const Neighbor& nb = t.slot(s);
    p.load += nb.cost * state_.rate[s];
    p.neighbor_q.push_back(
        schedule_.select(SharedVar::InverseLifetime, nb.node, i, static_cast<std::size_t>(nb.node)));
    p.phi.push_back(state_.phi_from(t, s));
  }
  p.z = state_.slack[id];
  p.energy = p.has_energy_row ? t.node(i).initial_energy : 0.0;
  p.gamma = state_.gamma[id];
  return p;
}

SlackSubproblem AdmmEngine::slack_subproblem(int i) const {
  const Topology& t = *topo_;
  const auto id = static_cast<std::size_t>(i);
  SlackSubproblem p;
  p.rho = config_.rho;
  for (std::size_t s = t.slot_begin(i); s < t.slot_end(i); ++s) {
    p.load += t.slot(s).cost * state_.rate[s];
  }
  p.q = state_.q[id];
  p.energy = t.node(i).initial_energy;
  p.gamma = state_.gamma[id];
  return p;
}

FlowDiffSubproblem AdmmEngine::flow_diff_subproblem(int i, std::size_t slot) const {
  const Topology& t = *topo_;
  const Neighbor& nb = t.slot(slot);
  const auto id = static_cast<std::size_t>(i);
  FlowDiffSubproblem p;
  p.rho = config_.rho;
  p.rate = state_.rate[slot];
  p.reverse_rate = schedule_.select(SharedVar::Rate, nb.node, i, nb.mirror);
  p.lambda = state_.lambda[slot];
  for (std::size_t s = t.slot_begin(i); s < t.slot_end(i); ++s) {
    if (s != slot) p.other_diffs += state_.flow_diff[s];
  }
  p.gen_rate = t.node(i).gen_rate;
  p.mu = state_.mu[id];
  return p;
}

double AdmmEngine::update_rate(int i, std::size_t slot) {
  return state_.rate[slot] = minimize_rate(rate_subproblem(i, slot));
}

double AdmmEngine::update_inverse_lifetime(int i) {
  return state_.q[static_cast<std::size_t>(i)] =
             minimize_inverse_lifetime(inverse_lifetime_subproblem(i));
}

double AdmmEngine::update_slack(int i) {
  return state_.slack[static_cast<std::size_t>(i)] = minimize_slack(slack_subproblem(i));
}

double AdmmEngine::update_flow_diff(int i, std::size_t slot) {
  return state_.flow_diff[slot] = minimize_flow_diff(flow_diff_subproblem(i, slot));
}

void AdmmEngine::update_duals(int i) {
  const Topology& t = *topo_;
  const double rho = config_.rho;
  const auto id = static_cast<std::size_t>(i);

  // Links to predecessors are owned by this (higher-id) endpoint; both
  // directions' lambda and the shared phi move once per round.
  const std::size_t pred_end = t.slot_begin(i) + t.predecessors(i).size();
  for (std::size_t s = t.slot_begin(i); s < pred_end; ++s) {
    const Neighbor& nb = t.slot(s);
    if (!schedule_.updated(nb.node)) {
      throw Error(ErrorCode::ProtocolViolation, "dual update before predecessor finished");
    }
    const std::size_t m = nb.mirror;
    const double r_ij = state_.rate[s];
    const double r_ji = state_.rate[m];
    state_.lambda[m] += rho * (r_ji - r_ij - state_.flow_diff[m]);
    state_.lambda[s] += rho * (r_ij - r_ji - state_.flow_diff[s]);
    state_.phi[nb.edge] += rho * (state_.q[static_cast<std::size_t>(nb.node)] - state_.q[id]);
  }

  double load = 0.0;
  double diffs = 0.0;
  for (std::size_t s = t.slot_begin(i); s < t.slot_end(i); ++s) {
    load += t.slot(s).cost * state_.rate[s];
    diffs += state_.flow_diff[s];
  }
  if (i != kSinkId) {
    state_.gamma[id] +=
        rho * (load - (state_.q[id] - state_.slack[id]) * t.node(i).initial_energy);
  }
  state_.mu[id] += rho * (diffs - t.node(i).gen_rate);
}

void AdmmEngine::update_node(int i) {
  const Topology& t = *topo_;
  for (std::size_t s = t.slot_begin(i); s < t.slot_end(i); ++s) update_rate(i, s);
  update_inverse_lifetime(i);
  if (i != kSinkId) update_slack(i);
  for (std::size_t s = t.slot_begin(i); s < t.slot_end(i); ++s) update_flow_diff(i, s);
  update_duals(i);
  schedule_.mark_updated(i);
}

void AdmmEngine::end_round() { check_finite(); }

ResidualReport AdmmEngine::step() {
  begin_round();
  for (std::size_t i = 0; i < topo_->node_count(); ++i) update_node(static_cast<int>(i));
  end_round();
  return compute_residuals(*topo_, state_, schedule_.previous(), config_.rho);
}

void AdmmEngine::check_finite() const {
  const double bound = config_.divergence_bound;
  auto bad = [bound](const std::vector<double>& v) {
    return std::any_of(v.begin(), v.end(),
                       [bound](double x) { return !std::isfinite(x) || std::abs(x) > bound; });
  };
  if (bad(state_.rate) || bad(state_.flow_diff) || bad(state_.lambda) || bad(state_.phi) ||
      bad(state_.q) || bad(state_.slack) || bad(state_.gamma) || bad(state_.mu)) {
    throw Error(ErrorCode::NumericalDivergence,
                "ADMM state left the divergence bound at round " + std::to_string(round()));
  }
}

// --- Residuals and stopping -------------------------------------------------

ResidualReport compute_residuals(const Topology& topo, const AdmmState& cur,
                                 const AdmmState& prev, double rho) {
  ResidualReport rep;
  double primal_sq = 0.0;
  double dual_sq = 0.0;
  for (std::size_t s = 0; s < topo.slot_count(); ++s) {
    const double v = cur.rate[s] - cur.rate[topo.slot(s).mirror] - cur.flow_diff[s];
    rep.v_flow_diff += std::abs(v);
    primal_sq += v * v;
    const double da = cur.flow_diff[s] - prev.flow_diff[s];
    const auto j = static_cast<std::size_t>(topo.slot(s).node);
    const double dq = cur.q[j] - prev.q[j];
    dual_sq += da * da + dq * dq;
  }
  for (std::size_t i = 0; i < topo.node_count(); ++i) {
    const int id = static_cast<int>(i);
    double diffs = 0.0;
    double load = 0.0;
    for (std::size_t s = topo.slot_begin(id); s < topo.slot_end(id); ++s) {
      diffs += cur.flow_diff[s];
      load += topo.slot(s).cost * cur.rate[s];
    }
    const double v2 = diffs - topo.node(id).gen_rate;
    rep.v_conservation += std::abs(v2);
    primal_sq += v2 * v2;
    if (id == kSinkId) continue;
    const double v3 = load - (cur.q[i] - cur.slack[i]) * topo.node(id).initial_energy;
    rep.v_energy += std::abs(v3);
    primal_sq += v3 * v3;
    const double dz = cur.slack[i] - prev.slack[i];
    dual_sq += dz * dz;
  }
  for (const Edge& e : topo.edges()) {
    const double v4 = cur.q[static_cast<std::size_t>(e.i)] - cur.q[static_cast<std::size_t>(e.j)];
    rep.v_consensus += std::abs(v4);
    primal_sq += v4 * v4;
  }
  rep.primal_norm = std::sqrt(primal_sq);
  rep.dual_norm = rho * std::sqrt(dual_sq);
  rep.total_violation = rep.v_flow_diff + rep.v_conservation + rep.v_energy + rep.v_consensus;
  return rep;
}

bool check_stop(const ResidualReport& report, double eps, double eps_dual) {
  return report.primal_norm <= eps && report.dual_norm <= eps_dual;
}

double mean_sensor_q(const Topology& topo, std::span<const double> q) {
  double sum = 0.0;
  for (std::size_t i = 1; i < topo.node_count(); ++i) sum += q[i];
  return sum / static_cast<double>(topo.sensor_count());
}

AdmmResult run_admm(const Topology& topo, const AdmmConfig& config) {
  AdmmEngine engine(topo, config);
  AdmmResult result;
  const std::uint64_t per_round = bundles_per_round(topo);
  ResidualReport last;
  bool stopped = false;
  int k = 0;
  while (k < config.max_iter) {
    last = engine.step();
    ++k;
    IterationTrace row;
    row.iter = k;
    row.q = engine.state().q;
    row.z = engine.state().slack;
    row.z[0] = 0.0;
    row.residuals = last;
    row.messages_cum = per_round * static_cast<std::uint64_t>(k);
    row.q_estimate = mean_sensor_q(topo, engine.state().q);
    result.trace.push_back(std::move(row));
    stopped = check_stop(last, config.eps, config.eps_dual);
    if (stopped && config.early_stop) break;
  }

  SolveReport& rep = result.report;
  rep.algorithm = "admm";
  rep.status = stopped ? SolveStatus::Converged : SolveStatus::MaxIterations;
  rep.iterations = k;
  rep.q_estimate = mean_sensor_q(topo, engine.state().q);
  rep.lifetime = rep.q_estimate > 0.0 ? 1.0 / rep.q_estimate : kInfinity;
  rep.residuals = last;
  rep.q = engine.state().q;
  rep.rates = engine.state().rate;
  rep.messages = per_round * static_cast<std::uint64_t>(k);
  result.state = engine.state();
  return result;
}

}  // namespace lifemax
