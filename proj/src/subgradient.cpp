#include "lifemax/subgradient.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "lifemax/error.hpp"

namespace lifemax {

void SubgradConfig::validate() const {
  if (!(step_a > 0.0)) throw Error(ErrorCode::InvalidParam, "step_a must be > 0");
  if (!(step_b >= 0.0)) throw Error(ErrorCode::InvalidParam, "step_b must be >= 0");
  if (max_iter < 1) throw Error(ErrorCode::InvalidParam, "max_iter must be >= 1");
  if (!(eps > 0.0)) throw Error(ErrorCode::InvalidParam, "eps must be > 0");
  if (!(gap_tol > 0.0)) throw Error(ErrorCode::InvalidParam, "gap_tol must be > 0");
  if (stall_window < 0) throw Error(ErrorCode::InvalidParam, "stall_window must be >= 0");
  if (!(divergence_bound > 0.0)) throw Error(ErrorCode::InvalidParam, "divergence_bound must be > 0");
}

double default_rate_bound(const Topology& topo) {
  return std::max(1.0, 10.0 * topo.total_generation() * static_cast<double>(topo.max_degree()));
}

double default_q_bound(const Topology& topo) {
  double max_cost = 0.0;
  double min_energy = kInfinity;
  for (const Edge& e : topo.edges()) max_cost = std::max(max_cost, e.cost);
  for (std::size_t i = 1; i < topo.node_count(); ++i) {
    min_energy = std::min(min_energy, topo.node(static_cast<int>(i)).initial_energy);
  }
  const double bound = 10.0 * max_cost * topo.total_generation() / min_energy;
  return std::max(1.0, bound);
}

Multipliers Multipliers::zero(const Topology& topo) {
  Multipliers m;
  m.lambda.assign(topo.node_count(), 0.0);
  m.v.assign(topo.node_count(), 0.0);
  return m;
}

double q_reduced_cost(const Topology& topo, const Multipliers& m) {
  double c = 1.0;
  for (std::size_t i = 1; i < topo.node_count(); ++i) {
    c -= m.lambda[i] * topo.node(static_cast<int>(i)).initial_energy;
  }
  return c;
}

double rate_reduced_cost(const Topology& topo, const Multipliers& m, std::size_t slot) {
  const int i = topo.slot_owner(slot);
  const int j = topo.slot(slot).node;
  return m.lambda[i] * topo.slot(slot).cost - m.v[i] + m.v[j];
}

PrimalPoint primal_argmin(const Topology& topo, const Multipliers& m, double r_max, double q_max) {
  PrimalPoint x;
  x.q = q_reduced_cost(topo, m) < 0.0 ? q_max : 0.0;
  x.rates.assign(topo.slot_count(), 0.0);
  for (std::size_t s = 0; s < topo.slot_count(); ++s) {
    if (rate_reduced_cost(topo, m, s) < 0.0) x.rates[s] = r_max;
  }
  return x;
}

std::vector<double> energy_rows(const Topology& topo, const PrimalPoint& x) {
  std::vector<double> out(topo.node_count(), 0.0);
  for (std::size_t i = 1; i < topo.node_count(); ++i) {
    const int id = static_cast<int>(i);
    double load = 0.0;
    for (std::size_t s = topo.slot_begin(id); s < topo.slot_end(id); ++s) {
      load += topo.slot(s).cost * x.rates[s];
    }
    out[i] = load - x.q * topo.node(id).initial_energy;
  }
  return out;
}

std::vector<double> flow_rows(const Topology& topo, const PrimalPoint& x) {
  std::vector<double> out(topo.node_count(), 0.0);
  for (std::size_t i = 1; i < topo.node_count(); ++i) {
    const int id = static_cast<int>(i);
    double net = 0.0;
    for (std::size_t s = topo.slot_begin(id); s < topo.slot_end(id); ++s) {
      net += x.rates[s] - x.rates[topo.slot(s).mirror];
    }
    out[i] = topo.node(id).gen_rate - net;
  }
  return out;
}

double lagrangian(const Topology& topo, const Multipliers& m, const PrimalPoint& x) {
  const std::vector<double> energy = energy_rows(topo, x);
  const std::vector<double> flow = flow_rows(topo, x);
  double value = x.q;
  for (std::size_t i = 1; i < topo.node_count(); ++i) {
    value += m.lambda[i] * energy[i] + m.v[i] * flow[i];
  }
  return value;
}

double step_size(const SubgradConfig& config, int k) {
  const double t = config.step_b + static_cast<double>(k);
  return config.rule == StepRule::Harmonic ? config.step_a / t : config.step_a / std::sqrt(t);
}

void subgrad_step(const Topology& topo, Multipliers& m, const PrimalPoint& x, double step) {
  const std::vector<double> energy = energy_rows(topo, x);
  const std::vector<double> flow = flow_rows(topo, x);
  for (std::size_t i = 1; i < topo.node_count(); ++i) {
    m.lambda[i] = std::max(0.0, m.lambda[i] + step * energy[i]);
    m.v[i] += step * flow[i];
  }
}

namespace {

ResidualReport averaged_residuals(const Topology& topo, const PrimalPoint& avg) {
  ResidualReport rep;
  const std::vector<double> energy = energy_rows(topo, avg);
  std::vector<double> flow = flow_rows(topo, avg);
  // Sink row, for parity with the ADMM conservation sum.
  double sink_net = 0.0;
  for (std::size_t s = topo.slot_begin(kSinkId); s < topo.slot_end(kSinkId); ++s) {
    sink_net += avg.rates[s] - avg.rates[topo.slot(s).mirror];
  }
  flow[0] = topo.node(kSinkId).gen_rate - sink_net;
  double sq = 0.0;
  for (double f : flow) {
    rep.v_conservation += std::abs(f);
    sq += f * f;
  }
  for (double e : energy) {
    const double over = std::max(0.0, e);
    rep.v_energy += over;
    sq += over * over;
  }
  rep.primal_norm = std::sqrt(sq);
  rep.total_violation = rep.v_flow_diff + rep.v_conservation + rep.v_energy + rep.v_consensus;
  return rep;
}

bool within_gap(double q, double reference, double tol, double eps) {
  if (reference > 0.0) return std::abs(q - reference) <= tol * reference;
  return std::abs(q - reference) <= eps;
}

}  // namespace

SubgradResult run_subgradient(const Topology& topo, const SubgradConfig& config,
                              std::optional<double> q_star) {
  config.validate();
  const double r_max = config.r_max > 0.0 ? config.r_max : default_rate_bound(topo);
  const double q_max = config.q_max > 0.0 ? config.q_max : default_q_bound(topo);
  const std::uint64_t per_round = bundles_per_round(topo);

  SubgradResult result;
  result.multipliers = Multipliers::zero(topo);
  result.average.rates.assign(topo.slot_count(), 0.0);
  result.best_dual = -kInfinity;
  std::vector<double> best_history;
  double first_dual = 0.0;
  SolveStatus status = SolveStatus::MaxIterations;
  ResidualReport last;
  int k = 0;

  while (k < config.max_iter) {
    ++k;
    Multipliers& m = result.multipliers;
    const PrimalPoint x = primal_argmin(topo, m, r_max, q_max);
    result.best_dual = std::max(result.best_dual, lagrangian(topo, m, x));
    if (k == 1) first_dual = result.best_dual;

    // Running average of the Lagrangian minimisers.
    const double w = 1.0 / static_cast<double>(k);
    result.average.q += w * (x.q - result.average.q);
    for (std::size_t s = 0; s < x.rates.size(); ++s) {
      result.average.rates[s] += w * (x.rates[s] - result.average.rates[s]);
    }

    const Multipliers before = m;
    subgrad_step(topo, m, x, step_size(config, k));
    double dsq = 0.0;
    for (std::size_t i = 0; i < m.lambda.size(); ++i) {
      const double dl = m.lambda[i] - before.lambda[i];
      const double dv = m.v[i] - before.v[i];
      dsq += dl * dl + dv * dv;
      if (!std::isfinite(m.lambda[i]) || !std::isfinite(m.v[i]) ||
          std::abs(m.lambda[i]) > config.divergence_bound ||
          std::abs(m.v[i]) > config.divergence_bound) {
        throw Error(ErrorCode::NumericalDivergence,
                    "subgradient multipliers left the bound at iteration " + std::to_string(k));
      }
    }

    last = averaged_residuals(topo, result.average);
    last.dual_norm = std::sqrt(dsq);

    IterationTrace row;
    row.iter = k;
    row.q.assign(topo.node_count(), result.average.q);
    row.z.assign(topo.node_count(), 0.0);
    const std::vector<double> energy = energy_rows(topo, result.average);
    for (std::size_t i = 1; i < topo.node_count(); ++i) {
      row.z[i] = std::max(0.0, -energy[i] / topo.node(static_cast<int>(i)).initial_energy);
    }
    row.residuals = last;
    row.messages_cum = per_round * static_cast<std::uint64_t>(k);
    row.q_estimate = result.average.q;
    row.dual_value = result.best_dual;
    result.trace.push_back(std::move(row));

    if (!config.early_stop) continue;
    const bool feasible = last.primal_norm <= config.eps;
    const double reference = q_star ? *q_star : result.best_dual;
    if (feasible && within_gap(result.average.q, reference, config.gap_tol, config.eps)) {
      status = SolveStatus::Converged;
      break;
    }
    // The stall clock starts once the bound has moved off its first value.
    if (best_history.empty() && k > 1 && result.best_dual == first_dual) continue;
    best_history.push_back(result.best_dual);
    const int window = config.stall_window;
    const int tracked = static_cast<int>(best_history.size());
    if (window > 0 && tracked > window) {
      const double old = best_history[static_cast<std::size_t>(tracked - 1 - window)];
      const double scale = std::max(1.0, std::abs(result.best_dual));
      if (std::abs(result.best_dual - old) < config.stall_tol * scale) {
        status = SolveStatus::Stalled;
        break;
      }
    }
  }

  SolveReport& rep = result.report;
  rep.algorithm = "subgrad";
  rep.status = status;
  rep.iterations = k;
  rep.q_estimate = result.average.q;
  rep.lifetime = rep.q_estimate > 0.0 ? 1.0 / rep.q_estimate : kInfinity;
  rep.residuals = last;
  rep.q.assign(topo.node_count(), result.average.q);
  rep.rates = result.average.rates;
  rep.messages = per_round * static_cast<std::uint64_t>(k);
  if (q_star) attach_oracle(rep, *q_star);
  return result;
}

}  // namespace lifemax
