#pragma once
// Scalar objectives for the four ADMM updates, written straight from the
// augmented Lagrangian: each constraint touching the variable contributes
// y*res + rho/2*res^2. Plus random draws of each subproblem.

#include <algorithm>
#include <cmath>
#include <random>

#include "lifemax/admm.hpp"
#include "support/oracles.hpp"

namespace subproblem {

using lifemax::FlowDiffSubproblem;
using lifemax::InverseLifetimeSubproblem;
using lifemax::Objective;
using lifemax::RateSubproblem;
using lifemax::SlackSubproblem;
using oracle::ScalarModel;

inline ScalarModel rate_model(const RateSubproblem& p) {
  ScalarModel m;
  m.rho = p.rho;
  m.lower = 0.0;
  m.terms.push_back({1.0, -p.reverse_rate - p.own_diff, p.own_lambda});        // r_ij - r_ji - A_ij
  m.terms.push_back({-1.0, p.reverse_rate - p.reverse_diff, p.reverse_lambda});  // r_ji - r_ij - A_ji
  if (p.has_energy_row) {
    m.terms.push_back({p.cost, p.other_load - (p.q - p.z) * p.energy, p.gamma});
  }
  return m;
}

inline ScalarModel q_model(const InverseLifetimeSubproblem& p) {
  ScalarModel m;
  m.rho = p.rho;
  m.head = p.objective == Objective::Linear ? ScalarModel::Head::Linear
                                            : ScalarModel::Head::Quadratic;
  if (p.has_energy_row) m.terms.push_back({-p.energy, p.load + p.z * p.energy, p.gamma});
  for (std::size_t k = 0; k < p.neighbor_q.size(); ++k) {
    m.terms.push_back({1.0, -p.neighbor_q[k], p.phi[k]});  // q_i - q_j
  }
  return m;
}

inline ScalarModel z_model(const SlackSubproblem& p) {
  ScalarModel m;
  m.rho = p.rho;
  m.lower = 0.0;
  m.terms.push_back({p.energy, p.load - p.q * p.energy, p.gamma});
  return m;
}

inline ScalarModel a_model(const FlowDiffSubproblem& p) {
  ScalarModel m;
  m.rho = p.rho;
  m.terms.push_back({-1.0, p.rate - p.reverse_rate, p.lambda});
  m.terms.push_back({1.0, p.other_diffs - p.gen_rate, p.mu});
  return m;
}

struct Verdict {
  bool matches = false;    // within 1e-8 of the oracle
  bool local_min = false;  // no better value at +-1e-6
  bool kkt = true;         // slope >= 0 when clipped to the bound
  bool ok() const { return matches && local_min && kkt; }
};

inline Verdict verify(const ScalarModel& m, double got) {
  Verdict v;
  v.matches = std::abs(got - oracle::minimize(m)) <= 1e-8;
  const double f = m.value(got);
  const double slack = 1e-12 * std::max(1.0, std::abs(f));
  v.local_min = f <= m.value(got + 1e-6) + slack;
  if (got - 1e-6 >= m.lower) v.local_min = v.local_min && f <= m.value(got - 1e-6) + slack;
  if (got == m.lower) v.kkt = m.slope(m.lower) >= -1e-10;
  return v;
}

struct Rng {
  std::mt19937_64 gen;
  explicit Rng(std::uint64_t seed) : gen(seed) {}
  double operator()(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(gen); }
};

// Call k of a batch; k picks the variant (no energy row every tenth call,
// alternating objectives, degrees 1..5).
inline RateSubproblem draw_rate(Rng& rng, int k) {
  RateSubproblem r;
  r.rho = rng(0.1, 50.0);
  r.reverse_rate = rng(0.0, 3.0);
  r.own_diff = rng(-3.0, 3.0);
  r.own_lambda = rng(-5.0, 5.0);
  r.reverse_diff = rng(-3.0, 3.0);
  r.reverse_lambda = rng(-5.0, 5.0);
  r.cost = rng(0.5, 2.5);
  r.other_load = rng(0.0, 5.0);
  r.q = rng(-1.0, 4.0);
  r.z = rng(0.0, 2.0);
  r.energy = rng(0.5, 5.0);
  r.gamma = rng(-5.0, 5.0);
  r.has_energy_row = k % 10 != 0;
  return r;
}

inline InverseLifetimeSubproblem draw_q(Rng& rng, int k) {
  InverseLifetimeSubproblem q;
  q.objective = k % 2 ? Objective::Linear : Objective::Quadratic;
  q.rho = rng(0.1, 50.0);
  q.load = rng(0.0, 6.0);
  q.z = rng(0.0, 2.0);
  q.energy = rng(0.5, 5.0);
  q.gamma = rng(-5.0, 5.0);
  q.has_energy_row = k % 10 != 0;
  const int deg = 1 + k % 5;
  for (int d = 0; d < deg; ++d) {
    q.neighbor_q.push_back(rng(-1.0, 4.0));
    q.phi.push_back(rng(-5.0, 5.0));
  }
  return q;
}

inline SlackSubproblem draw_z(Rng& rng) {
  SlackSubproblem z;
  z.rho = rng(0.1, 50.0);
  z.load = rng(0.0, 6.0);
  z.q = rng(-1.0, 4.0);
  z.energy = rng(0.5, 5.0);
  z.gamma = rng(-5.0, 5.0);
  return z;
}

inline FlowDiffSubproblem draw_a(Rng& rng) {
  FlowDiffSubproblem a;
  a.rho = rng(0.1, 50.0);
  a.rate = rng(0.0, 3.0);
  a.reverse_rate = rng(0.0, 3.0);
  a.lambda = rng(-5.0, 5.0);
  a.other_diffs = rng(-4.0, 4.0);
  a.gen_rate = rng(-3.0, 3.0);
  a.mu = rng(-5.0, 5.0);
  return a;
}

}  // namespace subproblem
