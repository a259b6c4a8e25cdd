#include "lifemax/lp_oracle.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "lifemax/error.hpp"

namespace lifemax {

LpProblem build_lp(const Topology& topo) {
  LpProblem lp;
  const std::size_t n = topo.node_count();
  lp.num_vars = 1 + topo.slot_count();
  lp.objective.assign(lp.num_vars, 0.0);
  lp.objective[kQColumn] = 1.0;

  // Flow conservation: sum_j (r_ij - r_ji) = g_i for every node.
  lp.eq_rows.assign(n, std::vector<double>(lp.num_vars, 0.0));
  lp.eq_rhs.assign(n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    const int id = static_cast<int>(i);
    for (std::size_t s = topo.slot_begin(id); s < topo.slot_end(id); ++s) {
      lp.eq_rows[i][rate_column(s)] += 1.0;
      lp.eq_rows[i][rate_column(topo.slot(s).mirror)] -= 1.0;
    }
    lp.eq_rhs[i] = topo.node(id).gen_rate;
  }
  lp.redundant_eq_row = 0;

  // Energy, divided through by T:  sum_j C_ij r_ij - q e_i <= 0.
  for (std::size_t i = 1; i < n; ++i) {
    const int id = static_cast<int>(i);
    std::vector<double> row(lp.num_vars, 0.0);
    for (std::size_t s = topo.slot_begin(id); s < topo.slot_end(id); ++s) {
      row[rate_column(s)] = topo.slot(s).cost;
    }
    row[kQColumn] = -topo.node(id).initial_energy;
    lp.le_rows.push_back(std::move(row));
    lp.le_rhs.push_back(0.0);
  }
  return lp;
}

namespace {

class Tableau {
 public:
  Tableau(std::size_t rows, std::size_t cols)
      : rows_(rows), cols_(cols), data_(rows * (cols + 1), 0.0), basis_(rows, 0) {}

  double& at(std::size_t r, std::size_t c) { return data_[r * (cols_ + 1) + c]; }
  double at(std::size_t r, std::size_t c) const { return data_[r * (cols_ + 1) + c]; }
  double& rhs(std::size_t r) { return at(r, cols_); }
  double rhs(std::size_t r) const { return at(r, cols_); }
  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  std::vector<std::size_t>& basis() { return basis_; }

  void pivot(std::size_t pr, std::size_t pc) {
    const double inv = 1.0 / at(pr, pc);
    for (std::size_t c = 0; c <= cols_; ++c) at(pr, c) *= inv;
    at(pr, pc) = 1.0;
    for (std::size_t r = 0; r < rows_; ++r) {
      if (r == pr) continue;
      const double f = at(r, pc);
      if (f == 0.0) continue;
      for (std::size_t c = 0; c <= cols_; ++c) at(r, c) -= f * at(pr, c);
      at(r, pc) = 0.0;
    }
    basis_[pr] = pc;
  }

  /// Reduced costs c_j - c_B' B^-1 A_j for every column.
  std::vector<double> reduced_costs(const std::vector<double>& cost) const {
    std::vector<double> d(cost);
    for (std::size_t r = 0; r < rows_; ++r) {
      const double cb = cost[basis_[r]];
      if (cb == 0.0) continue;
      for (std::size_t c = 0; c < cols_; ++c) d[c] -= cb * at(r, c);
    }
    return d;
  }

 private:
  std::size_t rows_;
  std::size_t cols_;
  std::vector<double> data_;
  std::vector<std::size_t> basis_;
};

enum class PhaseResult { Optimal, Unbounded };

// Bland's rule: lowest-index improving column, lowest-index basic variable
// among ratio ties. Terminates on degenerate problems.
PhaseResult run_phase(Tableau& t, const std::vector<double>& cost,
                      const std::vector<char>& may_enter, double tol, int& pivots) {
  const int limit = 50000;
  for (int iter = 0; iter < limit; ++iter) {
    const std::vector<double> d = t.reduced_costs(cost);
    std::size_t enter = t.cols();
    for (std::size_t c = 0; c < t.cols(); ++c) {
      if (may_enter[c] && d[c] < -tol) {
        enter = c;
        break;
      }
    }
    if (enter == t.cols()) return PhaseResult::Optimal;

    std::size_t leave = t.rows();
    double best = 0.0;
    for (std::size_t r = 0; r < t.rows(); ++r) {
      const double a = t.at(r, enter);
      if (a <= tol) continue;
      const double ratio = std::max(t.rhs(r), 0.0) / a;
      if (leave == t.rows() || ratio < best - tol) {
        best = ratio;
        leave = r;
      } else if (ratio <= best + tol && t.basis()[r] < t.basis()[leave]) {
        leave = r;
      }
    }
    if (leave == t.rows()) return PhaseResult::Unbounded;
    t.pivot(leave, enter);
    ++pivots;
  }
  throw Error(ErrorCode::NumericalDivergence, "simplex pivot limit exceeded");
}

}  // namespace

LpSolution solve_lp(const LpProblem& lp, double tol) {
  const std::size_t nv = lp.num_vars;
  std::vector<std::size_t> eq_keep;
  for (std::size_t r = 0; r < lp.eq_rows.size(); ++r) {
    if (static_cast<int>(r) != lp.redundant_eq_row) eq_keep.push_back(r);
  }
  const std::size_t m_eq = eq_keep.size();
  const std::size_t m_le = lp.le_rows.size();
  const std::size_t m = m_eq + m_le;

  // Column layout: originals | one slack/surplus per le row | one artificial per row.
  const std::size_t slack0 = nv;
  const std::size_t art0 = nv + m_le;
  const std::size_t ncols = art0 + m;
  Tableau t(m, ncols);
  std::vector<double> sign(m, 1.0);
  std::vector<std::size_t> identity_col(m);
  std::vector<char> needs_art(m, 0);

  for (std::size_t k = 0; k < m_eq; ++k) {
    const std::size_t src = eq_keep[k];
    sign[k] = lp.eq_rhs[src] < 0.0 ? -1.0 : 1.0;
    for (std::size_t c = 0; c < nv; ++c) t.at(k, c) = sign[k] * lp.eq_rows[src][c];
    t.rhs(k) = sign[k] * lp.eq_rhs[src];
    needs_art[k] = 1;
  }
  for (std::size_t k = 0; k < m_le; ++k) {
    const std::size_t r = m_eq + k;
    sign[r] = lp.le_rhs[k] < 0.0 ? -1.0 : 1.0;
    for (std::size_t c = 0; c < nv; ++c) t.at(r, c) = sign[r] * lp.le_rows[k][c];
    t.at(r, slack0 + k) = sign[r];
    t.rhs(r) = sign[r] * lp.le_rhs[k];
    needs_art[r] = sign[r] < 0.0 ? 1 : 0;
  }
  for (std::size_t r = 0; r < m; ++r) {
    if (needs_art[r]) {
      t.at(r, art0 + r) = 1.0;
      identity_col[r] = art0 + r;
    } else {
      identity_col[r] = slack0 + (r - m_eq);
    }
    t.basis()[r] = identity_col[r];
  }

  LpSolution sol;
  std::vector<char> may_enter(ncols, 1);
  for (std::size_t r = 0; r < m; ++r) {
    if (!needs_art[r]) may_enter[art0 + r] = 0;
  }

  std::vector<double> phase1_cost(ncols, 0.0);
  for (std::size_t r = 0; r < m; ++r) {
    if (needs_art[r]) phase1_cost[art0 + r] = 1.0;
  }
  run_phase(t, phase1_cost, may_enter, tol, sol.pivots);
  double infeas = 0.0;
  for (std::size_t r = 0; r < m; ++r) infeas += phase1_cost[t.basis()[r]] * t.rhs(r);
  if (infeas > tol * static_cast<double>(std::max<std::size_t>(m, 1))) {
    sol.status = LpStatus::Infeasible;
    return sol;
  }

  // Drive zero-level artificials out of the basis where possible.
  for (std::size_t r = 0; r < m; ++r) {
    if (t.basis()[r] < art0) continue;
    for (std::size_t c = 0; c < art0; ++c) {
      if (std::abs(t.at(r, c)) > tol) {
        t.pivot(r, c);
        ++sol.pivots;
        break;
      }
    }
  }
  for (std::size_t c = art0; c < ncols; ++c) may_enter[c] = 0;

  std::vector<double> cost(ncols, 0.0);
  for (std::size_t c = 0; c < nv; ++c) cost[c] = lp.objective[c];
  if (run_phase(t, cost, may_enter, tol, sol.pivots) == PhaseResult::Unbounded) {
    sol.status = LpStatus::Unbounded;
    return sol;
  }

  sol.status = LpStatus::Optimal;
  sol.x.assign(nv, 0.0);
  for (std::size_t r = 0; r < m; ++r) {
    if (t.basis()[r] < nv) sol.x[t.basis()[r]] = std::max(t.rhs(r), 0.0);
  }
  sol.objective = 0.0;
  for (std::size_t c = 0; c < nv; ++c) sol.objective += lp.objective[c] * sol.x[c];

  const std::vector<double> d = t.reduced_costs(cost);
  sol.eq_duals.assign(lp.eq_rows.size(), 0.0);
  for (std::size_t k = 0; k < m_eq; ++k) sol.eq_duals[eq_keep[k]] = -sign[k] * d[identity_col[k]];
  sol.le_duals.assign(m_le, 0.0);
  for (std::size_t k = 0; k < m_le; ++k) {
    const std::size_t r = m_eq + k;
    sol.le_duals[k] = -sign[r] * d[identity_col[r]];
  }
  return sol;
}

LpSolution solve_lifetime_lp(const Topology& topo) {
  LpSolution sol = solve_lp(build_lp(topo));
  if (sol.status == LpStatus::Infeasible) {
    throw Error(ErrorCode::Infeasible, "lifetime LP infeasible; topology must be connected");
  }
  if (sol.status == LpStatus::Unbounded) {
    throw Error(ErrorCode::Unbounded, "lifetime LP unbounded; model construction bug");
  }
  sol.q_star = sol.x[kQColumn];
  sol.lifetime = sol.q_star > 0.0 ? 1.0 / sol.q_star : kInfinity;
  sol.rates.assign(sol.x.begin() + 1, sol.x.end());
  return sol;
}

}  // namespace lifemax
