#pragma once

#include <cstddef>
#include <vector>

#include "lifemax/net_model.hpp"

namespace lifemax {

/// Dense LP in the form  min c'x  s.t.  A_eq x = b_eq,  A_le x <= b_le,  x >= 0.
///
/// For the lifetime model, column 0 is the inverse lifetime q and column
/// 1 + s is the rate of topology slot s. Flow rows are ordered by node id
/// (row 0 is the sink); energy rows by sensor id (row k is sensor k + 1).
struct LpProblem {
  std::size_t num_vars = 0;
  std::vector<std::vector<double>> eq_rows;
  std::vector<double> eq_rhs;
  std::vector<std::vector<double>> le_rows;
  std::vector<double> le_rhs;
  std::vector<double> objective;
  /// Equality row known to be a linear combination of the others; the
  /// solver drops it before pivoting. -1 when none.
  int redundant_eq_row = -1;
};

enum class LpStatus { Optimal, Infeasible, Unbounded };

struct LpSolution {
  LpStatus status = LpStatus::Infeasible;
  double objective = 0.0;
  std::vector<double> x;
  std::vector<double> eq_duals;  // y for eq rows (0 for the dropped row)
  std::vector<double> le_duals;  // y <= 0 for le rows
  int pivots = 0;

  // Lifetime view, filled by solve_lifetime_lp.
  double q_star = 0.0;
  double lifetime = 0.0;          // 1 / q_star, kInfinity when q_star == 0
  std::vector<double> rates;      // per topology slot
};

inline constexpr std::size_t kQColumn = 0;
inline std::size_t rate_column(std::size_t slot) { return slot + 1; }

LpProblem build_lp(const Topology& topo);

/// Two-phase dense tableau simplex with Bland's rule. Deterministic.
LpSolution solve_lp(const LpProblem& problem, double tol = 1e-9);

/// build_lp + solve_lp, unpacking q*, T* and the slot rates. Throws
/// Error(Infeasible/Unbounded) since neither can happen on a valid topology.
LpSolution solve_lifetime_lp(const Topology& topo);

}  // namespace lifemax
