#include "lifemax/report.hpp"

#include <cmath>

namespace lifemax {

const char* to_string(SolveStatus status) {
  switch (status) {
    case SolveStatus::Optimal: return "optimal";
    case SolveStatus::Converged: return "converged";
    case SolveStatus::Stalled: return "stalled";
    case SolveStatus::MaxIterations: return "max_iter";
  }
  return "unknown";
}

void attach_oracle(SolveReport& report, double q_star) {
  report.q_star = q_star;
  const double diff = std::abs(report.q_estimate - q_star);
  report.relative_gap = q_star > 0.0 ? diff / q_star : diff;
}

}  // namespace lifemax
