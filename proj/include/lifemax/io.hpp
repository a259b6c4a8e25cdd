#pragma once

#include <ostream>
#include <string>
#include <string_view>
#include <vector>

#include "lifemax/harness.hpp"
#include "lifemax/lp_oracle.hpp"
#include "lifemax/net_model.hpp"
#include "lifemax/report.hpp"

namespace lifemax {

/// Shortest round-trip decimal, '.' separator in every locale. "inf",
/// "-inf" and "nan" for the non-finite values.
std::string format_number(double value);

inline constexpr std::string_view kTraceHeader =
    "iter,node_id,q,z,primal_norm,dual_norm,vI,vII,vIII,vIV,messages_cum";

/// One row per node per iteration. `comments` become leading '#' lines.
void write_trace_csv(std::ostream& out, const std::vector<IterationTrace>& trace,
                     const std::vector<std::string>& comments = {});

/// Solver summary for the CLI; the LP report carries q*, T* and r*.
std::string report_to_json(const Topology& topo, const SolveReport& report, int indent = 2);
SolveReport lp_report(const Topology& topo, const LpSolution& solution);

void write_sweep_csv(std::ostream& out, const SweepResult& sweep,
                     const std::vector<std::string>& comments = {});

/// Fig. 2-5 style columns: ADMM q_i per node, ADMM violations, subgradient
/// q estimate and best dual bound. Rows run to the longer trace; a trace
/// that ended earlier leaves its cells empty.
void write_compare_csv(std::ostream& out, const Topology& topo, const CompareRecord& record,
                       const std::vector<std::string>& comments = {});

/// Iterations, messages and gaps of both solvers. No wall times, so the
/// document is reproducible.
std::string compare_to_json(const CompareRecord& record, int indent = 2);

}  // namespace lifemax
