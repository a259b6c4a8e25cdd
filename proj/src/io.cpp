#include "lifemax/io.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <locale>

#include "json.hpp"

namespace lifemax {

using json = nlohmann::ordered_json;

std::string format_number(double value) {
  if (std::isnan(value)) return "nan";
  if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof buf, value);
  return std::string(buf, res.ptr);
}

namespace {

// Integer columns go through operator<<; pin the classic locale so a
// caller's grouping facet cannot leak into the files.
class ClassicLocale {
 public:
  explicit ClassicLocale(std::ostream& out) : out_(out), saved_(out.imbue(std::locale::classic())) {}
  ~ClassicLocale() { out_.imbue(saved_); }
  ClassicLocale(const ClassicLocale&) = delete;
  ClassicLocale& operator=(const ClassicLocale&) = delete;

 private:
  std::ostream& out_;
  std::locale saved_;
};

void write_comments(std::ostream& out, const std::vector<std::string>& comments) {
  for (const std::string& c : comments) out << "# " << c << '\n';
}

json number_or_null(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

json residuals_json(const ResidualReport& r) {
  json j;
  j["primal_norm"] = number_or_null(r.primal_norm);
  j["dual_norm"] = number_or_null(r.dual_norm);
  j["vI"] = number_or_null(r.v_flow_diff);
  j["vII"] = number_or_null(r.v_conservation);
  j["vIII"] = number_or_null(r.v_energy);
  j["vIV"] = number_or_null(r.v_consensus);
  j["total_violation"] = number_or_null(r.total_violation);
  return j;
}

}  // namespace

void write_trace_csv(std::ostream& out, const std::vector<IterationTrace>& trace,
                     const std::vector<std::string>& comments) {
  const ClassicLocale classic(out);
  write_comments(out, comments);
  out << kTraceHeader << '\n';
  for (const IterationTrace& row : trace) {
    const ResidualReport& r = row.residuals;
    const std::string tail = format_number(r.primal_norm) + ',' + format_number(r.dual_norm) +
                             ',' + format_number(r.v_flow_diff) + ',' +
                             format_number(r.v_conservation) + ',' + format_number(r.v_energy) +
                             ',' + format_number(r.v_consensus) + ',' +
                             std::to_string(row.messages_cum);
    for (std::size_t i = 0; i < row.q.size(); ++i) {
      const double z = i < row.z.size() ? row.z[i] : 0.0;
      out << row.iter << ',' << i << ',' << format_number(row.q[i]) << ',' << format_number(z)
          << ',' << tail << '\n';
    }
  }
}

SolveReport lp_report(const Topology& topo, const LpSolution& solution) {
  SolveReport rep;
  rep.algorithm = "lp";
  rep.status = SolveStatus::Optimal;
  rep.iterations = solution.pivots;
  rep.q_estimate = solution.q_star;
  rep.lifetime = solution.lifetime;
  rep.q.assign(topo.node_count(), solution.q_star);
  rep.rates = solution.rates;
  attach_oracle(rep, solution.q_star);
  return rep;
}

std::string report_to_json(const Topology& topo, const SolveReport& report, int indent) {
  json doc;
  doc["algorithm"] = report.algorithm;
  doc["status"] = to_string(report.status);
  doc["iterations"] = report.iterations;
  doc["q_estimate"] = number_or_null(report.q_estimate);
  doc["lifetime"] = number_or_null(report.lifetime);
  doc["q_star"] = report.q_star ? number_or_null(*report.q_star) : json(nullptr);
  doc["lifetime_star"] =
      report.q_star ? (*report.q_star > 0.0 ? json(1.0 / *report.q_star) : json(nullptr))
                    : json(nullptr);
  doc["relative_gap"] = report.relative_gap ? number_or_null(*report.relative_gap) : json(nullptr);
  doc["messages"] = report.messages;
  doc["residuals"] = residuals_json(report.residuals);
  json q = json::array();
  for (double v : report.q) q.push_back(number_or_null(v));
  doc["q"] = std::move(q);
  json rates = json::array();
  for (std::size_t s = 0; s < report.rates.size() && s < topo.slot_count(); ++s) {
    rates.push_back({{"i", topo.slot_owner(s)},
                     {"j", topo.slot(s).node},
                     {"r", number_or_null(report.rates[s])}});
  }
  doc["rates"] = std::move(rates);
  return doc.dump(indent) + "\n";
}

void write_sweep_csv(std::ostream& out, const SweepResult& sweep,
                     const std::vector<std::string>& comments) {
  const ClassicLocale classic(out);
  write_comments(out, comments);
  out << "# q_star=" << format_number(sweep.q_star) << " budget=" << sweep.budget
      << " normalization=" << sweep.normalization << '\n';
  out << "rho,gap,primal_norm,dual_norm,iters,norm_gap,norm_primal,norm_dual,failed,best\n";
  for (std::size_t i = 0; i < sweep.cells.size(); ++i) {
    const SweepCell& c = sweep.cells[i];
    out << format_number(c.rho) << ',';
    if (c.failed) {
      out << "nan,nan,nan," << c.iterations << ",nan,nan,nan,1,";
    } else {
      out << format_number(c.gap) << ',' << format_number(c.primal_norm) << ','
          << format_number(c.dual_norm) << ',' << c.iterations << ','
          << format_number(c.norm_gap) << ',' << format_number(c.norm_primal) << ','
          << format_number(c.norm_dual) << ",0,";
    }
    out << (static_cast<int>(i) == sweep.best ? 1 : 0) << '\n';
  }
}

void write_compare_csv(std::ostream& out, const Topology& topo, const CompareRecord& record,
                       const std::vector<std::string>& comments) {
  const ClassicLocale classic(out);
  write_comments(out, comments);
  out << "# q_star=" << format_number(record.q_star)
      << " target=" << format_number(record.target) << '\n';
  out << "iter";
  for (std::size_t i = 0; i < topo.node_count(); ++i) out << ",admm_q" << i;
  out << ",admm_q_mean,admm_total,admm_vI,admm_vII,admm_vIII,admm_vIV,admm_primal,admm_dual"
      << ",subgrad_q,subgrad_lifetime,subgrad_dual_bound,subgrad_primal\n";

  const std::vector<IterationTrace>& a = record.admm.trace;
  const std::vector<IterationTrace>& s = record.subgrad.trace;
  const std::size_t rows = std::max(a.size(), s.size());
  for (std::size_t k = 0; k < rows; ++k) {
    out << k + 1;
    if (k < a.size()) {
      const IterationTrace& row = a[k];
      for (double q : row.q) out << ',' << format_number(q);
      const ResidualReport& r = row.residuals;
      out << ',' << format_number(row.q_estimate) << ',' << format_number(r.total_violation)
          << ',' << format_number(r.v_flow_diff) << ',' << format_number(r.v_conservation)
          << ',' << format_number(r.v_energy) << ',' << format_number(r.v_consensus) << ','
          << format_number(r.primal_norm) << ',' << format_number(r.dual_norm);
    } else {
      for (std::size_t i = 0; i < topo.node_count() + 8; ++i) out << ',';
    }
    if (k < s.size()) {
      const IterationTrace& row = s[k];
      const double life = row.q_estimate > 0.0 ? 1.0 / row.q_estimate : kInfinity;
      out << ',' << format_number(row.q_estimate) << ',' << format_number(life) << ','
          << format_number(row.dual_value) << ',' << format_number(row.residuals.primal_norm);
    } else {
      out << ",,,,";
    }
    out << '\n';
  }
}

std::string compare_to_json(const CompareRecord& record, int indent) {
  auto outcome = [](const SolverOutcome& o) {
    json j;
    j["algorithm"] = o.algorithm;
    j["status"] = o.failed ? "diverged" : to_string(o.status);
    j["iterations_run"] = o.iterations_run;
    j["iterations_to_target"] =
        o.iterations_to_target ? json(*o.iterations_to_target) : json(nullptr);
    j["messages_to_target"] = o.iterations_to_target ? json(o.messages_to_target) : json(nullptr);
    j["timed_out"] = o.timed_out;
    j["final_gap"] = number_or_null(o.final_gap);
    if (o.failed) j["error"] = o.error;
    return j;
  };
  json doc;
  doc["q_star"] = number_or_null(record.q_star);
  doc["target"] = record.target;
  doc["admm"] = outcome(record.admm);
  doc["subgrad"] = outcome(record.subgrad);
  doc["ratio"] = record.ratio ? number_or_null(*record.ratio) : json(nullptr);
  doc["ratio_is_lower_bound"] = record.ratio_is_lower_bound;
  return doc.dump(indent) + "\n";
}

}  // namespace lifemax
