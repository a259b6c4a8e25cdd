#include "lifemax/lifemax.h"

#include <cmath>
#include <cstdlib>
#include <cstring>
#include <fstream>
#include <limits>
#include <new>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "lifemax/admm.hpp"
#include "lifemax/error.hpp"
#include "lifemax/harness.hpp"
#include "lifemax/io.hpp"
#include "lifemax/lp_oracle.hpp"
#include "lifemax/net_model.hpp"
#include "lifemax/subgradient.hpp"

struct lifemax_topology {
  lifemax::Topology topo;
};

struct lifemax_result {
  lifemax::Topology topo;
  lifemax::SolveReport report;
  std::vector<lifemax::IterationTrace> trace;
};

struct lifemax_sweep {
  lifemax::SweepResult sweep;
};

struct lifemax_comparison {
  lifemax::Topology topo;
  lifemax::CompareRecord record;
};

namespace {

thread_local std::string g_last_error;

lifemax_status code_of(lifemax::ErrorCode c) {
  using lifemax::ErrorCode;
  switch (c) {
    case ErrorCode::InvalidParam: return LIFEMAX_E_INVALID_PARAM;
    case ErrorCode::ConnectivityFailure: return LIFEMAX_E_CONNECTIVITY;
    case ErrorCode::ParseError: return LIFEMAX_E_PARSE;
    case ErrorCode::ProtocolViolation: return LIFEMAX_E_PROTOCOL;
    case ErrorCode::DegenerateNode: return LIFEMAX_E_DEGENERATE;
    case ErrorCode::NumericalDivergence: return LIFEMAX_E_DIVERGENCE;
    case ErrorCode::Infeasible: return LIFEMAX_E_INFEASIBLE;
    case ErrorCode::Unbounded: return LIFEMAX_E_UNBOUNDED;
  }
  return LIFEMAX_E_INTERNAL;
}

lifemax_status fail(lifemax_status s, std::string msg) {
  g_last_error = std::move(msg);
  return s;
}

// Runs `body`, mapping exceptions onto status codes.
template <class F>
lifemax_status guarded(F&& body) {
  try {
    g_last_error.clear();
    return body();
  } catch (const lifemax::Error& e) {
    return fail(code_of(e.code()), e.what());
  } catch (const std::bad_alloc&) {
    return fail(LIFEMAX_E_INTERNAL, "out of memory");
  } catch (const std::exception& e) {
    return fail(LIFEMAX_E_INTERNAL, e.what());
  }
}

char* dup_string(const std::string& s) {
  char* out = static_cast<char*>(std::malloc(s.size() + 1));
  if (!out) throw std::bad_alloc();
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

lifemax_status write_file(const char* path, const std::string& text) {
  if (!path) return fail(LIFEMAX_E_INVALID_PARAM, "null path");
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) return fail(LIFEMAX_E_IO, std::string("cannot open ") + path + " for writing");
  out << text;
  out.close();
  if (!out) return fail(LIFEMAX_E_IO, std::string("write failed: ") + path);
  return LIFEMAX_OK;
}

lifemax::AdmmConfig to_cpp(const lifemax_admm_config& c) {
  lifemax::AdmmConfig out;
  out.rho = c.rho;
  out.eps = c.eps;
  out.eps_dual = c.eps_dual;
  out.max_iter = c.max_iter;
  switch (c.objective) {
    case LIFEMAX_LINEAR: out.objective = lifemax::Objective::Linear; break;
    case LIFEMAX_QUADRATIC: out.objective = lifemax::Objective::Quadratic; break;
    default: throw lifemax::Error(lifemax::ErrorCode::InvalidParam, "unknown objective");
  }
  switch (c.init) {
    case LIFEMAX_INIT_HEURISTIC: out.init.kind = lifemax::AdmmInit::Kind::Heuristic; break;
    case LIFEMAX_INIT_ZERO: out.init.kind = lifemax::AdmmInit::Kind::Zero; break;
    case LIFEMAX_INIT_CONSTANT: out.init.kind = lifemax::AdmmInit::Kind::Constant; break;
    default: throw lifemax::Error(lifemax::ErrorCode::InvalidParam, "unknown init policy");
  }
  out.init.value = c.init_value;
  out.divergence_bound = c.divergence_bound;
  out.early_stop = c.early_stop != 0;
  out.validate();
  return out;
}

lifemax::SubgradConfig to_cpp(const lifemax_subgrad_config& c) {
  lifemax::SubgradConfig out;
  switch (c.rule) {
    case LIFEMAX_STEP_HARMONIC: out.rule = lifemax::StepRule::Harmonic; break;
    case LIFEMAX_STEP_INVERSE_SQRT: out.rule = lifemax::StepRule::InverseSqrt; break;
    default: throw lifemax::Error(lifemax::ErrorCode::InvalidParam, "unknown step rule");
  }
  out.step_a = c.step_a;
  out.step_b = c.step_b;
  out.max_iter = c.max_iter;
  out.eps = c.eps;
  out.gap_tol = c.gap_tol;
  out.stall_window = c.stall_window;
  out.stall_tol = c.stall_tol;
  out.divergence_bound = c.divergence_bound;
  out.early_stop = c.early_stop != 0;
  out.r_max = c.r_max;
  out.q_max = c.q_max;
  out.validate();
  return out;
}

#define LIFEMAX_REQUIRE(cond, msg) \
  do {                             \
    if (!(cond)) return fail(LIFEMAX_E_INVALID_PARAM, msg); \
  } while (0)

}  // namespace

extern "C" {

const char* lifemax_version(void) { return "1.0.0"; }

const char* lifemax_status_string(lifemax_status status) {
  switch (status) {
    case LIFEMAX_OK: return "ok";
    case LIFEMAX_E_INVALID_PARAM: return "invalid parameter";
    case LIFEMAX_E_CONNECTIVITY: return "connectivity failure";
    case LIFEMAX_E_PARSE: return "parse error";
    case LIFEMAX_E_PROTOCOL: return "protocol violation";
    case LIFEMAX_E_DEGENERATE: return "degenerate node";
    case LIFEMAX_E_DIVERGENCE: return "numerical divergence";
    case LIFEMAX_E_INFEASIBLE: return "infeasible";
    case LIFEMAX_E_UNBOUNDED: return "unbounded";
    case LIFEMAX_E_IO: return "i/o error";
    case LIFEMAX_E_INTERNAL: return "internal error";
  }
  return "unknown status";
}

const char* lifemax_last_error(void) { return g_last_error.c_str(); }

void lifemax_string_free(char* s) { std::free(s); }

void lifemax_gen_params_default(lifemax_gen_params* p) {
  if (!p) return;
  const lifemax::GenerateParams d;
  p->sensors = d.sensors;
  p->radius = d.radius;
  p->comm_range = d.comm_range;
  p->sink_random = d.sink_placement == lifemax::SinkPlacement::Random ? 1 : 0;
  p->seed = d.seed;
  p->alpha = d.radio.alpha;
  p->beta = d.radio.beta;
  p->energy = d.initial_energy;
  p->gen_rate = d.gen_rate;
  p->max_attempts = d.max_attempts;
}

lifemax_status lifemax_topology_generate(const lifemax_gen_params* p, lifemax_topology** out) {
  LIFEMAX_REQUIRE(p && out, "null argument");
  return guarded([&] {
    lifemax::GenerateParams gp;
    gp.sensors = p->sensors;
    gp.radius = p->radius;
    gp.comm_range = p->comm_range;
    gp.sink_placement =
        p->sink_random ? lifemax::SinkPlacement::Random : lifemax::SinkPlacement::Center;
    gp.seed = p->seed;
    gp.radio = {p->alpha, p->beta};
    gp.initial_energy = p->energy;
    gp.gen_rate = p->gen_rate;
    gp.max_attempts = p->max_attempts;
    *out = new lifemax_topology{lifemax::generate_topology(gp)};
    return LIFEMAX_OK;
  });
}

lifemax_status lifemax_topology_from_json(const char* text, lifemax_topology** out) {
  LIFEMAX_REQUIRE(text && out, "null argument");
  return guarded([&] {
    *out = new lifemax_topology{lifemax::topology_from_json(text)};
    return LIFEMAX_OK;
  });
}

lifemax_status lifemax_topology_load(const char* path, lifemax_topology** out) {
  LIFEMAX_REQUIRE(path && out, "null argument");
  std::ifstream in(path, std::ios::binary);
  if (!in) return fail(LIFEMAX_E_IO, std::string("cannot open ") + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return lifemax_topology_from_json(buf.str().c_str(), out);
}

lifemax_status lifemax_topology_to_json(const lifemax_topology* t, char** out) {
  LIFEMAX_REQUIRE(t && out, "null argument");
  return guarded([&] {
    *out = dup_string(lifemax::to_json(t->topo, 2) + "\n");
    return LIFEMAX_OK;
  });
}

lifemax_status lifemax_topology_save(const lifemax_topology* t, const char* path) {
  LIFEMAX_REQUIRE(t, "null topology");
  return guarded([&] { return write_file(path, lifemax::to_json(t->topo, 2) + "\n"); });
}

lifemax_status lifemax_topology_scale_energy(const lifemax_topology* t, double factor,
                                             lifemax_topology** out) {
  LIFEMAX_REQUIRE(t && out, "null argument");
  return guarded([&] {
    *out = new lifemax_topology{lifemax::scale_energy(t->topo, factor)};
    return LIFEMAX_OK;
  });
}

size_t lifemax_topology_node_count(const lifemax_topology* t) { return t ? t->topo.node_count() : 0; }
size_t lifemax_topology_edge_count(const lifemax_topology* t) { return t ? t->topo.edge_count() : 0; }
int lifemax_topology_attempts(const lifemax_topology* t) {
  return t ? t->topo.metadata().attempts : 0;
}
void lifemax_topology_free(lifemax_topology* t) { delete t; }

void lifemax_admm_config_default(lifemax_admm_config* c) {
  if (!c) return;
  const lifemax::AdmmConfig d;
  c->rho = d.rho;
  c->eps = d.eps;
  c->eps_dual = d.eps_dual;
  c->max_iter = d.max_iter;
  c->objective = LIFEMAX_LINEAR;
  c->init = LIFEMAX_INIT_HEURISTIC;
  c->init_value = d.init.value;
  c->divergence_bound = d.divergence_bound;
  c->early_stop = d.early_stop ? 1 : 0;
}

void lifemax_subgrad_config_default(lifemax_subgrad_config* c) {
  if (!c) return;
  const lifemax::SubgradConfig d;
  c->rule = LIFEMAX_STEP_HARMONIC;
  c->step_a = d.step_a;
  c->step_b = d.step_b;
  c->max_iter = d.max_iter;
  c->eps = d.eps;
  c->gap_tol = d.gap_tol;
  c->stall_window = d.stall_window;
  c->stall_tol = d.stall_tol;
  c->divergence_bound = d.divergence_bound;
  c->early_stop = d.early_stop ? 1 : 0;
  c->r_max = d.r_max;
  c->q_max = d.q_max;
}

lifemax_status lifemax_solve_lp(const lifemax_topology* t, lifemax_result** out) {
  LIFEMAX_REQUIRE(t && out, "null argument");
  return guarded([&] {
    const lifemax::LpSolution sol = lifemax::solve_lifetime_lp(t->topo);
    *out = new lifemax_result{t->topo, lifemax::lp_report(t->topo, sol), {}};
    return LIFEMAX_OK;
  });
}

lifemax_status lifemax_solve_admm(const lifemax_topology* t, const lifemax_admm_config* c,
                                  lifemax_result** out) {
  LIFEMAX_REQUIRE(t && c && out, "null argument");
  return guarded([&] {
    lifemax::AdmmResult r = lifemax::run_admm(t->topo, to_cpp(*c));
    *out = new lifemax_result{t->topo, std::move(r.report), std::move(r.trace)};
    return LIFEMAX_OK;
  });
}

lifemax_status lifemax_solve_subgrad(const lifemax_topology* t, const lifemax_subgrad_config* c,
                                     int with_oracle, lifemax_result** out) {
  LIFEMAX_REQUIRE(t && c && out, "null argument");
  return guarded([&] {
    std::optional<double> q_star;
    if (with_oracle) q_star = lifemax::solve_lifetime_lp(t->topo).q_star;
    lifemax::SubgradResult r = lifemax::run_subgradient(t->topo, to_cpp(*c), q_star);
    *out = new lifemax_result{t->topo, std::move(r.report), std::move(r.trace)};
    return LIFEMAX_OK;
  });
}

lifemax_status lifemax_result_attach_oracle(lifemax_result* r, double q_star) {
  LIFEMAX_REQUIRE(r, "null result");
  LIFEMAX_REQUIRE(std::isfinite(q_star) && q_star >= 0.0, "q_star must be finite and >= 0");
  lifemax::attach_oracle(r->report, q_star);
  return LIFEMAX_OK;
}

lifemax_solve_status lifemax_result_status(const lifemax_result* r) {
  if (!r) return LIFEMAX_SOLVE_MAX_ITER;
  switch (r->report.status) {
    case lifemax::SolveStatus::Optimal: return LIFEMAX_SOLVE_OPTIMAL;
    case lifemax::SolveStatus::Converged: return LIFEMAX_SOLVE_CONVERGED;
    case lifemax::SolveStatus::Stalled: return LIFEMAX_SOLVE_STALLED;
    case lifemax::SolveStatus::MaxIterations: return LIFEMAX_SOLVE_MAX_ITER;
  }
  return LIFEMAX_SOLVE_MAX_ITER;
}

int lifemax_result_iterations(const lifemax_result* r) { return r ? r->report.iterations : 0; }
double lifemax_result_q(const lifemax_result* r) {
  return r ? r->report.q_estimate : std::numeric_limits<double>::quiet_NaN();
}
double lifemax_result_lifetime(const lifemax_result* r) {
  return r ? r->report.lifetime : std::numeric_limits<double>::quiet_NaN();
}
double lifemax_result_primal_norm(const lifemax_result* r) {
  return r ? r->report.residuals.primal_norm : std::numeric_limits<double>::quiet_NaN();
}
double lifemax_result_dual_norm(const lifemax_result* r) {
  return r ? r->report.residuals.dual_norm : std::numeric_limits<double>::quiet_NaN();
}
uint64_t lifemax_result_messages(const lifemax_result* r) { return r ? r->report.messages : 0; }

int lifemax_result_gap(const lifemax_result* r, double* gap) {
  if (!r || !r->report.relative_gap) return 0;
  if (gap) *gap = *r->report.relative_gap;
  return 1;
}

lifemax_status lifemax_result_report_json(const lifemax_result* r, char** out) {
  LIFEMAX_REQUIRE(r && out, "null argument");
  return guarded([&] {
    *out = dup_string(lifemax::report_to_json(r->topo, r->report));
    return LIFEMAX_OK;
  });
}

lifemax_status lifemax_result_write_report(const lifemax_result* r, const char* path) {
  LIFEMAX_REQUIRE(r, "null result");
  return guarded([&] { return write_file(path, lifemax::report_to_json(r->topo, r->report)); });
}

lifemax_status lifemax_result_write_trace(const lifemax_result* r, const char* path) {
  LIFEMAX_REQUIRE(r, "null result");
  return guarded([&] {
    std::ostringstream out;
    lifemax::write_trace_csv(out, r->trace,
                             {"algorithm=" + r->report.algorithm,
                              "nodes=" + std::to_string(r->topo.node_count()) +
                                  " edges=" + std::to_string(r->topo.edge_count())});
    return write_file(path, out.str());
  });
}

void lifemax_result_free(lifemax_result* r) { delete r; }

lifemax_status lifemax_count_messages(const lifemax_topology* t, int rounds, uint64_t* total,
                                      uint64_t* per_node) {
  LIFEMAX_REQUIRE(t && total, "null argument");
  return guarded([&] {
    const lifemax::MessageLedger ledger = lifemax::count_messages(t->topo, rounds);
    *total = ledger.total;
    if (per_node) {
      for (std::size_t i = 0; i < ledger.per_node.size(); ++i) per_node[i] = ledger.per_node[i];
    }
    return LIFEMAX_OK;
  });
}

lifemax_status lifemax_rho_sweep(const lifemax_topology* t, const double* grid, size_t grid_len,
                                 int budget, const lifemax_admm_config* base, int jobs,
                                 lifemax_sweep** out) {
  LIFEMAX_REQUIRE(t && base && out, "null argument");
  LIFEMAX_REQUIRE(grid && grid_len > 0, "empty rho grid");
  return guarded([&] {
    const lifemax::AdmmConfig config = to_cpp(*base);
    const double q_star = lifemax::solve_lifetime_lp(t->topo).q_star;
    *out = new lifemax_sweep{lifemax::rho_sweep(t->topo, std::span(grid, grid_len), budget,
                                                config, q_star, jobs)};
    return LIFEMAX_OK;
  });
}

size_t lifemax_sweep_size(const lifemax_sweep* s) { return s ? s->sweep.cells.size() : 0; }
int lifemax_sweep_best(const lifemax_sweep* s) { return s ? s->sweep.best : -1; }
double lifemax_sweep_rho(const lifemax_sweep* s, size_t i) {
  if (!s || i >= s->sweep.cells.size()) return std::numeric_limits<double>::quiet_NaN();
  return s->sweep.cells[i].rho;
}
double lifemax_sweep_gap(const lifemax_sweep* s, size_t i) {
  if (!s || i >= s->sweep.cells.size() || s->sweep.cells[i].failed) {
    return std::numeric_limits<double>::quiet_NaN();
  }
  return s->sweep.cells[i].gap;
}
int lifemax_sweep_failed(const lifemax_sweep* s, size_t i) {
  if (!s || i >= s->sweep.cells.size()) return 1;
  return s->sweep.cells[i].failed ? 1 : 0;
}

lifemax_status lifemax_sweep_write_csv(const lifemax_sweep* s, const char* path) {
  LIFEMAX_REQUIRE(s, "null sweep");
  return guarded([&] {
    std::ostringstream out;
    lifemax::write_sweep_csv(out, s->sweep);
    return write_file(path, out.str());
  });
}

void lifemax_sweep_free(lifemax_sweep* s) { delete s; }

lifemax_status lifemax_compare(const lifemax_topology* t, const lifemax_admm_config* admm,
                               const lifemax_subgrad_config* subgrad, double target,
                               lifemax_comparison** out) {
  LIFEMAX_REQUIRE(t && admm && subgrad && out, "null argument");
  return guarded([&] {
    const lifemax::AdmmConfig a = to_cpp(*admm);
    const lifemax::SubgradConfig s = to_cpp(*subgrad);
    const double q_star = lifemax::solve_lifetime_lp(t->topo).q_star;
    *out = new lifemax_comparison{t->topo, lifemax::compare(t->topo, a, s, q_star, target)};
    return LIFEMAX_OK;
  });
}

int lifemax_comparison_admm_iterations(const lifemax_comparison* c) {
  return c && c->record.admm.iterations_to_target ? *c->record.admm.iterations_to_target : -1;
}
int lifemax_comparison_subgrad_iterations(const lifemax_comparison* c) {
  return c && c->record.subgrad.iterations_to_target ? *c->record.subgrad.iterations_to_target
                                                     : -1;
}
int lifemax_comparison_admm_rounds(const lifemax_comparison* c) {
  return c ? c->record.admm.iterations_run : 0;
}
int lifemax_comparison_subgrad_rounds(const lifemax_comparison* c) {
  return c ? c->record.subgrad.iterations_run : 0;
}

int lifemax_comparison_ratio(const lifemax_comparison* c, double* ratio, int* lower_bound) {
  if (!c || !c->record.ratio) return 0;
  if (ratio) *ratio = *c->record.ratio;
  if (lower_bound) *lower_bound = c->record.ratio_is_lower_bound ? 1 : 0;
  return 1;
}

double lifemax_comparison_admm_seconds(const lifemax_comparison* c) {
  return c ? c->record.admm.wall_seconds : 0.0;
}
double lifemax_comparison_subgrad_seconds(const lifemax_comparison* c) {
  return c ? c->record.subgrad.wall_seconds : 0.0;
}

lifemax_status lifemax_comparison_write_csv(const lifemax_comparison* c, const char* path) {
  LIFEMAX_REQUIRE(c, "null comparison");
  return guarded([&] {
    std::ostringstream out;
    lifemax::write_compare_csv(out, c->topo, c->record);
    return write_file(path, out.str());
  });
}

lifemax_status lifemax_comparison_write_json(const lifemax_comparison* c, const char* path) {
  LIFEMAX_REQUIRE(c, "null comparison");
  return guarded([&] { return write_file(path, lifemax::compare_to_json(c->record)); });
}

void lifemax_comparison_free(lifemax_comparison* c) { delete c; }

}  // extern "C"
