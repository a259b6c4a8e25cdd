/* C interface to the lifemax library. Every call returns a lifemax_status;
 * on failure lifemax_last_error() holds a message for the calling thread.
 * Objects are opaque and released with their matching _free function.
 * Strings returned through char** are released with lifemax_string_free. */
#ifndef LIFEMAX_H
#define LIFEMAX_H

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#  if defined(LIFEMAX_BUILD)
#    define LIFEMAX_API __declspec(dllexport)
#  else
#    define LIFEMAX_API __declspec(dllimport)
#  endif
#else
#  define LIFEMAX_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum lifemax_status {
  LIFEMAX_OK = 0,
  LIFEMAX_E_INVALID_PARAM = 1,
  LIFEMAX_E_CONNECTIVITY = 2,
  LIFEMAX_E_PARSE = 3,
  LIFEMAX_E_PROTOCOL = 4,
  LIFEMAX_E_DEGENERATE = 5,
  LIFEMAX_E_DIVERGENCE = 6,
  LIFEMAX_E_INFEASIBLE = 7,
  LIFEMAX_E_UNBOUNDED = 8,
  LIFEMAX_E_IO = 9,
  LIFEMAX_E_INTERNAL = 10
} lifemax_status;

typedef enum lifemax_solve_status {
  LIFEMAX_SOLVE_OPTIMAL = 0,
  LIFEMAX_SOLVE_CONVERGED = 1,
  LIFEMAX_SOLVE_STALLED = 2,
  LIFEMAX_SOLVE_MAX_ITER = 3
} lifemax_solve_status;

typedef struct lifemax_topology lifemax_topology;
typedef struct lifemax_result lifemax_result;
typedef struct lifemax_sweep lifemax_sweep;
typedef struct lifemax_comparison lifemax_comparison;

LIFEMAX_API const char* lifemax_version(void);
LIFEMAX_API const char* lifemax_status_string(lifemax_status status);
LIFEMAX_API const char* lifemax_last_error(void);
LIFEMAX_API void lifemax_string_free(char* s);

/* ---- topology ---- */

typedef struct lifemax_gen_params {
  int sensors;
  double radius;
  double comm_range;
  int sink_random; /* 0: disk centre */
  uint64_t seed;
  double alpha;
  double beta;
  double energy;
  double gen_rate;
  int max_attempts;
} lifemax_gen_params;

LIFEMAX_API void lifemax_gen_params_default(lifemax_gen_params* p);
LIFEMAX_API lifemax_status lifemax_topology_generate(const lifemax_gen_params* p,
                                                     lifemax_topology** out);
LIFEMAX_API lifemax_status lifemax_topology_from_json(const char* text, lifemax_topology** out);
LIFEMAX_API lifemax_status lifemax_topology_load(const char* path, lifemax_topology** out);
LIFEMAX_API lifemax_status lifemax_topology_to_json(const lifemax_topology* t, char** out);
LIFEMAX_API lifemax_status lifemax_topology_save(const lifemax_topology* t, const char* path);
/* Copy with every sensor energy multiplied by factor. */
LIFEMAX_API lifemax_status lifemax_topology_scale_energy(const lifemax_topology* t, double factor,
                                                         lifemax_topology** out);
LIFEMAX_API size_t lifemax_topology_node_count(const lifemax_topology* t);
LIFEMAX_API size_t lifemax_topology_edge_count(const lifemax_topology* t);
LIFEMAX_API int lifemax_topology_attempts(const lifemax_topology* t);
LIFEMAX_API void lifemax_topology_free(lifemax_topology* t);

/* ---- solver configs ---- */

typedef enum lifemax_objective { LIFEMAX_LINEAR = 0, LIFEMAX_QUADRATIC = 1 } lifemax_objective;
typedef enum lifemax_init {
  LIFEMAX_INIT_HEURISTIC = 0,
  LIFEMAX_INIT_ZERO = 1,
  LIFEMAX_INIT_CONSTANT = 2
} lifemax_init;
typedef enum lifemax_step_rule {
  LIFEMAX_STEP_HARMONIC = 0,    /* a / (b + k) */
  LIFEMAX_STEP_INVERSE_SQRT = 1 /* a / sqrt(b + k) */
} lifemax_step_rule;

typedef struct lifemax_admm_config {
  double rho;
  double eps;
  double eps_dual;
  int max_iter;
  lifemax_objective objective;
  lifemax_init init;
  double init_value;
  double divergence_bound;
  int early_stop;
} lifemax_admm_config;

typedef struct lifemax_subgrad_config {
  lifemax_step_rule rule;
  double step_a;
  double step_b;
  int max_iter;
  double eps;
  double gap_tol;
  int stall_window;
  double stall_tol;
  double divergence_bound;
  int early_stop;
  double r_max; /* <= 0: default box */
  double q_max;
} lifemax_subgrad_config;

LIFEMAX_API void lifemax_admm_config_default(lifemax_admm_config* c);
LIFEMAX_API void lifemax_subgrad_config_default(lifemax_subgrad_config* c);

/* ---- single solves ---- */

LIFEMAX_API lifemax_status lifemax_solve_lp(const lifemax_topology* t, lifemax_result** out);
LIFEMAX_API lifemax_status lifemax_solve_admm(const lifemax_topology* t,
                                              const lifemax_admm_config* c,
                                              lifemax_result** out);
/* with_oracle != 0 solves the LP first and stops on the oracle gap. */
LIFEMAX_API lifemax_status lifemax_solve_subgrad(const lifemax_topology* t,
                                                 const lifemax_subgrad_config* c, int with_oracle,
                                                 lifemax_result** out);
/* Attaches q* and the relative gap to a finished result. */
LIFEMAX_API lifemax_status lifemax_result_attach_oracle(lifemax_result* r, double q_star);

LIFEMAX_API lifemax_solve_status lifemax_result_status(const lifemax_result* r);
LIFEMAX_API int lifemax_result_iterations(const lifemax_result* r);
LIFEMAX_API double lifemax_result_q(const lifemax_result* r);
LIFEMAX_API double lifemax_result_lifetime(const lifemax_result* r);
LIFEMAX_API double lifemax_result_primal_norm(const lifemax_result* r);
LIFEMAX_API double lifemax_result_dual_norm(const lifemax_result* r);
LIFEMAX_API uint64_t lifemax_result_messages(const lifemax_result* r);
/* Returns 0 when no oracle value is attached. */
LIFEMAX_API int lifemax_result_gap(const lifemax_result* r, double* gap);
LIFEMAX_API lifemax_status lifemax_result_report_json(const lifemax_result* r, char** out);
LIFEMAX_API lifemax_status lifemax_result_write_report(const lifemax_result* r, const char* path);
LIFEMAX_API lifemax_status lifemax_result_write_trace(const lifemax_result* r, const char* path);
LIFEMAX_API void lifemax_result_free(lifemax_result* r);

/* ---- experiments ---- */

/* total = rounds * 2 * edges. per_node may be NULL; otherwise it holds
 * node_count entries. */
LIFEMAX_API lifemax_status lifemax_count_messages(const lifemax_topology* t, int rounds,
                                                  uint64_t* total, uint64_t* per_node);

LIFEMAX_API lifemax_status lifemax_rho_sweep(const lifemax_topology* t, const double* grid,
                                             size_t grid_len, int budget,
                                             const lifemax_admm_config* base, int jobs,
                                             lifemax_sweep** out);
LIFEMAX_API size_t lifemax_sweep_size(const lifemax_sweep* s);
/* -1 when every cell failed. */
LIFEMAX_API int lifemax_sweep_best(const lifemax_sweep* s);
LIFEMAX_API double lifemax_sweep_rho(const lifemax_sweep* s, size_t i);
/* NaN for failed cells. */
LIFEMAX_API double lifemax_sweep_gap(const lifemax_sweep* s, size_t i);
LIFEMAX_API int lifemax_sweep_failed(const lifemax_sweep* s, size_t i);
LIFEMAX_API lifemax_status lifemax_sweep_write_csv(const lifemax_sweep* s, const char* path);
LIFEMAX_API void lifemax_sweep_free(lifemax_sweep* s);

LIFEMAX_API lifemax_status lifemax_compare(const lifemax_topology* t,
                                           const lifemax_admm_config* admm,
                                           const lifemax_subgrad_config* subgrad, double target,
                                           lifemax_comparison** out);
/* -1 when the solver did not reach the target. */
LIFEMAX_API int lifemax_comparison_admm_iterations(const lifemax_comparison* c);
LIFEMAX_API int lifemax_comparison_subgrad_iterations(const lifemax_comparison* c);
LIFEMAX_API int lifemax_comparison_admm_rounds(const lifemax_comparison* c);
LIFEMAX_API int lifemax_comparison_subgrad_rounds(const lifemax_comparison* c);
/* Returns 0 when no ratio exists; *lower_bound is set when the subgradient
 * run ended before reaching the target. */
LIFEMAX_API int lifemax_comparison_ratio(const lifemax_comparison* c, double* ratio,
                                         int* lower_bound);
LIFEMAX_API double lifemax_comparison_admm_seconds(const lifemax_comparison* c);
LIFEMAX_API double lifemax_comparison_subgrad_seconds(const lifemax_comparison* c);
LIFEMAX_API lifemax_status lifemax_comparison_write_csv(const lifemax_comparison* c,
                                                        const char* path);
LIFEMAX_API lifemax_status lifemax_comparison_write_json(const lifemax_comparison* c,
                                                         const char* path);
LIFEMAX_API void lifemax_comparison_free(lifemax_comparison* c);

#ifdef __cplusplus
}
#endif

#endif /* LIFEMAX_H */
