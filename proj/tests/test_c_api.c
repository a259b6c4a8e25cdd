/* Exercises the shared library through its C header only. */
#include <math.h>
#include <stdio.h>
#include <stdlib.h>
#include <string.h>

#include "lifemax/lifemax.h"

static int failures = 0;

#define EXPECT(cond)                                                    \
  do {                                                                  \
    if (!(cond)) {                                                      \
      fprintf(stderr, "%s:%d: expected %s\n", __FILE__, __LINE__, #cond); \
      ++failures;                                                       \
    }                                                                   \
  } while (0)

static lifemax_topology* generate(int sensors, uint64_t seed) {
  lifemax_gen_params p;
  lifemax_topology* t = NULL;
  lifemax_gen_params_default(&p);
  p.sensors = sensors;
  p.seed = seed;
  if (lifemax_topology_generate(&p, &t) != LIFEMAX_OK) {
    fprintf(stderr, "generate failed: %s\n", lifemax_last_error());
    exit(1);
  }
  return t;
}

static void topology_calls(const char* dir) {
  lifemax_gen_params p;
  lifemax_topology* t = NULL;
  lifemax_topology* back = NULL;
  lifemax_topology* scaled = NULL;
  char* a = NULL;
  char* b = NULL;
  char path[512];

  lifemax_gen_params_default(&p);
  EXPECT(p.sensors == 15);
  EXPECT(p.beta == 0.001);
  p.sensors = 0;
  EXPECT(lifemax_topology_generate(&p, &t) == LIFEMAX_E_INVALID_PARAM);
  EXPECT(t == NULL);
  EXPECT(strlen(lifemax_last_error()) > 0);

  lifemax_gen_params_default(&p);
  p.comm_range = 1.0;
  p.max_attempts = 3;
  EXPECT(lifemax_topology_generate(&p, &t) == LIFEMAX_E_CONNECTIVITY);

  EXPECT(lifemax_topology_from_json("{broken", &t) == LIFEMAX_E_PARSE);
  EXPECT(lifemax_topology_generate(NULL, &t) == LIFEMAX_E_INVALID_PARAM);

  t = generate(15, 42);
  EXPECT(lifemax_topology_node_count(t) == 16);
  EXPECT(lifemax_topology_edge_count(t) > 0);
  EXPECT(lifemax_topology_attempts(t) >= 1);

  snprintf(path, sizeof path, "%s/capi_topo.json", dir);
  EXPECT(lifemax_topology_save(t, path) == LIFEMAX_OK);
  EXPECT(lifemax_topology_load(path, &back) == LIFEMAX_OK);
  EXPECT(lifemax_topology_to_json(t, &a) == LIFEMAX_OK);
  EXPECT(lifemax_topology_to_json(back, &b) == LIFEMAX_OK);
  EXPECT(a && b && strcmp(a, b) == 0);
  lifemax_string_free(a);
  lifemax_string_free(b);
  EXPECT(lifemax_topology_load("/nonexistent/dir/x.json", &scaled) == LIFEMAX_E_IO);
  EXPECT(lifemax_topology_save(t, "/nonexistent/dir/x.json") == LIFEMAX_E_IO);

  EXPECT(lifemax_topology_scale_energy(t, -1.0, &scaled) == LIFEMAX_E_INVALID_PARAM);
  EXPECT(lifemax_topology_scale_energy(t, 10.0, &scaled) == LIFEMAX_OK);
  {
    lifemax_result* r1 = NULL;
    lifemax_result* r10 = NULL;
    EXPECT(lifemax_solve_lp(t, &r1) == LIFEMAX_OK);
    EXPECT(lifemax_solve_lp(scaled, &r10) == LIFEMAX_OK);
    EXPECT(fabs(lifemax_result_lifetime(r10) - 10.0 * lifemax_result_lifetime(r1)) <=
           1e-6 * lifemax_result_lifetime(r10));
    lifemax_result_free(r1);
    lifemax_result_free(r10);
  }
  lifemax_topology_free(scaled);
  lifemax_topology_free(back);
  lifemax_topology_free(t);
  lifemax_topology_free(NULL);
}

static void solver_calls(const char* dir) {
  lifemax_topology* t = generate(10, 7);
  lifemax_admm_config ac;
  lifemax_subgrad_config sc;
  lifemax_result* lp = NULL;
  lifemax_result* admm = NULL;
  lifemax_result* sg = NULL;
  char* json = NULL;
  double gap = -1.0;
  char path[512];

  EXPECT(lifemax_solve_lp(t, &lp) == LIFEMAX_OK);
  EXPECT(lifemax_result_status(lp) == LIFEMAX_SOLVE_OPTIMAL);
  EXPECT(lifemax_result_q(lp) > 0.0);

  lifemax_admm_config_default(&ac);
  EXPECT(ac.rho == 7.0 && ac.eps == 0.01 && ac.max_iter == 500);
  ac.max_iter = 50;
  EXPECT(lifemax_solve_admm(t, &ac, &admm) == LIFEMAX_OK);
  EXPECT(lifemax_result_iterations(admm) <= 50);
  EXPECT(lifemax_result_messages(admm) ==
         (uint64_t)lifemax_result_iterations(admm) * 2u * lifemax_topology_edge_count(t));
  EXPECT(lifemax_result_gap(admm, &gap) == 0);
  EXPECT(lifemax_result_attach_oracle(admm, lifemax_result_q(lp)) == LIFEMAX_OK);
  EXPECT(lifemax_result_gap(admm, &gap) == 1 && gap >= 0.0);
  EXPECT(lifemax_result_report_json(admm, &json) == LIFEMAX_OK);
  EXPECT(json && strstr(json, "\"algorithm\": \"admm\"") != NULL);
  lifemax_string_free(json);
  snprintf(path, sizeof path, "%s/capi_trace.csv", dir);
  EXPECT(lifemax_result_write_trace(admm, path) == LIFEMAX_OK);

  {
    lifemax_result* bad = NULL;
    ac.rho = -1.0;
    EXPECT(lifemax_solve_admm(t, &ac, &bad) == LIFEMAX_E_INVALID_PARAM);
    lifemax_admm_config_default(&ac);
    ac.divergence_bound = 1e-3;
    EXPECT(lifemax_solve_admm(t, &ac, &bad) == LIFEMAX_E_DIVERGENCE);
    EXPECT(bad == NULL);
  }

  lifemax_subgrad_config_default(&sc);
  sc.max_iter = 100;
  EXPECT(lifemax_solve_subgrad(t, &sc, 1, &sg) == LIFEMAX_OK);
  EXPECT(lifemax_result_gap(sg, &gap) == 1);
  EXPECT(lifemax_result_iterations(sg) <= 100);

  lifemax_result_free(lp);
  lifemax_result_free(admm);
  lifemax_result_free(sg);
  lifemax_topology_free(t);
}

static void experiment_calls(const char* dir) {
  lifemax_topology* t = generate(10, 3);
  uint64_t total = 0;
  uint64_t per_node[11];
  uint64_t sum = 0;
  size_t i;
  const double grid[] = {0.1, 1.0, 7.0};
  lifemax_admm_config ac;
  lifemax_subgrad_config sc;
  lifemax_sweep* sw = NULL;
  lifemax_comparison* cmp = NULL;
  double ratio = 0.0;
  int lower = -1;
  char path[512];

  EXPECT(lifemax_count_messages(t, 3, &total, per_node) == LIFEMAX_OK);
  EXPECT(total == 3u * 2u * lifemax_topology_edge_count(t));
  for (i = 0; i < 11; ++i) sum += per_node[i];
  EXPECT(sum == total);
  EXPECT(lifemax_count_messages(t, -1, &total, NULL) == LIFEMAX_E_INVALID_PARAM);

  lifemax_admm_config_default(&ac);
  EXPECT(lifemax_rho_sweep(t, grid, 3, 20, &ac, 2, &sw) == LIFEMAX_OK);
  EXPECT(lifemax_sweep_size(sw) == 3);
  EXPECT(lifemax_sweep_best(sw) >= 0 && lifemax_sweep_best(sw) < 3);
  EXPECT(lifemax_sweep_rho(sw, 2) == 7.0);
  EXPECT(!lifemax_sweep_failed(sw, 0));
  EXPECT(lifemax_sweep_gap(sw, 0) >= 0.0);
  snprintf(path, sizeof path, "%s/capi_sweep.csv", dir);
  EXPECT(lifemax_sweep_write_csv(sw, path) == LIFEMAX_OK);
  lifemax_sweep_free(sw);
  EXPECT(lifemax_rho_sweep(t, grid, 0, 20, &ac, 1, &sw) == LIFEMAX_E_INVALID_PARAM);

  lifemax_subgrad_config_default(&sc);
  ac.max_iter = 100;
  sc.max_iter = 100;
  EXPECT(lifemax_compare(t, &ac, &sc, 0.05, &cmp) == LIFEMAX_OK);
  EXPECT(lifemax_comparison_admm_rounds(cmp) >= 1);
  EXPECT(lifemax_comparison_subgrad_rounds(cmp) >= 1);
  EXPECT(lifemax_comparison_admm_seconds(cmp) >= 0.0);
  if (lifemax_comparison_ratio(cmp, &ratio, &lower)) EXPECT(ratio > 0.0);
  snprintf(path, sizeof path, "%s/capi_compare.csv", dir);
  EXPECT(lifemax_comparison_write_csv(cmp, path) == LIFEMAX_OK);
  snprintf(path, sizeof path, "%s/capi_compare.json", dir);
  EXPECT(lifemax_comparison_write_json(cmp, path) == LIFEMAX_OK);
  lifemax_comparison_free(cmp);
  EXPECT(lifemax_compare(t, &ac, &sc, 0.0, &cmp) == LIFEMAX_E_INVALID_PARAM);
  lifemax_topology_free(t);
}

int main(int argc, char** argv) {
  const char* dir = argc > 1 ? argv[1] : ".";
  EXPECT(strlen(lifemax_version()) > 0);
  EXPECT(strcmp(lifemax_status_string(LIFEMAX_OK), lifemax_status_string(LIFEMAX_E_IO)) != 0);
  topology_calls(dir);
  solver_calls(dir);
  experiment_calls(dir);
  if (failures) {
    fprintf(stderr, "%d check(s) failed\n", failures);
    return 1;
  }
  printf("c api: all checks passed\n");
  return 0;
}
