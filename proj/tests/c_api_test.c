/* Exercises the C interface from plain C. */
#include "polyred/polyred.h"

#include <math.h>
#include <stdio.h>
#include <string.h>

static int failures = 0;

#define EXPECT(cond)                                            \
  do {                                                          \
    if (!(cond)) {                                              \
      fprintf(stderr, "%s:%d: expected %s\n", __FILE__, __LINE__, #cond); \
      ++failures;                                               \
    }                                                           \
  } while (0)

static void test_run(void) {
  polyred_config* cfg = NULL;
  polyred_report* rep = NULL;
  const char* json = NULL;
  size_t count = 0;
  int met = 0;
  EXPECT(polyred_config_create(&cfg) == POLYRED_OK);
  EXPECT(polyred_config_set_string(cfg, "command", "counterexample") == POLYRED_OK);
  EXPECT(polyred_config_set_int(cfg, "samples", 3) == POLYRED_OK);
  EXPECT(polyred_run(cfg, &rep) == POLYRED_OK);
  EXPECT(polyred_report_json(rep, &json) == POLYRED_OK);
  EXPECT(json != NULL && strstr(json, "\"all_met\": true") != NULL);
  EXPECT(polyred_report_all_met(rep, &met) == POLYRED_OK && met == 1);
  EXPECT(polyred_report_check_count(rep, &count) == POLYRED_OK && count > 0);
  EXPECT(polyred_report_check_met(rep, count, &met) == POLYRED_E_INPUT);
  polyred_report_destroy(rep);
  polyred_config_destroy(cfg);
}

static void test_errors(void) {
  polyred_config* cfg = NULL;
  polyred_report* rep = NULL;
  const double mu[2] = {1.0, 2.0};
  EXPECT(polyred_config_create(&cfg) == POLYRED_OK);
  EXPECT(polyred_config_set_int(cfg, "bogus", 1) == POLYRED_E_INPUT);
  EXPECT(strlen(polyred_last_error()) > 0);
  EXPECT(polyred_config_set_string(cfg, "command", "verify") == POLYRED_OK);
  EXPECT(polyred_config_set_string(cfg, "model", "nope") == POLYRED_OK);
  EXPECT(polyred_run(cfg, &rep) == POLYRED_E_UNKNOWN_MODEL);
  EXPECT(rep == NULL);
  EXPECT(polyred_config_set_string(cfg, "model", "group") == POLYRED_OK);
  EXPECT(polyred_config_set_vector(cfg, "mu", mu, 2) == POLYRED_OK);
  EXPECT(polyred_run(cfg, &rep) == POLYRED_E_INPUT);
  EXPECT(polyred_run(NULL, &rep) == POLYRED_E_INPUT);
  EXPECT(strcmp(polyred_status_name(POLYRED_E_DIVERGENCE), "divergence") == 0);
  polyred_config_destroy(cfg);
}

/* Diagonal product model at the origin: forms pr_A^*(dq1 ^ dp1 + dq2 ^ dp2) on R^8,
 * G = R translating q1 in both factors, J^A = p1 of factor A. */
static void test_analyze(void) {
  double forms[2 * 64];
  double jac[2 * 8];
  double gen[8];
  double mus[2] = {0.0, 0.0};
  uint32_t flags = 0;
  int dim = -1;
  int a, i;
  memset(forms, 0, sizeof forms);
  memset(jac, 0, sizeof jac);
  memset(gen, 0, sizeof gen);
  for (a = 0; a < 2; ++a) {
    double* w = forms + 64 * a;
    for (i = 0; i < 2; ++i) {
      const int q = 4 * a + i;
      const int p = 4 * a + 2 + i;
      w[q + 8 * p] = 1.0; /* column-major (q, p) */
      w[p + 8 * q] = -1.0;
    }
    jac[8 * a + 4 * a + 2] = 1.0; /* 1 x 8 row A, entry at p1 of factor A */
  }
  gen[0] = 1.0;
  gen[4] = 1.0;
  EXPECT(polyred_analyze_snapshot(8, 2, 1, forms, jac, gen, NULL, mus, 0.0, &flags, &dim) == POLYRED_OK);
  EXPECT((flags & POLYRED_FLAG_COND1) != 0);
  EXPECT((flags & POLYRED_FLAG_COND2) == 0);
  EXPECT((flags & POLYRED_FLAG_ROUTES_AGREE) != 0);
  EXPECT((flags & POLYRED_FLAG_POLYSYMPLECTIC) == 0);
  EXPECT((flags & POLYRED_FLAG_MOMENTUM_LEMMA) != 0);
  EXPECT((flags & POLYRED_FLAG_GUENTHER) == 0);
  EXPECT(dim == 5);

  jac[2] = 2.0; /* breaks the momentum identity */
  EXPECT(polyred_analyze_snapshot(8, 2, 1, forms, jac, gen, NULL, mus, 0.0, &flags, &dim) ==
         POLYRED_E_INCONSISTENT_SNAPSHOT);
  EXPECT(polyred_analyze_snapshot(0, 2, 1, forms, jac, gen, NULL, mus, 0.0, &flags, &dim) == POLYRED_E_DIMENSION);
}

static void test_solve(void) {
  /* canonical (q, p1, p2) model */
  double forms[18];
  const double dh[3] = {0.7, -1.3, 2.1};
  double x[6];
  memset(forms, 0, sizeof forms);
  forms[0 + 3 * 1] = 1.0;
  forms[1 + 3 * 0] = -1.0;
  forms[9 + 0 + 3 * 2] = 1.0;
  forms[9 + 2 + 3 * 0] = -1.0;
  EXPECT(polyred_solve_hamiltonian(3, 2, forms, dh, x) == POLYRED_OK);
  EXPECT(fabs(x[0] - dh[1]) < 1e-14);
  EXPECT(fabs(x[1] + dh[0] / 2.0) < 1e-14);
  EXPECT(fabs(x[2]) < 1e-14);
  EXPECT(fabs(x[3] - dh[2]) < 1e-14);
  EXPECT(fabs(x[5] + dh[0] / 2.0) < 1e-14);
}

int main(void) {
  EXPECT(strcmp(polyred_version(), "0.1.0") == 0);
  test_run();
  test_errors();
  test_analyze();
  test_solve();
  if (failures) fprintf(stderr, "%d failure(s)\n", failures);
  return failures ? 1 : 0;
}
