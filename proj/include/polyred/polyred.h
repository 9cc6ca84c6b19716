#ifndef POLYRED_POLYRED_H
#define POLYRED_POLYRED_H

/* C interface to the polysymplectic reduction library.
 *
 * Every function returns a polyred_status. On failure a message is available
 * from polyred_last_error() on the calling thread until the next call. */

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#define POLYRED_API __declspec(dllexport)
#else
#define POLYRED_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum polyred_status {
  POLYRED_OK = 0,
  POLYRED_E_INPUT = 1,
  POLYRED_E_DIMENSION = 2,
  POLYRED_E_PRECONDITION = 3,
  POLYRED_E_NO_SOLUTION = 4,
  POLYRED_E_DIVERGENCE = 5,
  POLYRED_E_UNSUPPORTED_ACTION = 6,
  POLYRED_E_INCONSISTENT_SNAPSHOT = 7,
  POLYRED_E_UNKNOWN_MODEL = 8,
  POLYRED_E_IO = 9,
  POLYRED_E_INTERNAL = 10
} polyred_status;

typedef struct polyred_config polyred_config;
typedef struct polyred_report polyred_report;

POLYRED_API const char* polyred_version(void);
POLYRED_API const char* polyred_last_error(void);
POLYRED_API const char* polyred_status_name(polyred_status status);

/* Run configuration. String keys: "command", "model". Integer keys:
 * "samples", "seed", "grid", "component". Double keys: "dt", "t_end",
 * "lambda0", "tol_rank", "tol_eq", "spacing". Vector keys: "mu", "pi1",
 * "pi2", "metric". */
POLYRED_API polyred_status polyred_config_create(polyred_config** out);
POLYRED_API void polyred_config_destroy(polyred_config* config);
POLYRED_API polyred_status polyred_config_set_string(polyred_config* config, const char* key, const char* value);
POLYRED_API polyred_status polyred_config_set_int(polyred_config* config, const char* key, int64_t value);
POLYRED_API polyred_status polyred_config_set_double(polyred_config* config, const char* key, double value);
POLYRED_API polyred_status polyred_config_set_vector(polyred_config* config, const char* key, const double* values,
                                                     size_t count);

POLYRED_API polyred_status polyred_run(const polyred_config* config, polyred_report** out);
POLYRED_API void polyred_report_destroy(polyred_report* report);
/* Returned strings stay valid until the report is destroyed. */
POLYRED_API polyred_status polyred_report_json(const polyred_report* report, const char** out);
POLYRED_API polyred_status polyred_report_csv(const polyred_report* report, const char** out);
POLYRED_API polyred_status polyred_report_all_met(const polyred_report* report, int* out);
POLYRED_API polyred_status polyred_report_check_count(const polyred_report* report, size_t* out);
POLYRED_API polyred_status polyred_report_check_name(const polyred_report* report, size_t index, const char** out);
POLYRED_API polyred_status polyred_report_check_met(const polyred_report* report, size_t index, int* out);

/* Flag bits reported by polyred_analyze_snapshot. */
#define POLYRED_FLAG_COND1 1u
#define POLYRED_FLAG_COND2 2u
#define POLYRED_FLAG_ROUTES_AGREE 4u
#define POLYRED_FLAG_POLYSYMPLECTIC 8u
#define POLYRED_FLAG_MOMENTUM_LEMMA 16u
#define POLYRED_FLAG_GUENTHER 32u

/* Pointwise analysis of a G-space. All matrices are column-major.
 *   forms:      k matrices of size n x n
 *   jacobians:  k matrices of size d x n
 *   generators: n x d
 *   structure:  d*d*d constants c[(a*d + b)*d + e] with [e_a, e_b] = sum_e c e_e,
 *               or NULL for an abelian algebra
 *   mus:        k vectors of length d
 * The isotropy algebras are computed from the structure constants. tol_rank
 * <= 0 selects the default. */
POLYRED_API polyred_status polyred_analyze_snapshot(int n, int k, int d, const double* forms, const double* jacobians,
                                                    const double* generators, const double* structure,
                                                    const double* mus, double tol_rank, uint32_t* out_flags,
                                                    int* out_reduced_dim);

/* Minimum-norm solution of sum_A i_{X_A} omega^A = dH. forms holds k column-major
 * n x n matrices; out_fields receives k*n values. */
POLYRED_API polyred_status polyred_solve_hamiltonian(int n, int k, const double* forms, const double* dh,
                                                     double* out_fields);

#ifdef __cplusplus
}
#endif

#endif /* POLYRED_POLYRED_H */
