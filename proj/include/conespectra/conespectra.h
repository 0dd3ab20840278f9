/* C interface to the conespectra library.
 *
 * Every entry point takes textual inputs (JSON matrices, comma-separated
 * ascending polynomial coefficients, JSON cones) and returns a status code.
 * On success *out receives a report that owns a JSON and a text rendering;
 * release it with cs_report_free. On failure *out is left NULL and
 * cs_last_error() describes the problem for the calling thread.
 */
#ifndef CONESPECTRA_H
#define CONESPECTRA_H

#include <stddef.h>
#include <stdint.h>

#if defined(CONESPECTRA_BUILDING_LIBRARY)
#define CS_API __attribute__((visibility("default")))
#else
#define CS_API
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum cs_status {
  CS_OK = 0,
  CS_INPUT_ERROR = 1,     /* malformed or contract-violating input */
  CS_NUMERICAL_ERROR = 2, /* non-convergence or ill-conditioning */
  CS_INTERNAL_ERROR = 3
} cs_status;

typedef struct cs_options {
  double tol;          /* engine tolerance, > 0 */
  int max_iter;        /* >= 1 */
  int verify;          /* nonzero: append the oracle block */
  int all;             /* eig: full decomposition instead of one eigenvalue */
  int has_perturb_seed;
  uint64_t perturb_seed;
} cs_options;

typedef struct cs_report cs_report;

/* tol 1e-10 (or CONE_SPECTRA_TOL when set and valid), max_iter 10000. */
CS_API void cs_options_init(cs_options* opts);

CS_API cs_status cs_eig(const char* matrix_json, const cs_options* opts, cs_report** out);
CS_API cs_status cs_factor(const char* coefficients, const cs_options* opts, cs_report** out);
CS_API cs_status cs_roots(const char* coefficients, const cs_options* opts, cs_report** out);
CS_API cs_status cs_perron(const char* matrix_json, const cs_options* opts, cs_report** out);
CS_API cs_status cs_psd_form(const char* matrix_json, const cs_options* opts, cs_report** out);

CS_API cs_status cs_cone_dual(const char* cone_json, const cs_options* opts, cs_report** out);
CS_API cs_status cs_cone_extremal(const char* cone_json, const cs_options* opts, cs_report** out);
CS_API cs_status cs_cone_separate(const char* cone_json, const char* point, const cs_options* opts,
                                  cs_report** out);
CS_API cs_status cs_cone_chain(const char* cone_json, const char* op_json, size_t steps, const cs_options* opts,
                               cs_report** out);

/* Pretty-printed JSON (2-space indent) and the 12-digit text rendering. */
CS_API const char* cs_report_json(const cs_report* report);
CS_API const char* cs_report_json_compact(const cs_report* report);
CS_API const char* cs_report_text(const cs_report* report);
/* Advisory message ("" when none), e.g. for factor inputs above degree 24. */
CS_API const char* cs_report_warning(const cs_report* report);
CS_API void cs_report_free(cs_report* report);

/* Message and error-kind name of the last failure on this thread. */
CS_API const char* cs_last_error(void);
CS_API const char* cs_last_error_kind(void);

CS_API const char* cs_version(void);

#ifdef __cplusplus
}
#endif

#endif /* CONESPECTRA_H */
