/*
 * depreg: least-squares inference for linear models with stationary,
 * short-range dependent errors.
 *
 * C interface over the C++ core. Objects are opaque handles created by a
 * *_create / *_build / *_from_json call and released by the matching
 * *_destroy. Every fallible call returns a depreg_status; on failure a
 * description is available from depreg_last_error() on the calling thread.
 * Strings returned through char** are owned by the caller and released with
 * depreg_string_free(). Matrices cross the boundary in column-major order.
 */
#ifndef DEPREG_DEPREG_H
#define DEPREG_DEPREG_H

#include <stddef.h>
#include <stdint.h>

#if defined(DEPREG_BUILDING_LIBRARY)
#define DEPREG_API __attribute__((visibility("default")))
#else
#define DEPREG_API
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum depreg_status {
  DEPREG_OK = 0,
  DEPREG_ERR_INVALID_ARGUMENT = 1,
  DEPREG_ERR_DOMAIN = 2,
  DEPREG_ERR_RANK_DEFICIENT = 3,
  DEPREG_ERR_DEGENERATE_FIT = 4,
  DEPREG_ERR_NONPOSITIVE_LRV = 5,
  DEPREG_ERR_PARSE = 6,
  DEPREG_ERR_IO = 7,
  DEPREG_ERR_INTERNAL = 8
} depreg_status;

DEPREG_API const char* depreg_version(void);
DEPREG_API const char* depreg_status_string(depreg_status status);
/* Nonzero for rank deficiency, noiseless fits and nonpositive LRV. */
DEPREG_API int depreg_status_is_numerical(depreg_status status);
DEPREG_API const char* depreg_last_error(void);
DEPREG_API void depreg_string_free(char* s);

/* ---- designs ---------------------------------------------------------- */

typedef struct depreg_design depreg_design;

DEPREG_API depreg_status depreg_design_create(size_t n, size_t p,
                                              const double* col_major,
                                              depreg_design** out);
/* kind: "intercept_linear", "intercept_quadratic" or "intercept_sqrt_log". */
DEPREG_API depreg_status depreg_design_build(const char* kind, size_t n,
                                             depreg_design** out);
DEPREG_API void depreg_design_destroy(depreg_design* design);
DEPREG_API size_t depreg_design_rows(const depreg_design* design);
DEPREG_API size_t depreg_design_cols(const depreg_design* design);
DEPREG_API depreg_status depreg_design_data(const depreg_design* design,
                                            double* col_major);

/* out: p values. */
DEPREG_API depreg_status depreg_design_column_norms(const depreg_design* design,
                                                    double* out);
DEPREG_API depreg_status depreg_design_lindeberg(const depreg_design* design,
                                                 double* out);
/* out: p*p values. */
DEPREG_API depreg_status depreg_design_empirical_rho(const depreg_design* design,
                                                     size_t lag, double* out);
DEPREG_API depreg_status depreg_design_regularity_json(const depreg_design* design,
                                                       const size_t* lags,
                                                       size_t n_lags, double tol,
                                                       char** json_out);
DEPREG_API depreg_status depreg_rho_regularly_varying(double alpha_j, double alpha_l,
                                                      double* out);
/* out: p*p values; *positive_definite set to 0 for repeated exponents. */
DEPREG_API depreg_status depreg_r0_from_alphas(const double* alphas, size_t p,
                                               double* out, int* positive_definite);

/* ---- least squares ---------------------------------------------------- */

typedef struct depreg_fit depreg_fit;

DEPREG_API depreg_status depreg_fit_create(const depreg_design* design,
                                           const double* y, size_t n,
                                           depreg_fit** out);
DEPREG_API void depreg_fit_destroy(depreg_fit* fit);
DEPREG_API size_t depreg_fit_n(const depreg_fit* fit);
DEPREG_API size_t depreg_fit_p(const depreg_fit* fit);
DEPREG_API const double* depreg_fit_beta(const depreg_fit* fit);
DEPREG_API const double* depreg_fit_residuals(const depreg_fit* fit);
DEPREG_API const double* depreg_fit_col_norms(const depreg_fit* fit);
DEPREG_API double depreg_fit_rss(const depreg_fit* fit);
DEPREG_API depreg_status depreg_fit_json(const depreg_fit* fit, char** json_out);

/* tested: 0-based coefficient indices set to zero under the null. */
DEPREG_API depreg_status depreg_nested_rss(const depreg_design* design,
                                           const size_t* tested, size_t n_tested,
                                           const double* y, size_t n,
                                           int allow_zero_model, double* rss_full,
                                           double* rss_null);

/* ---- spectral estimation ---------------------------------------------- */

typedef enum depreg_lrv_method {
  DEPREG_LRV_KERNEL_F0 = 0, /* 2 pi f*_n(0), bandwidth c_n */
  DEPREG_LRV_TRUNCATED = 1  /* gamma_0 + (1 or 2) sum_{k<=a_n} gamma_k */
} depreg_lrv_method;

typedef struct depreg_lrv {
  double value;
  depreg_lrv_method method;
  size_t bandwidth; /* c_n or a_n */
  int symmetrized;
  int nonpositive;
} depreg_lrv;

DEPREG_API double depreg_kernel(double x);
DEPREG_API depreg_status depreg_autocov(const double* series, size_t n, long lag,
                                        double* out);
DEPREG_API depreg_status depreg_spectral_density(const double* residuals, size_t n,
                                                 size_t bandwidth,
                                                 const double* lambdas,
                                                 size_t n_lambdas, double* out);
DEPREG_API depreg_status depreg_lrv_estimate(const double* residuals, size_t n,
                                             depreg_lrv_method method,
                                             size_t bandwidth, int symmetrized,
                                             depreg_lrv* out);
DEPREG_API depreg_status depreg_default_bandwidth(size_t n, double delta,
                                                  size_t* out);

/* ---- tests ------------------------------------------------------------ */

typedef enum depreg_test_method {
  DEPREG_TEST_CLASSIC_F = 0,
  DEPREG_TEST_CORRECTED_KERNEL = 1,
  DEPREG_TEST_CORRECTED_TRUNCATED = 2
} depreg_test_method;

typedef enum depreg_reference {
  DEPREG_REF_CHI2_OVER_DOF = 0,
  DEPREG_REF_FISHER = 1
} depreg_reference;

typedef struct depreg_test_result {
  double statistic;
  size_t numerator_dof;
  depreg_test_method method;
  double p_value;
  depreg_reference reference;
} depreg_test_result;

DEPREG_API depreg_status depreg_chi2_sf(double x, int dof, double* out);
DEPREG_API depreg_status depreg_fisher_classic(double rss0, double rss, size_t n,
                                               size_t p, size_t p0,
                                               depreg_reference reference,
                                               depreg_test_result* out);
DEPREG_API depreg_status depreg_fisher_corrected(double rss0, double rss,
                                                 const depreg_lrv* lrv, size_t p,
                                                 size_t p0, depreg_test_result* out);
/* r0: p*p; beta0, out: p values. */
DEPREG_API depreg_status depreg_studentize(const depreg_fit* fit, const double* r0,
                                           const depreg_lrv* lrv,
                                           const double* beta0, double* out);
/* Full and null fits plus classic and corrected statistics, as JSON. */
DEPREG_API depreg_status depreg_nested_test_json(
    const depreg_design* design, const size_t* tested, size_t n_tested,
    const double* y, size_t n, depreg_lrv_method method, size_t bandwidth,
    int symmetrized, depreg_reference classic_reference, char** json_out);

/* ---- error processes -------------------------------------------------- */

DEPREG_API depreg_status depreg_theta_gamma(double x, double gamma, double* out);
/* process_json: {"kind": "ar1_nonmixing" | "intermittent" | "linear_process",
 * "gamma", "coeffs", "ratio", "truncation", "innovation", "post_map", "scale",
 * "burn_in"}. out: n values. */
DEPREG_API depreg_status depreg_simulate(const char* process_json, size_t n,
                                         uint64_t seed, double* out);
DEPREG_API uint64_t depreg_derive_seed(uint64_t master, uint64_t n,
                                       uint64_t replication);

/* ---- Monte Carlo experiments ------------------------------------------ */

typedef struct depreg_experiment depreg_experiment;
typedef struct depreg_table depreg_table;

typedef struct depreg_table_row {
  size_t n;
  double frequency;
  double mean_statistic;
  size_t nonpositive_lrv;
  int has_alternate;
  double alternate_frequency;
} depreg_table_row;

DEPREG_API depreg_status depreg_experiment_from_json(const char* json,
                                                     depreg_experiment** out);
DEPREG_API void depreg_experiment_destroy(depreg_experiment* experiment);
DEPREG_API depreg_status depreg_experiment_json(const depreg_experiment* experiment,
                                                char** json_out);
/* One replication's data; *design_out must be destroyed, y_out holds n values. */
DEPREG_API depreg_status depreg_experiment_sample(
    const depreg_experiment* experiment, size_t n, size_t replication,
    depreg_design** design_out, double* y_out);
/* out: max_lag + 1 residual autocovariances of one simulated fit. */
DEPREG_API depreg_status depreg_experiment_acf(const depreg_experiment* experiment,
                                               size_t n, size_t max_lag,
                                               size_t replication, double* out);
/* threads == 0: DEPREG_THREADS or hardware concurrency. */
DEPREG_API depreg_status depreg_experiment_run(const depreg_experiment* experiment,
                                               unsigned threads,
                                               depreg_table** out);
DEPREG_API void depreg_table_destroy(depreg_table* table);
DEPREG_API size_t depreg_table_rows(const depreg_table* table);
DEPREG_API depreg_status depreg_table_row_get(const depreg_table* table, size_t i,
                                              depreg_table_row* out);
DEPREG_API depreg_status depreg_table_csv(const depreg_table* table, char** csv_out);

#ifdef __cplusplus
}
#endif

#endif /* DEPREG_DEPREG_H */
