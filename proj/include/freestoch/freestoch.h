/* freestoch: free-probability stochastic calculus engine.
 *
 * C API over the C++ core. All handles are opaque; every function returns an
 * fsc_status and writes results through out-parameters. Strings returned
 * through char** are heap-allocated and must be released with
 * fsc_string_free. Rational numbers cross the boundary as "p/q" strings
 * ("p" when the denominator is 1). On failure, fsc_last_error() returns a
 * thread-local message describing the most recent error.
 */
#ifndef FREESTOCH_H
#define FREESTOCH_H

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#define FSC_API __declspec(dllexport)
#elif defined(__GNUC__)
#define FSC_API __attribute__((visibility("default")))
#else
#define FSC_API
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum fsc_status {
  FSC_OK = 0,
  FSC_ERR_INVALID_ARGUMENT = 1,
  FSC_ERR_PARSE = 2,
  FSC_ERR_TRUNCATION = 3,
  FSC_ERR_REGIME = 4,
  FSC_ERR_NUMERIC = 5,
  FSC_ERR_SIZE = 6,
  FSC_ERR_IO = 7,
  FSC_ERR_INTERNAL = 8,
  FSC_ERR_CONTRACT = 9
} fsc_status;

typedef struct fsc_cumulants fsc_cumulants; /* free cumulant sequence */
typedef struct fsc_stepfn fsc_stepfn;       /* piecewise-constant integrand */

FSC_API const char* fsc_version(void);
FSC_API const char* fsc_status_name(fsc_status status);
/* Thread-local message from the most recent failing call. */
FSC_API const char* fsc_last_error(void);
FSC_API void fsc_string_free(char* s);

/* ---- cumulant sequences -------------------------------------------------- */

/* json: {"kind": "finitely_supported"|"truncated", "values": ["p/q", ...]}
 * or a catalog spec {"name": "semicircular"} /
 * {"name": "free_poisson", "rate": "1", "order": 16} /
 * {"name": "free_compound_poisson", "rate": "2", "jump_moments": [...]}. */
FSC_API fsc_status fsc_cumulants_from_json(const char* json, fsc_cumulants** out);
FSC_API fsc_status fsc_cumulants_to_json(const fsc_cumulants* r, char** out_json);
FSC_API void fsc_cumulants_free(fsc_cumulants* r);

FSC_API fsc_status fsc_cumulants_order(const fsc_cumulants* r, int* out_order);

/* Moments m_1..m_n as {"values": [...]}. */
FSC_API fsc_status fsc_moments(const fsc_cumulants* r, int n, char** out_json);
/* Inverse: cumulants from {"values": [...]} moment json. */
FSC_API fsc_status fsc_cumulants_from_moments(const char* moments_json, int n, fsc_cumulants** out);
/* Cumulant scaling by the semigroup time t ("p/q" string, t >= 0). */
FSC_API fsc_status fsc_semigroup(const fsc_cumulants* r, const char* t, fsc_cumulants** out);
/* m_p(t)/t as a rational string (small-time slope diagnostic). */
FSC_API fsc_status fsc_small_time_ratio(const fsc_cumulants* r, int p, const char* t, char** out);

/* |NC(n)| by enumeration, as a decimal string. */
FSC_API fsc_status fsc_nc_count(int n, char** out_decimal);

/* True through `order` iff G(1/z + R(z)) = z holds with exact coefficients. */
FSC_API fsc_status fsc_verify_functional_relation(const fsc_cumulants* r, int order, int* out_ok);

/* ---- step functions and scalar integrals --------------------------------- */

/* json: {"breakpoints": ["0", "1"], "values": ["1"]}. */
FSC_API fsc_status fsc_stepfn_from_json(const char* json, fsc_stepfn** out);
FSC_API fsc_status fsc_stepfn_to_json(const fsc_stepfn* f, char** out_json);
FSC_API void fsc_stepfn_free(fsc_stepfn* f);

/* ||f||_p^p as a rational string. */
FSC_API fsc_status fsc_lp_power(const fsc_stepfn* f, int p, char** out);

/* Cumulants of the law of int f dX. */
FSC_API fsc_status fsc_integral_cumulants(const fsc_stepfn* f, const fsc_cumulants* r, fsc_cumulants** out);

/* Cumulants r_n(Delta_k(t)) = t r_{nk}, n = 1..n_max. */
FSC_API fsc_status fsc_diagonal_cumulants(const fsc_cumulants* r, int k, const char* t, int n_max,
                                          fsc_cumulants** out);

/* {"values": [{"n": 2, "norm": ..}, ..], "extrapolated": ..}. */
FSC_API fsc_status fsc_mu_norm_table(const fsc_stepfn* f, const fsc_cumulants* r, int n_max,
                                     char** out_json);
FSC_API fsc_status fsc_mu_norm(const fsc_stepfn* f, const fsc_cumulants* r, int n, double* out);

/* {"moments": [..], "accuracy_warning": bool}: phi[M(t)^n], n = 1..n_max. */
FSC_API fsc_status fsc_moment_flow(const fsc_stepfn* f, const fsc_cumulants* r, int n_max, double t,
                                   int steps, char** out_json);

/* {"lhs": .., "rhs": .., "holds": bool}. */
FSC_API fsc_status fsc_bdg_check(const fsc_stepfn* f, const fsc_cumulants* r, int k, int n,
                                 char** out_json);

/* ---- transforms ----------------------------------------------------------- */

FSC_API fsc_status fsc_cauchy_numeric(const fsc_cumulants* r, double z_re, double z_im, double* out_re,
                                      double* out_im);
FSC_API fsc_status fsc_density(const fsc_cumulants* r, double x, double eps, double* out);
/* CSV "x,density" over [x0, x1] with n_points rows. */
FSC_API fsc_status fsc_density_table(const fsc_cumulants* r, double x0, double x1, int n_points,
                                     double eps, char** out_csv);
/* Writes `count` quantiles of the law into out (caller-allocated). */
FSC_API fsc_status fsc_quantiles(const fsc_cumulants* r, int count, double eps, double* out);
FSC_API fsc_status fsc_pde_residual(const fsc_cumulants* r, double z_re, double z_im, double t, double h,
                                    double* out);

/* ---- matrix lab ----------------------------------------------------------- */

/* Runs a named verification check against a config document; the report JSON
 * is written to out_report_json and out_pass is 1 iff the check passed.
 * A failing check still returns FSC_OK (the run itself succeeded). */
FSC_API fsc_status fsc_run_check(const char* check_name, const char* config_json, char** out_report_json,
                                 int* out_pass);

/* CSV "trial,eigenvalue" spectrum dump of X(horizon) under the config. */
FSC_API fsc_status fsc_simulate_spectrum(const char* config_json, char** out_csv);

#ifdef __cplusplus
} /* extern "C" */
#endif

#endif /* FREESTOCH_H */
