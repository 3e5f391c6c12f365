/*
 * isocalc: local difference calculus of (ln x)^k and the constants it
 * generates (gamma_k, gamma'_k, lambda_1), computed to arbitrary precision.
 *
 * C interface. All numbers cross the boundary as decimal strings; values are
 * truncated toward zero at the requested number of significant digits.
 *
 * A context carries settings and the message of the last failure. Use one
 * context per thread; everything computed through a context is otherwise
 * free of shared state. Result and table handles are immutable.
 */
#ifndef ISOCALC_ISOCALC_H_
#define ISOCALC_ISOCALC_H_

#include <stddef.h>

#if defined(_WIN32)
#if defined(ISOCALC_BUILDING_LIBRARY)
#define ISOCALC_API __declspec(dllexport)
#else
#define ISOCALC_API __declspec(dllimport)
#endif
#else
#define ISOCALC_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum isocalc_status {
  ISOCALC_OK = 0,
  ISOCALC_ERR_INVALID_ARGUMENT = 1,
  ISOCALC_ERR_DOMAIN = 2,
  ISOCALC_ERR_PRECISION = 3,
  ISOCALC_ERR_DIVERGENCE = 4,
  ISOCALC_ERR_NON_CONVERGENCE = 5,
  ISOCALC_ERR_UNRELIABLE_EXTRAPOLATION = 6,
  ISOCALC_ERR_CONSISTENCY = 7,
  ISOCALC_ERR_CAP = 8,
  ISOCALC_ERR_BUFFER_TOO_SMALL = 9,
  ISOCALC_ERR_INTERNAL = 10
} isocalc_status;

typedef enum isocalc_derivative {
  ISOCALC_EXACT_FORWARD = 0,
  ISOCALC_APPROX_FORWARD = 1,
  ISOCALC_FORWARD_ERROR = 2, /* approx - exact */
  ISOCALC_EXACT_BACKWARD = 3,
  ISOCALC_APPROX_BACKWARD = 4,
  ISOCALC_BACKWARD_ERROR = 5 /* exact - approx */
} isocalc_derivative;

typedef struct isocalc_context isocalc_context;
typedef struct isocalc_result isocalc_result;
typedef struct isocalc_table isocalc_table;

/* A string buffer of digits + 32 bytes is always large enough. */
#define ISOCALC_BUFFER_SIZE(digits) ((size_t)(digits) + 32u)

ISOCALC_API const char* isocalc_version(void);
ISOCALC_API const char* isocalc_status_string(isocalc_status status);

/* ---- context ---------------------------------------------------------- */

ISOCALC_API isocalc_context* isocalc_context_create(void);
ISOCALC_API void isocalc_context_destroy(isocalc_context* ctx);
/* Worker threads for long summations. Results do not depend on it. */
ISOCALC_API isocalc_status isocalc_context_set_threads(isocalc_context* ctx, int threads);
ISOCALC_API isocalc_status isocalc_context_set_max_terms(isocalc_context* ctx, long long max_terms);
ISOCALC_API isocalc_status isocalc_context_set_max_digits(isocalc_context* ctx, int max_digits);
/* Message for the last failed call on ctx; "" after a success. */
ISOCALC_API const char* isocalc_context_last_error(const isocalc_context* ctx);

/* ---- series results --------------------------------------------------- */

ISOCALC_API isocalc_status isocalc_gamma(isocalc_context* ctx, int k, int digits, isocalc_result** out);
ISOCALC_API isocalc_status isocalc_gamma_prime(isocalc_context* ctx, int k, int digits, isocalc_result** out);
ISOCALC_API isocalc_status isocalc_gamma_oracle(isocalc_context* ctx, int k, int digits, isocalc_result** out);
ISOCALC_API isocalc_status isocalc_gamma_prime_oracle(isocalc_context* ctx, int k, int digits, isocalc_result** out);
/* Both lambda_1 evaluations; either output pointer may be NULL. */
ISOCALC_API isocalc_status isocalc_lambda1(isocalc_context* ctx, int digits, isocalc_result** log_moment_path,
                                           isocalc_result** identity_path);
/* sum_{x>=1} ln(x)^a / x^j, j >= 2 */
ISOCALC_API isocalc_status isocalc_log_moment_sum(isocalc_context* ctx, int a, int j, int digits,
                                                  isocalc_result** out);
/* lim sum_{x<=N} ln(x)^a / x - ln(N)^(a+1) / (a+1) */
ISOCALC_API isocalc_status isocalc_stieltjes_like_limit(isocalc_context* ctx, int a, int digits,
                                                        isocalc_result** out);

ISOCALC_API void isocalc_result_destroy(isocalc_result* result);
ISOCALC_API isocalc_status isocalc_result_value(const isocalc_result* result, int digits, char* buffer,
                                                size_t size);
ISOCALC_API isocalc_status isocalc_result_error_bound(const isocalc_result* result, char* buffer, size_t size);
ISOCALC_API long long isocalc_result_terms_used(const isocalc_result* result);
/* "direct", "richardson", "euler_maclaurin" or "composite" */
ISOCALC_API const char* isocalc_result_method(const isocalc_result* result);

/* Smallest integer t >= 1 with e - (1 + 1/t)^t < epsilon (decimal string). */
ISOCALC_API isocalc_status isocalc_e_threshold(isocalc_context* ctx, const char* epsilon, long long* t);

/* ---- local derivatives and grids ---------------------------------------- */

ISOCALC_API isocalc_status isocalc_log_power_derivative(isocalc_context* ctx, int k, long long x,
                                                        isocalc_derivative which, int digits, char* buffer,
                                                        size_t size);

/* function: "ln", "ln2", "ln3", ... i.e. (ln x)^k; x is a decimal string. */
ISOCALC_API isocalc_status isocalc_difference_quotient(isocalc_context* ctx, const char* function, const char* x,
                                                       int base, int gap, long multiplier, int digits,
                                                       char* buffer, size_t size);

/* Barrow sums of a derivative of (ln x)^k. Forward kinds sum x0 .. x0+n-1,
 * backward kinds sum x0 .. x0+n. */
ISOCALC_API isocalc_status isocalc_barrow_sum(isocalc_context* ctx, int k, isocalc_derivative which, long long x0,
                                              long long n, int digits, char* buffer, size_t size);

/* ---- tables ------------------------------------------------------------ */

/* columns: m, step, quotient, analytic, error, error_ratio */
ISOCALC_API isocalc_status isocalc_grid_probe(isocalc_context* ctx, const char* function, const char* x, int base,
                                              const int* gaps, size_t gap_count, int digits, isocalc_table** out);
/* columns: identity, lhs, rhs, residual, tolerance, pass */
ISOCALC_API isocalc_status isocalc_verify_identities(isocalc_context* ctx, int digits, isocalc_table** out);
/* columns: x, exact_fwd, approx_fwd, fwd_error, exact_bwd, approx_bwd, bwd_error;
 * cells outside the domain hold "domain-error". */
ISOCALC_API isocalc_status isocalc_derivative_table(isocalc_context* ctx, int k, long long x_from, long long x_to,
                                                    int digits, isocalc_table** out);
/* columns: n, approx_sum, endpoint, residual */
ISOCALC_API isocalc_status isocalc_barrow_residual_table(isocalc_context* ctx, int k, long long n_max, int digits,
                                                         isocalc_table** out);

ISOCALC_API void isocalc_table_destroy(isocalc_table* table);
ISOCALC_API size_t isocalc_table_rows(const isocalc_table* table);
ISOCALC_API size_t isocalc_table_columns(const isocalc_table* table);
/* NULL when out of range. */
ISOCALC_API const char* isocalc_table_column_name(const isocalc_table* table, size_t column);
ISOCALC_API const char* isocalc_table_cell(const isocalc_table* table, size_t row, size_t column);

#ifdef __cplusplus
}
#endif

#endif /* ISOCALC_ISOCALC_H_ */
