#ifndef QINV_H
#define QINV_H

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum QinvStatus {
  QINV_STATUS_OK = 0,
  QINV_STATUS_NULL_POINTER = 1,
  /*
   Parameters outside the domain of the function called.
   */
  QINV_STATUS_INVALID_ARGUMENT = 2,
  /*
   A series, product, quadrature or root search did not converge.
   */
  QINV_STATUS_NOT_CONVERGED = 3,
  /*
   Any other numerical failure.
   */
  QINV_STATUS_NUMERICAL = 4,
  /*
   A Rust panic was caught at the boundary.
   */
  QINV_STATUS_PANIC = 5,
} QinvStatus;

/*
 Process whose first-passage Laplace transform is requested.
 */
typedef enum QinvProcess {
  QINV_PROCESS_U = 0,
  QINV_PROCESS_X_MOVING_BOUNDARY = 1,
  QINV_PROCESS_U_DELTA_CLOCK = 2,
  QINV_PROCESS_Z = 3,
  QINV_PROCESS_YHAT = 4,
  QINV_PROCESS_U_TO_ZERO = 5,
} QinvProcess;

/*
 A Lévy exponent ψ.
 */
typedef struct QinvExponent QinvExponent;

/*
 A power series I_{α,ψ}(z) or I_{α,ψ}(q; z) with its coefficient cache.
 */
typedef struct QinvSeries QinvSeries;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/*
 Length in bytes of the last error message on this thread, without the
 terminating NUL; 0 when the last call succeeded.
 */
size_t qinv_last_error_length(void);

/*
 Copies the last error message into `buf` (NUL-terminated, truncated to
 `len - 1` bytes) and returns the full message length.

 # Safety
 `buf` must be NULL or valid for `len` bytes.
 */
size_t qinv_last_error_message(char *buf, size_t len);

/*
 ψ(u) = b u + σ² u²/2.

 # Safety
 `out` must be valid for writes.
 */
enum QinvStatus qinv_exponent_brownian(double b, double sigma, struct QinvExponent **out);

/*
 ψ(u) = ((u+γ−1)_α − (γ−1)_α)/α with α ∈ (1,2), γ ≥ 0.

 # Safety
 `out` must be valid for writes.
 */
enum QinvStatus qinv_exponent_pochhammer(double alpha, double gamma, struct QinvExponent **out);

/*
 # Safety
 `exponent` must be NULL or a handle from a `qinv_exponent_*` constructor.
 */
void qinv_exponent_free(struct QinvExponent *exponent);

/*
 ψ(u) for real u.

 # Safety
 `exponent` must be a live handle and `out` valid for writes.
 */
enum QinvStatus qinv_exponent_psi(const struct QinvExponent *exponent, double u, double *out);

/*
 Series I_{α,ψ}(z), or I_{α,ψ}(q; z) when `q` is not NaN. `rtol <= 0` and
 `max_terms == 0` select the default truncation.

 # Safety
 `exponent` must be a live handle and `out` valid for writes.
 */
enum QinvStatus qinv_series_new(const struct QinvExponent *exponent,
                                double alpha,
                                double q,
                                double rtol,
                                size_t max_terms,
                                struct QinvSeries **out);

/*
 # Safety
 `series` must be NULL or a handle from [`qinv_series_new`].
 */
void qinv_series_free(struct QinvSeries *series);

/*
 Evaluates the series at real z. `terms_used` may be NULL.

 # Safety
 `series` must be a live handle, `value` valid for writes, `terms_used`
 NULL or valid for writes. A handle must not be used from two threads at once.
 */
enum QinvStatus qinv_series_eval(const struct QinvSeries *series,
                                 double z,
                                 double *value,
                                 size_t *terms_used);

/*
 Growth constant C_{θ_α} of I_{α,ψ} (needs a Cramér root θ > 0).

 # Safety
 `exponent` must be a live handle and `out` valid for writes.
 */
enum QinvStatus qinv_c_theta(const struct QinvExponent *exponent, double alpha, double *out);

/*
 N_{α,ψ}(q; x), decreasing in x, for ψ with negative mean.

 # Safety
 `exponent` must be a live handle and `out` valid for writes.
 */
enum QinvStatus qinv_n_function(const struct QinvExponent *exponent,
                                double alpha,
                                double q,
                                double x,
                                double *out);

/*
 Laplace transform E[e^{−qT}] of the passage time of `process` from `start`
 to `barrier`, for U = OU image of the self-similar process with index α and
 mean-reversion λ. `barrier` is ignored for `UToZero`.

 # Safety
 `exponent` must be a live handle and `out` valid for writes.
 */
enum QinvStatus qinv_laplace_fpt(const struct QinvExponent *exponent,
                                 enum QinvProcess process,
                                 double alpha,
                                 double lambda,
                                 double q,
                                 double start,
                                 double barrier,
                                 double *out);

/*
 Wiener–Hopf factors Ψ⁺(z) and Ψ⁻(z) of the stable process in the class
 C(k, l) with index α, at complex z. `plus` and `minus` each receive
 (re, im) and may be NULL.

 # Safety
 Non-NULL out-pointers must be valid for two writes.
 */
enum QinvStatus qinv_stable_wh(double alpha,
                               int64_t k,
                               int64_t l,
                               double z_re,
                               double z_im,
                               double *plus,
                               double *minus);

/*
 Library version, a static NUL-terminated string.
 */
const char *qinv_version(void);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* QINV_H */
