/* C interface of the weyl-lab exponential-sum laboratory. */

#ifndef WEYL_FFI_H
#define WEYL_FFI_H

#include <stdarg.h>
#include <stdbool.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Status code returned by every fallible entry point.
 */
typedef enum WeylStatus {
  /**
   * Success.
   */
  WEYL_OK = 0,
  /**
   * A parameter failed validation.
   */
  WEYL_ERR_VALIDATION = 2,
  /**
   * The requested computation exceeds the work budget.
   */
  WEYL_ERR_BUDGET = 3,
  /**
   * Integer overflow / range error inside the computation.
   */
  WEYL_ERR_RANGE = 4,
  /**
   * A required pointer argument was null.
   */
  WEYL_ERR_NULL = 5,
} WeylStatus;

/**
 * Opaque handle to a phase vector `(x_1, .., x_d)`.
 */
typedef struct WeylPhase WeylPhase;

/**
 * A complex value as a plain C pair.
 */
typedef struct WeylComplex {
  double re;
  double im;
} WeylComplex;

/**
 * Representation-count result for `R_d(k, N)`.
 */
typedef struct WeylRepCount {
  uint64_t total;
  uint64_t diagonal;
  uint64_t nondiagonal;
} WeylRepCount;

/**
 * Continued-fraction approximation `x ~ a/q + xi`.
 */
typedef struct WeylRational {
  int64_t a;
  uint64_t q;
  double xi;
} WeylRational;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Creates a phase handle from `len` coefficients in `[0, 1)`. On success
 * writes the new handle to `out`; the caller owns it.
 *
 * # Safety
 * `coeffs` must point to `len` readable doubles and `out` must be a valid
 * destination for one pointer.
 */
enum WeylStatus weyl_phase_new(const double *coeffs, uintptr_t len, struct WeylPhase **out);

/**
 * Releases a handle created by [`weyl_phase_new`]. Null is a no-op.
 *
 * # Safety
 * `phase` must be null or a pointer previously returned by
 * [`weyl_phase_new`] that has not been freed.
 */
void weyl_phase_free(struct WeylPhase *phase);

/**
 * Degree `d` of the phase behind the handle.
 *
 * # Safety
 * `phase` must be a live handle from [`weyl_phase_new`].
 */
uint32_t weyl_phase_degree(const struct WeylPhase *phase);

/**
 * Evaluates `S_d(x; N)` with unit weights into `out`.
 *
 * # Safety
 * `phase` must be a live handle and `out` writable.
 */
enum WeylStatus weyl_eval(const struct WeylPhase *phase, uint64_t n, struct WeylComplex *out);

/**
 * Writes `max_{M <= N} |S_d(x; M)|` to `out_max` and the smallest
 * attaining `M` to `out_argmax` (either may be null to skip it).
 *
 * # Safety
 * `phase` must be a live handle; non-null outputs must be writable.
 */
enum WeylStatus weyl_prefix_max(const struct WeylPhase *phase,
                                uint64_t n,
                                double *out_max,
                                uint64_t *out_argmax);

/**
 * Exact extreme discrepancy of `x_1 n + .. + x_d n^d` mod 1, `n <= N`.
 *
 * # Safety
 * `phase` must be a live handle and `out` writable.
 */
enum WeylStatus weyl_discrepancy(const struct WeylPhase *phase, uint64_t n, double *out);

/**
 * Counts `R_d(k, N)` quadruples with its diagonal breakdown.
 *
 * # Safety
 * `out` must be writable.
 */
enum WeylStatus weyl_rep_count(uint32_t d, int64_t k, uint64_t n, struct WeylRepCount *out);

/**
 * Best continued-fraction convergent of `x` with denominator at most
 * `qmax`.
 *
 * # Safety
 * `out` must be writable.
 */
enum WeylStatus weyl_cf_approx(double x, uint64_t qmax, struct WeylRational *out);

/**
 * Dimension exponent `s(d, alpha)`.
 *
 * # Safety
 * `out` must be writable.
 */
enum WeylStatus weyl_s_dim(uint32_t d, double alpha, double *out);

/**
 * Dimension exponent `u(d, alpha)`.
 *
 * # Safety
 * `out` must be writable.
 */
enum WeylStatus weyl_u_dim(uint32_t d, double alpha, double *out);

/**
 * Library version as a static NUL-terminated string.
 */
const char *weyl_version(void);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* WEYL_FFI_H */
