#ifndef ARCMEASURE_H
#define ARCMEASURE_H

/* Generated by cbindgen from crates/ffi/src/lib.rs. Do not edit. */

#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>

typedef enum AmLimitMethod {
  AM_LIMIT_METHOD_ATOM_DECOMPOSITION = 0,
  AM_LIMIT_METHOD_DIRECT_CESARO = 1,
  AM_LIMIT_METHOD_SKIPPED_CONTINUOUS = 2,
} AmLimitMethod;

/**
 * Result codes. Values 2 to 4 match the command-line exit codes.
 */
typedef enum AmStatus {
  AM_STATUS_OK = 0,
  /**
   * Malformed description, invalid argument or unsupported request.
   */
  AM_STATUS_INVALID_INPUT = 2,
  /**
   * A continuity certificate was required but the measure may have atoms.
   */
  AM_STATUS_CERTIFICATE = 3,
  /**
   * A ball measure was indistinguishable from zero.
   */
  AM_STATUS_DEGENERATE = 4,
  /**
   * A required pointer argument was null.
   */
  AM_STATUS_NULL_POINTER = 5,
  /**
   * An internal panic was caught at the boundary.
   */
  AM_STATUS_PANIC = 6,
} AmStatus;

typedef enum AmWindow {
  AM_WINDOW_SYMMETRIC = 0,
  AM_WINDOW_ONE_SIDED = 1,
} AmWindow;

/**
 * A validated measure and its coefficient cache. Safe to share between
 * threads for concurrent queries.
 */
typedef struct AmProvider AmProvider;

typedef struct AmSeriesResult {
  double value;
  double tail_estimate;
  double limit_term;
  double oscillation;
  double series_part;
  size_t terms_used;
} AmSeriesResult;

typedef struct AmDimensionFit {
  double slope;
  double intercept;
  double residual;
  double hypothesis_sum;
  bool hypothesis_met;
} AmDimensionFit;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Library version as a static NUL-terminated string.
 */
const char *am_version(void);

/**
 * Message for the last failed call on this thread, or null if the last call
 * succeeded. The pointer stays valid until the next call on this thread.
 */
const char *am_last_error_message(void);

/**
 * Parses `description` and stores a new handle in `*out`.
 *
 * # Safety
 * `description` must be a NUL-terminated string and `out` valid for writes.
 */
enum AmStatus am_provider_new(const char *description, struct AmProvider **out);

/**
 * Releases a handle. Null is ignored.
 *
 * # Safety
 * `provider` must be null or a handle from [`am_provider_new`] that has not
 * been freed.
 */
void am_provider_free(struct AmProvider *provider);

/**
 * `μ̂(n)` for `|n| ≤ 2^31 - 1`.
 *
 * # Safety
 * `provider` must be a live handle; `re` and `im` valid for writes.
 */
enum AmStatus am_coefficient(const struct AmProvider *provider, int64_t n, double *re, double *im);

/**
 * `μ[a, b)` for `0 ≤ a < b ≤ 1` from `terms` coefficients; `method` is an
 * [`AmLimitMethod`] value.
 *
 * # Safety
 * `provider` must be a live handle; `out` valid for writes.
 */
enum AmStatus am_arc_measure(const struct AmProvider *provider,
                             double a,
                             double b,
                             size_t terms,
                             int32_t method,
                             struct AmSeriesResult *out);

/**
 * `μ[0, x)` for `x ∈ [0, 1]`; `method` is an [`AmLimitMethod`] value.
 *
 * # Safety
 * `provider` must be a live handle; `out` valid for writes.
 */
enum AmStatus am_cdf(const struct AmProvider *provider,
                     double x,
                     size_t terms,
                     int32_t method,
                     struct AmSeriesResult *out);

/**
 * Wiener estimate of `μ{x}` over the [`AmWindow`] given by `window_kind`;
 * `oscillation` may be null.
 *
 * # Safety
 * `provider` must be a live handle; `value` valid for writes; `oscillation`
 * null or valid for writes.
 */
enum AmStatus am_atom_mass(const struct AmProvider *provider,
                           double x,
                           int32_t window_kind,
                           size_t terms,
                           double *value,
                           double *oscillation);

/**
 * `(μ ∗ μ̄)[a, b)` for a continuous measure.
 *
 * # Safety
 * `provider` must be a live handle; `out` valid for writes.
 */
enum AmStatus am_autocorrelation_arc(const struct AmProvider *provider,
                                     double a,
                                     double b,
                                     size_t terms,
                                     struct AmSeriesResult *out);

/**
 * The Cantor function at `x`; 0 below 0 and 1 above 1.
 */
double am_cantor_exact(double x);

/**
 * Block-smoothed Fourier partial sum of the Cantor function at `x ∈ (0, 1)`.
 *
 * # Safety
 * `out` must be valid for writes.
 */
enum AmStatus am_cantor_series(double x, size_t terms, double *out);

/**
 * `K_n(t)` as a trigonometric sum and in closed form.
 *
 * # Safety
 * `value_sum` and `value_closed` must be valid for writes.
 */
enum AmStatus am_fejer_kernel(size_t n, double t, double *value_sum, double *value_closed);

/**
 * Log-log fit of ball measures at `points` radii from `r_max` to `r_min`.
 *
 * # Safety
 * `provider` must be a live handle; `out` valid for writes.
 */
enum AmStatus am_local_dimension(const struct AmProvider *provider,
                                 double x,
                                 double r_max,
                                 double r_min,
                                 size_t points,
                                 size_t terms,
                                 struct AmDimensionFit *out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* ARCMEASURE_H */
