#ifndef URBANIK_H
#define URBANIK_H

/* Generated by cbindgen from urbanik-ffi; do not edit by hand. */

#include <stdarg.h>
#include <stdbool.h>
#include <stdint.h>
#include <stdlib.h>

// Status codes returned by every fallible entry point.
typedef enum UrbStatus {
  URB_STATUS_OK = 0,
  URB_STATUS_NULL_POINTER = 1,
  URB_STATUS_INVALID_ARGUMENT = 2,
  URB_STATUS_UNKNOWN_DISTRIBUTION = 3,
  URB_STATUS_QUADRATURE_FAILURE = 4,
  URB_STATUS_UNSUPPORTED = 5,
  URB_STATUS_INTERNAL_ERROR = 6,
} UrbStatus;

// Opaque handle to a catalog distribution.
typedef struct UrbDistribution UrbDistribution;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Library version as a static C string.
const char *urb_version(void);

// Creates a distribution handle. `name` is one of the catalog names
// (`laplace`, `sinh`, `cosh`, `tanh`, `logistic`, `generalized_logistic`,
// `talacko_zolotarev`); pass NaN for parameters the law does not take.
//
// # Safety
// `name` must be a valid NUL-terminated string and `out` a valid pointer.
enum UrbStatus urb_distribution_new(const char *name,
                                    double alpha,
                                    double c,
                                    struct UrbDistribution **out);

// Releases a handle created by [`urb_distribution_new`]. NULL is a no-op.
//
// # Safety
// `dist` must be NULL or a pointer previously returned by
// `urb_distribution_new` that has not been freed.
void urb_distribution_free(struct UrbDistribution *dist);

// Closed-form characteristic function at `t`.
//
// # Safety
// `dist` and `out` must be valid pointers.
enum UrbStatus urb_cf(const struct UrbDistribution *dist, double t, double *out);

// Characteristic function evaluated through the Lévy density (exponent
// integral), the slow-but-independent route.
//
// # Safety
// `dist` and `out` must be valid pointers.
enum UrbStatus urb_cf_from_levy(const struct UrbDistribution *dist, double t, double *out);

// Background driving characteristic function at `t` (closed form when the
// catalog has one, numeric log-derivative otherwise).
//
// # Safety
// `dist` and `out` must be valid pointers.
enum UrbStatus urb_bdcf(const struct UrbDistribution *dist, double t, double *out);

// Runs the Urbanik classifier on the default grid and returns the verdict
// as a JSON document (same schema as the CLI `classify --json`).
//
// # Safety
// `dist` and `out` must be valid pointers; release the string with
// [`urb_string_free`].
enum UrbStatus urb_classify_json(const struct UrbDistribution *dist, int32_t max_level, char **out);

// Releases a string returned by this library. NULL is a no-op.
//
// # Safety
// `s` must be NULL or a string previously returned by this library that has
// not been freed.
void urb_string_free(char *s);

// Fills `out[0..n]` with reproducible samples. `k_trunc` is the series
// truncation (ignored by `laplace` and `generalized_logistic`);
// `tail_correction != 0` enables the Gaussian variance-matching correction.
//
// # Safety
// `dist` must be valid and `out` must point to at least `n` doubles.
enum UrbStatus urb_sample(const struct UrbDistribution *dist,
                          uintptr_t n,
                          uintptr_t k_trunc,
                          uint64_t seed,
                          int32_t tail_correction,
                          double *out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* URBANIK_H */
