#ifndef COSPACINGS_H
#define COSPACINGS_H

/* Generated by cbindgen from crates/ffi/src/lib.rs; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

#define COS_ORDER_USUAL 0

#define COS_ORDER_CENTRE_OUTWARD 1

#define COS_LAYOUT_DISJOINT 0

#define COS_LAYOUT_OVERLAPPING 1

// Result code of every call.
typedef enum CosStatus {
  COS_STATUS_OK = 0,
  COS_STATUS_NULL_POINTER = 1,
  COS_STATUS_INVALID_ARGUMENT = 2,
  // A value outside [0, 1] or another domain violation.
  COS_STATUS_DOMAIN = 3,
  COS_STATUS_BUFFER_TOO_SMALL = 4,
  // Quadrature failure or a degenerate variance.
  COS_STATUS_NUMERICAL = 5,
  COS_STATUS_IO = 6,
  // A Rust panic was caught at the boundary.
  COS_STATUS_PANIC = 7,
} CosStatus;

// Opaque alternative family.
typedef struct CosFamily CosFamily;

// Opaque sample on [0, 1].
typedef struct CosSample CosSample;

typedef struct CosTestReport {
  double statistic;
  double p_value;
  double critical_value;
  double alpha;
  // 1 when the null is rejected.
  int32_t reject;
  // 1 when the statistic is infinite (a zero gap under a log score).
  int32_t degenerate;
} CosTestReport;

typedef struct CosHellinger {
  double hd_direct;
  double hd_co;
  double quadrature_error;
} CosHellinger;

typedef struct CosMoments {
  double mean_h;
  double var_h;
  double cov_hz;
  double cov_h_quad;
  double null_variance;
  double quadrature_error;
} CosMoments;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Library version as a static NUL-terminated string.
const char *cos_version(void);

// Message for the last failed call on this thread; empty after a success.
// Valid until the next call on the same thread.
const char *cos_last_error(void);

// Copies `len` values into a new sample. Values must lie in [0, 1].
//
// # Safety
// `values` must point to `len` readable doubles; `out` must be writable.
enum CosStatus cos_sample_new(const double *values, size_t len, struct CosSample **out);

// Releases a sample; null is ignored.
//
// # Safety
// `sample` must come from [`cos_sample_new`] and not be used afterwards.
void cos_sample_free(struct CosSample *sample);

// Number of observations.
//
// # Safety
// `sample` must be a live handle and `out` writable.
enum CosStatus cos_sample_len(const struct CosSample *sample, size_t *out);

// Writes the spacings of `sample` into `buf`. With `step` 1 the layout is
// ignored. `written` receives the number of gaps; if `cap` is too small it is
// still set and `BufferTooSmall` is returned.
//
// # Safety
// `buf` must have room for `cap` doubles; `sample` live; `written` writable.
enum CosStatus cos_sample_spacings(const struct CosSample *sample,
                                   uint32_t order,
                                   size_t step,
                                   uint32_t layout,
                                   double *buf,
                                   size_t cap,
                                   size_t *written);

// Value of the statistic named by `spec` (e.g. `"greenwood:co"`).
//
// # Safety
// `sample` live, `spec` a NUL-terminated string, `out` writable.
enum CosStatus cos_statistic(const struct CosSample *sample, const char *spec, double *out);

// Monte Carlo test of uniformity with `replications` null samples.
//
// # Safety
// `sample` live, `spec` a NUL-terminated string, `out` writable.
enum CosStatus cos_run_test(const struct CosSample *sample,
                            const char *spec,
                            double alpha,
                            size_t replications,
                            uint64_t seed,
                            struct CosTestReport *out);

// Upper-tail Monte Carlo critical value.
//
// # Safety
// `spec` a NUL-terminated string, `out` writable.
enum CosStatus cos_critical_value(const char *spec,
                                  size_t n_obs,
                                  double alpha,
                                  size_t replications,
                                  uint64_t seed,
                                  double *out);

// Parses a family such as `"A:1.5"` or `"beta:0.5"`.
//
// # Safety
// `spec` a NUL-terminated string, `out` writable.
enum CosStatus cos_family_new(const char *spec, struct CosFamily **out);

// Releases a family; null is ignored.
//
// # Safety
// `family` must come from [`cos_family_new`] and not be used afterwards.
void cos_family_free(struct CosFamily *family);

// # Safety
// `family` live, `out` writable.
enum CosStatus cos_family_cdf(const struct CosFamily *family, double x, double *out);

// # Safety
// `family` live, `out` writable.
enum CosStatus cos_family_pdf(const struct CosFamily *family, double x, double *out);

// # Safety
// `family` live, `out` writable.
enum CosStatus cos_family_quantile(const struct CosFamily *family, double u, double *out);

// Fills `buf` with `len` draws from stream (`seed`, `stream`).
//
// # Safety
// `family` live; `buf` must have room for `len` doubles.
enum CosStatus cos_family_sample(const struct CosFamily *family,
                                 uint64_t seed,
                                 uint64_t stream,
                                 double *buf,
                                 size_t len);

// Hellinger distances from uniform of the family and of its centre-outward fold.
//
// # Safety
// `family` live, `out` writable.
enum CosStatus cos_hellinger_fold(const struct CosFamily *family, struct CosHellinger *out);

// Moments of h(Z), Z ~ Exp(1), for a built-in score (`"greenwood"`, `"moran"`, ...).
//
// # Safety
// `h` a NUL-terminated string, `out` writable.
enum CosStatus cos_exp_moments(const char *h, struct CosMoments *out);

// Runs a power study from a JSON configuration and returns the CSV table.
// `workers` 0 uses the default thread pool. Free the result with
// [`cos_string_free`].
//
// # Safety
// `config_json` a NUL-terminated string, `out` writable.
enum CosStatus cos_power_study_csv(const char *config_json, size_t workers, char **out);

// Releases a string returned by this library; null is ignored.
//
// # Safety
// `s` must come from this library and not be used afterwards.
void cos_string_free(char *s);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* COSPACINGS_H */
