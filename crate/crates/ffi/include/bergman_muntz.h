#ifndef BERGMAN_MUNTZ_H
#define BERGMAN_MUNTZ_H

#include <stdarg.h>
#include <stdbool.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum BmStatus {
  BM_STATUS_OK = 0,
  BM_STATUS_NULL_POINTER = 1,
  BM_STATUS_INVALID_UTF8 = 2,
  BM_STATUS_PARSE = 3,
  BM_STATUS_POLE = 4,
  BM_STATUS_DOMAIN = 5,
  BM_STATUS_NON_CONVERGENCE = 6,
  BM_STATUS_INSUFFICIENT_DATA = 7,
  BM_STATUS_PRECONDITION = 8,
  BM_STATUS_PANIC = 9,
} BmStatus;

typedef enum BmVerdict {
  BM_VERDICT_UNIQUENESS_SUFFICIENT = 0,
  BM_VERDICT_ZERO_SET_SUFFICIENT_DENSITY = 1,
  BM_VERDICT_ZERO_SET_SUFFICIENT_BLASCHKE = 2,
  BM_VERDICT_INCONCLUSIVE = 3,
} BmVerdict;

// Finite combination of powers ζ^(λ−1) in the Bergman space of the disk.
typedef struct BmDiskFunction BmDiskFunction;

// Sorted sequence of points in the right half-plane.
typedef struct BmSequence BmSequence;

typedef struct BmComplex {
  double re;
  double im;
} BmComplex;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Message of the last failed call on this thread, or NULL.
//
// The pointer stays valid until the next call into this library on the
// same thread.
const char *bm_last_error_message(void);

// Library version as a static NUL-terminated string.
const char *bm_version(void);

// Γ(z).
//
// # Safety
// `out` must be valid for writes.
enum BmStatus bm_cgamma(struct BmComplex z, struct BmComplex *out);

// ⟨ζ^α, ζ^β⟩ in the Bergman space of the disk.
//
// # Safety
// `out` must be valid for writes.
enum BmStatus bm_power_inner(struct BmComplex alpha, struct BmComplex beta, struct BmComplex *out);

// Reproducing kernel of ℳ²_ω at (z, w).
//
// # Safety
// `out` must be valid for writes.
enum BmStatus bm_m2_kernel(struct BmComplex z, struct BmComplex w, struct BmComplex *out);

// Reproducing kernel of the image space ℋ at (z, w).
//
// # Safety
// `out` must be valid for writes.
enum BmStatus bm_h_kernel(struct BmComplex z, struct BmComplex w, struct BmComplex *out);

// Σ c_k ζ^(λ_k − 1) from parallel arrays of length `len`.
//
// # Safety
// `lambdas` and `coeffs` must point to `len` readable values (or be NULL
// when `len` is 0); `out` must be valid for writes.
enum BmStatus bm_disk_function_new(const struct BmComplex *lambdas,
                                   const struct BmComplex *coeffs,
                                   uintptr_t len,
                                   struct BmDiskFunction **out);

// Parses `[{"lambda": [re, im], "coeff": [re, im]}, ...]`.
//
// # Safety
// `json` must be a NUL-terminated string; `out` must be valid for writes.
enum BmStatus bm_disk_function_from_json(const char *json, struct BmDiskFunction **out);

// # Safety
// `h` must be NULL or a handle not yet freed.
void bm_disk_function_free(struct BmDiskFunction *h);

// ‖f‖² in the Bergman space of the disk.
//
// # Safety
// `h` must be a live handle; `out` must be valid for writes.
enum BmStatus bm_disk_function_norm_sq(const struct BmDiskFunction *h, double *out);

// Mellin–Bergman transform of `h` evaluated at z.
//
// # Safety
// `h` must be a live handle; `out` must be valid for writes.
enum BmStatus bm_mb_transform_eval(const struct BmDiskFunction *h,
                                   struct BmComplex z,
                                   struct BmComplex *out);

// Explicit points, sorted by modulus internally.
//
// # Safety
// `points` must point to `len` readable values (or be NULL when `len` is
// 0); `out` must be valid for writes.
enum BmStatus bm_sequence_from_points(const struct BmComplex *points,
                                      uintptr_t len,
                                      struct BmSequence **out);

// Parses `{"points": [[re, im], ...]}` or `{"rule": {...}}`.
//
// # Safety
// `json` must be a NUL-terminated string; `out` must be valid for writes.
enum BmStatus bm_sequence_from_json(const char *json, struct BmSequence **out);

// # Safety
// `h` must be NULL or a handle not yet freed.
void bm_sequence_free(struct BmSequence *h);

// Number of points, or 0 for a NULL handle.
//
// # Safety
// `h` must be NULL or a live handle.
uintptr_t bm_sequence_len(const struct BmSequence *h);

// Completeness verdict for the powers ζ^(z_j − 1).
//
// # Safety
// `h` must be a live handle; `out` must be valid for writes.
enum BmStatus bm_sequence_verdict(const struct BmSequence *h, double eps0, enum BmVerdict *out);

// Full sequence report as a JSON string, released with [`bm_string_free`].
//
// # Safety
// `h` must be a live handle; `out` must be valid for writes.
enum BmStatus bm_sequence_report_json(const struct BmSequence *h, double eps0, char **out);

// (1/log R) Σ_{|z_j| ≤ R} Re(1/z_j), for R > 1.
//
// # Safety
// `h` must be a live handle; `out` must be valid for writes.
enum BmStatus bm_carleman_ratio(const struct BmSequence *h, double r, double *out);

// Π (1 − z²/z_j²).
//
// # Safety
// `h` must be a live handle; `out` must be valid for writes.
enum BmStatus bm_weierstrass_product(const struct BmSequence *h,
                                     struct BmComplex z,
                                     struct BmComplex *out);

// # Safety
// `s` must be NULL or a string returned by this library and not yet freed.
void bm_string_free(char *s);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* BERGMAN_MUNTZ_H */
