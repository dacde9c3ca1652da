#ifndef EQUIAFFINE_H
#define EQUIAFFINE_H

/* Generated by cbindgen from the equiaffine-ffi crate; do not edit by hand. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

// Outcome of a library call. Values above `EQA_STATUS_DISTINCT` are
// errors; `eqa_last_error` describes the most recent one.
typedef enum EqaStatus {
  // Success. For equivalence checks: the curves are equivalent.
  EQA_STATUS_OK = 0,
  // The equivalence check completed and the curves are not equivalent.
  EQA_STATUS_DISTINCT = 1,
  // Malformed input: JSON, CSV, catalog name, or parameters.
  EQA_STATUS_PARSE = 2,
  // The curve fails the regularity requirement somewhere on its domain.
  EQA_STATUS_DEGENERATE = 3,
  // Dimension or grid mismatch between inputs.
  EQA_STATUS_DIMENSION = 4,
  // An initial frame whose determinant is not 1.
  EQA_STATUS_NOT_UNIMODULAR = 5,
  // Frame integration lost unimodularity beyond the drift budget.
  EQA_STATUS_DRIFT = 6,
  // Any other failure, including caught panics.
  EQA_STATUS_INTERNAL = 7,
  // A required pointer argument was null.
  EQA_STATUS_NULL_ARGUMENT = 8,
} EqaStatus;

// Opaque curve handle.
typedef struct EqaCurve EqaCurve;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Library version as a static NUL-terminated string; do not free.
const char *eqa_version(void);

// Message for the most recent failure on this thread. The pointer stays
// valid until the next library call on the same thread; do not free.
const char *eqa_last_error(void);

// Release a string returned by this library. Null is ignored.
//
// # Safety
// `s` must have been returned by this library and not freed before.
void eqa_string_free(char *s);

// Build a named catalog curve (`circle`, `ellipse`, `moment`, `helix`,
// `parabola`) from `nparams` shape parameters.
//
// # Safety
// `name` must be NUL-terminated, `params` must point to `nparams` doubles
// (null allowed when `nparams` is 0), and `out` must be writable.
enum EqaStatus eqa_curve_catalog(const char *name,
                                 const double *params,
                                 size_t nparams,
                                 struct EqaCurve **out);

// Build a curve from spec JSON: `{"kind":"catalog"|"polynomial"|"sampled", ...}`.
// Sampled specs without an `fd_order` field use order 4.
//
// # Safety
// `json` must be NUL-terminated and `out` must be writable.
enum EqaStatus eqa_curve_from_json(const char *json, struct EqaCurve **out);

// Build a curve from `npoints` samples of an n-dimensional curve on the
// uniform grid `t0 + i*h`. `points` is row major: sample i occupies
// `points[i*n .. (i+1)*n]`. `fd_order` must be 2, 4, or 6.
//
// # Safety
// `points` must point to `npoints * n` doubles and `out` must be writable.
enum EqaStatus eqa_curve_sampled(size_t n,
                                 double t0,
                                 double h,
                                 size_t fd_order,
                                 const double *points,
                                 size_t npoints,
                                 struct EqaCurve **out);

// Release a curve handle. Null is ignored.
//
// # Safety
// `curve` must have been returned by this library and not freed before.
void eqa_curve_free(struct EqaCurve *curve);

// Ambient dimension of the curve, or 0 for a null handle.
//
// # Safety
// `curve` must be a live handle from this library, or null.
size_t eqa_curve_dim(const struct EqaCurve *curve);

// Parameter domain [a, b] of the curve.
//
// # Safety
// `curve` must be a live handle or null; `a` and `b` must be writable.
enum EqaStatus eqa_curve_domain(const struct EqaCurve *curve, double *a, double *b);

// Total equiaffine arc length over the curve's domain, from an `npts`-point
// table (forced odd, at least 3).
//
// # Safety
// `curve` must be a live handle or null; `total` must be writable.
enum EqaStatus eqa_arc_length(const struct EqaCurve *curve, size_t npts, double *total);

// Curvature profile in natural parameter as CSV (`s,chi_1,...,chi_{n-1}`),
// evaluated on an `npts`-point grid. The curve must be regular with
// positive orientation over its whole domain.
//
// # Safety
// `curve` must be a live handle or null; `out_csv` must be writable.
enum EqaStatus eqa_profile_csv(const struct EqaCurve *curve, size_t npts, char **out_csv);

// Decide special-affine equivalence of two curves at tolerance `tol` on an
// `npts`-point grid. Returns `EQA_STATUS_OK` when equivalent,
// `EQA_STATUS_DISTINCT` when not. When `report_json` is non-null it
// receives the full report (deviations, recovered map, residual) for either
// verdict.
//
// # Safety
// `curve1` and `curve2` must be live handles or null; `report_json` must be
// writable or null.
enum EqaStatus eqa_check_equivalence(const struct EqaCurve *curve1,
                                     const struct EqaCurve *curve2,
                                     size_t npts,
                                     double tol,
                                     char **report_json);

// Reconstruct a curve from curvature-spec JSON
// (`{"n", "L", "channels":[...]}`) by integrating the frame system at step
// `h` from the identity frame at the origin. Writes the node positions as
// CSV (`s,x_1,...,x_n`).
//
// # Safety
// `spec_json` must be NUL-terminated and `out_csv` must be writable.
enum EqaStatus eqa_reconstruct_csv(const char *spec_json, double h, char **out_csv);

// Seeded random special-affine map of dimension `n` as JSON
// (`{"n","B","tau"}`). The same `(n, seed)` always yields the same map.
//
// # Safety
// `out_json` must be writable.
enum EqaStatus eqa_random_map_json(size_t n, uint64_t seed, char **out_json);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* EQUIAFFINE_H */
