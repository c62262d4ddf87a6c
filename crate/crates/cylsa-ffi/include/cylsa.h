/* C interface to the cylsa solid-angle library. */

#ifndef CYLSA_H
#define CYLSA_H

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

// Status codes returned by every fallible entry point.
typedef enum CysaStatus {
  CYSA_OK = 0,
  CYSA_INVALID_SCENE = 1,
  CYSA_SOURCE_INSIDE_DETECTOR = 2,
  CYSA_ADJACENT_CAP = 3,
  CYSA_DOMAIN_ERROR = 4,
  CYSA_NUMERICAL_INCONSISTENCY = 5,
  CYSA_NON_CONVERGENCE = 6,
  CYSA_NULL_POINTER = 7,
} CysaStatus;

// Classified scene handle. Create with `cysa_case_new`, release with
// `cysa_case_free`.
typedef struct CysaCase CysaCase;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Classify a scene described in the source frame (emitter at the origin,
// emission axis along +x, cylinder axis parallel to z).
//
// On success writes a heap-allocated handle to `out` and returns
// `CysaOk`; on failure `out` is untouched.
//
// # Safety
// `out` must be a valid pointer to writable memory for one pointer.
enum CysaStatus cysa_case_new(double r,
                              double d,
                              double z1,
                              double z2,
                              double alpha,
                              struct CysaCase **out);

// Release a handle returned by `cysa_case_new`. A null pointer is a no-op.
//
// # Safety
// `case` must be null or a pointer previously returned by `cysa_case_new`
// that has not been freed.
void cysa_case_free(struct CysaCase *case_);

// Case identifier: 1, 2 or 3 (0 for a null handle).
//
// # Safety
// `case` must be null or a live handle.
int32_t cysa_case_id(const struct CysaCase *case_);

// Canonical parameters of a classified scene. Any output pointer may be
// null to skip that field.
//
// # Safety
// `case` must be a live handle; non-null outputs must be writable.
enum CysaStatus cysa_case_params(const struct CysaCase *case_,
                                 double *l1,
                                 double *l2,
                                 double *d,
                                 double *r,
                                 double *alpha_abs);

// Closed-form emission fraction of a classified scene. `omega_cyl` and
// `omega_circ` may be null; they receive the lateral-surface and end-disk
// contributions.
//
// # Safety
// `case` must be a live handle; non-null outputs must be writable.
enum CysaStatus cysa_solid_angle(const struct CysaCase *case_,
                                 double *value,
                                 double *omega_cyl,
                                 double *omega_circ);

// One-shot convenience: classify and evaluate in a single call.
//
// # Safety
// `value` must be a valid writable pointer.
enum CysaStatus cysa_solid_angle_scene(double r,
                                       double d,
                                       double z1,
                                       double z2,
                                       double alpha,
                                       double *value);

// Reference value by adaptive quadrature of the master integral.
// `achieved_tol` (nullable) receives the achieved error bound.
//
// # Safety
// `case` must be a live handle; non-null outputs must be writable.
enum CysaStatus cysa_quad_estimate(const struct CysaCase *case_,
                                   double abs_tol,
                                   double *value,
                                   double *achieved_tol);

// Monte Carlo estimate by the cosine-sampled ray tracer. Deterministic for
// fixed (scene, n, seed). `std_err` (nullable) receives the standard error.
// Requires n >= 10000.
//
// # Safety
// `case` must be a live handle; non-null outputs must be writable.
enum CysaStatus cysa_mc_estimate(const struct CysaCase *case_,
                                 uint64_t n,
                                 uint64_t seed,
                                 double *value,
                                 double *std_err);

// Static description of a status code.
const char *cysa_status_message(enum CysaStatus status);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* CYLSA_H */
