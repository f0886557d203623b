#ifndef CONIC_H
#define CONIC_H

/* Generated by cbindgen from crates/ffi/src/lib.rs; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Verdict codes written by [`conic_classify_1d`].
 */
#define CONIC_NO_NCCR 0

#define CONIC_HAS_NCCR 1

/**
 * Lattice points and complex profiles of a cone or of one-dimensional betas.
 */
typedef struct ConicAnalysis ConicAnalysis;

/**
 * Validated cone.
 */
typedef struct ConicCone ConicCone;

/**
 * Status code returned by every fallible function.
 */
typedef int32_t ConicStatus;

#define CONIC_OK 0

#define CONIC_NULL_POINTER 1

#define CONIC_INVALID_INPUT 2

#define CONIC_OUT_OF_RANGE 3

#define CONIC_INTERNAL 4

#define CONIC_PANIC 5

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Static description of a status code.
 */
const char *conic_status_message(ConicStatus status);

/**
 * Builds a cone from `num_rays * dim` row-major ray coordinates.
 *
 * # Safety
 * `rays` must point to `num_rays * dim` integers; `out_cone` must be writable.
 */
ConicStatus conic_cone_new(const int64_t *rays,
                           uintptr_t num_rays,
                           uintptr_t dim,
                           struct ConicCone **out_cone);

/**
 * # Safety
 * `cone` must come from [`conic_cone_new`] and not be freed twice. Null is ignored.
 */
void conic_cone_free(struct ConicCone *cone);

/**
 * # Safety
 * `cone` must be a live handle; the out-pointers must be writable.
 */
ConicStatus conic_cone_shape(const struct ConicCone *cone,
                             uintptr_t *out_dim,
                             uintptr_t *out_num_rays,
                             bool *out_gorenstein);

/**
 * Computes the class group, zonotope points and every complex profile of a cone.
 *
 * # Safety
 * `cone` must be a live handle; `out_analysis` must be writable.
 */
ConicStatus conic_analysis_new(const struct ConicCone *cone, struct ConicAnalysis **out_analysis);

/**
 * Same as [`conic_analysis_new`] for one-dimensional betas.
 *
 * # Safety
 * `betas` must point to `len` integers; `out_analysis` must be writable.
 */
ConicStatus conic_analysis_from_betas(const int64_t *betas,
                                      uintptr_t len,
                                      struct ConicAnalysis **out_analysis);

/**
 * # Safety
 * `analysis` must come from this library and not be freed twice. Null is ignored.
 */
void conic_analysis_free(struct ConicAnalysis *analysis);

/**
 * Number of zonotope lattice points and their dimension.
 *
 * # Safety
 * `analysis` must be a live handle; the out-pointers must be writable.
 */
ConicStatus conic_analysis_points(const struct ConicAnalysis *analysis,
                                  uintptr_t *out_count,
                                  uintptr_t *out_dim);

/**
 * Copies the coordinates of point `index` (in sorted order) into `coords`.
 *
 * # Safety
 * `analysis` must be a live handle; `coords` must hold `coords_len` integers.
 */
ConicStatus conic_analysis_point(const struct ConicAnalysis *analysis,
                                 uintptr_t index,
                                 int64_t *coords,
                                 uintptr_t coords_len);

/**
 * Length (top degree) of the raw complex of point `index`.
 *
 * # Safety
 * `analysis` must be a live handle; `out_length` must be writable.
 */
ConicStatus conic_analysis_profile_length(const struct ConicAnalysis *analysis,
                                          uintptr_t index,
                                          uintptr_t *out_length);

/**
 * Multiplicity of `entry` in `degree` of the raw complex of point `index`.
 *
 * # Safety
 * `analysis` must be a live handle; `entry` must hold `entry_len` integers.
 */
ConicStatus conic_analysis_multiplicity(const struct ConicAnalysis *analysis,
                                        uintptr_t index,
                                        uintptr_t degree,
                                        const int64_t *entry,
                                        uintptr_t entry_len,
                                        uint64_t *out_mult);

/**
 * Exhaustive search; writes the number of incredulous sets.
 *
 * # Safety
 * `analysis` must be a live handle; `out_count` must be writable.
 */
ConicStatus conic_analysis_count_incredulous(const struct ConicAnalysis *analysis,
                                             uintptr_t *out_count);

/**
 * Closed-form verdict for one-dimensional betas: [`CONIC_HAS_NCCR`] or [`CONIC_NO_NCCR`].
 *
 * # Safety
 * `betas` must point to `len` integers; `out_verdict` must be writable.
 */
ConicStatus conic_classify_1d(const int64_t *betas, uintptr_t len, int32_t *out_verdict);

/**
 * Replays a reference example; writes the number of checks that did not match.
 *
 * # Safety
 * `name` must be a NUL-terminated string; `out_failing` must be writable.
 */
ConicStatus conic_verify_example(const char *name, uintptr_t *out_failing);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* CONIC_H */
