#ifndef NUMRANGE_H
#define NUMRANGE_H

/* Generated by cbindgen from crates/ffi; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Result codes shared by every call.
 */
typedef enum NrStatus {
  NR_STATUS_OK = 0,
  NR_STATUS_NULL_POINTER = 1,
  NR_STATUS_INVALID_UTF8 = 2,
  NR_STATUS_PARSE = 3,
  NR_STATUS_VALIDATION = 4,
  NR_STATUS_DIMENSION_MISMATCH = 5,
  NR_STATUS_DOMAIN = 6,
  NR_STATUS_INFINITE_INPUT = 7,
  NR_STATUS_PRECONDITION = 8,
  NR_STATUS_CONDITION_FAILED = 9,
  NR_STATUS_NO_ROOT = 10,
  NR_STATUS_NO_CONVERGENCE = 11,
  NR_STATUS_JACOBIAN_SINGULAR = 12,
  NR_STATUS_SINGULAR_POINT = 13,
  NR_STATUS_IO = 14,
  NR_STATUS_PANIC = 15,
} NrStatus;

/**
 * Opaque handle to a holomorphic map on a ball.
 */
typedef struct NrMap NrMap;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Library version as a static NUL-terminated string.
 */
const char *nr_version(void);

/**
 * Copies the last error message of this thread into `buf` (NUL-terminated,
 * truncated to `len`). Returns the full message length without the NUL.
 *
 * # Safety
 * `buf` must be null or valid for `len` bytes.
 */
size_t nr_last_error(char *buf, size_t len);

/**
 * Parses a JSON map specification into a new handle, to be released with
 * [`nr_map_free`].
 *
 * # Safety
 * `json` must be a NUL-terminated string and `out` valid for one write.
 */
enum NrStatus nr_map_from_json(const char *json, struct NrMap **out);

/**
 * Releases a handle; null is ignored.
 *
 * # Safety
 * `map` must be null or a handle not yet freed.
 */
void nr_map_free(struct NrMap *map);

/**
 * # Safety
 * `map` must be a live handle and `out` valid for one write.
 */
enum NrStatus nr_map_dim(const struct NrMap *map, size_t *out);

/**
 * # Safety
 * `map` must be a live handle and `out` valid for one write.
 */
enum NrStatus nr_map_radius(const struct NrMap *map, double *out);

/**
 * `h(x)` for `x` of dimension `dim`.
 *
 * # Safety
 * `x` must hold `2·dim` doubles and `out` room for `2·dim` doubles.
 */
enum NrStatus nr_map_eval(const struct NrMap *map, const double *x, size_t dim, double *out);

/**
 * Sampled sup (`inf` nonzero: inf) over `‖x‖ = r` of `Re⟨e^{iθ}(h(x) − s·h(0)), x⟩`
 * with `s = 1` when `subtract_h0` is nonzero.
 *
 * # Safety
 * `map` must be a live handle and `out` valid for one write.
 */
enum NrStatus nr_sphere_pairing(const struct NrMap *map,
                                double r,
                                double theta,
                                int32_t subtract_h0,
                                int32_t inf,
                                uint64_t seed,
                                double *out);

/**
 * Solves `λx − h(x) = z` by damped Newton; `r_cap` may be infinite.
 *
 * # Safety
 * `z` must hold `2·dim` doubles, `x_out` room for `2·dim` doubles and
 * `residual` be null or valid for one write.
 */
enum NrStatus nr_solve_resolvent(const struct NrMap *map,
                                 double lambda_re,
                                 double lambda_im,
                                 const double *z,
                                 size_t dim,
                                 double r_cap,
                                 double *x_out,
                                 double *residual);

/**
 * Null-point radius for `‖h(0)‖ = c` and `L`; fails when `L + 4c < 0` does not hold.
 *
 * # Safety
 * `out` must be valid for one write.
 */
enum NrStatus nr_nullp_radius(double c, double lip, double *out);

/**
 * # Safety
 * `out` must be valid for one write.
 */
enum NrStatus nr_starlike_radius(double theta, double *out);

/**
 * # Safety
 * `out` must be valid for one write.
 */
enum NrStatus nr_spiral_radius(double theta, double *out);

/**
 * Root `r*` of the Bloch profile for hand values of `θ`, `L` and `δ`.
 *
 * # Safety
 * `out` must be valid for one write.
 */
enum NrStatus nr_bloch_r_star(double theta, double lip, double delta, double *out);

/**
 * `s*` and `ρ(s*)` for hand values of `θ`, `L` and `δ`.
 *
 * # Safety
 * `s_out` and `rho_out` must be valid for one write each.
 */
enum NrStatus nr_bloch_s_star(double theta,
                              double lip,
                              double delta,
                              double *s_out,
                              double *rho_out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* NUMRANGE_H */
