#ifndef PRIM_COBORDISM_H
#define PRIM_COBORDISM_H

/* Generated by cbindgen from crates/ffi/src/lib.rs; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Result codes. 0 to 3 agree with the command-line exit status.
 */
typedef enum PcStatus {
  PC_STATUS_OK = 0,
  /**
   * A mathematical verdict failed; outputs are filled.
   */
  PC_STATUS_VERDICT_FAILED = 1,
  /**
   * Bad arguments, config or model.
   */
  PC_STATUS_USAGE = 2,
  /**
   * No verdict either way; outputs are filled.
   */
  PC_STATUS_INCONCLUSIVE = 3,
  PC_STATUS_NULL_POINTER = 4,
  PC_STATUS_INVALID_UTF8 = 5,
  /**
   * The output buffer is too short; the needed length is still reported.
   */
  PC_STATUS_BUFFER_TOO_SMALL = 6,
  PC_STATUS_PANIC = 7,
} PcStatus;

/**
 * Opaque model handle.
 */
typedef struct PcModel PcModel;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Library version as a static NUL-terminated string.
 */
const char *pc_version(void);

/**
 * Message of the last failed call on this thread, or null. Valid until the
 * next call into the library on the same thread.
 */
const char *pc_last_error_message(void);

/**
 * Builds a named model (`figure_eight`, `round_circle`, `round_torus`,
 * `tilted_torus`, `boy_surface`); `params` may be null when `n_params` is 0,
 * which selects the defaults.
 *
 * # Safety
 * `name` must be a NUL-terminated string, `params` must point to
 * `n_params` doubles, and `out` must be writable.
 */
enum PcStatus pc_model_builtin(const char *name,
                               const double *params,
                               size_t n_params,
                               struct PcModel **out);

/**
 * A curve `θ ↦ (f(θ), h(θ))` from cosine and sine coefficients, constant
 * term first in the cosine lists and `sin θ` first in the sine lists.
 *
 * # Safety
 * Each coefficient pointer must point to its count of doubles (or be null
 * with count 0), and `out` must be writable.
 */
enum PcStatus pc_model_trig_curve(const double *f_cos,
                                  size_t n_f_cos,
                                  const double *f_sin,
                                  size_t n_f_sin,
                                  const double *h_cos,
                                  size_t n_h_cos,
                                  const double *h_sin,
                                  size_t n_h_sin,
                                  struct PcModel **out);

/**
 * Releases a model. Null is ignored.
 *
 * # Safety
 * `model` must come from a constructor here and not be freed twice.
 */
void pc_model_free(struct PcModel *model);

/**
 * Dimension of the source manifold, or 0 for a null handle.
 *
 * # Safety
 * `model` must be null or a live handle.
 */
size_t pc_model_source_dim(const struct PcModel *model);

/**
 * Number of values `pc_model_eval` writes, or 0 for a null handle.
 *
 * # Safety
 * `model` must be null or a live handle.
 */
size_t pc_model_ambient_dim(const struct PcModel *model);

/**
 * Number of coordinates `pc_model_eval` reads: angles on the circle and
 * torus, a nonzero vector of R³ on the projective plane.
 *
 * # Safety
 * `model` must be null or a live handle.
 */
size_t pc_model_coord_count(const struct PcModel *model);

/**
 * Evaluates the lift at one point, writing `pc_model_ambient_dim` values
 * (projection first, height last).
 *
 * # Safety
 * `coords` must point to `n_coords` doubles and `out` to `out_len`.
 */
enum PcStatus pc_model_eval(const struct PcModel *model,
                            const double *coords,
                            size_t n_coords,
                            double *out,
                            size_t out_len);

/**
 * Mixed-set counts `|Λ^r_1|, …, |Λ^r_r|` with default tolerances. The
 * number of levels goes to `len_out` even when `capacity` is too small.
 * Returns the chain verdict: `PC_STATUS_OK`, `PC_STATUS_VERDICT_FAILED`, or
 * `PC_STATUS_INCONCLUSIVE` for a rejected model (with no levels).
 *
 * # Safety
 * `counts` must point to `capacity` slots (or be null with capacity 0) and
 * `len_out` must be writable.
 */
enum PcStatus pc_chain_counts(const struct PcModel *model,
                              size_t r,
                              size_t *counts,
                              size_t capacity,
                              size_t *len_out);

/**
 * Runs a subcommand (`strata`, `multipoints`, `chain-verify`,
 * `trace-cobordism`, `normal-form`, `sweep`) on config text in the
 * command-line format and hands back the JSON report in `out_json`, to be
 * freed with `pc_string_free`. The status is the command-line exit status;
 * `out_json` is set to null when there is no report. `out` and `svg` keys
 * are ignored: nothing is written to disk.
 *
 * # Safety
 * Both strings must be NUL-terminated and `out_json` writable.
 */
enum PcStatus pc_run_json(const char *subcommand, const char *config_text, char **out_json);

/**
 * Frees a string returned by the library. Null is ignored.
 *
 * # Safety
 * `s` must come from this library and not be freed twice.
 */
void pc_string_free(char *s);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* PRIM_COBORDISM_H */
