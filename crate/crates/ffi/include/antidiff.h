#ifndef ANTIDIFF_H
#define ANTIDIFF_H

/* Generated by cbindgen from src/lib.rs; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Status codes returned by every fallible function.
 */
typedef enum AdStatus {
  AD_STATUS_OK = 0,
  AD_STATUS_NULL_POINTER = 1,
  AD_STATUS_INVALID_UTF8 = 2,
  /**
   * Malformed JSON or a state that fails validation.
   */
  AD_STATUS_INVALID_STATE = 3,
  /**
   * Unknown scheme name, bad CFL number or scalar literal.
   */
  AD_STATUS_INVALID_ARGUMENT = 4,
  /**
   * The scheme cannot step this state (wrong grid, lambda too large).
   */
  AD_STATUS_PRECONDITION = 5,
  /**
   * A panic was caught at the boundary.
   */
  AD_STATUS_INTERNAL = 6,
} AdStatus;

/**
 * Opaque grid state.
 */
typedef struct AdState AdState;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message of the last failure on this thread, or null. The pointer stays
 * valid until the next failing call on the same thread.
 */
const char *ad_last_error(void);

/**
 * Parses a state from its JSON form.
 *
 * # Safety
 * `json` must be a NUL-terminated string and `out` a valid pointer.
 */
enum AdStatus ad_state_from_json(const char *json, struct AdState **out);

/**
 * Serializes a state; release the result with `ad_string_free`.
 *
 * # Safety
 * `state` must come from this library and `out` be a valid pointer.
 */
enum AdStatus ad_state_to_json(const struct AdState *state, char **out);

/**
 * Copies a state.
 *
 * # Safety
 * `state` must come from this library and `out` be a valid pointer.
 */
enum AdStatus ad_state_clone(const struct AdState *state, struct AdState **out);

/**
 * Advances `state` in place by `steps` steps of the named scheme at the
 * state's own CFL number. On failure the state is left unchanged.
 *
 * # Safety
 * `state` must come from this library and `scheme` be NUL-terminated.
 */
enum AdStatus ad_state_step(struct AdState *state, const char *scheme, size_t steps);

/**
 * Stored window: first cell index and number of cells.
 *
 * # Safety
 * `state` must come from this library; `start` and `len` valid pointers.
 */
enum AdStatus ad_state_window(const struct AdState *state, int64_t *start, size_t *len);

/**
 * Value of cell `j` rounded to binary64. Cells outside the window follow
 * the tails or the period.
 *
 * # Safety
 * `state` must come from this library and `out` be a valid pointer.
 */
enum AdStatus ad_state_value(const struct AdState *state, int64_t j, double *out);

/**
 * Exact value of cell `j` as a string (`p/q` or a binary64 literal);
 * release it with `ad_string_free`.
 *
 * # Safety
 * `state` must come from this library and `out` be a valid pointer.
 */
enum AdStatus ad_state_value_string(const struct AdState *state, int64_t j, char **out);

/**
 * Full classification report as JSON; `alpha` is the lower bound on
 * inner jumps, in the state's arithmetic. Release with `ad_string_free`.
 *
 * # Safety
 * `state` must come from this library, `alpha` be NUL-terminated and
 * `out` a valid pointer.
 */
enum AdStatus ad_state_classify_json(const struct AdState *state, const char *alpha, char **out);

/**
 * Releases a state. Null is ignored.
 *
 * # Safety
 * `state` must come from this library and not be used afterwards.
 */
void ad_state_free(struct AdState *state);

/**
 * Releases a string returned by this library. Null is ignored.
 *
 * # Safety
 * `s` must come from this library and not be used afterwards.
 */
void ad_string_free(char *s);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* ANTIDIFF_H */
