/* C ABI for the rrtd subgoal-valuation library. */

#ifndef RRTD_H
#define RRTD_H

/* Generated by cbindgen from rrtd-ffi; do not edit by hand. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Status code returned by every fallible FFI call.
 */
typedef enum rrtd_status {
  /**
   * Success; all out-pointers were written.
   */
  RRTD_OK = 0,
  /**
   * A required pointer argument was null.
   */
  RRTD_ERR_NULL = 1,
  /**
   * Input text could not be parsed (graph6, model tag, distribution tag).
   */
  RRTD_ERR_PARSE = 2,
  /**
   * Inputs were structurally invalid for the operation.
   */
  RRTD_ERR_DOMAIN = 3,
  /**
   * Computation failed to converge or overflowed its budget.
   */
  RRTD_ERR_NUMERIC = 4,
  /**
   * The caller's output buffer is too small.
   */
  RRTD_ERR_BUFFER = 5,
} rrtd_status;

/**
 * Opaque connected-graph handle.
 */
typedef struct rrtd_graph rrtd_graph;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Last error message for this thread as a NUL-terminated string. Valid
 * until the next failing call on the same thread; never null.
 */
const char *rrtd_last_error(void);

/**
 * Parses a graph6 line into a new graph handle. The handle must be released
 * with `rrtd_graph_free`.
 *
 * # Safety
 * `text` must be a valid NUL-terminated string and `out` a valid pointer.
 */
enum rrtd_status rrtd_graph_from_graph6(const char *text, struct rrtd_graph **out);

/**
 * Releases a graph handle. Null is a no-op.
 *
 * # Safety
 * `g` must be null or a handle produced by this library, not yet freed.
 */
void rrtd_graph_free(struct rrtd_graph *g);

/**
 * Number of states in the graph.
 *
 * # Safety
 * `g` must be a live handle and `out` a valid pointer.
 */
enum rrtd_status rrtd_graph_n(const struct rrtd_graph *g, size_t *out);

/**
 * Per-state predictions for one model, written to `out[0..n]`.
 *
 * `model_tag` is one of the CSV tags (e.g. "RRTD-RW", "Degree");
 * `dist_tag` is "all", "distinct", or "nonadjacent". `samples` and `seed`
 * drive the Monte Carlo models and are ignored by exact ones. `out_len`
 * is the capacity of `out` in doubles and must be at least the state count.
 *
 * # Safety
 * `g` must be a live handle, the tag pointers valid NUL-terminated strings,
 * and `out` valid for `out_len` writes.
 */
enum rrtd_status rrtd_predict(const struct rrtd_graph *g,
                              const char *model_tag,
                              const char *dist_tag,
                              uint64_t samples,
                              uint64_t seed,
                              double *out,
                              size_t out_len);

/**
 * Spectral gap 1 - lambda2 of the normalized adjacency operator.
 *
 * # Safety
 * `g` must be a live handle and `out` a valid pointer.
 */
enum rrtd_status rrtd_spectral_gap(const struct rrtd_graph *g, double *out);

/**
 * Expected steps H(s, z) for a random walk from `s` to first arrival at `z`.
 *
 * # Safety
 * `g` must be a live handle and `out` a valid pointer.
 */
enum rrtd_status rrtd_hitting_time(const struct rrtd_graph *g, size_t s, size_t z, double *out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* RRTD_H */
