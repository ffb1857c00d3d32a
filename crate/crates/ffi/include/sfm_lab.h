#ifndef SFM_LAB_H
#define SFM_LAB_H

/* Generated by cbindgen from crates/ffi. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum SfmStatus {
  SFM_STATUS_OK = 0,
  SFM_STATUS_NULL_POINTER = 1,
  SFM_STATUS_INVALID_ARGUMENT = 2,
  SFM_STATUS_INVALID_INSTANCE = 3,
  SFM_STATUS_LIMIT_EXCEEDED = 4,
  SFM_STATUS_INCONSISTENT = 5,
  SFM_STATUS_PANIC = 6,
} SfmStatus;

typedef enum SfmQueryClass {
  SFM_QUERY_CLASS_IMPORTANT = 0,
  SFM_QUERY_CLASS_USELESS = 1,
  SFM_QUERY_CLASS_DECOY = 2,
} SfmQueryClass;

/**
 * Opaque permutation-family adversary.
 */
typedef struct SfmAdversary2n SfmAdversary2n;

/**
 * Opaque weighted graph.
 */
typedef struct SfmGraph SfmGraph;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message for the last failed call on this thread; empty after a success.
 * The pointer stays valid until the next call on the same thread.
 */
const char *sfm_last_error_message(void);

/**
 * # Safety
 * `s` must come from this library and not have been freed. Null is a no-op.
 */
void sfm_string_free(char *s);

/**
 * Parses graph JSON (`n_vertices`, `mode`, optional `s`/`t`/`directed`,
 * `edges` as `[tail, head, "p/q"]`).
 *
 * # Safety
 * `json` must be a NUL-terminated string; `out` must be writable.
 */
enum SfmStatus sfm_graph_from_json(const char *json, struct SfmGraph **out);

/**
 * Star plus matching construction on `n` vertices.
 *
 * # Safety
 * `out` must be writable.
 */
enum SfmStatus sfm_graph_star_matching(size_t n, struct SfmGraph **out);

/**
 * # Safety
 * `g` must come from this library and not have been freed. Null is a no-op.
 */
void sfm_graph_free(struct SfmGraph *g);

/**
 * Number of ground elements (non-terminal vertices for s-t graphs).
 *
 * # Safety
 * `g` must be a live handle; `out` must be writable.
 */
enum SfmStatus sfm_graph_ground_size(const struct SfmGraph *g, size_t *out);

/**
 * Cut value of `mask` as a newly allocated `"p/q"` string.
 *
 * # Safety
 * `g` must be a live handle; `out` must be writable.
 */
enum SfmStatus sfm_graph_cut_value(const struct SfmGraph *g, uint32_t mask, char **out);

/**
 * Rank of the minimizers' indicator vectors.
 *
 * # Safety
 * `g` must be a live handle; `out` must be writable.
 */
enum SfmStatus sfm_graph_cut_dimension(const struct SfmGraph *g, bool nontrivial, size_t *out);

/**
 * Exhaustive minimum cut: first minimizer in bitmask order.
 *
 * # Safety
 * `g` must be a live handle; both outputs must be writable.
 */
enum SfmStatus sfm_graph_min_cut(const struct SfmGraph *g,
                                 bool nontrivial,
                                 char **out_value,
                                 uint32_t *out_mask);

/**
 * Evaluates the permutation-family function given by `sigma[0..n]`
 * (a permutation of `1..=n`) and `c[0..=n]` (entries 0 or 1) at `mask`.
 *
 * # Safety
 * `sigma` must point to `n` values, `c` to `n + 1`; `out` must be writable.
 */
enum SfmStatus sfm_permutation_eval(size_t n,
                                    const size_t *sigma,
                                    const uint8_t *c,
                                    uint32_t mask,
                                    char **out);

/**
 * # Safety
 * `out` must be writable.
 */
enum SfmStatus sfm_adversary2n_new(size_t n, struct SfmAdversary2n **out);

/**
 * Answers one query; `out_class` may be null.
 *
 * # Safety
 * `a` must be a live handle; `out_value` must be writable.
 */
enum SfmStatus sfm_adversary2n_query(struct SfmAdversary2n *a,
                                     uint32_t mask,
                                     char **out_value,
                                     enum SfmQueryClass *out_class);

/**
 * Judges `guess` (a `"p/q"` string). Writes whether the solver was fooled
 * and the true minimum of the completed instance.
 *
 * # Safety
 * `a` must be a live handle; `guess` NUL-terminated; outputs writable.
 */
enum SfmStatus sfm_adversary2n_finalize(const struct SfmAdversary2n *a,
                                        const char *guess,
                                        bool *out_fooled,
                                        char **out_true_min);

/**
 * # Safety
 * `a` must come from this library and not have been freed. Null is a no-op.
 */
void sfm_adversary2n_free(struct SfmAdversary2n *a);

/**
 * Builds the s-t kernel vector for `k` non-terminals and scans all `2^k`
 * query vectors. `k < 2` reports `InvalidArgument`.
 *
 * # Safety
 * `out_pass` must be writable.
 */
enum SfmStatus sfm_st_kernel_check(size_t k, size_t special_vertex, bool *out_pass);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* SFM_LAB_H */
