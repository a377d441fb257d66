#ifndef SAC_H
#define SAC_H

/* Generated by cbindgen from the sac-ffi crate; do not edit by hand. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Result of any fallible call.
 */
typedef enum SacStatus {
  /**
   * Success.
   */
  SAC_STATUS_OK = 0,
  /**
   * Null pointer, out-of-range index, or wrong key kind.
   */
  SAC_STATUS_INVALID_ARGUMENT = 1,
  /**
   * Data rejected: shape mismatch, bad subscript, empty group.
   */
  SAC_STATUS_PARSE_OR_SHAPE = 2,
  /**
   * Unknown aggregator or engine name.
   */
  SAC_STATUS_UNKNOWN_NAME = 3,
  /**
   * Engines disagreed during verification.
   */
  SAC_STATUS_MISMATCH = 4,
} SacStatus;

/**
 * Aggregation function applied to each group.
 */
typedef enum SacAgg {
  SAC_AGG_MEAN = 0,
  SAC_AGG_SUM = 1,
  SAC_AGG_COUNT = 2,
  SAC_AGG_MIN = 3,
  SAC_AGG_MAX = 4,
} SacAgg;

/**
 * Which engine computes the summary.
 */
typedef enum SacEngine {
  SAC_ENGINE_HASH = 0,
  SAC_ENGINE_DENSE = 1,
  SAC_ENGINE_STREAMING = 2,
  SAC_ENGINE_APL = 3,
  SAC_ENGINE_LINEAR_SCAN = 4,
} SacEngine;

/**
 * Output row order.
 */
typedef enum SacOrder {
  SAC_ORDER_SORTED = 0,
  SAC_ORDER_FIRST = 1,
} SacOrder;

/**
 * An accumulated array, readable through `sac_accum_*` accessors.
 */
typedef struct SacAccum SacAccum;

/**
 * Per-group aggregates, readable through `sac_summary_*` accessors.
 */
typedef struct SacSummary SacSummary;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Groups `len` (key, value) pairs by integer key and reduces each group.
 *
 * On success writes a new handle to `out`; release it with
 * `sac_summary_free`.
 */
enum SacStatus sac_summarize_int(const int64_t *keys,
                                 const double *values,
                                 size_t len,
                                 enum SacAgg agg,
                                 enum SacEngine engine,
                                 enum SacOrder order,
                                 struct SacSummary **out);

/**
 * Like `sac_summarize_int` with NUL-terminated string keys. The dense
 * engine rejects string keys.
 */
enum SacStatus sac_summarize_labels(const char *const *keys,
                                    const double *values,
                                    size_t len,
                                    enum SacAgg agg,
                                    enum SacEngine engine,
                                    enum SacOrder order,
                                    struct SacSummary **out);

/**
 * Number of groups in the summary; 0 for a null handle.
 */
size_t sac_summary_len(const struct SacSummary *summary);

/**
 * The integer key of group `index`. Fails on string-keyed summaries.
 */
enum SacStatus sac_summary_key_int(const struct SacSummary *summary, size_t index, int64_t *out);

/**
 * The string key of group `index`, or null for integer-keyed summaries
 * and out-of-range indexes. The pointer stays valid until
 * `sac_summary_free`.
 */
const char *sac_summary_key_label(const struct SacSummary *summary, size_t index);

/**
 * The aggregate of group `index`.
 */
enum SacStatus sac_summary_value(const struct SacSummary *summary, size_t index, double *out);

/**
 * Releases a summary handle. Null is a no-op.
 */
void sac_summary_free(struct SacSummary *summary);

/**
 * Accumulates `values` into an array addressed by 1-based subscripts.
 *
 * `subs` is row-major `n_rows` × `n_dims`. `sz` optionally fixes the
 * extents (`sz_len` must then equal `n_dims`; pass null and 0 to default
 * to the per-column maxima). Sparse output needs `n_dims` ≤ 2 and a zero
 * `fillval`. On success writes a new handle to `out`; release it with
 * `sac_accum_free`.
 */
enum SacStatus sac_accumarray(const uint64_t *subs,
                              size_t n_rows,
                              size_t n_dims,
                              const double *values,
                              enum SacAgg agg,
                              const uint64_t *sz,
                              size_t sz_len,
                              double fillval,
                              bool sparse,
                              struct SacAccum **out);

/**
 * Number of dimensions; 0 for a null handle.
 */
size_t sac_accum_ndims(const struct SacAccum *accum);

/**
 * The extent of dimension `dim`.
 */
enum SacStatus sac_accum_extent(const struct SacAccum *accum, size_t dim, uint64_t *out);

/**
 * Whether the result stores a coordinate list instead of every cell.
 */
bool sac_accum_is_sparse(const struct SacAccum *accum);

/**
 * Number of stored coordinate-list entries; 0 for dense results.
 */
size_t sac_accum_nnz(const struct SacAccum *accum);

/**
 * Reads stored entry `index` of a sparse result: its coordinates into
 * `coords_out` (`n_dims` slots, 1-based) and its value into `value_out`.
 */
enum SacStatus sac_accum_entry(const struct SacAccum *accum,
                               size_t index,
                               uint64_t *coords_out,
                               double *value_out);

/**
 * Reads one cell by 1-based coordinates (`n_coords` must equal the
 * dimension count). Unstored sparse cells read as 0.
 */
enum SacStatus sac_accum_cell(const struct SacAccum *accum,
                              const uint64_t *coords,
                              size_t n_coords,
                              double *out);

/**
 * Releases an accumarray handle. Null is a no-op.
 */
void sac_accum_free(struct SacAccum *accum);

/**
 * Static name for a status code.
 */
const char *sac_status_name(enum SacStatus status);

/**
 * Library version as a static string.
 */
const char *sac_version(void);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* SAC_H */
