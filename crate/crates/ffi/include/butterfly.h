#ifndef BUTTERFLY_H
#define BUTTERFLY_H

/* Generated by cbindgen from crates/ffi/src/lib.rs. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum BflyStatus {
  BFLY_STATUS_OK = 0,
  BFLY_STATUS_NULL_POINTER = 1,
  BFLY_STATUS_INVALID_ARGUMENT = 2,
  BFLY_STATUS_PARSE = 3,
  BFLY_STATUS_IO = 4,
  BFLY_STATUS_EMPTY_GRAPH = 5,
  BFLY_STATUS_OVERFLOW = 6,
  BFLY_STATUS_NO_EDGES = 7,
  BFLY_STATUS_NO_WEDGES = 8,
  BFLY_STATUS_SIZE_GUARD = 9,
  BFLY_STATUS_UNKNOWN_VERTEX = 10,
  BFLY_STATUS_NOT_AN_EDGE = 11,
  BFLY_STATUS_INTERNAL = 12,
  BFLY_STATUS_PANIC = 13,
} BflyStatus;

typedef enum BflySide {
  BFLY_SIDE_LEFT = 0,
  BFLY_SIDE_RIGHT = 1,
} BflySide;

typedef enum BflyMethod {
  BFLY_METHOD_VERTEX = 0,
  BFLY_METHOD_EDGE = 1,
  BFLY_METHOD_WEDGE = 2,
  BFLY_METHOD_FAST_EDGE = 3,
} BflyMethod;

/**
 * Opaque graph handle.
 */
typedef struct BflyGraph BflyGraph;

typedef struct BflyStats {
  uint64_t n;
  uint64_t left_count;
  uint64_t right_count;
  uint64_t m;
  uint64_t sum_deg_sq_left;
  uint64_t sum_deg_sq_right;
  uint64_t wedge_count;
  uint64_t max_degree;
} BflyStats;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Loads a whitespace-separated edge list from `path` (UTF-8).
 */
enum BflyStatus bfly_graph_load_path(const char *path, struct BflyGraph **out);

/**
 * Builds a graph from `len` pairs `(left[i], right[i])` of external ids.
 */
enum BflyStatus bfly_graph_from_edges(const uint64_t *left,
                                      const uint64_t *right,
                                      size_t len,
                                      struct BflyGraph **out);

enum BflyStatus bfly_graph_complete_biclique(size_t a, size_t b, struct BflyGraph **out);

enum BflyStatus bfly_graph_random(size_t a,
                                  size_t b,
                                  double p,
                                  uint64_t seed,
                                  struct BflyGraph **out);

/**
 * Releases a handle. Null is ignored.
 */
void bfly_graph_free(struct BflyGraph *g);

/**
 * Degree-square sums that exceed 64 bits report `Overflow`.
 */
enum BflyStatus bfly_graph_stats(const struct BflyGraph *g, struct BflyStats *out);

enum BflyStatus bfly_exact_count(const struct BflyGraph *g, uint64_t *out);

enum BflyStatus bfly_exact_count_side(const struct BflyGraph *g, enum BflySide side, uint64_t *out);

enum BflyStatus bfly_count_vertex(const struct BflyGraph *g,
                                  enum BflySide side,
                                  uint32_t index,
                                  uint64_t *out);

/**
 * Butterflies through the edge between dense indices `left` and `right`.
 */
enum BflyStatus bfly_count_edge(const struct BflyGraph *g,
                                uint32_t left,
                                uint32_t right,
                                uint64_t *out);

/**
 * Sampling estimate. `groups` must be odd or 1; `fast_repeats` only
 * applies to `FastEdge`.
 */
enum BflyStatus bfly_sample(const struct BflyGraph *g,
                            enum BflyMethod method,
                            uint64_t iterations,
                            uint32_t groups,
                            uint32_t fast_repeats,
                            uint64_t seed,
                            double *out);

/**
 * Mean of `trials` edge-sparsification estimates with retention `p`.
 */
enum BflyStatus bfly_sparsify_edge(const struct BflyGraph *g,
                                   double p,
                                   uint32_t trials,
                                   uint64_t seed,
                                   double *out);

/**
 * Mean of `trials` color-sparsification estimates with `colors` colors.
 */
enum BflyStatus bfly_sparsify_color(const struct BflyGraph *g,
                                    uint32_t colors,
                                    uint32_t trials,
                                    uint64_t seed,
                                    double *out);

/**
 * Message of the last failed call on this thread, or null. Valid until the
 * next failing call on the same thread.
 */
const char *bfly_last_error_message(void);

/**
 * Static name of a status code.
 */
const char *bfly_status_string(enum BflyStatus status);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* BUTTERFLY_H */
