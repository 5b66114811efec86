/* C interface to the distpart hypergraph and partition library. */

#ifndef DISTPART_H
#define DISTPART_H

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

// Status code returned by every fallible call.
typedef enum DpStatus {
  // The call succeeded.
  DP_STATUS_OK = 0,
  // A required pointer argument was NULL.
  DP_STATUS_NULL_POINTER = 1,
  // A string argument was not valid UTF-8.
  DP_STATUS_INVALID_UTF8 = 2,
  // Text input failed to parse.
  DP_STATUS_PARSE_ERROR = 3,
  // Arguments fell outside the supported domain.
  DP_STATUS_DOMAIN_ERROR = 4,
  // The search node budget was exhausted before an answer was reached.
  DP_STATUS_BUDGET_EXCEEDED = 5,
  // A constructed object failed its certification postcondition.
  DP_STATUS_CERTIFICATION_FAILED = 6,
  // A panic was caught at the ABI boundary.
  DP_STATUS_INTERNAL_ERROR = 7,
} DpStatus;

// Opaque handle to a labeled hypergraph.
typedef struct DpHypergraph DpHypergraph;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Returns the library version as a static NUL-terminated string.
// The pointer is owned by the library and must not be freed.
const char *dp_version(void);

// Returns the message for the most recent failure on this thread, or an
// empty string if the last call succeeded. The caller owns the returned
// string and must release it with `dp_string_free`.
char *dp_last_error_message(void);

// Releases a string previously returned through an out-pointer.
//
// # Safety
// `s` must be a pointer returned by this library and not yet freed,
// or NULL (in which case the call is a no-op).
void dp_string_free(char *s);

// Parses the text form of a labeled hypergraph into a fresh handle.
//
// # Safety
// `text` must point to a NUL-terminated byte string and `out` must be a
// valid writable pointer. On success `*out` owns the new handle.
enum DpStatus dp_hypergraph_parse(const char *text, struct DpHypergraph **out);

// Releases a hypergraph handle.
//
// # Safety
// `h` must be a handle returned by this library and not yet freed,
// or NULL (in which case the call is a no-op).
void dp_hypergraph_free(struct DpHypergraph *h);

// Serializes a hypergraph back to its canonical text form.
//
// # Safety
// `h` must be a live handle from this library; `out` must be writable.
enum DpStatus dp_hypergraph_to_text(const struct DpHypergraph *h, char **out);

// Writes the number of vertices of `h` to `*out`.
//
// # Safety
// `h` must be a live handle from this library; `out` must be writable.
enum DpStatus dp_hypergraph_vertex_count(const struct DpHypergraph *h, uint64_t *out);

// Writes the number of edges of `h` to `*out`.
//
// # Safety
// `h` must be a live handle from this library; `out` must be writable.
enum DpStatus dp_hypergraph_edge_count(const struct DpHypergraph *h, uint64_t *out);

// Writes the label alphabet size m2 of `h` to `*out`.
//
// # Safety
// `h` must be a live handle from this library; `out` must be writable.
enum DpStatus dp_hypergraph_m2(const struct DpHypergraph *h, uint32_t *out);

// Decides whether `h` has a trivial label-preserving automorphism group.
// `budget` caps search nodes; pass 0 for the library default.
//
// # Safety
// `h` must be a live handle from this library; `out` must be writable.
enum DpStatus dp_hypergraph_is_asymmetric(const struct DpHypergraph *h, uint64_t budget, bool *out);

// Writes the automorphism group order of `h` as a decimal string.
// `budget` caps search nodes; pass 0 for the library default.
//
// # Safety
// `h` must be a live handle from this library; `out` must be writable.
enum DpStatus dp_hypergraph_group_order(const struct DpHypergraph *h, uint64_t budget, char **out);

// Writes a lowercase hex encoding of the canonical form of `h`, an
// isomorphism invariant: two hypergraphs are isomorphic exactly when
// their canonical hex strings agree.
// `budget` caps search nodes; pass 0 for the library default.
//
// # Safety
// `h` must be a live handle from this library; `out` must be writable.
enum DpStatus dp_hypergraph_canonical_hex(const struct DpHypergraph *h,
                                          uint64_t budget,
                                          char **out);

// Formats the derived parameters for (n1, m2) as `j=.. k=.. r=..` with
// `r` in lowest-terms `num/den` form when it is not an integer.
//
// # Safety
// `out` must be a valid writable pointer.
enum DpStatus dp_params_format(uint32_t n1, uint32_t m2, char **out);

// Builds and certifies the asymmetric labeled ring with the given edge
// count, returning the hypergraph handle.
//
// # Safety
// `out` must be a valid writable pointer. On success `*out` owns the
// new handle.
enum DpStatus dp_build_ring(uint32_t n1, uint32_t m2, uint64_t edges, struct DpHypergraph **out);

// Builds and certifies the two-label chain on m1 edges (cell size 3),
// returning the hypergraph handle.
//
// # Safety
// `out` must be a valid writable pointer. On success `*out` owns the
// new handle.
enum DpStatus dp_build_m2_2_chain(uint64_t m1, struct DpHypergraph **out);

#ifdef __cplusplus
} // extern "C"
#endif // __cplusplus

#endif /* DISTPART_H */
