/* C ABI for the randmatch matching library. */

#ifndef RANDMATCH_H
#define RANDMATCH_H

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

// Status codes shared with the CLI exit codes.
#define RM_OK 0

#define RM_INTERNAL 1

#define RM_INFEASIBLE 2

#define RM_PARSE 3

#define RM_INVALID 4

// Opaque weighted graph handle (bipartite or general).
typedef struct RmGraph RmGraph;

// Opaque matching handle: matched pairs, total cost, certificate status.
typedef struct RmMatching RmMatching;

// Opaque incremental cost curve handle for bipartite instances.
typedef struct RmSequence RmSequence;

// Message for the last failure on this thread, or null. The pointer is
// valid until the next failing call on the same thread.
const char *rm_last_error(void);

// Parse a graph from its edge-list text form. Returns null and sets the
// thread error on failure.
//
// # Safety
// `text` must be a valid NUL-terminated string.
struct RmGraph *rm_graph_parse(const char *text);

// Draw a random instance. `model` is one of "complete_bipartite", "gnnp",
// "complete", "gnp"; weights are exponential(1). Returns null on failure.
//
// # Safety
// `model` must be a valid NUL-terminated string.
struct RmGraph *rm_graph_generate(const char *model, size_t n, double p, uint64_t seed);

// 1 when the graph is bipartite, 0 when general, -1 on a null handle.
//
// # Safety
// `g` must be a live handle from `rm_graph_parse`/`rm_graph_generate`.
int rm_graph_is_bipartite(const struct RmGraph *g);

// Render the graph in its edge-list text form; free with `rm_string_free`.
//
// # Safety
// `g` must be a live graph handle.
char *rm_graph_format(const struct RmGraph *g);

// Solve for a minimum-cost perfect matching, verifying the dual
// certificate. On success writes a matching handle to `out`.
//
// # Safety
// `g` must be a live graph handle and `out` a valid pointer.
int rm_solve(const struct RmGraph *g, struct RmMatching **out);

// Solve the incremental bipartite curve C(n,1)..C(n,r_max). On success
// writes a sequence handle to `out`.
//
// # Safety
// `g` must be a live bipartite graph handle and `out` a valid pointer.
int rm_solve_sequence(const struct RmGraph *g, size_t r_max, struct RmSequence **out);

// Total cost of the matching, or NaN on a null handle.
//
// # Safety
// `m` must be a live matching handle.
double rm_matching_cost(const struct RmMatching *m);

// Number of matched pairs, or 0 on a null handle.
//
// # Safety
// `m` must be a live matching handle.
size_t rm_matching_size(const struct RmMatching *m);

// 1 when the dual certificate verified, 0 otherwise.
//
// # Safety
// `m` must be a live matching handle.
int rm_matching_certified(const struct RmMatching *m);

// Fetch matched pair `index` into `u`, `v`, `w` (any may be null).
//
// # Safety
// `m` must be a live matching handle; non-null out pointers must be valid.
int rm_matching_pair(const struct RmMatching *m, size_t index, size_t *u, size_t *v, double *w);

// Number of solved steps in the curve.
//
// # Safety
// `s` must be a live sequence handle.
size_t rm_sequence_len(const struct RmSequence *s);

// C(n, r) for 1-based `r`, or NaN when out of range.
//
// # Safety
// `s` must be a live sequence handle.
double rm_sequence_cost(const struct RmSequence *s, size_t r);

// C(n, r) - C(n, r-1) for 1-based `r`, or NaN when out of range.
//
// # Safety
// `s` must be a live sequence handle.
double rm_sequence_increment(const struct RmSequence *s, size_t r);

// # Safety
// `g` must be null or a handle not freed before.
void rm_graph_free(struct RmGraph *g);

// # Safety
// `m` must be null or a handle not freed before.
void rm_matching_free(struct RmMatching *m);

// # Safety
// `s` must be null or a handle not freed before.
void rm_sequence_free(struct RmSequence *s);

// # Safety
// `s` must be null or a string returned by this library and not freed.
void rm_string_free(char *s);

#endif  /* RANDMATCH_H */
