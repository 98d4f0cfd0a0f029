#ifndef POLYDUAL_H
#define POLYDUAL_H

/* Generated by cbindgen from crates/ffi/src/lib.rs; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

// Status codes returned by every fallible function.
typedef enum PdStatus {
  PD_STATUS_OK = 0,
  PD_STATUS_NULL_POINTER = 1,
  PD_STATUS_INVALID_ARGUMENT = 2,
  PD_STATUS_DEGENERATE = 3,
  PD_STATUS_UNSUPPORTED_DIMENSION = 4,
  PD_STATUS_ORIGIN_NOT_INTERIOR = 5,
  PD_STATUS_SYMMETRY_REQUIRED = 6,
  PD_STATUS_UNKNOWN_GENERATOR = 7,
  PD_STATUS_CONVERGENCE_FAILURE = 8,
  PD_STATUS_GEOMETRY = 9,
  PD_STATUS_BUFFER_TOO_SMALL = 10,
  PD_STATUS_PANIC = 99,
} PdStatus;

// Opaque polytope handle.
typedef struct PdPolytope PdPolytope;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Message for the last failed call on this thread, or NULL. The pointer
// stays valid until the next failing call on the same thread.
const char *pd_last_error_message(void);

// Library version as a static NUL-terminated string.
const char *pd_version(void);

// Builds a polytope from `count` points of dimension `dim` stored row-major
// in `coords`. Every point must be a vertex of the hull.
enum PdStatus pd_polytope_new(size_t dim,
                              const double *coords,
                              size_t count,
                              struct PdPolytope **out);

// Named generator: `"cube"` and `"cross"` use `dim`, `"hexagon"` uses `eps`.
enum PdStatus pd_polytope_generate(const char *name,
                                   size_t dim,
                                   double eps,
                                   struct PdPolytope **out);

// Releases a handle. NULL is ignored.
void pd_polytope_free(struct PdPolytope *p);

// Ambient dimension, or 0 for a NULL handle.
size_t pd_polytope_dim(const struct PdPolytope *p);

// Number of vertices, or 0 for a NULL handle.
size_t pd_polytope_vertex_count(const struct PdPolytope *p);

// Copies the vertices row-major into `buf`, which must hold
// `dim * vertex_count` values.
enum PdStatus pd_polytope_vertices(const struct PdPolytope *p, double *buf, size_t len);

enum PdStatus pd_polytope_volume(const struct PdPolytope *p, double *out);

// Polar body as a new handle.
enum PdStatus pd_polytope_polar(const struct PdPolytope *p, struct PdPolytope **out);

// The limit constant `G` and its minimizing parameter `c`. Either output may be NULL.
enum PdStatus pd_invariant_g(const struct PdPolytope *p, double *out_g, double *out_c);

// Best distance between the floating body at `delta` and the polar
// illumination bodies, on a direction grid of `grid_size` points.
// `out_delta_prime` may be NULL.
enum PdStatus pd_dp_delta(const struct PdPolytope *p,
                          double delta,
                          size_t grid_size,
                          uint64_t seed,
                          double *out_value,
                          double *out_delta_prime);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* POLYDUAL_H */
