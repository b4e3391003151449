/* C interface of the diffusion solver. All functions returning DiffuseStatus set the thread-local message readable via diffuse_last_error_message() on failure. */

#ifndef DIFFUSE_H
#define DIFFUSE_H

/* Generated by cbindgen from the diffuse-ffi crate; do not edit by hand. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

// Status code returned by every fallible entry point.
typedef enum DiffuseStatus {
  DIFFUSE_STATUS_OK = 0,
  // A required pointer argument was null.
  DIFFUSE_STATUS_NULL_ARGUMENT = 1,
  // Arguments were structurally valid but rejected (bad dimension,
  // tolerance, fixture name, non-stochastic matrix, ...).
  DIFFUSE_STATUS_INVALID_ARGUMENT = 2,
  // The input file could not be parsed; the message names the line.
  DIFFUSE_STATUS_PARSE_ERROR = 3,
  // The input file could not be read.
  DIFFUSE_STATUS_IO_ERROR = 4,
  // A solver invariant failed or a dense routine rejected the instance.
  DIFFUSE_STATUS_NUMERICAL_ERROR = 5,
  // A panic was caught at the boundary.
  DIFFUSE_STATUS_PANIC = 6,
} DiffuseStatus;

// Node-selection strategy for [`diffuse_solve_linear`].
typedef enum DiffuseScheduler {
  DIFFUSE_SCHEDULER_CYCLIC = 0,
  DIFFUSE_SCHEDULER_GREEDY = 1,
  DIFFUSE_SCHEDULER_THRESHOLD = 2,
  DIFFUSE_SCHEDULER_RANDOM = 3,
} DiffuseScheduler;

// Opaque sparse matrix handle.
typedef struct DiffuseMatrix DiffuseMatrix;

// Opaque solve report handle.
typedef struct DiffuseReport DiffuseReport;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// # Safety
// The returned pointer is owned by thread-local storage; it stays valid
// until the next failing call on the same thread. May be null if no error
// occurred yet.
const char *diffuse_last_error_message(void);

// Reads a Matrix Market `coordinate real general` file.
//
// # Safety
// `path` must be a valid NUL-terminated string and `out` a valid pointer.
enum DiffuseStatus diffuse_matrix_read_mtx(const char *path, struct DiffuseMatrix **out);

// Reads a 0-based `src dst [weight]` edge list with raw weights.
//
// # Safety
// `path` must be a valid NUL-terminated string and `out` a valid pointer.
enum DiffuseStatus diffuse_matrix_read_edges(const char *path, struct DiffuseMatrix **out);

// Builds a bundled fixture, e.g. `"snake"` or `"random_ergodic(50,7)"`.
//
// # Safety
// `name` must be a valid NUL-terminated string and `out` a valid pointer.
enum DiffuseStatus diffuse_matrix_fixture(const char *name, struct DiffuseMatrix **out);

// Produces a normalized copy: `damping = 0` makes columns stochastic,
// `0 < damping < 1` additionally scales them by the damping factor.
// `patch_dangling` rewrites dangling columns to uniform columns first.
//
// # Safety
// `m` must be a live handle from this library and `out` a valid pointer.
enum DiffuseStatus diffuse_matrix_normalize(const struct DiffuseMatrix *m,
                                            double damping,
                                            bool patch_dangling,
                                            struct DiffuseMatrix **out);

// # Safety
// `m` must be a live handle from this library (or null, which yields 0).
size_t diffuse_matrix_dim(const struct DiffuseMatrix *m);

// # Safety
// `m` must be a live handle from this library (or null, which yields 0).
size_t diffuse_matrix_nnz(const struct DiffuseMatrix *m);

// # Safety
// `m` must come from this library and must not be used afterwards. Null is
// a no-op.
void diffuse_matrix_free(struct DiffuseMatrix *m);

// Solves `X = P*X + B`. `b` may be null for the uniform right-hand side
// `1/n`; otherwise it must point to `b_len == n` doubles.
//
// # Safety
// `m` must be a live handle; `b`, when non-null, must point to `b_len`
// readable doubles; `out` must be valid.
enum DiffuseStatus diffuse_solve_linear(const struct DiffuseMatrix *m,
                                        const double *b,
                                        size_t b_len,
                                        double epsilon,
                                        uint64_t max_steps,
                                        enum DiffuseScheduler scheduler,
                                        uint64_t seed,
                                        struct DiffuseReport **out);

// Computes the dominant eigenvector of a column-stochastic matrix with the
// negative-only schedule.
//
// # Safety
// `m` must be a live handle and `out` a valid pointer.
enum DiffuseStatus diffuse_solve_eigen(const struct DiffuseMatrix *m,
                                       double epsilon,
                                       uint64_t max_steps,
                                       struct DiffuseReport **out);

// # Safety
// `r` must be a live handle from this library (or null, which yields 0).
size_t diffuse_report_dim(const struct DiffuseReport *r);

// # Safety
// `r` must be a live handle from this library (or null, which yields 0).
uint64_t diffuse_report_steps(const struct DiffuseReport *r);

// # Safety
// `r` must be a live handle from this library (or null, which yields false).
bool diffuse_report_converged(const struct DiffuseReport *r);

// # Safety
// `r` must be a live handle from this library (or null, which yields false).
bool diffuse_report_oscillation_detected(const struct DiffuseReport *r);

// Final L1 norm of the residual fluid.
//
// # Safety
// `r` must be a live handle from this library (or null, which yields NaN).
double diffuse_report_final_fluid_l1(const struct DiffuseReport *r);

// Copies the solution vector into `buf`, which must hold exactly
// `diffuse_report_dim(r)` doubles.
//
// # Safety
// `r` must be a live handle; `buf` must point to `len` writable doubles.
enum DiffuseStatus diffuse_report_copy_solution(const struct DiffuseReport *r,
                                                double *buf,
                                                size_t len);

// # Safety
// `r` must come from this library and must not be used afterwards. Null is
// a no-op.
void diffuse_report_free(struct DiffuseReport *r);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* DIFFUSE_H */
