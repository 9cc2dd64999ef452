#ifndef FRBC_H
#define FRBC_H

/* Generated by cbindgen from crates/ffi/src/lib.rs; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Status codes returned by every fallible function.
 */
typedef enum FrbcStatus {
  FRBC_STATUS_OK = 0,
  FRBC_STATUS_NULL_POINTER = 1,
  FRBC_STATUS_INVALID_ARGUMENT = 2,
  FRBC_STATUS_SINGULAR_MATRIX = 3,
  FRBC_STATUS_NON_FINITE = 4,
  FRBC_STATUS_IO = 5,
  FRBC_STATUS_INVALID_SOLUTION = 6,
  FRBC_STATUS_PANIC = 7,
} FrbcStatus;

/**
 * Opaque solution handle.
 */
typedef struct FrbcSolution FrbcSolution;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message for the most recent failure on this thread, or NULL. The pointer
 * stays valid until the next failing call on the same thread.
 */
const char *frbc_last_error(void);

/**
 * Library version as a static string.
 */
const char *frbc_version(void);

/**
 * Solve the Thomas–Fermi problem.
 *
 * `alpha` and `scale` are decimals or `p/q` strings; NULL selects `1/2` and
 * `1`.
 *
 * # Safety
 * String arguments must be NULL or NUL-terminated; `out` must be writable.
 */
enum FrbcStatus frbc_solve(size_t order,
                           const char *alpha,
                           const char *scale,
                           size_t iterations,
                           uint32_t digits,
                           struct FrbcSolution **out);

/**
 * Load a solution document written by [`frbc_solution_save`] or the CLI.
 *
 * # Safety
 * `path` must be NUL-terminated; `out` must be writable.
 */
enum FrbcStatus frbc_solution_load(const char *path, struct FrbcSolution **out);

/**
 * # Safety
 * `solution` must be a live handle; `path` must be NUL-terminated.
 */
enum FrbcStatus frbc_solution_save(const struct FrbcSolution *solution, const char *path);

/**
 * Release a handle; NULL is ignored.
 *
 * # Safety
 * `solution` must be NULL or a handle not yet freed.
 */
void frbc_solution_free(struct FrbcSolution *solution);

/**
 * Truncation order `N` of the solution.
 *
 * # Safety
 * `solution` must be a live handle.
 */
size_t frbc_solution_order(const struct FrbcSolution *solution);

/**
 * Working precision of the solution in decimal digits.
 *
 * # Safety
 * `solution` must be a live handle.
 */
uint32_t frbc_solution_digits(const struct FrbcSolution *solution);

/**
 * `y'(0)` as a decimal string.
 *
 * # Safety
 * `solution` must be a live handle; `out` must be writable.
 */
enum FrbcStatus frbc_solution_slope(const struct FrbcSolution *solution, char **out);

/**
 * `y(x)` (order 0), `y'(x)` (1) or `y''(x)` (2) at a decimal abscissa.
 *
 * # Safety
 * `solution` must be a live handle; `x` NUL-terminated; `out` writable.
 */
enum FrbcStatus frbc_solution_eval(const struct FrbcSolution *solution,
                                   const char *x,
                                   uint32_t order,
                                   char **out);

/**
 * As [`frbc_solution_eval`] with binary64 input and output.
 *
 * # Safety
 * `solution` must be a live handle; `out` writable.
 */
enum FrbcStatus frbc_solution_eval_f64(const struct FrbcSolution *solution,
                                       double x,
                                       uint32_t order,
                                       double *out);

/**
 * Neutral-atom energy for nuclear charge `charge` and initial slope
 * `slope`, both decimal strings, at `digits` precision.
 *
 * # Safety
 * Strings must be NUL-terminated; `out` writable.
 */
enum FrbcStatus frbc_energy(const char *charge, const char *slope, uint32_t digits, char **out);

/**
 * Release a string returned by this library; NULL is ignored.
 *
 * # Safety
 * `s` must be NULL or a string from this library not yet freed.
 */
void frbc_string_free(char *s);

#ifdef __cplusplus
} // extern "C"
#endif // __cplusplus

#endif /* FRBC_H */
