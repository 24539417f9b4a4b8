#ifndef STEKLOV_H
#define STEKLOV_H

/* Generated by cbindgen from crates/ffi/src/lib.rs. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

// Result code of every exported function.
typedef enum StkStatus {
  STK_STATUS_OK = 0,
  STK_STATUS_NULL_POINTER = 1,
  STK_STATUS_INVALID_UTF8 = 2,
  STK_STATUS_INVALID_ARGUMENT = 3,
  STK_STATUS_UNKNOWN_NAME = 4,
  STK_STATUS_NEAR_BOUNDARY = 5,
  STK_STATUS_NOT_ENOUGH_EIGENPAIRS = 6,
  STK_STATUS_ROUTING = 7,
  STK_STATUS_NUMERICAL = 8,
  STK_STATUS_BUFFER_TOO_SMALL = 9,
  STK_STATUS_PANIC = 10,
  STK_STATUS_OTHER = 11,
} StkStatus;

// Steklov eigenpairs of one domain.
typedef struct StkBasis StkBasis;

// Truncated Steklov series solving a Dirichlet or Robin problem.
typedef struct StkSolution StkSolution;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Copies the last error message of this thread, NUL-terminated and truncated to
// `capacity`, into `buffer`. Returns the full message length in bytes (without the NUL),
// so a call with `capacity = 0` queries the size.
//
// # Safety
// `buffer` must be valid for `capacity` bytes or null with `capacity = 0`.
size_t stk_last_error_message(char *buffer, size_t capacity);

// Solves for the first `count` Steklov eigenpairs of a named domain on `nodes` boundary
// nodes. `method` may be null for the domain's default method.
//
// # Safety
// String arguments must be NUL-terminated; `out_basis` must be a valid pointer. The handle
// written there must be released with [`stk_basis_free`].
enum StkStatus stk_basis_solve(const char *domain,
                               const char *method,
                               size_t nodes,
                               size_t count,
                               struct StkBasis **out_basis);

// Releases a basis. Null is ignored. Solutions built on it stay valid.
//
// # Safety
// `basis` must come from [`stk_basis_solve`] and not be used afterwards.
void stk_basis_free(struct StkBasis *basis);

// Number of eigenpairs and boundary nodes of a basis.
//
// # Safety
// `basis` must be a live handle; the outputs must be valid pointers.
enum StkStatus stk_basis_size(const struct StkBasis *basis, size_t *out_count, size_t *out_nodes);

// Copies the eigenvalues (ascending) into `buffer`, which must hold the basis count.
//
// # Safety
// `basis` must be a live handle and `buffer` valid for `capacity` doubles.
enum StkStatus stk_basis_eigenvalues(const struct StkBasis *basis, double *buffer, size_t capacity);

// Copies the nodal trace of eigenfunction `index` into `buffer`, which must hold the
// node count. Node `l` sits at curve parameter `2πl/L`.
//
// # Safety
// `basis` must be a live handle and `buffer` valid for `capacity` doubles.
enum StkStatus stk_basis_trace(const struct StkBasis *basis,
                               size_t index,
                               double *buffer,
                               size_t capacity);

// Truncated series of order `order` for named catalog data (`exp-cos`, `abs`, `sqrt-abs`,
// `step`, `log-source`, `nonsmooth-harmonic`). `robin_b <= 0` selects the Dirichlet
// problem; otherwise the Robin problem `∂_ν u + b u = g` with `g` built from the data's
// harmonic field.
//
// # Safety
// `basis` must be a live handle, `data` NUL-terminated and `out_solution` valid. The
// handle must be released with [`stk_solution_free`].
enum StkStatus stk_solve_catalog(const struct StkBasis *basis,
                                 const char *data,
                                 size_t order,
                                 double robin_b,
                                 struct StkSolution **out_solution);

// Truncated series for boundary data given at the basis nodes (`len` must equal the node
// count), interpolated trigonometrically in between. `robin_b <= 0` selects Dirichlet;
// otherwise the values are the Robin right-hand side `g`.
//
// # Safety
// `basis` must be a live handle, `values` valid for `len` doubles and `out_solution`
// valid. The handle must be released with [`stk_solution_free`].
enum StkStatus stk_solve_values(const struct StkBasis *basis,
                                const double *values,
                                size_t len,
                                size_t order,
                                double robin_b,
                                struct StkSolution **out_solution);

// Releases a solution. Null is ignored.
//
// # Safety
// `solution` must come from a `stk_solve_*` function and not be used afterwards.
void stk_solution_free(struct StkSolution *solution);

// Value of the solution at an interior point. Fails with `NearBoundary` inside the
// near-boundary band where the representation formula loses accuracy.
//
// # Safety
// `solution` must be a live handle and `out_value` valid.
enum StkStatus stk_solution_eval(const struct StkSolution *solution,
                                 double x,
                                 double y,
                                 double *out_value);

// Copies the solution's values at the basis nodes into `buffer`.
//
// # Safety
// `solution` must be a live handle and `buffer` valid for `capacity` doubles.
enum StkStatus stk_solution_boundary_values(const struct StkSolution *solution,
                                            double *buffer,
                                            size_t capacity);

// `L²(∂Ω)` distance between the solution and its reference: the Dirichlet data, or the
// trace of the harmonic field behind Robin catalog data. Fails when no reference exists.
//
// # Safety
// `solution` must be a live handle and `out_error` valid.
enum StkStatus stk_solution_boundary_error(const struct StkSolution *solution, double *out_error);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* STEKLOV_H */
