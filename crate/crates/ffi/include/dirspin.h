#ifndef DIRSPIN_H
#define DIRSPIN_H

/* Generated by cbindgen from crates/ffi/src/lib.rs. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum DirspinStatus {
  DIRSPIN_STATUS_OK = 0,
  DIRSPIN_STATUS_NULL_POINTER = 1,
  DIRSPIN_STATUS_BAD_N = 2,
  DIRSPIN_STATUS_PARITY_MISMATCH = 3,
  DIRSPIN_STATUS_OUT_OF_RANGE = 4,
  DIRSPIN_STATUS_NO_CONVERGENCE = 5,
  DIRSPIN_STATUS_ENVELOPE_BREACH = 6,
  DIRSPIN_STATUS_INVALID_ARGUMENT = 7,
  DIRSPIN_STATUS_BUFFER_TOO_SMALL = 8,
  DIRSPIN_STATUS_PANIC = 9,
} DirspinStatus;

/*
 Opaque optimal-fidelity result.
 */
typedef struct DirspinFidelity DirspinFidelity;

/*
 Monte Carlo summary, filled in by `dirspin_simulate`.
 */
typedef struct DirspinSimulation {
  double exact_fidelity;
  double mean_fidelity_estimate;
  double standard_error;
  double accepted_fraction;
} DirspinSimulation;

/*
 Largest deviations of the three numerical oracles, filled in by
 `dirspin_verify`. `passed` is 1 when all are within tolerance.
 */
typedef struct DirspinVerifyReport {
  double coupling_oracle_deviation;
  double normalization_deviation;
  double gram_deviation;
  size_t gram_dimension;
  int32_t passed;
} DirspinVerifyReport;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/*
 Library version as a static NUL-terminated string.
 */
const char *dirspin_version(void);

/*
 Copies the last error message of this thread into `buf` (NUL-terminated,
 truncated to `len`). Returns the full message length including the NUL,
 or 0 if there is no pending error.

 # Safety
 `buf` must be null or point to `len` writable bytes.
 */
size_t dirspin_last_error_message(char *buf, size_t len);

/*
 Dimension of the one-copy-per-`j` space for `n` spins.

 # Safety
 `out` must be null or valid for writes.
 */
enum DirspinStatus dirspin_hilbert_dimension(int64_t n, uint64_t *out);

/*
 Optimal signal for `n` spins and projection `twice_m / 2`.

 # Safety
 `out` must be null or valid for writes. On success `*out` owns a handle
 that must be released with `dirspin_fidelity_free`; on failure it is set
 to null.
 */
enum DirspinStatus dirspin_optimal_fidelity(int64_t n,
                                            int64_t twice_m,
                                            struct DirspinFidelity **out);

/*
 Optimal signal with the lowest legal `m` (0 or 1/2).

 # Safety
 See `dirspin_optimal_fidelity`.
 */
enum DirspinStatus dirspin_lowest_m_fidelity(int64_t n, struct DirspinFidelity **out);

/*
 Parallel-spin signal (`m = N/2`).

 # Safety
 See `dirspin_optimal_fidelity`.
 */
enum DirspinStatus dirspin_parallel_fidelity(int64_t n, struct DirspinFidelity **out);

/*
 # Safety
 `handle` must be null or a live handle.
 */
double dirspin_fidelity_value(const struct DirspinFidelity *handle);

/*
 # Safety
 `handle` must be null or a live handle.
 */
double dirspin_fidelity_one_minus_f(const struct DirspinFidelity *handle);

/*
 `<cos chi>` achieved by the signal.

 # Safety
 `handle` must be null or a live handle.
 */
double dirspin_fidelity_mean_x(const struct DirspinFidelity *handle);

/*
 # Safety
 `handle` must be null or a live handle. Returns -1 for null.
 */
int64_t dirspin_fidelity_twice_m(const struct DirspinFidelity *handle);

/*
 Number of coefficients (`N/2 - m + 1`), 0 for null.

 # Safety
 `handle` must be null or a live handle.
 */
size_t dirspin_fidelity_coeff_count(const struct DirspinFidelity *handle);

/*
 Copies the coefficients `c_j` (ascending `j`, starting at `j = m`) into
 `buf`.

 # Safety
 `handle` must be null or a live handle; `buf` must be null or point to
 `len` writable doubles.
 */
enum DirspinStatus dirspin_fidelity_coeffs(const struct DirspinFidelity *handle,
                                           double *buf,
                                           size_t len);

/*
 Outcome density `p(x)` of the handle's signal at `x = cos chi`.

 # Safety
 `handle` must be null or a live handle; `out` must be null or valid for
 writes.
 */
enum DirspinStatus dirspin_fidelity_density(const struct DirspinFidelity *handle,
                                            double x,
                                            double *out);

/*
 Releases a handle. Null is ignored.

 # Safety
 `handle` must be null or a handle not yet freed.
 */
void dirspin_fidelity_free(struct DirspinFidelity *handle);

/*
 Sequential Monte Carlo run with the default envelope settings.

 # Safety
 `out` must be null or valid for writes.
 */
enum DirspinStatus dirspin_simulate(int64_t n,
                                    int64_t twice_m,
                                    uint64_t seed,
                                    uint64_t shots,
                                    struct DirspinSimulation *out);

/*
 Runs the coupling-matrix, normalization and completeness oracles with
 default quadrature orders. A failed tolerance is reported through
 `passed`, not the status.

 # Safety
 `out` must be null or valid for writes.
 */
enum DirspinStatus dirspin_verify(int64_t n, int64_t twice_m, struct DirspinVerifyReport *out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* DIRSPIN_H */
