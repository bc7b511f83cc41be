#ifndef MAXLAB_H
#define MAXLAB_H

/* Generated by cbindgen from crates/ffi/src/lib.rs; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Result of every fallible call.
 */
typedef enum MaxlabStatus {
  MAXLAB_STATUS_OK = 0,
  /**
   * A required pointer argument was null.
   */
  MAXLAB_STATUS_NULL_POINTER = 1,
  /**
   * Invalid parameters or configuration.
   */
  MAXLAB_STATUS_INVALID_ARGUMENT = 2,
  /**
   * The evolution produced non-finite values or another numerical failure.
   */
  MAXLAB_STATUS_NUMERIC = 3,
  MAXLAB_STATUS_IO = 4,
  /**
   * Too few envelope points for a power-law fit.
   */
  MAXLAB_STATUS_INSUFFICIENT_DATA = 5,
  /**
   * An internal panic was caught at the boundary.
   */
  MAXLAB_STATUS_PANIC = 6,
} MaxlabStatus;

/**
 * Initial-data symmetry for [`maxlab_wave_new`] and [`maxlab_price_new`].
 */
typedef enum MaxlabSymmetry {
  MAXLAB_SYMMETRY_TIME_SYMMETRIC = 0,
  MAXLAB_SYMMETRY_INGOING = 1,
  MAXLAB_SYMMETRY_OUTGOING = 2,
} MaxlabSymmetry;

/**
 * Schwarzschild background of a given mass.
 */
typedef struct MaxlabBackground MaxlabBackground;

/**
 * Uniform grid in the tortoise coordinate.
 */
typedef struct MaxlabGrid MaxlabGrid;

/**
 * First-order transport evolution of one harmonic mode.
 */
typedef struct MaxlabPriceSim MaxlabPriceSim;

/**
 * Scalar-wave evolution of one harmonic mode.
 */
typedef struct MaxlabWaveSim MaxlabWaveSim;

/**
 * Outcome of [`maxlab_fit_power_law`].
 */
typedef struct MaxlabFit {
  double exponent;
  double amplitude;
  double r_squared;
  size_t points;
} MaxlabFit;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message of the last failed call on this thread, or null. Valid until the next failing call.
 */
const char *maxlab_last_error(void);

/**
 * Library version as a static NUL-terminated string.
 */
const char *maxlab_version(void);

/**
 * # Safety
 * `out` must be valid for writes.
 */
enum MaxlabStatus maxlab_background_new(double mass, struct MaxlabBackground **out);

/**
 * # Safety
 * `bg` must come from [`maxlab_background_new`] and not be used afterwards; null is ignored.
 */
void maxlab_background_free(struct MaxlabBackground *bg);

/**
 * Tortoise coordinate of areal radius `r > 2M`.
 *
 * # Safety
 * `bg` must be a live handle and `out` valid for writes.
 */
enum MaxlabStatus maxlab_tortoise_from_r(const struct MaxlabBackground *bg, double r, double *out);

/**
 * Areal radius at tortoise coordinate `rs`.
 *
 * # Safety
 * `bg` must be a live handle and `out` valid for writes.
 */
enum MaxlabStatus maxlab_r_from_tortoise(const struct MaxlabBackground *bg, double rs, double *out);

/**
 * Grid of `n` nodes on `[rs_min, rs_max]`; the background is copied.
 *
 * # Safety
 * `bg` must be a live handle and `out` valid for writes.
 */
enum MaxlabStatus maxlab_grid_new(const struct MaxlabBackground *bg,
                                  double rs_min,
                                  double rs_max,
                                  size_t n,
                                  struct MaxlabGrid **out);

/**
 * # Safety
 * `grid` must come from [`maxlab_grid_new`] and not be used afterwards; null is ignored.
 */
void maxlab_grid_free(struct MaxlabGrid *grid);

/**
 * Number of nodes, or 0 for a null handle.
 *
 * # Safety
 * `grid` must be null or a live handle.
 */
size_t maxlab_grid_len(const struct MaxlabGrid *grid);

/**
 * Copies `min(len, nodes)` tortoise coordinates into `out`.
 *
 * # Safety
 * `grid` must be a live handle and `out` valid for `len` writes.
 */
enum MaxlabStatus maxlab_grid_rs(const struct MaxlabGrid *grid, double *out, size_t len);

/**
 * Scalar-wave simulation of mode `(l, m)` with Gaussian data; the grid is copied.
 *
 * # Safety
 * `grid` must be a live handle and `out` valid for writes.
 */
enum MaxlabStatus maxlab_wave_new(const struct MaxlabGrid *grid,
                                  uint32_t l,
                                  int32_t m,
                                  double center,
                                  double width,
                                  double amplitude,
                                  enum MaxlabSymmetry sym,
                                  struct MaxlabWaveSim **out);

/**
 * # Safety
 * `sim` must come from [`maxlab_wave_new`] and not be used afterwards; null is ignored.
 */
void maxlab_wave_free(struct MaxlabWaveSim *sim);

/**
 * Advances `steps` RK4 steps of size `dt`.
 *
 * # Safety
 * `sim` must be a live handle.
 */
enum MaxlabStatus maxlab_wave_step(struct MaxlabWaveSim *sim, double dt, uint64_t steps);

/**
 * Current time, or NaN for a null handle.
 *
 * # Safety
 * `sim` must be null or a live handle.
 */
double maxlab_wave_time(const struct MaxlabWaveSim *sim);

/**
 * Energy of the current state, or NaN for a null handle.
 *
 * # Safety
 * `sim` must be null or a live handle.
 */
double maxlab_wave_energy(const struct MaxlabWaveSim *sim);

/**
 * Copies the real and imaginary parts of the amplitude; either output may be null.
 *
 * # Safety
 * `sim` must be a live handle; non-null outputs must be valid for `len` writes.
 */
enum MaxlabStatus maxlab_wave_amplitude(const struct MaxlabWaveSim *sim,
                                        double *re,
                                        double *im,
                                        size_t len);

/**
 * Transport-system simulation of mode `(l, m)` started from the same Gaussian data as
 * [`maxlab_wave_new`]; the grid is copied.
 *
 * # Safety
 * `grid` must be a live handle and `out` valid for writes.
 */
enum MaxlabStatus maxlab_price_new(const struct MaxlabGrid *grid,
                                   uint32_t l,
                                   int32_t m,
                                   double center,
                                   double width,
                                   double amplitude,
                                   enum MaxlabSymmetry sym,
                                   struct MaxlabPriceSim **out);

/**
 * # Safety
 * `sim` must come from [`maxlab_price_new`] and not be used afterwards; null is ignored.
 */
void maxlab_price_free(struct MaxlabPriceSim *sim);

/**
 * Advances `steps` RK4 steps of size `dt`.
 *
 * # Safety
 * `sim` must be a live handle.
 */
enum MaxlabStatus maxlab_price_step(struct MaxlabPriceSim *sim, double dt, uint64_t steps);

/**
 * Current time, or NaN for a null handle.
 *
 * # Safety
 * `sim` must be null or a live handle.
 */
double maxlab_price_time(const struct MaxlabPriceSim *sim);

/**
 * T-energy of the mode, or NaN for a null handle.
 *
 * # Safety
 * `sim` must be null or a live handle.
 */
double maxlab_price_t_energy(const struct MaxlabPriceSim *sim);

/**
 * L2 norm of the constraint `a_rs - lambda (b + c) / 2`, or NaN for a null handle.
 *
 * # Safety
 * `sim` must be null or a live handle.
 */
double maxlab_price_constraint(const struct MaxlabPriceSim *sim);

/**
 * Copies the real parts of `(b, a, c)`; any output may be null.
 *
 * # Safety
 * `sim` must be a live handle; non-null outputs must be valid for `len` writes.
 */
enum MaxlabStatus maxlab_price_fields(const struct MaxlabPriceSim *sim,
                                      double *b,
                                      double *a,
                                      double *c,
                                      size_t len);

/**
 * Fits `A x^p` to the envelope of `(x[i], y[i])` restricted to `[x_min, x_max]`.
 *
 * # Safety
 * `x` and `y` must be valid for `n` reads and `out` for writes.
 */
enum MaxlabStatus maxlab_fit_power_law(const double *x,
                                       const double *y,
                                       size_t n,
                                       double x_min,
                                       double x_max,
                                       struct MaxlabFit *out);

/**
 * Runs a CLI command (`evolve`, `verify`, `decay-fit`, `energy-report`, `static`) and
 * returns its exit code. `out_dir` may be null; `resolution_scale` is 1, 2 or 4.
 * Returns -1 for an unknown command or invalid arguments.
 *
 * # Safety
 * `command` and `config_path` must be NUL-terminated strings; `out_dir` null or one.
 */
int32_t maxlab_run_command(const char *command,
                           const char *config_path,
                           const char *out_dir,
                           uint32_t resolution_scale);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* MAXLAB_H */
