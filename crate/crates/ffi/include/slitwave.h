#ifndef SLITWAVE_H
#define SLITWAVE_H

/* Generated by cbindgen. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum SlitwaveStatus {
  SLITWAVE_STATUS_OK = 0,
  SLITWAVE_STATUS_NULL_POINTER = 1,
  SLITWAVE_STATUS_INVALID_PARAMS = 2,
  SLITWAVE_STATUS_NODE_SINGULARITY = 3,
  SLITWAVE_STATUS_QUADRATURE_UNCONVERGED = 4,
  SLITWAVE_STATUS_EMPTY_PROFILE = 5,
  SLITWAVE_STATUS_PLANE_OUT_OF_RANGE = 6,
  SLITWAVE_STATUS_INVALID_CONFIG = 7,
  SLITWAVE_STATUS_CONFIG = 8,
  SLITWAVE_STATUS_IO = 9,
  SLITWAVE_STATUS_BUFFER_TOO_SMALL = 10,
  SLITWAVE_STATUS_PANIC = 11,
} SlitwaveStatus;

typedef enum SlitwaveTrajectoryStatus {
  SLITWAVE_TRAJECTORY_STATUS_COMPLETED = 0,
  SLITWAVE_TRAJECTORY_STATUS_ABORTED_NODE = 1,
  SLITWAVE_TRAJECTORY_STATUS_ABORTED_BOUNDS = 2,
} SlitwaveTrajectoryStatus;

/**
 * Validated scenario parameters.
 */
typedef struct SlitwaveEngine SlitwaveEngine;

/**
 * One integrated Bohmian trajectory.
 */
typedef struct SlitwaveTrajectory SlitwaveTrajectory;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Static, NUL-terminated description of a status code.
 */
const char *slitwave_status_message(enum SlitwaveStatus status);

/**
 * Creates an engine. Pass `sigma <= 0` for the default `a/(2√2)`.
 *
 * # Safety
 * `out` must be a valid pointer to writable storage for one handle.
 */
enum SlitwaveStatus slitwave_engine_new(double wavelength,
                                        size_t slit_count,
                                        double slit_pitch,
                                        double slit_width,
                                        double sigma,
                                        struct SlitwaveEngine **out);

/**
 * # Safety
 * `engine` must come from [`slitwave_engine_new`] and not be freed twice.
 */
void slitwave_engine_free(struct SlitwaveEngine *engine);

/**
 * # Safety
 * Pointers must be valid; `engine` must be a live handle.
 */
enum SlitwaveStatus slitwave_sigma(const struct SlitwaveEngine *engine, double *out);

/**
 * # Safety
 * Pointers must be valid; `engine` must be a live handle.
 */
enum SlitwaveStatus slitwave_talbot_length(const struct SlitwaveEngine *engine, double *out);

/**
 * # Safety
 * Pointers must be valid; `engine` must be a live handle.
 */
enum SlitwaveStatus slitwave_superpose(const struct SlitwaveEngine *engine,
                                       double x,
                                       double z,
                                       double *re,
                                       double *im);

/**
 * # Safety
 * Pointers must be valid; `engine` must be a live handle.
 */
enum SlitwaveStatus slitwave_density(const struct SlitwaveEngine *engine,
                                     double x,
                                     double z,
                                     double *out);

/**
 * `∂ₓΨ/Ψ` as real and imaginary parts.
 *
 * # Safety
 * Pointers must be valid; `engine` must be a live handle.
 */
enum SlitwaveStatus slitwave_gradient_log(const struct SlitwaveEngine *engine,
                                          double x,
                                          double z,
                                          double *re,
                                          double *im);

/**
 * # Safety
 * Pointers must be valid; `engine` must be a live handle.
 */
enum SlitwaveStatus slitwave_quantum_potential(const struct SlitwaveEngine *engine,
                                               double x,
                                               double z,
                                               double h,
                                               double *out);

/**
 * Trajectory slope `dx/dz` of the guidance field.
 *
 * # Safety
 * Pointers must be valid; `engine` must be a live handle.
 */
enum SlitwaveStatus slitwave_velocity_slope(const struct SlitwaveEngine *engine,
                                            double x,
                                            double z,
                                            double *out);

/**
 * Closed-form far-field intensity (envelope times grating factor).
 *
 * # Safety
 * Pointers must be valid; `engine` must be a live handle.
 */
enum SlitwaveStatus slitwave_farfield_intensity(const struct SlitwaveEngine *engine,
                                                double x,
                                                double z,
                                                double *out);

/**
 * Fills `buf` with `nx·nz` un-normalized densities, row-major with
 * row 0 at `z_min`.
 *
 * # Safety
 * `buf` must point to `buf_len` writable doubles.
 */
enum SlitwaveStatus slitwave_density_grid(const struct SlitwaveEngine *engine,
                                          double x_min,
                                          double x_max,
                                          size_t nx,
                                          double z_min,
                                          double z_max,
                                          size_t nz,
                                          double *buf,
                                          size_t buf_len);

/**
 * Integrates one trajectory. Pass `rel_tol <= 0` for the default.
 *
 * # Safety
 * `out` must be valid; `engine` must be a live handle.
 */
enum SlitwaveStatus slitwave_integrate(const struct SlitwaveEngine *engine,
                                       double launch_x,
                                       double z_start,
                                       double z_end,
                                       double rel_tol,
                                       struct SlitwaveTrajectory **out);

/**
 * # Safety
 * Pointers must be valid; `traj` must be a live handle.
 */
enum SlitwaveStatus slitwave_trajectory_status(const struct SlitwaveTrajectory *traj,
                                               enum SlitwaveTrajectoryStatus *out);

/**
 * Number of recorded `(x, z)` points.
 *
 * # Safety
 * Pointers must be valid; `traj` must be a live handle.
 */
enum SlitwaveStatus slitwave_trajectory_len(const struct SlitwaveTrajectory *traj, size_t *out);

/**
 * Copies the points as interleaved `x, z` pairs; `buf_len` counts doubles.
 *
 * # Safety
 * `buf` must point to `buf_len` writable doubles.
 */
enum SlitwaveStatus slitwave_trajectory_points(const struct SlitwaveTrajectory *traj,
                                               double *buf,
                                               size_t buf_len);

/**
 * # Safety
 * `traj` must come from [`slitwave_integrate`] and not be freed twice.
 */
void slitwave_trajectory_free(struct SlitwaveTrajectory *traj);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* SLITWAVE_H */
