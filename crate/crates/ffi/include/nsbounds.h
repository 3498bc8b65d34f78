#ifndef NSBOUNDS_H
#define NSBOUNDS_H

/* Generated by cbindgen from crates/ffi/src; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Result codes. Certification outcome is not an error; it is reported in
 * [`NsbCertificateValues::certified`].
 */
typedef enum NsbStatus {
  NSB_STATUS_OK = 0,
  NSB_STATUS_NULL_POINTER = 1,
  NSB_STATUS_INVALID_UTF8 = 2,
  NSB_STATUS_INVALID_GEOMETRY = 3,
  NSB_STATUS_INVALID_PARAMETER = 4,
  NSB_STATUS_INCOMPATIBLE_INFLOW = 5,
  NSB_STATUS_INVALID_GRID = 6,
  NSB_STATUS_CONFIG = 7,
  NSB_STATUS_NOT_CERTIFIED = 8,
  NSB_STATUS_NON_CUBIC_BOX = 9,
  NSB_STATUS_CONDA_VIOLATED = 10,
  NSB_STATUS_SHARP_BOUND_INAPPLICABLE = 11,
  NSB_STATUS_NO_CONVERGENCE = 12,
  NSB_STATUS_PANIC = 13,
} NsbStatus;

/**
 * An evaluated certificate together with the inputs that produced it.
 */
typedef struct NsbCertificate NsbCertificate;

/**
 * Channel and obstacle description.
 */
typedef struct NsbGeometry NsbGeometry;

/**
 * Numeric fields of a certificate. Absent values are NaN.
 */
typedef struct NsbCertificateValues {
  bool certified;
  double phi;
  double phi_alternative;
  double threshold;
  double margin;
  double beta;
  double grad_bound_rough;
  double grad_bound_sharp;
  double bogovskii_m;
} NsbCertificateValues;

typedef struct NsbForceBounds {
  /**
   * When false the bounds are formal values without a guarantee.
   */
  bool certified;
  double grad_u_bound;
  double drag_bound;
  double lift_bound;
  double psi;
  double drag_bound_general;
  double lift_bound_general;
  double q1_l3;
  double q3_l3;
  double q1_h1;
  double q3_h1;
} NsbForceBounds;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Library version as a static NUL-terminated string.
 */
const char *nsb_version(void);

/**
 * Message of the last failed call on this thread, or NULL after a
 * successful call. Valid until the next call into the library.
 */
const char *nsb_last_error(void);

/**
 * # Safety
 * `out` must be NULL or point to writable storage for one pointer.
 */
enum NsbStatus nsb_geometry_new(double half_width,
                                double a,
                                double b,
                                double c,
                                double obstacle_volume,
                                struct NsbGeometry **out);

/**
 * # Safety
 * `geometry` must be NULL or a handle from [`nsb_geometry_new`] not yet freed.
 */
void nsb_geometry_free(struct NsbGeometry *geometry);

/**
 * Writes the constant `M` of the inflow extension.
 *
 * # Safety
 * `geometry` must be a live handle; `out` must be NULL or writable.
 */
enum NsbStatus nsb_geometry_bogovskii_m(const struct NsbGeometry *geometry, double *out);

/**
 * Writes whether the obstacle volume guarantees the cube-root branch, the
 * precondition of the explicit drag/lift bound.
 *
 * # Safety
 * `geometry` must be a live handle; `out` must be NULL or writable.
 */
enum NsbStatus nsb_geometry_conda(const struct NsbGeometry *geometry, bool *out);

/**
 * Certifies the cosine inflow of the given amplitude.
 *
 * # Safety
 * `geometry` must be a live handle; `out` must be NULL or writable.
 */
enum NsbStatus nsb_certify_analytic(const struct NsbGeometry *geometry,
                                    double viscosity,
                                    double amplitude,
                                    struct NsbCertificate **out);

/**
 * Certifies an inflow sampled on a grid read from a `y,z,h1,h2,h3` CSV file.
 *
 * # Safety
 * `geometry` must be a live handle, `grid_csv` a NUL-terminated path, and
 * `out` NULL or writable.
 */
enum NsbStatus nsb_certify_sampled(const struct NsbGeometry *geometry,
                                   double viscosity,
                                   const char *grid_csv,
                                   double compat_tol,
                                   struct NsbCertificate **out);

/**
 * Certifies the run described by a configuration file, as `nsbounds certify` does.
 *
 * # Safety
 * `config_path` must be a NUL-terminated path and `out` NULL or writable.
 */
enum NsbStatus nsb_certify_config(const char *config_path, struct NsbCertificate **out);

/**
 * # Safety
 * `certificate` must be NULL or a handle not yet freed.
 */
void nsb_certificate_free(struct NsbCertificate *certificate);

/**
 * # Safety
 * `certificate` must be a live handle; `out` must be NULL or writable.
 */
enum NsbStatus nsb_certificate_values(const struct NsbCertificate *certificate,
                                      struct NsbCertificateValues *out);

/**
 * Writes the certificate JSON (numbers as 17-digit decimal strings).
 * Free the string with [`nsb_string_free`].
 *
 * # Safety
 * `certificate` must be a live handle; `out` must be NULL or writable.
 */
enum NsbStatus nsb_certificate_to_json(const struct NsbCertificate *certificate, char **out);

/**
 * # Safety
 * `s` must be NULL or a string returned by this library, not yet freed.
 */
void nsb_string_free(char *s);

/**
 * Drag and lift bounds for the cosine inflow. Needs a cubic box with the
 * cube-root branch guaranteed. Uncertified inputs still return `NSB_STATUS_OK`
 * with `certified = false` and formal values.
 *
 * # Safety
 * `geometry` must be a live handle; `out` must be NULL or writable.
 */
enum NsbStatus nsb_forces(const struct NsbGeometry *geometry,
                          double viscosity,
                          double amplitude,
                          bool sharp_gradient_bound,
                          struct NsbForceBounds *out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* NSBOUNDS_H */
