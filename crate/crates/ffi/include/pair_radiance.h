/* C interface of the pair-radiance library. */

#ifndef PAIR_RADIANCE_H
#define PAIR_RADIANCE_H

#include <stdarg.h>
#include <stdbool.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Metric amplitude prefactor variant.
 */
typedef enum PrAlphaVariant {
  /**
   * The 16π²/k² prefactor.
   */
  PrAlphaVariant_Paper = 0,
  /**
   * 4π/k², from the independent regularized spatial integral.
   */
  PrAlphaVariant_Rederived = 1,
} PrAlphaVariant;

/**
 * Source selection for rate and sampling calls on a binary system.
 */
typedef enum PrSourceKind {
  PrSourceKind_DielectricSphere = 0,
  PrSourceKind_BinaryDielectric = 1,
  PrSourceKind_BinaryMetric = 2,
} PrSourceKind;

/**
 * Status code of every fallible call.
 */
typedef enum PrStatus {
  PrStatus_Ok = 0,
  PrStatus_NullPointer = 1,
  PrStatus_InvalidInput = 2,
  PrStatus_OutOfRegime = 3,
  PrStatus_SingularInput = 4,
  PrStatus_NumericalFailure = 5,
  PrStatus_ConfigError = 6,
  PrStatus_IoError = 7,
} PrStatus;

/**
 * Opaque handle to a validated radiating system.
 */
typedef struct PrSystem PrSystem;

/**
 * Kepler-derived orbit quantities (SI units).
 */
typedef struct PrOrbit {
  double separation_m;
  double v_r;
  double period_s;
  double omega_rad_s;
  double schwarzschild_r1_m;
  double schwarzschild_r2_m;
} PrOrbit;

/**
 * Closed-form powers and derived quantities; NaN marks not-applicable.
 */
typedef struct PrPowerReport {
  double p_e_w;
  double p_m_w;
  double p_g_paper_w;
  double p_g_quadrupole_w;
  double pair_rate_per_s;
  double waiting_time_yr;
  double ratio_pm_pe;
  double ie;
  double im;
} PrPowerReport;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Create a single orbiting sphere system.
 *
 * # Safety
 * `out` must be a valid pointer; on success it receives a handle that must
 * be released with [`pr_system_free`].
 */
enum PrStatus pr_system_new_sphere(double radius_m,
                                   double kappa,
                                   double orbit_radius_m,
                                   double omega_rad_s,
                                   struct PrSystem **out);

/**
 * Create a binary system from total mass, mass fraction and period.
 *
 * Densities must satisfy (4π/3)aᵢ³ρᵢ = Mᵢ within 1e-6; pass the values you
 * mean, the call validates them.
 *
 * # Safety
 * `out` must be a valid pointer; on success it receives a handle that must
 * be released with [`pr_system_free`].
 */
enum PrStatus pr_system_new_binary(double mass_kg,
                                   double mu,
                                   double period_s,
                                   double radius1_m,
                                   double radius2_m,
                                   double density1_kg_m3,
                                   double density2_kg_m3,
                                   double kappa1,
                                   double kappa2,
                                   struct PrSystem **out);

/**
 * Release a system handle. Null is a no-op.
 *
 * # Safety
 * `system` must be null or a handle from `pr_system_new_*` not yet freed.
 */
void pr_system_free(struct PrSystem *system);

/**
 * Orbit quantities of the system. For a sphere the separation is the orbit
 * radius and the Schwarzschild radii are NaN.
 *
 * # Safety
 * `system` and `out` must be valid pointers.
 */
enum PrStatus pr_system_orbit(const struct PrSystem *system, struct PrOrbit *out);

/**
 * Closed-form powers, pair rate, waiting time and the computed
 * dimensionless integrals.
 *
 * # Safety
 * `system` and `out` must be valid pointers.
 */
enum PrStatus pr_power_report(const struct PrSystem *system,
                              enum PrAlphaVariant variant,
                              uint32_t gauss_order,
                              struct PrPowerReport *out);

/**
 * Numerically integrated total pair rate, summed over harmonics 1..=m_max.
 *
 * # Safety
 * `system` and `out_rate_per_s` must be valid pointers.
 */
enum PrStatus pr_total_rate(const struct PrSystem *system,
                            enum PrSourceKind kind,
                            enum PrAlphaVariant variant,
                            uint32_t m_max,
                            uint32_t gauss_order,
                            double *out_rate_per_s);

/**
 * The dimensionless phase-space integrals IE and IM.
 *
 * # Safety
 * `out_ie` and `out_im` must be valid pointers.
 */
enum PrStatus pr_dimensionless_integrals(uint32_t gauss_order, double *out_ie, double *out_im);

/**
 * Generate `n_events` pair events at harmonic `m`.
 *
 * Wave vectors (units of Ω/c) land in `out_vectors` as six doubles per
 * event (l1x l1y l1z l2x l2y l2z); helicities in `out_helicities` as two
 * bytes per event, 0 = L, 1 = R. `out_written` receives the event count
 * (fewer than requested only for a vanishing-density source).
 *
 * # Safety
 * `out_vectors` must hold at least 6·n_events doubles, `out_helicities`
 * at least 2·n_events bytes, and `out_written` must be valid.
 */
enum PrStatus pr_sample_events(const struct PrSystem *system,
                               enum PrSourceKind kind,
                               enum PrAlphaVariant variant,
                               uint32_t m,
                               uintptr_t n_events,
                               uint64_t seed,
                               uint32_t envelope_grid,
                               double *out_vectors,
                               uint8_t *out_helicities,
                               uintptr_t *out_written);

/**
 * Library version as a static NUL-terminated string.
 */
const char *pr_version(void);

/**
 * Static description of a status code.
 */
const char *pr_status_message(enum PrStatus status);

#ifdef __cplusplus
} // extern "C"
#endif // __cplusplus

#endif /* PAIR_RADIANCE_H */
