/* C interface for the eprsim photon-pair correlation simulator. */

#ifndef EPRSIM_H
#define EPRSIM_H

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

// Outcome of an API call. Mirrors the CLI exit-code convention for the
// configuration and no-data cases.
typedef enum EprStatus {
  // Success.
  EPR_STATUS_OK = 0,
  // A required pointer argument was null.
  EPR_STATUS_NULL_ARGUMENT = 1,
  // A configuration value violates its invariant.
  EPR_STATUS_INVALID_CONFIG = 2,
  // The requested statistic is undefined for the produced counts.
  EPR_STATUS_NO_DATA = 3,
  // An index argument is out of range.
  EPR_STATUS_OUT_OF_RANGE = 4,
  // Internal failure (a panic was caught at the boundary).
  EPR_STATUS_INTERNAL = 5,
} EprStatus;

// Reference curve selector.
typedef enum EprReferenceModel {
  EPR_REFERENCE_MODEL_FURRY = 0,
  EPR_REFERENCE_MODEL_QM = 1,
  EPR_REFERENCE_MODEL_SAWTOOTH = 2,
} EprReferenceModel;

// Opaque CHSH report.
typedef struct EprChshReport EprChshReport;

// Opaque correlation curve (one sweep run).
typedef struct EprCurve EprCurve;

// Opaque analytic reference curve.
typedef struct EprReferenceCurve EprReferenceCurve;

// Opaque S(phi) curve.
typedef struct EprSPhiCurve EprSPhiCurve;

// Plain-data mirror of the simulation configuration.
typedef struct EprRunConfig {
  // Photon pairs emitted per polarizer setting.
  uint64_t pairs_per_setting;
  // Decoherence rate in [0, 1].
  double decoherence;
  // Beam-splitter dead-band half-width, 0 <= t < 0.5, both analyzers.
  double threshold;
  // Fixed polarizer-2 angle, radians.
  double beta_rad;
  // Swept polarizer-1 range, radians.
  double sweep_start_rad;
  double sweep_stop_rad;
  double sweep_step_rad;
  // Independent repetitions (CHSH needs at least 2).
  uint32_t runs;
  // Master seed of the keyed random streams.
  uint64_t seed;
} EprRunConfig;

// Coincidence tallies for one setting; the five fields sum to the number
// of emitted pairs.
typedef struct EprCoincidenceCounts {
  uint64_t n_pp;
  uint64_t n_pm;
  uint64_t n_mp;
  uint64_t n_mm;
  uint64_t n_discarded;
} EprCoincidenceCounts;

// CHSH aggregate over the runs of one experiment.
typedef struct EprChshSummary {
  // Mean of the signed per-run S values.
  double mean_s;
  // |mean|, the headline statistic.
  double abs_mean_s;
  // Sample standard deviation across runs.
  double std_dev;
  // std_dev / sqrt(runs).
  double std_err;
  // (|mean| - 2) / std_err.
  double violation_sigma;
  // Number of runs aggregated.
  uint32_t runs;
} EprChshSummary;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Version string of the underlying library; static storage, do not free.
const char *eprsim_version(void);

// Fills `out` with the default configuration (10000 pairs, ideal
// analyzers, a [0, pi] sweep in pi/100 steps, one run, seed 0).
//
// # Safety
// `out` must point to writable memory for one `EprRunConfig`.
enum EprStatus eprsim_run_config_default(struct EprRunConfig *out);

// Dichotomic beam-splitter verdict for one photon: writes +1 (plus
// channel), -1 (minus channel) or 0 (undetected, inside the dead band).
//
// # Safety
// `out` must point to writable memory for one `i32`.
enum EprStatus eprsim_pbs_measure(double psi_rad, double angle_rad, double threshold, int32_t *out);

// Runs one sweep (`run_index` selects the repetition) and hands back an
// opaque curve. Release with `eprsim_curve_free`.
//
// # Safety
// `config` and `out` must be valid pointers.
enum EprStatus eprsim_sweep_run(const struct EprRunConfig *config,
                                uint64_t run_index,
                                struct EprCurve **out);

// Number of settings in the curve; 0 for a null handle.
//
// # Safety
// `curve` must be a handle from `eprsim_sweep_run` or null.
size_t eprsim_curve_len(const struct EprCurve *curve);

// Reads one curve point. Either out-pointer may be null to skip it.
//
// # Safety
// `curve` must be a live handle; non-null out-pointers must be writable.
enum EprStatus eprsim_curve_point(const struct EprCurve *curve,
                                  size_t index,
                                  double *out_alpha_rad,
                                  struct EprCoincidenceCounts *out_counts);

// Visibility `(N_max - N_min)/(N_max + N_min)` of the curve's `N_++`
// counts; `NoData` when the curve is identically zero.
//
// # Safety
// `curve` must be a live handle; `out` must be writable.
enum EprStatus eprsim_curve_visibility(const struct EprCurve *curve, double *out);

// Releases a curve handle; accepts null.
//
// # Safety
// `curve` must be a handle from `eprsim_sweep_run`, not yet freed.
void eprsim_curve_free(struct EprCurve *curve);

// Runs the CHSH experiment at the canonical settings (0, 45, 22.5, 67.5
// degrees), one simulation per run and setting. Requires `runs >= 2`.
// Release with `eprsim_chsh_free`.
//
// # Safety
// `config` and `out` must be valid pointers.
enum EprStatus eprsim_chsh_run(const struct EprRunConfig *config, struct EprChshReport **out);

// Copies the aggregate statistics of a CHSH report.
//
// # Safety
// `report` must be a live handle; `out` must be writable.
enum EprStatus eprsim_chsh_summary(const struct EprChshReport *report, struct EprChshSummary *out);

// Reads the signed per-run S value at `run_index`.
//
// # Safety
// `report` must be a live handle; `out` must be writable.
enum EprStatus eprsim_chsh_s_value(const struct EprChshReport *report,
                                   size_t run_index,
                                   double *out);

// Releases a CHSH report handle; accepts null.
//
// # Safety
// `report` must be a handle from `eprsim_chsh_run`, not yet freed.
void eprsim_chsh_free(struct EprChshReport *report);

// Evaluates `S(phi) = 3E(phi) - E(3phi)` at `len` separation angles, each
// strictly inside (0, pi/2). Release with `eprsim_sphi_free`.
//
// # Safety
// `config` and `out` must be valid; `phis_rad` must point to `len` f64s.
enum EprStatus eprsim_sphi_run(const struct EprRunConfig *config,
                               const double *phis_rad,
                               size_t len,
                               uint64_t run_index,
                               struct EprSPhiCurve **out);

// Number of points in an S(phi) curve; 0 for a null handle.
//
// # Safety
// `curve` must be a handle from `eprsim_sphi_run` or null.
size_t eprsim_sphi_len(const struct EprSPhiCurve *curve);

// Reads one S(phi) point. Either out-pointer may be null to skip it.
//
// # Safety
// `curve` must be a live handle; non-null out-pointers must be writable.
enum EprStatus eprsim_sphi_point(const struct EprSPhiCurve *curve,
                                 size_t index,
                                 double *out_phi_rad,
                                 double *out_s);

// Releases an S(phi) handle; accepts null.
//
// # Safety
// `curve` must be a handle from `eprsim_sphi_run`, not yet freed.
void eprsim_sphi_free(struct EprSPhiCurve *curve);

// Builds an analytic reference curve at `len` separation angles, scaled to
// `n_pairs`. `quadrature_steps` (at least 100) applies to the furry model
// only. Release with `eprsim_reference_free`.
//
// # Safety
// `out` must be valid; `deltas_rad` must point to `len` f64s.
enum EprStatus eprsim_reference_curve(enum EprReferenceModel model,
                                      uint64_t n_pairs,
                                      const double *deltas_rad,
                                      size_t len,
                                      size_t quadrature_steps,
                                      struct EprReferenceCurve **out);

// Number of points in a reference curve; 0 for a null handle.
//
// # Safety
// `curve` must be a handle from `eprsim_reference_curve` or null.
size_t eprsim_reference_len(const struct EprReferenceCurve *curve);

// Reads one reference point. Either out-pointer may be null to skip it.
//
// # Safety
// `curve` must be a live handle; non-null out-pointers must be writable.
enum EprStatus eprsim_reference_point(const struct EprReferenceCurve *curve,
                                      size_t index,
                                      double *out_delta_rad,
                                      double *out_expected_count);

// Releases a reference-curve handle; accepts null.
//
// # Safety
// `curve` must be a handle from `eprsim_reference_curve`, not yet freed.
void eprsim_reference_free(struct EprReferenceCurve *curve);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* EPRSIM_H */
