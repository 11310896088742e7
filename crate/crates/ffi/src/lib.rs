//! C ABI for the eprsim simulator.
//!
//! Conventions: results come back through out-pointers, every function
//! returns an [`EprStatus`], and simulation products are opaque handles the
//! caller must release with the matching `_free` function. Handles are
//! immutable once created and safe to share across threads. The generated
//! header lands in `include/eprsim.h` at build time.

use std::ffi::c_char;
use std::panic::{catch_unwind, AssertUnwindSafe};

use eprsim::{
    furry_curve, qm_curve, sawtooth_curve, AnalyzerSetting, CorrelationCurve, PolarizationAngle,
    ReferenceCurve, RunConfig, SPhiCurve, SimError, SweepSpec,
};

/// Outcome of an API call. Mirrors the CLI exit-code convention for the
/// configuration and no-data cases.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EprStatus {
    /// Success.
    Ok = 0,
    /// A required pointer argument was null.
    NullArgument = 1,
    /// A configuration value violates its invariant.
    InvalidConfig = 2,
    /// The requested statistic is undefined for the produced counts.
    NoData = 3,
    /// An index argument is out of range.
    OutOfRange = 4,
    /// Internal failure (a panic was caught at the boundary).
    Internal = 5,
}

/// Plain-data mirror of the simulation configuration.
#[repr(C)]
#[derive(Debug, Clone, Copy)]
pub struct EprRunConfig {
    /// Photon pairs emitted per polarizer setting.
    pub pairs_per_setting: u64,
    /// Decoherence rate in [0, 1].
    pub decoherence: f64,
    /// Beam-splitter dead-band half-width, 0 <= t < 0.5, both analyzers.
    pub threshold: f64,
    /// Fixed polarizer-2 angle, radians.
    pub beta_rad: f64,
    /// Swept polarizer-1 range, radians.
    pub sweep_start_rad: f64,
    pub sweep_stop_rad: f64,
    pub sweep_step_rad: f64,
    /// Independent repetitions (CHSH needs at least 2).
    pub runs: u32,
    /// Master seed of the keyed random streams.
    pub seed: u64,
}

/// Coincidence tallies for one setting; the five fields sum to the number
/// of emitted pairs.
#[repr(C)]
#[derive(Debug, Clone, Copy, Default)]
pub struct EprCoincidenceCounts {
    pub n_pp: u64,
    pub n_pm: u64,
    pub n_mp: u64,
    pub n_mm: u64,
    pub n_discarded: u64,
}

/// CHSH aggregate over the runs of one experiment.
#[repr(C)]
#[derive(Debug, Clone, Copy)]
pub struct EprChshSummary {
    /// Mean of the signed per-run S values.
    pub mean_s: f64,
    /// |mean|, the headline statistic.
    pub abs_mean_s: f64,
    /// Sample standard deviation across runs.
    pub std_dev: f64,
    /// std_dev / sqrt(runs).
    pub std_err: f64,
    /// (|mean| - 2) / std_err.
    pub violation_sigma: f64,
    /// Number of runs aggregated.
    pub runs: u32,
}

/// Reference curve selector.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EprReferenceModel {
    Furry = 0,
    Qm = 1,
    Sawtooth = 2,
}

/// Opaque correlation curve (one sweep run).
pub struct EprCurve(CorrelationCurve);

/// Opaque CHSH report.
pub struct EprChshReport(eprsim::ChshReport);

/// Opaque S(phi) curve.
pub struct EprSPhiCurve(SPhiCurve);

/// Opaque analytic reference curve.
pub struct EprReferenceCurve(ReferenceCurve);

fn to_config(c: &EprRunConfig) -> RunConfig {
    RunConfig {
        pairs_per_setting: c.pairs_per_setting,
        decoherence: c.decoherence,
        threshold: c.threshold,
        beta: c.beta_rad,
        sweep: SweepSpec {
            start: c.sweep_start_rad,
            stop: c.sweep_stop_rad,
            step: c.sweep_step_rad,
        },
        runs: c.runs,
        seed: c.seed,
    }
}

fn status_of(err: &SimError) -> EprStatus {
    match err {
        SimError::InvalidConfig(_) => EprStatus::InvalidConfig,
        SimError::NoData(_) => EprStatus::NoData,
    }
}

fn guarded(body: impl FnOnce() -> EprStatus) -> EprStatus {
    catch_unwind(AssertUnwindSafe(body)).unwrap_or(EprStatus::Internal)
}

/// Version string of the underlying library; static storage, do not free.
#[no_mangle]
pub extern "C" fn eprsim_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr() as *const c_char
}

/// Fills `out` with the default configuration (10000 pairs, ideal
/// analyzers, a [0, pi] sweep in pi/100 steps, one run, seed 0).
///
/// # Safety
/// `out` must point to writable memory for one `EprRunConfig`.
#[no_mangle]
pub unsafe extern "C" fn eprsim_run_config_default(out: *mut EprRunConfig) -> EprStatus {
    if out.is_null() {
        return EprStatus::NullArgument;
    }
    let d = RunConfig::default();
    *out = EprRunConfig {
        pairs_per_setting: d.pairs_per_setting,
        decoherence: d.decoherence,
        threshold: d.threshold,
        beta_rad: d.beta,
        sweep_start_rad: d.sweep.start,
        sweep_stop_rad: d.sweep.stop,
        sweep_step_rad: d.sweep.step,
        runs: d.runs,
        seed: d.seed,
    };
    EprStatus::Ok
}

/// Dichotomic beam-splitter verdict for one photon: writes +1 (plus
/// channel), -1 (minus channel) or 0 (undetected, inside the dead band).
///
/// # Safety
/// `out` must point to writable memory for one `i32`.
#[no_mangle]
pub unsafe extern "C" fn eprsim_pbs_measure(
    psi_rad: f64,
    angle_rad: f64,
    threshold: f64,
    out: *mut i32,
) -> EprStatus {
    if out.is_null() {
        return EprStatus::NullArgument;
    }
    let setting = match AnalyzerSetting::new(angle_rad, threshold) {
        Ok(s) => s,
        Err(e) => return status_of(&e),
    };
    *out = match eprsim::pbs_measure(PolarizationAngle::new(psi_rad), &setting) {
        eprsim::DetectionOutcome::Plus => 1,
        eprsim::DetectionOutcome::Minus => -1,
        eprsim::DetectionOutcome::Undetected => 0,
    };
    EprStatus::Ok
}

/// Runs one sweep (`run_index` selects the repetition) and hands back an
/// opaque curve. Release with `eprsim_curve_free`.
///
/// # Safety
/// `config` and `out` must be valid pointers.
#[no_mangle]
pub unsafe extern "C" fn eprsim_sweep_run(
    config: *const EprRunConfig,
    run_index: u64,
    out: *mut *mut EprCurve,
) -> EprStatus {
    if config.is_null() || out.is_null() {
        return EprStatus::NullArgument;
    }
    let config = to_config(&*config);
    guarded(|| match eprsim::run_sweep(&config, run_index) {
        Ok(curve) => {
            *out = Box::into_raw(Box::new(EprCurve(curve)));
            EprStatus::Ok
        }
        Err(e) => status_of(&e),
    })
}

/// Number of settings in the curve; 0 for a null handle.
///
/// # Safety
/// `curve` must be a handle from `eprsim_sweep_run` or null.
#[no_mangle]
pub unsafe extern "C" fn eprsim_curve_len(curve: *const EprCurve) -> usize {
    if curve.is_null() {
        return 0;
    }
    (*curve).0.points.len()
}

/// Reads one curve point. Either out-pointer may be null to skip it.
///
/// # Safety
/// `curve` must be a live handle; non-null out-pointers must be writable.
#[no_mangle]
pub unsafe extern "C" fn eprsim_curve_point(
    curve: *const EprCurve,
    index: usize,
    out_alpha_rad: *mut f64,
    out_counts: *mut EprCoincidenceCounts,
) -> EprStatus {
    if curve.is_null() {
        return EprStatus::NullArgument;
    }
    let points = &(*curve).0.points;
    let Some(point) = points.get(index) else {
        return EprStatus::OutOfRange;
    };
    if !out_alpha_rad.is_null() {
        *out_alpha_rad = point.alpha_rad;
    }
    if !out_counts.is_null() {
        let c = point.counts;
        *out_counts = EprCoincidenceCounts {
            n_pp: c.n_pp,
            n_pm: c.n_pm,
            n_mp: c.n_mp,
            n_mm: c.n_mm,
            n_discarded: c.n_discarded,
        };
    }
    EprStatus::Ok
}

/// Visibility `(N_max - N_min)/(N_max + N_min)` of the curve's `N_++`
/// counts; `NoData` when the curve is identically zero.
///
/// # Safety
/// `curve` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn eprsim_curve_visibility(
    curve: *const EprCurve,
    out: *mut f64,
) -> EprStatus {
    if curve.is_null() || out.is_null() {
        return EprStatus::NullArgument;
    }
    match eprsim::visibility(&(*curve).0) {
        Ok(v) => {
            *out = v;
            EprStatus::Ok
        }
        Err(e) => status_of(&e),
    }
}

/// Releases a curve handle; accepts null.
///
/// # Safety
/// `curve` must be a handle from `eprsim_sweep_run`, not yet freed.
#[no_mangle]
pub unsafe extern "C" fn eprsim_curve_free(curve: *mut EprCurve) {
    if !curve.is_null() {
        drop(Box::from_raw(curve));
    }
}

/// Runs the CHSH experiment at the canonical settings (0, 45, 22.5, 67.5
/// degrees), one simulation per run and setting. Requires `runs >= 2`.
/// Release with `eprsim_chsh_free`.
///
/// # Safety
/// `config` and `out` must be valid pointers.
#[no_mangle]
pub unsafe extern "C" fn eprsim_chsh_run(
    config: *const EprRunConfig,
    out: *mut *mut EprChshReport,
) -> EprStatus {
    if config.is_null() || out.is_null() {
        return EprStatus::NullArgument;
    }
    let config = to_config(&*config);
    guarded(|| match eprsim::chsh_experiment(&config) {
        Ok(report) => {
            *out = Box::into_raw(Box::new(EprChshReport(report)));
            EprStatus::Ok
        }
        Err(e) => status_of(&e),
    })
}

/// Copies the aggregate statistics of a CHSH report.
///
/// # Safety
/// `report` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn eprsim_chsh_summary(
    report: *const EprChshReport,
    out: *mut EprChshSummary,
) -> EprStatus {
    if report.is_null() || out.is_null() {
        return EprStatus::NullArgument;
    }
    let r = &(*report).0;
    *out = EprChshSummary {
        mean_s: r.mean,
        abs_mean_s: r.abs_mean(),
        std_dev: r.std_dev,
        std_err: r.std_err,
        violation_sigma: r.violation_sigma,
        runs: r.s_values.len() as u32,
    };
    EprStatus::Ok
}

/// Reads the signed per-run S value at `run_index`.
///
/// # Safety
/// `report` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn eprsim_chsh_s_value(
    report: *const EprChshReport,
    run_index: usize,
    out: *mut f64,
) -> EprStatus {
    if report.is_null() || out.is_null() {
        return EprStatus::NullArgument;
    }
    let s_values = &(*report).0.s_values;
    let Some(&s) = s_values.get(run_index) else {
        return EprStatus::OutOfRange;
    };
    *out = s;
    EprStatus::Ok
}

/// Releases a CHSH report handle; accepts null.
///
/// # Safety
/// `report` must be a handle from `eprsim_chsh_run`, not yet freed.
#[no_mangle]
pub unsafe extern "C" fn eprsim_chsh_free(report: *mut EprChshReport) {
    if !report.is_null() {
        drop(Box::from_raw(report));
    }
}

/// Evaluates `S(phi) = 3E(phi) - E(3phi)` at `len` separation angles, each
/// strictly inside (0, pi/2). Release with `eprsim_sphi_free`.
///
/// # Safety
/// `config` and `out` must be valid; `phis_rad` must point to `len` f64s.
#[no_mangle]
pub unsafe extern "C" fn eprsim_sphi_run(
    config: *const EprRunConfig,
    phis_rad: *const f64,
    len: usize,
    run_index: u64,
    out: *mut *mut EprSPhiCurve,
) -> EprStatus {
    if config.is_null() || out.is_null() || (phis_rad.is_null() && len > 0) {
        return EprStatus::NullArgument;
    }
    let config = to_config(&*config);
    let phis = std::slice::from_raw_parts(phis_rad, len);
    guarded(|| match eprsim::s_phi_curve(&config, phis, run_index) {
        Ok(curve) => {
            *out = Box::into_raw(Box::new(EprSPhiCurve(curve)));
            EprStatus::Ok
        }
        Err(e) => status_of(&e),
    })
}

/// Number of points in an S(phi) curve; 0 for a null handle.
///
/// # Safety
/// `curve` must be a handle from `eprsim_sphi_run` or null.
#[no_mangle]
pub unsafe extern "C" fn eprsim_sphi_len(curve: *const EprSPhiCurve) -> usize {
    if curve.is_null() {
        return 0;
    }
    (*curve).0.points.len()
}

/// Reads one S(phi) point. Either out-pointer may be null to skip it.
///
/// # Safety
/// `curve` must be a live handle; non-null out-pointers must be writable.
#[no_mangle]
pub unsafe extern "C" fn eprsim_sphi_point(
    curve: *const EprSPhiCurve,
    index: usize,
    out_phi_rad: *mut f64,
    out_s: *mut f64,
) -> EprStatus {
    if curve.is_null() {
        return EprStatus::NullArgument;
    }
    let points = &(*curve).0.points;
    let Some(point) = points.get(index) else {
        return EprStatus::OutOfRange;
    };
    if !out_phi_rad.is_null() {
        *out_phi_rad = point.phi_rad;
    }
    if !out_s.is_null() {
        *out_s = point.s;
    }
    EprStatus::Ok
}

/// Releases an S(phi) handle; accepts null.
///
/// # Safety
/// `curve` must be a handle from `eprsim_sphi_run`, not yet freed.
#[no_mangle]
pub unsafe extern "C" fn eprsim_sphi_free(curve: *mut EprSPhiCurve) {
    if !curve.is_null() {
        drop(Box::from_raw(curve));
    }
}

/// Builds an analytic reference curve at `len` separation angles, scaled to
/// `n_pairs`. `quadrature_steps` (at least 100) applies to the furry model
/// only. Release with `eprsim_reference_free`.
///
/// # Safety
/// `out` must be valid; `deltas_rad` must point to `len` f64s.
#[no_mangle]
pub unsafe extern "C" fn eprsim_reference_curve(
    model: EprReferenceModel,
    n_pairs: u64,
    deltas_rad: *const f64,
    len: usize,
    quadrature_steps: usize,
    out: *mut *mut EprReferenceCurve,
) -> EprStatus {
    if out.is_null() || (deltas_rad.is_null() && len > 0) {
        return EprStatus::NullArgument;
    }
    if model == EprReferenceModel::Furry && quadrature_steps < 100 {
        return EprStatus::InvalidConfig;
    }
    let deltas = std::slice::from_raw_parts(deltas_rad, len);
    guarded(|| {
        let curve = match model {
            EprReferenceModel::Furry => furry_curve(n_pairs, deltas, quadrature_steps),
            EprReferenceModel::Qm => qm_curve(n_pairs, deltas),
            EprReferenceModel::Sawtooth => sawtooth_curve(n_pairs, deltas),
        };
        *out = Box::into_raw(Box::new(EprReferenceCurve(curve)));
        EprStatus::Ok
    })
}

/// Number of points in a reference curve; 0 for a null handle.
///
/// # Safety
/// `curve` must be a handle from `eprsim_reference_curve` or null.
#[no_mangle]
pub unsafe extern "C" fn eprsim_reference_len(curve: *const EprReferenceCurve) -> usize {
    if curve.is_null() {
        return 0;
    }
    (*curve).0.points.len()
}

/// Reads one reference point. Either out-pointer may be null to skip it.
///
/// # Safety
/// `curve` must be a live handle; non-null out-pointers must be writable.
#[no_mangle]
pub unsafe extern "C" fn eprsim_reference_point(
    curve: *const EprReferenceCurve,
    index: usize,
    out_delta_rad: *mut f64,
    out_expected_count: *mut f64,
) -> EprStatus {
    if curve.is_null() {
        return EprStatus::NullArgument;
    }
    let points = &(*curve).0.points;
    let Some(point) = points.get(index) else {
        return EprStatus::OutOfRange;
    };
    if !out_delta_rad.is_null() {
        *out_delta_rad = point.delta_rad;
    }
    if !out_expected_count.is_null() {
        *out_expected_count = point.expected_count;
    }
    EprStatus::Ok
}

/// Releases a reference-curve handle; accepts null.
///
/// # Safety
/// `curve` must be a handle from `eprsim_reference_curve`, not yet freed.
#[no_mangle]
pub unsafe extern "C" fn eprsim_reference_free(curve: *mut EprReferenceCurve) {
    if !curve.is_null() {
        drop(Box::from_raw(curve));
    }
}
