//! Headline quantities derived from coincidence counts: two-channel
//! correlation coefficients, visibility, the CHSH statistic with cross-run
//! dispersion, and the Aspect-style S(φ) curve.

use std::f64::consts::{FRAC_PI_2, FRAC_PI_4, FRAC_PI_8};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::engine::{measure_block, CoincidenceCounts, CorrelationCurve, RunConfig};
use crate::error::{Result, SimError};
use crate::rng::SettingStreams;

/// The four canonical polarizer orientations `(α, β)` for the CHSH run:
/// `(a, b), (a, b′), (a′, b), (a′, b′)` with `a = 0°`, `a′ = 45°`,
/// `b = 22.5°`, `b′ = 67.5°` — the positions of maximal violation.
pub const CHSH_SETTINGS: [(f64, f64); 4] = [
    (0.0, FRAC_PI_8),
    (0.0, 3.0 * FRAC_PI_8),
    (FRAC_PI_4, FRAC_PI_8),
    (FRAC_PI_4, 3.0 * FRAC_PI_8),
];

/// Two-channel correlation estimate over the jointly detected pairs.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CorrelationEstimate {
    /// `(N₊₊ + N₋₋ − N₊₋ − N₋₊) / (N₊₊ + N₋₋ + N₊₋ + N₋₊)`, in `[−1, 1]`.
    pub value: f64,
    pub detected: u64,
    pub discarded: u64,
}

/// Standard two-channel coincidence estimator. Discarded pairs are excluded:
/// statistics are post-selected on joint detection, which is what lets the
/// CHSH statistic exceed 2√2 at large thresholds.
pub fn correlation_coefficient(counts: &CoincidenceCounts) -> Result<CorrelationEstimate> {
    let detected = counts.detected();
    if detected == 0 {
        return Err(SimError::NoData(
            "no jointly detected pairs at this setting".to_string(),
        ));
    }
    let same = (counts.n_pp + counts.n_mm) as f64;
    let diff = (counts.n_pm + counts.n_mp) as f64;
    Ok(CorrelationEstimate {
        value: (same - diff) / detected as f64,
        detected,
        discarded: counts.n_discarded,
    })
}

/// `S = E(a,b) − E(a,b′) + E(a′,b) + E(a′,b′)`. Summaries report `|S|`.
pub fn chsh_value(
    e_ab: &CorrelationEstimate,
    e_ab_prime: &CorrelationEstimate,
    e_a_prime_b: &CorrelationEstimate,
    e_a_prime_b_prime: &CorrelationEstimate,
) -> f64 {
    e_ab.value - e_ab_prime.value + e_a_prime_b.value + e_a_prime_b_prime.value
}

/// CHSH statistic aggregated over independent runs.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ChshReport {
    /// The four `(α, β)` pairs used, radians.
    pub settings: [(f64, f64); 4],
    /// One signed S value per run.
    pub s_values: Vec<f64>,
    /// Mean of the signed per-run values.
    pub mean: f64,
    /// Sample standard deviation across runs (n − 1 denominator).
    pub std_dev: f64,
    /// `std_dev / sqrt(runs)`.
    pub std_err: f64,
    /// `(|mean| − 2) / std_err`: how many standard errors the statistic
    /// sits above the classical bound.
    pub violation_sigma: f64,
}

impl ChshReport {
    pub fn abs_mean(&self) -> f64 {
        self.mean.abs()
    }
}

/// Simulates the four canonical settings for each of `config.runs` runs
/// (run-keyed substreams) and aggregates the per-run CHSH values.
/// Requires `runs ≥ 2` so the dispersion is defined. The sweep part of the
/// config is ignored.
pub fn chsh_experiment(config: &RunConfig) -> Result<ChshReport> {
    config.validate()?;
    if config.runs < 2 {
        return Err(SimError::InvalidConfig(
            "runs must be at least 2 for a defined standard deviation".to_string(),
        ));
    }
    let estimates: Vec<Result<[CorrelationEstimate; 4]>> = (0..config.runs as u64)
        .into_par_iter()
        .map(|run| {
            let mut out = [CorrelationEstimate { value: 0.0, detected: 0, discarded: 0 }; 4];
            for (setting_index, (alpha, beta)) in CHSH_SETTINGS.iter().enumerate() {
                let mut streams = SettingStreams::new(config.seed, run, setting_index as u64);
                let counts = measure_block(
                    &config.analyzer(*alpha),
                    &config.analyzer(*beta),
                    config.pairs_per_setting,
                    config.decoherence,
                    &mut streams,
                );
                out[setting_index] = correlation_coefficient(&counts)?;
            }
            Ok(out)
        })
        .collect();

    let mut s_values = Vec::with_capacity(config.runs as usize);
    for run in estimates {
        let [ab, ab_p, ap_b, ap_bp] = run?;
        s_values.push(chsh_value(&ab, &ab_p, &ap_b, &ap_bp));
    }

    let n = s_values.len() as f64;
    let mean = s_values.iter().sum::<f64>() / n;
    let var = s_values.iter().map(|s| (s - mean).powi(2)).sum::<f64>() / (n - 1.0);
    let std_dev = var.sqrt();
    let std_err = std_dev / n.sqrt();
    Ok(ChshReport {
        settings: CHSH_SETTINGS,
        s_values,
        mean,
        std_dev,
        std_err,
        violation_sigma: (mean.abs() - 2.0) / std_err,
    })
}

/// Visibility of one run's coincidence curve.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct VisibilityReport {
    pub run_index: u64,
    /// `(N_max − N_min) / (N_max + N_min)` over the `N₊₊` counts.
    pub visibility: f64,
    pub n_max: u64,
    pub n_min: u64,
}

/// `(N_max − N_min)/(N_max + N_min)` over the sweep's `N₊₊` counts.
/// Undefined (an error) when the curve is identically zero.
pub fn visibility(curve: &CorrelationCurve) -> Result<f64> {
    visibility_report(curve).map(|r| r.visibility)
}

pub fn visibility_report(curve: &CorrelationCurve) -> Result<VisibilityReport> {
    let n_max = curve.points.iter().map(|p| p.counts.n_pp).max();
    let n_min = curve.points.iter().map(|p| p.counts.n_pp).min();
    let (Some(n_max), Some(n_min)) = (n_max, n_min) else {
        return Err(SimError::NoData("empty correlation curve".to_string()));
    };
    if n_max + n_min == 0 {
        return Err(SimError::NoData(
            "visibility undefined: N_++ is zero across the whole sweep".to_string(),
        ));
    }
    Ok(VisibilityReport {
        run_index: curve.run_index,
        visibility: (n_max - n_min) as f64 / (n_max + n_min) as f64,
        n_max,
        n_min,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SPhiPoint {
    pub phi_rad: f64,
    pub s: f64,
}

/// The single-parameter Bell statistic `S(φ) = 3E(φ) − E(3φ)` over a grid
/// of analyzer separations.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SPhiCurve {
    pub threshold: f64,
    pub run_index: u64,
    pub points: Vec<SPhiPoint>,
}

/// Evaluates `S(φ) = 3E(φ) − E(3φ)` for each `φ`, the standard geometry of
/// equally spaced settings: three pairs separated by `φ`, one by `3φ`.
/// Each correlation comes from its own simulated block of pairs (setting
/// indices `2i` for `φ`, `2i + 1` for `3φ`).
pub fn s_phi_curve(config: &RunConfig, phis: &[f64], run_index: u64) -> Result<SPhiCurve> {
    config.validate()?;
    for &phi in phis {
        if !(phi > 0.0 && phi < FRAC_PI_2) {
            return Err(SimError::InvalidConfig(format!(
                "phi values must lie strictly inside (0, pi/2), got {phi}"
            )));
        }
    }
    let points = phis
        .par_iter()
        .enumerate()
        .map(|(i, &phi)| -> Result<SPhiPoint> {
            let estimate = |separation: f64, setting_index: u64| -> Result<CorrelationEstimate> {
                let mut streams = SettingStreams::new(config.seed, run_index, setting_index);
                let counts = measure_block(
                    &config.analyzer(config.beta + separation),
                    &config.analyzer(config.beta),
                    config.pairs_per_setting,
                    config.decoherence,
                    &mut streams,
                );
                correlation_coefficient(&counts)
            };
            let e_phi = estimate(phi, 2 * i as u64)?;
            let e_3phi = estimate(3.0 * phi, 2 * i as u64 + 1)?;
            Ok(SPhiPoint {
                phi_rad: phi,
                s: 3.0 * e_phi.value - e_3phi.value,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(SPhiCurve {
        threshold: config.threshold,
        run_index,
        points,
    })
}
