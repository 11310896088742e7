//! Pair generation, decoherence, per-setting tallies and full sweeps.

use std::f64::consts::{PI, TAU};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Result, SimError};
use crate::model::{pbs_measure, AnalyzerSetting, DetectionOutcome, PairEvent};
use crate::rng::{PairDraws, SettingStreams};

/// Tolerance used when deciding whether a grid stop point is an exact
/// multiple of the step and therefore included.
const GRID_END_TOLERANCE: f64 = 1e-9;

/// An inclusive arithmetic grid `start, start + step, …`.
///
/// The number of points is `floor((stop − start)/step) + 1`; the stop value
/// itself is included when `stop − start` is an exact multiple of `step`
/// within 1e-9, so a `[0, π]` sweep in π/100 steps lands on both endpoints.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SweepSpec {
    pub start: f64,
    pub stop: f64,
    pub step: f64,
}

impl Default for SweepSpec {
    fn default() -> Self {
        Self {
            start: 0.0,
            stop: PI,
            step: PI / 100.0,
        }
    }
}

impl SweepSpec {
    pub fn validate(&self) -> Result<()> {
        if !self.step.is_finite() || self.step <= 0.0 {
            return Err(SimError::InvalidConfig(format!(
                "sweep-step must be a positive number, got {}",
                self.step
            )));
        }
        if !self.start.is_finite() || !self.stop.is_finite() || self.start >= self.stop {
            return Err(SimError::InvalidConfig(format!(
                "sweep-start must lie below sweep-stop, got {}..{}",
                self.start, self.stop
            )));
        }
        Ok(())
    }

    /// Grid values, uniformly spaced from `start` (no accumulated drift).
    pub fn values(&self) -> Vec<f64> {
        grid_values(self.start, self.stop, self.step)
    }
}

/// Expands `start:stop:step` into an inclusive grid; see [`SweepSpec`].
pub fn grid_values(start: f64, stop: f64, step: f64) -> Vec<f64> {
    let span = stop - start;
    let rounded = (span / step).round();
    let count = if (span - rounded * step).abs() <= GRID_END_TOLERANCE {
        rounded as usize + 1
    } else {
        (span / step).floor() as usize + 1
    };
    (0..count).map(|i| start + i as f64 * step).collect()
}

/// Full description of one simulated experiment.
///
/// `seed` plus a run index determine every draw; the same config always
/// reproduces the same counts, independent of execution order or thread
/// count (see [`crate::rng`]).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunConfig {
    /// Photon pairs emitted per polarizer setting.
    pub pairs_per_setting: u64,
    /// Decoherence rate `d` in `[0, 1]`: each photon's phase picks up an
    /// independent uniform deviation on `[−dπ/2, +dπ/2]`, i.e. at `d = 1`
    /// a phase angle of π is random.
    pub decoherence: f64,
    /// Beam-splitter dead-band half-width, shared by both analyzers.
    pub threshold: f64,
    /// Fixed orientation of polarizer 2 (radians).
    pub beta: f64,
    /// The swept polarizer-1 orientations.
    pub sweep: SweepSpec,
    /// Independent repetitions of the whole experiment.
    pub runs: u32,
    /// Master seed for the keyed random streams.
    pub seed: u64,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            pairs_per_setting: 10_000,
            decoherence: 0.0,
            threshold: 0.0,
            beta: 0.0,
            sweep: SweepSpec::default(),
            runs: 1,
            seed: 0,
        }
    }
}

impl RunConfig {
    pub fn validate(&self) -> Result<()> {
        if self.pairs_per_setting == 0 {
            return Err(SimError::InvalidConfig(
                "pairs must be at least 1".to_string(),
            ));
        }
        if !(0.0..=1.0).contains(&self.decoherence) {
            return Err(SimError::InvalidConfig(format!(
                "decoherence must lie in [0, 1], got {}",
                self.decoherence
            )));
        }
        if !(0.0..0.5).contains(&self.threshold) {
            return Err(SimError::InvalidConfig(format!(
                "threshold must satisfy 0 <= threshold < 0.5, got {}",
                self.threshold
            )));
        }
        if !self.beta.is_finite() {
            return Err(SimError::InvalidConfig(format!(
                "beta must be finite, got {}",
                self.beta
            )));
        }
        if self.runs == 0 {
            return Err(SimError::InvalidConfig(
                "runs must be at least 1".to_string(),
            ));
        }
        self.sweep.validate()
    }

    /// Analyzer at `angle` with this config's shared threshold.
    /// Callers validate the config first, so construction cannot fail.
    pub(crate) fn analyzer(&self, angle: f64) -> AnalyzerSetting {
        AnalyzerSetting::new(angle, self.threshold).expect("threshold validated")
    }
}

/// Coincidence tallies for one `(α, β)` setting, photon-1 outcome first.
/// Pairs with at least one undetected photon land in `n_discarded`, so the
/// five tallies always sum to the number of emitted pairs.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct CoincidenceCounts {
    pub n_pp: u64,
    pub n_pm: u64,
    pub n_mp: u64,
    pub n_mm: u64,
    pub n_discarded: u64,
}

impl CoincidenceCounts {
    pub fn record(&mut self, outcome1: DetectionOutcome, outcome2: DetectionOutcome) {
        use DetectionOutcome::*;
        match (outcome1, outcome2) {
            (Plus, Plus) => self.n_pp += 1,
            (Plus, Minus) => self.n_pm += 1,
            (Minus, Plus) => self.n_mp += 1,
            (Minus, Minus) => self.n_mm += 1,
            _ => self.n_discarded += 1,
        }
    }

    /// Jointly detected pairs.
    pub fn detected(&self) -> u64 {
        self.n_pp + self.n_pm + self.n_mp + self.n_mm
    }

    /// All emitted pairs accounted for by this tally.
    pub fn total(&self) -> u64 {
        self.detected() + self.n_discarded
    }
}

/// One point of a correlation curve.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CurvePoint {
    pub alpha_rad: f64,
    #[serde(flatten)]
    pub counts: CoincidenceCounts,
}

/// Coincidence counts over a full sweep of polarizer 1, together with the
/// configuration and run index that produced them.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CorrelationCurve {
    pub config: RunConfig,
    pub run_index: u64,
    pub points: Vec<CurvePoint>,
}

/// Draws the shared emission phase and builds the pair: the unit deviate is
/// mapped onto `[0, 2π)`, photon 1 gets the extra π/2. Decoherence is not
/// yet applied.
pub fn emit_pair(draws: &mut PairDraws<'_>) -> PairEvent {
    pair_from_unit(draws.polarization())
}

/// Deterministic part of [`emit_pair`]: maps a unit deviate to a pair.
pub fn pair_from_unit(unit: f64) -> PairEvent {
    PairEvent::from_base_phase(TAU * unit)
}

/// Adds the random path segment to each photon's phase: two independent
/// uniform deviations on `[−dπ/2, +dπ/2)`, one per arm. `d = 0` is the
/// identity.
pub fn apply_decoherence(pair: PairEvent, decoherence: f64, draws: &mut PairDraws<'_>) -> PairEvent {
    decohere_with_units(
        pair,
        decoherence,
        draws.decoherence_arm1(),
        draws.decoherence_arm2(),
    )
}

/// Deterministic part of [`apply_decoherence`].
pub fn decohere_with_units(pair: PairEvent, decoherence: f64, u1: f64, u2: f64) -> PairEvent {
    let spread = decoherence * PI;
    PairEvent {
        photon1: pair.photon1.offset(spread * (u1 - 0.5)),
        photon2: pair.photon2.offset(spread * (u2 - 0.5)),
    }
}

/// Measures both photons at their analyzers. Pure given the pair.
pub fn measure_pair(
    pair: &PairEvent,
    setting1: &AnalyzerSetting,
    setting2: &AnalyzerSetting,
) -> (DetectionOutcome, DetectionOutcome) {
    (
        pbs_measure(pair.photon1, setting1),
        pbs_measure(pair.photon2, setting2),
    )
}

/// Emits, decoheres and measures a block of pairs at a fixed pair of
/// analyzer settings, tallying the coincidences.
pub fn measure_block(
    setting1: &AnalyzerSetting,
    setting2: &AnalyzerSetting,
    pairs: u64,
    decoherence: f64,
    streams: &mut SettingStreams,
) -> CoincidenceCounts {
    let mut counts = CoincidenceCounts::default();
    for pair_index in 0..pairs {
        let mut draws = streams.pair(pair_index);
        let pair = apply_decoherence(emit_pair(&mut draws), decoherence, &mut draws);
        let (o1, o2) = measure_pair(&pair, setting1, setting2);
        counts.record(o1, o2);
    }
    debug_assert_eq!(counts.total(), pairs);
    counts
}

/// Runs one polarizer-1 setting over `config.pairs_per_setting` pairs,
/// photon 2 fixed at `config.beta`. The config must already be validated.
pub fn run_setting(alpha: f64, config: &RunConfig, streams: &mut SettingStreams) -> CoincidenceCounts {
    measure_block(
        &config.analyzer(alpha),
        &config.analyzer(config.beta),
        config.pairs_per_setting,
        config.decoherence,
        streams,
    )
}

/// Runs the full sweep for one run index. Settings execute in parallel;
/// results are assembled by setting index, so the curve is identical to a
/// sequential run.
pub fn run_sweep(config: &RunConfig, run_index: u64) -> Result<CorrelationCurve> {
    config.validate()?;
    let alphas = config.sweep.values();
    let points = alphas
        .par_iter()
        .enumerate()
        .map(|(setting_index, &alpha)| {
            let mut streams = SettingStreams::new(config.seed, run_index, setting_index as u64);
            let counts = run_setting(alpha, config, &mut streams);
            assert_eq!(counts.total(), config.pairs_per_setting, "count conservation");
            CurvePoint {
                alpha_rad: alpha,
                counts,
            }
        })
        .collect();
    Ok(CorrelationCurve {
        config: config.clone(),
        run_index,
        points,
    })
}

#[cfg(test)]
mod tests {
    use std::f64::consts::{FRAC_PI_2, FRAC_PI_4, FRAC_PI_8, PI};

    use super::*;
    use crate::model::DetectionOutcome::*;

    #[test]
    fn grid_includes_exact_endpoint() {
        let spec = SweepSpec::default();
        let v = spec.values();
        assert_eq!(v.len(), 101);
        assert_eq!(v[0], 0.0);
        assert!((v[100] - PI).abs() < 1e-12);
        // uniform spacing straight from the index
        assert!((v[37] - 37.0 * PI / 100.0).abs() < 1e-15);
    }

    #[test]
    fn grid_drops_inexact_endpoint() {
        let v = grid_values(0.0, 1.0, 0.3);
        assert_eq!(v.len(), 4); // 0.0, 0.3, 0.6, 0.9
        assert!((v[3] - 0.9).abs() < 1e-12);
    }

    #[test]
    fn config_invariants_are_enforced() {
        let ok = RunConfig::default();
        assert!(ok.validate().is_ok());
        assert!(RunConfig { pairs_per_setting: 0, ..ok.clone() }.validate().is_err());
        assert!(RunConfig { decoherence: 1.01, ..ok.clone() }.validate().is_err());
        assert!(RunConfig { decoherence: -0.01, ..ok.clone() }.validate().is_err());
        assert!(RunConfig { threshold: 0.5, ..ok.clone() }.validate().is_err());
        assert!(RunConfig { runs: 0, ..ok.clone() }.validate().is_err());
        let bad_sweep = SweepSpec { start: 1.0, stop: 0.0, step: 0.1 };
        assert!(RunConfig { sweep: bad_sweep, ..ok }.validate().is_err());
    }

    #[test]
    fn emission_maps_unit_interval_onto_circle() {
        let pair = pair_from_unit(0.0);
        assert_eq!(pair.photon2.radians(), 0.0);
        assert!((pair.photon1.radians() - FRAC_PI_2).abs() < 1e-15);

        let pair = pair_from_unit(0.25);
        assert!((pair.photon2.radians() - FRAC_PI_2).abs() < 1e-15);
        assert!((pair.photon1.radians() - PI).abs() < 1e-15);
    }

    #[test]
    fn emission_phase_passes_uniformity_test() {
        // Kolmogorov-Smirnov against the uniform CDF on [0, 2π), 10^6 draws.
        // 1% critical value: 1.628 / sqrt(n).
        let n = 1_000_000u64;
        let mut streams = SettingStreams::new(42, 0, 0);
        let mut values: Vec<f64> = (0..n)
            .map(|i| emit_pair(&mut streams.pair(i)).photon2.radians() / std::f64::consts::TAU)
            .collect();
        values.sort_unstable_by(|a, b| a.total_cmp(b));
        let mut ks: f64 = 0.0;
        for (i, v) in values.iter().enumerate() {
            let lo = i as f64 / n as f64;
            let hi = (i + 1) as f64 / n as f64;
            ks = ks.max((v - lo).abs()).max((hi - v).abs());
        }
        let critical = 1.628 / (n as f64).sqrt();
        assert!(ks < critical, "KS statistic {ks} exceeds 1% critical value {critical}");
    }

    #[test]
    fn zero_decoherence_is_identity() {
        let pair = pair_from_unit(0.37);
        let out = decohere_with_units(pair, 0.0, 0.99, 0.01);
        assert_eq!(out.photon1.radians().to_bits(), pair.photon1.radians().to_bits());
        assert_eq!(out.photon2.radians().to_bits(), pair.photon2.radians().to_bits());
    }

    #[test]
    fn decoherence_perturbation_is_bounded() {
        // at d = 0.1 each photon moves by at most π/20
        let mut streams = SettingStreams::new(3, 0, 0);
        let bound = PI / 20.0;
        let mut max_seen: f64 = 0.0;
        for i in 0..1_000_000u64 {
            let mut draws = streams.pair(i);
            let before = emit_pair(&mut draws);
            let after = apply_decoherence(before, 0.1, &mut draws);
            for (b, a) in [
                (before.photon1.radians(), after.photon1.radians()),
                (before.photon2.radians(), after.photon2.radians()),
            ] {
                let mut delta = (a - b).abs();
                if delta > PI {
                    delta = std::f64::consts::TAU - delta; // wrapped at 0/2π
                }
                assert!(delta <= bound, "perturbation {delta} exceeds {bound}");
                max_seen = max_seen.max(delta);
            }
        }
        // the sampler actually reaches its nominal width
        assert!(max_seen > 0.99 * bound, "max perturbation only {max_seen}");
    }

    #[test]
    fn full_decoherence_randomizes_the_measurement_period() {
        // At d = 1 the post-decoherence phase mod π is uniform: KS test,
        // and the correlation at any Δ vanishes within 3σ over 10^5 pairs.
        let n = 100_000u64;
        let mut streams = SettingStreams::new(11, 0, 0);
        let mut values: Vec<f64> = (0..n)
            .map(|i| {
                let mut draws = streams.pair(i);
                let pair = apply_decoherence(emit_pair(&mut draws), 1.0, &mut draws);
                pair.photon2.radians().rem_euclid(PI) / PI
            })
            .collect();
        values.sort_unstable_by(|a, b| a.total_cmp(b));
        let mut ks: f64 = 0.0;
        for (i, v) in values.iter().enumerate() {
            let lo = i as f64 / n as f64;
            let hi = (i + 1) as f64 / n as f64;
            ks = ks.max((v - lo).abs()).max((hi - v).abs());
        }
        assert!(ks < 1.628 / (n as f64).sqrt(), "KS statistic {ks}");

        for delta in [0.0, FRAC_PI_8, FRAC_PI_4, 1.0] {
            let s1 = AnalyzerSetting::new(delta, 0.0).unwrap();
            let s2 = AnalyzerSetting::new(0.0, 0.0).unwrap();
            let mut streams = SettingStreams::new(12, 0, 0);
            let counts = measure_block(&s1, &s2, n, 1.0, &mut streams);
            let same = (counts.n_pp + counts.n_mm) as f64;
            let diff = (counts.n_pm + counts.n_mp) as f64;
            let e = (same - diff) / (same + diff);
            let sigma = 1.0 / (n as f64).sqrt();
            assert!(e.abs() < 3.0 * sigma, "E({delta}) = {e} not ~0");
        }
    }

    #[test]
    fn measurement_of_orthogonal_pair_on_aligned_analyzers() {
        let pair = PairEvent::from_base_phase(0.0); // photon1 = π/2, photon2 = 0
        let s = AnalyzerSetting::new(0.0, 0.0).unwrap();
        assert_eq!(measure_pair(&pair, &s, &s), (Minus, Plus));
    }

    #[test]
    fn measurement_with_rotated_analyzers() {
        // both photons sit π/8 from their own analyzer axis: cos² ≈ 0.854
        let pair = PairEvent::from_base_phase(FRAC_PI_8);
        let s1 = AnalyzerSetting::new(FRAC_PI_2, 0.0).unwrap();
        let s2 = AnalyzerSetting::new(0.0, 0.0).unwrap();
        assert_eq!(measure_pair(&pair, &s1, &s2), (Plus, Plus));
    }

    #[test]
    fn wide_dead_band_swallows_diagonal_arms() {
        // relative angle π/4 with threshold 0.49: that arm cannot decide
        let pair = PairEvent::from_base_phase(FRAC_PI_4);
        let s = AnalyzerSetting::new(0.0, 0.49).unwrap();
        let (_, o2) = measure_pair(&pair, &AnalyzerSetting::new(0.0, 0.0).unwrap(), &s);
        assert_eq!(o2, Undetected);
    }

    #[test]
    fn aligned_setting_yields_no_plus_plus_coincidences() {
        // with exactly perpendicular hidden angles, joint (+,+) is impossible
        let config = RunConfig { seed: 5, ..RunConfig::default() };
        let mut streams = SettingStreams::new(config.seed, 0, 0);
        let counts = run_setting(0.0, &config, &mut streams);
        assert_eq!(counts.n_pp, 0);
        assert_eq!(counts.total(), config.pairs_per_setting);
    }

    #[test]
    fn perpendicular_setting_yields_half_plus_plus() {
        let config = RunConfig { seed: 6, ..RunConfig::default() };
        let mut streams = SettingStreams::new(config.seed, 0, 50);
        let counts = run_setting(FRAC_PI_2, &config, &mut streams);
        let n = config.pairs_per_setting as f64;
        let sigma = (n * 0.25).sqrt();
        assert!((counts.n_pp as f64 - n / 2.0).abs() < 3.0 * sigma);
    }

    #[test]
    fn diagonal_setting_yields_quarter_plus_plus() {
        let config = RunConfig { seed: 7, ..RunConfig::default() };
        let mut streams = SettingStreams::new(config.seed, 0, 25);
        let counts = run_setting(FRAC_PI_4, &config, &mut streams);
        let n = config.pairs_per_setting as f64;
        let sigma = (n * 0.25 * 0.75).sqrt();
        assert!((counts.n_pp as f64 - n / 4.0).abs() < 3.0 * sigma);
    }

    #[test]
    fn sweep_is_deterministic() {
        let config = RunConfig { seed: 99, decoherence: 0.3, threshold: 0.05, ..RunConfig::default() };
        let a = run_sweep(&config, 2).unwrap();
        let b = run_sweep(&config, 2).unwrap();
        assert_eq!(a, b);
        let c = run_sweep(&config, 3).unwrap();
        assert_ne!(a, c, "distinct runs must differ");
    }

    #[test]
    fn shared_settings_survive_a_sweep_extension() {
        // truncating the sweep must not change the counts of shared settings
        let long = RunConfig { seed: 31, ..RunConfig::default() };
        let short = RunConfig {
            sweep: SweepSpec { start: 0.0, stop: PI / 2.0, step: PI / 100.0 },
            ..long.clone()
        };
        let full = run_sweep(&long, 0).unwrap();
        let half = run_sweep(&short, 0).unwrap();
        assert_eq!(half.points.len(), 51);
        for (a, b) in half.points.iter().zip(full.points.iter()) {
            assert_eq!(a.counts, b.counts);
        }
    }

    #[test]
    fn count_conservation_holds_across_parameter_space() {
        for (d, t) in [(0.0, 0.0), (0.1, 0.1), (1.0, 0.0), (0.5, 0.49), (0.0, 0.3)] {
            let config = RunConfig {
                pairs_per_setting: 2_000,
                decoherence: d,
                threshold: t,
                seed: 13,
                ..RunConfig::default()
            };
            let curve = run_sweep(&config, 0).unwrap();
            for p in &curve.points {
                assert_eq!(p.counts.total(), 2_000, "at alpha {}", p.alpha_rad);
            }
        }
    }
}
