//! Domain types and the pure measurement physics: angles, analyzer settings
//! and the dichotomizing polarizer-beam-splitter switch.

use std::f64::consts::{FRAC_PI_2, TAU};

use serde::{Deserialize, Serialize};

use crate::error::{Result, SimError};

/// A polarization phase angle, canonicalized into `[0, 2π)` on construction.
///
/// Measurement only ever sees the angle through `cos²`, so the effective
/// period is π; the hidden variable itself is generated on the full circle.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct PolarizationAngle(f64);

impl PolarizationAngle {
    pub fn new(radians: f64) -> Self {
        let mut v = radians.rem_euclid(TAU);
        // rem_euclid can round up to the modulus itself for tiny negatives
        if v >= TAU {
            v -= TAU;
        }
        Self(v)
    }

    pub fn radians(self) -> f64 {
        self.0
    }

    /// Angle shifted by `delta` radians, re-canonicalized.
    pub fn offset(self, delta: f64) -> Self {
        Self::new(self.0 + delta)
    }
}

/// One measurement station: polarizer orientation plus the dead-band
/// half-width `threshold` of its beam splitter.
///
/// An event lands in the `+` channel when `cos²(ψ − angle) ≥ 0.5 + threshold`,
/// in the `−` channel when `cos²(ψ − angle) ≤ 0.5 − threshold`, and is
/// undetected in between. `threshold ≥ 0.5` would make every event
/// undetected, so construction rejects it.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AnalyzerSetting {
    angle: PolarizationAngle,
    threshold: f64,
}

impl AnalyzerSetting {
    pub fn new(angle_radians: f64, threshold: f64) -> Result<Self> {
        if !(0.0..0.5).contains(&threshold) {
            return Err(SimError::InvalidConfig(format!(
                "threshold must satisfy 0 <= threshold < 0.5, got {threshold}"
            )));
        }
        Ok(Self {
            angle: PolarizationAngle::new(angle_radians),
            threshold,
        })
    }

    pub fn angle(&self) -> PolarizationAngle {
        self.angle
    }

    pub fn threshold(&self) -> f64 {
        self.threshold
    }
}

/// Outcome of one single-photon measurement at a polarizer beam splitter.
///
/// Exactly one state per measurement: the `+` and `−` channel conditions
/// cannot both hold for a positive threshold, and at threshold zero the
/// boundary case resolves to `Plus` (the `+` branch is tested first).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum DetectionOutcome {
    /// Vertical channel, `+`.
    Plus,
    /// Horizontal channel, `−`.
    Minus,
    /// Intensity split fell inside the dead band; the event is discarded.
    Undetected,
}

impl DetectionOutcome {
    pub fn is_detected(self) -> bool {
        !matches!(self, DetectionOutcome::Undetected)
    }
}

/// The hidden-variable state of one photon pair: each photon's polarization
/// phase as seen at its analyzer, decoherence included once applied.
///
/// Before decoherence the photons are exactly perpendicular:
/// `photon1 = photon2 + π/2`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PairEvent {
    pub photon1: PolarizationAngle,
    pub photon2: PolarizationAngle,
}

impl PairEvent {
    /// Builds a pair from the shared emission phase: photon 2 carries the
    /// phase itself, photon 1 the perpendicular plane.
    pub fn from_base_phase(psi0: f64) -> Self {
        let photon2 = PolarizationAngle::new(psi0);
        Self {
            photon1: photon2.offset(FRAC_PI_2),
            photon2,
        }
    }
}

/// The dichotomizing beam-splitter switch.
///
/// Pure and deterministic. With `c = cos²(ψ − angle)`, returns `Plus` iff
/// `c ≥ 0.5 + threshold`, `Minus` iff `c ≤ 0.5 − threshold`, otherwise
/// `Undetected`. The inequalities are evaluated exactly as written on
/// double-precision values; the dead band itself is the physically
/// meaningful tolerance, so no extra epsilon is layered on top.
pub fn pbs_measure(psi: PolarizationAngle, setting: &AnalyzerSetting) -> DetectionOutcome {
    let c = (psi.radians() - setting.angle().radians()).cos().powi(2);
    if c >= 0.5 + setting.threshold() {
        DetectionOutcome::Plus
    } else if c <= 0.5 - setting.threshold() {
        DetectionOutcome::Minus
    } else {
        DetectionOutcome::Undetected
    }
}
