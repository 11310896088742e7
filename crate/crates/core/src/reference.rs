//! Analytic reference curves for comparison against the simulated counts:
//! the classical product-intensity integral, the quantum-mechanical
//! prediction, and the ideal dichotomic model's exact sawtooth. Also the
//! modulator phase arithmetic relating field components to the polarization
//! angle.

use std::f64::consts::{FRAC_PI_2, PI, TAU};

use serde::{Deserialize, Serialize};

use crate::error::{Result, SimError};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ReferenceModel {
    /// Product-intensity coincidence integral, evaluated by quadrature.
    Furry,
    /// Quantum-mechanical prediction `(N/2)·sin²Δ`.
    Qm,
    /// Exact expectation of the ideal dichotomic model, `N·tri(Δ)/π`.
    Sawtooth,
}

impl ReferenceModel {
    pub fn name(self) -> &'static str {
        match self {
            ReferenceModel::Furry => "furry",
            ReferenceModel::Qm => "qm",
            ReferenceModel::Sawtooth => "sawtooth",
        }
    }
}

impl std::str::FromStr for ReferenceModel {
    type Err = SimError;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "furry" => Ok(ReferenceModel::Furry),
            "qm" => Ok(ReferenceModel::Qm),
            "sawtooth" => Ok(ReferenceModel::Sawtooth),
            other => Err(SimError::InvalidConfig(format!(
                "unknown reference model '{other}' (expected furry, qm or sawtooth)"
            ))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ReferencePoint {
    pub delta_rad: f64,
    pub expected_count: f64,
}

/// Expected coincidence counts against analyzer separation Δ for one of the
/// analytic models, scaled to `n_pairs` emitted pairs.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReferenceCurve {
    pub label: ReferenceModel,
    pub points: Vec<ReferencePoint>,
}

/// Classical product-intensity coincidence curve
/// `P(Δ) ∝ ∫ dφ cos²(φ + π/2 − Δ) cos²(φ)` over the full circle,
/// evaluated by the trapezoid rule (spectrally accurate on this smooth
/// periodic integrand) and normalized so the minimum equals `n/8`:
/// the curve is `n` times the circle average of the product.
///
/// `quadrature_steps` must be at least 100.
pub fn furry_curve(n_pairs: u64, deltas: &[f64], quadrature_steps: usize) -> ReferenceCurve {
    assert!(quadrature_steps >= 100, "quadrature_steps must be >= 100");
    let n = n_pairs as f64;
    let points = deltas
        .iter()
        .map(|&delta| {
            // trapezoid over one full period with f(0) = f(2π): the two
            // half-weight endpoint terms merge into one plain sample
            let total: f64 = (0..quadrature_steps)
                .map(|k| {
                    let phi = TAU * k as f64 / quadrature_steps as f64;
                    (phi + FRAC_PI_2 - delta).cos().powi(2) * phi.cos().powi(2)
                })
                .sum();
            ReferencePoint {
                delta_rad: delta,
                expected_count: n * total / quadrature_steps as f64,
            }
        })
        .collect();
    ReferenceCurve {
        label: ReferenceModel::Furry,
        points,
    }
}

/// Quantum-mechanical coincidence prediction `(n/2)·sin²(Δ)`.
pub fn qm_curve(n_pairs: u64, deltas: &[f64]) -> ReferenceCurve {
    let n = n_pairs as f64;
    ReferenceCurve {
        label: ReferenceModel::Qm,
        points: deltas
            .iter()
            .map(|&delta| ReferencePoint {
                delta_rad: delta,
                expected_count: n / 2.0 * delta.sin().powi(2),
            })
            .collect(),
    }
}

/// Exact `(+,+)` probability of the ideal dichotomic model (zero threshold,
/// no decoherence) at separation Δ: the triangular wave `tri(Δ)/π` rising
/// linearly to ½ at Δ = π/2, reflected on `[π/2, π]`, period π. This is the
/// closed-form oracle the Monte Carlo engine is checked against.
pub fn sawtooth_probability(delta: f64) -> f64 {
    let x = delta.rem_euclid(PI);
    x.min(PI - x) / PI
}

/// Expected ideal-model coincidence counts `n·tri(Δ)/π`.
pub fn sawtooth_curve(n_pairs: u64, deltas: &[f64]) -> ReferenceCurve {
    let n = n_pairs as f64;
    ReferenceCurve {
        label: ReferenceModel::Sawtooth,
        points: deltas
            .iter()
            .map(|&delta| ReferencePoint {
                delta_rad: delta,
                expected_count: n * sawtooth_probability(delta),
            })
            .collect(),
    }
}

/// Field state behind an optical modulator that shifts the Y component by
/// the phase angle `dpsi`. `phase` is the propagation phase `kz − ωt`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ModulatorState {
    pub e0x: f64,
    pub e0y: f64,
    pub dpsi: f64,
    pub phase: f64,
}

impl ModulatorState {
    pub fn new(e0x: f64, e0y: f64, dpsi: f64, phase: f64) -> Result<Self> {
        if e0x == 0.0 && e0y == 0.0 {
            return Err(SimError::InvalidConfig(
                "modulator field amplitudes must not both be zero".to_string(),
            ));
        }
        Ok(Self { e0x, e0y, dpsi, phase })
    }
}

/// Polarization angle of the modulated field,
/// `arctan{(E₀Y/E₀X)·[cos Δψ − tan(kz − ωt)·sin Δψ]}`.
///
/// With `dpsi = 0` this reduces to `arctan(E₀Y/E₀X)`, independent of the
/// phase. Near the tan poles the argument blows up and `arctan` returns the
/// correct limiting angle ±π/2 (the same polarization plane modulo π).
/// With `e0x = 0` the field is purely vertical and the quarter-turn π/2 is
/// returned directly.
pub fn modulated_polarization_angle(state: &ModulatorState) -> f64 {
    if state.e0x == 0.0 {
        return FRAC_PI_2;
    }
    if state.dpsi == 0.0 {
        // phase-independent by construction; skip the tan evaluation
        return (state.e0y / state.e0x).atan();
    }
    let ratio = state.e0y / state.e0x;
    (ratio * (state.dpsi.cos() - state.phase.tan() * state.dpsi.sin())).atan()
}
