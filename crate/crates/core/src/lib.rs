//! Monte Carlo simulation of polarization-entangled photon-pair correlation
//! experiments.
//!
//! Photon pairs carry a shared, hidden polarization phase (the two planes
//! exactly perpendicular at emission); each photon is measured at a
//! polarizer beam splitter that renders a dichotomic `+`/`−` verdict, with a
//! configurable dead band in which it cannot decide and the pair is
//! discarded. Path noise between source and analyzer is modelled as an
//! independent uniform phase deviation per photon. On top of the counting
//! engine sit the usual experiment statistics — two-channel correlation
//! coefficients, curve visibility, the CHSH statistic with cross-run
//! dispersion, and the single-parameter S(φ) scan — plus analytic reference
//! curves to compare against.
//!
//! Everything is driven by keyed random streams: a seed plus run, setting
//! and pair indices address every deviate, so results are reproducible
//! bit-for-bit regardless of execution order or thread count.
//!
//! ```
//! use eprsim::{run_sweep, visibility, RunConfig};
//!
//! let config = RunConfig { seed: 1, ..RunConfig::default() };
//! let curve = run_sweep(&config, 0).unwrap();
//! // ideal measurement: saw-tooth counts with full contrast
//! assert_eq!(visibility(&curve).unwrap(), 1.0);
//! ```

pub mod cli;
pub mod engine;
pub mod error;
pub mod model;
pub mod output;
pub mod reference;
pub mod rng;
pub mod stats;

pub use engine::{
    apply_decoherence, emit_pair, measure_block, measure_pair, run_setting, run_sweep,
    CoincidenceCounts, CorrelationCurve, CurvePoint, RunConfig, SweepSpec,
};
pub use error::{Result, SimError};
pub use model::{pbs_measure, AnalyzerSetting, DetectionOutcome, PairEvent, PolarizationAngle};
pub use reference::{
    furry_curve, modulated_polarization_angle, qm_curve, sawtooth_curve, sawtooth_probability,
    ModulatorState, ReferenceCurve, ReferenceModel, ReferencePoint,
};
pub use rng::{PairDraws, SettingStreams};
pub use stats::{
    chsh_experiment, chsh_value, correlation_coefficient, s_phi_curve, visibility,
    visibility_report, ChshReport, CorrelationEstimate, SPhiCurve, SPhiPoint, VisibilityReport,
    CHSH_SETTINGS,
};
