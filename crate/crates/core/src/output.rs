//! Machine-readable result files.
//!
//! Two encodings of one schema. CSV files open with a `#`-prefixed preamble
//! that echoes the schema version, the command and every configuration value
//! (flag spelling), followed by the fixed column header — everything needed
//! to regenerate the file byte-for-byte. JSON files carry the same content
//! as a single record with a `schema_version` field, a full config echo and
//! per-point objects whose field names match the CSV columns. No timestamps
//! are emitted anywhere.

use std::fmt::Write as _;

use serde::Serialize;

use crate::engine::{CorrelationCurve, RunConfig};
use crate::reference::ReferenceCurve;
use crate::stats::{ChshReport, SPhiCurve, VisibilityReport};

pub const SCHEMA_VERSION: &str = "eprsim/1";

/// Fixed, versioned header of sweep CSV files.
pub const SWEEP_CSV_HEADER: &str = "alpha_rad,n_pp,n_pm,n_mp,n_mm,n_discarded";

/// Envelope for JSON output: schema version, command, config echo, payload.
#[derive(Debug, Serialize)]
pub struct OutputRecord<'a, T: Serialize> {
    pub schema_version: &'static str,
    pub command: &'a str,
    pub config: &'a RunConfig,
    pub payload: T,
}

pub fn to_json<T: Serialize>(command: &str, config: &RunConfig, payload: T) -> String {
    let record = OutputRecord {
        schema_version: SCHEMA_VERSION,
        command,
        config,
        payload,
    };
    let mut s = serde_json::to_string_pretty(&record).expect("serializable payload");
    s.push('\n');
    s
}

fn config_preamble(out: &mut String, command: &str, config: &RunConfig) {
    let _ = writeln!(out, "# schema = {SCHEMA_VERSION}");
    let _ = writeln!(out, "# command = {command}");
    let _ = writeln!(out, "# pairs = {}", config.pairs_per_setting);
    let _ = writeln!(out, "# decoherence = {}", config.decoherence);
    let _ = writeln!(out, "# threshold = {}", config.threshold);
    let _ = writeln!(out, "# beta = {}", config.beta);
    let _ = writeln!(out, "# sweep-start = {}", config.sweep.start);
    let _ = writeln!(out, "# sweep-stop = {}", config.sweep.stop);
    let _ = writeln!(out, "# sweep-step = {}", config.sweep.step);
    let _ = writeln!(out, "# runs = {}", config.runs);
    let _ = writeln!(out, "# seed = {}", config.seed);
}

/// One sweep run as CSV: config preamble, fixed header, one row per setting.
pub fn sweep_csv(curve: &CorrelationCurve) -> String {
    let mut out = String::new();
    config_preamble(&mut out, "sweep", &curve.config);
    let _ = writeln!(out, "# run = {}", curve.run_index);
    let _ = writeln!(out, "{SWEEP_CSV_HEADER}");
    for p in &curve.points {
        let c = p.counts;
        let _ = writeln!(
            out,
            "{},{},{},{},{},{}",
            p.alpha_rad, c.n_pp, c.n_pm, c.n_mp, c.n_mm, c.n_discarded
        );
    }
    out
}

pub fn visibility_csv(config: &RunConfig, reports: &[VisibilityReport]) -> String {
    let mut out = String::new();
    config_preamble(&mut out, "sweep", config);
    let _ = writeln!(out, "run,visibility,n_max,n_min");
    for r in reports {
        let _ = writeln!(out, "{},{},{},{}", r.run_index, r.visibility, r.n_max, r.n_min);
    }
    out
}

pub fn chsh_csv(config: &RunConfig, reports: &[(f64, ChshReport)]) -> String {
    let mut out = String::new();
    config_preamble(&mut out, "chsh", config);
    let _ = writeln!(out, "threshold,mean_s,abs_mean_s,std_dev,std_err,violation_sigma,runs");
    for (threshold, r) in reports {
        let _ = writeln!(
            out,
            "{},{},{},{},{},{},{}",
            threshold,
            r.mean,
            r.abs_mean(),
            r.std_dev,
            r.std_err,
            r.violation_sigma,
            r.s_values.len()
        );
    }
    out
}

pub fn sphi_csv(config: &RunConfig, curves: &[SPhiCurve]) -> String {
    let mut out = String::new();
    config_preamble(&mut out, "sphi", config);
    let _ = writeln!(out, "threshold,run,phi_rad,s");
    for curve in curves {
        for p in &curve.points {
            let _ = writeln!(out, "{},{},{},{}", curve.threshold, curve.run_index, p.phi_rad, p.s);
        }
    }
    out
}

pub fn reference_csv(curve: &ReferenceCurve, n_pairs: u64) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "# schema = {SCHEMA_VERSION}");
    let _ = writeln!(out, "# command = reference");
    let _ = writeln!(out, "# model = {}", curve.label.name());
    let _ = writeln!(out, "# pairs = {n_pairs}");
    let _ = writeln!(out, "delta_rad,expected_count");
    for p in &curve.points {
        let _ = writeln!(out, "{},{}", p.delta_rad, p.expected_count);
    }
    out
}
