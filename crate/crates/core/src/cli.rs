//! Command-line surface: `sweep`, `chsh`, `sphi` and `reference`.
//!
//! Every numeric option can also come from a plain-text config file
//! (`--config PATH`, lines of `name = value` using the flag spellings);
//! explicit flags win. Angle-valued options accept a bare number (radians)
//! or a `rad`/`deg` suffix. The seed has no wall-clock default: it must be
//! given, so every output file is reproducible from its embedded config.
//!
//! Exit codes: 0 success, 2 configuration error, 3 no-data error,
//! 1 I/O or internal failure.

use std::collections::HashMap;
use std::f64::consts::PI;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use crate::engine::{grid_values, run_sweep, CorrelationCurve, RunConfig, SweepSpec};
use crate::error::{Result, SimError};
use crate::output;
use crate::reference::{furry_curve, qm_curve, sawtooth_curve, ReferenceCurve, ReferenceModel};
use crate::stats::{chsh_experiment, s_phi_curve, visibility_report, ChshReport, SPhiCurve, VisibilityReport};

#[derive(Debug, Parser)]
#[command(name = "eprsim", version, about = "Photon-pair correlation experiment simulator")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Sweep polarizer 1, recording coincidence counts and visibility
    Sweep(SweepArgs),
    /// CHSH statistic with cross-run dispersion over a threshold grid
    Chsh(ChshArgs),
    /// Bell statistic S(phi) over the polarizer separation range
    Sphi(SphiArgs),
    /// Analytic reference curves (furry, qm, sawtooth)
    Reference(ReferenceArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum OutputFormat {
    Csv,
    Json,
}

#[derive(Debug, Args)]
struct CommonArgs {
    /// Photon pairs emitted per polarizer setting [default: 10000]
    #[arg(long)]
    pairs: Option<u64>,

    /// Beam-splitter dead-band half-width, 0 <= t < 0.5 [default: 0]
    #[arg(long)]
    threshold: Option<f64>,

    /// Decoherence rate in [0, 1] [default: 0]
    #[arg(long)]
    decoherence: Option<f64>,

    /// Polarizer 2 angle (bare radians or rad/deg suffix) [default: 0]
    #[arg(long, value_parser = parse_angle, allow_hyphen_values = true)]
    beta: Option<f64>,

    /// First swept polarizer-1 angle [default: 0]
    #[arg(long, value_parser = parse_angle, allow_hyphen_values = true)]
    sweep_start: Option<f64>,

    /// Last swept polarizer-1 angle [default: pi]
    #[arg(long, value_parser = parse_angle, allow_hyphen_values = true)]
    sweep_stop: Option<f64>,

    /// Sweep step [default: pi/100]
    #[arg(long, value_parser = parse_angle, allow_hyphen_values = true)]
    sweep_step: Option<f64>,

    /// Random seed; required (here or in the config file), never defaulted
    #[arg(long)]
    seed: Option<u64>,

    /// Output encoding [default: csv]
    #[arg(long, value_enum)]
    format: Option<OutputFormat>,

    /// Output file path
    #[arg(long)]
    out: PathBuf,

    /// Key-value config file supplying any of the flags above
    #[arg(long)]
    config: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct SweepArgs {
    #[command(flatten)]
    common: CommonArgs,

    /// Independent repetitions [default: 1]
    #[arg(long)]
    runs: Option<u32>,
}

#[derive(Debug, Args)]
struct ChshArgs {
    #[command(flatten)]
    common: CommonArgs,

    /// Threshold grid start:stop:step [default: 0:0.2:0.02]
    #[arg(long)]
    threshold_grid: Option<String>,

    /// Independent runs per grid point [default: 10]
    #[arg(long)]
    runs: Option<u32>,
}

#[derive(Debug, Args)]
struct SphiArgs {
    #[command(flatten)]
    common: CommonArgs,

    /// Threshold grid start:stop:step; one curve per value [default: 0:0.2:0.1]
    #[arg(long)]
    threshold_grid: Option<String>,

    /// Number of phi grid points strictly inside (0, pi/2) [default: 50]
    #[arg(long)]
    phi_steps: Option<usize>,

    /// Independent repetitions per threshold [default: 1]
    #[arg(long)]
    runs: Option<u32>,
}

#[derive(Debug, Args)]
struct ReferenceArgs {
    /// Which analytic curve to emit
    #[arg(long)]
    model: String,

    /// Pair count the curve is scaled to [default: 10000]
    #[arg(long)]
    pairs: Option<u64>,

    /// Explicit comma-separated separation angles; overrides the sweep flags
    #[arg(long, allow_hyphen_values = true)]
    deltas: Option<String>,

    #[arg(long, value_parser = parse_angle, allow_hyphen_values = true)]
    sweep_start: Option<f64>,

    #[arg(long, value_parser = parse_angle, allow_hyphen_values = true)]
    sweep_stop: Option<f64>,

    #[arg(long, value_parser = parse_angle, allow_hyphen_values = true)]
    sweep_step: Option<f64>,

    /// Quadrature resolution for the furry model, at least 100 [default: 10000]
    #[arg(long)]
    quadrature_steps: Option<usize>,

    /// Output encoding [default: csv]
    #[arg(long, value_enum)]
    format: Option<OutputFormat>,

    /// Output file path
    #[arg(long)]
    out: PathBuf,

    /// Key-value config file supplying any of the flags above
    #[arg(long)]
    config: Option<PathBuf>,
}

/// Parses an angle given as bare radians or with a `rad`/`deg` suffix.
pub fn parse_angle(input: &str) -> std::result::Result<f64, String> {
    let trimmed = input.trim();
    let (number, factor) = if let Some(v) = trimmed.strip_suffix("deg") {
        (v.trim_end(), PI / 180.0)
    } else if let Some(v) = trimmed.strip_suffix("rad") {
        (v.trim_end(), 1.0)
    } else {
        (trimmed, 1.0)
    };
    number
        .parse::<f64>()
        .map(|v| v * factor)
        .map_err(|_| format!("'{input}' is not an angle (use radians, or a rad/deg suffix)"))
}

/// Parses a `start:stop:step` grid of plain numbers; `start == stop` is a
/// single-point grid.
fn parse_grid(input: &str, flag: &str) -> Result<Vec<f64>> {
    let parts: Vec<&str> = input.split(':').collect();
    let invalid = || SimError::InvalidConfig(format!("{flag} must be start:stop:step, got '{input}'"));
    if parts.len() != 3 {
        return Err(invalid());
    }
    let nums: Vec<f64> = parts
        .iter()
        .map(|p| p.trim().parse::<f64>().map_err(|_| invalid()))
        .collect::<Result<_>>()?;
    let (start, stop, step) = (nums[0], nums[1], nums[2]);
    if !step.is_finite() || step <= 0.0 || !start.is_finite() || !stop.is_finite() || start > stop {
        return Err(invalid());
    }
    Ok(grid_values(start, stop, step))
}

/// `name = value` lines keyed by flag spellings; `#` starts a comment.
struct FileConfig(HashMap<String, String>);

impl FileConfig {
    fn load(path: Option<&Path>) -> Result<Self> {
        let mut map = HashMap::new();
        if let Some(path) = path {
            let text = std::fs::read_to_string(path).map_err(|e| {
                SimError::InvalidConfig(format!("config file {}: {e}", path.display()))
            })?;
            for raw in text.lines() {
                let line = raw.split('#').next().unwrap_or("").trim();
                if line.is_empty() {
                    continue;
                }
                let (key, value) = line
                    .split_once('=')
                    .or_else(|| line.split_once(char::is_whitespace))
                    .ok_or_else(|| {
                        SimError::InvalidConfig(format!("config file line '{raw}' is not 'name = value'"))
                    })?;
                map.insert(key.trim().to_string(), value.trim().to_string());
            }
        }
        Ok(Self(map))
    }

    fn parsed<T: std::str::FromStr>(&self, key: &str) -> Result<Option<T>> {
        match self.0.get(key) {
            None => Ok(None),
            Some(raw) => raw.parse::<T>().map(Some).map_err(|_| {
                SimError::InvalidConfig(format!("config file value '{raw}' is invalid for {key}"))
            }),
        }
    }

    fn angle(&self, key: &str) -> Result<Option<f64>> {
        match self.0.get(key) {
            None => Ok(None),
            Some(raw) => parse_angle(raw).map(Some).map_err(SimError::InvalidConfig),
        }
    }

    fn raw(&self, key: &str) -> Option<&str> {
        self.0.get(key).map(|s| s.as_str())
    }
}

struct Resolved {
    config: RunConfig,
    format: OutputFormat,
    out: PathBuf,
}

fn resolve_common(args: &CommonArgs, runs_flag: Option<u32>, default_runs: u32) -> Result<Resolved> {
    let file = FileConfig::load(args.config.as_deref())?;
    let seed = args
        .seed
        .or(file.parsed("seed")?)
        .ok_or_else(|| SimError::InvalidConfig("seed is required (flag --seed or config file)".into()))?;
    let config = RunConfig {
        pairs_per_setting: args.pairs.or(file.parsed("pairs")?).unwrap_or(10_000),
        decoherence: args.decoherence.or(file.parsed("decoherence")?).unwrap_or(0.0),
        threshold: args.threshold.or(file.parsed("threshold")?).unwrap_or(0.0),
        beta: args.beta.or(file.angle("beta")?).unwrap_or(0.0),
        sweep: SweepSpec {
            start: args.sweep_start.or(file.angle("sweep-start")?).unwrap_or(0.0),
            stop: args.sweep_stop.or(file.angle("sweep-stop")?).unwrap_or(PI),
            step: args.sweep_step.or(file.angle("sweep-step")?).unwrap_or(PI / 100.0),
        },
        runs: runs_flag.or(file.parsed("runs")?).unwrap_or(default_runs),
        seed,
    };
    config.validate()?;
    let format = args.format.unwrap_or(match file.raw("format") {
        Some("json") => OutputFormat::Json,
        _ => OutputFormat::Csv,
    });
    Ok(Resolved {
        config,
        format,
        out: args.out.clone(),
    })
}

/// Per-run output path: `curve.csv` stays as-is for a single run, becomes
/// `curve.run3.csv` for run 3 of a multi-run invocation.
fn run_path(base: &Path, run_index: u64, runs: u32) -> PathBuf {
    if runs <= 1 {
        return base.to_path_buf();
    }
    let stem = base.file_stem().and_then(|s| s.to_str()).unwrap_or("out");
    let name = match base.extension().and_then(|s| s.to_str()) {
        Some(ext) => format!("{stem}.run{run_index}.{ext}"),
        None => format!("{stem}.run{run_index}"),
    };
    base.with_file_name(name)
}

/// Sibling path with an extra label before the extension.
fn labeled_path(base: &Path, label: &str) -> PathBuf {
    let stem = base.file_stem().and_then(|s| s.to_str()).unwrap_or("out");
    let name = match base.extension().and_then(|s| s.to_str()) {
        Some(ext) => format!("{stem}.{label}.{ext}"),
        None => format!("{stem}.{label}"),
    };
    base.with_file_name(name)
}

enum CliError {
    Sim(SimError),
    Io(std::io::Error),
}

impl From<SimError> for CliError {
    fn from(e: SimError) -> Self {
        CliError::Sim(e)
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Io(e)
    }
}

#[derive(Serialize)]
struct SweepPayload {
    curves: Vec<CorrelationCurve>,
    visibility: Vec<VisibilityReport>,
}

fn cmd_sweep(args: &SweepArgs) -> std::result::Result<(), CliError> {
    let resolved = resolve_common(&args.common, args.runs, 1)?;
    let config = &resolved.config;
    let curves: Vec<CorrelationCurve> = (0..config.runs as u64)
        .map(|run| run_sweep(config, run))
        .collect::<Result<_>>()?;

    match resolved.format {
        OutputFormat::Csv => {
            // curves first so they survive an undefined-visibility exit
            for curve in &curves {
                std::fs::write(
                    run_path(&resolved.out, curve.run_index, config.runs),
                    output::sweep_csv(curve),
                )?;
            }
            let reports = curves
                .iter()
                .map(visibility_report)
                .collect::<Result<Vec<_>>>()?;
            std::fs::write(
                labeled_path(&resolved.out, "visibility"),
                output::visibility_csv(config, &reports),
            )?;
        }
        OutputFormat::Json => {
            let visibility = curves
                .iter()
                .map(visibility_report)
                .collect::<Result<Vec<_>>>()?;
            let payload = SweepPayload { curves, visibility };
            std::fs::write(&resolved.out, output::to_json("sweep", config, &payload))?;
        }
    }
    Ok(())
}

#[derive(Serialize)]
struct ChshPayload {
    reports: Vec<ChshEntry>,
}

#[derive(Serialize)]
struct ChshEntry {
    threshold: f64,
    #[serde(flatten)]
    report: ChshReport,
}

fn cmd_chsh(args: &ChshArgs) -> std::result::Result<(), CliError> {
    let resolved = resolve_common(&args.common, args.runs, 10)?;
    let file = FileConfig::load(args.common.config.as_deref())?;
    let grid_spec = args
        .threshold_grid
        .clone()
        .or_else(|| file.raw("threshold-grid").map(str::to_string))
        .unwrap_or_else(|| "0:0.2:0.02".to_string());
    let grid = parse_grid(&grid_spec, "threshold-grid")?;

    let mut reports = Vec::with_capacity(grid.len());
    for &threshold in &grid {
        let config = RunConfig { threshold, ..resolved.config.clone() };
        let report = chsh_experiment(&config)?;
        reports.push((threshold, report));
    }

    match resolved.format {
        OutputFormat::Csv => {
            std::fs::write(&resolved.out, output::chsh_csv(&resolved.config, &reports))?;
        }
        OutputFormat::Json => {
            let payload = ChshPayload {
                reports: reports
                    .into_iter()
                    .map(|(threshold, report)| ChshEntry { threshold, report })
                    .collect(),
            };
            std::fs::write(&resolved.out, output::to_json("chsh", &resolved.config, &payload))?;
        }
    }
    Ok(())
}

#[derive(Serialize)]
struct SphiPayload {
    curves: Vec<SPhiCurve>,
}

fn cmd_sphi(args: &SphiArgs) -> std::result::Result<(), CliError> {
    let resolved = resolve_common(&args.common, args.runs, 1)?;
    let file = FileConfig::load(args.common.config.as_deref())?;
    let grid_spec = args
        .threshold_grid
        .clone()
        .or_else(|| file.raw("threshold-grid").map(str::to_string))
        .unwrap_or_else(|| "0:0.2:0.1".to_string());
    let grid = parse_grid(&grid_spec, "threshold-grid")?;
    let phi_steps = args
        .phi_steps
        .or(file.parsed("phi-steps")?)
        .unwrap_or(50);
    if phi_steps == 0 {
        return Err(SimError::InvalidConfig("phi-steps must be at least 1".into()).into());
    }
    // strictly interior grid of (0, pi/2)
    let phis: Vec<f64> = (1..=phi_steps)
        .map(|i| i as f64 * (PI / 2.0) / (phi_steps + 1) as f64)
        .collect();

    let mut curves = Vec::new();
    for &threshold in &grid {
        let config = RunConfig { threshold, ..resolved.config.clone() };
        for run in 0..config.runs as u64 {
            curves.push(s_phi_curve(&config, &phis, run)?);
        }
    }

    match resolved.format {
        OutputFormat::Csv => {
            std::fs::write(&resolved.out, output::sphi_csv(&resolved.config, &curves))?;
        }
        OutputFormat::Json => {
            let payload = SphiPayload { curves };
            std::fs::write(&resolved.out, output::to_json("sphi", &resolved.config, &payload))?;
        }
    }
    Ok(())
}

#[derive(Serialize)]
struct ReferenceRecord<'a> {
    schema_version: &'static str,
    command: &'a str,
    model: &'a str,
    pairs: u64,
    quadrature_steps: Option<usize>,
    payload: &'a ReferenceCurve,
}

fn cmd_reference(args: &ReferenceArgs) -> std::result::Result<(), CliError> {
    let file = FileConfig::load(args.config.as_deref())?;
    let model: ReferenceModel = match args.model.parse() {
        Ok(m) => m,
        Err(e) => return Err(CliError::Sim(e)),
    };
    let pairs = args.pairs.or(file.parsed("pairs")?).unwrap_or(10_000);
    let quadrature_steps = args
        .quadrature_steps
        .or(file.parsed("quadrature-steps")?)
        .unwrap_or(10_000);
    if quadrature_steps < 100 {
        return Err(SimError::InvalidConfig(format!(
            "quadrature-steps must be at least 100, got {quadrature_steps}"
        ))
        .into());
    }

    let deltas: Vec<f64> = match args.deltas.as_deref().or_else(|| file.raw("deltas")) {
        Some(list) => list
            .split(',')
            .map(|item| parse_angle(item).map_err(SimError::InvalidConfig))
            .collect::<Result<_>>()?,
        None => {
            let sweep = SweepSpec {
                start: args.sweep_start.or(file.angle("sweep-start")?).unwrap_or(0.0),
                stop: args.sweep_stop.or(file.angle("sweep-stop")?).unwrap_or(PI),
                step: args.sweep_step.or(file.angle("sweep-step")?).unwrap_or(PI / 100.0),
            };
            sweep.validate()?;
            sweep.values()
        }
    };
    if deltas.is_empty() {
        return Err(SimError::InvalidConfig("deltas must not be empty".into()).into());
    }

    let curve = match model {
        ReferenceModel::Furry => furry_curve(pairs, &deltas, quadrature_steps),
        ReferenceModel::Qm => qm_curve(pairs, &deltas),
        ReferenceModel::Sawtooth => sawtooth_curve(pairs, &deltas),
    };

    let format = args.format.unwrap_or(match file.raw("format") {
        Some("json") => OutputFormat::Json,
        _ => OutputFormat::Csv,
    });
    match format {
        OutputFormat::Csv => {
            std::fs::write(&args.out, output::reference_csv(&curve, pairs))?;
        }
        OutputFormat::Json => {
            let record = ReferenceRecord {
                schema_version: output::SCHEMA_VERSION,
                command: "reference",
                model: model.name(),
                pairs,
                quadrature_steps: matches!(model, ReferenceModel::Furry).then_some(quadrature_steps),
                payload: &curve,
            };
            let mut text = serde_json::to_string_pretty(&record).expect("serializable");
            text.push('\n');
            std::fs::write(&args.out, text)?;
        }
    }
    Ok(())
}

/// Parses arguments, runs the selected command and returns the process exit
/// code. Clap itself exits 2 on unparsable flags and 0 on `--help`.
pub fn main_entry() -> i32 {
    let cli = Cli::parse();
    let outcome = match &cli.command {
        Command::Sweep(args) => cmd_sweep(args),
        Command::Chsh(args) => cmd_chsh(args),
        Command::Sphi(args) => cmd_sphi(args),
        Command::Reference(args) => cmd_reference(args),
    };
    match outcome {
        Ok(()) => 0,
        Err(CliError::Sim(e @ SimError::InvalidConfig(_))) => {
            eprintln!("error: {e}");
            2
        }
        Err(CliError::Sim(e @ SimError::NoData(_))) => {
            eprintln!("error: {e}");
            3
        }
        Err(CliError::Io(e)) => {
            eprintln!("error: {e}");
            1
        }
    }
}
