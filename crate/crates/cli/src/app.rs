//! Subcommands.

use std::f64::consts::PI;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use qpath_core::entangle::{epr_sample, epr_shots, EprRecord};
use qpath_core::infolimits::{self, CODATA_2018};
use qpath_core::pathint::propagate_history;
use qpath_core::Rng;
use serde::Serialize;

use crate::circuit::parse_circuit;
use crate::descriptor::{Experiment, ScreenSpec};
use crate::error::{CliError, Result};
use crate::output::{self, RunManifest, StateDump, MANIFEST_NAME};

#[derive(Debug, Parser)]
#[command(
    name = "qpath",
    version,
    about = "Quantum circuits, EPR sampling, lattice path integrals and physical limits"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Run a circuit file and record its measurement shots.
    Circuit(CircuitArgs),
    /// Sample singlet spin correlations at chosen analyser angles.
    Epr(EprArgs),
    /// Two-slit interference on a path-integral lattice.
    Doubleslit(FieldArgs),
    /// Propagate a point source or wave packet across a lattice.
    Propagator(PropagatorArgs),
    /// Print horizon, thermodynamic and channel limits.
    Limits(LimitsArgs),
}

#[derive(Debug, Args)]
pub struct OutArgs {
    /// Output directory (overrides $QPATH_OUT_DIR; default ./qpath-out).
    #[arg(long)]
    pub out_dir: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct CircuitArgs {
    /// Circuit file.
    pub file: PathBuf,
    #[command(flatten)]
    pub out: OutArgs,
}

#[derive(Debug, Args)]
pub struct EprArgs {
    /// Angle(s) of analyser A in the x–z plane, radians (comma-separated).
    #[arg(
        long,
        value_delimiter = ',',
        required = true,
        allow_hyphen_values = true
    )]
    pub angle_a: Vec<f64>,
    /// Angle(s) of analyser B, radians (comma-separated).
    #[arg(
        long,
        value_delimiter = ',',
        required = true,
        allow_hyphen_values = true
    )]
    pub angle_b: Vec<f64>,
    /// Shots per angle pair (per angle_b when --delayed).
    #[arg(long)]
    pub shots: u64,
    #[arg(long)]
    pub seed: u64,
    /// Choose A's angle per shot, cycling through --angle-a after each pair
    /// is prepared, instead of running every pair separately.
    #[arg(long)]
    pub delayed: bool,
    #[command(flatten)]
    pub out: OutArgs,
}

#[derive(Debug, Args)]
pub struct FieldArgs {
    /// Experiment descriptor (JSON). Defaults to the built-in reference.
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// Recorded in outputs; the computation itself is deterministic.
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[command(flatten)]
    pub out: OutArgs,
}

#[derive(Debug, Args)]
pub struct PropagatorArgs {
    /// Experiment descriptor (JSON); required unless --sites etc. are given.
    #[arg(long, conflicts_with_all = ["sites", "slices", "dx", "dt", "source"])]
    pub config: Option<PathBuf>,
    #[arg(long, requires_all = ["slices", "dx", "dt", "source"])]
    pub sites: Option<usize>,
    #[arg(long)]
    pub slices: Option<usize>,
    #[arg(long)]
    pub dx: Option<f64>,
    #[arg(long)]
    pub dt: Option<f64>,
    #[arg(long)]
    pub source: Option<usize>,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[command(flatten)]
    pub out: OutArgs,
}

#[derive(Debug, Args)]
pub struct LimitsArgs {
    /// Mass in kg for the horizon quantities.
    #[arg(long)]
    pub mass: Option<f64>,
    /// Temperature in K for the Landauer bound.
    #[arg(long)]
    pub temperature: Option<f64>,
    /// Bits erased at --temperature.
    #[arg(long, default_value_t = 1.0)]
    pub bits: f64,
    /// Channel bandwidth in Hz.
    #[arg(long, requires = "snr")]
    pub bandwidth: Option<f64>,
    /// Signal-to-noise power ratio for the channel capacity.
    #[arg(long, requires = "bandwidth")]
    pub snr: Option<f64>,
    /// Emit JSON instead of a text table.
    #[arg(long)]
    pub json: bool,
    #[command(flatten)]
    pub out: OutArgs,
}

/// Files written by a run, with the manifest last.
#[derive(Debug, Clone, PartialEq)]
pub struct Report {
    pub out_dir: PathBuf,
    pub outputs: Vec<PathBuf>,
    /// Human-readable summary for stdout.
    pub summary: String,
}

fn read(path: &Path) -> Result<Vec<u8>> {
    fs::read(path).map_err(|e| CliError::io(path, e))
}

fn finish(
    dir: PathBuf,
    mut manifest: RunManifest,
    mut outputs: Vec<PathBuf>,
    summary: String,
) -> Result<Report> {
    manifest.outputs = outputs
        .iter()
        .map(|p| {
            p.file_name()
                .map(|n| n.to_string_lossy().into_owned())
                .unwrap_or_default()
        })
        .collect();
    let path = dir.join(MANIFEST_NAME);
    output::write_json(&path, &manifest)?;
    outputs.push(path);
    Ok(Report {
        out_dir: dir,
        outputs,
        summary,
    })
}

/// Runs one parsed command. `arguments` is recorded in the manifest.
pub fn run(cli: &Cli, arguments: Vec<String>) -> Result<Report> {
    match &cli.command {
        Command::Circuit(a) => circuit(a, arguments),
        Command::Epr(a) => epr(a, arguments),
        Command::Doubleslit(a) => doubleslit(a, arguments),
        Command::Propagator(a) => propagator(a, arguments),
        Command::Limits(a) => limits(a, arguments),
    }
}

fn circuit(args: &CircuitArgs, arguments: Vec<String>) -> Result<Report> {
    let bytes = read(&args.file)?;
    let text = String::from_utf8(bytes.clone())
        .map_err(|_| CliError::Invalid(format!("{}: not UTF-8 text", args.file.display())))?;
    let program = parse_circuit(&text)?;
    let state = program.final_state()?;
    let dir = output::resolve_out_dir(args.out.out_dir.as_deref());
    output::ensure_dir(&dir)?;
    let mut manifest = RunManifest::new("circuit", arguments).with_input(&args.file, &bytes);
    let state_path = dir.join("state.json");
    output::write_json(&state_path, &StateDump::from(&state))?;
    let mut outputs = vec![state_path];
    let mut summary = format!(
        "{} qubits, {} gates",
        program.n_qubits,
        program.instructions.len()
    );
    if let Some(m) = &program.measurement {
        let shots = program.sample(&state)?;
        let path = dir.join("shots.csv");
        output::write_shots(&path, &shots, m.seed)?;
        outputs.push(path);
        manifest.seed = Some(m.seed);
        let plus = shots.iter().filter(|s| s.eigenvalue > 0.0).count();
        summary += &format!(", {} shots ({} with eigenvalue +1)", shots.len(), plus);
    }
    finish(dir, manifest, outputs, summary)
}

fn check_angles(angles: &[f64]) -> Result<()> {
    if angles.iter().any(|a| !a.is_finite()) {
        return Err(CliError::Invalid("angles must be finite".into()));
    }
    Ok(())
}

fn epr(args: &EprArgs, arguments: Vec<String>) -> Result<Report> {
    check_angles(&args.angle_a)?;
    check_angles(&args.angle_b)?;
    if args.shots == 0 {
        return Err(CliError::Invalid("--shots must be at least 1".into()));
    }
    if args.delayed && (args.shots as usize) < args.angle_a.len() {
        return Err(CliError::Invalid(
            "--delayed needs at least one shot per --angle-a value".into(),
        ));
    }
    let root = Rng::new(args.seed);
    let mut records = Vec::new();
    if args.delayed {
        for (kb, &b) in args.angle_b.iter().enumerate() {
            let schedule: Vec<f64> = (0..args.shots as usize)
                .map(|k| args.angle_a[k % args.angle_a.len()])
                .collect();
            let shots = epr_shots(&schedule, b, &mut root.substream(kb as u64));
            for &a in &args.angle_a {
                // A repeated --angle-a value shares one tally.
                if records
                    .iter()
                    .any(|r: &EprRecord| r.angle_a == a && r.angle_b == b)
                {
                    continue;
                }
                let mut counts = [[0u64; 2]; 2];
                let mut n = 0;
                for s in shots.iter().filter(|s| s.angle_a == a) {
                    counts[usize::from(s.outcome_a < 0)][usize::from(s.outcome_b < 0)] += 1;
                    n += 1;
                }
                records.push(EprRecord {
                    angle_a: a,
                    angle_b: b,
                    shots: n,
                    counts,
                });
            }
        }
    } else {
        let mut stream = 0u64;
        for &b in &args.angle_b {
            for &a in &args.angle_a {
                records.push(epr_sample(a, b, args.shots, &mut root.substream(stream))?);
                stream += 1;
            }
        }
    }
    let dir = output::resolve_out_dir(args.out.out_dir.as_deref());
    output::ensure_dir(&dir)?;
    let path = dir.join("epr.csv");
    output::write_epr(&path, &records, args.seed)?;
    let mut manifest = RunManifest::new("epr", arguments);
    manifest.seed = Some(args.seed);
    let summary = records
        .iter()
        .map(|r| {
            format!(
                "a={:.6} b={:.6} E={:+.6} (theory {:+.6})",
                r.angle_a,
                r.angle_b,
                r.empirical_correlation(),
                -(r.angle_a - r.angle_b).cos()
            )
        })
        .collect::<Vec<_>>()
        .join("\n");
    finish(dir, manifest, vec![path], summary)
}

/// The two-slit reference: 401 sites, two slices of `dt = 400/π`, source at
/// 200, slits at 190 and 210 on slice 1.
pub fn reference_double_slit() -> Experiment {
    Experiment {
        n_sites: 401,
        n_slices: 2,
        dx: 1.0,
        dt: 400.0 / PI,
        mass: 1.0,
        hbar: 1.0,
        charge: 0.0,
        light_speed: 1.0,
        boundary: None,
        potential: None,
        vector_potential: None,
        source: Some(200),
        packet: None,
        screen: Some(ScreenSpec {
            slice: 1,
            sites: vec![190, 210],
        }),
        flux: 0.0,
        output_slices: None,
    }
}

fn load_experiment(path: &Path) -> Result<(Experiment, Vec<u8>)> {
    let bytes = read(path)?;
    let text = String::from_utf8(bytes.clone())
        .map_err(|_| CliError::Invalid(format!("{}: not UTF-8 text", path.display())))?;
    Ok((Experiment::from_json(path, &text)?, bytes))
}

/// Runs `experiment` and writes the requested slices; returns the final
/// slice's intensities for the summary.
fn run_experiment(
    command: &str,
    experiment: &Experiment,
    manifest: RunManifest,
    seed: u64,
    out: &OutArgs,
) -> Result<(Report, Vec<f64>)> {
    let lattice = experiment.lattice()?;
    let initial = experiment.initial_field(&lattice)?;
    let screens = experiment.screens(&lattice)?;
    let slices = experiment.output_slices()?;
    let history = propagate_history(&lattice, &initial, &screens)?;
    let dir = output::resolve_out_dir(out.out_dir.as_deref());
    output::ensure_dir(&dir)?;
    let path = dir.join(format!("{command}.csv"));
    let chosen: Vec<(usize, &_)> = slices.iter().map(|&s| (s, &history[s])).collect();
    output::write_fields(&path, &chosen, seed)?;
    let last = history.last().expect("at least one slice").intensities();
    let mut manifest = manifest;
    manifest.seed = Some(seed);
    let report = finish(dir, manifest, vec![path], String::new())?;
    Ok((report, last))
}

/// Smallest interior intensity relative to the largest, over the sites
/// strictly between the outermost maxima.
pub fn interior_contrast(intensity: &[f64]) -> Option<f64> {
    let max = intensity.iter().copied().fold(0.0, f64::max);
    if max <= 0.0 {
        return None;
    }
    let peaks: Vec<usize> = (1..intensity.len() - 1)
        .filter(|&i| {
            intensity[i] >= intensity[i - 1]
                && intensity[i] >= intensity[i + 1]
                && intensity[i] > 0.5 * max
        })
        .collect();
    let (&first, &last) = (peaks.first()?, peaks.last()?);
    if last <= first + 1 {
        return None;
    }
    let min = intensity[first + 1..last]
        .iter()
        .copied()
        .fold(f64::INFINITY, f64::min);
    Some(min / max)
}

fn doubleslit(args: &FieldArgs, arguments: Vec<String>) -> Result<Report> {
    let mut manifest = RunManifest::new("doubleslit", arguments);
    let experiment = match &args.config {
        Some(path) => {
            let (e, bytes) = load_experiment(path)?;
            manifest = manifest.with_input(path, &bytes);
            e
        }
        None => reference_double_slit(),
    };
    if experiment.screen.is_none() {
        return Err(CliError::Invalid(
            "double-slit descriptor needs a 'screen'".into(),
        ));
    }
    let (mut report, last) =
        run_experiment("doubleslit", &experiment, manifest, args.seed, &args.out)?;
    report.summary = match interior_contrast(&last) {
        Some(c) => format!(
            "interior minimum / maximum intensity = {}",
            output::derived(c)
        ),
        None => "no interior minimum between intensity peaks".into(),
    };
    Ok(report)
}

fn propagator(args: &PropagatorArgs, arguments: Vec<String>) -> Result<Report> {
    let mut manifest = RunManifest::new("propagator", arguments);
    let experiment = match (&args.config, args.sites) {
        (Some(path), _) => {
            let (e, bytes) = load_experiment(path)?;
            manifest = manifest.with_input(path, &bytes);
            e
        }
        (None, Some(n_sites)) => Experiment {
            n_sites,
            n_slices: args.slices.expect("required by clap"),
            dx: args.dx.expect("required by clap"),
            dt: args.dt.expect("required by clap"),
            source: args.source,
            screen: None,
            ..reference_double_slit()
        },
        (None, None) => {
            return Err(CliError::Invalid(
                "give --config or --sites/--slices/--dx/--dt/--source".into(),
            ))
        }
    };
    let (mut report, last) =
        run_experiment("propagator", &experiment, manifest, args.seed, &args.out)?;
    let total: f64 = last.iter().sum();
    report.summary = format!(
        "{} sites, final-slice Σ|ψ|² = {}",
        last.len(),
        output::derived(total)
    );
    Ok(report)
}

/// One line of the limits table.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LimitRow {
    pub quantity: String,
    pub value: f64,
    pub unit: String,
}

pub fn limit_rows(args: &LimitsArgs) -> Result<Vec<LimitRow>> {
    let k = &CODATA_2018;
    let mut rows = Vec::new();
    let mut push = |quantity: &str, value: f64, unit: &str| {
        rows.push(LimitRow {
            quantity: quantity.into(),
            value,
            unit: unit.into(),
        })
    };
    if let Some(m) = args.mass {
        push("mass", m, "kg");
        push("schwarzschild_radius", k.schwarzschild_radius(m)?, "m");
        push("hawking_temperature", k.hawking_temperature(m)?, "K");
        push("evaporation_rate", k.evaporation_rate(m)?, "kg/s");
        push("evaporation_lifetime", k.evaporation_lifetime(m)?, "s");
        let s = k.bh_entropy(m)?;
        push("entropy_over_k", s.over_k, "1");
        push("entropy_bits", s.bits, "bit");
        push("collapse_density", k.collapse_density(m)?, "kg/m^3");
    }
    if let Some(t) = args.temperature {
        push("temperature", t, "K");
        push("landauer_heat", k.landauer_heat(t, args.bits)?, "J");
    }
    if let (Some(b), Some(snr)) = (args.bandwidth, args.snr) {
        push("bandwidth", b, "Hz");
        push("signal_to_noise", snr, "1");
        push(
            "channel_capacity",
            infolimits::channel_capacity(b, snr, 1.0)?,
            "bit/s",
        );
    }
    push("planck_length", k.planck_length(), "m");
    Ok(rows)
}

fn limits(args: &LimitsArgs, arguments: Vec<String>) -> Result<Report> {
    let rows = limit_rows(args)?;
    let summary = if args.json {
        serde_json::to_string_pretty(&rows).expect("rows serialize")
    } else {
        let width = rows.iter().map(|r| r.quantity.len()).max().unwrap_or(0);
        rows.iter()
            .map(|r| {
                format!(
                    "{:<width$}  {:>19}  {}",
                    r.quantity,
                    output::derived(r.value),
                    r.unit
                )
            })
            .collect::<Vec<_>>()
            .join("\n")
    };
    let dir = output::resolve_out_dir(args.out.out_dir.as_deref());
    output::ensure_dir(&dir)?;
    let path = dir.join("limits.json");
    output::write_json(&path, &rows)?;
    finish(
        dir,
        RunManifest::new("limits", arguments),
        vec![path],
        summary,
    )
}

/// Prints the summary to `out`.
pub fn print_report(report: &Report, out: &mut impl Write) -> std::io::Result<()> {
    if !report.summary.is_empty() {
        writeln!(out, "{}", report.summary)?;
    }
    Ok(())
}
