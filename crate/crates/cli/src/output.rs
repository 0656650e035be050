//! Output files: number formatting, CSV tables, JSON dumps and the run
//! manifest.

use std::fs;
use std::path::{Path, PathBuf};

use qpath_core::entangle::EprRecord;
use qpath_core::pathint::AmplitudeField;
use qpath_core::StateVector;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::circuit::Shot;
use crate::error::{CliError, Result};

/// Environment variable that overrides the default output directory.
pub const OUT_DIR_ENV: &str = "QPATH_OUT_DIR";
pub const DEFAULT_OUT_DIR: &str = "qpath-out";

/// Amplitude components: 17 significant digits, enough to round-trip.
pub fn amplitude(x: f64) -> String {
    format!("{x:.16e}")
}

/// Derived real quantities: 12 significant digits.
pub fn derived(x: f64) -> String {
    format!("{x:.11e}")
}

/// `--out-dir` if given, else `$QPATH_OUT_DIR`, else `./qpath-out`.
pub fn resolve_out_dir(flag: Option<&Path>) -> PathBuf {
    if let Some(p) = flag {
        return p.to_path_buf();
    }
    match std::env::var_os(OUT_DIR_ENV) {
        Some(v) if !v.is_empty() => PathBuf::from(v),
        _ => PathBuf::from(DEFAULT_OUT_DIR),
    }
}

pub fn ensure_dir(dir: &Path) -> Result<()> {
    fs::create_dir_all(dir).map_err(|e| CliError::io(dir, e))
}

pub fn sha256_hex(bytes: &[u8]) -> String {
    hex::encode(Sha256::digest(bytes))
}

fn csv_writer(path: &Path) -> Result<csv::Writer<fs::File>> {
    let file = fs::File::create(path).map_err(|e| CliError::io(path, e))?;
    Ok(csv::Writer::from_writer(file))
}

/// `shot_index, eigenvalue, basis_string, seed`.
pub fn write_shots(path: &Path, shots: &[Shot], seed: u64) -> Result<()> {
    let mut w = csv_writer(path)?;
    w.write_record(["shot_index", "eigenvalue", "basis_string", "seed"])?;
    let seed = seed.to_string();
    for (i, s) in shots.iter().enumerate() {
        w.write_record([
            i.to_string(),
            format!("{}", s.eigenvalue),
            s.bits.clone(),
            seed.clone(),
        ])?;
    }
    w.flush().map_err(|e| CliError::io(path, e))
}

/// `angle_a, angle_b, n_pp, n_pm, n_mp, n_mm, empirical_correlation, seed`.
pub fn write_epr(path: &Path, records: &[EprRecord], seed: u64) -> Result<()> {
    let mut w = csv_writer(path)?;
    w.write_record([
        "angle_a",
        "angle_b",
        "n_pp",
        "n_pm",
        "n_mp",
        "n_mm",
        "empirical_correlation",
        "seed",
    ])?;
    for r in records {
        w.write_record([
            derived(r.angle_a),
            derived(r.angle_b),
            r.n_pp().to_string(),
            r.n_pm().to_string(),
            r.n_mp().to_string(),
            r.n_mm().to_string(),
            derived(r.empirical_correlation()),
            seed.to_string(),
        ])?;
    }
    w.flush().map_err(|e| CliError::io(path, e))
}

/// `slice, site, re, im, probability, seed`, where `probability` is the
/// site's share of `Σ|ψ|²` on that slice.
pub fn write_fields(path: &Path, slices: &[(usize, &AmplitudeField)], seed: u64) -> Result<()> {
    let mut w = csv_writer(path)?;
    w.write_record(["slice", "site", "re", "im", "probability", "seed"])?;
    for &(slice, field) in slices {
        let intensities = field.intensities();
        let total: f64 = intensities.iter().sum();
        for (site, (v, p)) in field.values().iter().zip(&intensities).enumerate() {
            let share = if total > 0.0 { p / total } else { 0.0 };
            w.write_record([
                slice.to_string(),
                site.to_string(),
                amplitude(v.re),
                amplitude(v.im),
                derived(share),
                seed.to_string(),
            ])?;
        }
    }
    w.flush().map_err(|e| CliError::io(path, e))
}

/// JSON state dump: `n_qubits` plus `[re, im]` pairs in index order.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StateDump {
    pub n_qubits: usize,
    pub amplitudes: Vec<[f64; 2]>,
}

impl From<&StateVector> for StateDump {
    fn from(s: &StateVector) -> Self {
        StateDump {
            n_qubits: s.n_qubits(),
            amplitudes: s.amplitudes().iter().map(|a| [a.re, a.im]).collect(),
        }
    }
}

pub fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<()> {
    let mut text = serde_json::to_string_pretty(value).map_err(|e| CliError::Json {
        path: path.into(),
        source: e,
    })?;
    text.push('\n');
    fs::write(path, text).map_err(|e| CliError::io(path, e))
}

/// Everything needed to reproduce a run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunManifest {
    pub command: String,
    /// Command-line arguments after the subcommand.
    pub arguments: Vec<String>,
    pub input_file: Option<String>,
    pub input_sha256: Option<String>,
    pub seed: Option<u64>,
    pub constants_version: String,
    pub outputs: Vec<String>,
    pub tool_version: String,
}

impl RunManifest {
    pub fn new(command: &str, arguments: Vec<String>) -> Self {
        RunManifest {
            command: command.into(),
            arguments,
            input_file: None,
            input_sha256: None,
            seed: None,
            constants_version: qpath_core::infolimits::CONSTANTS_VERSION.into(),
            outputs: Vec::new(),
            tool_version: env!("CARGO_PKG_VERSION").into(),
        }
    }

    pub fn with_input(mut self, path: &Path, bytes: &[u8]) -> Self {
        self.input_file = Some(path.display().to_string());
        self.input_sha256 = Some(sha256_hex(bytes));
        self
    }
}

pub const MANIFEST_NAME: &str = "manifest.json";
