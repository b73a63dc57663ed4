//! Batch front end that runs subcommands over a layered scenario
//! configuration and writes deterministic CSV tables with JSON manifests.
//!
//! Exit codes: 0 success, 2 configuration error, 3 truncation failure,
//! 4 invariant violation.

pub mod commands;
pub mod output;
pub mod scenario;
pub mod selfcheck;

use std::path::{Path, PathBuf};
use std::time::Instant;

pub use scenario::{preset, Overrides, Scenario, Space, PRESETS};

/// Failures mapped onto process exit codes.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum CliError {
    /// Unreadable or invalid configuration, or unwritable output.
    #[error("configuration error: {0}")]
    Config(String),
    /// The photon cutoff could not meet the tail tolerance.
    #[error("truncation failure: {0}")]
    Truncation(String),
    /// A numerical invariant was violated.
    #[error("invariant violation: {0}")]
    Invariant(String),
}

impl CliError {
    /// Process exit code.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config(_) => 2,
            CliError::Truncation(_) => 3,
            CliError::Invariant(_) => 4,
        }
    }
}

impl From<spin_kitten::Error> for CliError {
    fn from(e: spin_kitten::Error) -> Self {
        match e {
            spin_kitten::Error::InvalidParameter(_) | spin_kitten::Error::Quadrature { .. } => CliError::Config(e.to_string()),
            spin_kitten::Error::Truncation { .. } => CliError::Truncation(e.to_string()),
            _ => CliError::Invariant(e.to_string()),
        }
    }
}

/// Subcommands of the front end.
#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum Command {
    /// Per-manifold energies.
    Spectrum,
    /// B coefficients and qudit density at the snapshot time.
    Evolve,
    /// Entanglement entropy over the time grid.
    EntropySeries,
    /// Spin correlation g₂ over the time grid.
    CorrelationSeries,
    /// Squeezing parameter ξ² over the time grid.
    SqueezingSeries,
    /// P, W or Q distribution at the snapshot time.
    Distribution,
    /// Tomogram grid at the snapshot time.
    Tomogram,
    /// Distance to the initial state around quasiperiod multiples.
    RevivalScan,
    /// Invariant suite.
    Selfcheck,
}

/// Summary of a completed run.
#[derive(Debug, Clone, PartialEq)]
pub struct RunReport {
    /// Written CSV files.
    pub files: Vec<PathBuf>,
    /// Exit code (0, or 4 when `selfcheck` found a violation).
    pub exit_code: i32,
    /// Manifest results of the run.
    pub results: serde_json::Value,
}

/// Execute `cmd` on `sc`, writing outputs under `sc.out_dir`.
pub fn run(cmd: Command, sc: &Scenario) -> Result<RunReport, CliError> {
    let start = Instant::now();
    let mut code = 0;
    let out = match cmd {
        Command::Spectrum => commands::spectrum(sc)?,
        Command::Evolve => commands::evolve(sc)?,
        Command::EntropySeries => commands::series(sc, commands::SeriesKind::Entropy)?,
        Command::CorrelationSeries => commands::series(sc, commands::SeriesKind::Correlation)?,
        Command::SqueezingSeries => commands::series(sc, commands::SeriesKind::Squeezing)?,
        Command::Distribution => commands::distribution(sc)?,
        Command::Tomogram => commands::tomogram(sc)?,
        Command::RevivalScan => commands::revival(sc)?,
        Command::Selfcheck => {
            let (out, ok) = selfcheck::selfcheck(sc)?;
            if !ok {
                code = 4;
            }
            out
        }
    };
    let files = output::write_run(Path::new(&sc.out_dir), sc, &out, start.elapsed().as_secs_f64())?;
    Ok(RunReport { files, exit_code: code, results: out.results })
}
