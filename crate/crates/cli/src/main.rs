//! `spin-kitten` command-line entry point.

use clap::Parser;
use num_complex::Complex64;
use spin_kitten::phasespace::Distribution;
use spin_kitten_cli::{run, Command, CliError, Overrides, Scenario, Space};
use std::process::ExitCode;

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
enum DistArg {
    P,
    W,
    Q,
}

/// Adiabatic spin-oscillator simulator.
///
/// Configuration precedence, lowest first: --preset (default fig1a), the
/// keys of the --scenario JSON file, then individual flags.
#[derive(Parser, Debug)]
#[command(name = "spin-kitten", version)]
struct Args {
    /// Subcommand to run.
    #[arg(value_enum)]
    command: Command,
    /// JSON scenario file; may be partial.
    #[arg(long)]
    scenario: Option<std::path::PathBuf>,
    /// Named parameter set (fig1a, fig1b, fig3a, fig3b, fig6a, fig6b, fig7).
    #[arg(long)]
    preset: Option<String>,
    /// Output directory.
    #[arg(long)]
    out: Option<String>,
    /// Worker threads (default: all cores).
    #[arg(long)]
    threads: Option<usize>,
    /// First time of the series grid (units of 1/ω).
    #[arg(long)]
    t_start: Option<f64>,
    /// Last time of the series grid.
    #[arg(long)]
    t_end: Option<f64>,
    /// Number of series samples.
    #[arg(long)]
    t_points: Option<usize>,
    /// Snapshot time of `evolve`, `distribution` and `tomogram`.
    #[arg(long)]
    time: Option<f64>,
    /// Distribution for `distribution`.
    #[arg(long, value_enum)]
    dist: Option<DistArg>,
    /// Phase space for `distribution`.
    #[arg(long, value_enum)]
    space: Option<Space>,
    /// Fixed β of a bipartite slice, as `re,im`.
    #[arg(long, allow_hyphen_values = true)]
    beta_slice: Option<String>,
    /// Starting photon cutoff.
    #[arg(long)]
    n_max: Option<usize>,
    /// Tail-mass tolerance of the cutoff.
    #[arg(long)]
    tail_tol: Option<f64>,
    /// Sphere output grid as `n_theta,n_phi`.
    #[arg(long)]
    sphere_grid: Option<String>,
    /// Tomogram grid as `n_b,n_g`.
    #[arg(long)]
    tomo_grid: Option<String>,
}

fn pair<T: std::str::FromStr>(flag: &str, s: &str) -> Result<(T, T), CliError> {
    let bad = || CliError::Config(format!("--{flag} expects two comma-separated numbers, got '{s}'"));
    let (a, b) = s.split_once(',').ok_or_else(bad)?;
    Ok((a.trim().parse().map_err(|_| bad())?, b.trim().parse().map_err(|_| bad())?))
}

fn execute(args: Args) -> Result<i32, CliError> {
    if let Some(n) = args.threads {
        rayon::ThreadPoolBuilder::new().num_threads(n).build_global().map_err(|e| CliError::Config(e.to_string()))?;
    }
    let text = match &args.scenario {
        Some(p) => Some(std::fs::read_to_string(p).map_err(|e| CliError::Config(format!("cannot read {}: {e}", p.display())))?),
        None => None,
    };
    let beta_slice = match &args.beta_slice {
        Some(s) => {
            let (re, im) = pair::<f64>("beta-slice", s)?;
            Some(Complex64::new(re, im))
        }
        None => None,
    };
    let overrides = Overrides {
        out_dir: args.out,
        t_start: args.t_start,
        t_end: args.t_end,
        t_points: args.t_points,
        snapshot: args.time,
        dist: args.dist.map(|d| match d {
            DistArg::P => Distribution::P,
            DistArg::W => Distribution::W,
            DistArg::Q => Distribution::Q,
        }),
        space: args.space,
        beta_slice,
        n_max: args.n_max,
        tail_tol: args.tail_tol,
        sphere_grid: args.sphere_grid.as_deref().map(|s| pair("sphere-grid", s)).transpose()?,
        tomo_grid: args.tomo_grid.as_deref().map(|s| pair("tomo-grid", s)).transpose()?,
    };
    let sc = Scenario::load(args.preset.as_deref(), text.as_deref())?.apply(&overrides)?;
    let report = run(args.command, &sc)?;
    for f in &report.files {
        println!("{}", f.display());
    }
    println!("{}", serde_json::to_string_pretty(&report.results).expect("results serialize"));
    Ok(report.exit_code)
}

fn main() -> ExitCode {
    match execute(Args::parse()) {
        Ok(code) => ExitCode::from(code as u8),
        Err(e) => {
            eprintln!("spin-kitten: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
