use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use ndsread_cli::config::linear_grid;
use ndsread_cli::point::{dump_debug, parse_occupation, parse_support};
use ndsread_cli::{
    curves_table, evaluate_point, gain_table, run_validation, CliError, Curve, Format, GainGrid,
    PartialConfig, PointRequest, Result, Scenario, StateKind, SweepConfig, ValidateOptions,
};

/// Error probabilities and bounds for discriminating two lossy optical channels.
#[derive(Parser, Debug)]
#[command(name = "ndsread", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Error-probability curves versus signal energy.
    ///
    /// Number-state columns are only defined at integer energies; other grid
    /// points leave those cells empty.
    Curves(CurvesArgs),
    /// Number-state over coherent-state exponent gain on an (R0, R1) grid.
    GainSurface(GainArgs),
    /// Randomized checks against the dense oracle; exits 1 on any violation.
    Validate(ValidateArgs),
    /// Full report for one probe and channel pair, as JSON.
    Point(PointArgs),
}

#[derive(Args, Debug)]
struct OutArgs {
    /// Output file (stdout when absent).
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct CurvesArgs {
    /// JSON file with any SweepConfig fields; flags override it.
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    scenario: Option<Scenario>,
    #[arg(long)]
    r0: Option<f64>,
    #[arg(long)]
    r1: Option<f64>,
    #[arg(long)]
    ns_min: Option<f64>,
    #[arg(long)]
    ns_max: Option<f64>,
    #[arg(long)]
    ns_steps: Option<usize>,
    /// Number of two-mode squeezed vacuum pairs.
    #[arg(long)]
    modes: Option<usize>,
    /// Comma-separated curve names (default: all).
    #[arg(long, value_delimiter = ',')]
    outputs: Option<Vec<Curve>>,
    #[arg(long)]
    format: Option<Format>,
    #[arg(long)]
    seed: Option<u64>,
    #[command(flatten)]
    out: OutArgs,
}

#[derive(Args, Debug)]
struct GainArgs {
    #[arg(long, default_value_t = 0.4)]
    r_min: f64,
    #[arg(long, default_value_t = 0.99)]
    r_max: f64,
    #[arg(long, default_value_t = 60)]
    r_steps: usize,
    #[arg(long, default_value = "csv")]
    format: Format,
    #[command(flatten)]
    out: OutArgs,
}

#[derive(Args, Debug)]
struct ValidateArgs {
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Number of random instances.
    #[arg(long, default_value_t = 200)]
    budget: usize,
    #[arg(long, default_value_t = 1e-12)]
    tail_tol: f64,
    /// Perturb the largest cross term by 1e-6; the run must then fail.
    #[arg(long)]
    inject_fault: bool,
    #[command(flatten)]
    out: OutArgs,
}

#[derive(Args, Debug)]
struct PointArgs {
    #[arg(long)]
    state: StateKind,
    #[arg(long)]
    r0: f64,
    #[arg(long)]
    r1: f64,
    #[arg(long, default_value_t = 0.0)]
    theta0: f64,
    #[arg(long, default_value_t = 0.0)]
    theta1: f64,
    #[arg(long, default_value_t = 0.5)]
    prior0: f64,
    /// Mean signal energy (epr, coherent).
    #[arg(long)]
    ns: Option<f64>,
    /// Signal modes (vacuum) or pairs (epr).
    #[arg(long)]
    modes: Option<usize>,
    /// Per-mode photon numbers for fock, e.g. `2,0`.
    #[arg(long)]
    occupation: Option<String>,
    /// Sparse support, e.g. `1,0:0.5;0,2:0.5`.
    #[arg(long)]
    support: Option<String>,
    #[arg(long, default_value_t = 1e-12)]
    tail_tol: f64,
    /// Directory for dense oracle output states.
    #[arg(long)]
    dump_debug: Option<PathBuf>,
    #[command(flatten)]
    out: OutArgs,
}

fn sink(out: &OutArgs) -> Result<Box<dyn Write>> {
    Ok(match &out.out {
        Some(p) => Box::new(BufWriter::new(File::create(p)?)),
        None => Box::new(BufWriter::new(io::stdout().lock())),
    })
}

fn write_json<T: serde::Serialize>(out: &OutArgs, value: &T) -> Result<()> {
    let mut w = sink(out)?;
    serde_json::to_writer_pretty(&mut w, value)?;
    writeln!(w)?;
    w.flush()?;
    Ok(())
}

fn curves(a: CurvesArgs) -> Result<()> {
    let file = match &a.config {
        Some(p) => PartialConfig::from_file(p)?,
        None => PartialConfig::default(),
    };
    let ns_grid = match (a.ns_min, a.ns_max, a.ns_steps) {
        (None, None, None) => None,
        (min, max, steps) => Some(linear_grid(
            min.unwrap_or(1.0),
            max.unwrap_or(100.0),
            steps.unwrap_or(100),
        )?),
    };
    let flags = PartialConfig {
        scenario: a.scenario,
        r0: a.r0,
        r1: a.r1,
        ns_grid,
        modes: a.modes,
        outputs: a.outputs,
        format: a.format,
        seed: a.seed,
    };
    let cfg = SweepConfig::from_partial(file.overlay(flags))?;
    let table = curves_table(&cfg)?;
    let mut w = sink(&a.out)?;
    table.write(cfg.format, &mut w)?;
    w.flush()?;
    Ok(())
}

fn gain_surface(a: GainArgs) -> Result<()> {
    let table = gain_table(&GainGrid {
        r_min: a.r_min,
        r_max: a.r_max,
        steps: a.r_steps,
    })?;
    let mut w = sink(&a.out)?;
    table.write(a.format, &mut w)?;
    w.flush()?;
    Ok(())
}

fn validate(a: ValidateArgs) -> Result<()> {
    let report = run_validation(&ValidateOptions {
        seed: a.seed,
        budget: a.budget,
        tail_tolerance: a.tail_tol,
        inject_fault: a.inject_fault,
    });
    write_json(&a.out, &report)?;
    if report.passed {
        Ok(())
    } else {
        Err(CliError::Violation(format!(
            "{} violation(s); see the report",
            report.violations.len()
        )))
    }
}

fn point(a: PointArgs) -> Result<()> {
    let req = PointRequest {
        state: a.state,
        occupation: a.occupation.as_deref().map(parse_occupation).transpose()?,
        support: a.support.as_deref().map(parse_support).transpose()?,
        ns: a.ns,
        modes: a.modes,
        r0: a.r0,
        r1: a.r1,
        theta0: a.theta0,
        theta1: a.theta1,
        prior0: a.prior0,
        tail_tolerance: a.tail_tol,
    };
    let out = evaluate_point(&req)?;
    if let Some(dir) = &a.dump_debug {
        dump_debug(&req, dir)?;
    }
    write_json(&a.out, &out)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Curves(a) => curves(a),
        Command::GainSurface(a) => gain_surface(a),
        Command::Validate(a) => validate(a),
        Command::Point(a) => point(a),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("ndsread: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
