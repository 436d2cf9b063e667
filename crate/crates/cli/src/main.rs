//! `fracml`: stability verdicts, region geometry, simulation and parameter
//! sweeps for fractional coupled map lattices.
//!
//! Exit status: 0 stable/decaying (or success for non-verdict commands),
//! 1 unstable/growing/diverged, 2 marginal/inconclusive, 3 usage or input
//! error, 4 runtime failure.

mod commands;
mod config;

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use fracml::dynamics::Axis;

use config::{parse_axis, RunConfig};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Exit {
    Stable = 0,
    Unstable = 1,
    Undecided = 2,
}

#[derive(Debug)]
pub struct CliError {
    code: u8,
    message: String,
}

impl CliError {
    pub fn usage(message: impl Into<String>) -> Self {
        Self { code: 3, message: message.into() }
    }

    pub fn runtime(message: impl Into<String>) -> Self {
        Self { code: 4, message: message.into() }
    }
}

#[derive(Parser, Debug)]
#[command(name = "fracml", version, about = "Stability and simulation of fractional coupled map lattices")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Eigenvalues and stability verdict of a coupling.
    Classify(Params),
    /// Samples of the boundary curve β, or of a cardioid γ_j with --gamma.
    Boundary(Params),
    /// Vertices or boundary pieces of a stable region in the coupling plane.
    Region(Params),
    /// Direct simulation; trajectory CSV plus an empirical verdict.
    Simulate(Params),
    /// Stability map over a two-parameter grid.
    Sweep(Params),
}

#[derive(Args, Debug, Default)]
#[command(allow_negative_numbers = true)]
struct Params {
    /// Fractional order, 0 < alpha <= 1.
    #[arg(long)]
    alpha: Option<f64>,
    /// Lattice size.
    #[arg(long)]
    n: Option<usize>,
    /// Left-neighbour weight.
    #[arg(long)]
    a0: Option<f64>,
    /// Self weight.
    #[arg(long)]
    a1: Option<f64>,
    /// Right-neighbour weight.
    #[arg(long)]
    a2: Option<f64>,
    #[arg(long)]
    mu: Option<f64>,
    #[arg(long)]
    delta: Option<f64>,
    #[arg(long)]
    eps: Option<f64>,
    /// Coupling family or region kind; see the README for the values each command accepts.
    #[arg(long)]
    mode: Option<String>,
    /// Boundary sample count.
    #[arg(long)]
    samples: Option<usize>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    horizon: Option<usize>,
    /// Output path; standard output when absent.
    #[arg(long)]
    out: Option<String>,
    /// Square coupling matrix as CSV.
    #[arg(long)]
    matrix: Option<String>,
    /// JSON run configuration; flags override its values.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Add simulated verdicts to a sweep.
    #[arg(long)]
    simulate: bool,
    /// Sample γ_j instead of β (γ_∞ when --n is absent).
    #[arg(long)]
    gamma: bool,
    /// Cardioid index; defaults to the innermost one.
    #[arg(long)]
    j: Option<usize>,
    /// Starting point for the equilibrium search.
    #[arg(long)]
    guess: Option<f64>,
    /// Half-width of the random initial perturbation.
    #[arg(long)]
    amplitude: Option<f64>,
    /// Centre of the initial perturbation; defaults to --target.
    #[arg(long)]
    base: Option<f64>,
    /// Homogeneous state the empirical verdict measures deviations from.
    #[arg(long)]
    target: Option<f64>,
    /// Window length for the empirical verdict.
    #[arg(long)]
    window: Option<usize>,
    /// First grid axis as lo:hi:count.
    #[arg(long, value_parser = parse_axis)]
    p1: Option<Axis>,
    /// Second grid axis as lo:hi:count.
    #[arg(long, value_parser = parse_axis)]
    p2: Option<Axis>,
}

impl Params {
    fn into_config(self) -> Result<RunConfig, CliError> {
        let mut cfg = match &self.config {
            Some(path) => RunConfig::load(path)?,
            None => RunConfig::default(),
        };
        cfg.overlay(RunConfig {
            alpha: self.alpha,
            n: self.n,
            a0: self.a0,
            a1: self.a1,
            a2: self.a2,
            mu: self.mu,
            delta: self.delta,
            eps: self.eps,
            mode: self.mode,
            samples: self.samples,
            seed: self.seed,
            horizon: self.horizon,
            out: self.out,
            matrix: self.matrix,
            simulate: self.simulate.then_some(true),
            gamma: self.gamma.then_some(true),
            j: self.j,
            guess: self.guess,
            amplitude: self.amplitude,
            base: self.base,
            target: self.target,
            window: self.window,
            p1: self.p1,
            p2: self.p2,
            ..Default::default()
        });
        Ok(cfg)
    }
}

fn run(cli: Cli) -> Result<Exit, CliError> {
    let (params, which) = match cli.command {
        Command::Classify(p) => (p, "classify"),
        Command::Boundary(p) => (p, "boundary"),
        Command::Region(p) => (p, "region"),
        Command::Simulate(p) => (p, "simulate"),
        Command::Sweep(p) => (p, "sweep"),
    };
    let cfg = params.into_config()?;
    let mut out: Box<dyn Write> = match &cfg.out {
        Some(path) => Box::new(BufWriter::new(
            File::create(path).map_err(|e| CliError::usage(format!("cannot create {path}: {e}")))?,
        )),
        None => Box::new(BufWriter::new(io::stdout().lock())),
    };
    let mut log = io::stderr().lock();
    let exit = match which {
        "classify" => commands::classify(&cfg, &mut out, &mut log),
        "boundary" => commands::boundary(&cfg, &mut out),
        "region" => commands::region(&cfg, &mut out),
        "simulate" => commands::simulate_cmd(&cfg, &mut out, &mut log),
        _ => commands::sweep_cmd(&cfg, &mut out, &mut log),
    }?;
    out.flush().map_err(|e| CliError::runtime(format!("write failed: {e}")))?;
    Ok(exit)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 3 } else { 0 });
        }
    };
    match run(cli) {
        Ok(exit) => ExitCode::from(exit as u8),
        Err(e) => {
            eprintln!("error: {}", e.message);
            ExitCode::from(e.code)
        }
    }
}
