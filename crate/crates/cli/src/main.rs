//! `anyonsim`: run fermionic-anyon circuits, scan entanglement measures and
//! self-check the simulator.

mod commands;
mod engines;
mod error;
mod format;
mod grid;
mod input;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use crate::commands::{CheckArgs, RunArgs, ScanArgs};
use crate::engines::EngineChoice;
use crate::error::{CliError, CliResult};
use crate::grid::{parse_angle, Grid};
use crate::input::Inputs;

#[derive(Parser)]
#[command(name = "anyonsim", version, about = "Fermionic-anyon linear optics and particle entanglement")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct InputArgs {
    /// Circuit JSON file or inline JSON.
    #[arg(long)]
    circuit: Option<String>,
    /// Initial state JSON file or inline JSON.
    #[arg(long, conflicts_with = "preset")]
    state: Option<String>,
    /// Named initial state: appendixG, two-slater, fock1100. Default appendixG.
    #[arg(long)]
    preset: Option<String>,
    #[arg(long, value_enum, default_value = "dense")]
    engine: EngineChoice,
    /// Largest allowed disagreement between engines under `--engine both`.
    #[arg(long, default_value_t = 1e-10)]
    tol: f64,
    /// Output file; standard output when omitted.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct PointArgs {
    /// Statistical parameter for presets; accepts forms like `pi/3`.
    #[arg(long, value_parser = parse_angle)]
    phi: Option<f64>,
    /// Beam-splitter angle of the appendixG preset.
    #[arg(long, value_parser = parse_angle, default_value = "pi/4")]
    theta: f64,
}

#[derive(Subcommand)]
enum Command {
    /// Evolve the initial state and print its amplitudes as CSV.
    Run {
        #[command(flatten)]
        input: InputArgs,
        #[command(flatten)]
        point: PointArgs,
    },
    /// Entropies and Slater rank of a two-particle output over a (φ, θ) grid.
    EntropyScan {
        #[command(flatten)]
        input: InputArgs,
        /// φ grid `start:end:count`.
        #[arg(long, default_value = "0:2pi:9")]
        phi_grid: Grid,
        /// θ grid `start:end:count` (appendixG preset only).
        #[arg(long)]
        theta_grid: Option<Grid>,
    },
    /// Slater decomposition of a two-particle output as JSON.
    Schmidt {
        #[command(flatten)]
        input: InputArgs,
        #[command(flatten)]
        point: PointArgs,
    },
    /// Run the built-in property suites.
    Check {
        #[arg(long, default_value_t = 5)]
        max_modes: usize,
        #[arg(long, default_value_t = 30)]
        trials: usize,
        #[arg(long, default_value_t = 2024)]
        seed: u64,
        /// Use the opposite exchange-phase sign, which the algebra suites must catch.
        #[arg(long, hide = true)]
        flip_sign: bool,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

fn configure_threads() -> CliResult<()> {
    if let Ok(v) = std::env::var("ANYONSIM_THREADS") {
        let n: usize = v
            .parse()
            .map_err(|_| CliError::parse(format!("ANYONSIM_THREADS must be a positive integer, got `{v}`")))?;
        rayon::ThreadPoolBuilder::new()
            .num_threads(n.max(1))
            .build_global()
            .map_err(|e| CliError::invariant(e.to_string()))?;
    }
    Ok(())
}

fn inputs(a: &InputArgs) -> CliResult<Inputs> {
    Inputs::new(a.state.as_deref(), a.preset.as_deref(), a.circuit.as_deref())
}

fn dispatch(cli: Cli) -> CliResult<()> {
    configure_threads()?;
    match cli.command {
        Command::Run { input, point } => {
            let inputs = inputs(&input)?;
            let args = RunArgs { inputs: &inputs, phi: point.phi, theta: point.theta, engine: input.engine, tol: input.tol };
            commands::run(&args, &mut *commands::output(input.out.as_deref())?)
        }
        Command::EntropyScan { input, phi_grid, theta_grid } => {
            let inputs = inputs(&input)?;
            let args = ScanArgs { inputs: &inputs, phi_grid, theta_grid, engine: input.engine, tol: input.tol };
            commands::entropy_scan(&args, &mut *commands::output(input.out.as_deref())?)
        }
        Command::Schmidt { input, point } => {
            let inputs = inputs(&input)?;
            let args = RunArgs { inputs: &inputs, phi: point.phi, theta: point.theta, engine: input.engine, tol: input.tol };
            commands::schmidt(&args, &mut *commands::output(input.out.as_deref())?)
        }
        Command::Check { max_modes, trials, seed, flip_sign, out } => {
            let args = CheckArgs { max_modes, trials, seed, flip_sign };
            commands::check(&args, &mut *commands::output(out.as_deref())?)
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { error::code::PARSE } else { 0 };
            let _ = e.print();
            return ExitCode::from(code as u8);
        }
    };
    match dispatch(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.code as u8)
        }
    }
}
