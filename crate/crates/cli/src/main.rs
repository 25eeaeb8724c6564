mod commands;
mod config;
mod error;

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::config::Config;
use crate::error::CliError;

/// Wigner-function moments and the moment-based negativity test.
#[derive(Debug, Parser)]
#[command(name = "wigmom", version)]
struct Cli {
    /// `key = value` run configuration; command-line flags override it.
    #[arg(long, global = true)]
    config: Option<PathBuf>,

    /// Write the result to this file instead of stdout.
    #[arg(long, short, global = true)]
    output: Option<PathBuf>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Default, Args)]
pub struct StateArgs {
    /// fock, vacuum, noon, tmsv, spssv or mixed.
    #[arg(long)]
    pub state: Option<String>,
    /// Photon number (fock, noon).
    #[arg(long)]
    pub n: Option<usize>,
    /// NOON relative phase in [0, 2 pi); defaults to pi.
    #[arg(long)]
    pub phi: Option<f64>,
    /// Squeezing parameter (tmsv, spssv).
    #[arg(long)]
    pub r: Option<f64>,
    /// Photon-subtraction mode parity for spssv, 0 or 1.
    #[arg(long)]
    pub parity: Option<u8>,
    /// Vacuum weight of the vacuum/single-photon mixture.
    #[arg(long)]
    pub lambda: Option<f64>,
}

#[derive(Debug, Clone, Default, Args)]
pub struct QuadArgs {
    /// gauss_hermite_tensor (gh), adaptive_radial (radial) or uniform_grid (grid).
    #[arg(long)]
    pub scheme: Option<String>,
    /// Nodes per axis; defaults to the exactness order.
    #[arg(long)]
    pub order: Option<usize>,
    /// Box half-width for the uniform grid scheme.
    #[arg(long)]
    pub bounds: Option<f64>,
}

#[derive(Debug, Clone, Default, Args)]
pub struct RangeArgs {
    #[arg(long)]
    pub from: Option<f64>,
    #[arg(long)]
    pub to: Option<f64>,
    #[arg(long)]
    pub step: Option<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

impl std::str::FromStr for Format {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        <Format as ValueEnum>::from_str(s, true)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum TableKind {
    Table1,
    Table2,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum FigureKind {
    Fig1,
    Fig2,
    MixedSweep,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum OperatorKind {
    Swap,
    SwapExponential,
    SwapQuadrature,
    O2,
    O3,
    Parity,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Moments w_1..w_m and the negativity verdict for one state (JSON).
    Analyze {
        #[command(flatten)]
        state: StateArgs,
        #[command(flatten)]
        quad: QuadArgs,
        /// Synthesize the Wigner function from the Fock matrix at this cutoff.
        #[arg(long)]
        cutoff: Option<usize>,
        /// Highest moment order (at least 3).
        #[arg(long)]
        max_m: Option<usize>,
    },
    /// NOON (table1) or Fock (table2) moment table as `param,w2,w3,delta`.
    Table {
        which: TableKind,
        #[command(flatten)]
        quad: QuadArgs,
        #[arg(long)]
        format: Option<Format>,
    },
    /// Figure data as `param,delta,verdict`.
    Figure {
        which: FigureKind,
        #[command(flatten)]
        quad: QuadArgs,
        /// Mixture weights swept by mixed-sweep (default 0 to 0.5 in steps of 0.01).
        #[command(flatten)]
        range: RangeArgs,
        #[arg(long)]
        format: Option<Format>,
    },
    /// `param,w2,w3,delta,verdict` over a parameter range of one family.
    Sweep {
        /// noon, fock or mixed.
        #[arg(long)]
        family: Option<String>,
        #[command(flatten)]
        range: RangeArgs,
        #[command(flatten)]
        quad: QuadArgs,
        #[arg(long)]
        format: Option<Format>,
    },
    /// Multi-copy routes to w_2 and w_3 next to trace powers and quadrature (JSON).
    Multicopy {
        #[command(flatten)]
        state: StateArgs,
        #[arg(long)]
        cutoff: Option<usize>,
        /// Gauss-Hermite order of the displacement integral.
        #[arg(long)]
        alpha_order: Option<usize>,
        /// Largest dense operator the command may allocate.
        #[arg(long)]
        memory_limit_mb: Option<usize>,
    },
    /// Single-mode Wigner function on a square grid as `x,p,w`.
    Grid {
        #[command(flatten)]
        state: StateArgs,
        #[arg(long)]
        cutoff: Option<usize>,
        #[arg(long)]
        half_width: Option<f64>,
        #[arg(long)]
        points: Option<usize>,
    },
    /// Nonzero entries of a truncated operator as `row,col,re,im`.
    DumpOperator {
        which: OperatorKind,
        #[arg(long)]
        cutoff: Option<usize>,
        #[arg(long)]
        alpha_order: Option<usize>,
        /// Displacement for `parity`.
        #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
        alpha_re: f64,
        #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
        alpha_im: f64,
    },
    /// Randomized soundness check on states with nonnegative Wigner functions.
    Property {
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long)]
        count: Option<usize>,
    },
    /// Re-reads a JSON report and prints it back.
    Inspect {
        /// Report file, or `-` for stdin.
        input: PathBuf,
    },
}

fn run(cli: Cli) -> Result<(), CliError> {
    let config = match &cli.config {
        Some(path) => Config::load(path)?,
        None => Config::default(),
    };
    match wigmom::exec::init_threads_from_env()? {
        Some(_) => {}
        None => {
            if let Some(t) = config.get::<usize>("threads")? {
                wigmom::exec::init_threads(t)?;
            }
        }
    }
    let output = config.pick(cli.output.clone(), "output")?;
    let text = commands::execute(&cli.command, &config)?;
    match output {
        Some(path) => std::fs::write(path, text)?,
        None => std::io::stdout().lock().write_all(text.as_bytes())?,
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("wigmom: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
