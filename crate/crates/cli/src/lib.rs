//! Command-line front end: measures on state files, reproduction runs,
//! state generation and witness validation.
//!
//! Exit codes: 0 success, 1 bad input, 2 solver failure.

pub mod commands;
pub mod error;
pub mod parse;
pub mod reproduce;
pub mod table;

use std::ffi::OsString;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

pub use error::{CliError, CliResult};
pub use table::Table;

#[derive(Debug, Parser)]
#[command(name = "witent", version, about = "Witness-based entanglement measures")]
pub struct Cli {
    /// Worker threads for batch commands (default: all cores).
    #[arg(long, global = true)]
    pub threads: Option<usize>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Compute one measure on a state file and print JSON.
    Compute(ComputeArgs),
    /// Run a reproduction experiment and write CSV.
    Reproduce {
        #[command(subcommand)]
        which: ReproduceCmd,
    },
    /// Write a named or random state in the JSON matrix format.
    GenState(GenStateArgs),
    /// Check a witness file and optionally evaluate it on a state.
    ValidateWitness(ValidateArgs),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum MeasureName {
    Negativity,
    /// Closed-form PPT generalized robustness.
    RgPpt,
    /// `E^PPT_{n:m}` by semidefinite programming.
    ENm,
    /// PPT random robustness.
    Rr,
    Rains,
    Concurrence,
    SsrNonlocality,
    /// Level-2 symmetric-extension robustness bound.
    Dps2,
}

#[derive(Debug, Args)]
pub struct ComputeArgs {
    #[arg(long, value_enum)]
    pub measure: MeasureName,
    /// State file (JSON matrix format with dims).
    #[arg(long)]
    pub state: PathBuf,
    /// Party indices on one side of a cut, e.g. `0` or `0,2`. Repeat for
    /// several cuts (used by e-nm only).
    #[arg(long)]
    pub cut: Vec<String>,
    /// Lower witness bound n (number or inf).
    #[arg(long, default_value = "inf")]
    pub n: String,
    /// Upper witness bound m (number or inf).
    #[arg(long, default_value = "1")]
    pub m: String,
    /// Write the optimal witness to this file.
    #[arg(long)]
    pub witness_out: Option<PathBuf>,
    #[arg(long, short)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Subcommand)]
pub enum ReproduceCmd {
    /// Negativity against closed-form PPT robustness for random states.
    Fig56 {
        /// Local dimension d for d⊗d states.
        #[arg(long, default_value_t = 2)]
        dim: usize,
        /// Local dimensions, overriding --dim (e.g. `2,3`).
        #[arg(long)]
        dims: Option<String>,
        #[arg(long, default_value_t = 1000)]
        samples: usize,
        #[arg(long)]
        seed: u64,
        /// Add the SDP value of the PPT robustness as a column.
        #[arg(long)]
        sdp: bool,
        #[arg(long, short)]
        output: Option<PathBuf>,
    },
    /// E^PPT_{n:1} of the W/GHZ mixture across its bipartitions.
    Example1 {
        #[arg(long, default_value = "0:1:11")]
        q_grid: String,
        #[arg(long, default_value = "1,2,inf")]
        n_values: String,
        #[arg(long, short)]
        output: Option<PathBuf>,
    },
    /// Formation lower bounds for noisy Horodecki states.
    Fig7q {
        #[arg(long, default_value = "0.1:0.9:9")]
        a_grid: String,
        #[arg(long, default_value = "0.9:1:11")]
        e_grid: String,
        #[arg(long, short)]
        output: Option<PathBuf>,
    },
    /// Thermal sweep of the Heisenberg chain.
    Heisenberg {
        #[arg(long = "N", default_value_t = 4)]
        sites: usize,
        #[arg(long, default_value_t = 1.0)]
        j: f64,
        #[arg(long, default_value_t = 0.0)]
        b: f64,
        /// Open boundary conditions.
        #[arg(long)]
        open: bool,
        #[arg(long, default_value = "0:20:41")]
        beta_grid: String,
        #[arg(long, short)]
        output: Option<PathBuf>,
    },
    /// Isotropic closed form against SDP and the twirled program.
    Isotropic {
        #[arg(long, default_value_t = 3)]
        d: usize,
        /// Bounds n (default 0.5, 1, d−1, d, 2d).
        #[arg(long)]
        n_values: Option<String>,
        #[arg(long)]
        p_grid: Option<String>,
        #[arg(long, short)]
        output: Option<PathBuf>,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum StateKind {
    MaxEntangled,
    Isotropic,
    Horodecki,
    WGhz,
    VcSsr,
    Werner,
    Random,
    RandomPure,
}

#[derive(Debug, Args)]
pub struct GenStateArgs {
    #[arg(long, value_enum)]
    pub kind: StateKind,
    #[arg(long, default_value_t = 2)]
    pub d: usize,
    #[arg(long)]
    pub p: Option<f64>,
    #[arg(long)]
    pub a: Option<f64>,
    #[arg(long)]
    pub q: Option<f64>,
    /// Local dimensions for random states, e.g. `2,3`.
    #[arg(long)]
    pub dims: Option<String>,
    #[arg(long)]
    pub seed: Option<u64>,
    #[arg(long, short)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct ValidateArgs {
    #[arg(long)]
    pub witness: PathBuf,
    #[arg(long)]
    pub state: Option<PathBuf>,
    /// Random product vectors for witnesses without a decomposition.
    #[arg(long, default_value_t = 10_000)]
    pub samples: usize,
    #[arg(long)]
    pub seed: Option<u64>,
    #[arg(long, short)]
    pub output: Option<PathBuf>,
}

/// Parses arguments, runs the command and returns the exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    let result = match cli.threads {
        Some(t) => match rayon::ThreadPoolBuilder::new().num_threads(t).build() {
            Ok(pool) => pool.install(|| commands::dispatch(&cli.command)),
            Err(e) => Err(CliError::BadInput(format!("thread pool: {e}"))),
        },
        None => commands::dispatch(&cli.command),
    };
    match result {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}
