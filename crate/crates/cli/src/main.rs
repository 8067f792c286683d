//! `nqs`: experiment runner for neural network quantum states.

mod commands;
mod output;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{ArgGroup, Args, Parser, Subcommand};
use nqs_core::NqsError;

use output::Format;

#[derive(Debug, Parser)]
#[command(name = "nqs", version)]
#[command(about = "Evaluate, sample, transform and test neural network quantum states")]
struct Cli {
    #[command(flatten)]
    common: Common,

    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Args)]
pub struct Common {
    /// Seed for every random stream of the run. Always echoed in reports.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,

    /// Write the report here instead of stdout.
    #[arg(long, global = true)]
    pub output: Option<PathBuf>,

    /// Report format. Sample dumps default to text, everything else to JSON.
    #[arg(long, global = true, value_enum)]
    pub format: Option<Format>,

    /// Largest n for exhaustive enumeration.
    #[arg(long, global = true, default_value_t = 24, value_parser = clap::value_parser!(u64).range(1..))]
    pub cap_n: u64,

    /// Largest m for brute-force hidden-layer sums.
    #[arg(long, global = true, default_value_t = 24, value_parser = clap::value_parser!(u64).range(1..))]
    pub cap_m: u64,
}

#[derive(Debug, Args)]
pub struct ChainArgs {
    /// Metropolis burn-in in sweeps.
    #[arg(long, default_value_t = 1000)]
    pub burn_in: u64,

    /// Sweeps between emitted samples.
    #[arg(long, default_value_t = 1, value_parser = clap::value_parser!(u64).range(1..))]
    pub thinning: u64,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Log-amplitude of one configuration
    Eval {
        #[arg(long)]
        model: PathBuf,
        /// Configuration as a ±1 string, e.g. "+-+".
        #[arg(long, allow_hyphen_values = true)]
        config: String,
        /// Also sum the hidden layer explicitly (capped by --cap-m).
        #[arg(long)]
        brute: bool,
    },

    /// Amplitude ratio f(i)/f(j)
    Ratio {
        #[arg(long)]
        model: PathBuf,
        #[arg(long, allow_hyphen_values = true)]
        config: String,
        #[arg(long, allow_hyphen_values = true)]
        config2: String,
    },

    /// Normalized state vector by enumeration
    Statevec {
        #[arg(long)]
        model: PathBuf,
    },

    /// Born samples from a Metropolis chain, or exactly with --exact
    Sample {
        #[arg(long)]
        model: PathBuf,
        #[arg(long, default_value_t = 1000)]
        count: u64,
        #[arg(long)]
        exact: bool,
        #[command(flatten)]
        chain: ChainArgs,
    },

    /// Median-of-means fidelity |<phi|psi>|^2 from amplitude ratios
    Fidelity {
        /// The state psi.
        #[arg(long)]
        model: PathBuf,
        /// The state phi.
        #[arg(long)]
        model2: PathBuf,
        #[arg(long, default_value_t = 0.1)]
        eps: f64,
        #[command(flatten)]
        chain: ChainArgs,
    },

    /// Median-of-means expectation of a Pauli string
    Expect {
        #[arg(long)]
        model: PathBuf,
        /// Pauli string such as "XIZY", one letter per qubit.
        #[arg(long)]
        pauli: String,
        #[arg(long, default_value_t = 0.1)]
        eps: f64,
        #[command(flatten)]
        chain: ChainArgs,
    },

    /// Transform a model and print the resulting model file
    Gadget(GadgetArgs),

    /// Uniform samples over the satisfying assignments of a DNF formula
    DnfSample {
        #[arg(long)]
        formula: PathBuf,
        #[arg(long, default_value_t = 1000)]
        count: u64,
    },

    /// Test whether the Born distribution is uniform
    TestUniform {
        #[arg(long)]
        model: PathBuf,
        #[arg(long, default_value_t = 0.2)]
        eps: f64,
        #[arg(long, default_value_t = 0.1)]
        delta: f64,
        /// Use one amplitude-ratio query per pair instead of pair-conditional sampling.
        #[arg(long)]
        fast: bool,
        #[command(flatten)]
        chain: ChainArgs,
    },
}

#[derive(Debug, Args)]
#[command(group(
    ArgGroup::new("transform")
        .required(true)
        .args(["postselect", "parity", "hamming", "hamming_weight", "pauli", "zero_state"])
))]
pub struct GadgetArgs {
    /// Input model; not needed with --zero-state.
    #[arg(long, required_unless_present = "zero_state")]
    pub model: Option<PathBuf>,

    /// Subcube mask over "+", "-" and "*".
    #[arg(long, allow_hyphen_values = true)]
    pub postselect: Option<String>,

    /// Project onto an odd number of -1 spins.
    #[arg(long)]
    pub parity: bool,

    /// Project onto the spin-sum sector k.
    #[arg(long, allow_hyphen_values = true)]
    pub hamming: Option<i64>,

    /// Project onto Hamming weight w (number of -1 spins).
    #[arg(long)]
    pub hamming_weight: Option<usize>,

    /// Apply a Pauli string such as "XIZY".
    #[arg(long)]
    pub pauli: Option<String>,

    /// Emit the vanishing-amplitude example network.
    #[arg(long)]
    pub zero_state: bool,

    /// Visible nodes for --zero-state.
    #[arg(long, default_value_t = 1, requires = "zero_state")]
    pub n: usize,
}

fn exit_code(err: &anyhow::Error) -> u8 {
    match err.downcast_ref::<NqsError>() {
        Some(NqsError::InvalidState(_) | NqsError::ZeroSupportStart { .. }) => 3,
        Some(NqsError::ResourceLimit(_) | NqsError::NormalizationUnavailable(_)) => 4,
        _ => 2,
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match commands::run(&cli.common, &cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("error: {err:#}");
            ExitCode::from(exit_code(&err))
        }
    }
}
