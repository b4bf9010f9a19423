use std::path::PathBuf;

use clap::{ArgGroup, Args, Parser, Subcommand, ValueEnum};

#[derive(Parser, Debug)]
#[command(
    name = "szego",
    version,
    about = "Contracted Laguerre zeros, Szego level curves and their equilibrium measures",
    args_override_self = true
)]
pub struct Cli {
    #[command(flatten)]
    pub run: RunArgs,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Args, Debug, Clone)]
pub struct RunArgs {
    /// Working precision in bits (at least 64)
    #[arg(long, global = true, env = "SZEGO_PRECISION_BITS")]
    pub precision: Option<u32>,

    /// Number of curve nodes M (even, at least 16)
    #[arg(long, global = true)]
    pub nodes: Option<usize>,

    /// Root-finder tolerance (default 2^(-precision/2))
    #[arg(long, global = true)]
    pub tol: Option<String>,

    /// Output file, or output directory for `experiment`
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,

    /// Flat key=value file mirroring the command-line flags
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Contracted zeros of L_n^(alpha)(n z) as CSV `re,im,residual`
    Zeros {
        #[arg(long)]
        n: usize,
        #[arg(long, allow_hyphen_values = true)]
        alpha: String,
    },
    /// Trace of the level curve as CSV `theta,re,im`
    Curve {
        #[arg(long, allow_hyphen_values = true)]
        r: String,
    },
    /// Discretized mu_r as CSV `re,im,weight`
    Measure {
        #[arg(long, allow_hyphen_values = true)]
        r: String,
    },
    /// Logarithmic potential of mu_r at the given points
    Potential {
        #[arg(long, allow_hyphen_values = true)]
        r: String,
        /// Point as `re,im` or `re`; repeatable
        #[arg(long = "z", required = true, allow_hyphen_values = true)]
        z: Vec<String>,
    },
    /// Run a verification suite; exits 0 only if every check passes
    Verify {
        #[arg(long, value_enum)]
        suite: Suite,
        #[arg(long, allow_hyphen_values = true, default_value = "1")]
        r: String,
    },
    /// Greedy weighted Leja points on the level curve
    Leja {
        #[arg(long, allow_hyphen_values = true)]
        r: String,
        #[arg(long)]
        count: usize,
        /// Candidate grid size (default 32 * count)
        #[arg(long)]
        grid: Option<usize>,
    },
    /// Reproduction runs (`--fig 1..3`) and schedule convergence runs
    #[command(group(ArgGroup::new("what").required(true).args(["fig", "schedule"])))]
    Experiment {
        #[arg(long, value_parser = clap::value_parser!(u8).range(1..=3))]
        fig: Option<u8>,
        #[arg(long, value_enum)]
        schedule: Option<ScheduleArg>,
        /// c for generic, r for exponential
        #[arg(long, allow_hyphen_values = true)]
        param: Option<String>,
        /// Degrees to run, comma separated
        #[arg(long = "degrees", value_delimiter = ',', default_value = "30,60,120")]
        degrees: Vec<usize>,
    },
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum Suite {
    /// Mass, density and harmonic moments of the discretized mu_r
    Lemma1,
    Balayage,
    Robin,
    LaguerreIdentities,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum ScheduleArg {
    Generic,
    Exponential,
    Superexponential,
}

/// Subcommand names, used to place configuration values.
pub const SUBCOMMANDS: [&str; 7] = ["zeros", "curve", "measure", "potential", "verify", "leja", "experiment"];

/// Flags that may appear before the subcommand.
pub const GLOBAL_KEYS: [&str; 4] = ["precision", "nodes", "tol", "out"];
