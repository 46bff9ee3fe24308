//! `doubling`: analysis, sweeps, lemma suites and scans over subsets of `Z_n`.

mod commands;
mod output;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use doubling_core::classify::Mode;

#[derive(Parser, Debug)]
#[command(name = "doubling", version, about = "Small-doubling structure in finite cyclic groups")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    /// Output format.
    #[arg(long, value_enum, default_value_t = Format::Json, global = true)]
    pub format: Format,
    /// Write the report to this file instead of standard output.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// Omit `runtime_ms` so that repeated runs are byte-identical.
    #[arg(long, global = true)]
    pub no_timing: bool,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
    Text,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum ModeArg {
    Main,
    Aux,
}

impl From<ModeArg> for Mode {
    fn from(m: ModeArg) -> Mode {
        match m {
            ModeArg::Main => Mode::Main,
            ModeArg::Aux => Mode::Aux,
        }
    }
}

/// A set given as `n:e1,e2,...`, or as `--group n --set e1,e2,...`.
#[derive(Args, Debug, Clone)]
pub struct SetArgs {
    /// Set literal `<n>:<e1>,<e2>,...`.
    pub literal: Option<String>,
    /// Elements `e1,e2,...` (or a full literal); combine with `--group`.
    #[arg(long = "set")]
    pub set: Option<String>,
    /// Group modulus `n`.
    #[arg(short = 'n', long = "group")]
    pub group: Option<u64>,
}

#[derive(Args, Debug, Clone)]
pub struct ConstantArgs {
    /// Dense-coset constant C (default 30000).
    #[arg(long = "const-c")]
    pub c: Option<u64>,
    /// Large-increment constant C0 (default 24000); must satisfy 4C = 5C0 with C.
    #[arg(long = "const-c0")]
    pub c0: Option<u64>,
}

#[derive(Args, Debug, Clone)]
pub struct BiasArgs {
    /// Smallest admissible subgroup index.
    #[arg(long, default_value_t = 37)]
    pub min_index: u64,
    /// Coefficient threshold, in (0, 1].
    #[arg(long, default_value_t = 0.8)]
    pub coeff: f64,
    /// Required coverage, in (0, 1].
    #[arg(long, default_value_t = 0.9)]
    pub coverage: f64,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Doubling, VSDS test, witness search, rectifiability and bias detection for one set.
    Analyze {
        #[command(flatten)]
        set: SetArgs,
        #[arg(long, value_enum, default_value_t = ModeArg::Main)]
        mode: ModeArg,
        #[command(flatten)]
        constants: ConstantArgs,
        #[command(flatten)]
        bias: BiasArgs,
    },
    /// Exhaustive witness sweep over canonical classes with n <= n-max.
    Sweep {
        #[arg(long, default_value_t = 18)]
        n_max: u64,
        #[arg(long, value_enum, default_value_t = ModeArg::Main)]
        mode: ModeArg,
        #[command(flatten)]
        constants: ConstantArgs,
    },
    /// Run a lemma suite (or `all`).
    Lemmas {
        #[arg(long)]
        suite: String,
        /// Exhaustive bound on n (suite default if omitted).
        #[arg(long)]
        n_max: Option<u64>,
        /// Number of random instances (suite default if omitted).
        #[arg(long)]
        trials: Option<u64>,
        #[arg(long)]
        seed: Option<u64>,
    },
    /// Exact check of Φ(n) < eps for from < n <= to.
    PhiScan {
        #[arg(long, default_value_t = 92_400)]
        from: u64,
        #[arg(long, default_value_t = 200_475)]
        to: u64,
        /// Threshold as `num/den`.
        #[arg(long, default_value = "4/2025")]
        eps: String,
    },
    /// Large character sum to progression conversion.
    Bias {
        #[command(flatten)]
        set: SetArgs,
        #[command(flatten)]
        bias: BiasArgs,
    },
    /// Exact rectifiability decision and interval rectification.
    Rectify {
        #[command(flatten)]
        set: SetArgs,
    },
    /// Minimal |2A| over |A| = size in Z_n, for one size or all sizes.
    Extremal {
        #[arg(short = 'n', long = "group")]
        group: u64,
        #[arg(long)]
        size: Option<usize>,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match commands::run(&cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
