use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Parser, Debug, Clone)]
#[command(name = "vinoslice", version, about = "Exact counts and identities for sliced Vinogradov systems")]
pub struct Cli {
    #[command(flatten)]
    pub global: GlobalArgs,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Args, Debug, Clone, Default)]
pub struct GlobalArgs {
    /// Worker threads for counting (default: all cores).
    #[arg(long, global = true)]
    pub threads: Option<usize>,
    #[arg(long, global = true, value_enum)]
    pub format: Option<Format>,
    /// Write the report here instead of stdout.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// Seed for randomized dependency searches.
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    /// Stop starting new grid points after this many seconds.
    #[arg(long = "time-budget-s", global = true)]
    pub time_budget_s: Option<f64>,
    /// key=value file with defaults for the global options.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    /// Key limit for representation tables.
    #[arg(long = "max-keys", global = true)]
    pub max_keys: Option<usize>,
    /// Tuple limit for naive enumeration.
    #[arg(long = "oracle-ceiling", global = true)]
    pub oracle_ceiling: Option<u128>,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Format {
    #[default]
    Json,
    Csv,
}

/// Box sizes; a comma-separated list or the default geometric grid.
#[derive(Args, Debug, Clone, Default)]
pub struct Grid {
    #[arg(long = "X", alias = "x", value_delimiter = ',')]
    pub x: Vec<u64>,
}

/// A tuple file, or the monomial tuple `(z^{k-r}, …, z, 1)`.
#[derive(Args, Debug, Clone, Default)]
pub struct TupleSource {
    #[arg(long = "tuple-file")]
    pub tuple_file: Option<PathBuf>,
    #[arg(long)]
    pub k: Option<u32>,
    #[arg(long)]
    pub r: Option<u32>,
}

#[derive(Subcommand, Debug, Clone)]
pub enum Command {
    /// Solutions of the sliced system.
    CountI {
        #[arg(long)]
        s: u32,
        #[arg(long)]
        k: u32,
        #[arg(long)]
        r: u32,
        #[command(flatten)]
        grid: Grid,
        /// Count by nested loops instead of tables.
        #[arg(long)]
        naive: bool,
    },
    /// Solutions of the auxiliary system `Σ h_i f_j(z_i) = 0`.
    CountA {
        #[arg(long)]
        s: u32,
        #[command(flatten)]
        tuple: TupleSource,
        #[command(flatten)]
        grid: Grid,
        /// Bound on |h|; defaults to X^r.
        #[arg(long = "H", alias = "h")]
        h: Option<u64>,
        #[arg(long)]
        naive: bool,
    },
    /// Solutions of the full Vinogradov system.
    CountJ {
        #[arg(long)]
        sigma: u32,
        #[arg(long)]
        d: u32,
        #[command(flatten)]
        grid: Grid,
        #[arg(long)]
        naive: bool,
    },
    /// Solutions of the shifted system with variables up to 2X.
    CountLifted {
        #[arg(long)]
        s: u32,
        #[arg(long)]
        k: u32,
        #[arg(long)]
        r: u32,
        #[command(flatten)]
        grid: Grid,
        /// Bound on |h|; defaults to s X^r.
        #[arg(long = "H", alias = "h")]
        h: Option<u64>,
        #[arg(long)]
        naive: bool,
    },
    /// Minimal-degree relation Ψ_n and its cofactor Φ_n.
    FindPsi {
        #[command(flatten)]
        tuple: TupleSource,
        #[arg(long)]
        n: usize,
        /// Highest degree tried (default 8 for n = 1, 10 for n = 2).
        #[arg(long)]
        cap: Option<u32>,
        /// Permit n >= 3.
        #[arg(long)]
        allow_high_level: bool,
    },
    /// Expands the two built-in moment identities.
    VerifyIdentities,
    /// Block determinant D_n and its two-row expansion.
    DetCheck {
        #[command(flatten)]
        tuple: TupleSource,
        #[arg(long)]
        n: usize,
    },
    /// Vandermonde quotient of det(f_j(z_i)).
    Theta {
        #[command(flatten)]
        tuple: TupleSource,
        #[arg(long)]
        m: usize,
    },
    /// Labels every solution of the auxiliary system with 2s - 1 equations.
    Classify {
        #[arg(long)]
        s: u32,
        #[command(flatten)]
        tuple: TupleSource,
        #[command(flatten)]
        grid: Grid,
        /// Bound on |h|; defaults to X^r.
        #[arg(long = "H", alias = "h")]
        h: Option<u64>,
    },
    /// Log-log slope of counts read from a CSV with `X` and `count` columns.
    Fit {
        #[arg(long)]
        input: PathBuf,
        /// Report whether the slope is at most target + tolerance.
        #[arg(long)]
        target: Option<f64>,
        #[arg(long, default_value_t = 0.5)]
        tolerance: f64,
    },
    /// Ranges and exponents of the mean value estimates.
    Bounds {
        #[arg(long)]
        s: u32,
        #[arg(long)]
        k: u32,
        #[arg(long)]
        r: u32,
        #[arg(long)]
        kappa: u32,
        /// Degrees of the tuple, comma-separated (default: monomial tuple).
        #[arg(long, value_delimiter = ',')]
        degrees: Vec<u32>,
    },
}
