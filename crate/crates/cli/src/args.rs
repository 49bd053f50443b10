use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Debug, Parser)]
#[command(
    name = "entry7",
    version,
    about = "Sums of divergent q-series via their p = 1/q continuations"
)]
pub struct Cli {
    #[command(flatten)]
    pub global: GlobalArgs,

    #[command(subcommand)]
    pub command: Command,
}

/// Flags shared by every subcommand. All of them may also come from
/// `--config`; values given on the command line win.
#[derive(Debug, Args, Default)]
pub struct GlobalArgs {
    /// Working precision in significant digits (30..=200, default 50)
    #[arg(long, global = true)]
    pub precision: Option<u32>,

    /// Term budget per series (at least 100)
    #[arg(long, global = true)]
    pub max_terms: Option<usize>,

    /// Tolerance for identity checks in `verify` (default 1e-(P-10))
    #[arg(long, global = true)]
    pub tol: Option<String>,

    #[arg(long, global = true, value_enum)]
    pub format: Option<Format>,

    /// Write output to a file instead of stdout
    #[arg(long, global = true)]
    pub output: Option<PathBuf>,

    /// Plain-text key=value file mirroring the long flags
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,

    /// Omit the precision/version/timestamp header from text output
    #[arg(long, global = true)]
    pub no_meta: bool,

    /// Decimal places printed for values (default min(12, P-10))
    #[arg(long, global = true)]
    pub digits: Option<usize>,

    /// Compute table cells on a thread pool
    #[arg(long, global = true)]
    pub parallel: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
    Csv,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum FamilyArg {
    S1,
    S2,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Suite {
    Heine,
    Rogersfine,
    Muir,
    Ramanujan,
    Duality,
    Cesaro,
    Limits,
    All,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Source {
    #[value(name = "entry7-1")]
    Entry7First,
    #[value(name = "entry7-2")]
    Entry7Second,
    Gauss4,
    Ramanujan,
    Muir,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Sum one series
    Sum {
        #[arg(long, value_enum)]
        family: FamilyArg,
        /// Polygon order for s1 (at least 3)
        #[arg(long)]
        rho: Option<u32>,
        /// Pochhammer step for s2 (at least 1)
        #[arg(long)]
        kappa: Option<u32>,
        /// Base q, as a decimal or a fraction such as 1/3
        #[arg(long, allow_hyphen_values = true)]
        q: String,
    },
    /// Sum a grid of parameters and bases
    Table {
        #[arg(long, value_enum)]
        family: FamilyArg,
        /// Range `a..b`, a single value, or a comma list
        #[arg(long)]
        rho: Option<String>,
        #[arg(long)]
        kappa: Option<String>,
        /// Comma-separated bases
        #[arg(long, value_delimiter = ',', required = true, allow_hyphen_values = true)]
        q: Vec<String>,
    },
    /// Run an identity-verification battery
    Verify {
        #[arg(long, value_enum, default_value = "all")]
        suite: Suite,
    },
    /// List continued-fraction coefficients
    Coeffs {
        #[arg(long, value_enum)]
        source: Source,
        #[arg(long, allow_hyphen_values = true)]
        q: Option<String>,
        #[arg(long)]
        kappa: Option<u32>,
        #[arg(long, allow_hyphen_values = true)]
        a: Option<String>,
        #[arg(long, allow_hyphen_values = true)]
        lambda: Option<String>,
        #[arg(long, allow_hyphen_values = true)]
        b: Option<String>,
        /// Power series for `muir`: `qpoch:q=1/2,kappa=2`,
        /// `triangular:q=1/2` or `list:1,2,5,14`
        #[arg(long)]
        series: Option<String>,
        /// Highest coefficient index
        #[arg(long)]
        n: usize,
    },
}
