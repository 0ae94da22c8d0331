use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

/// Exact and numerical checks for the integration cycle of A_n zonal spherical functions.
#[derive(Debug, Parser)]
#[command(name = "zonal", version)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    #[command(flatten)]
    pub options: Options,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Subcommand)]
pub enum Command {
    /// Integrate the form over the cycle and compare with the Gamma constant.
    VerifyConstant,
    /// One-dimensional beta integral against its closed form, swept over k by default.
    VerifyBeta,
    /// Braid the cycle vector with the R-matrix and check the eigenvalue -1.
    Braid,
    /// Print the cycle vector in both normalizations and check that it is singular.
    Encode,
    /// Enumerate diagrams, their permutations and lengths.
    Diagrams,
    /// Leading asymptotic coefficient of the chain integral and the vertex singular vector.
    Asymptotic,
    /// Gram ranks of the vector representation and the path count.
    Gram,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
    #[default]
    Text,
}

#[derive(Clone, Debug, Args)]
pub struct Options {
    /// Rank.
    #[arg(long, global = true)]
    pub n: Option<usize>,
    /// Coupling constant k.
    #[arg(long, global = true, allow_negative_numbers = true)]
    pub k: Option<f64>,
    /// Points z_1,...,z_(n+1).
    #[arg(long, global = true, value_delimiter = ',', allow_negative_numbers = true)]
    pub z: Option<Vec<f64>>,
    /// Quadrature nodes per dimension.
    #[arg(long, global = true)]
    pub nodes: Option<usize>,
    /// Monte Carlo sample count.
    #[arg(long, global = true, default_value_t = 1_000_000)]
    pub samples: usize,
    #[arg(long, global = true, default_value_t = 1)]
    pub seed: u64,
    /// Quadrature scheme: gauss-jacobi-tensor, tanh-sinh or monte-carlo.
    #[arg(long, global = true)]
    pub scheme: Option<String>,
    /// Override the check tolerance.
    #[arg(long, global = true)]
    pub tolerance: Option<f64>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    pub format: Format,
    /// Write the report here instead of stdout.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// Braid only this slot (1..=n).
    #[arg(long, global = true)]
    pub slot: Option<usize>,
    /// Chain length.
    #[arg(long, global = true)]
    pub s: Option<usize>,
    /// Pairings (λ, α_1), ..., (λ, α_(s-1)).
    #[arg(long, global = true, value_delimiter = ',', allow_negative_numbers = true)]
    pub pairing: Option<Vec<f64>>,
    /// Triangularity convention of the R-matrix: raise-first or raise-second.
    #[arg(long, global = true, default_value = "raise-first")]
    pub triangularity: String,
    /// Cycle vector normalization for braid: 1 (duals) or 2 (plain).
    #[arg(long, global = true, default_value_t = 1)]
    pub form: u8,
    /// Also check the braiding formulas on all pairs of dual strings.
    #[arg(long, global = true)]
    pub check_strings: bool,
    /// Only run the vertex singular-vector check.
    #[arg(long, global = true)]
    pub check_singular: bool,
    /// Lift the size guards.
    #[arg(long, global = true)]
    pub unsafe_large: bool,
}

/// Size limits that keep each subcommand to desk-scale runtimes.
pub mod guard {
    pub const SYMBOLIC_N: usize = 3;
    pub const DIAGRAM_N: usize = 8;
    pub const CHAIN_S: usize = 3;
}
