use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};

/// Partition function of the six-vertex model with domain wall boundaries:
/// computation, identity checks and the functional-equation solver.
#[derive(Parser, Debug, Clone, PartialEq)]
#[command(name = "dwbc", version)]
pub struct RunConfig {
    #[command(subcommand)]
    pub command: Command,

    /// Lattice size L.
    #[arg(long, global = true, default_value_t = 2)]
    pub size: usize,

    #[arg(long, global = true, value_enum, default_value_t = Backend::Exact)]
    pub backend: Backend,

    /// Seed for every random choice (ChaCha8).
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,

    /// Random trials for float checks.
    #[arg(long, global = true, default_value_t = 10)]
    pub trials: usize,

    /// Relative tolerance for float checks; each check has its own default.
    #[arg(long, global = true)]
    pub tolerance: Option<f64>,

    /// Write the JSON document here instead of stdout.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
}

#[derive(Subcommand, Debug, Clone, PartialEq)]
pub enum Command {
    /// Evaluate Z at symbolic or given parameters.
    Compute {
        #[arg(long, value_enum, default_value_t = Method::Algebraic)]
        method: Method,
        #[command(flatten)]
        params: Params,
    },
    /// Check one family of identities.
    Verify {
        #[arg(long, value_enum)]
        check: Check,
        /// Number of B operators for `cbb` (defaults to L).
        #[arg(long)]
        n: Option<usize>,
    },
    /// Solve the functional equation for the coefficients of Z at μ = 0.
    Solve {
        #[arg(long, value_enum, default_value_t = Normalize::Asymptotic)]
        normalize: Normalize,
        /// Value of q for the float backend (complex literal); sampled if absent.
        #[arg(long)]
        q: Option<String>,
        /// Float backend: solve at 8 random q, twice each, and compare.
        #[arg(long)]
        consistency: bool,
    },
    /// Enumerate lattice configurations.
    Enumerate {
        #[arg(long)]
        count_only: bool,
        #[arg(long, value_enum, default_value_t = Mode::Pruned)]
        mode: Mode,
        #[command(flatten)]
        params: Params,
    },
    /// Residuals of the homogeneous-limit differential equations (L = 1, 2).
    Ode,
}

/// Spectral parameters as exponentials: monomials such as `u1` or `2*q^-1`
/// for the exact backend, complex literals such as `0.8-0.3j` for float.
#[derive(clap::Args, Debug, Clone, PartialEq, Default)]
pub struct Params {
    #[arg(long, value_delimiter = ',')]
    pub lambda: Vec<String>,
    #[arg(long, value_delimiter = ',')]
    pub mu: Vec<String>,
    #[arg(long)]
    pub q: Option<String>,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
pub enum Backend {
    Exact,
    Float,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
pub enum Method {
    Algebraic,
    Naive,
    Pruned,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
pub enum Mode {
    Naive,
    Pruned,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
pub enum Normalize {
    Asymptotic,
    TopOne,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
pub enum Check {
    Yb,
    Rtt,
    Comm,
    Triangular,
    Cbb,
    Z0,
    Fz,
    AppendixA,
    HTable,
}

impl Backend {
    pub fn name(self) -> &'static str {
        match self {
            Backend::Exact => "exact",
            Backend::Float => "float",
        }
    }
}

impl Check {
    pub fn name(self) -> &'static str {
        match self {
            Check::Yb => "yb",
            Check::Rtt => "rtt",
            Check::Comm => "comm",
            Check::Triangular => "triangular",
            Check::Cbb => "cbb",
            Check::Z0 => "z0",
            Check::Fz => "fz",
            Check::AppendixA => "appendix-a",
            Check::HTable => "h-table",
        }
    }
}
