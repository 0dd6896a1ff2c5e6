use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

/// Audit the design conditions behind Lasso oracle inequalities.
///
/// Indices are 0-based. Matrices are dense CSV without header.
#[derive(Debug, Parser)]
#[command(name = "lasso-audit", version)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Command {
    /// Compute every condition constant for one (S, L, N).
    Analyze(AnalyzeArgs),
    /// Solve the Lasso and check the oracle inequalities.
    Lasso(LassoArgs),
    /// Basis pursuit: min ||b||_1 subject to Sigma (b - beta0) = 0.
    Recover(RecoverArgs),
    /// Evaluate the implication edges E1..E11.
    Implications(AnalyzeArgs),
    /// Monte Carlo check of the concentration or noise-level bound.
    Montecarlo(MonteCarloArgs),
    /// Write a generated matrix as CSV.
    Generate(GenerateArgs),
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::Analyze(_) => "analyze",
            Command::Lasso(_) => "lasso",
            Command::Recover(_) => "recover",
            Command::Implications(_) => "implications",
            Command::Montecarlo(_) => "montecarlo",
            Command::Generate(_) => "generate",
        }
    }

    pub fn common(&self) -> &Common {
        match self {
            Command::Analyze(a) | Command::Implications(a) => &a.common,
            Command::Lasso(a) => &a.common,
            Command::Recover(a) => &a.common,
            Command::Montecarlo(a) => &a.common,
            Command::Generate(a) => &a.common,
        }
    }
}

#[derive(Debug, Args, Serialize)]
pub struct Common {
    /// Seed for every randomized step.
    #[arg(long, env = "LASSO_AUDIT_SEED", default_value_t = 0)]
    pub seed: u64,
    /// Maximum number of index sets per enumeration.
    #[arg(long = "cap-subsets")]
    pub cap_subsets: Option<u64>,
    /// Maximum number of sign vectors per enumeration.
    #[arg(long = "cap-signs")]
    pub cap_signs: Option<u64>,
    /// Solver tolerance (KKT residual, duality gaps).
    #[arg(long)]
    pub tol: Option<f64>,
    /// Fewer restarts and random samples in the nonconvex searches.
    #[arg(long)]
    pub reduced: bool,
    /// Output file; standard output when absent.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Worker threads (default: all cores).
    #[arg(long)]
    pub threads: Option<usize>,
    /// Omit the wall time so that output is reproducible byte for byte.
    #[arg(long = "no-timing")]
    pub no_timing: bool,
}

#[derive(Debug, Args, Serialize)]
pub struct MatrixInput {
    /// Gram matrix Sigma (CSV).
    #[arg(long, conflicts_with = "design", required_unless_present = "design")]
    pub gram: Option<PathBuf>,
    /// Design matrix X (CSV); Sigma = X^T X / n.
    #[arg(long)]
    pub design: Option<PathBuf>,
}

#[derive(Debug, Args, Serialize)]
pub struct ConeArgs {
    /// Active set S: comma-separated or a JSON array of 0-based indices.
    #[arg(long = "S", value_name = "LIST")]
    pub s: String,
    /// Cone constant L.
    #[arg(long = "L", default_value_t = 1.0)]
    pub l: f64,
    /// Superset size N (default |S|).
    #[arg(long = "N")]
    pub n: Option<usize>,
}

#[derive(Debug, Args, Serialize)]
pub struct AnalyzeArgs {
    #[command(flatten)]
    pub input: MatrixInput,
    #[command(flatten)]
    pub cone: ConeArgs,
    #[command(flatten)]
    pub common: Common,
}

#[derive(Debug, Args, Serialize)]
pub struct LassoArgs {
    #[command(flatten)]
    pub input: MatrixInput,
    /// Active set S of beta0.
    #[arg(long = "S", value_name = "LIST")]
    pub s: String,
    #[arg(long)]
    pub lambda: f64,
    /// True coefficients (JSON array or CSV). Required with --gram.
    #[arg(long)]
    pub beta0: Option<PathBuf>,
    /// Response Y (with --design).
    #[arg(long)]
    pub response: Option<PathBuf>,
    /// Noise vector epsilon (with --design), used for lambda0.
    #[arg(long)]
    pub noise: Option<PathBuf>,
    #[command(flatten)]
    pub common: Common,
}

#[derive(Debug, Args, Serialize)]
pub struct RecoverArgs {
    #[arg(long)]
    pub gram: PathBuf,
    #[arg(long)]
    pub beta0: PathBuf,
    #[command(flatten)]
    pub common: Common,
}

#[derive(Debug, Clone, Copy, ValueEnum, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Experiment {
    Concentration,
    Noise,
}

#[derive(Debug, Args, Serialize)]
pub struct MonteCarloArgs {
    #[arg(long, value_enum)]
    pub experiment: Experiment,
    /// Sample size.
    #[arg(long)]
    pub n: usize,
    /// Dimension (ignored when --gram gives the population).
    #[arg(long)]
    pub p: Option<usize>,
    /// Population covariance for the concentration experiment (default identity).
    #[arg(long)]
    pub gram: Option<PathBuf>,
    #[arg(long, default_value_t = 1000)]
    pub reps: usize,
    /// Comma-separated t values.
    #[arg(long, default_value = "1,2,4")]
    pub t: String,
    /// Also write one CSV row per t.
    #[arg(long)]
    pub csv: Option<PathBuf>,
    #[command(flatten)]
    pub common: Common,
}

#[derive(Debug, Clone, Copy, ValueEnum, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Kind {
    Identity,
    Equicorrelation,
    ToeplitzGeometric,
    BlockDiag,
    ExampleIrr,
    ExampleCompat,
    RandomPsd,
}

#[derive(Debug, Args, Serialize)]
pub struct GenerateArgs {
    #[arg(long, value_enum, required_unless_present = "spec")]
    pub kind: Option<Kind>,
    /// Generator description as JSON (any kind, including gaussian_design).
    #[arg(long, conflicts_with = "kind")]
    pub spec: Option<PathBuf>,
    #[arg(long)]
    pub p: Option<usize>,
    #[arg(long)]
    pub s: Option<usize>,
    #[arg(long)]
    pub rho: Option<f64>,
    /// Block sizes for block_diag, comma-separated.
    #[arg(long)]
    pub blocks: Option<String>,
    #[arg(long)]
    pub rank: Option<usize>,
    /// Where to write Y for a gaussian_design spec.
    #[arg(long = "response-out")]
    pub response_out: Option<PathBuf>,
    #[command(flatten)]
    pub common: Common,
}
