mod commands;
mod io;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use momentype::estimators::Method;
use momentype::model::Family;

/// Moment-type estimators for the Dirichlet and multivariate Gamma families.
#[derive(Debug, Parser)]
#[command(name = "momentype", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Fit one estimator to a CSV sample and print the result as JSON.
    Fit(FitArgs),
    /// Draw a sample and write it as CSV.
    Sample(SampleArgs),
    /// Check the closed-form moment catalog against simulated draws.
    MomentsCheck(CheckArgs),
    /// Monte Carlo bias, variance and RMSE over a parameter grid.
    Sweep(SweepArgs),
    /// Analytic asymptotic variances, over a grid or at one point.
    Avar(AvarArgs),
}

#[derive(Debug, Args)]
struct ParamArgs {
    #[arg(long)]
    family: Family,
    /// Shape parameters, comma separated.
    #[arg(long, value_delimiter = ',', required = true)]
    alpha: Vec<f64>,
    /// Scale parameter (multivariate Gamma only).
    #[arg(long)]
    beta: Option<f64>,
}

#[derive(Debug, Args)]
struct FitArgs {
    #[arg(long)]
    family: Family,
    #[arg(long)]
    method: Method,
    /// CSV with header x1..xk; `-` reads standard input.
    #[arg(long, short)]
    input: PathBuf,
    /// Bias-corrected SAME (multivariate Gamma, with `--method same`).
    #[arg(long)]
    unbiased: bool,
    /// Rescale Dirichlet rows whose sums are within 1e-6 of one.
    #[arg(long)]
    renormalize: bool,
    #[arg(long, default_value_t = 1e-10)]
    tolerance: f64,
    #[arg(long, default_value_t = 100)]
    max_iter: usize,
}

#[derive(Debug, Args)]
struct SampleArgs {
    #[command(flatten)]
    params: ParamArgs,
    #[arg(long, short)]
    n: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, short)]
    output: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct CheckArgs {
    #[command(flatten)]
    params: ParamArgs,
    #[arg(long, default_value_t = 1_000_000)]
    draws: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, short)]
    output: Option<PathBuf>,
    /// Scales the closed-form value of the named entry by 1.05.
    #[arg(long, hide = true)]
    corrupt_entry: Option<String>,
}

#[derive(Debug, Args)]
struct GridArgs {
    /// Regenerate the data of a figure (1, 3, 4 for sweep; 2, 5 for avar).
    #[arg(long, conflicts_with_all = ["family", "alpha", "beta", "param_index", "grid", "methods"])]
    figure: Option<u8>,
    #[arg(long, required_unless_present = "figure")]
    family: Option<Family>,
    #[arg(long, value_delimiter = ',', required_unless_present = "figure")]
    alpha: Vec<f64>,
    #[arg(long)]
    beta: Option<f64>,
    /// Swept coordinate of (α₁..α_k, β), from 1.
    #[arg(long, default_value_t = 1)]
    param_index: usize,
    /// `lo:hi:count` or a comma-separated list.
    #[arg(long)]
    grid: Option<String>,
    /// Estimator tags, comma separated; defaults to all for the family.
    #[arg(long, value_delimiter = ',')]
    methods: Vec<Method>,
    /// Output CSV; multi-panel figures get `_p1`, `_p2`, … suffixes.
    #[arg(long, short)]
    output: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct SweepArgs {
    #[command(flatten)]
    grid: GridArgs,
    #[arg(long, value_delimiter = ',', default_values_t = [20, 50])]
    n: Vec<usize>,
    #[arg(long, short, default_value_t = 10_000)]
    m: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

#[derive(Debug, Args)]
struct AvarArgs {
    #[command(flatten)]
    grid: GridArgs,
}

/// A failed command: the exit code and the message for standard error.
#[derive(Debug)]
pub struct Fail {
    pub code: u8,
    pub message: String,
}

impl Fail {
    pub const INPUT: u8 = 2;
    pub const NO_ESTIMATE: u8 = 3;
    pub const VERIFICATION: u8 = 4;

    pub fn input(message: String) -> Self {
        Self { code: Self::INPUT, message }
    }

    pub fn io(e: csv::Error) -> Self {
        Self::input(format!("write failed: {e}"))
    }
}

impl From<momentype::Error> for Fail {
    fn from(e: momentype::Error) -> Self {
        Self::input(e.to_string())
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Fit(a) => commands::fit(a),
        Command::Sample(a) => commands::sample(a),
        Command::MomentsCheck(a) => commands::moments_check(a),
        Command::Sweep(a) => commands::sweep(a),
        Command::Avar(a) => commands::avar(a),
    };
    match result {
        Ok(code) => ExitCode::from(code),
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}
