// `!(x > 0.0)` is used on purpose so that NaN is rejected too.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

mod commands;
mod svg;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

/// Parikh-vector analysis of substitution fixed points.
#[derive(Parser, Debug)]
#[command(name = "bdl", version, about)]
pub struct Cli {
    /// Tolerance for eigenvalue inclusion radii.
    #[arg(long, global = true, default_value_t = 1e-9)]
    pub tol: f64,
    /// Print JSON instead of a text report.
    #[arg(long, global = true)]
    pub json: bool,
    /// Seed for random sampling.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Check a substitution spec and list its seed pairs.
    Validate { spec: PathBuf },
    /// Characteristic polynomial and classified eigenvalues.
    Spectrum { spec: PathBuf },
    /// GUARANTEED / IMPOSSIBLE / OPEN.
    Classify { spec: PathBuf },
    /// Dyadic block maxima of |f·Ψ_n| over a window of the fixed point.
    Scan(ScanArgs),
    /// Geometric representation x_n = ℓ·Ψ_n and its deviation from ηℤ.
    Represent(RepresentArgs),
    /// Scan the image of the fixed point under a morphism.
    Image(ImageArgs),
    /// The F_k prefixes of the A↦BBBCCC example.
    PaperExample {
        #[arg(long, default_value_t = 4)]
        k: usize,
    },
    /// Max of |f·Ψ(w)| over randomly sampled factors w.
    Factors(FactorArgs),
}

#[derive(Args, Debug, Clone)]
pub struct WindowArgs {
    /// Letters on each side of the delimiter.
    #[arg(long, short = 'n')]
    pub window: Option<usize>,
    /// Seed pair as `k,a,b`; defaults to the first one found.
    #[arg(long)]
    pub seed_pair: Option<String>,
}

#[derive(Args, Debug)]
pub struct ScanArgs {
    pub spec: PathBuf,
    /// `auto` or comma-separated components.
    #[arg(long, default_value = "auto")]
    pub normal: String,
    #[command(flatten)]
    pub window: WindowArgs,
    /// Write `n,value` rows.
    #[arg(long)]
    pub csv: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct RepresentArgs {
    pub spec: PathBuf,
    /// Direction h (`auto` or components); rescaled to unit length.
    #[arg(long, default_value = "auto", conflicts_with = "lengths")]
    pub normal: String,
    /// Explicit letter lengths ℓ.
    #[arg(long)]
    pub lengths: Option<String>,
    /// Lattice spacing for explicit lengths; defaults to ℓ·(letter frequencies).
    #[arg(long, requires = "lengths")]
    pub eta: Option<f64>,
    /// Use a literal word `left|right` over the spec's alphabet instead of the fixed point.
    #[arg(long)]
    pub word: Option<String>,
    #[command(flatten)]
    pub window: WindowArgs,
    /// Write `n,x_n,deviation` rows.
    #[arg(long)]
    pub csv: Option<PathBuf>,
    #[arg(long)]
    pub svg: Option<PathBuf>,
    #[arg(long, default_value_t = 960.0)]
    pub svg_width: f64,
    #[arg(long, default_value_t = 320.0)]
    pub svg_height: f64,
    /// Points drawn on each side of the delimiter.
    #[arg(long, default_value_t = 16)]
    pub svg_points: usize,
}

#[derive(Args, Debug)]
pub struct ImageArgs {
    pub spec: PathBuf,
    pub morphism: PathBuf,
    /// `auto` (transported normal), `grid`, or comma-separated components.
    #[arg(long, default_value = "auto")]
    pub normal: String,
    #[command(flatten)]
    pub window: WindowArgs,
    /// Components range over -R..=R for `--normal grid`.
    #[arg(long, default_value_t = 5)]
    pub grid_range: i64,
    /// Grid directions with max below this count as bounded.
    #[arg(long, default_value_t = 50.0)]
    pub grid_threshold: f64,
    #[arg(long)]
    pub csv: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct FactorArgs {
    pub spec: PathBuf,
    #[arg(long, default_value = "auto")]
    pub normal: String,
    #[command(flatten)]
    pub window: WindowArgs,
    #[arg(long, default_value_t = 10_000)]
    pub samples: usize,
    #[arg(long, default_value_t = 1000)]
    pub max_len: usize,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match commands::run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {}", e.message);
            ExitCode::from(e.code)
        }
    }
}
