//! `khlab`: Betti tables, Laplacian gaps, Jones polynomials and graph bounds
//! from PD codes.

mod commands;
mod input;

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use khlab::{ErrorCategory, SpectralConfig};

use commands::{Common, EmulateArgs};
use input::{parse_bidegree, InputArgs};

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error(transparent)]
    Core(#[from] khlab::Error),
    #[error("i/o error: {0}")]
    Io(String),
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::Core(e) => match e.category() {
                ErrorCategory::Input => 2,
                ErrorCategory::Resource => 3,
                ErrorCategory::Numerical => 4,
            },
            CliError::Io(_) => 2,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Parser)]
#[command(name = "khlab", version, about = "Khovanov homology and Hodge Laplacian spectra of knot diagrams")]
struct Cli {
    /// Worker threads (default: all cores).
    #[arg(long, global = true, env = "KHLAB_JOBS")]
    jobs: Option<usize>,
    /// Write output here instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[arg(long, global = true, value_enum, default_value = "csv")]
    format: Format,
    /// Seed for iterative eigensolvers and the emulator.
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Largest block given a full dense eigendecomposition.
    #[arg(long, global = true)]
    dense_cutoff: Option<usize>,
    /// Largest block solved densely when only the gap is needed.
    #[arg(long, global = true)]
    gap_dense_cutoff: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Betti numbers at every bidegree (published gradings).
    Betti {
        #[command(flatten)]
        input: InputArgs,
    },
    /// Spectral gap of the Hodge Laplacian per bidegree.
    Gap {
        #[command(flatten)]
        input: InputArgs,
        /// Restrict to one published bidegree `i,j`.
        #[arg(long, value_parser = parse_bidegree, allow_hyphen_values = true)]
        bidegree: Option<(i32, i32)>,
        /// Only the per-knot minimum and average gap.
        #[arg(long)]
        summary: bool,
    },
    /// Jones polynomial via the Kauffman bracket.
    Jones {
        #[command(flatten)]
        input: InputArgs,
    },
    /// Histogram of nonzero Laplacian eigenvalues pooled over the input.
    Dos {
        #[command(flatten)]
        input: InputArgs,
        #[arg(long, default_value_t = 0.05)]
        bin: f64,
    },
    /// Degree-zero graph invariants and spectral bounds.
    GraphBounds {
        #[command(flatten)]
        input: InputArgs,
        /// Number of `1` labels; all values when omitted.
        #[arg(long)]
        k: Option<usize>,
        /// Also write the weighted edge lists to this file.
        #[arg(long)]
        edges: Option<PathBuf>,
    },
    /// Full against reduced complex for twisted unknots.
    TwistReport {
        #[command(flatten)]
        input: InputArgs,
    },
    /// Sampled Betti estimate from the kernel-projection pipeline.
    Emulate {
        #[command(flatten)]
        input: InputArgs,
        /// Published bidegree `i,j`.
        #[arg(long, value_parser = parse_bidegree, allow_hyphen_values = true)]
        bidegree: (i32, i32),
        /// Gibbs temperature; defaults to the spectral gap.
        #[arg(long)]
        temperature: Option<f64>,
        #[arg(long, default_value_t = 100_000)]
        shots: u64,
    },
}

fn run(cli: Cli) -> Result<(), CliError> {
    if let Some(jobs) = cli.jobs {
        // Fails only if a pool already exists, which cannot happen here.
        let _ = rayon::ThreadPoolBuilder::new().num_threads(jobs.max(1)).build_global();
    }
    let defaults = SpectralConfig::default();
    let cfg = SpectralConfig {
        dense_cutoff: cli.dense_cutoff.unwrap_or(defaults.dense_cutoff),
        gap_dense_cutoff: cli.gap_dense_cutoff.unwrap_or(defaults.gap_dense_cutoff),
        seed: cli.seed.unwrap_or(defaults.seed),
        ..defaults
    };
    let common = |command| Common { format: cli.format, cfg, command };
    let text = match &cli.command {
        Command::Betti { input } => commands::betti(&common("betti"), &input.diagrams()?)?,
        Command::Gap { input, bidegree, summary } => commands::gap(&common("gap"), &input.diagrams()?, *bidegree, *summary)?,
        Command::Jones { input } => commands::jones_cmd(&common("jones"), &input.diagrams()?)?,
        Command::Dos { input, bin } => commands::dos(&common("dos"), &input.diagrams()?, *bin)?,
        Command::GraphBounds { input, k, edges } => {
            commands::graph_bounds(&common("graph-bounds"), &input.diagrams()?, *k, edges.as_deref())?
        }
        Command::TwistReport { input } => commands::twist_report(&common("twist-report"), &input.diagrams()?)?,
        Command::Emulate { input, bidegree, temperature, shots } => commands::emulate(
            &common("emulate"),
            &input.diagrams()?,
            &EmulateArgs { bidegree: *bidegree, temperature: *temperature, shots: *shots },
        )?,
    };
    match &cli.out {
        Some(path) => std::fs::write(path, text).map_err(|e| CliError::Io(format!("{}: {e}", path.display()))),
        None => std::io::stdout().lock().write_all(text.as_bytes()).map_err(|e| CliError::Io(e.to_string())),
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("khlab: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
