//! Reproducible experiments over the `hgzeros` library: zero tables, real
//! zero audits, homotopy paths, M-curves, difference tables and asymptotic
//! fits, written as CSV/JSON with a content-addressed result cache.

pub mod cache;
pub mod commands;
pub mod config;
pub mod report;

use std::path::PathBuf;

use clap::{Parser, Subcommand};

use cache::Files;
use commands::{LawArg, Part, Stores, DEFAULT_TILE};
use config::Common;

#[derive(Debug, Parser)]
#[command(name = "hgzeros", version, about = "Zeros of sums of hyperbolic gamma functions")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Isolate and refine every zero in --rect.
    Zeros {
        #[command(flatten)]
        common: Common,
        /// Width of the checkpointed column tiles.
        #[arg(long, default_value_t = DEFAULT_TILE)]
        tile: f64,
    },
    /// Sign-change scan for real zeros on --interval.
    RealZeros {
        #[command(flatten)]
        common: Common,
        #[arg(long, default_value_t = DEFAULT_TILE)]
        tile: f64,
    },
    /// Real-zero count against the total count below the largest real zero.
    Audit {
        #[command(flatten)]
        common: Common,
    },
    /// Track zeros of Xi_k + t·Phi_(k+1) from t = 0 to 1.
    Homotopy {
        #[command(flatten)]
        common: Common,
        /// Zeros of Xi_k (CSV or JSON); otherwise isolated in --rect.
        #[arg(long)]
        seeds: Option<PathBuf>,
    },
    /// M-curve on --interval with alpha step --step.
    Mcurve {
        #[command(flatten)]
        common: Common,
        /// Zero list to compare with the local maxima.
        #[arg(long)]
        zeros: Option<PathBuf>,
        #[arg(long, default_value_t = 0.5)]
        tol: f64,
    },
    /// Forward differences of zero coordinates.
    Diffs {
        #[command(flatten)]
        common: Common,
        /// Zero list (CSV or JSON); otherwise isolated in --rect.
        #[arg(long)]
        input: Option<PathBuf>,
        /// Highest order.
        #[arg(long, default_value_t = 2)]
        k: usize,
        #[arg(long, value_enum, default_value = "im")]
        of: Part,
    },
    /// Zero-locus laws: a prediction at --coordinate, or a fit to zeros.
    Asymptotics {
        #[command(flatten)]
        common: Common,
        #[arg(long, value_enum)]
        law: LawArg,
        #[arg(long)]
        mahler_a: Option<f64>,
        #[arg(long)]
        input: Option<PathBuf>,
        #[arg(long)]
        coordinate: Option<f64>,
    },
}

impl Command {
    pub fn common(&self) -> &Common {
        match self {
            Command::Zeros { common, .. }
            | Command::RealZeros { common, .. }
            | Command::Audit { common }
            | Command::Homotopy { common, .. }
            | Command::Mcurve { common, .. }
            | Command::Diffs { common, .. }
            | Command::Asymptotics { common, .. } => common,
        }
    }
}

/// Runs a command with the given stores and returns its files (not yet
/// written).
pub fn execute(cmd: &Command, stores: &Stores) -> anyhow::Result<Files> {
    let body = || match cmd {
        Command::Zeros { common, tile } => commands::cmd_zeros(common, *tile, stores),
        Command::RealZeros { common, tile } => commands::cmd_real_zeros(common, *tile, stores),
        Command::Audit { common } => commands::cmd_audit(common, stores),
        Command::Homotopy { common, seeds } => commands::cmd_homotopy(common, seeds.as_deref(), stores),
        Command::Mcurve { common, zeros, tol } => commands::cmd_mcurve(common, zeros.as_deref(), *tol, stores),
        Command::Diffs { common, input, k, of } => commands::cmd_diffs(common, input.as_deref(), *k, *of, stores),
        Command::Asymptotics {
            common,
            law,
            mahler_a,
            input,
            coordinate,
        } => commands::cmd_asymptotics(common, *law, *mahler_a, input.as_deref(), *coordinate, stores),
    };
    match cmd.common().jobs {
        Some(0) => Err(report::UsageError::new("--jobs must be at least 1").into()),
        Some(k) => rayon::ThreadPoolBuilder::new().num_threads(k).build()?.install(body),
        None => body(),
    }
}

/// Runs a command and writes its files into `--out`.
pub fn run(cli: &Cli) -> anyhow::Result<Vec<PathBuf>> {
    let common = cli.command.common();
    let stores = Stores::for_common(common);
    let files = execute(&cli.command, &stores)?;
    commands::write_files(&common.out, &files)
}
