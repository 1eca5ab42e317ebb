//! Command-line harness around the matchest estimators.
//!
//! Subcommands: `gen` writes graph files, `exact` runs the oracles, `ls`
//! runs the sampling estimator, `stream` the combined streaming algorithm,
//! `protocol` the simultaneous-protocol simulator, and `bench` sweeps a
//! generated corpus into a CSV. Seeds are mandatory wherever randomness is
//! involved; identical arguments produce identical outputs apart from the
//! report timestamp.
//!
//! Exit codes: 0 success, 2 usage error, 3 input-format error, 4 capability
//! error (an exact oracle's size cap was exceeded).

mod commands;
mod sweep;

use std::process::ExitCode;

use clap::{Parser, Subcommand};

use matchest::protocol::TauRule;

#[derive(Parser)]
#[command(name = "matchest", version, about = "Matching-size estimation harness")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, clap::ValueEnum)]
enum TauArg {
    /// Switch to the sampling estimator at z3 >= k.
    K,
    /// The verbatim threshold z3 >= k/12.5.
    #[value(name = "k-over-12.5")]
    KOver12_5,
}

impl From<TauArg> for TauRule {
    fn from(value: TauArg) -> Self {
        match value {
            TauArg::K => TauRule::K,
            TauArg::KOver12_5 => TauRule::KOver12_5,
        }
    }
}

#[derive(Clone, Copy, clap::ValueEnum)]
enum PartitionArg {
    Random,
    RoundRobin,
}

#[derive(Subcommand)]
enum Command {
    /// Generate a graph file with a provenance header.
    Gen {
        #[arg(long)]
        family: String,
        #[arg(long)]
        n: usize,
        /// Forest count for the forest-union family.
        #[arg(long)]
        alpha: Option<usize>,
        #[arg(long)]
        seed: u64,
        /// Output path; stdout when omitted.
        #[arg(long)]
        out: Option<String>,
    },
    /// Exact oracles: maximum matching, locally-superior count, the
    /// degree estimator, degeneracy.
    Exact {
        #[arg(long)]
        graph: String,
        /// Also run the exhaustive arboricity density scan (at most 20
        /// vertices; larger graphs exit with the capability code).
        #[arg(long)]
        density: bool,
        #[arg(long)]
        out: Option<String>,
    },
    /// The vertex-sampling estimator of the locally-superior count.
    Ls {
        #[arg(long)]
        graph: String,
        /// Sample size per repetition.
        #[arg(long)]
        s: usize,
        #[arg(long)]
        epsilon: f64,
        #[arg(long)]
        seed: u64,
        /// Repetitions; defaults to ceil(8 / epsilon^2).
        #[arg(long)]
        r: Option<usize>,
        #[arg(long)]
        out: Option<String>,
    },
    /// The combined one-pass streaming approximation.
    Stream {
        /// Stream file in the `v: u1 u2` format.
        #[arg(long, conflicts_with = "graph")]
        stream: Option<String>,
        /// Graph file; a random arrival order is derived from the seed.
        #[arg(long, required_unless_present = "stream")]
        graph: Option<String>,
        #[arg(long)]
        epsilon: f64,
        #[arg(long)]
        seed: u64,
        #[arg(long)]
        out: Option<String>,
    },
    /// The simultaneous vertex-partition protocol simulator.
    Protocol {
        #[arg(long)]
        graph: String,
        /// Number of players the vertex set is split among.
        #[arg(long, alias = "t")]
        players: usize,
        #[arg(long)]
        epsilon: f64,
        #[arg(long)]
        seed: u64,
        #[arg(long, value_enum, default_value = "k")]
        tau: TauArg,
        #[arg(long, value_enum, default_value = "random")]
        partition: PartitionArg,
        /// Dump all player messages to this JSON file.
        #[arg(long)]
        transcript: Option<String>,
        #[arg(long)]
        out: Option<String>,
    },
    /// Sweep a generated corpus and emit one CSV row per (trial, estimator).
    Bench {
        #[arg(long)]
        family: String,
        #[arg(long)]
        n: usize,
        #[arg(long)]
        alpha: Option<usize>,
        #[arg(long)]
        trials: usize,
        #[arg(long)]
        seed: u64,
        #[arg(long)]
        epsilon: f64,
        /// Also run the protocol with this many players per trial.
        #[arg(long)]
        players: Option<usize>,
        #[arg(long, value_enum, default_value = "k")]
        tau: TauArg,
        /// CSV output path; stdout when omitted.
        #[arg(long)]
        out: Option<String>,
    },
}

/// Failure with the exit code dictated by its class.
pub struct CliError {
    code: u8,
    message: String,
}

impl CliError {
    fn usage(message: impl Into<String>) -> Self {
        CliError {
            code: 2,
            message: message.into(),
        }
    }
}

impl From<matchest::Error> for CliError {
    fn from(err: matchest::Error) -> Self {
        let code = match &err {
            matchest::Error::GraphFormat { .. } | matchest::Error::StreamFormat { .. } => 3,
            matchest::Error::Capability(_) => 4,
            _ => 2,
        };
        CliError {
            code,
            message: err.to_string(),
        }
    }
}

impl From<std::io::Error> for CliError {
    fn from(err: std::io::Error) -> Self {
        CliError {
            code: 3,
            message: err.to_string(),
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Gen {
            family,
            n,
            alpha,
            seed,
            out,
        } => commands::run_gen(&family, n, alpha, seed, out.as_deref()),
        Command::Exact {
            graph,
            density,
            out,
        } => commands::run_exact(&graph, density, out.as_deref()),
        Command::Ls {
            graph,
            s,
            epsilon,
            seed,
            r,
            out,
        } => commands::run_ls(&graph, s, epsilon, seed, r, out.as_deref()),
        Command::Stream {
            stream,
            graph,
            epsilon,
            seed,
            out,
        } => commands::run_stream(
            stream.as_deref(),
            graph.as_deref(),
            epsilon,
            seed,
            out.as_deref(),
        ),
        Command::Protocol {
            graph,
            players,
            epsilon,
            seed,
            tau,
            partition,
            transcript,
            out,
        } => commands::run_protocol(commands::ProtocolArgs {
            graph: &graph,
            players,
            epsilon,
            seed,
            tau: tau.into(),
            round_robin: matches!(partition, PartitionArg::RoundRobin),
            transcript: transcript.as_deref(),
            out: out.as_deref(),
        }),
        Command::Bench {
            family,
            n,
            alpha,
            trials,
            seed,
            epsilon,
            players,
            tau,
            out,
        } => sweep::run_bench(sweep::BenchArgs {
            family: &family,
            n,
            alpha,
            trials,
            seed,
            epsilon,
            players,
            tau: tau.into(),
            out: out.as_deref(),
        }),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {}", e.message);
            ExitCode::from(e.code)
        }
    }
}
