//! Pipeline entry point: simulate tomography pools, assemble labeled
//! datasets, run the detectors, and evaluate them.
//!
//! Exit codes: 0 success, 2 invalid arguments, 3 solver non-convergence,
//! 4 I/O or serialization failure.

mod commands;
mod files;

use clap::{Parser, Subcommand, ValueEnum};
use std::path::PathBuf;
use std::process::ExitCode;

#[derive(Parser)]
#[command(name = "ed3", version, about = "Erroneous deviation detection for density matrices")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum StateKind {
    Normal,
    Erroneous,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum DetectMethod {
    Naive,
    Ed3,
    Both,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum SelfTest {
    Oracle,
    Constant,
}

#[derive(Subcommand)]
enum Command {
    /// Simulate a pool of reconstructed density matrices and write it as a
    /// manifest plus one matrix file per member.
    Simulate {
        /// True state the counts are drawn from.
        #[arg(long, value_enum)]
        state: StateKind,
        /// Dephasing strength of the erroneous state (off-diagonal reduced
        /// by this amount).
        #[arg(long)]
        lambda: Option<f64>,
        /// Pool size.
        #[arg(long)]
        n: usize,
        /// Mean photon pairs per measurement setting.
        #[arg(long, default_value_t = 1000.0)]
        pairs: f64,
        /// Base RNG seed; member i uses seed + i.
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Optional phase-shifter miscalibration angle (radians) applied to
        /// the true state before simulation.
        #[arg(long)]
        offset: Option<f64>,
        /// Output directory.
        #[arg(long, env = "ED3_OUT_DIR")]
        out: PathBuf,
    },
    /// Sample a labeled dataset from a normal and an erroneous pool.
    Dataset {
        #[arg(long)]
        normal_pool: PathBuf,
        #[arg(long)]
        erroneous_pool: PathBuf,
        #[arg(long, default_value_t = 25)]
        n_normal: usize,
        #[arg(long, default_value_t = 5)]
        n_erroneous: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Output dataset file.
        #[arg(long, env = "ED3_OUT_DIR")]
        out: PathBuf,
    },
    /// Score a dataset with the naive detector, ED³, or both; writes score
    /// reports and the per-element trace table.
    Detect {
        #[arg(long, value_enum, default_value = "both")]
        method: DetectMethod,
        /// Regularization strength for ED³ (required unless method=naive).
        #[arg(long)]
        gamma: Option<f64>,
        /// Input dataset file.
        #[arg(long = "in")]
        input: PathBuf,
        /// Also write the full decomposition (theta, omegas, zetas).
        #[arg(long)]
        decomposition: bool,
        /// Output directory.
        #[arg(long, env = "ED3_OUT_DIR")]
        out: PathBuf,
    },
    /// Tune gamma on preliminary datasets, then compare AUC distributions of
    /// both detectors over fresh datasets.
    Evaluate {
        #[arg(long)]
        normal_pool: PathBuf,
        #[arg(long)]
        erroneous_pool: PathBuf,
        #[arg(long, default_value_t = 100)]
        n_datasets: usize,
        #[arg(long, default_value_t = 25)]
        n_normal: usize,
        #[arg(long, default_value_t = 5)]
        n_erroneous: usize,
        /// Number of preliminary datasets used for gamma tuning.
        #[arg(long, default_value_t = 10)]
        preliminary: usize,
        /// Fixed gamma; skips tuning.
        #[arg(long)]
        gamma: Option<f64>,
        /// AUC histogram bin count.
        #[arg(long, default_value_t = 20)]
        bins: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Worker threads for dataset evaluation; 0 picks automatically.
        /// Results are identical for any worker count.
        #[arg(long, default_value_t = 0)]
        workers: usize,
        /// Run a harness sanity check instead of the detectors: the oracle
        /// must score AUC 100 on every dataset, the constant detector 50.
        #[arg(long, value_enum)]
        self_test: Option<SelfTest>,
        /// Output directory.
        #[arg(long, env = "ED3_OUT_DIR")]
        out: PathBuf,
    },
}

fn exit_code_for(error: &anyhow::Error) -> u8 {
    if let Some(e) = error.downcast_ref::<ed3::Error>() {
        return match e {
            ed3::Error::InvalidArgument(_) => 2,
            ed3::Error::AdmmDidNotConverge { .. } | ed3::Error::MleDidNotConverge { .. } => 3,
            ed3::Error::Json(_) => 4,
        };
    }
    if error.downcast_ref::<std::io::Error>().is_some() {
        return 4;
    }
    if error.downcast_ref::<serde_json::Error>().is_some() {
        return 4;
    }
    if error.downcast_ref::<commands::UsageError>().is_some() {
        return 2;
    }
    1
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Simulate {
            state,
            lambda,
            n,
            pairs,
            seed,
            offset,
            out,
        } => commands::simulate(state, lambda, n, pairs, seed, offset, &out),
        Command::Dataset {
            normal_pool,
            erroneous_pool,
            n_normal,
            n_erroneous,
            seed,
            out,
        } => commands::dataset(&normal_pool, &erroneous_pool, n_normal, n_erroneous, seed, &out),
        Command::Detect {
            method,
            gamma,
            input,
            decomposition,
            out,
        } => commands::detect(method, gamma, &input, decomposition, &out),
        Command::Evaluate {
            normal_pool,
            erroneous_pool,
            n_datasets,
            n_normal,
            n_erroneous,
            preliminary,
            gamma,
            bins,
            seed,
            workers,
            self_test,
            out,
        } => commands::evaluate(commands::EvaluateArgs {
            normal_pool,
            erroneous_pool,
            n_datasets,
            n_normal,
            n_erroneous,
            preliminary,
            gamma,
            bins,
            seed,
            workers,
            self_test,
            out,
        }),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(error) => {
            eprintln!("error: {error:#}");
            ExitCode::from(exit_code_for(&error))
        }
    }
}
