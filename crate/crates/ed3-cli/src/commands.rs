//! Command implementations.

use std::fmt;
use std::path::{Path, PathBuf};

use anyhow::{Context, Result};
use serde::Serialize;

use ed3::detector::{
    compute_weights, ed3_scores, naive_scores, solve_ed3, AdmmOptions, DecompositionResult,
    MatrixSet, ScoreReport, DEFAULT_WEIGHT_FLOOR,
};
use ed3::evaluation::{
    auc_distribution, build_dataset, evaluate_pools, roc_to_csv, DatasetPlan, DetectorKind,
    EvaluationConfig, SolverConfig,
};
use ed3::linalg::{bell_state, elementwise_abs, erroneous_state, AbsoluteMatrix};
use ed3::tomography::{generate_pool, PoolManifest};

use crate::files::{load_pool, read_json, write_json, write_text, DatasetFile};
use crate::{DetectMethod, SelfTest, StateKind};

/// Invalid flag combination; maps to exit code 2.
#[derive(Debug)]
pub struct UsageError(pub String);

impl fmt::Display for UsageError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl std::error::Error for UsageError {}

fn usage(msg: impl Into<String>) -> anyhow::Error {
    anyhow::Error::new(UsageError(msg.into()))
}

pub fn simulate(
    state: StateKind,
    lambda: Option<f64>,
    n: usize,
    pairs: f64,
    seed: u64,
    offset: Option<f64>,
    out: &Path,
) -> Result<()> {
    let (state_name, lambda, truth) = match state {
        StateKind::Normal => {
            if lambda.is_some() {
                return Err(usage("--lambda only applies to --state erroneous"));
            }
            ("normal", 0.0, bell_state().density())
        }
        StateKind::Erroneous => {
            let lambda = lambda.unwrap_or(0.1);
            ("erroneous", lambda, erroneous_state(lambda)?)
        }
    };

    let pool = generate_pool(&truth, n, pairs, seed, offset)?;
    let members: Vec<String> = (0..pool.len())
        .map(|i| format!("member_{i:06}.json"))
        .collect();
    for (rho, name) in pool.iter().zip(&members) {
        write_json(&out.join(name), &rho.to_json())?;
    }
    let manifest = PoolManifest {
        state: state_name.to_string(),
        lambda,
        n,
        pairs_per_setting: pairs,
        base_seed: seed,
        systematic_offset: offset,
        members,
    };
    write_json(&out.join("manifest.json"), &manifest)?;

    let mean_coherence = if truth.dim() >= 4 {
        pool.iter()
            .map(|rho| elementwise_abs(rho).get(0, 3))
            .sum::<f64>()
            / pool.len() as f64
    } else {
        f64::NAN
    };
    println!(
        "wrote {state_name} pool of {n} members to {} (mean |(1,4)| = {mean_coherence:.4})",
        out.display()
    );
    Ok(())
}

#[derive(Serialize)]
struct DatasetConfig {
    normal_pool: String,
    erroneous_pool: String,
    n_normal: usize,
    n_erroneous: usize,
    seed: u64,
}

pub fn dataset(
    normal_pool: &Path,
    erroneous_pool: &Path,
    n_normal: usize,
    n_erroneous: usize,
    seed: u64,
    out: &Path,
) -> Result<()> {
    let (_, normal) = load_pool(normal_pool)?;
    let (_, erroneous) = load_pool(erroneous_pool)?;
    let ds = build_dataset(&normal, &erroneous, n_normal, n_erroneous, seed)?;
    let file = DatasetFile {
        labels: Some(ds.labels().to_vec()),
        matrices: (0..ds.len()).map(|k| ds.set().get(k).to_json()).collect(),
        config: Some(serde_json::to_value(DatasetConfig {
            normal_pool: normal_pool.display().to_string(),
            erroneous_pool: erroneous_pool.display().to_string(),
            n_normal,
            n_erroneous,
            seed,
        })?),
    };
    write_json(out, &file)?;
    println!(
        "wrote dataset of {} members ({} erroneous) to {}",
        ds.len(),
        ds.n_erroneous(),
        out.display()
    );
    Ok(())
}

#[derive(Serialize)]
struct DetectConfig {
    method: String,
    gamma: Option<f64>,
    input: String,
    decomposition: bool,
}

struct Ed3Outcome {
    report: ScoreReport,
    result: DecompositionResult,
    converged: bool,
}

pub fn detect(
    method: DetectMethod,
    gamma: Option<f64>,
    input: &Path,
    decomposition: bool,
    out: &Path,
) -> Result<()> {
    let run_naive = matches!(method, DetectMethod::Naive | DetectMethod::Both);
    let run_ed3 = matches!(method, DetectMethod::Ed3 | DetectMethod::Both);
    if run_ed3 && gamma.is_none() {
        return Err(usage("--gamma is required for the ed3 method"));
    }

    let file: DatasetFile = read_json(input)?;
    let matrices = file
        .matrices
        .iter()
        .map(AbsoluteMatrix::from_json)
        .collect::<ed3::Result<Vec<_>>>()?;
    let set = MatrixSet::new(matrices)?;
    let labels = file.labels.clone();

    let method_name = match method {
        DetectMethod::Naive => "naive",
        DetectMethod::Ed3 => "ed3",
        DetectMethod::Both => "both",
    };
    write_json(
        &out.join("run_config.json"),
        &DetectConfig {
            method: method_name.to_string(),
            gamma,
            input: input.display().to_string(),
            decomposition,
        },
    )?;

    let attach = |report: ScoreReport| -> Result<ScoreReport> {
        match &labels {
            Some(l) => Ok(report.with_labels(l.clone())?),
            None => Ok(report),
        }
    };

    let naive_report = if run_naive {
        let report = attach(naive_scores(&set)?)?;
        write_json(&out.join("scores_naive.json"), &report)?;
        Some(report)
    } else {
        None
    };

    let ed3_outcome = if run_ed3 {
        let gamma = gamma.expect("checked above");
        let weights = compute_weights(&set, DEFAULT_WEIGHT_FLOOR)?;
        let (result, converged) =
            match solve_ed3(&set, gamma, &weights, &AdmmOptions::default()) {
                Ok(result) => (result, true),
                Err(ed3::Error::AdmmDidNotConverge { best, .. }) => (*best, false),
                Err(e) => return Err(e.into()),
            };
        let report = attach(ed3_scores(&result))?;
        if converged {
            write_json(&out.join("scores_ed3.json"), &report)?;
            if decomposition {
                write_json(&out.join("decomposition.json"), &result.to_json())?;
            }
        } else {
            // Partial results, flagged as such next to the error message.
            write_json(&out.join("scores_ed3_partial.json"), &report)?;
            write_json(&out.join("decomposition_partial.json"), &result.to_json())?;
        }
        Some(Ed3Outcome {
            report,
            result,
            converged,
        })
    } else {
        None
    };

    write_elements_table(
        &out.join("elements.csv"),
        &set,
        labels.as_deref(),
        naive_report.as_ref(),
        ed3_outcome.as_ref(),
    )?;

    if let Some(outcome) = &ed3_outcome {
        if !outcome.converged {
            return Err(ed3::Error::AdmmDidNotConverge {
                iterations: outcome.result.iterations,
                primal_residual: outcome.result.primal_residual,
                dual_residual: outcome.result.dual_residual,
                best: Box::new(outcome.result.clone()),
            }
            .into());
        }
        println!(
            "ed3: {} of {} members active at gamma {}",
            outcome.result.active_set.iter().filter(|a| **a).count(),
            set.len(),
            outcome.result.gamma
        );
    }
    if naive_report.is_some() {
        println!("naive scores written");
    }
    Ok(())
}

/// Per-member trace table behind the element-series panels: raw (1,2),
/// (1,4), (2,2) entries and scores, plus the same entries of the estimated
/// `theta + omega_k` when ED³ ran.
fn write_elements_table(
    path: &Path,
    set: &MatrixSet,
    labels: Option<&[bool]>,
    naive: Option<&ScoreReport>,
    ed3: Option<&Ed3Outcome>,
) -> Result<()> {
    let track_elements = set.dim() >= 4;
    let mut header = vec!["k".to_string(), "label".to_string()];
    if track_elements {
        header.extend(["raw_12", "raw_14", "raw_22"].map(String::from));
    }
    if naive.is_some() {
        header.push("naive_score".to_string());
    }
    if ed3.is_some() {
        if track_elements {
            header.extend(["est_12", "est_14", "est_22"].map(String::from));
        }
        header.push("ed3_score".to_string());
    }
    let mut csv = header.join(",");
    csv.push('\n');

    for k in 0..set.len() {
        let mut row = vec![
            (k + 1).to_string(),
            labels
                .map(|l| if l[k] { "erroneous" } else { "normal" })
                .unwrap_or("")
                .to_string(),
        ];
        let raw = set.get(k).as_matrix();
        if track_elements {
            row.extend([raw[(0, 1)], raw[(0, 3)], raw[(1, 1)]].map(|v| v.to_string()));
        }
        if let Some(report) = naive {
            row.push(report.scores[k].to_string());
        }
        if let Some(outcome) = ed3 {
            if track_elements {
                let estimate = &outcome.result.theta + &outcome.result.omegas[k];
                row.extend(
                    [estimate[(0, 1)], estimate[(0, 3)], estimate[(1, 1)]]
                        .map(|v| v.to_string()),
                );
            }
            row.push(outcome.report.scores[k].to_string());
        }
        csv.push_str(&row.join(","));
        csv.push('\n');
    }
    write_text(path, &csv)
}

pub struct EvaluateArgs {
    pub normal_pool: PathBuf,
    pub erroneous_pool: PathBuf,
    pub n_datasets: usize,
    pub n_normal: usize,
    pub n_erroneous: usize,
    pub preliminary: usize,
    pub gamma: Option<f64>,
    pub bins: usize,
    pub seed: u64,
    pub workers: usize,
    pub self_test: Option<SelfTest>,
    pub out: PathBuf,
}

#[derive(Serialize)]
struct EvaluateConfig {
    normal_pool: String,
    erroneous_pool: String,
    n_datasets: usize,
    n_normal: usize,
    n_erroneous: usize,
    preliminary: usize,
    gamma: Option<f64>,
    bins: usize,
    seed: u64,
    workers: usize,
    self_test: Option<String>,
}

#[derive(Serialize)]
struct SelfTestReport {
    detector: String,
    mean: f64,
    median: f64,
    auc_values: Vec<f64>,
}

pub fn evaluate(args: EvaluateArgs) -> Result<()> {
    let run = || evaluate_inner(&args);
    if args.workers > 0 {
        rayon::ThreadPoolBuilder::new()
            .num_threads(args.workers)
            .build()
            .context("building worker pool")?
            .install(run)
    } else {
        run()
    }
}

fn evaluate_inner(args: &EvaluateArgs) -> Result<()> {
    let (_, normal) = load_pool(&args.normal_pool)?;
    let (_, erroneous) = load_pool(&args.erroneous_pool)?;

    write_json(
        &args.out.join("run_config.json"),
        &EvaluateConfig {
            normal_pool: args.normal_pool.display().to_string(),
            erroneous_pool: args.erroneous_pool.display().to_string(),
            n_datasets: args.n_datasets,
            n_normal: args.n_normal,
            n_erroneous: args.n_erroneous,
            preliminary: args.preliminary,
            gamma: args.gamma,
            bins: args.bins,
            seed: args.seed,
            workers: args.workers,
            self_test: args.self_test.map(|s| {
                match s {
                    SelfTest::Oracle => "oracle",
                    SelfTest::Constant => "constant",
                }
                .to_string()
            }),
        },
    )?;

    if let Some(kind) = args.self_test {
        let (name, detector) = match kind {
            SelfTest::Oracle => ("oracle", DetectorKind::OracleLabels),
            SelfTest::Constant => ("constant", DetectorKind::ConstantScore),
        };
        let plan = DatasetPlan {
            n_datasets: args.n_datasets,
            n_normal: args.n_normal,
            n_erroneous: args.n_erroneous,
            base_seed: args.seed,
        };
        let summary = auc_distribution(
            &normal,
            &erroneous,
            &plan,
            &detector,
            &SolverConfig::default(),
            args.bins,
        )?;
        write_json(
            &args.out.join("selftest.json"),
            &SelfTestReport {
                detector: name.to_string(),
                mean: summary.mean,
                median: summary.median,
                auc_values: summary.auc_values,
            },
        )?;
        println!("self-test {name}: mean AUC {:.2}", summary.mean);
        return Ok(());
    }

    let config = EvaluationConfig {
        n_preliminary: args.preliminary,
        n_datasets: args.n_datasets,
        n_normal: args.n_normal,
        n_erroneous: args.n_erroneous,
        base_seed: args.seed,
        gamma: args.gamma,
        gamma_grid: None,
        n_bins: args.bins,
        solver: SolverConfig::default(),
    };
    let outcome = evaluate_pools(&normal, &erroneous, &config)?;

    write_json(&args.out.join("report.json"), &outcome.report)?;
    for (i, curve) in outcome.naive_curves.iter().enumerate() {
        write_text(&args.out.join(format!("roc/naive_{i:03}.csv")), &roc_to_csv(curve))?;
    }
    for (i, curve) in outcome.ed3_curves.iter().enumerate() {
        write_text(&args.out.join(format!("roc/ed3_{i:03}.csv")), &roc_to_csv(curve))?;
    }

    let mut histogram = String::from("bin_lo,bin_hi,naive,ed3\n");
    let report = &outcome.report;
    for i in 0..report.naive.histogram_counts.len() {
        histogram.push_str(&format!(
            "{},{},{},{}\n",
            report.histogram_bins[i],
            report.histogram_bins[i + 1],
            report.naive.histogram_counts[i],
            report.ed3.histogram_counts[i],
        ));
    }
    write_text(&args.out.join("histogram.csv"), &histogram)?;

    println!(
        "gamma {:.6}: naive mean AUC {:.2} / median {:.2}; ed3 mean AUC {:.2} / median {:.2}; paired delta {:.2}",
        report.gamma,
        report.naive.mean,
        report.naive.median,
        report.ed3.mean,
        report.ed3.median,
        report.paired_delta_mean
    );
    Ok(())
}
