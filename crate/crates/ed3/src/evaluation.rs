//! Evaluation protocol: dataset assembly, gamma tuning on preliminary
//! datasets, ROC curves over a threshold sweep, and AUC distributions
//! comparing ED³ against the naive baseline.
//!
//! Per-dataset seeds are derived from the base seed by a fixed counter
//! scheme, so distributions are reproducible and independent of the worker
//! count used to parallelize them.

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::detector::{
    compute_weights, ed3_scores, naive_scores, solve_ed3, unconstrained_dual_norms, AdmmOptions,
    MatrixSet, Method, ScoreReport, DEFAULT_WEIGHT_FLOOR,
};
use crate::linalg::AbsoluteMatrix;
use crate::{Error, Result};

/// Offset separating preliminary-dataset seeds from evaluation-dataset seeds
/// within one base seed.
const PRELIMINARY_SEED_OFFSET: u64 = 0xA000_0000;

/// Matrix set with ground-truth labels (`true` = erroneous).
#[derive(Debug, Clone)]
pub struct LabeledDataset {
    set: MatrixSet,
    labels: Vec<bool>,
    n_normal: usize,
    n_erroneous: usize,
}

impl LabeledDataset {
    /// Erroneous members must be rare: `n_erroneous < K/2`.
    pub fn new(set: MatrixSet, labels: Vec<bool>) -> Result<Self> {
        if labels.len() != set.len() {
            return Err(Error::invalid("one label per matrix required"));
        }
        let n_erroneous = labels.iter().filter(|l| **l).count();
        let n_normal = labels.len() - n_erroneous;
        if 2 * n_erroneous >= labels.len() {
            return Err(Error::invalid(format!(
                "erroneous members must be rare: {n_erroneous} of {}",
                labels.len()
            )));
        }
        Ok(Self {
            set,
            labels,
            n_normal,
            n_erroneous,
        })
    }

    pub fn set(&self) -> &MatrixSet {
        &self.set
    }

    pub fn labels(&self) -> &[bool] {
        &self.labels
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn n_normal(&self) -> usize {
        self.n_normal
    }

    pub fn n_erroneous(&self) -> usize {
        self.n_erroneous
    }
}

/// Samples `n_normal + n_erroneous` members without replacement from the two
/// pools and shuffles them. Deterministic given the seed.
pub fn build_dataset(
    normal_pool: &[AbsoluteMatrix],
    erroneous_pool: &[AbsoluteMatrix],
    n_normal: usize,
    n_erroneous: usize,
    rng_seed: u64,
) -> Result<LabeledDataset> {
    if n_normal > normal_pool.len() {
        return Err(Error::invalid(format!(
            "normal pool exhausted: need {n_normal}, have {}",
            normal_pool.len()
        )));
    }
    if n_erroneous > erroneous_pool.len() {
        return Err(Error::invalid(format!(
            "erroneous pool exhausted: need {n_erroneous}, have {}",
            erroneous_pool.len()
        )));
    }
    if n_normal + n_erroneous == 0 {
        return Err(Error::invalid("dataset must not be empty"));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(rng_seed);
    let normal_picks = rand::seq::index::sample(&mut rng, normal_pool.len(), n_normal);
    let erroneous_picks = rand::seq::index::sample(&mut rng, erroneous_pool.len(), n_erroneous);
    let mut members: Vec<(AbsoluteMatrix, bool)> = normal_picks
        .iter()
        .map(|i| (normal_pool[i].clone(), false))
        .chain(
            erroneous_picks
                .iter()
                .map(|i| (erroneous_pool[i].clone(), true)),
        )
        .collect();
    members.shuffle(&mut rng);
    let (matrices, labels): (Vec<_>, Vec<_>) = members.into_iter().unzip();
    LabeledDataset::new(MatrixSet::new(matrices)?, labels)
}

/// True/false discovery rates at one threshold with strict detection
/// `score > threshold`.
pub fn confusion_at_threshold(report: &ScoreReport, threshold: f64) -> Result<(f64, f64)> {
    let labels = report
        .labels
        .as_ref()
        .ok_or_else(|| Error::invalid("score report carries no labels"))?;
    let n_erroneous = labels.iter().filter(|l| **l).count();
    let n_normal = labels.len() - n_erroneous;
    if n_erroneous == 0 || n_normal == 0 {
        return Err(Error::invalid(
            "confusion rates need at least one label of each kind",
        ));
    }
    let mut true_hits = 0usize;
    let mut false_hits = 0usize;
    for (score, &erroneous) in report.scores.iter().zip(labels) {
        if *score > threshold {
            if erroneous {
                true_hits += 1;
            } else {
                false_hits += 1;
            }
        }
    }
    Ok((
        true_hits as f64 / n_erroneous as f64,
        false_hits as f64 / n_normal as f64,
    ))
}

/// ROC staircase in the FDR-TDR plane.
#[derive(Debug, Clone, PartialEq)]
pub struct RocCurve {
    /// `(fdr, tdr)` pairs, non-decreasing in both coordinates from (0,0)
    /// to (1,1).
    pub points: Vec<(f64, f64)>,
    /// Matching detection thresholds, descending.
    pub thresholds: Vec<f64>,
}

/// Threshold sweep over all distinct score values plus sentinels beyond both
/// ends. Consecutive duplicate points keep the smallest threshold that
/// produces them.
pub fn roc_curve(report: &ScoreReport) -> Result<RocCurve> {
    let mut distinct: Vec<f64> = report.scores.clone();
    distinct.sort_by(|a, b| b.total_cmp(a));
    distinct.dedup();
    if distinct.is_empty() {
        return Err(Error::invalid("empty score report"));
    }
    let mut thresholds = Vec::with_capacity(distinct.len() + 2);
    thresholds.push(distinct[0] + 1.0);
    thresholds.extend(&distinct);
    thresholds.push(distinct[distinct.len() - 1] - 1.0);

    let mut points: Vec<(f64, f64)> = Vec::with_capacity(thresholds.len());
    let mut kept_thresholds = Vec::with_capacity(thresholds.len());
    for t in thresholds {
        let (tdr, fdr) = confusion_at_threshold(report, t)?;
        if points.last() == Some(&(fdr, tdr)) {
            // Same staircase corner reached by a lower threshold.
            *kept_thresholds.last_mut().expect("non-empty") = t;
        } else {
            points.push((fdr, tdr));
            kept_thresholds.push(t);
        }
    }
    Ok(RocCurve {
        points,
        thresholds: kept_thresholds,
    })
}

/// Area under the ROC staircase, in percent, by the trapezoid rule. Equals
/// the pair-ordering (Mann-Whitney) statistic with ties counted one half.
pub fn auc(curve: &RocCurve) -> f64 {
    let mut area = 0.0;
    for pair in curve.points.windows(2) {
        let (fdr0, tdr0) = pair[0];
        let (fdr1, tdr1) = pair[1];
        area += (fdr1 - fdr0) * (tdr0 + tdr1) * 0.5;
    }
    area * 100.0
}

/// `threshold,fdr,tdr` rows, one per staircase corner.
pub fn roc_to_csv(curve: &RocCurve) -> String {
    let mut out = String::from("threshold,fdr,tdr\n");
    for (threshold, (fdr, tdr)) in curve.thresholds.iter().zip(&curve.points) {
        out.push_str(&format!("{threshold},{fdr},{tdr}\n"));
    }
    out
}

/// Solver knobs shared by every ED³ invocation of the harness.
#[derive(Debug, Clone, PartialEq)]
pub struct SolverConfig {
    pub admm: AdmmOptions,
    pub weight_floor: f64,
}

impl Default for SolverConfig {
    fn default() -> Self {
        Self {
            admm: AdmmOptions::default(),
            weight_floor: DEFAULT_WEIGHT_FLOOR,
        }
    }
}

/// Which scoring rule a distribution run uses.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum DetectorKind {
    Naive,
    Ed3 { gamma: f64 },
    /// Scores equal to the ground-truth labels. Harness sanity check: every
    /// AUC must be 100.
    OracleLabels,
    /// Constant scores. Harness sanity check: every AUC must be 50.
    ConstantScore,
}

/// Scores one labeled dataset with the chosen detector.
pub fn score_dataset(
    dataset: &LabeledDataset,
    detector: &DetectorKind,
    solver: &SolverConfig,
) -> Result<ScoreReport> {
    let report = match detector {
        DetectorKind::Naive => naive_scores(dataset.set())?,
        DetectorKind::Ed3 { gamma } => {
            let weights = compute_weights(dataset.set(), solver.weight_floor)?;
            let result = solve_ed3(dataset.set(), *gamma, &weights, &solver.admm)?;
            ed3_scores(&result)
        }
        DetectorKind::OracleLabels => ScoreReport::new(
            Method::Ed3,
            dataset
                .labels()
                .iter()
                .map(|&l| if l { 1.0 } else { 0.0 })
                .collect(),
        )?,
        DetectorKind::ConstantScore => {
            ScoreReport::new(Method::Naive, vec![0.5; dataset.len()])?
        }
    };
    report.with_labels(dataset.labels().to_vec())
}

/// Histogram of AUC values over fixed-width bins.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Histogram {
    pub edges: Vec<f64>,
    pub counts: Vec<u64>,
}

impl Histogram {
    /// `n_bins` equal bins over [0, 100]; the value 100 lands in the last
    /// bin.
    pub fn over_percent(values: &[f64], n_bins: usize) -> Self {
        let width = 100.0 / n_bins as f64;
        let edges: Vec<f64> = (0..=n_bins).map(|i| i as f64 * width).collect();
        let mut counts = vec![0u64; n_bins];
        for &v in values {
            let bin = ((v / width) as usize).min(n_bins - 1);
            counts[bin] += 1;
        }
        Self { edges, counts }
    }
}

/// AUC values over many datasets plus summary statistics.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AucSummary {
    pub auc_values: Vec<f64>,
    pub mean: f64,
    pub median: f64,
    pub histogram: Histogram,
}

impl AucSummary {
    pub fn from_values(auc_values: Vec<f64>, n_bins: usize) -> Self {
        let mean = auc_values.iter().sum::<f64>() / auc_values.len().max(1) as f64;
        let mut sorted = auc_values.clone();
        sorted.sort_by(f64::total_cmp);
        let median = if sorted.is_empty() {
            f64::NAN
        } else if sorted.len() % 2 == 1 {
            sorted[sorted.len() / 2]
        } else {
            0.5 * (sorted[sorted.len() / 2 - 1] + sorted[sorted.len() / 2])
        };
        let histogram = Histogram::over_percent(&auc_values, n_bins);
        Self {
            auc_values,
            mean,
            median,
            histogram,
        }
    }
}

/// How many datasets to draw and at what composition.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DatasetPlan {
    pub n_datasets: usize,
    pub n_normal: usize,
    pub n_erroneous: usize,
    /// Dataset `i` uses seed `base_seed + i`.
    pub base_seed: u64,
}

/// Scores `plan.n_datasets` independently sampled datasets with one detector
/// and summarizes the AUC distribution. Parallel over datasets;
/// deterministic regardless of the worker count.
pub fn auc_distribution(
    normal_pool: &[AbsoluteMatrix],
    erroneous_pool: &[AbsoluteMatrix],
    plan: &DatasetPlan,
    detector: &DetectorKind,
    solver: &SolverConfig,
    n_bins: usize,
) -> Result<AucSummary> {
    let (summary, _) = auc_distribution_with_curves(
        normal_pool,
        erroneous_pool,
        plan,
        detector,
        solver,
        n_bins,
    )?;
    Ok(summary)
}

/// [`auc_distribution`] variant that also returns each dataset's ROC curve.
pub fn auc_distribution_with_curves(
    normal_pool: &[AbsoluteMatrix],
    erroneous_pool: &[AbsoluteMatrix],
    plan: &DatasetPlan,
    detector: &DetectorKind,
    solver: &SolverConfig,
    n_bins: usize,
) -> Result<(AucSummary, Vec<RocCurve>)> {
    if plan.n_datasets == 0 {
        return Err(Error::invalid("need at least one dataset"));
    }
    let curves: Vec<RocCurve> = (0..plan.n_datasets)
        .into_par_iter()
        .map(|i| {
            let dataset = build_dataset(
                normal_pool,
                erroneous_pool,
                plan.n_normal,
                plan.n_erroneous,
                plan.base_seed.wrapping_add(i as u64),
            )?;
            let report = score_dataset(&dataset, detector, solver)?;
            roc_curve(&report)
        })
        .collect::<Result<_>>()?;
    let values: Vec<f64> = curves.iter().map(auc).collect();
    Ok((AucSummary::from_values(values, n_bins), curves))
}

/// Median over k of the unconstrained dual norms: the natural scale of the
/// meaningful gamma range for one dataset.
pub fn gamma_scale(set: &MatrixSet, weight_floor: f64) -> Result<f64> {
    let weights = compute_weights(set, weight_floor)?;
    let mut norms = unconstrained_dual_norms(set, &weights);
    norms.sort_by(f64::total_cmp);
    Ok(norms[norms.len() / 2])
}

/// 16 logarithmically spaced gammas spanning `[0.01, 100]` times the median
/// gamma scale of the preliminary datasets. The top end provably deactivates
/// every group, bracketing the useful range.
pub fn default_gamma_grid(preliminary: &[LabeledDataset], weight_floor: f64) -> Result<Vec<f64>> {
    if preliminary.is_empty() {
        return Err(Error::invalid("no preliminary datasets"));
    }
    let mut scales = preliminary
        .iter()
        .map(|ds| gamma_scale(ds.set(), weight_floor))
        .collect::<Result<Vec<f64>>>()?;
    scales.sort_by(f64::total_cmp);
    let scale = scales[scales.len() / 2];
    let n = 16;
    Ok((0..n)
        .map(|i| scale * 10f64.powf(-2.0 + 4.0 * i as f64 / (n - 1) as f64))
        .collect())
}

/// Picks the gamma maximizing the minimum AUC across the preliminary
/// datasets; ties break toward the larger gamma (sparser solutions). A gamma
/// is disqualified if the solver fails to converge or returns a degenerate
/// split on any dataset.
pub fn tune_gamma(
    preliminary: &[LabeledDataset],
    grid: &[f64],
    solver: &SolverConfig,
) -> Result<f64> {
    if grid.is_empty() || preliminary.is_empty() {
        return Err(Error::invalid("tuning needs a grid and datasets"));
    }
    let mut ordered: Vec<f64> = grid.to_vec();
    ordered.sort_by(f64::total_cmp);

    let candidates: Vec<(f64, Option<f64>)> = ordered
        .par_iter()
        .map(|&gamma| {
            let mut min_auc = f64::INFINITY;
            for dataset in preliminary {
                let weights = match compute_weights(dataset.set(), solver.weight_floor) {
                    Ok(w) => w,
                    Err(_) => return (gamma, None),
                };
                let result = match solve_ed3(dataset.set(), gamma, &weights, &solver.admm) {
                    Ok(r) => r,
                    Err(_) => return (gamma, None),
                };
                if result.degenerate {
                    return (gamma, None);
                }
                let report = match ed3_scores(&result).with_labels(dataset.labels().to_vec()) {
                    Ok(r) => r,
                    Err(_) => return (gamma, None),
                };
                match roc_curve(&report) {
                    Ok(curve) => min_auc = min_auc.min(auc(&curve)),
                    Err(_) => return (gamma, None),
                }
            }
            (gamma, Some(min_auc))
        })
        .collect();

    let mut best: Option<(f64, f64)> = None;
    for (gamma, min_auc) in candidates {
        if let Some(score) = min_auc {
            // >= so that equal scores prefer the larger gamma.
            if best.map_or(true, |(_, best_score)| score >= best_score) {
                best = Some((gamma, score));
            }
        }
    }
    best.map(|(gamma, _)| gamma)
        .ok_or_else(|| Error::invalid("every gamma in the grid was disqualified"))
}

/// Per-method slice of the evaluation report.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MethodSummary {
    pub auc_values: Vec<f64>,
    pub mean: f64,
    pub median: f64,
    pub histogram_counts: Vec<u64>,
}

impl From<&AucSummary> for MethodSummary {
    fn from(summary: &AucSummary) -> Self {
        Self {
            auc_values: summary.auc_values.clone(),
            mean: summary.mean,
            median: summary.median,
            histogram_counts: summary.histogram.counts.clone(),
        }
    }
}

/// Evaluation report wire format.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EvaluationReport {
    pub gamma: f64,
    pub n_datasets: usize,
    pub naive: MethodSummary,
    pub ed3: MethodSummary,
    pub histogram_bins: Vec<f64>,
    pub paired_delta_mean: f64,
}

/// Full evaluation protocol configuration.
#[derive(Debug, Clone, PartialEq)]
pub struct EvaluationConfig {
    pub n_preliminary: usize,
    pub n_datasets: usize,
    pub n_normal: usize,
    pub n_erroneous: usize,
    pub base_seed: u64,
    /// Fixed gamma skips tuning entirely.
    pub gamma: Option<f64>,
    /// Custom tuning grid; the data-driven default is used when absent.
    pub gamma_grid: Option<Vec<f64>>,
    pub n_bins: usize,
    pub solver: SolverConfig,
}

impl Default for EvaluationConfig {
    fn default() -> Self {
        Self {
            n_preliminary: 10,
            n_datasets: 100,
            n_normal: 25,
            n_erroneous: 5,
            base_seed: 0,
            gamma: None,
            gamma_grid: None,
            n_bins: 20,
            solver: SolverConfig::default(),
        }
    }
}

/// Report plus the per-dataset ROC curves behind it.
#[derive(Debug, Clone)]
pub struct EvaluationOutcome {
    pub report: EvaluationReport,
    pub naive_curves: Vec<RocCurve>,
    pub ed3_curves: Vec<RocCurve>,
}

/// Runs the whole protocol: tune gamma on preliminary datasets (unless
/// fixed), then score fresh evaluation datasets with both detectors.
pub fn evaluate_pools(
    normal_pool: &[AbsoluteMatrix],
    erroneous_pool: &[AbsoluteMatrix],
    config: &EvaluationConfig,
) -> Result<EvaluationOutcome> {
    let gamma = match config.gamma {
        Some(g) => g,
        None => {
            let preliminary: Vec<LabeledDataset> = (0..config.n_preliminary)
                .map(|i| {
                    build_dataset(
                        normal_pool,
                        erroneous_pool,
                        config.n_normal,
                        config.n_erroneous,
                        config
                            .base_seed
                            .wrapping_add(PRELIMINARY_SEED_OFFSET)
                            .wrapping_add(i as u64),
                    )
                })
                .collect::<Result<_>>()?;
            let grid = match &config.gamma_grid {
                Some(grid) => grid.clone(),
                None => default_gamma_grid(&preliminary, config.solver.weight_floor)?,
            };
            tune_gamma(&preliminary, &grid, &config.solver)?
        }
    };

    let plan = DatasetPlan {
        n_datasets: config.n_datasets,
        n_normal: config.n_normal,
        n_erroneous: config.n_erroneous,
        base_seed: config.base_seed,
    };
    let (naive_summary, naive_curves) = auc_distribution_with_curves(
        normal_pool,
        erroneous_pool,
        &plan,
        &DetectorKind::Naive,
        &config.solver,
        config.n_bins,
    )?;
    let (ed3_summary, ed3_curves) = auc_distribution_with_curves(
        normal_pool,
        erroneous_pool,
        &plan,
        &DetectorKind::Ed3 { gamma },
        &config.solver,
        config.n_bins,
    )?;

    let paired_delta_mean = ed3_summary
        .auc_values
        .iter()
        .zip(&naive_summary.auc_values)
        .map(|(e, n)| e - n)
        .sum::<f64>()
        / config.n_datasets as f64;

    let report = EvaluationReport {
        gamma,
        n_datasets: config.n_datasets,
        naive: MethodSummary::from(&naive_summary),
        ed3: MethodSummary::from(&ed3_summary),
        histogram_bins: ed3_summary.histogram.edges.clone(),
        paired_delta_mean,
    };
    Ok(EvaluationOutcome {
        report,
        naive_curves,
        ed3_curves,
    })
}
