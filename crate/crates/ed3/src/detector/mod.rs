//! The two anomaly detectors.
//!
//! The naive baseline scores each matrix by the trace norm of its deviation
//! from the pool average. ED³ instead decomposes the pool into a shared
//! component `theta` plus per-matrix deviations `omega_k` that are driven to
//! exactly zero for normal members by a weighted group regularizer, and
//! scores each member by the trace norm of its `omega_k`.
//!
//! Both detectors are dimension-generic: they accept any set of nonnegative
//! real matrices. Two-qubit specificity lives entirely in the tomography
//! module.

mod admm;

pub use admm::{
    gamma_collapse_bound, recover_primal, solve_ed3, unconstrained_dual_norms, AdmmOptions,
    DecompositionResult, DecompositionResultJson, BOUNDARY_TOLERANCE, SPARSITY_EPSILON,
};

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use crate::linalg::{trace_norm_real, AbsoluteMatrix};
use crate::{Error, Result};

/// Default floor applied to the per-entry mean square deviation before
/// inversion when computing weights. Entries with zero empirical variance
/// would otherwise produce an infinite weight.
pub const DEFAULT_WEIGHT_FLOOR: f64 = 1e-12;

/// Ordered collection of K same-dimension absolute matrices.
#[derive(Debug, Clone, PartialEq)]
pub struct MatrixSet {
    matrices: Vec<AbsoluteMatrix>,
    dim: usize,
}

impl MatrixSet {
    pub fn new(matrices: Vec<AbsoluteMatrix>) -> Result<Self> {
        let dim = match matrices.first() {
            Some(m) => m.dim(),
            None => return Err(Error::invalid("matrix set must not be empty")),
        };
        if matrices.iter().any(|m| m.dim() != dim) {
            return Err(Error::invalid("all matrices in a set must share one dim"));
        }
        Ok(Self { matrices, dim })
    }

    pub fn len(&self) -> usize {
        self.matrices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.matrices.is_empty()
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn get(&self, k: usize) -> &AbsoluteMatrix {
        &self.matrices[k]
    }

    pub fn iter(&self) -> impl Iterator<Item = &AbsoluteMatrix> {
        self.matrices.iter()
    }

    fn require_pool(&self) -> Result<()> {
        if self.len() < 2 {
            return Err(Error::invalid("detector needs at least 2 matrices"));
        }
        Ok(())
    }
}

/// Strictly positive per-entry weights balancing the scaling differences
/// across matrix entries.
#[derive(Debug, Clone, PartialEq)]
pub struct WeightMatrix {
    entries: DMatrix<f64>,
}

impl WeightMatrix {
    pub fn new(entries: DMatrix<f64>) -> Result<Self> {
        if entries.nrows() != entries.ncols() || entries.nrows() == 0 {
            return Err(Error::invalid("weights must form a square matrix"));
        }
        if !entries.iter().all(|w| w.is_finite() && *w > 0.0) {
            return Err(Error::invalid("weights must be finite and positive"));
        }
        Ok(Self { entries })
    }

    pub fn dim(&self) -> usize {
        self.entries.nrows()
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.entries[(i, j)]
    }

    pub fn as_matrix(&self) -> &DMatrix<f64> {
        &self.entries
    }
}

/// Which detector produced a score report.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Method {
    Naive,
    Ed3,
}

/// Per-matrix anomaly scores, optionally paired with ground-truth labels
/// (`true` = erroneous).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScoreReport {
    pub method: Method,
    pub scores: Vec<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub labels: Option<Vec<bool>>,
}

impl ScoreReport {
    pub fn new(method: Method, scores: Vec<f64>) -> Result<Self> {
        if !scores.iter().all(|s| s.is_finite() && *s >= 0.0) {
            return Err(Error::invalid("scores must be finite and nonnegative"));
        }
        Ok(Self {
            method,
            scores,
            labels: None,
        })
    }

    pub fn with_labels(mut self, labels: Vec<bool>) -> Result<Self> {
        if labels.len() != self.scores.len() {
            return Err(Error::invalid(format!(
                "label count {} does not match score count {}",
                labels.len(),
                self.scores.len()
            )));
        }
        self.labels = Some(labels);
        Ok(self)
    }

    pub fn len(&self) -> usize {
        self.scores.len()
    }

    pub fn is_empty(&self) -> bool {
        self.scores.is_empty()
    }
}

/// Element-wise arithmetic mean of the set.
pub fn data_average(set: &MatrixSet) -> DMatrix<f64> {
    let mut mean = DMatrix::zeros(set.dim(), set.dim());
    for m in set.iter() {
        mean += m.as_matrix();
    }
    mean / set.len() as f64
}

/// Naive baseline: score each matrix by the trace norm of its deviation from
/// the data average.
pub fn naive_scores(set: &MatrixSet) -> Result<ScoreReport> {
    set.require_pool()?;
    let mean = data_average(set);
    let scores = set
        .iter()
        .map(|m| trace_norm_real(&(m.as_matrix() - &mean)))
        .collect::<Result<Vec<f64>>>()?;
    ScoreReport::new(Method::Naive, scores)
}

/// Per-entry weights `s_ij = ((1/K) sum_k (rho_k - mean)_ij^2)^(-1/2)`, with
/// the mean square floored at `floor` before inversion so entries that are
/// identical across the whole set get the (large, finite) weight
/// `floor^(-1/2)` instead of dividing by zero.
pub fn compute_weights(set: &MatrixSet, floor: f64) -> Result<WeightMatrix> {
    set.require_pool()?;
    if !(floor > 0.0) || !floor.is_finite() {
        return Err(Error::invalid("weight floor must be positive and finite"));
    }
    let mean = data_average(set);
    let mut msq = DMatrix::zeros(set.dim(), set.dim());
    for m in set.iter() {
        let dev = m.as_matrix() - &mean;
        msq += dev.component_mul(&dev);
    }
    msq /= set.len() as f64;
    let entries = msq.map(|v| v.max(floor).powf(-0.5));
    WeightMatrix::new(entries)
}

/// Trace norm of each deviation `omega_k`. Members outside the active set
/// score exactly zero.
pub fn ed3_scores(result: &DecompositionResult) -> ScoreReport {
    let scores = result
        .omegas
        .iter()
        .zip(&result.active_set)
        .map(|(omega, active)| {
            if *active {
                trace_norm_real(omega).expect("deviations are square and finite")
            } else {
                0.0
            }
        })
        .collect();
    ScoreReport {
        method: Method::Ed3,
        scores,
        labels: None,
    }
}

#[cfg(test)]
pub(crate) fn set_from_entries(dim: usize, members: &[Vec<f64>]) -> MatrixSet {
    let matrices = members
        .iter()
        .map(|rows| {
            AbsoluteMatrix::new(DMatrix::from_row_slice(dim, dim, rows)).expect("valid entries")
        })
        .collect();
    MatrixSet::new(matrices).expect("non-empty set")
}
