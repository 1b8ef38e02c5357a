//! ADMM solver for the ED³ decomposition.
//!
//! The primal problem splits each observed matrix into a shared component
//! plus a group-regularized deviation:
//!
//! ```text
//! min_{theta, omega}  sum_k 1/2 ||rho_k - (theta + omega_k)||_F^2
//!                     + gamma * sum_k ||s . omega_k||_F
//! ```
//!
//! (`.` is the Hadamard product). It is solved through its dual,
//!
//! ```text
//! min_{zeta}  sum_k ||rho_k - s . zeta_k||_F^2
//! s.t.        sum_k zeta_k = 0,   ||zeta_k||_F <= gamma,
//! ```
//!
//! with the zero-sum subspace folded into the smooth block and the product of
//! Frobenius balls handled by the second block. Both subproblems are closed
//! form, so one iteration costs O(K d^2):
//!
//! - the smooth block minimizes a per-entry quadratic under the zero-sum
//!   constraint via a per-entry scalar multiplier (subtract the mean);
//! - the ball block is Euclidean projection, rescaling any group whose norm
//!   exceeds `gamma`.
//!
//! Optimal primal variables are recovered from
//! `theta + omega_k = rho_k - s . zeta_k`: groups with `||zeta_k|| < gamma`
//! are inactive (their `omega_k` is exactly zero), so `theta` is the average
//! of `rho_k - s . zeta_k` over the inactive set and the remaining `omega_k`
//! follow by subtraction.

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use super::{MatrixSet, WeightMatrix};
use crate::linalg::{real_to_rows, rows_to_real};
use crate::{Error, Result};

/// Deviations with Frobenius norm at or below this are treated as zero when
/// reporting the active set. Three orders of magnitude above the solver
/// tolerance.
pub const SPARSITY_EPSILON: f64 = 1e-6;

/// Relative distance from the ball boundary below which a dual group is
/// classified as active during primal recovery.
pub const BOUNDARY_TOLERANCE: f64 = 1e-4;

const PENALTY_MIN: f64 = 1e-6;
const PENALTY_MAX: f64 = 1e6;

/// ADMM schedule. The defaults converge on every instance in this crate's
/// regime (K up to a few dozen, d up to a few hundred).
#[derive(Debug, Clone, PartialEq)]
pub struct AdmmOptions {
    /// Penalty parameter coupling the two blocks.
    pub penalty: f64,
    pub max_iterations: usize,
    pub primal_tolerance: f64,
    pub dual_tolerance: f64,
    /// Rescale the penalty by 2 whenever the residuals are imbalanced by
    /// more than 10x.
    pub adaptive_penalty: bool,
    /// Positive factor multiplying the dual objective. The constrained argmin
    /// is invariant to it; exposed so that invariance can be regression
    /// tested against alternative normalizations (e.g. 1/K).
    pub objective_scale: f64,
}

impl Default for AdmmOptions {
    fn default() -> Self {
        Self {
            penalty: 1.0,
            max_iterations: 10_000,
            primal_tolerance: 1e-8,
            dual_tolerance: 1e-8,
            adaptive_penalty: true,
            objective_scale: 1.0,
        }
    }
}

impl AdmmOptions {
    fn validate(&self) -> Result<()> {
        if !(self.penalty > 0.0) || !self.penalty.is_finite() {
            return Err(Error::invalid("ADMM penalty must be positive"));
        }
        if !(self.primal_tolerance > 0.0) || !(self.dual_tolerance > 0.0) {
            return Err(Error::invalid("ADMM tolerances must be positive"));
        }
        if self.max_iterations == 0 {
            return Err(Error::invalid("ADMM needs at least one iteration"));
        }
        if !(self.objective_scale > 0.0) || !self.objective_scale.is_finite() {
            return Err(Error::invalid("objective scale must be positive"));
        }
        Ok(())
    }
}

/// Output of [`solve_ed3`]: the decomposition, the dual certificate, and
/// convergence diagnostics.
#[derive(Debug, Clone, PartialEq)]
pub struct DecompositionResult {
    /// Shared component `theta`.
    pub theta: DMatrix<f64>,
    /// Per-matrix deviations; exactly zero outside the active set.
    pub omegas: Vec<DMatrix<f64>>,
    /// Dual variables satisfying the zero-sum and ball constraints.
    pub zetas: Vec<DMatrix<f64>>,
    /// Regularization strength the instance was solved at.
    pub gamma: f64,
    pub iterations: usize,
    pub primal_residual: f64,
    pub dual_residual: f64,
    /// `true` where `||omega_k||_F > SPARSITY_EPSILON`.
    pub active_set: Vec<bool>,
    /// Set when every dual group sat on the ball boundary, which leaves the
    /// theta/omega split unidentified; such results should be rejected by
    /// gamma tuning.
    pub degenerate: bool,
}

impl DecompositionResult {
    pub fn to_json(&self) -> DecompositionResultJson {
        DecompositionResultJson {
            theta: real_to_rows(&self.theta),
            omegas: self.omegas.iter().map(real_to_rows).collect(),
            zetas: self.zetas.iter().map(real_to_rows).collect(),
            gamma: self.gamma,
            iterations: self.iterations,
            primal_residual: self.primal_residual,
            dual_residual: self.dual_residual,
            active_set: self.active_set.clone(),
            degenerate: self.degenerate,
        }
    }

    pub fn from_json(json: &DecompositionResultJson) -> Result<Self> {
        Ok(Self {
            theta: rows_to_real(&json.theta)?,
            omegas: json
                .omegas
                .iter()
                .map(|rows| rows_to_real(rows))
                .collect::<Result<_>>()?,
            zetas: json
                .zetas
                .iter()
                .map(|rows| rows_to_real(rows))
                .collect::<Result<_>>()?,
            gamma: json.gamma,
            iterations: json.iterations,
            primal_residual: json.primal_residual,
            dual_residual: json.dual_residual,
            active_set: json.active_set.clone(),
            degenerate: json.degenerate,
        })
    }
}

/// Wire format of [`DecompositionResult`].
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct DecompositionResultJson {
    pub theta: Vec<Vec<f64>>,
    pub omegas: Vec<Vec<Vec<f64>>>,
    pub zetas: Vec<Vec<Vec<f64>>>,
    pub gamma: f64,
    pub iterations: usize,
    pub primal_residual: f64,
    pub dual_residual: f64,
    pub active_set: Vec<bool>,
    pub degenerate: bool,
}

/// Solves the dual problem by ADMM and recovers the primal decomposition.
///
/// Non-convergence within `opts.max_iterations` returns
/// [`Error::AdmmDidNotConverge`] carrying the best iterate.
pub fn solve_ed3(
    set: &MatrixSet,
    gamma: f64,
    weights: &WeightMatrix,
    opts: &AdmmOptions,
) -> Result<DecompositionResult> {
    set.require_pool()?;
    opts.validate()?;
    if !(gamma > 0.0) || !gamma.is_finite() {
        // gamma = 0 leaves the theta/omega split non-identifiable.
        return Err(Error::invalid("gamma must be positive and finite"));
    }
    if weights.dim() != set.dim() {
        return Err(Error::invalid(format!(
            "weight dim {} does not match set dim {}",
            weights.dim(),
            set.dim()
        )));
    }

    let k_count = set.len();
    let d = set.dim();
    let s = weights.as_matrix();
    let scale = opts.objective_scale;

    // Constant part of the smooth-block right-hand side: 2c * s . rho_k.
    let data_term: Vec<DMatrix<f64>> = set
        .iter()
        .map(|m| m.as_matrix().component_mul(s) * (2.0 * scale))
        .collect();

    let mut penalty = opts.penalty;
    // Per-entry quadratic coefficient 2c s_ij^2 + penalty; rebuilt when the
    // penalty adapts.
    let mut coeff = s.map(|w| 2.0 * scale * w * w + penalty);

    let zero = DMatrix::<f64>::zeros(d, d);
    let mut zetas: Vec<DMatrix<f64>> = vec![zero.clone(); k_count];
    let mut ball: Vec<DMatrix<f64>> = vec![zero.clone(); k_count];
    let mut dual: Vec<DMatrix<f64>> = vec![zero.clone(); k_count];

    let mut primal_residual = f64::INFINITY;
    let mut dual_residual = f64::INFINITY;
    let mut iterations = 0;
    let mut converged = false;

    for iter in 1..=opts.max_iterations {
        iterations = iter;

        // Smooth block: per-entry quadratic minimization on the zero-sum
        // subspace. The scalar multiplier for each entry works out to the
        // mean of the unconstrained right-hand sides.
        let mut rhs_mean = DMatrix::<f64>::zeros(d, d);
        let rhs: Vec<DMatrix<f64>> = (0..k_count)
            .map(|k| {
                let b = &data_term[k] + (&ball[k] - &dual[k]) * penalty;
                rhs_mean += &b;
                b
            })
            .collect();
        rhs_mean /= k_count as f64;
        for k in 0..k_count {
            zetas[k] = (&rhs[k] - &rhs_mean).component_div(&coeff);
        }

        // Ball block: project each group onto the radius-gamma Frobenius
        // ball.
        let mut ball_step_sq = 0.0;
        for k in 0..k_count {
            let w = &zetas[k] + &dual[k];
            let norm = w.norm();
            let projected = if norm > gamma { w * (gamma / norm) } else { w };
            ball_step_sq += (&projected - &ball[k]).norm_squared();
            ball[k] = projected;
        }

        // Scaled dual ascent on the consensus constraint zeta = ball.
        let mut primal_sq = 0.0;
        for k in 0..k_count {
            let gap = &zetas[k] - &ball[k];
            primal_sq += gap.norm_squared();
            dual[k] += gap;
        }

        primal_residual = primal_sq.sqrt();
        dual_residual = penalty * ball_step_sq.sqrt();

        if primal_residual <= opts.primal_tolerance && dual_residual <= opts.dual_tolerance {
            converged = true;
            break;
        }

        if opts.adaptive_penalty && iter % 10 == 0 {
            let mut rescale = 1.0;
            if primal_residual > 10.0 * dual_residual && penalty * 2.0 <= PENALTY_MAX {
                rescale = 2.0;
            } else if dual_residual > 10.0 * primal_residual && penalty / 2.0 >= PENALTY_MIN {
                rescale = 0.5;
            }
            if rescale != 1.0 {
                penalty *= rescale;
                coeff = s.map(|w| 2.0 * scale * w * w + penalty);
                // Scaled dual variables carry a 1/penalty factor.
                for u in &mut dual {
                    *u /= rescale;
                }
            }
        }
    }

    // Report the smooth-block iterate: its zero-sum constraint is exact by
    // construction. Any ball overshoot is bounded by the primal residual;
    // shrink it away so the certificate is feasible on both constraint sets.
    for z in &mut zetas {
        let norm = z.norm();
        if norm > gamma {
            *z *= gamma / norm;
        }
    }

    let (theta, omegas, degenerate) =
        recover_primal_unchecked(set, &zetas, weights, gamma, BOUNDARY_TOLERANCE);
    let active_set = omegas.iter().map(|o| o.norm() > SPARSITY_EPSILON).collect();

    let result = DecompositionResult {
        theta,
        omegas,
        zetas,
        gamma,
        iterations,
        primal_residual,
        dual_residual,
        active_set,
        degenerate,
    };

    if converged {
        Ok(result)
    } else {
        Err(Error::AdmmDidNotConverge {
            iterations,
            primal_residual,
            dual_residual,
            best: Box::new(result),
        })
    }
}

/// Recovers `(theta, omegas, degenerate)` from dual variables via
/// `theta + omega_k = rho_k - s . zeta_k`.
///
/// Groups with `||zeta_k||_F < gamma (1 - boundary_tolerance)` form the
/// inactive set: their deviations are exactly zero and `theta` is the average
/// of their recovery candidates. If every group sits on the boundary the
/// split is unidentified; the fallback centers `theta` on the data average
/// and flags the result degenerate.
pub fn recover_primal(
    set: &MatrixSet,
    zetas: &[DMatrix<f64>],
    weights: &WeightMatrix,
    gamma: f64,
    boundary_tolerance: f64,
) -> Result<(DMatrix<f64>, Vec<DMatrix<f64>>, bool)> {
    if zetas.len() != set.len() {
        return Err(Error::invalid("one dual variable per matrix required"));
    }
    if zetas.iter().any(|z| z.nrows() != set.dim() || z.ncols() != set.dim()) {
        return Err(Error::invalid("dual variable dim mismatch"));
    }
    let mut total = DMatrix::<f64>::zeros(set.dim(), set.dim());
    for z in zetas {
        if z.norm() > gamma * (1.0 + BOUNDARY_TOLERANCE) {
            return Err(Error::invalid("dual variable violates the ball constraint"));
        }
        total += z;
    }
    if total.amax() > 1e-6 {
        return Err(Error::invalid("dual variables violate the zero-sum constraint"));
    }
    Ok(recover_primal_unchecked(
        set,
        zetas,
        weights,
        gamma,
        boundary_tolerance,
    ))
}

fn recover_primal_unchecked(
    set: &MatrixSet,
    zetas: &[DMatrix<f64>],
    weights: &WeightMatrix,
    gamma: f64,
    boundary_tolerance: f64,
) -> (DMatrix<f64>, Vec<DMatrix<f64>>, bool) {
    let k_count = set.len();
    let d = set.dim();
    let s = weights.as_matrix();

    let candidates: Vec<DMatrix<f64>> = (0..k_count)
        .map(|k| set.get(k).as_matrix() - zetas[k].component_mul(s))
        .collect();
    let inactive: Vec<usize> = (0..k_count)
        .filter(|&k| zetas[k].norm() < gamma * (1.0 - boundary_tolerance))
        .collect();

    let (theta, degenerate) = if inactive.is_empty() {
        let mean = super::data_average(set);
        let mut drift = DMatrix::<f64>::zeros(d, d);
        for cand in &candidates {
            drift += cand - &mean;
        }
        (&mean - drift / k_count as f64, true)
    } else {
        let mut theta = DMatrix::<f64>::zeros(d, d);
        for &k in &inactive {
            theta += &candidates[k];
        }
        (theta / inactive.len() as f64, false)
    };

    let omegas: Vec<DMatrix<f64>> = (0..k_count)
        .map(|k| {
            if !degenerate && inactive.binary_search(&k).is_ok() {
                DMatrix::zeros(d, d)
            } else {
                &candidates[k] - &theta
            }
        })
        .collect();

    (theta, omegas, degenerate)
}

/// Norm of the largest unconstrained dual group,
/// `max_k ||(rho_k - mean) / s||_F`. Any `gamma` at or above this leaves
/// every ball constraint inactive, collapsing all deviations to zero.
pub fn gamma_collapse_bound(set: &MatrixSet, weights: &WeightMatrix) -> f64 {
    unconstrained_dual_norms(set, weights)
        .into_iter()
        .fold(0.0, f64::max)
}

/// `||(rho_k - mean) / s||_F` for every k: the dual group norms with the
/// ball constraints removed. These bracket the meaningful gamma range.
pub fn unconstrained_dual_norms(set: &MatrixSet, weights: &WeightMatrix) -> Vec<f64> {
    let mean = super::data_average(set);
    set.iter()
        .map(|m| {
            (m.as_matrix() - &mean)
                .component_div(weights.as_matrix())
                .norm()
        })
        .collect()
}
