//! Detection of erroneous (decohered) density matrices in a pool of states
//! reconstructed from finite-sample tomography.
//!
//! Two detectors are provided:
//!
//! - a naive baseline that scores each matrix by the trace norm of its
//!   deviation from the pool average, and
//! - ED³, which decomposes the observed absolute matrices into a shared
//!   component plus per-matrix group-sparse deviations by solving a weighted
//!   group-regularized least squares problem through its dual with ADMM.
//!
//! The crate also ships a two-qubit tomography simulator (Poisson photon
//! counting plus maximum-likelihood reconstruction) used to generate pools of
//! normal and erroneous states, and an ROC/AUC harness for benchmarking the
//! detectors against each other.

pub mod detector;
pub mod evaluation;
pub mod linalg;
pub mod tomography;

use thiserror::Error;

/// Crate-wide error type.
#[derive(Debug, Error)]
pub enum Error {
    /// A precondition on an argument was violated.
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    /// The ADMM solver exhausted its iteration budget. The best iterate is
    /// attached so callers can inspect or discard it.
    #[error("ADMM did not converge after {iterations} iterations (primal residual {primal_residual:.3e}, dual residual {dual_residual:.3e})")]
    AdmmDidNotConverge {
        iterations: usize,
        primal_residual: f64,
        dual_residual: f64,
        best: Box<detector::DecompositionResult>,
    },

    /// The MLE optimizer exhausted its iteration budget. The best iterate is
    /// attached so callers can inspect or discard it.
    #[error("MLE did not converge after {iterations} iterations (gradient norm {gradient_norm:.3e})")]
    MleDidNotConverge {
        iterations: usize,
        gradient_norm: f64,
        best: Box<linalg::DensityMatrix>,
    },

    /// JSON (de)serialization failure.
    #[error("serialization: {0}")]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidArgument(msg.into())
    }
}
