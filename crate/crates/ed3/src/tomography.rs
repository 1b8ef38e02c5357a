//! Two-qubit tomography simulation and maximum-likelihood reconstruction.
//!
//! Coincidence counts for the 16 product-basis measurement settings are drawn
//! independently per setting as Poisson with mean `N * p_i`, where `p_i` is
//! the Born probability of the setting projector. Reconstruction maximizes
//! the Poisson log-likelihood over physical states through the Cholesky-style
//! parametrization `rho = T^dag T / tr(T^dag T)` with a lower-triangular
//! complex `T` (16 real parameters for two qubits), which guarantees the
//! output is Hermitian, PSD and unit trace regardless of how noisy the
//! counts are.
//!
//! Everything is pure given explicit seeds; pool generation derives one seed
//! per member, so pools are identical regardless of the parallel schedule.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Poisson};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::linalg::{ComplexMatrix, DensityMatrix};
use crate::{Error, Result};

/// Probability floor inside the log-likelihood, guarding the `n_i > 0`,
/// `p_i -> 0` corner the optimizer can graze on the PSD boundary.
const PROBABILITY_FLOOR: f64 = 1e-12;

/// One tomography setting: a rank-1 product projector and its label.
#[derive(Debug, Clone, PartialEq)]
pub struct MeasurementSetting {
    label: String,
    projector: ComplexMatrix,
}

impl MeasurementSetting {
    /// Validates idempotence (`||P^2 - P||_F <= 1e-12`), Hermiticity and
    /// unit trace.
    pub fn new(label: impl Into<String>, projector: ComplexMatrix) -> Result<Self> {
        let p = projector.as_matrix();
        let idempotence_defect = (p * p - p).norm();
        if idempotence_defect > 1e-12 {
            return Err(Error::invalid(format!(
                "projector is not idempotent (defect {idempotence_defect:.3e})"
            )));
        }
        if projector.hermiticity_defect() > 1e-12 {
            return Err(Error::invalid("projector must be Hermitian"));
        }
        let trace = projector.trace();
        if (trace.re - 1.0).abs() > 1e-12 || trace.im.abs() > 1e-12 {
            return Err(Error::invalid("projector must have unit trace"));
        }
        Ok(Self {
            label: label.into(),
            projector,
        })
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn projector(&self) -> &ComplexMatrix {
        &self.projector
    }
}

fn qubit_basis() -> [(char, [Complex64; 2]); 4] {
    let inv_sqrt2 = std::f64::consts::FRAC_1_SQRT_2;
    let zero = Complex64::new(0.0, 0.0);
    let one = Complex64::new(1.0, 0.0);
    [
        ('H', [one, zero]),
        ('V', [zero, one]),
        // D = (H + V)/sqrt(2)
        ('D', [Complex64::new(inv_sqrt2, 0.0), Complex64::new(inv_sqrt2, 0.0)]),
        // R = (H - iV)/sqrt(2)
        ('R', [Complex64::new(inv_sqrt2, 0.0), Complex64::new(0.0, -inv_sqrt2)]),
    ]
}

/// The 16 product settings `{H, V, D, R} x {H, V, D, R}` in lexicographic
/// order (HH, HV, HD, HR, VH, ..., RR). Informationally complete for two
/// qubits.
pub fn canonical_settings() -> Vec<MeasurementSetting> {
    let basis = qubit_basis();
    let mut settings = Vec::with_capacity(16);
    for (name_a, vec_a) in &basis {
        for (name_b, vec_b) in &basis {
            let amp = DVector::from_fn(4, |e, _| vec_a[e / 2] * vec_b[e % 2]);
            let projector = ComplexMatrix::new(&amp * amp.adjoint()).expect("4x4 outer product");
            settings.push(
                MeasurementSetting::new(format!("{name_a}{name_b}"), projector)
                    .expect("product projectors are rank-1 Hermitian"),
            );
        }
    }
    settings
}

/// Born probabilities `p_i = Re tr(P_i rho)`, clamped to `[0, 1]`.
pub fn born_probabilities(
    rho: &DensityMatrix,
    settings: &[MeasurementSetting],
) -> Result<Vec<f64>> {
    settings
        .iter()
        .map(|setting| {
            if setting.projector.dim() != rho.dim() {
                return Err(Error::invalid(format!(
                    "projector dim {} does not match state dim {}",
                    setting.projector.dim(),
                    rho.dim()
                )));
            }
            let p = (setting.projector.as_matrix() * rho.as_matrix()).trace().re;
            // A state valid within DENSITY_TOLERANCE cannot stray further
            // than this from [0, 1].
            if !(-1e-9..=1.0 + 1e-9).contains(&p) {
                return Err(Error::invalid(format!("Born probability {p} out of range")));
            }
            Ok(p.clamp(0.0, 1.0))
        })
        .collect()
}

/// Coincidence counts for one run over the canonical settings.
#[derive(Debug, Clone, PartialEq)]
pub struct CountRecord {
    counts: Vec<u64>,
    pairs_per_setting: f64,
    seed: u64,
}

impl CountRecord {
    pub fn new(counts: Vec<u64>, pairs_per_setting: f64, seed: u64) -> Result<Self> {
        if counts.len() != 16 {
            return Err(Error::invalid(format!(
                "expected 16 counts, got {}",
                counts.len()
            )));
        }
        if !(pairs_per_setting > 0.0) || !pairs_per_setting.is_finite() {
            return Err(Error::invalid("pairs_per_setting must be positive"));
        }
        Ok(Self {
            counts,
            pairs_per_setting,
            seed,
        })
    }

    pub fn counts(&self) -> &[u64] {
        &self.counts
    }

    pub fn pairs_per_setting(&self) -> f64 {
        self.pairs_per_setting
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn to_json(&self) -> CountRecordJson {
        CountRecordJson {
            labels: canonical_settings()
                .iter()
                .map(|s| s.label().to_string())
                .collect(),
            counts: self.counts.clone(),
            pairs_per_setting: self.pairs_per_setting,
            seed: self.seed,
        }
    }

    pub fn from_json(json: &CountRecordJson) -> Result<Self> {
        Self::new(json.counts.clone(), json.pairs_per_setting, json.seed)
    }
}

/// Wire format of [`CountRecord`].
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CountRecordJson {
    pub labels: Vec<String>,
    pub counts: Vec<u64>,
    pub pairs_per_setting: f64,
    pub seed: u64,
}

/// Draws the 16 counts independently as `Poisson(N * p_i)`. Deterministic
/// given the seed.
pub fn simulate_counts(
    rho: &DensityMatrix,
    pairs_per_setting: f64,
    rng_seed: u64,
) -> Result<CountRecord> {
    if !(pairs_per_setting > 0.0) || !pairs_per_setting.is_finite() {
        return Err(Error::invalid("pairs_per_setting must be positive"));
    }
    let settings = canonical_settings();
    let probabilities = born_probabilities(rho, &settings)?;
    let mut rng = ChaCha8Rng::seed_from_u64(rng_seed);
    let counts = probabilities
        .iter()
        .map(|&p| {
            let mean = pairs_per_setting * p;
            if mean <= 0.0 {
                Ok(0)
            } else {
                let dist = Poisson::new(mean)
                    .map_err(|e| Error::invalid(format!("Poisson mean {mean}: {e}")))?;
                Ok(dist.sample(&mut rng).round() as u64)
            }
        })
        .collect::<Result<Vec<u64>>>()?;
    CountRecord::new(counts, pairs_per_setting, rng_seed)
}

/// Starting point for the likelihood ascent.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum InitStrategy {
    /// Start from the maximally mixed state (`T = I/sqrt(d)`).
    IdentityMixed,
    /// Start from a PSD-projected linear-inversion estimate.
    LinearInversion,
}

/// MLE optimizer knobs.
#[derive(Debug, Clone, PartialEq)]
pub struct MleOptions {
    pub max_iterations: usize,
    /// Convergence threshold on the max-norm of the gradient of the
    /// count-normalized log-likelihood.
    pub gradient_tolerance: f64,
    pub parameter_init: InitStrategy,
}

impl Default for MleOptions {
    fn default() -> Self {
        Self {
            max_iterations: 2000,
            gradient_tolerance: 1e-7,
            parameter_init: InitStrategy::IdentityMixed,
        }
    }
}

/// Poisson log-likelihood `sum_i n_i ln(N p_i) - N p_i` of `rho` for the
/// given counts (the `n_i ln` term is dropped where `n_i = 0`).
pub fn log_likelihood(
    record: &CountRecord,
    settings: &[MeasurementSetting],
    rho: &DensityMatrix,
) -> Result<f64> {
    if record.counts.len() != settings.len() {
        return Err(Error::invalid("counts and settings must align"));
    }
    let n_pairs = record.pairs_per_setting;
    let probabilities = born_probabilities(rho, settings)?;
    Ok(record
        .counts
        .iter()
        .zip(&probabilities)
        .map(|(&n, &p)| {
            let p = p.max(PROBABILITY_FLOOR);
            let log_term = if n > 0 {
                n as f64 * (n_pairs * p).ln()
            } else {
                0.0
            };
            log_term - n_pairs * p
        })
        .sum())
}

/// Number of real parameters of the lower-triangular factor for dim `d`.
fn parameter_count(d: usize) -> usize {
    d * d
}

/// Unpacks parameters into lower-triangular `T` (real diagonal first, then
/// row-major complex strictly-lower entries).
fn unpack_factor(x: &[f64], d: usize) -> DMatrix<Complex64> {
    let mut t = DMatrix::from_element(d, d, Complex64::new(0.0, 0.0));
    for i in 0..d {
        t[(i, i)] = Complex64::new(x[i], 0.0);
    }
    let mut idx = d;
    for i in 0..d {
        for j in 0..i {
            t[(i, j)] = Complex64::new(x[idx], x[idx + 1]);
            idx += 2;
        }
    }
    t
}

fn pack_factor(t: &DMatrix<Complex64>) -> Vec<f64> {
    let d = t.nrows();
    let mut x = Vec::with_capacity(parameter_count(d));
    for i in 0..d {
        x.push(t[(i, i)].re);
    }
    for i in 0..d {
        for j in 0..i {
            x.push(t[(i, j)].re);
            x.push(t[(i, j)].im);
        }
    }
    x
}

fn state_from_factor(t: &DMatrix<Complex64>) -> DMatrix<Complex64> {
    let gram = t.adjoint() * t;
    let trace = gram.trace().re;
    gram / Complex64::new(trace, 0.0)
}

/// Negative normalized log-likelihood and its gradient in the factor
/// parameters.
struct LikelihoodModel<'a> {
    projectors: Vec<&'a DMatrix<Complex64>>,
    counts: &'a [u64],
    n_pairs: f64,
    total_counts: f64,
    dim: usize,
}

impl LikelihoodModel<'_> {
    fn evaluate(&self, x: &[f64]) -> (f64, Vec<f64>) {
        let d = self.dim;
        let t = unpack_factor(x, d);
        let gram = t.adjoint() * &t;
        let tau = gram.trace().re;
        let rho = &gram / Complex64::new(tau, 0.0);

        let mut value = 0.0;
        let mut score = DMatrix::from_element(d, d, Complex64::new(0.0, 0.0));
        for (projector, &n) in self.projectors.iter().zip(self.counts) {
            let p = (*projector * &rho).trace().re.max(PROBABILITY_FLOOR);
            let n = n as f64;
            if n > 0.0 {
                value += n * (self.n_pairs * p).ln();
            }
            value -= self.n_pairs * p;
            score += *projector * Complex64::new(n / p - self.n_pairs, 0.0);
        }

        // d(loglik) = Re tr(B dA) with A = T^dag T:
        // B = score/tau - (Re tr(score A)/tau^2) I.
        let trace_sa = (&score * &gram).trace().re;
        let mut b = score / Complex64::new(tau, 0.0);
        let shift = trace_sa / (tau * tau);
        for i in 0..d {
            b[(i, i)] -= Complex64::new(shift, 0.0);
        }
        let tb = &t * b;

        let mut gradient = Vec::with_capacity(parameter_count(d));
        for i in 0..d {
            gradient.push(-2.0 * tb[(i, i)].re / self.total_counts);
        }
        for i in 0..d {
            for j in 0..i {
                gradient.push(-2.0 * tb[(i, j)].re / self.total_counts);
                gradient.push(-2.0 * tb[(i, j)].im / self.total_counts);
            }
        }
        (-value / self.total_counts, gradient)
    }
}

fn infinity_norm(v: &[f64]) -> f64 {
    v.iter().fold(0.0f64, |acc, x| acc.max(x.abs()))
}

struct LbfgsOutcome {
    x: Vec<f64>,
    gradient_norm: f64,
    iterations: usize,
    converged: bool,
}

/// Limited-memory BFGS with Armijo backtracking.
fn lbfgs_minimize(
    eval: impl Fn(&[f64]) -> (f64, Vec<f64>),
    x0: Vec<f64>,
    max_iterations: usize,
    gradient_tolerance: f64,
) -> LbfgsOutcome {
    const MEMORY: usize = 8;
    const ARMIJO_C1: f64 = 1e-4;

    let n = x0.len();
    let mut x = x0;
    let (mut value, mut gradient) = eval(&x);
    let mut s_history: Vec<Vec<f64>> = Vec::new();
    let mut y_history: Vec<Vec<f64>> = Vec::new();
    let mut rho_history: Vec<f64> = Vec::new();
    let mut iterations = 0;

    for iter in 1..=max_iterations {
        iterations = iter;
        if infinity_norm(&gradient) <= gradient_tolerance {
            return LbfgsOutcome {
                x,
                gradient_norm: infinity_norm(&gradient),
                iterations: iter - 1,
                converged: true,
            };
        }

        // Two-loop recursion.
        let mut direction: Vec<f64> = gradient.iter().map(|g| -g).collect();
        let mut alphas = vec![0.0; s_history.len()];
        for i in (0..s_history.len()).rev() {
            let alpha = rho_history[i]
                * s_history[i]
                    .iter()
                    .zip(&direction)
                    .map(|(s, d)| s * d)
                    .sum::<f64>();
            alphas[i] = alpha;
            for (d, y) in direction.iter_mut().zip(&y_history[i]) {
                *d -= alpha * y;
            }
        }
        if let (Some(s), Some(y)) = (s_history.last(), y_history.last()) {
            let sy: f64 = s.iter().zip(y).map(|(a, b)| a * b).sum();
            let yy: f64 = y.iter().map(|a| a * a).sum();
            if yy > 0.0 {
                let scaling = sy / yy;
                for d in &mut direction {
                    *d *= scaling;
                }
            }
        }
        for i in 0..s_history.len() {
            let beta = rho_history[i]
                * y_history[i]
                    .iter()
                    .zip(&direction)
                    .map(|(y, d)| y * d)
                    .sum::<f64>();
            for (d, s) in direction.iter_mut().zip(&s_history[i]) {
                *d += (alphas[i] - beta) * s;
            }
        }

        let mut slope: f64 = gradient.iter().zip(&direction).map(|(g, d)| g * d).sum();
        if slope >= 0.0 {
            // Curvature information went stale; restart from steepest descent.
            direction = gradient.iter().map(|g| -g).collect();
            slope = -gradient.iter().map(|g| g * g).sum::<f64>();
            s_history.clear();
            y_history.clear();
            rho_history.clear();
        }

        let mut step = 1.0;
        let mut accepted = None;
        for _ in 0..60 {
            let trial: Vec<f64> = x
                .iter()
                .zip(&direction)
                .map(|(xi, di)| xi + step * di)
                .collect();
            let (trial_value, trial_gradient) = eval(&trial);
            if trial_value.is_finite() && trial_value <= value + ARMIJO_C1 * step * slope {
                accepted = Some((trial, trial_value, trial_gradient));
                break;
            }
            step *= 0.5;
        }
        let Some((new_x, new_value, new_gradient)) = accepted else {
            // Line search collapsed: the iterate is as converged as the
            // arithmetic allows.
            break;
        };

        let s: Vec<f64> = new_x.iter().zip(&x).map(|(a, b)| a - b).collect();
        let y: Vec<f64> = new_gradient.iter().zip(&gradient).map(|(a, b)| a - b).collect();
        let sy: f64 = s.iter().zip(&y).map(|(a, b)| a * b).sum();
        let s_norm: f64 = s.iter().map(|a| a * a).sum::<f64>().sqrt();
        let y_norm: f64 = y.iter().map(|a| a * a).sum::<f64>().sqrt();
        if sy > 1e-12 * s_norm * y_norm {
            if s_history.len() == MEMORY {
                s_history.remove(0);
                y_history.remove(0);
                rho_history.remove(0);
            }
            rho_history.push(1.0 / sy);
            s_history.push(s);
            y_history.push(y);
        }
        debug_assert_eq!(s_history.len(), y_history.len());
        debug_assert!(n == new_x.len());

        x = new_x;
        value = new_value;
        gradient = new_gradient;
    }

    let gradient_norm = infinity_norm(&gradient);
    LbfgsOutcome {
        x,
        gradient_norm,
        iterations,
        converged: gradient_norm <= gradient_tolerance,
    }
}

/// Hermitian matrix from the measured frequencies by linear inversion,
/// blended with the maximally mixed state to stay strictly inside the PSD
/// cone.
fn linear_inversion_factor(
    record: &CountRecord,
    settings: &[MeasurementSetting],
    d: usize,
) -> DMatrix<Complex64> {
    // Real parametrization of a Hermitian matrix: d diagonal entries, then
    // (re, im) for each strictly-lower entry.
    let n_params = d * d;
    let n_settings = settings.len();
    let mut design = DMatrix::<f64>::zeros(n_settings, n_params);
    for (row, setting) in settings.iter().enumerate() {
        let p = setting.projector.as_matrix();
        for i in 0..d {
            design[(row, i)] = p[(i, i)].re;
        }
        let mut col = d;
        for i in 0..d {
            for j in 0..i {
                // Contribution of rho_ij = a + bi and its conjugate.
                design[(row, col)] = 2.0 * p[(j, i)].re;
                design[(row, col + 1)] = -2.0 * p[(j, i)].im;
                col += 2;
            }
        }
    }
    let frequencies = DVector::from_iterator(
        n_settings,
        record
            .counts
            .iter()
            .map(|&n| n as f64 / record.pairs_per_setting),
    );
    let solution = design
        .svd(true, true)
        .solve(&frequencies, 1e-12)
        .unwrap_or_else(|_| DVector::zeros(n_params));

    let mut estimate = DMatrix::from_element(d, d, Complex64::new(0.0, 0.0));
    for i in 0..d {
        estimate[(i, i)] = Complex64::new(solution[i], 0.0);
    }
    let mut col = d;
    for i in 0..d {
        for j in 0..i {
            estimate[(i, j)] = Complex64::new(solution[col], solution[col + 1]);
            estimate[(j, i)] = estimate[(i, j)].conj();
            col += 2;
        }
    }

    // Clip negative eigenvalues, renormalize, and blend toward I/d.
    let eigen = estimate.symmetric_eigen();
    let clipped = DMatrix::from_fn(d, d, |i, j| {
        (0..d)
            .map(|m| {
                eigen.eigenvectors[(i, m)]
                    * eigen.eigenvalues[m].max(0.0)
                    * eigen.eigenvectors[(j, m)].conj()
            })
            .sum::<Complex64>()
    });
    let trace = clipped.trace().re.max(PROBABILITY_FLOOR);
    let mixed = DMatrix::identity(d, d) * Complex64::new(1.0 / d as f64, 0.0);
    let blended = clipped * Complex64::new(0.99 / trace, 0.0) + mixed * Complex64::new(0.01, 0.0);
    nalgebra::Cholesky::new(blended)
        .map(|c| c.l().adjoint())
        .unwrap_or_else(|| DMatrix::identity(d, d) * Complex64::new(1.0 / (d as f64).sqrt(), 0.0))
}

/// Maximum-likelihood reconstruction of a density matrix from counts.
///
/// Non-convergence within `opts.max_iterations` returns
/// [`Error::MleDidNotConverge`] carrying the best iterate (which is still a
/// valid physical state).
pub fn mle_reconstruct(
    record: &CountRecord,
    settings: &[MeasurementSetting],
    opts: &MleOptions,
) -> Result<DensityMatrix> {
    if record.counts.len() != settings.len() {
        return Err(Error::invalid(format!(
            "{} counts for {} settings",
            record.counts.len(),
            settings.len()
        )));
    }
    if record.counts.iter().all(|&n| n == 0) {
        return Err(Error::invalid("all counts are zero"));
    }
    if opts.max_iterations == 0 || !(opts.gradient_tolerance > 0.0) {
        return Err(Error::invalid("MLE options out of range"));
    }
    let d = settings
        .first()
        .map(|s| s.projector.dim())
        .ok_or_else(|| Error::invalid("settings must not be empty"))?;
    if settings.iter().any(|s| s.projector.dim() != d) {
        return Err(Error::invalid("settings must share one dimension"));
    }

    let model = LikelihoodModel {
        projectors: settings.iter().map(|s| s.projector.as_matrix()).collect(),
        counts: record.counts(),
        n_pairs: record.pairs_per_setting,
        total_counts: record.counts.iter().sum::<u64>() as f64,
        dim: d,
    };

    let x0 = match opts.parameter_init {
        InitStrategy::IdentityMixed => {
            let t = DMatrix::identity(d, d) * Complex64::new(1.0 / (d as f64).sqrt(), 0.0);
            pack_factor(&t)
        }
        InitStrategy::LinearInversion => {
            pack_factor(&linear_inversion_factor(record, settings, d))
        }
    };

    let outcome = lbfgs_minimize(
        |x| model.evaluate(x),
        x0,
        opts.max_iterations,
        opts.gradient_tolerance,
    );

    let rho_raw = state_from_factor(&unpack_factor(&outcome.x, d));
    // Symmetrize away the last bits of rounding before validation.
    let symmetrized = (&rho_raw + rho_raw.adjoint()) * Complex64::new(0.5, 0.0);
    let rho = DensityMatrix::new(ComplexMatrix::new(symmetrized)?)?;

    if outcome.converged {
        Ok(rho)
    } else {
        Err(Error::MleDidNotConverge {
            iterations: outcome.iterations,
            gradient_norm: outcome.gradient_norm,
            best: Box::new(rho),
        })
    }
}

/// Single-qubit phase rotation `exp(-i phi sigma_z / 2)` on the first qubit,
/// emulating a miscalibrated phase shifter.
fn apply_phase_offset(state: &DensityMatrix, phi: f64) -> DensityMatrix {
    let half = phi / 2.0;
    let u_a = [Complex64::from_polar(1.0, -half), Complex64::from_polar(1.0, half)];
    let d = state.dim();
    let unitary = DMatrix::from_fn(d, d, |i, j| {
        if i == j {
            u_a[i / 2]
        } else {
            Complex64::new(0.0, 0.0)
        }
    });
    let rotated = &unitary * state.as_matrix() * unitary.adjoint();
    DensityMatrix::new(ComplexMatrix::new(rotated).expect("rotation preserves shape"))
        .expect("unitary conjugation preserves density-matrix invariants")
}

/// Simulates and reconstructs `count` independent density matrices from the
/// given true state. Member `i` uses seed `base_seed + i`, so pools are
/// reproducible and identical under any parallel schedule.
pub fn generate_pool(
    state: &DensityMatrix,
    count: usize,
    pairs_per_setting: f64,
    base_seed: u64,
    systematic_offset: Option<f64>,
) -> Result<Vec<DensityMatrix>> {
    if count == 0 {
        return Err(Error::invalid("pool must have at least one member"));
    }
    let true_state = match systematic_offset {
        Some(phi) => apply_phase_offset(state, phi),
        None => state.clone(),
    };
    let settings = canonical_settings();
    let opts = MleOptions::default();
    (0..count)
        .into_par_iter()
        .map(|i| {
            let record =
                simulate_counts(&true_state, pairs_per_setting, base_seed.wrapping_add(i as u64))?;
            mle_reconstruct(&record, &settings, &opts)
        })
        .collect()
}

/// Pool manifest wire format: pool parameters plus one matrix file per
/// member.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct PoolManifest {
    pub state: String,
    pub lambda: f64,
    pub n: usize,
    pub pairs_per_setting: f64,
    pub base_seed: u64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub systematic_offset: Option<f64>,
    pub members: Vec<String>,
}
