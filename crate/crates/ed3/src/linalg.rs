//! Dense complex/real matrix types, norms, and the two-qubit state
//! constructors shared by every other module.
//!
//! Basis order is fixed as `{HH, HV, VH, VV}` throughout, and element indices
//! in reports are 1-based, so the Bell-state coherence lives at entry (1,4).

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::{Error, Result};

/// Tolerance for the Hermiticity, unit-trace and PSD checks of a density
/// matrix.
pub const DENSITY_TOLERANCE: f64 = 1e-9;

/// Tolerance for the unit-norm check of a pure state.
pub const PURE_STATE_TOLERANCE: f64 = 1e-12;

/// Square complex matrix with finite entries.
#[derive(Debug, Clone, PartialEq)]
pub struct ComplexMatrix {
    inner: DMatrix<Complex64>,
}

impl ComplexMatrix {
    /// Wraps a square matrix, rejecting non-square shapes and NaN/Inf entries.
    pub fn new(inner: DMatrix<Complex64>) -> Result<Self> {
        if inner.nrows() != inner.ncols() || inner.nrows() == 0 {
            return Err(Error::invalid(format!(
                "matrix must be square and non-empty, got {}x{}",
                inner.nrows(),
                inner.ncols()
            )));
        }
        if !inner.iter().all(|c| c.re.is_finite() && c.im.is_finite()) {
            return Err(Error::invalid("matrix entries must be finite"));
        }
        Ok(Self { inner })
    }

    pub fn zeros(dim: usize) -> Self {
        Self {
            inner: DMatrix::zeros(dim, dim),
        }
    }

    pub fn identity(dim: usize) -> Self {
        Self {
            inner: DMatrix::identity(dim, dim),
        }
    }

    pub fn dim(&self) -> usize {
        self.inner.nrows()
    }

    pub fn get(&self, i: usize, j: usize) -> Complex64 {
        self.inner[(i, j)]
    }

    pub fn as_matrix(&self) -> &DMatrix<Complex64> {
        &self.inner
    }

    pub fn into_matrix(self) -> DMatrix<Complex64> {
        self.inner
    }

    pub fn trace(&self) -> Complex64 {
        self.inner.trace()
    }

    /// Largest Hermiticity defect `max_ij |m_ij - conj(m_ji)|`.
    pub fn hermiticity_defect(&self) -> f64 {
        let d = self.dim();
        let mut worst = 0.0f64;
        for i in 0..d {
            for j in 0..d {
                let defect = (self.inner[(i, j)] - self.inner[(j, i)].conj()).norm();
                worst = worst.max(defect);
            }
        }
        worst
    }

    /// Real eigenvalues of a (numerically) Hermitian matrix, ascending.
    pub fn hermitian_eigenvalues(&self) -> Vec<f64> {
        let mut eigs: Vec<f64> = self
            .inner
            .clone()
            .symmetric_eigen()
            .eigenvalues
            .iter()
            .copied()
            .collect();
        eigs.sort_by(|a, b| a.total_cmp(b));
        eigs
    }

    pub fn to_json(&self) -> MatrixJson {
        MatrixJson::from_complex(&self.inner)
    }

    pub fn from_json(json: &MatrixJson) -> Result<Self> {
        Self::new(json.to_complex()?)
    }
}

/// Hermitian, PSD, unit-trace complex matrix: the output of tomography.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix {
    inner: ComplexMatrix,
}

impl DensityMatrix {
    /// Validates the density-matrix invariants at [`DENSITY_TOLERANCE`]:
    /// Hermitian, unit trace, smallest eigenvalue above `-1e-9`.
    pub fn new(matrix: ComplexMatrix) -> Result<Self> {
        let defect = matrix.hermiticity_defect();
        if defect > DENSITY_TOLERANCE {
            return Err(Error::invalid(format!(
                "matrix is not Hermitian (defect {defect:.3e})"
            )));
        }
        let trace = matrix.trace();
        if (trace.re - 1.0).abs() > DENSITY_TOLERANCE || trace.im.abs() > DENSITY_TOLERANCE {
            return Err(Error::invalid(format!("trace must be 1, got {trace}")));
        }
        let min_eig = matrix
            .hermitian_eigenvalues()
            .first()
            .copied()
            .unwrap_or(0.0);
        if min_eig < -DENSITY_TOLERANCE {
            return Err(Error::invalid(format!(
                "matrix is not PSD (smallest eigenvalue {min_eig:.3e})"
            )));
        }
        Ok(Self { inner: matrix })
    }

    pub fn dim(&self) -> usize {
        self.inner.dim()
    }

    pub fn get(&self, i: usize, j: usize) -> Complex64 {
        self.inner.get(i, j)
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.inner
    }

    pub fn as_matrix(&self) -> &DMatrix<Complex64> {
        self.inner.as_matrix()
    }

    pub fn to_json(&self) -> MatrixJson {
        self.inner.to_json()
    }

    pub fn from_json(json: &MatrixJson) -> Result<Self> {
        Self::new(ComplexMatrix::from_json(json)?)
    }
}

/// Element-wise moduli of a density matrix: the real nonnegative matrix the
/// detectors actually consume.
#[derive(Debug, Clone, PartialEq)]
pub struct AbsoluteMatrix {
    inner: DMatrix<f64>,
}

impl AbsoluteMatrix {
    pub fn new(inner: DMatrix<f64>) -> Result<Self> {
        if inner.nrows() != inner.ncols() || inner.nrows() == 0 {
            return Err(Error::invalid(format!(
                "matrix must be square and non-empty, got {}x{}",
                inner.nrows(),
                inner.ncols()
            )));
        }
        if !inner.iter().all(|x| x.is_finite() && *x >= 0.0) {
            return Err(Error::invalid("entries must be finite and nonnegative"));
        }
        Ok(Self { inner })
    }

    pub fn dim(&self) -> usize {
        self.inner.nrows()
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.inner[(i, j)]
    }

    pub fn as_matrix(&self) -> &DMatrix<f64> {
        &self.inner
    }

    pub fn to_json(&self) -> MatrixJson {
        MatrixJson::from_real(&self.inner)
    }

    pub fn from_json(json: &MatrixJson) -> Result<Self> {
        if json.im.is_some() {
            return Err(Error::invalid(
                "absolute matrix must not carry an imaginary part",
            ));
        }
        Self::new(json.to_real()?)
    }
}

/// Unit-norm complex state vector.
#[derive(Debug, Clone, PartialEq)]
pub struct PureState {
    amplitudes: DVector<Complex64>,
}

impl PureState {
    pub fn new(amplitudes: DVector<Complex64>) -> Result<Self> {
        if amplitudes.is_empty() {
            return Err(Error::invalid("state vector must be non-empty"));
        }
        if !amplitudes
            .iter()
            .all(|c| c.re.is_finite() && c.im.is_finite())
        {
            return Err(Error::invalid("state amplitudes must be finite"));
        }
        let norm = amplitudes.norm();
        if (norm - 1.0).abs() > PURE_STATE_TOLERANCE {
            return Err(Error::invalid(format!(
                "state vector must have unit norm, got {norm}"
            )));
        }
        Ok(Self { amplitudes })
    }

    pub fn dim(&self) -> usize {
        self.amplitudes.len()
    }

    pub fn amplitudes(&self) -> &DVector<Complex64> {
        &self.amplitudes
    }

    /// Outer product `|psi><psi|` as a validated density matrix.
    pub fn density(&self) -> DensityMatrix {
        let outer = &self.amplitudes * self.amplitudes.adjoint();
        DensityMatrix::new(ComplexMatrix::new(outer).expect("outer product is square"))
            .expect("outer product of a unit vector is a valid density matrix")
    }
}

/// Free-function form of [`PureState::density`].
pub fn density_of(state: &PureState) -> DensityMatrix {
    state.density()
}

/// Sum of singular values of a complex matrix.
pub fn trace_norm(m: &ComplexMatrix) -> f64 {
    m.as_matrix()
        .clone()
        .svd(false, false)
        .singular_values
        .iter()
        .sum()
}

/// Sum of singular values of a real matrix.
///
/// Rejects non-square or non-finite input; the detectors call this on
/// deviation matrices that are not wrapped in a domain type.
pub fn trace_norm_real(m: &DMatrix<f64>) -> Result<f64> {
    if m.nrows() != m.ncols() {
        return Err(Error::invalid(format!(
            "trace norm requires a square matrix, got {}x{}",
            m.nrows(),
            m.ncols()
        )));
    }
    if !m.iter().all(|x| x.is_finite()) {
        return Err(Error::invalid("trace norm requires finite entries"));
    }
    Ok(m.clone().svd(false, false).singular_values.iter().sum())
}

/// Element-wise modulus `|rho_ij|`. Symmetric for Hermitian input, and the
/// diagonal matches the (real, nonnegative) diagonal of `rho`.
pub fn elementwise_abs(rho: &DensityMatrix) -> AbsoluteMatrix {
    let d = rho.dim();
    let inner = DMatrix::from_fn(d, d, |i, j| rho.get(i, j).norm());
    AbsoluteMatrix::new(inner).expect("moduli of finite entries are finite and nonnegative")
}

/// `(|HH> + |VV>)/sqrt(2)` in the `{HH, HV, VH, VV}` order.
pub fn bell_state() -> PureState {
    let amp = std::f64::consts::FRAC_1_SQRT_2;
    PureState::new(DVector::from_vec(vec![
        Complex64::new(amp, 0.0),
        Complex64::new(0.0, 0.0),
        Complex64::new(0.0, 0.0),
        Complex64::new(amp, 0.0),
    ]))
    .expect("Bell state has unit norm")
}

/// Partially dephased Bell state
/// `(1 - 2*lambda)|psi><psi| + lambda|HH><HH| + lambda|VV><VV|`.
///
/// The (1,4) coherence modulus is `0.5 - lambda` while the diagonal stays
/// `(0.5, 0, 0, 0.5)`, so `lambda = 0.1` reproduces an off-diagonal reduced
/// by 0.1 from the pure entangled state.
pub fn erroneous_state(lambda: f64) -> Result<DensityMatrix> {
    if !(0.0..=0.5).contains(&lambda) || !lambda.is_finite() {
        return Err(Error::invalid(format!(
            "lambda must lie in [0, 0.5], got {lambda}"
        )));
    }
    let psi = bell_state().density();
    let mut m = psi.as_matrix() * Complex64::new(1.0 - 2.0 * lambda, 0.0);
    m[(0, 0)] += Complex64::new(lambda, 0.0); // |HH><HH|
    m[(3, 3)] += Complex64::new(lambda, 0.0); // |VV><VV|
    DensityMatrix::new(ComplexMatrix::new(m)?)
}

/// Matrix wire format: `{"dim": d, "re": [[...]], "im": [[...]]}` with
/// row-major nested arrays. Absolute matrices omit `"im"`.
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct MatrixJson {
    pub dim: usize,
    pub re: Vec<Vec<f64>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub im: Option<Vec<Vec<f64>>>,
}

impl MatrixJson {
    pub fn from_complex(m: &DMatrix<Complex64>) -> Self {
        let d = m.nrows();
        Self {
            dim: d,
            re: (0..d).map(|i| (0..d).map(|j| m[(i, j)].re).collect()).collect(),
            im: Some((0..d).map(|i| (0..d).map(|j| m[(i, j)].im).collect()).collect()),
        }
    }

    pub fn from_real(m: &DMatrix<f64>) -> Self {
        let d = m.nrows();
        Self {
            dim: d,
            re: (0..d).map(|i| (0..d).map(|j| m[(i, j)]).collect()).collect(),
            im: None,
        }
    }

    fn check_shape(&self, rows: &[Vec<f64>]) -> Result<()> {
        if rows.len() != self.dim || rows.iter().any(|r| r.len() != self.dim) {
            return Err(Error::invalid(format!(
                "expected {0}x{0} nested arrays",
                self.dim
            )));
        }
        Ok(())
    }

    pub fn to_complex(&self) -> Result<DMatrix<Complex64>> {
        self.check_shape(&self.re)?;
        if let Some(im) = &self.im {
            self.check_shape(im)?;
        }
        Ok(DMatrix::from_fn(self.dim, self.dim, |i, j| {
            let re = self.re[i][j];
            let im = self.im.as_ref().map_or(0.0, |rows| rows[i][j]);
            Complex64::new(re, im)
        }))
    }

    pub fn to_real(&self) -> Result<DMatrix<f64>> {
        self.check_shape(&self.re)?;
        Ok(DMatrix::from_fn(self.dim, self.dim, |i, j| self.re[i][j]))
    }
}

/// Real-matrix wire helper used by the decomposition output (no `dim` field;
/// the nested arrays carry the shape).
pub(crate) fn real_to_rows(m: &DMatrix<f64>) -> Vec<Vec<f64>> {
    (0..m.nrows())
        .map(|i| (0..m.ncols()).map(|j| m[(i, j)]).collect())
        .collect()
}

pub(crate) fn rows_to_real(rows: &[Vec<f64>]) -> Result<DMatrix<f64>> {
    let nrows = rows.len();
    let ncols = rows.first().map_or(0, |r| r.len());
    if nrows == 0 || rows.iter().any(|r| r.len() != ncols) {
        return Err(Error::invalid("ragged or empty nested array"));
    }
    Ok(DMatrix::from_fn(nrows, ncols, |i, j| rows[i][j]))
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use nalgebra::DMatrix;
    use proptest::prelude::*;

    fn outer_real(v: &[f64]) -> DMatrix<f64> {
        let n = v.len();
        DMatrix::from_fn(n, n, |i, j| v[i] * v[j])
    }

    #[test]
    fn trace_norm_zero_matrix() {
        let m = ComplexMatrix::zeros(4);
        assert_eq!(trace_norm(&m), 0.0);
    }

    #[test]
    fn trace_norm_identity() {
        let m = ComplexMatrix::identity(4);
        assert_relative_eq!(trace_norm(&m), 4.0, max_relative = 1e-12);
    }

    #[test]
    fn trace_norm_rank_one_scaled_outer_product() {
        // 0.3 * u u^T for a unit vector has a single singular value 0.3.
        let u = [0.5f64, 0.5, 0.5, 0.5];
        let m = outer_real(&u) * 0.3;
        assert_relative_eq!(trace_norm_real(&m).unwrap(), 0.3, epsilon = 1e-12);
    }

    #[test]
    fn trace_norm_real_rejects_non_square() {
        let m = DMatrix::from_element(2, 3, 1.0);
        assert!(matches!(
            trace_norm_real(&m),
            Err(Error::InvalidArgument(_))
        ));
    }

    #[test]
    fn trace_norm_real_rejects_non_finite() {
        let m = DMatrix::from_element(2, 2, f64::NAN);
        assert!(matches!(
            trace_norm_real(&m),
            Err(Error::InvalidArgument(_))
        ));
    }

    #[test]
    fn hermitian_eigenvalue_path_agrees_with_svd() {
        // For Hermitian input the trace norm equals the sum of |eigenvalues|.
        let m = DMatrix::from_row_slice(3, 3, &[2.0, -1.0, 0.3, -1.0, 0.5, 0.2, 0.3, 0.2, -1.2]);
        let c = ComplexMatrix::new(m.map(|x| Complex64::new(x, 0.0))).unwrap();
        let eig_sum: f64 = c.hermitian_eigenvalues().iter().map(|e| e.abs()).sum();
        assert_relative_eq!(trace_norm(&c), eig_sum, epsilon = 1e-10);
    }

    #[test]
    fn elementwise_abs_of_bell_density() {
        let abs = elementwise_abs(&bell_state().density());
        for i in 0..4 {
            for j in 0..4 {
                let expected = if (i == 0 || i == 3) && (j == 0 || j == 3) {
                    0.5
                } else {
                    0.0
                };
                assert_relative_eq!(abs.get(i, j), expected, epsilon = 1e-12);
            }
        }
    }

    #[test]
    fn elementwise_abs_of_diagonal_density_is_identity_map() {
        let m = DMatrix::from_fn(4, 4, |i, j| {
            if i == j {
                Complex64::new(0.25, 0.0)
            } else {
                Complex64::new(0.0, 0.0)
            }
        });
        let rho = DensityMatrix::new(ComplexMatrix::new(m).unwrap()).unwrap();
        let abs = elementwise_abs(&rho);
        for i in 0..4 {
            for j in 0..4 {
                assert_eq!(abs.get(i, j), if i == j { 0.25 } else { 0.0 });
            }
        }
    }

    #[test]
    fn elementwise_abs_takes_modulus_of_phases() {
        // Hermitian matrix with a 0.3*exp(i pi/3) coherence at (1,2).
        let phase = Complex64::from_polar(0.3, std::f64::consts::FRAC_PI_3);
        let mut m = DMatrix::from_element(2, 2, Complex64::new(0.0, 0.0));
        m[(0, 0)] = Complex64::new(0.6, 0.0);
        m[(1, 1)] = Complex64::new(0.4, 0.0);
        m[(0, 1)] = phase;
        m[(1, 0)] = phase.conj();
        let rho = DensityMatrix::new(ComplexMatrix::new(m).unwrap()).unwrap();
        assert_relative_eq!(elementwise_abs(&rho).get(0, 1), 0.3, epsilon = 1e-12);
    }

    #[test]
    fn bell_state_amplitudes() {
        let psi = bell_state();
        let amp = psi.amplitudes();
        assert_relative_eq!(amp[0].re, 0.70710678, epsilon = 1e-8);
        assert_eq!(amp[1], Complex64::new(0.0, 0.0));
        assert_eq!(amp[2], Complex64::new(0.0, 0.0));
        assert_relative_eq!(amp[3].re, 0.70710678, epsilon = 1e-8);
        assert_relative_eq!(amp.norm(), 1.0, epsilon = 1e-12);
    }

    #[test]
    fn bell_density_has_corner_coherence() {
        let rho = density_of(&bell_state());
        assert_relative_eq!(rho.get(0, 3).re, 0.5, epsilon = 1e-12);
        assert_relative_eq!(rho.get(0, 3).im, 0.0, epsilon = 1e-12);
    }

    #[test]
    fn erroneous_state_at_zero_is_bell_density() {
        let rho = erroneous_state(0.0).unwrap();
        let psi = bell_state().density();
        for i in 0..4 {
            for j in 0..4 {
                assert_relative_eq!(
                    (rho.get(i, j) - psi.get(i, j)).norm(),
                    0.0,
                    epsilon = 1e-12
                );
            }
        }
    }

    #[test]
    fn erroneous_state_reduces_coherence_by_lambda() {
        let rho = erroneous_state(0.1).unwrap();
        assert_relative_eq!(rho.get(0, 3).norm(), 0.4, epsilon = 1e-12);
        assert_relative_eq!(rho.get(0, 0).re, 0.5, epsilon = 1e-12);
        assert_relative_eq!(rho.get(1, 1).re, 0.0, epsilon = 1e-12);
        assert_relative_eq!(rho.get(2, 2).re, 0.0, epsilon = 1e-12);
        assert_relative_eq!(rho.get(3, 3).re, 0.5, epsilon = 1e-12);
    }

    #[test]
    fn erroneous_state_fully_dephased() {
        let rho = erroneous_state(0.5).unwrap();
        assert_relative_eq!(rho.get(0, 3).norm(), 0.0, epsilon = 1e-12);
        assert_relative_eq!(rho.get(0, 0).re, 0.5, epsilon = 1e-12);
        assert_relative_eq!(rho.get(3, 3).re, 0.5, epsilon = 1e-12);
    }

    #[test]
    fn erroneous_state_rejects_out_of_range() {
        assert!(erroneous_state(-0.01).is_err());
        assert!(erroneous_state(0.51).is_err());
        assert!(erroneous_state(f64::NAN).is_err());
    }

    #[test]
    fn matrix_json_round_trip() {
        let rho = erroneous_state(0.2).unwrap();
        let json = serde_json::to_string(&rho.to_json()).unwrap();
        let back = DensityMatrix::from_json(&serde_json::from_str(&json).unwrap()).unwrap();
        assert_eq!(serde_json::to_string(&back.to_json()).unwrap(), json);
    }

    #[test]
    fn absolute_matrix_json_omits_im() {
        let abs = elementwise_abs(&bell_state().density());
        let text = serde_json::to_string(&abs.to_json()).unwrap();
        assert!(!text.contains("\"im\""));
        let back = AbsoluteMatrix::from_json(&serde_json::from_str(&text).unwrap()).unwrap();
        assert_eq!(back, abs);
    }

    fn complex_matrix_strategy(dim: usize) -> impl Strategy<Value = ComplexMatrix> {
        proptest::collection::vec(
            (-1.0f64..1.0, -1.0f64..1.0).prop_map(|(re, im)| Complex64::new(re, im)),
            dim * dim,
        )
        .prop_map(move |entries| {
            ComplexMatrix::new(DMatrix::from_vec(dim, dim, entries)).unwrap()
        })
    }

    /// Unitary from the QR factorization of a random complex matrix.
    fn random_unitary(m: &ComplexMatrix) -> DMatrix<Complex64> {
        let shifted = m.as_matrix() + DMatrix::identity(m.dim(), m.dim()) * Complex64::new(2.0, 0.0);
        shifted.qr().q()
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]

        #[test]
        fn trace_norm_triangle_inequality(
            a in complex_matrix_strategy(3),
            b in complex_matrix_strategy(3),
        ) {
            let sum = ComplexMatrix::new(a.as_matrix() + b.as_matrix()).unwrap();
            prop_assert!(trace_norm(&sum) <= trace_norm(&a) + trace_norm(&b) + 1e-9);
        }

        #[test]
        fn trace_norm_positive_homogeneity(a in complex_matrix_strategy(3), c in 0.0f64..5.0) {
            let scaled = ComplexMatrix::new(a.as_matrix() * Complex64::new(c, 0.0)).unwrap();
            prop_assert!((trace_norm(&scaled) - c * trace_norm(&a)).abs() <= 1e-9);
        }

        #[test]
        fn trace_norm_unitary_invariance(
            a in complex_matrix_strategy(3),
            u_seed in complex_matrix_strategy(3),
            v_seed in complex_matrix_strategy(3),
        ) {
            let u = random_unitary(&u_seed);
            let v = random_unitary(&v_seed);
            let rotated = ComplexMatrix::new(&u * a.as_matrix() * &v).unwrap();
            prop_assert!((trace_norm(&rotated) - trace_norm(&a)).abs() <= 1e-9);
        }

        #[test]
        fn erroneous_state_valid_over_lambda_range(lambda in 0.0f64..=0.5) {
            // DensityMatrix::new re-validates all invariants.
            let rho = erroneous_state(lambda).unwrap();
            prop_assert!((rho.get(0, 3).norm() - (0.5 - lambda)).abs() < 1e-12);
        }

        #[test]
        fn elementwise_abs_preserves_hermitian_diagonal(lambda in 0.0f64..=0.5) {
            let rho = erroneous_state(lambda).unwrap();
            let abs = elementwise_abs(&rho);
            for i in 0..4 {
                prop_assert!((abs.get(i, i) - rho.get(i, i).re).abs() < 1e-12);
            }
        }
    }
}
