//! Trace-norm cross-checks against the hand-rolled Jacobi oracle.

mod common;

use common::{trace_norm_oracle_complex, trace_norm_oracle_real, TestRng};
use ed3::linalg::{trace_norm, trace_norm_real, ComplexMatrix};
use nalgebra::DMatrix;
use num_complex::Complex64;

#[test]
fn real_trace_norm_matches_jacobi_oracle() {
    let mut rng = TestRng(0x7E);
    for _ in 0..50 {
        let d = rng.range(1, 6);
        let m = DMatrix::from_fn(d, d, |_, _| rng.uniform(-1.0, 1.0));
        let implementation = trace_norm_real(&m).unwrap();
        let oracle = trace_norm_oracle_real(&m);
        assert!(
            (implementation - oracle).abs() <= 1e-9,
            "impl {implementation} vs oracle {oracle} at d={d}"
        );
    }
}

#[test]
fn complex_trace_norm_matches_jacobi_oracle() {
    let mut rng = TestRng(0x7F);
    for _ in 0..50 {
        let d = rng.range(1, 5);
        let re = DMatrix::from_fn(d, d, |_, _| rng.uniform(-1.0, 1.0));
        let im = DMatrix::from_fn(d, d, |_, _| rng.uniform(-1.0, 1.0));
        let m = ComplexMatrix::new(DMatrix::from_fn(d, d, |i, j| {
            Complex64::new(re[(i, j)], im[(i, j)])
        }))
        .unwrap();
        let implementation = trace_norm(&m);
        let oracle = trace_norm_oracle_complex(&re, &im);
        assert!(
            (implementation - oracle).abs() <= 1e-9,
            "impl {implementation} vs oracle {oracle} at d={d}"
        );
    }
}

#[test]
fn rank_one_scaled_outer_product_has_known_trace_norm() {
    // 0.3 u u^T for unit u: single singular value 0.3, certified by the
    // oracle as well as the closed form.
    let u = DMatrix::from_column_slice(4, 1, &[0.5, 0.5, 0.5, 0.5]);
    let m = &u * u.transpose() * 0.3;
    assert!((trace_norm_real(&m).unwrap() - 0.3).abs() < 1e-12);
    // The oracle squares the matrix, so its precision floor is sqrt(eps).
    assert!((trace_norm_oracle_real(&m) - 0.3).abs() < 1e-8);
}
