//! Independent oracles for the acceptance suite. Nothing here may call into
//! the solver paths it certifies: eigenvalues come from a hand-rolled Jacobi
//! sweep, AUC from direct pair counting, and the decomposition objective from
//! a primal-only proximal-gradient method.

// Each integration-test binary compiles this module separately and uses a
// different subset of it.
#![allow(dead_code)]

use nalgebra::DMatrix;

use ed3::detector::{MatrixSet, WeightMatrix};

/// Cyclic Jacobi eigenvalue iteration for a real symmetric matrix.
pub fn jacobi_eigenvalues(matrix: &DMatrix<f64>) -> Vec<f64> {
    let n = matrix.nrows();
    assert_eq!(n, matrix.ncols(), "Jacobi needs a square matrix");
    let mut a = matrix.clone();
    for _sweep in 0..200 {
        let mut off_diagonal = 0.0;
        for i in 0..n {
            for j in (i + 1)..n {
                off_diagonal += a[(i, j)] * a[(i, j)];
            }
        }
        if off_diagonal.sqrt() < 1e-14 {
            break;
        }
        for p in 0..n {
            for q in (p + 1)..n {
                if a[(p, q)].abs() < 1e-300 {
                    continue;
                }
                let theta = 0.5 * (a[(q, q)] - a[(p, p)]) / a[(p, q)];
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                for k in 0..n {
                    let akp = a[(k, p)];
                    let akq = a[(k, q)];
                    a[(k, p)] = c * akp - s * akq;
                    a[(k, q)] = s * akp + c * akq;
                }
                for k in 0..n {
                    let apk = a[(p, k)];
                    let aqk = a[(q, k)];
                    a[(p, k)] = c * apk - s * aqk;
                    a[(q, k)] = s * apk + c * aqk;
                }
            }
        }
    }
    (0..n).map(|i| a[(i, i)]).collect()
}

/// Trace norm of a real matrix as the sum of square roots of the eigenvalues
/// of `m^T m`, with the eigenvalues from the Jacobi oracle.
pub fn trace_norm_oracle_real(m: &DMatrix<f64>) -> f64 {
    let gram = m.transpose() * m;
    jacobi_eigenvalues(&gram)
        .into_iter()
        .map(|e| e.max(0.0).sqrt())
        .sum()
}

/// Trace norm of a complex matrix through its real 2d x 2d embedding
/// `[[re, -im], [im, re]]`, whose singular values double those of the
/// original.
pub fn trace_norm_oracle_complex(re: &DMatrix<f64>, im: &DMatrix<f64>) -> f64 {
    let d = re.nrows();
    let embedded = DMatrix::from_fn(2 * d, 2 * d, |i, j| match (i >= d, j >= d) {
        (false, false) | (true, true) => re[(i % d, j % d)],
        (true, false) => im[(i % d, j % d)],
        (false, true) => -im[(i % d, j % d)],
    });
    trace_norm_oracle_real(&embedded) / 2.0
}

/// AUC (percent) by direct pair ordering: the fraction of
/// (erroneous, normal) pairs ranked correctly, ties counted one half.
pub fn mann_whitney_auc(scores: &[f64], labels: &[bool]) -> f64 {
    let mut correct = 0.0;
    let mut pairs = 0.0;
    for (score_e, _) in scores.iter().zip(labels).filter(|(_, l)| **l) {
        for (score_n, _) in scores.iter().zip(labels).filter(|(_, l)| !**l) {
            pairs += 1.0;
            if score_e > score_n {
                correct += 1.0;
            } else if score_e == score_n {
                correct += 0.5;
            }
        }
    }
    correct / pairs * 100.0
}

/// The decomposition objective
/// `sum_k 1/2 ||rho_k - (theta + omega_k)||_F^2 + gamma sum_k ||s . omega_k||_F`,
/// written out entry by entry.
pub fn decomposition_objective(
    set: &MatrixSet,
    weights: &WeightMatrix,
    gamma: f64,
    theta: &DMatrix<f64>,
    omegas: &[DMatrix<f64>],
) -> f64 {
    let d = set.dim();
    let mut value = 0.0;
    for (k, omega) in omegas.iter().enumerate() {
        let mut fit = 0.0;
        let mut penalty_sq = 0.0;
        for i in 0..d {
            for j in 0..d {
                let residual = set.get(k).get(i, j) - theta[(i, j)] - omega[(i, j)];
                fit += residual * residual;
                let weighted = weights.get(i, j) * omega[(i, j)];
                penalty_sq += weighted * weighted;
            }
        }
        value += 0.5 * fit + gamma * penalty_sq.sqrt();
    }
    value
}

/// Proximal operator of `t * gamma * ||s . w||_F`: either the zero matrix or
/// the solution of a scalar secular equation found by guarded Newton.
fn group_prox(w: &DMatrix<f64>, s: &DMatrix<f64>, t_gamma: f64) -> DMatrix<f64> {
    let zero_condition: f64 = w
        .iter()
        .zip(s.iter())
        .map(|(wij, sij)| (wij / sij) * (wij / sij))
        .sum::<f64>()
        .sqrt();
    if zero_condition <= t_gamma {
        return DMatrix::zeros(w.nrows(), w.ncols());
    }

    let phi = |nu: f64| -> f64 {
        w.iter()
            .zip(s.iter())
            .map(|(wij, sij)| {
                let num = sij * wij;
                let den = nu + t_gamma * sij * sij;
                (num / den) * (num / den)
            })
            .sum::<f64>()
    };
    let phi_slope = |nu: f64| -> f64 {
        -2.0 * w
            .iter()
            .zip(s.iter())
            .map(|(wij, sij)| {
                let num = sij * wij;
                let den = nu + t_gamma * sij * sij;
                num * num / (den * den * den)
            })
            .sum::<f64>()
    };

    // phi is convex and decreasing with phi(0) > 1 and phi(upper) < 1, so
    // Newton from below converges monotonically; bisection guards the steps.
    let mut lo = 0.0;
    let mut hi = w.component_mul(s).norm();
    let mut nu = 0.0;
    for _ in 0..200 {
        let value = phi(nu);
        if (value - 1.0).abs() < 1e-14 {
            break;
        }
        if value > 1.0 {
            lo = nu;
        } else {
            hi = nu;
        }
        let newton = nu - (value - 1.0) / phi_slope(nu);
        nu = if newton > lo && newton < hi {
            newton
        } else {
            0.5 * (lo + hi)
        };
    }
    DMatrix::from_fn(w.nrows(), w.ncols(), |i, j| {
        w[(i, j)] * nu / (nu + t_gamma * s[(i, j)] * s[(i, j)])
    })
}

/// Primal-only proximal-gradient solver for the decomposition problem, with
/// the shared component eliminated in closed form. Independent of the ADMM
/// path it certifies.
pub fn primal_prox_gradient_solver(
    set: &MatrixSet,
    weights: &WeightMatrix,
    gamma: f64,
    max_iterations: usize,
) -> (DMatrix<f64>, Vec<DMatrix<f64>>) {
    let k_count = set.len();
    let d = set.dim();
    let s = weights.as_matrix();

    let mut mean = DMatrix::<f64>::zeros(d, d);
    for m in set.iter() {
        mean += m.as_matrix();
    }
    mean /= k_count as f64;

    let mut omegas: Vec<DMatrix<f64>> = vec![DMatrix::zeros(d, d); k_count];
    let mut previous = f64::INFINITY;
    let mut stalled = 0;
    for _ in 0..max_iterations {
        let mut omega_mean = DMatrix::<f64>::zeros(d, d);
        for omega in &omegas {
            omega_mean += omega;
        }
        omega_mean /= k_count as f64;
        let theta = &mean - &omega_mean;

        // Gradient of the smooth part has unit Lipschitz constant after the
        // shared component is eliminated, so the step is 1.
        let mut objective = 0.0;
        for k in 0..k_count {
            let residual = set.get(k).as_matrix() - &theta - &omegas[k];
            objective += 0.5 * residual.norm_squared();
            let target = &omegas[k] + residual;
            omegas[k] = group_prox(&target, s, gamma);
            objective += gamma * omegas[k].component_mul(s).norm();
        }

        if (previous - objective).abs() <= 1e-15 * objective.abs().max(1.0) {
            stalled += 1;
            if stalled >= 50 {
                break;
            }
        } else {
            stalled = 0;
        }
        previous = objective;
    }

    let mut omega_mean = DMatrix::<f64>::zeros(d, d);
    for omega in &omegas {
        omega_mean += omega;
    }
    omega_mean /= k_count as f64;
    let theta = &mean - &omega_mean;
    (theta, omegas)
}

/// Splitmix-style deterministic stream for test instances.
pub struct TestRng(pub u64);

impl TestRng {
    pub fn next_u64(&mut self) -> u64 {
        self.0 = self.0.wrapping_add(0x9e3779b97f4a7c15);
        let mut z = self.0;
        z = (z ^ (z >> 30)).wrapping_mul(0xbf58476d1ce4e5b9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94d049bb133111eb);
        z ^ (z >> 31)
    }

    /// Uniform in [0, 1).
    pub fn next_f64(&mut self) -> f64 {
        (self.next_u64() >> 11) as f64 / (1u64 << 53) as f64
    }

    pub fn uniform(&mut self, lo: f64, hi: f64) -> f64 {
        lo + (hi - lo) * self.next_f64()
    }

    pub fn range(&mut self, lo: usize, hi: usize) -> usize {
        lo + (self.next_u64() % (hi - lo) as u64) as usize
    }
}
