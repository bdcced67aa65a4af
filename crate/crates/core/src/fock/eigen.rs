use ndarray::Array2;

use super::TruncationConfig;
use crate::error::{Error, Result};

/// Sweep cap for the cyclic Jacobi eigensolver.
pub const JACOBI_MAX_SWEEPS: usize = 100;

/// Eigenvalues of a real symmetric matrix, sorted in descending order.
///
/// Cyclic Jacobi rotations are applied until the off-diagonal Frobenius norm
/// drops below `cfg.eig_tol`. Eigenvalues in `[-abs_tol, 0)` are clamped to
/// zero; anything more negative is returned unchanged so callers that need
/// positive semidefiniteness can reject it.
pub fn sym_eigenvalues(mat: &Array2<f64>, cfg: &TruncationConfig) -> Result<Vec<f64>> {
    jacobi_eigenvalues(mat, cfg, JACOBI_MAX_SWEEPS)
}

fn jacobi_eigenvalues(mat: &Array2<f64>, cfg: &TruncationConfig, max_sweeps: usize) -> Result<Vec<f64>> {
    let (rows, cols) = mat.dim();
    if rows != cols {
        return Err(Error::DimensionMismatch(format!("eigensolve of a {rows}x{cols} matrix")));
    }
    let asym = max_asymmetry(mat);
    if asym > cfg.abs_tol {
        return Err(Error::NotSymmetric(asym));
    }

    let n = rows;
    // Symmetrized row-major working copy.
    let mut a = vec![0.0; n * n];
    for i in 0..n {
        for j in 0..n {
            a[i * n + j] = 0.5 * (mat[[i, j]] + mat[[j, i]]);
        }
    }

    let mut sweeps = 0;
    loop {
        let off = off_diagonal_norm(&a, n);
        if off < cfg.eig_tol {
            break;
        }
        if sweeps == max_sweeps {
            return Err(Error::NoConvergence { sweeps, residual: off });
        }
        for p in 0..n {
            for q in p + 1..n {
                rotate(&mut a, n, p, q);
            }
        }
        sweeps += 1;
    }

    let mut eigs: Vec<f64> = (0..n)
        .map(|i| {
            let v = a[i * n + i];
            if v < 0.0 && v >= -cfg.abs_tol {
                0.0
            } else {
                v
            }
        })
        .collect();
    eigs.sort_by(|x, y| y.total_cmp(x));
    Ok(eigs)
}

fn max_asymmetry(mat: &Array2<f64>) -> f64 {
    let n = mat.nrows();
    let mut worst: f64 = 0.0;
    for i in 0..n {
        for j in i + 1..n {
            worst = worst.max((mat[[i, j]] - mat[[j, i]]).abs());
        }
    }
    worst
}

fn off_diagonal_norm(a: &[f64], n: usize) -> f64 {
    let mut sum = 0.0;
    for i in 0..n {
        for j in i + 1..n {
            let x = a[i * n + j];
            sum += x * x;
        }
    }
    (2.0 * sum).sqrt()
}

/// One Jacobi rotation annihilating `a[p][q]`.
fn rotate(a: &mut [f64], n: usize, p: usize, q: usize) {
    let apq = a[p * n + q];
    if apq == 0.0 {
        return;
    }
    let app = a[p * n + p];
    let aqq = a[q * n + q];
    let theta = (aqq - app) / (2.0 * apq);
    let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
    let c = 1.0 / (t * t + 1.0).sqrt();
    let s = t * c;
    let tau = s / (1.0 + c);

    a[p * n + p] = app - t * apq;
    a[q * n + q] = aqq + t * apq;
    a[p * n + q] = 0.0;
    a[q * n + p] = 0.0;
    for k in 0..n {
        if k == p || k == q {
            continue;
        }
        let akp = a[k * n + p];
        let akq = a[k * n + q];
        if akp == 0.0 && akq == 0.0 {
            continue;
        }
        let new_kp = akp - s * (akq + tau * akp);
        let new_kq = akq + s * (akp - tau * akq);
        a[k * n + p] = new_kp;
        a[p * n + k] = new_kp;
        a[k * n + q] = new_kq;
        a[q * n + k] = new_kq;
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use ndarray::array;
    use proptest::prelude::*;

    fn cfg() -> TruncationConfig {
        TruncationConfig::new(4).unwrap()
    }

    #[test]
    fn diagonal_is_sorted() {
        let m = Array2::from_diag(&array![3.0, 1.0, 2.0]);
        assert_eq!(sym_eigenvalues(&m, &cfg()).unwrap(), vec![3.0, 2.0, 1.0]);
    }

    #[test]
    fn pauli_x() {
        let m = array![[0.0, 1.0], [1.0, 0.0]];
        let eigs = sym_eigenvalues(&m, &cfg()).unwrap();
        assert!((eigs[0] - 1.0).abs() < 1e-14);
        assert!((eigs[1] + 1.0).abs() < 1e-14);
    }

    #[test]
    fn clamp_window() {
        let m = Array2::from_diag(&array![1.0, -5e-11, -1e-6]);
        let eigs = sym_eigenvalues(&m, &cfg()).unwrap();
        assert_eq!(eigs, vec![1.0, 0.0, -1e-6]);
    }

    #[test]
    fn rejects_non_symmetric() {
        let m = array![[1.0, 2.0], [0.0, 1.0]];
        assert!(matches!(sym_eigenvalues(&m, &cfg()), Err(Error::NotSymmetric(_))));
        let m = Array2::<f64>::zeros((2, 3));
        assert!(matches!(sym_eigenvalues(&m, &cfg()), Err(Error::DimensionMismatch(_))));
    }

    #[test]
    fn reports_non_convergence() {
        let m = array![[2.0, 1.0], [1.0, 3.0]];
        assert_eq!(
            jacobi_eigenvalues(&m, &cfg(), 0).unwrap_err(),
            Error::NoConvergence { sweeps: 0, residual: 2.0_f64.sqrt() }
        );
        assert!(jacobi_eigenvalues(&m, &cfg(), 1).is_ok());
    }

    #[test]
    fn rank_one_rho_ar_block() {
        // The 2x2 output block at r = 0.8, n = 2 has a vanishing determinant.
        let r: f64 = 0.8;
        let n = 2.0;
        let ch = r.cosh();
        let a_n = r.tanh().powi(4) / (2.0 * ch * ch);
        let off = a_n * (n + 1.0_f64).sqrt() / ch;
        let m = array![[a_n, off], [off, a_n * (n + 1.0) / (ch * ch)]];
        let eigs = sym_eigenvalues(&m, &cfg()).unwrap();
        let expected = a_n * (1.0 + 3.0 / (ch * ch));
        assert!((eigs[0] - expected).abs() < 1e-15);
        assert!(eigs[1].abs() < 1e-15);
    }

    proptest! {
        #[test]
        fn psd_spectrum_sums_to_trace(
            entries in proptest::collection::vec(-1.0f64..1.0, 36),
        ) {
            // G Gᵀ is PSD for any square G.
            let g = Array2::from_shape_vec((6, 6), entries).unwrap();
            let m = g.dot(&g.t());
            let eigs = sym_eigenvalues(&m, &cfg()).unwrap();
            let trace: f64 = m.diag().sum();
            prop_assert!((eigs.iter().sum::<f64>() - trace).abs() < 1e-10);
            prop_assert!(eigs.iter().all(|&e| e >= -1e-10));
            prop_assert!(eigs.windows(2).all(|w| w[0] >= w[1]));
        }
    }
}
