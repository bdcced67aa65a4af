use ndarray::Array2;

use super::TruncationConfig;

/// Matrix of the creation operator b† on occupations `0..=n_max`.
///
/// Entry `(m + 1, m)` is `√(m + 1)`. The image of `|n_max⟩` would be
/// `|n_max + 1⟩`, which is outside the truncated space, so column `n_max` is
/// zero; the amplitude lost this way is measured by [`creation_edge_defect`].
pub fn creation_matrix(cfg: &TruncationConfig) -> Array2<f64> {
    let dim = cfg.mode_dim();
    let mut b_dag = Array2::zeros((dim, dim));
    for m in 0..cfg.n_max {
        b_dag[[m + 1, m]] = ((m + 1) as f64).sqrt();
    }
    b_dag
}

/// Matrix of the annihilation operator b, the transpose of [`creation_matrix`].
pub fn annihilation_matrix(cfg: &TruncationConfig) -> Array2<f64> {
    creation_matrix(cfg).reversed_axes()
}

/// Norm of the component that applying b† to `state` drops at the truncation
/// edge: `√(n_max + 1) · |⟨n_max|state⟩|`.
pub fn creation_edge_defect(state: &[f64]) -> f64 {
    match state.last() {
        Some(&edge) => ((state.len()) as f64).sqrt() * edge.abs(),
        None => 0.0,
    }
}

/// Kronecker product `a ⊗ b`. Vectors are column matrices.
pub fn kron(a: &Array2<f64>, b: &Array2<f64>) -> Array2<f64> {
    let (ar, ac) = a.dim();
    let (br, bc) = b.dim();
    let mut out = Array2::zeros((ar * br, ac * bc));
    for ((i, j), &x) in a.indexed_iter() {
        if x == 0.0 {
            continue;
        }
        let mut block = out.slice_mut(ndarray::s![i * br..(i + 1) * br, j * bc..(j + 1) * bc]);
        block.zip_mut_with(b, |o, &y| *o = x * y);
    }
    out
}
