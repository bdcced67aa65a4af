//! Kraus operators of the acceleration channel and their operator-sum action.
//!
//! `A_n = (1/√n!) (tanhⁿr / cosh²r) (cosh r)^{n̂_A} ⊗ (b_I†)ⁿ`, `n = 0..=n_max`.
//!
//! Each `A_n` maps `|a, m⟩` to a multiple of `|a, m + n⟩`, so it is stored as
//! that per-column coefficient rather than as a dense matrix. Coefficients
//! are evaluated in log space: the scalar `tanhⁿr/√n!` underflows and the
//! ladder weight `√((m+n)!/m!)` overflows long before their product does.

use std::sync::Arc;

use ndarray::Array2;

use crate::error::{Error, Result};
use crate::fock::{DensityMatrix, StateVector, TruncationConfig};
use crate::rindler::{alice_rob_layout, check_r};

/// A single Kraus operator `A_n`.
#[derive(Debug, Clone)]
pub struct KrausOp {
    index: usize,
    n_max: usize,
    scalar_sign: f64,
    ln_scalar: f64,
    ln_cosh: f64,
    ln_factorial: Arc<[f64]>,
}

impl KrausOp {
    pub fn index(&self) -> usize {
        self.index
    }

    /// The prefactor `tanhⁿr / (√n! cosh²r)`.
    pub fn scalar(&self) -> f64 {
        self.scalar_sign * self.ln_scalar.exp()
    }

    /// `⟨alice, m + n| A_n |alice, m⟩`, or `None` when `m + n` falls outside
    /// the truncation and the column is dropped.
    pub fn coefficient(&self, alice: usize, m: usize) -> Option<f64> {
        let target = m + self.index;
        if target > self.n_max || alice > 1 {
            return None;
        }
        if self.scalar_sign == 0.0 {
            return Some(0.0);
        }
        let ln = self.ln_scalar
            + alice as f64 * self.ln_cosh
            + 0.5 * (self.ln_factorial[target] - self.ln_factorial[m]);
        Some(self.scalar_sign * ln.exp())
    }

    /// Row index hit by column `col` of the Alice ⊗ I matrix, with its entry.
    fn column_image(&self, col: usize) -> Option<(usize, f64)> {
        let dim = self.n_max + 1;
        let (alice, m) = (col / dim, col % dim);
        self.coefficient(alice, m).map(|c| (alice * dim + m + self.index, c))
    }

    /// Dense matrix on Alice(2) ⊗ I(n_max+1).
    pub fn to_matrix(&self) -> Array2<f64> {
        let d = 2 * (self.n_max + 1);
        let mut m = Array2::zeros((d, d));
        for col in 0..d {
            if let Some((row, c)) = self.column_image(col) {
                m[[row, col]] = c;
            }
        }
        m
    }

    /// `A_n |v⟩` for an amplitude vector on Alice ⊗ I.
    pub fn apply(&self, v: &[f64]) -> Vec<f64> {
        let mut out = vec![0.0; v.len()];
        for (col, &x) in v.iter().enumerate() {
            if x == 0.0 {
                continue;
            }
            if let Some((row, c)) = self.column_image(col) {
                out[row] += c * x;
            }
        }
        out
    }

    /// `Tr(ρ A_n) = Σ_i ρ[i, img(i)] ⟨img(i)|A_n|i⟩`.
    pub fn trace_against(&self, rho: &DensityMatrix) -> f64 {
        let m = rho.matrix();
        let mut sum = 0.0;
        for col in 0..m.nrows() {
            if let Some((row, c)) = self.column_image(col) {
                let v = m[[col, row]];
                if v != 0.0 {
                    sum += v * c;
                }
            }
        }
        sum
    }
}

/// `ln k!` for `k = 0..=n`.
fn ln_factorials(n: usize) -> Arc<[f64]> {
    let mut table = Vec::with_capacity(n + 1);
    let mut acc = 0.0;
    table.push(acc);
    for k in 1..=n {
        acc += (k as f64).ln();
        table.push(acc);
    }
    table.into()
}

fn make_op(index: usize, r: f64, cfg: &TruncationConfig, ln_factorial: Arc<[f64]>) -> KrausOp {
    let t = r.tanh();
    let (scalar_sign, ln_tanh_pow) = if index == 0 {
        (1.0, 0.0)
    } else if t == 0.0 {
        (0.0, f64::NEG_INFINITY)
    } else {
        (1.0, index as f64 * t.ln())
    };
    let ln_cosh = r.cosh().ln();
    KrausOp {
        index,
        n_max: cfg.n_max,
        scalar_sign,
        ln_scalar: ln_tanh_pow - 0.5 * ln_factorial[index] - 2.0 * ln_cosh,
        ln_cosh,
        ln_factorial,
    }
}

/// `A_n` for one index.
pub fn kraus_operator(n: usize, r: f64, cfg: &TruncationConfig) -> Result<KrausOp> {
    check_r(r)?;
    if n > cfg.n_max {
        return Err(Error::KrausIndex { index: n, n_max: cfg.n_max });
    }
    Ok(make_op(n, r, cfg, ln_factorials(cfg.n_max)))
}

/// The family `{A_n}`, `n = 0..=n_max`, at fixed `r`.
#[derive(Debug, Clone)]
pub struct KrausSet {
    r: f64,
    cfg: TruncationConfig,
    ops: Vec<KrausOp>,
}

impl KrausSet {
    pub fn new(r: f64, cfg: &TruncationConfig) -> Result<Self> {
        check_r(r)?;
        let table = ln_factorials(cfg.n_max);
        let ops = (0..=cfg.n_max).map(|n| make_op(n, r, cfg, table.clone())).collect();
        Ok(Self { r, cfg: *cfg, ops })
    }

    pub fn r(&self) -> f64 {
        self.r
    }

    pub fn config(&self) -> &TruncationConfig {
        &self.cfg
    }

    pub fn ops(&self) -> &[KrausOp] {
        &self.ops
    }

    /// Copy with the scalar of `A_n` shifted by `delta`. Used to check that
    /// the verification suite notices a corrupted operator.
    pub fn with_perturbed_scalar(&self, n: usize, delta: f64) -> Result<Self> {
        if n > self.cfg.n_max {
            return Err(Error::KrausIndex { index: n, n_max: self.cfg.n_max });
        }
        let mut out = self.clone();
        let op = &mut out.ops[n];
        let shifted = op.scalar() + delta;
        op.scalar_sign = shifted.signum() * if shifted == 0.0 { 0.0 } else { 1.0 };
        op.ln_scalar = shifted.abs().ln();
        Ok(out)
    }

    fn check_layout(&self, dims: &[usize]) -> Result<()> {
        let expected = [2, self.cfg.mode_dim()];
        if dims != expected {
            return Err(Error::DimensionMismatch(format!(
                "channel acts on {expected:?}, got layout {dims:?}"
            )));
        }
        Ok(())
    }
}

/// `Σ_n A_n ρ A_nᵀ`, accumulated in ascending `n`.
pub fn apply_channel(rho: &DensityMatrix, ks: &KrausSet) -> Result<DensityMatrix> {
    ks.check_layout(rho.layout().dims())?;
    let m = rho.matrix();
    let nonzero: Vec<(usize, usize, f64)> = m
        .indexed_iter()
        .filter(|(_, &v)| v != 0.0)
        .map(|((i, j), &v)| (i, j, v))
        .collect();
    let dim = m.nrows();

    let mut out = DensityMatrix::zeros(alice_rob_layout(&ks.cfg));
    let mut images = vec![None; dim];
    for op in &ks.ops {
        for (col, slot) in images.iter_mut().enumerate() {
            *slot = op.column_image(col);
        }
        for &(i, j, v) in &nonzero {
            if let (Some((ri, ci)), Some((rj, cj))) = (images[i], images[j]) {
                out.add_at(ri, rj, ci * cj * v);
            }
        }
    }
    Ok(out)
}

/// `|Σ_n ⟨probe|A_nᵀ A_n|probe⟩ − 1|`.
///
/// The channel is trace preserving on span{|0,1⟩, |1,0⟩}, where this is
/// bounded by the truncation tail. Outside that subspace it is not: for
/// `|1,1⟩` the sum is `cosh²r`.
pub fn trace_preservation_defect(ks: &KrausSet, probe: &StateVector) -> Result<f64> {
    ks.check_layout(probe.layout().dims())?;
    let total: f64 = ks
        .ops
        .iter()
        .map(|op| op.apply(probe.amplitudes()).iter().map(|x| x * x).sum::<f64>())
        .sum();
    Ok((total - 1.0).abs())
}

/// `Σ_n A_nᵀ A_n`. Diagonal in the product basis, with entry
/// `cosh^{2(a+m−1)} r` at `|a, m⟩` up to truncation.
pub fn completeness_operator(ks: &KrausSet) -> Array2<f64> {
    let dim = 2 * ks.cfg.mode_dim();
    let mut out = Array2::zeros((dim, dim));
    for op in &ks.ops {
        for col in 0..dim {
            if let Some((_, c)) = op.column_image(col) {
                out[[col, col]] += c * c;
            }
        }
    }
    out
}
