use ndarray::Array2;

use super::{kron, sym_eigenvalues, FactorLayout, TruncationConfig};
use crate::error::{Error, Result};

/// Pure state with real amplitudes over a labeled tensor product.
///
/// The norm is never rescaled: a squared norm below one is the probability
/// mass cut off by truncation, available through [`StateVector::norm_deficit`].
#[derive(Debug, Clone, PartialEq)]
pub struct StateVector {
    layout: FactorLayout,
    amps: Vec<f64>,
}

impl StateVector {
    pub fn new(layout: FactorLayout, amps: Vec<f64>) -> Result<Self> {
        if amps.len() != layout.total_dim() {
            return Err(Error::DimensionMismatch(format!(
                "{} amplitudes for a layout of dimension {}",
                amps.len(),
                layout.total_dim()
            )));
        }
        Ok(Self { layout, amps })
    }

    pub fn zeros(layout: FactorLayout) -> Self {
        let amps = vec![0.0; layout.total_dim()];
        Self { layout, amps }
    }

    /// Normalized superposition of basis states given as multi-indices with weights.
    pub fn from_terms(layout: FactorLayout, terms: &[(&[usize], f64)]) -> Result<Self> {
        let mut state = Self::zeros(layout);
        for &(multi, amp) in terms {
            state.set(multi, amp)?;
        }
        Ok(state)
    }

    pub fn layout(&self) -> &FactorLayout {
        &self.layout
    }

    pub fn amplitudes(&self) -> &[f64] {
        &self.amps
    }

    pub fn get(&self, multi: &[usize]) -> Result<f64> {
        Ok(self.amps[self.layout.flat_index(multi)?])
    }

    pub fn set(&mut self, multi: &[usize], amp: f64) -> Result<()> {
        let i = self.layout.flat_index(multi)?;
        self.amps[i] = amp;
        Ok(())
    }

    pub fn norm_sq(&self) -> f64 {
        self.amps.iter().map(|a| a * a).sum()
    }

    /// `1 − ‖ψ‖²`.
    pub fn norm_deficit(&self) -> f64 {
        1.0 - self.norm_sq()
    }

    pub fn tensor(&self, other: &StateVector) -> Result<StateVector> {
        let layout = self.layout.concat(&other.layout)?;
        let mut amps = Vec::with_capacity(layout.total_dim());
        for &a in &self.amps {
            amps.extend(other.amps.iter().map(|&b| a * b));
        }
        StateVector::new(layout, amps)
    }

    /// `|ψ⟩⟨ψ|` as a dense matrix. Quadratic in the total dimension.
    pub fn density(&self) -> DensityMatrix {
        let n = self.amps.len();
        let mut mat = Array2::zeros((n, n));
        for (i, &a) in self.amps.iter().enumerate() {
            if a == 0.0 {
                continue;
            }
            for (j, &b) in self.amps.iter().enumerate() {
                mat[[i, j]] = a * b;
            }
        }
        DensityMatrix { layout: self.layout.clone(), mat }
    }

    /// Reduced state on the `keep` factors, equal to
    /// `partial_trace(|ψ⟩⟨ψ|, keep)` but built from the nonzero amplitudes
    /// only, so the full density matrix is never formed.
    pub fn reduced_density(&self, keep: &[&str]) -> Result<DensityMatrix> {
        let (kept, _traced, is_kept) = sub_layouts(&self.layout, keep)?;
        let dims = self.layout.dims();

        let mut terms: Vec<(usize, usize, f64)> = Vec::new();
        for (flat, &amp) in self.amps.iter().enumerate() {
            if amp == 0.0 {
                continue;
            }
            let multi = self.layout.multi_index(flat);
            let (mut k, mut t) = (0usize, 0usize);
            for ((&i, &d), &keep_factor) in multi.iter().zip(dims).zip(&is_kept) {
                if keep_factor {
                    k = k * d + i;
                } else {
                    t = t * d + i;
                }
            }
            terms.push((t, k, amp));
        }
        terms.sort_by_key(|&(t, k, _)| (t, k));

        let kd = kept.total_dim();
        let mut mat = Array2::zeros((kd, kd));
        for group in terms.chunk_by(|a, b| a.0 == b.0) {
            for &(_, ki, ai) in group {
                for &(_, kj, aj) in group {
                    mat[[ki, kj]] += ai * aj;
                }
            }
        }
        Ok(DensityMatrix { layout: kept, mat })
    }
}

/// Real symmetric density matrix with its tensor-product layout.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix {
    layout: FactorLayout,
    mat: Array2<f64>,
}

impl DensityMatrix {
    /// Checks shape against the layout and symmetry against the default
    /// absolute tolerance.
    pub fn new(layout: FactorLayout, mat: Array2<f64>) -> Result<Self> {
        let d = layout.total_dim();
        if mat.dim() != (d, d) {
            return Err(Error::DimensionMismatch(format!(
                "{:?} matrix for a layout of dimension {d}",
                mat.dim()
            )));
        }
        let rho = Self { layout, mat };
        let asym = rho.max_asymmetry();
        if asym > TruncationConfig::DEFAULT_ABS_TOL {
            return Err(Error::NotSymmetric(asym));
        }
        Ok(rho)
    }

    pub fn zeros(layout: FactorLayout) -> Self {
        let d = layout.total_dim();
        Self { layout, mat: Array2::zeros((d, d)) }
    }

    pub fn layout(&self) -> &FactorLayout {
        &self.layout
    }

    pub fn matrix(&self) -> &Array2<f64> {
        &self.mat
    }

    pub fn dim(&self) -> usize {
        self.mat.nrows()
    }

    pub fn trace(&self) -> f64 {
        self.mat.diag().sum()
    }

    pub fn max_asymmetry(&self) -> f64 {
        let n = self.dim();
        let mut worst: f64 = 0.0;
        for i in 0..n {
            for j in i + 1..n {
                worst = worst.max((self.mat[[i, j]] - self.mat[[j, i]]).abs());
            }
        }
        worst
    }

    pub fn get(&self, row: &[usize], col: &[usize]) -> Result<f64> {
        Ok(self.mat[[self.layout.flat_index(row)?, self.layout.flat_index(col)?]])
    }

    /// Adds `value` at `(row, col)` and, off the diagonal, at `(col, row)`.
    pub(crate) fn add_symmetric(&mut self, row: usize, col: usize, value: f64) {
        self.mat[[row, col]] += value;
        if row != col {
            self.mat[[col, row]] += value;
        }
    }

    pub(crate) fn add_at(&mut self, row: usize, col: usize, value: f64) {
        self.mat[[row, col]] += value;
    }

    pub fn tensor(&self, other: &DensityMatrix) -> Result<DensityMatrix> {
        let layout = self.layout.concat(&other.layout)?;
        Ok(DensityMatrix { layout, mat: kron(&self.mat, &other.mat) })
    }

    /// Traces out every factor not named in `keep`. The result keeps the
    /// remaining factors in their original order.
    pub fn partial_trace(&self, keep: &[&str]) -> Result<DensityMatrix> {
        let (kept, traced, map) = self.layout.split(keep)?;
        let mut groups: Vec<Vec<(usize, usize)>> = vec![Vec::new(); traced.total_dim()];
        for (full, &(k, t)) in map.iter().enumerate() {
            groups[t].push((full, k));
        }
        let kd = kept.total_dim();
        let mut mat = Array2::zeros((kd, kd));
        for group in &groups {
            for &(i, ki) in group {
                for &(j, kj) in group {
                    mat[[ki, kj]] += self.mat[[i, j]];
                }
            }
        }
        Ok(DensityMatrix { layout: kept, mat })
    }

    /// Eigenvalues in descending order, clamped in `[-abs_tol, 0)`.
    pub fn eigenvalues(&self, cfg: &TruncationConfig) -> Result<Vec<f64>> {
        sym_eigenvalues(&self.mat, cfg)
    }

    /// Largest entrywise absolute difference; layouts must agree.
    pub fn max_abs_diff(&self, other: &DensityMatrix) -> Result<f64> {
        if self.layout.dims() != other.layout.dims() {
            return Err(Error::DimensionMismatch(format!(
                "comparing layouts {:?} and {:?}",
                self.layout.dims(),
                other.layout.dims()
            )));
        }
        Ok(self
            .mat
            .iter()
            .zip(other.mat.iter())
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max))
    }
}

fn sub_layouts(layout: &FactorLayout, keep: &[&str]) -> Result<(FactorLayout, FactorLayout, Vec<bool>)> {
    for label in keep {
        layout.dim_of(label)?;
    }
    let is_kept: Vec<bool> = layout.labels().iter().map(|l| keep.contains(&l.as_str())).collect();
    let pick = |want: bool| {
        FactorLayout::new(
            layout
                .labels()
                .iter()
                .zip(layout.dims())
                .zip(&is_kept)
                .filter(|(_, &k)| k == want)
                .map(|((l, &d), _)| (l.clone(), d)),
        )
    };
    Ok((pick(true)?, pick(false)?, is_kept))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn two_qubits() -> FactorLayout {
        FactorLayout::new([("A", 2), ("B", 2)]).unwrap()
    }

    fn bell() -> StateVector {
        let h = std::f64::consts::FRAC_1_SQRT_2;
        StateVector::from_terms(two_qubits(), &[(&[0, 1], h), (&[1, 0], h)]).unwrap()
    }

    #[test]
    fn trace_over_nothing_is_identity() {
        let rho = bell().density();
        let same = rho.partial_trace(&["A", "B"]).unwrap();
        assert_eq!(same, rho);
    }

    #[test]
    fn bell_reduction_is_maximally_mixed() {
        let rho = bell().density();
        let reduced = rho.partial_trace(&["A"]).unwrap();
        assert!((reduced.matrix()[[0, 0]] - 0.5).abs() < 1e-15);
        assert!((reduced.matrix()[[1, 1]] - 0.5).abs() < 1e-15);
        assert_eq!(reduced.matrix()[[0, 1]], 0.0);
        assert_eq!(reduced, bell().reduced_density(&["A"]).unwrap());
    }

    #[test]
    fn unknown_label_rejected() {
        assert_eq!(
            bell().density().partial_trace(&["C"]).unwrap_err(),
            Error::UnknownLabel("C".into())
        );
        assert!(bell().reduced_density(&["C"]).is_err());
    }

    #[test]
    fn shape_checks() {
        assert!(StateVector::new(two_qubits(), vec![0.0; 3]).is_err());
        assert!(DensityMatrix::new(two_qubits(), Array2::zeros((3, 3))).is_err());
        let mut m = Array2::zeros((4, 4));
        m[[0, 1]] = 1.0;
        assert!(matches!(DensityMatrix::new(two_qubits(), m), Err(Error::NotSymmetric(_))));
    }

    #[test]
    fn tensor_of_basis_states() {
        let a = StateVector::from_terms(FactorLayout::single("A", 2).unwrap(), &[(&[0], 1.0)]).unwrap();
        let b = StateVector::from_terms(FactorLayout::single("B", 3).unwrap(), &[(&[1], 1.0)]).unwrap();
        let ab = a.tensor(&b).unwrap();
        assert_eq!(ab.get(&[0, 1]).unwrap(), 1.0);
        assert_eq!(ab.norm_sq(), 1.0);
        assert!(a.tensor(&a).is_err());
        let rho = a.density().tensor(&b.density()).unwrap();
        assert_eq!(rho, ab.density());
    }

    proptest! {
        #[test]
        fn partial_trace_preserves_trace_and_matches_pure_route(
            amps in proptest::collection::vec(-1.0f64..1.0, 2 * 3 * 4),
            keep_mask in 0usize..8,
        ) {
            let layout = FactorLayout::new([("A", 2), ("I", 3), ("II", 4)]).unwrap();
            let psi = StateVector::new(layout, amps).unwrap();
            let rho = psi.density();
            let keep: Vec<&str> = ["A", "I", "II"]
                .into_iter()
                .enumerate()
                .filter(|(i, _)| keep_mask & (1 << i) != 0)
                .map(|(_, l)| l)
                .collect();
            let reduced = rho.partial_trace(&keep).unwrap();
            prop_assert!((reduced.trace() - rho.trace()).abs() < 1e-12);
            prop_assert!(reduced.max_asymmetry() < 1e-12);
            let direct = psi.reduced_density(&keep).unwrap();
            prop_assert!(reduced.max_abs_diff(&direct).unwrap() < 1e-12);
        }
    }
}
