use crate::error::{Error, Result};

/// Ordered tensor-product structure: factor labels and their dimensions.
///
/// Flat indices are row-major over the factors, so the last factor varies
/// fastest.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FactorLayout {
    dims: Vec<usize>,
    labels: Vec<String>,
}

impl FactorLayout {
    pub fn new<S: Into<String>>(factors: impl IntoIterator<Item = (S, usize)>) -> Result<Self> {
        let mut dims = Vec::new();
        let mut labels: Vec<String> = Vec::new();
        for (label, dim) in factors {
            let label = label.into();
            if dim == 0 {
                return Err(Error::DimensionMismatch(format!("factor `{label}` has dimension 0")));
            }
            if labels.contains(&label) {
                return Err(Error::DuplicateLabel(label));
            }
            labels.push(label);
            dims.push(dim);
        }
        Ok(Self { dims, labels })
    }

    /// A single unlabeled-by-convention factor.
    pub fn single(label: &str, dim: usize) -> Result<Self> {
        Self::new([(label, dim)])
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn num_factors(&self) -> usize {
        self.dims.len()
    }

    pub fn total_dim(&self) -> usize {
        self.dims.iter().product()
    }

    pub fn position(&self, label: &str) -> Option<usize> {
        self.labels.iter().position(|l| l == label)
    }

    pub fn dim_of(&self, label: &str) -> Result<usize> {
        self.position(label)
            .map(|i| self.dims[i])
            .ok_or_else(|| Error::UnknownLabel(label.to_string()))
    }

    /// Layout of `self ⊗ other`.
    pub fn concat(&self, other: &FactorLayout) -> Result<Self> {
        Self::new(
            self.labels
                .iter()
                .cloned()
                .zip(self.dims.iter().copied())
                .chain(other.labels.iter().cloned().zip(other.dims.iter().copied())),
        )
    }

    pub fn flat_index(&self, multi: &[usize]) -> Result<usize> {
        if multi.len() != self.dims.len() {
            return Err(Error::DimensionMismatch(format!(
                "multi-index has {} entries, layout has {} factors",
                multi.len(),
                self.dims.len()
            )));
        }
        let mut flat = 0;
        for (&i, &d) in multi.iter().zip(&self.dims) {
            if i >= d {
                return Err(Error::DimensionMismatch(format!("index {i} out of range for factor of dimension {d}")));
            }
            flat = flat * d + i;
        }
        Ok(flat)
    }

    pub fn multi_index(&self, mut flat: usize) -> Vec<usize> {
        let mut multi = vec![0; self.dims.len()];
        for (slot, &d) in multi.iter_mut().zip(&self.dims).rev() {
            *slot = flat % d;
            flat /= d;
        }
        multi
    }

    /// Splits the factors into a kept sub-layout and a traced sub-layout,
    /// each preserving the original factor order, and returns a map from
    /// every flat index to its `(kept, traced)` flat pair.
    pub(crate) fn split(&self, keep: &[&str]) -> Result<(FactorLayout, FactorLayout, Vec<(usize, usize)>)> {
        for label in keep {
            if self.position(label).is_none() {
                return Err(Error::UnknownLabel(label.to_string()));
            }
        }
        let is_kept: Vec<bool> = self.labels.iter().map(|l| keep.contains(&l.as_str())).collect();
        let pick = |want: bool| {
            FactorLayout::new(
                self.labels
                    .iter()
                    .zip(&self.dims)
                    .zip(&is_kept)
                    .filter(|(_, &k)| k == want)
                    .map(|((l, &d), _)| (l.clone(), d)),
            )
        };
        let kept = pick(true)?;
        let traced = pick(false)?;

        let total = self.total_dim();
        let mut map = Vec::with_capacity(total);
        let mut multi = vec![0usize; self.dims.len()];
        for _ in 0..total {
            let (mut k, mut t) = (0usize, 0usize);
            for ((&i, &d), &kept_factor) in multi.iter().zip(&self.dims).zip(&is_kept) {
                if kept_factor {
                    k = k * d + i;
                } else {
                    t = t * d + i;
                }
            }
            map.push((k, t));
            // Odometer increment, last factor fastest.
            for (slot, &d) in multi.iter_mut().zip(&self.dims).rev() {
                *slot += 1;
                if *slot < d {
                    break;
                }
                *slot = 0;
            }
        }
        Ok((kept, traced, map))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn flat_and_multi_index_agree() {
        let layout = FactorLayout::new([("A", 2), ("I", 3), ("II", 4)]).unwrap();
        assert_eq!(layout.total_dim(), 24);
        for flat in 0..24 {
            let multi = layout.multi_index(flat);
            assert_eq!(layout.flat_index(&multi).unwrap(), flat);
        }
        assert_eq!(layout.flat_index(&[1, 2, 3]).unwrap(), 23);
        assert!(layout.flat_index(&[2, 0, 0]).is_err());
    }

    #[test]
    fn duplicate_and_unknown_labels() {
        assert_eq!(
            FactorLayout::new([("A", 2), ("A", 3)]).unwrap_err(),
            Error::DuplicateLabel("A".into())
        );
        let layout = FactorLayout::new([("A", 2)]).unwrap();
        assert!(matches!(layout.dim_of("B"), Err(Error::UnknownLabel(_))));
        assert!(layout.split(&["B"]).is_err());
    }

    #[test]
    fn split_keeps_factor_order() {
        let layout = FactorLayout::new([("A", 2), ("I", 3), ("II", 4)]).unwrap();
        let (kept, traced, map) = layout.split(&["II", "A"]).unwrap();
        assert_eq!(kept.labels(), &["A".to_string(), "II".to_string()]);
        assert_eq!(traced.dims(), &[3]);
        let flat = layout.flat_index(&[1, 2, 3]).unwrap();
        assert_eq!(map[flat], (kept.flat_index(&[1, 3]).unwrap(), 2));
    }
}
