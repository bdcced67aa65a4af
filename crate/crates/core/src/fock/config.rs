use crate::error::{Error, Result};

/// Truncation and tolerance policy shared by every series and matrix.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TruncationConfig {
    /// Maximum occupation kept per bosonic mode.
    pub n_max: usize,
    /// Absolute tolerance for symmetry checks and the PSD clamp window.
    pub abs_tol: f64,
    /// Off-diagonal Frobenius norm at which the eigensolver stops.
    pub eig_tol: f64,
}

impl TruncationConfig {
    pub const DEFAULT_ABS_TOL: f64 = 1e-10;
    pub const DEFAULT_EIG_TOL: f64 = 1e-12;

    pub fn new(n_max: usize) -> Result<Self> {
        Self::with_tolerances(n_max, Self::DEFAULT_ABS_TOL, Self::DEFAULT_EIG_TOL)
    }

    pub fn with_tolerances(n_max: usize, abs_tol: f64, eig_tol: f64) -> Result<Self> {
        if n_max < 1 {
            return Err(Error::InvalidConfig("n_max must be at least 1".into()));
        }
        if !(abs_tol > 0.0 && abs_tol.is_finite()) {
            return Err(Error::InvalidConfig(format!("abs_tol must be positive, got {abs_tol}")));
        }
        if !(eig_tol > 0.0 && eig_tol.is_finite()) {
            return Err(Error::InvalidConfig(format!("eig_tol must be positive, got {eig_tol}")));
        }
        Ok(Self { n_max, abs_tol, eig_tol })
    }

    /// Same tolerances, different truncation.
    pub fn with_n_max(&self, n_max: usize) -> Result<Self> {
        Self::with_tolerances(n_max, self.abs_tol, self.eig_tol)
    }

    /// Dimension of one bosonic factor, `n_max + 1`.
    pub fn mode_dim(&self) -> usize {
        self.n_max + 1
    }
}
