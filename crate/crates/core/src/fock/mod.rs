//! Truncated Fock-space linear algebra.
//!
//! Every bosonic factor keeps occupations `0..=n_max`. All amplitudes and
//! matrix entries are real: the states and operators handled here carry no
//! phases, so density matrices are real symmetric rather than Hermitian.

mod config;
mod eigen;
mod ladder;
mod layout;
mod series;
mod state;

pub use config::TruncationConfig;
pub use eigen::{sym_eigenvalues, JACOBI_MAX_SWEEPS};
pub use ladder::{annihilation_matrix, creation_edge_defect, creation_matrix, kron};
pub use layout::FactorLayout;
pub use series::{geometric_closed_forms, GeometricSeries};
pub use state::{DensityMatrix, StateVector};
