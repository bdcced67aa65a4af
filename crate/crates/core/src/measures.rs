//! Scalar figures of merit of the acceleration channel, all in bits.
//!
//! Most quantities are available two ways: from the closed-form series
//! over the block weights `a_n = (tanh²r)ⁿ / (2 cosh²r)`, and spectrally from
//! reduced density matrices built by partial traces. The two routes share no
//! code beyond the state constructors.

use serde::Serialize;

use crate::channel::KrausSet;
use crate::error::{Error, Result};
use crate::fock::{DensityMatrix, TruncationConfig};
use crate::rindler::{build_tripartite_psi, check_r, initial_state, rho_ar_analytic, tripartite_tail};
use crate::{ALICE, WEDGE_I, WEDGE_II};

/// Probabilities below this are treated as exact zeros.
pub const PROBABILITY_FLOOR: f64 = 1e-300;

/// Entropy of Alice's reduced state. Her marginal is maximally mixed at
/// every acceleration, which [`MeasureRecord::s_a`] checks spectrally.
pub const ALICE_ENTROPY: f64 = 1.0;

/// Smallest truncation the adaptive rule will pick.
pub const MIN_ADAPTIVE_N: usize = 8;

/// `−Σ p log₂ p` with `0 log 0 = 0`. A total that rounds below zero (a
/// single eigenvalue a few ulps above one) is reported as zero.
pub fn shannon_bits(probs: &[f64]) -> f64 {
    let bits: f64 = probs
        .iter()
        .filter(|&&p| p >= PROBABILITY_FLOOR)
        .map(|&p| -p * p.log2())
        .sum();
    bits.max(0.0)
}

/// von Neumann entropy in bits. Eigenvalues below `−abs_tol` are a PSD
/// violation, not rounding noise.
pub fn von_neumann_entropy(rho: &DensityMatrix, cfg: &TruncationConfig) -> Result<f64> {
    let eigs = rho.eigenvalues(cfg)?;
    if let Some(&worst) = eigs.last() {
        if worst < -cfg.abs_tol {
            return Err(Error::NotPositiveSemidefinite(worst));
        }
    }
    Ok(shannon_bits(&eigs))
}

/// `F_e = ¼ (1/cosh²r) (1 + 1/cosh r)²`.
pub fn entanglement_fidelity_closed(r: f64) -> f64 {
    let sech = 1.0 / r.cosh();
    0.25 * sech * sech * (1.0 + sech).powi(2)
}

/// Entanglement fidelity from the operator-sum form, with the individual
/// traces `Tr(ρ A_n)` kept for inspection.
#[derive(Debug, Clone, PartialEq)]
pub struct KrausFidelity {
    pub fidelity: f64,
    pub traces: Vec<f64>,
}

/// `F_e = Σ_n Tr(ρ A_n) Tr(ρ A_nᵀ)` over every `n ≤ n_max`.
pub fn entanglement_fidelity_kraus(r: f64, cfg: &TruncationConfig) -> Result<KrausFidelity> {
    fidelity_from_kraus(&KrausSet::new(r, cfg)?)
}

pub fn fidelity_from_kraus(ks: &KrausSet) -> Result<KrausFidelity> {
    let rho = initial_state(ks.config());
    let traces: Vec<f64> = ks.ops().iter().map(|op| op.trace_against(&rho)).collect();
    // Real operators: Tr(ρ Aᵀ) = Tr(ρ A) for symmetric ρ.
    let fidelity = traces.iter().map(|t| t * t).sum();
    Ok(KrausFidelity { fidelity, traces })
}

/// A series entropy together with the probability mass it summed.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SeriesEntropy {
    pub bits: f64,
    /// `Σ pₙ`; `1 − mass` is the truncated tail.
    pub mass: f64,
}

impl SeriesEntropy {
    fn from_probs(probs: &[f64]) -> Self {
        Self { bits: shannon_bits(probs), mass: probs.iter().sum() }
    }
}

/// Eigenvalues of ρ_AR: `a_n (1 + (n+1)/cosh²r)` for `n < n_max`, and
/// `a_n` alone at `n = n_max`, where `|0, n_max+1⟩` is outside the
/// truncation. This is the spectrum of the truncated ρ_AR exactly.
pub fn rho_ar_spectrum(r: f64, cfg: &TruncationConfig) -> Result<Vec<f64>> {
    check_r(r)?;
    let x = r.tanh().powi(2);
    let sech2 = 1.0 / r.cosh().powi(2);
    let mut a_n = 0.5 * sech2;
    let mut out = Vec::with_capacity(cfg.n_max + 1);
    for n in 0..cfg.n_max {
        out.push(a_n * (1.0 + (n + 1) as f64 * sech2));
        a_n *= x;
    }
    out.push(a_n);
    Ok(out)
}

/// Diagonal of ρ_R: `a_n (1 + n/sinh²r)`, `n ≤ n_max`.
///
/// Written as `a_n + n tanh^{2(n−1)}r / (2 cosh⁴r)`, which is the same
/// quantity without the removable `n/sinh²r` singularity at `r = 0`.
pub fn rho_r_spectrum(r: f64, cfg: &TruncationConfig) -> Result<Vec<f64>> {
    check_r(r)?;
    let x = r.tanh().powi(2);
    let sech2 = 1.0 / r.cosh().powi(2);
    let mut a_n = 0.5 * sech2;
    let mut x_prev = 0.0; // x^(n-1), with the n = 0 term unused
    let mut out = Vec::with_capacity(cfg.n_max + 1);
    for n in 0..=cfg.n_max {
        let p = if n == 0 { a_n } else { a_n + n as f64 * x_prev * 0.5 * sech2 * sech2 };
        out.push(p);
        x_prev = if n == 0 { 1.0 } else { x_prev * x };
        a_n *= x;
    }
    Ok(out)
}

/// `S(ρ_AR)` from the closed-form eigenvalues.
pub fn entropy_ar_series(r: f64, cfg: &TruncationConfig) -> Result<SeriesEntropy> {
    Ok(SeriesEntropy::from_probs(&rho_ar_spectrum(r, cfg)?))
}

/// `S(ρ_R)` from the closed-form occupation probabilities.
pub fn entropy_r_series(r: f64, cfg: &TruncationConfig) -> Result<SeriesEntropy> {
    Ok(SeriesEntropy::from_probs(&rho_r_spectrum(r, cfg)?))
}

/// `S(ρ_AR)` by eigensolving the assembled output state.
pub fn entropy_ar_spectral(r: f64, cfg: &TruncationConfig) -> Result<f64> {
    von_neumann_entropy(&rho_ar_analytic(r, cfg)?, cfg)
}

/// `S(ρ_R)` by eigensolving `Tr_A ρ_AR`.
pub fn entropy_r_spectral(r: f64, cfg: &TruncationConfig) -> Result<f64> {
    von_neumann_entropy(&rho_ar_analytic(r, cfg)?.partial_trace(&[WEDGE_I])?, cfg)
}

/// Entropy exchange `S_e = S(ρ_II)`, with ρ_II traced out of the full
/// tripartite state.
pub fn entropy_exchange(r: f64, cfg: &TruncationConfig) -> Result<f64> {
    let psi = build_tripartite_psi(r, cfg)?;
    von_neumann_entropy(&psi.reduced_density(&[WEDGE_II])?, cfg)
}

/// `S(ρ_A)` traced out of the full tripartite state.
pub fn alice_entropy_spectral(r: f64, cfg: &TruncationConfig) -> Result<f64> {
    let psi = build_tripartite_psi(r, cfg)?;
    von_neumann_entropy(&psi.reduced_density(&[ALICE])?, cfg)
}

/// `I(ρ_AR) = S(ρ_A) + S(ρ_R) − S(ρ_AR)` from the series entropies.
pub fn mutual_information(r: f64, cfg: &TruncationConfig) -> Result<f64> {
    let s_r = entropy_r_series(r, cfg)?.bits;
    let s_ar = entropy_ar_series(r, cfg)?.bits;
    Ok(ALICE_ENTROPY + s_r - s_ar)
}

/// `S(ρ_A) + S(ρ_R) − S(ρ_AR)`; non-negative by sub-additivity. This is
/// the mutual information under another name.
pub fn subadditivity_margin(r: f64, cfg: &TruncationConfig) -> Result<f64> {
    mutual_information(r, cfg)
}

/// `(n + 2) (tanh²r)ⁿ`, which bounds the norm lost by truncating the
/// tripartite state at `n`.
pub fn truncation_bound(r: f64, n: usize) -> f64 {
    (n + 2) as f64 * r.tanh().powi(2).powi(n as i32)
}

/// Smallest `n ≥ MIN_ADAPTIVE_N` with `truncation_bound(r, n) < abs_tol`,
/// capped at `cap`.
pub fn adaptive_n_max(r: f64, abs_tol: f64, cap: usize) -> usize {
    let x = r.tanh().powi(2);
    let start = MIN_ADAPTIVE_N.min(cap);
    let mut x_n = x.powi(start as i32);
    for n in start..cap {
        if (n + 2) as f64 * x_n < abs_tol {
            return n;
        }
        x_n *= x;
    }
    cap
}

/// Every figure of merit at one acceleration.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct MeasureRecord {
    pub r: f64,
    pub fe_closed: f64,
    pub fe_kraus: f64,
    pub s_ar: f64,
    pub s_r: f64,
    pub s_a: f64,
    pub s_e: f64,
    pub mutual_info: f64,
    pub subadd_margin: f64,
    /// Norm deficit of the truncated tripartite state.
    pub tail: f64,
    pub n_used: usize,
}

impl MeasureRecord {
    /// Evaluates everything at the truncation in `cfg`.
    pub fn evaluate(r: f64, cfg: &TruncationConfig) -> Result<Self> {
        check_r(r)?;
        let psi = build_tripartite_psi(r, cfg)?;
        let s_e = von_neumann_entropy(&psi.reduced_density(&[WEDGE_II])?, cfg)?;
        let s_a = von_neumann_entropy(&psi.reduced_density(&[ALICE])?, cfg)?;
        drop(psi);

        let s_ar = entropy_ar_series(r, cfg)?.bits;
        let s_r = entropy_r_series(r, cfg)?.bits;
        Ok(Self {
            r,
            fe_closed: entanglement_fidelity_closed(r),
            fe_kraus: entanglement_fidelity_kraus(r, cfg)?.fidelity,
            s_ar,
            s_r,
            s_a,
            s_e,
            mutual_info: mutual_information(r, cfg)?,
            subadd_margin: subadditivity_margin(r, cfg)?,
            tail: tripartite_tail(r, cfg.n_max),
            n_used: cfg.n_max,
        })
    }

    /// Picks the truncation adaptively (capped at `cfg.n_max`) and evaluates.
    pub fn evaluate_adaptive(r: f64, cfg: &TruncationConfig) -> Result<Self> {
        let n = adaptive_n_max(r, cfg.abs_tol, cfg.n_max);
        Self::evaluate(r, &cfg.with_n_max(n)?)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fock::FactorLayout;
    use ndarray::Array2;

    fn cfg(n_max: usize) -> TruncationConfig {
        TruncationConfig::new(n_max).unwrap()
    }

    fn diag(values: &[f64]) -> DensityMatrix {
        let layout = FactorLayout::single("X", values.len()).unwrap();
        DensityMatrix::new(layout, Array2::from_diag(&ndarray::arr1(values))).unwrap()
    }

    #[test]
    fn entropy_of_simple_states() {
        let c = cfg(4);
        assert_eq!(von_neumann_entropy(&diag(&[0.5, 0.5]), &c).unwrap(), 1.0);
        assert_eq!(von_neumann_entropy(&diag(&[0.25; 4]), &c).unwrap(), 2.0);
        let psi = build_tripartite_psi(0.3, &cfg(12)).unwrap();
        assert!(von_neumann_entropy(&psi.density(), &cfg(12)).unwrap() < 1e-11);
        assert_eq!(
            von_neumann_entropy(&diag(&[1.1, -0.1]), &c).unwrap_err(),
            Error::NotPositiveSemidefinite(-0.1)
        );
    }

    #[test]
    fn closed_form_fidelity() {
        assert_eq!(entanglement_fidelity_closed(0.0), 1.0);
        let r = 2.0_f64.acosh();
        assert!((r - 1.316_958).abs() < 1e-6);
        assert!((entanglement_fidelity_closed(r) - 9.0 / 64.0).abs() < 1e-12);
        assert!(entanglement_fidelity_closed(10.0) < 1e-7);
    }

    #[test]
    fn kraus_fidelity_matches_closed_form() {
        for r in [0.0, 0.5, 1.0, 2.0] {
            let k = entanglement_fidelity_kraus(r, &cfg(40)).unwrap();
            assert!((k.fidelity - entanglement_fidelity_closed(r)).abs() <= 1e-12);
            let ch: f64 = f64::cosh(r);
            assert!((k.traces[0] - 0.5 / ch * (1.0 + 1.0 / ch)).abs() < 1e-15);
            assert!(k.traces[1..].iter().all(|&t| t == 0.0));
        }
    }

    #[test]
    fn entropies_at_rest() {
        let c = cfg(16);
        assert_eq!(entropy_ar_series(0.0, &c).unwrap().bits, 0.0);
        assert_eq!(entropy_r_series(0.0, &c).unwrap().bits, 1.0);
        assert_eq!(entropy_exchange(0.0, &c).unwrap(), 0.0);
        assert_eq!(mutual_information(0.0, &c).unwrap(), 2.0);
        assert_eq!(subadditivity_margin(0.0, &c).unwrap(), 2.0);
        let spectrum = rho_ar_spectrum(0.0, &cfg(1)).unwrap();
        assert_eq!(spectrum, vec![1.0, 0.0]);
    }

    #[test]
    fn small_r_limit_of_rob_entropy() {
        let r = 1e-4;
        let c = cfg(16);
        let series = entropy_r_series(r, &c).unwrap().bits;
        let spectral = entropy_r_spectral(r, &c).unwrap();
        assert!((series - spectral).abs() < 1e-10);
        assert!((series - 1.0).abs() < 1e-6);
    }

    #[test]
    fn series_agree_with_spectral_routes() {
        let c = cfg(256);
        let ar = entropy_ar_series(1.0, &c).unwrap().bits;
        assert!((ar - entropy_ar_spectral(1.0, &c).unwrap()).abs() <= 1e-8);
        let rr = entropy_r_series(1.0, &c).unwrap().bits;
        assert!((rr - entropy_r_spectral(1.0, &c).unwrap()).abs() <= 1e-8);
    }

    #[test]
    fn rob_probabilities_are_normalized() {
        let c = cfg(128);
        let p = rho_r_spectrum(1.0, &c).unwrap();
        assert!(p.iter().all(|&x| x >= 0.0));
        let tail = 1.0 - p.iter().sum::<f64>();
        assert!(tail >= -1e-15 && tail < 1e-12);
    }

    #[test]
    fn entropy_exchange_equals_output_entropy() {
        let c = cfg(64);
        let s_e = entropy_exchange(1.0, &c).unwrap();
        assert!((s_e - entropy_ar_series(1.0, &c).unwrap().bits).abs() <= 1e-8);
        assert!(entropy_exchange(0.2, &c).unwrap() > 0.0);
    }

    #[test]
    fn adaptive_truncation() {
        assert_eq!(adaptive_n_max(0.0, 1e-10, 4096), MIN_ADAPTIVE_N);
        let n = adaptive_n_max(3.0, 1e-10, 8192);
        assert!(n >= 2048);
        assert!(truncation_bound(3.0, n) < 1e-10);
        assert!(truncation_bound(3.0, n - 1) >= 1e-10);
        assert_eq!(adaptive_n_max(3.0, 1e-10, 100), 100);
    }

    #[test]
    fn record_at_rest() {
        let rec = MeasureRecord::evaluate_adaptive(0.0, &cfg(64)).unwrap();
        assert_eq!(rec.fe_closed, 1.0);
        assert_eq!(rec.fe_kraus, 1.0);
        assert_eq!(rec.s_ar, 0.0);
        assert!((rec.s_a - 1.0).abs() < 1e-15);
        assert_eq!(rec.mutual_info, 2.0);
        assert_eq!(rec.subadd_margin, 2.0);
        assert_eq!(rec.tail, 0.0);
    }
}
