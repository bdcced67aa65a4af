//! States seen by an inertial observer (Alice) and a uniformly accelerated
//! observer (Rob), expanded in the Rindler modes of wedges I and II.

use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::fock::{DensityMatrix, FactorLayout, StateVector, TruncationConfig};
use crate::{ALICE, WEDGE_I, WEDGE_II};

pub(crate) fn check_r(r: f64) -> Result<()> {
    if r >= 0.0 && r.is_finite() {
        Ok(())
    } else {
        Err(Error::OutOfRange { what: "acceleration parameter r", value: r })
    }
}

/// Dimensional inputs behind Ω = |k| c / a.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhysicalAcceleration {
    /// Proper acceleration (m/s²).
    pub a: f64,
    /// Wave-vector magnitude (1/m).
    pub k_mag: f64,
    /// Speed of light (m/s).
    pub c: f64,
}

/// The squeezing parameter `r` and, when known, the frequency ratio Ω it
/// came from, related by `tanh r = exp(−2πΩ)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AccelerationParam {
    pub r: f64,
    pub omega: Option<f64>,
    pub physical: Option<PhysicalAcceleration>,
}

impl AccelerationParam {
    pub fn from_r(r: f64) -> Result<Self> {
        check_r(r)?;
        let omega = if r > 0.0 { Some(omega_from_r(r)?) } else { None };
        Ok(Self { r, omega, physical: None })
    }

    pub fn from_omega(omega: f64) -> Result<Self> {
        Ok(Self { r: r_from_omega(omega)?, omega: Some(omega), physical: None })
    }

    pub fn from_physical(physical: PhysicalAcceleration) -> Result<Self> {
        let PhysicalAcceleration { a, k_mag, c } = physical;
        if !(a > 0.0 && k_mag > 0.0 && c > 0.0) {
            return Err(Error::InvalidConfig(format!(
                "acceleration, wave number and c must be positive (a = {a}, |k| = {k_mag}, c = {c})"
            )));
        }
        let omega = k_mag * c / a;
        Ok(Self { physical: Some(physical), ..Self::from_omega(omega)? })
    }

    /// `|tanh r − exp(−2πΩ)|`, zero when Ω is unknown.
    pub fn consistency_residual(&self) -> f64 {
        self.omega.map_or(0.0, |w| (self.r.tanh() - (-2.0 * PI * w).exp()).abs())
    }
}

/// `r = artanh(exp(−2πΩ))`.
pub fn r_from_omega(omega: f64) -> Result<f64> {
    if !(omega > 0.0) || omega.is_nan() {
        return Err(Error::OutOfRange { what: "frequency ratio omega", value: omega });
    }
    Ok((-2.0 * PI * omega).exp().atanh())
}

/// Inverse of [`r_from_omega`]: `Ω = −ln(tanh r) / 2π`.
pub fn omega_from_r(r: f64) -> Result<f64> {
    if !(r > 0.0 && r.is_finite()) {
        return Err(Error::OutOfRange { what: "acceleration parameter r", value: r });
    }
    Ok(-r.tanh().ln() / (2.0 * PI))
}

/// Event in Rindler wedge I, in natural units (c = 1).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RindlerPoint {
    pub eta: f64,
    pub zeta: f64,
    pub accel: f64,
}

/// `t = a⁻¹ e^{aζ} sinh aη`, `z = a⁻¹ e^{aζ} cosh aη`.
pub fn rindler_to_minkowski(p: &RindlerPoint) -> Result<(f64, f64)> {
    if !(p.accel > 0.0 && p.accel.is_finite()) {
        return Err(Error::OutOfRange { what: "acceleration", value: p.accel });
    }
    let scale = (p.accel * p.zeta).exp() / p.accel;
    let phase = p.accel * p.eta;
    Ok((scale * phase.sinh(), scale * phase.cosh()))
}

/// Truncated Fock expansion coefficients plus the norm they leave out.
#[derive(Debug, Clone, PartialEq)]
pub struct ModeExpansion {
    pub coeffs: Vec<f64>,
    /// Analytic `1 − Σ coeffs²`.
    pub tail: f64,
}

/// Vacuum `|0_R⟩_M = Σ c_n |n⟩_I ⊗ |n⟩_II` with `c_n = tanhⁿr / cosh r`, `n ≤ n_max`.
pub fn minkowski_vacuum_coeffs(r: f64, cfg: &TruncationConfig) -> Result<ModeExpansion> {
    check_r(r)?;
    let t = r.tanh();
    let mut c = 1.0 / r.cosh();
    let mut coeffs = Vec::with_capacity(cfg.n_max + 1);
    for _ in 0..=cfg.n_max {
        coeffs.push(c);
        c *= t;
    }
    Ok(ModeExpansion { coeffs, tail: vacuum_tail(r, cfg.n_max) })
}

/// One-particle state `|1_R⟩_M = Σ d_n |n+1⟩_I ⊗ |n⟩_II` with
/// `d_n = √(n+1) tanhⁿr / cosh²r`, `n ≤ n_max − 1` so that `n + 1` fits.
pub fn minkowski_one_particle_coeffs(r: f64, cfg: &TruncationConfig) -> Result<ModeExpansion> {
    check_r(r)?;
    let t = r.tanh();
    let mut p = 1.0 / r.cosh().powi(2);
    let mut coeffs = Vec::with_capacity(cfg.n_max);
    for n in 0..cfg.n_max {
        coeffs.push(((n + 1) as f64).sqrt() * p);
        p *= t;
    }
    Ok(ModeExpansion { coeffs, tail: one_particle_tail(r, cfg.n_max) })
}

fn vacuum_tail(r: f64, n_max: usize) -> f64 {
    r.tanh().powi(2).powi(n_max as i32 + 1)
}

fn one_particle_tail(r: f64, n_max: usize) -> f64 {
    // (1−x)² Σ_{n ≥ n_max} (n+1) xⁿ = xⁿᵐᵃˣ (1 + n_max (1 − x))
    let x = r.tanh().powi(2);
    x.powi(n_max as i32) * (1.0 + n_max as f64 * (1.0 - x))
}

/// Analytic norm deficit of [`build_tripartite_psi`].
pub fn tripartite_tail(r: f64, n_max: usize) -> f64 {
    0.5 * (vacuum_tail(r, n_max) + one_particle_tail(r, n_max))
}

/// Alice(2) ⊗ I(n_max+1) ⊗ II(n_max+1).
pub fn tripartite_layout(cfg: &TruncationConfig) -> FactorLayout {
    FactorLayout::new([(ALICE, 2), (WEDGE_I, cfg.mode_dim()), (WEDGE_II, cfg.mode_dim())])
        .expect("fixed labels are distinct")
}

/// Alice(2) ⊗ I(n_max+1), the system the channel acts on.
pub fn alice_rob_layout(cfg: &TruncationConfig) -> FactorLayout {
    FactorLayout::new([(ALICE, 2), (WEDGE_I, cfg.mode_dim())]).expect("fixed labels are distinct")
}

/// `|ψ⟩ = (|0_A⟩|1_R⟩_M + |1_A⟩|0_R⟩_M)/√2` in the Rindler-mode basis.
pub fn build_tripartite_psi(r: f64, cfg: &TruncationConfig) -> Result<StateVector> {
    let vacuum = minkowski_vacuum_coeffs(r, cfg)?;
    let one = minkowski_one_particle_coeffs(r, cfg)?;
    let h = std::f64::consts::FRAC_1_SQRT_2;
    let mut psi = StateVector::zeros(tripartite_layout(cfg));
    for (n, &d) in one.coeffs.iter().enumerate() {
        psi.set(&[0, n + 1, n], h * d)?;
    }
    for (n, &c) in vacuum.coeffs.iter().enumerate() {
        psi.set(&[1, n, n], h * c)?;
    }
    Ok(psi)
}

/// The unaccelerated state `½(|01⟩ + |10⟩)(⟨01| + ⟨10|)` on Alice ⊗ I.
pub fn initial_state(cfg: &TruncationConfig) -> DensityMatrix {
    let layout = alice_rob_layout(cfg);
    let i01 = layout.flat_index(&[0, 1]).expect("n_max >= 1");
    let i10 = layout.flat_index(&[1, 0]).expect("n_max >= 1");
    let mut rho = DensityMatrix::zeros(layout);
    rho.add_at(i01, i01, 0.5);
    rho.add_at(i10, i10, 0.5);
    rho.add_symmetric(i01, i10, 0.5);
    rho
}

/// `a_n = (tanh²r)ⁿ / (2 cosh²r)`.
pub fn block_weight(r: f64, n: usize) -> f64 {
    r.tanh().powi(2).powi(n as i32) / (2.0 * r.cosh().powi(2))
}

/// Closed-form ρ_AR: a direct sum of rank-one 2×2 blocks on
/// `{|1,n⟩, |0,n+1⟩}`,
///
/// ```text
/// a_n [[1, √(n+1)/cosh r], [√(n+1)/cosh r, (n+1)/cosh²r]]
/// ```
///
/// At `n = n_max` only the `|1,n_max⟩` diagonal entry fits.
pub fn rho_ar_analytic(r: f64, cfg: &TruncationConfig) -> Result<DensityMatrix> {
    check_r(r)?;
    let layout = alice_rob_layout(cfg);
    let ch = r.cosh();
    let x = r.tanh().powi(2);
    let mut a_n = 1.0 / (2.0 * ch * ch);
    let mut rho = DensityMatrix::zeros(layout.clone());
    for n in 0..=cfg.n_max {
        let one_n = layout.flat_index(&[1, n])?;
        rho.add_at(one_n, one_n, a_n);
        if n < cfg.n_max {
            let zero_next = layout.flat_index(&[0, n + 1])?;
            let k = (n + 1) as f64;
            rho.add_symmetric(one_n, zero_next, a_n * k.sqrt() / ch);
            rho.add_at(zero_next, zero_next, a_n * k / (ch * ch));
        }
        a_n *= x;
    }
    Ok(rho)
}
