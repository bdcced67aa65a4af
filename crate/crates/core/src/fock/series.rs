use crate::error::{Error, Result};

/// The two geometric-series normalizations behind every truncated sum.
///
/// With `x = tanh²r`:
/// `(1/cosh²r) Σ xⁿ = 1` and `(1/cosh⁴r) Σ (n+1) xⁿ = 1`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GeometricSeries {
    /// Closed-form value of the normalized plain series (always 1).
    pub plain_closed: f64,
    /// Closed-form value of the normalized weighted series (always 1).
    pub weighted_closed: f64,
    /// `(1/cosh²r) Σ_{n ≤ n_max} xⁿ`.
    pub plain_partial: f64,
    /// `(1/cosh⁴r) Σ_{n ≤ n_max} (n+1) xⁿ`.
    pub weighted_partial: f64,
    /// `xⁿᵐᵃˣ⁺¹`, the exact remainder of the plain series.
    pub plain_tail: f64,
    /// `xⁿᵐᵃˣ⁺¹ (n_max + 2 − (n_max + 1) x)`, the exact remainder of the weighted series.
    pub weighted_tail: f64,
}

pub fn geometric_closed_forms(r: f64, n_max: usize) -> Result<GeometricSeries> {
    if !(r >= 0.0 && r.is_finite()) {
        return Err(Error::OutOfRange { what: "acceleration parameter r", value: r });
    }
    let x = r.tanh().powi(2);
    let sech2 = 1.0 / r.cosh().powi(2);

    let mut plain = 0.0;
    let mut weighted = 0.0;
    let mut term = 1.0;
    for n in 0..=n_max {
        plain += term;
        weighted += (n + 1) as f64 * term;
        term *= x;
    }
    let plain_tail = x.powi(n_max as i32 + 1);
    let weighted_tail = plain_tail * ((n_max + 2) as f64 - (n_max + 1) as f64 * x);

    Ok(GeometricSeries {
        plain_closed: 1.0,
        weighted_closed: 1.0,
        plain_partial: sech2 * plain,
        weighted_partial: sech2 * sech2 * weighted,
        plain_tail,
        weighted_tail,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn stationary_limit_is_exact() {
        let g = geometric_closed_forms(0.0, 5).unwrap();
        assert_eq!(g.plain_partial, 1.0);
        assert_eq!(g.weighted_partial, 1.0);
        assert_eq!(g.plain_tail, 0.0);
        assert_eq!(g.weighted_tail, 0.0);
    }

    #[test]
    fn converges_to_one_at_r_one() {
        let g = geometric_closed_forms(1.0, 64).unwrap();
        assert!((g.plain_partial - g.plain_closed).abs() < 1e-12);
        assert!((g.weighted_partial - g.weighted_closed).abs() < 1e-12);
    }

    #[test]
    fn tails_match_direct_summation() {
        // Oracle: sum terms n_max+1 ..= 10 n_max directly.
        let (r, n_max) = (1.0_f64, 16usize);
        let x = r.tanh().powi(2);
        let sech2 = 1.0 / r.cosh().powi(2);
        let mut plain = 0.0;
        let mut weighted = 0.0;
        for n in n_max + 1..=10 * n_max {
            plain += x.powi(n as i32);
            weighted += (n + 1) as f64 * x.powi(n as i32);
        }
        let g = geometric_closed_forms(r, n_max).unwrap();
        assert!((g.plain_tail - sech2 * plain).abs() < 1e-12);
        assert!((g.weighted_tail - sech2 * sech2 * weighted).abs() < 1e-12);
        assert!((g.plain_partial + g.plain_tail - 1.0).abs() < 1e-14);
        assert!((g.weighted_partial + g.weighted_tail - 1.0).abs() < 1e-14);
    }

    #[test]
    fn rejects_invalid_r() {
        assert!(geometric_closed_forms(-0.1, 4).is_err());
        assert!(geometric_closed_forms(f64::INFINITY, 4).is_err());
    }

    proptest! {
        #[test]
        fn partial_sums_rise_monotonically(r in 0.01f64..2.5, n in 1usize..80) {
            let lo = geometric_closed_forms(r, n).unwrap();
            let hi = geometric_closed_forms(r, n + 1).unwrap();
            prop_assert!(hi.plain_partial >= lo.plain_partial);
            prop_assert!(hi.weighted_partial >= lo.weighted_partial);
            prop_assert!(hi.plain_partial <= 1.0 + 1e-14);
            prop_assert!(hi.weighted_partial <= 1.0 + 1e-14);
            // (n_max + 2) x^(n_max+1) bounds the weighted remainder.
            prop_assert!(lo.weighted_tail <= (n + 2) as f64 * lo.plain_tail);
        }
    }
}
