//! Reference special functions by direct series summation, used as oracles.
//!
//! These are written independently of [`crate::series`]: no shared coefficient
//! tables, only the gamma helpers.

use crate::error::{Error, Result};
use crate::special::{gamma, ln_gamma, rgamma};

/// Relative stopping tolerance of the reference sums.
pub const REF_RTOL: f64 = 1e-15;
/// Term cap of the reference sums.
pub const REF_MAX_TERMS: usize = 4000;

/// Sums t_0 + t_1 + … given t_0 and the ratio t_n / t_{n−1}.
fn sum_by_ratio(t0: f64, mut ratio: impl FnMut(usize) -> f64) -> Result<f64> {
    let mut term = t0;
    let mut sum = t0;
    let mut small = 0;
    for n in 1..REF_MAX_TERMS {
        term *= ratio(n);
        sum += term;
        if term.abs() <= REF_RTOL * sum.abs() {
            small += 1;
            if small >= 3 {
                return Ok(sum);
            }
        } else {
            small = 0;
        }
        if term == 0.0 && n > 2 {
            return Ok(sum);
        }
    }
    Err(Error::TruncationFailure { terms: REF_MAX_TERMS, last_term: term, partial_sum: sum })
}

fn is_nonpositive_integer(v: f64) -> bool {
    v <= 0.0 && v == v.floor()
}

/// Modified Bessel function I_ν(x) = Σ (x/2)^{2n+ν} / (n! Γ(n+ν+1)), x > 0.
pub fn bessel_i(nu: f64, x: f64) -> Result<f64> {
    if x == 0.0 {
        return Ok(if nu == 0.0 { 1.0 } else { 0.0 });
    }
    if !(x > 0.0) {
        return Err(Error::Domain(format!("bessel_i needs x >= 0, got {x}")));
    }
    if is_nonpositive_integer(nu) {
        // I_{−m} = I_m
        return bessel_i(-nu, x);
    }
    let h = 0.5 * x;
    let t0 = h.powf(nu) * rgamma(nu + 1.0);
    let h2 = h * h;
    sum_by_ratio(t0, |n| h2 / (n as f64 * (n as f64 + nu)))
}

/// Kummer's function Φ(q, ν, x) = Σ (q)_n x^n / ((ν)_n n!).
pub fn kummer_phi(q: f64, nu: f64, x: f64) -> Result<f64> {
    if is_nonpositive_integer(nu) {
        return Err(Error::PoleParameter { name: "nu", value: nu });
    }
    if x == 0.0 {
        return Ok(1.0);
    }
    sum_by_ratio(1.0, |n| {
        let k = (n - 1) as f64;
        (q + k) * x / ((nu + k) * n as f64)
    })
}

/// Tricomi's function U(q, ν, x) for x > 0 from the standard pair of Kummer functions:
/// U = Γ(1−ν)/Γ(q−ν+1) Φ(q, ν, x) + Γ(ν−1)/Γ(q) x^{1−ν} Φ(q−ν+1, 2−ν, x).
pub fn tricomi_lambda(q: f64, nu: f64, x: f64) -> Result<f64> {
    if nu == nu.round() {
        return Err(Error::PoleParameter { name: "nu", value: nu });
    }
    if !(x > 0.0) {
        return Err(Error::Domain(format!("tricomi_lambda needs x > 0, got {x}")));
    }
    let (a, b) = tricomi_parts(q, nu, x)?;
    Ok(a + b)
}

/// The two Kummer terms of [`tricomi_lambda`], kept apart for error analysis.
pub fn tricomi_parts(q: f64, nu: f64, x: f64) -> Result<(f64, f64)> {
    let first = gamma(1.0 - nu) * rgamma(q - nu + 1.0) * kummer_phi(q, nu, x)?;
    let second = gamma(nu - 1.0) * rgamma(q) * x.powf(1.0 - nu) * kummer_phi(q - nu + 1.0, 2.0 - nu, x)?;
    Ok((first, second))
}

fn ml_sum(alpha: f64, beta: f64, q: f64, z: f64, with_factorial: bool) -> Result<f64> {
    if !(alpha > 0.0 && beta > 0.0) {
        return Err(Error::Domain(format!("Mittag-Leffler needs alpha, beta > 0, got {alpha}, {beta}")));
    }
    if z == 0.0 {
        return Ok(rgamma(beta));
    }
    // log-magnitudes: Γ(αn+β) overflows long before the terms are negligible
    let (lz, sz) = (z.abs().ln(), z.signum());
    let mut ln_poch = 0.0;
    let mut sum = rgamma(beta);
    let mut small = 0;
    let mut sign = 1.0;
    let mut last = 0.0;
    for n in 1..REF_MAX_TERMS {
        let nf = n as f64;
        ln_poch += (q + nf - 1.0).ln();
        sign *= sz;
        let mut lt = ln_poch + nf * lz - ln_gamma(alpha * nf + beta);
        if with_factorial {
            lt -= ln_gamma(nf + 1.0);
        }
        let t = sign * lt.exp();
        last = t;
        sum += t;
        if t.abs() <= REF_RTOL * sum.abs() {
            small += 1;
            if small >= 3 {
                return Ok(sum);
            }
        } else {
            small = 0;
        }
    }
    Err(Error::TruncationFailure { terms: REF_MAX_TERMS, last_term: last, partial_sum: sum })
}

/// Prabhakar's function E^q_{α,β}(z) = Σ (q)_n z^n / (n! Γ(αn+β)), q > 0.
pub fn prabhakar_m(alpha: f64, beta: f64, q: f64, z: f64) -> Result<f64> {
    ml_sum(alpha, beta, q, z, true)
}

/// The Pochhammer-weighted Mittag-Leffler series Σ (q)_n z^n / Γ(αn+β), q > 0,
/// which carries no 1/n! and is the form that matches I_{α,ψ}(q; ·) for the
/// Pochhammer exponents.
pub fn pochhammer_ml(alpha: f64, beta: f64, q: f64, z: f64) -> Result<f64> {
    ml_sum(alpha, beta, q, z, false)
}

/// Two-parameter Mittag-Leffler function E_{α,β}(z) = Σ z^n / Γ(αn+β).
pub fn mittag_leffler(alpha: f64, beta: f64, z: f64) -> Result<f64> {
    if z == 0.0 {
        return Ok(rgamma(beta));
    }
    let mut sum = 0.0;
    let mut small = 0;
    let mut zn = 1.0;
    for n in 0..REF_MAX_TERMS {
        let t = zn * rgamma(alpha * n as f64 + beta);
        sum += t;
        if n > 0 && t.abs() <= REF_RTOL * sum.abs() {
            small += 1;
            if small >= 3 {
                return Ok(sum);
            }
        } else {
            small = 0;
        }
        zn *= z;
        if !zn.is_finite() {
            break;
        }
    }
    Err(Error::TruncationFailure { terms: REF_MAX_TERMS, last_term: f64::NAN, partial_sum: sum })
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn kummer_at_zero() {
        assert_eq!(kummer_phi(0.7, 0.75, 0.0).unwrap(), 1.0);
        assert!(matches!(kummer_phi(0.7, -1.0, 1.0), Err(Error::PoleParameter { .. })));
    }

    #[test]
    fn bessel_half_integer() {
        let x = 1.0;
        let want = (2.0 / (PI * x)).sqrt() * x.sinh();
        assert!((bessel_i(0.5, x).unwrap() - want).abs() < 1e-15);
        let want_m = (2.0 / (PI * x)).sqrt() * x.cosh();
        assert!((bessel_i(-0.5, x).unwrap() - want_m).abs() < 1e-15);
    }

    #[test]
    fn bessel_asymptotic() {
        let x = 40.0;
        let r = bessel_i(0.25, x).unwrap() * (2.0 * PI * x).sqrt() * (-x).exp();
        assert!((r - 1.0).abs() < 0.01);
    }

    #[test]
    fn prabhakar_exponential() {
        let z: f64 = 0.7;
        assert!((prabhakar_m(1.0, 1.0, 1.0, z).unwrap() - z.exp()).abs() < 1e-14);
    }

    #[test]
    fn kummer_elementary() {
        // Φ(a, a, x) = e^x
        assert!((kummer_phi(1.3, 1.3, 2.0).unwrap() - 2f64.exp()).abs() < 1e-14);
    }

    #[test]
    fn tricomi_elementary() {
        // U(1, 1.5, x)... use U(a, a+1, x) = x^{−a}
        let (a, x) = (0.7, 2.3);
        let u = tricomi_lambda(a, a + 1.0, x).unwrap();
        assert!((u - x.powf(-a)).abs() < 1e-12);
        assert!(matches!(tricomi_lambda(0.5, 1.0, 1.0), Err(Error::PoleParameter { .. })));
    }
}
