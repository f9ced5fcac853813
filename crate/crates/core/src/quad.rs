//! Adaptive Gauss–Kronrod (7/15) quadrature on finite and semi-infinite intervals.

use crate::error::{Error, Result};
use num_complex::Complex64;
use std::ops::{Add, Mul, Sub};

/// Values that can be integrated: reals and complex numbers.
pub trait Integrand: Copy + Add<Output = Self> + Sub<Output = Self> + Mul<f64, Output = Self> {
    fn zero() -> Self;
    fn magnitude(&self) -> f64;
    fn is_finite_value(&self) -> bool;
}

impl Integrand for f64 {
    fn zero() -> Self {
        0.0
    }
    fn magnitude(&self) -> f64 {
        self.abs()
    }
    fn is_finite_value(&self) -> bool {
        self.is_finite()
    }
}

impl Integrand for Complex64 {
    fn zero() -> Self {
        Complex64::new(0.0, 0.0)
    }
    fn magnitude(&self) -> f64 {
        self.norm()
    }
    fn is_finite_value(&self) -> bool {
        self.re.is_finite() && self.im.is_finite()
    }
}

const XGK: [f64; 8] = [
    0.991_455_371_120_812_6,
    0.949_107_912_342_758_5,
    0.864_864_423_359_769_1,
    0.741_531_185_599_394_4,
    0.586_087_235_467_691_1,
    0.405_845_151_377_397_2,
    0.207_784_955_007_898_5,
    0.0,
];
const WGK: [f64; 8] = [
    0.022_935_322_010_529_22,
    0.063_092_092_629_978_55,
    0.104_790_010_322_250_2,
    0.140_653_259_715_525_9,
    0.169_004_726_639_267_9,
    0.190_350_578_064_785_4,
    0.204_432_940_075_298_9,
    0.209_482_141_084_728_8,
];
const WG: [f64; 4] = [
    0.129_484_966_168_869_7,
    0.279_705_391_489_276_7,
    0.381_830_050_505_118_9,
    0.417_959_183_673_469_4,
];

/// Tolerances and limits for [`integrate`].
#[derive(Debug, Clone, Copy)]
pub struct QuadOptions {
    pub abs_tol: f64,
    pub rel_tol: f64,
    pub max_intervals: usize,
}

impl Default for QuadOptions {
    fn default() -> Self {
        QuadOptions { abs_tol: 1e-12, rel_tol: 1e-11, max_intervals: 2000 }
    }
}

/// Result of an adaptive integration.
#[derive(Debug, Clone, Copy)]
pub struct QuadResult<T> {
    pub value: T,
    pub error: f64,
    pub intervals: usize,
}

fn gk15<T: Integrand>(f: &mut impl FnMut(f64) -> T, a: f64, b: f64) -> Result<(T, f64)> {
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    let fc = f(c);
    if !fc.is_finite_value() {
        return Err(Error::NonFinite { at: c });
    }
    let mut kron = fc * WGK[7];
    let mut gauss = fc * WG[3];
    for j in 0..7 {
        let dx = h * XGK[j];
        let (x1, x2) = (c - dx, c + dx);
        let (f1, f2) = (f(x1), f(x2));
        if !f1.is_finite_value() {
            return Err(Error::NonFinite { at: x1 });
        }
        if !f2.is_finite_value() {
            return Err(Error::NonFinite { at: x2 });
        }
        let s = f1 + f2;
        kron = kron + s * WGK[j];
        if j % 2 == 1 {
            gauss = gauss + s * WG[j / 2];
        }
    }
    let err = (kron - gauss).magnitude() * h.abs();
    Ok((kron * h, err))
}

/// Integrates `f` over the finite interval [a, b].
pub fn integrate<T: Integrand>(
    mut f: impl FnMut(f64) -> T,
    a: f64,
    b: f64,
    opts: QuadOptions,
) -> Result<QuadResult<T>> {
    if a == b {
        return Ok(QuadResult { value: T::zero(), error: 0.0, intervals: 0 });
    }
    let (v, e) = gk15(&mut f, a, b)?;
    let mut pieces = vec![(a, b, v, e)];
    loop {
        let total = pieces.iter().fold(T::zero(), |s, p| s + p.2);
        let err: f64 = pieces.iter().map(|p| p.3).sum();
        let tol = opts.abs_tol.max(opts.rel_tol * total.magnitude());
        if err <= tol {
            return Ok(QuadResult { value: total, error: err, intervals: pieces.len() });
        }
        if pieces.len() >= opts.max_intervals {
            return Err(Error::QuadratureFailure(format!(
                "{} intervals used, error estimate {err:.3e} above tolerance {tol:.3e}",
                pieces.len()
            )));
        }
        let (idx, _) = pieces
            .iter()
            .enumerate()
            .max_by(|x, y| x.1 .3.total_cmp(&y.1 .3))
            .expect("nonempty");
        let (lo, hi, _, _) = pieces.swap_remove(idx);
        let mid = 0.5 * (lo + hi);
        if mid <= lo.min(hi) || mid >= lo.max(hi) {
            return Err(Error::QuadratureFailure(format!("interval [{lo}, {hi}] cannot be bisected")));
        }
        let (v1, e1) = gk15(&mut f, lo, mid)?;
        let (v2, e2) = gk15(&mut f, mid, hi)?;
        pieces.push((lo, mid, v1, e1));
        pieces.push((mid, hi, v2, e2));
    }
}

/// Integrates `f` over [a, ∞) through x = a + t/(1−t).
pub fn integrate_to_infinity<T: Integrand>(
    mut f: impl FnMut(f64) -> T,
    a: f64,
    opts: QuadOptions,
) -> Result<QuadResult<T>> {
    integrate(
        |t: f64| {
            let s = 1.0 - t;
            let x = a + t / s;
            let v = f(x);
            // the endpoint t = 1 is never sampled by the Kronrod nodes
            v * (1.0 / (s * s))
        },
        0.0,
        1.0,
        opts,
    )
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn polynomial_exact() {
        let r = integrate(|x: f64| x.powi(5) - 2.0 * x, 0.0, 2.0, QuadOptions::default()).unwrap();
        assert!((r.value - (64.0 / 6.0 - 4.0)).abs() < 1e-13);
    }

    #[test]
    fn singular_endpoint() {
        let r = integrate(|x: f64| 1.0 / x.sqrt(), 0.0, 1.0, QuadOptions::default()).unwrap();
        assert!((r.value - 2.0).abs() < 1e-9);
    }

    #[test]
    fn semi_infinite_gaussian() {
        let r = integrate_to_infinity(|x: f64| (-x * x).exp(), 0.0, QuadOptions::default()).unwrap();
        assert!((r.value - 0.5 * std::f64::consts::PI.sqrt()).abs() < 1e-11);
    }

    #[test]
    fn complex_oscillation() {
        let r = integrate(
            |x: f64| Complex64::new(0.0, x).exp(),
            0.0,
            std::f64::consts::PI,
            QuadOptions::default(),
        )
        .unwrap();
        assert!((r.value - Complex64::new(0.0, 2.0)).norm() < 1e-12);
    }

    #[test]
    fn non_finite_reported() {
        let r = integrate(|x: f64| if x > 0.5 { f64::NAN } else { x }, 0.0, 1.0, QuadOptions::default());
        assert!(matches!(r, Err(Error::NonFinite { .. })));
    }
}
