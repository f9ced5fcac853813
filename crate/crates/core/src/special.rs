//! Gamma-family helpers shared by the exponent, series and reference modules.
//!
//! `gamma` and `ln_gamma` come from `libm`; the ratio and reciprocal forms are
//! evaluated here so that they stay accurate near the poles of Γ and for large
//! arguments where `Γ(z+a)/Γ(z)` would overflow if formed directly.

use std::f64::consts::PI;

/// Euler–Mascheroni constant.
pub const EULER_GAMMA: f64 = 0.577_215_664_901_532_9;

/// Γ(x).
pub fn gamma(x: f64) -> f64 {
    libm::tgamma(x)
}

/// ln|Γ(x)|.
pub fn ln_gamma(x: f64) -> f64 {
    libm::lgamma_r(x).0
}

/// 1/Γ(z), entire in z; exactly zero at the non-positive integers.
pub fn rgamma(z: f64) -> f64 {
    if z <= 0.0 && z == z.floor() {
        return 0.0;
    }
    if z < -30.0 {
        // reflection: 1/Γ(z) = Γ(1-z) sin(πz) / π
        return gamma(1.0 - z) * sin_pi(z) / PI;
    }
    let mut w = z;
    let mut prod = 1.0;
    while w < 1.0 {
        prod *= w;
        w += 1.0;
    }
    prod / gamma(w)
}

/// d/dz (1/Γ(z)), continuous across the poles of Γ.
pub fn rgamma_deriv(z: f64) -> f64 {
    // r(z) = z r(z+1)  =>  r'(z) = r(z+1) + z r'(z+1)
    if z >= 1.0 {
        return -digamma(z) / gamma(z);
    }
    rgamma(z + 1.0) + z * rgamma_deriv(z + 1.0)
}

fn sin_pi(x: f64) -> f64 {
    let r = x - 2.0 * (x / 2.0).floor();
    (PI * r).sin()
}

const STIRLING: [f64; 7] = [
    1.0 / 12.0,
    -1.0 / 360.0,
    1.0 / 1260.0,
    -1.0 / 1680.0,
    1.0 / 1188.0,
    -691.0 / 360_360.0,
    1.0 / 156.0,
];

/// ln Γ(w+a) − ln Γ(w) for w ≥ 15 from the difference of Stirling series,
/// arranged so that no large logarithms cancel.
fn ln_gamma_ratio_large(w: f64, a: f64) -> f64 {
    let wa = w + a;
    let mut s = (w - 0.5) * (a / w).ln_1p() + a * wa.ln() - a;
    let (iw, iwa) = (1.0 / w, 1.0 / wa);
    let (iw2, iwa2) = (iw * iw, iwa * iwa);
    let (mut pw, mut pwa) = (iw, iwa);
    for c in STIRLING {
        s += c * (pwa - pw);
        pw *= iw2;
        pwa *= iwa2;
    }
    s
}

/// Γ(z+a)/Γ(z) for z + a > 0. Vanishes when z is a non-positive integer.
pub fn gamma_ratio(z: f64, a: f64) -> f64 {
    debug_assert!(z + a > 0.0, "gamma_ratio needs z + a > 0");
    let mut w = z;
    let mut prod = 1.0;
    while w < 15.0 {
        prod *= w / (w + a);
        w += 1.0;
    }
    prod * ln_gamma_ratio_large(w, a).exp()
}

/// ln Γ(z+a) − ln Γ(z) for z > 0, z + a > 0.
pub fn ln_gamma_ratio(z: f64, a: f64) -> f64 {
    debug_assert!(z > 0.0 && z + a > 0.0);
    let mut w = z;
    let mut acc = 0.0;
    while w < 15.0 {
        acc += (w / (w + a)).ln();
        w += 1.0;
    }
    acc + ln_gamma_ratio_large(w, a)
}

/// Digamma function Υ = Γ'/Γ.
pub fn digamma(x: f64) -> f64 {
    if x <= 0.0 {
        if x == x.floor() {
            return f64::NAN;
        }
        // Υ(x) = Υ(1-x) - π cot(πx)
        return digamma(1.0 - x) - PI / (PI * x).tan();
    }
    let mut w = x;
    let mut acc = 0.0;
    while w < 12.0 {
        acc -= 1.0 / w;
        w += 1.0;
    }
    let iw2 = 1.0 / (w * w);
    // ln w − 1/(2w) − Σ B_{2k}/(2k w^{2k})
    let tail = iw2
        * (1.0 / 12.0
            - iw2 * (1.0 / 120.0 - iw2 * (1.0 / 252.0 - iw2 * (1.0 / 240.0 - iw2 / 132.0))));
    acc + w.ln() - 0.5 / w - tail
}

/// Rising factorial (q)_n = Γ(q+n)/Γ(q) as a running product.
pub fn pochhammer(q: f64, n: usize) -> f64 {
    (0..n).fold(1.0, |p, k| p * (q + k as f64))
}
