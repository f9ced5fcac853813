//! One-step samplers for the driving Lévy process and for squared Bessel transitions.

use crate::error::{domain, Error, Result};
use crate::levy::{pochhammer_density, ExponentKind, LevyExponent};
use crate::quad::{integrate, integrate_to_infinity, QuadOptions};
use rand::Rng;
use rand_distr::{Distribution, Exp, Gamma, Poisson, StandardNormal};

const QUAD: QuadOptions = QuadOptions { abs_tol: 1e-13, rel_tol: 1e-11, max_intervals: 4000 };

/// Exact sampler for the jumps of size below −ε of a Pochhammer exponent,
/// together with the compensation constants for the jumps above −ε.
///
/// With w = −y the density is C e^{−cw} (1−e^{−w})^{−α−1}, c = α+γ−1 > 0.
/// On [ε, 1] the proposal is the Pareto law ∝ w^{−α−1}, on (1, ∞) the shifted
/// exponential with rate c; both acceptance ratios are bounded by 1.
#[derive(Debug, Clone)]
pub struct JumpSampler {
    alpha: f64,
    c: f64,
    eps: f64,
    rate: f64,
    near_share: f64,
    big_mean: f64,
    small_var: f64,
}

impl JumpSampler {
    pub fn new(psi: &LevyExponent, eps: f64) -> Result<Self> {
        let (alpha, gamma) = match psi.kind() {
            ExponentKind::Pochhammer { alpha, gamma } => (*alpha, *gamma),
            ExponentKind::BrownianDrift { .. } => return domain("the Brownian driver has no jumps"),
            ExponentKind::Tabulated { .. } => {
                return Err(Error::UnsupportedExponent("no jump sampler for tabulated triplets".into()))
            }
        };
        if !(eps > 0.0 && eps < 1.0) {
            return domain(format!("jump cutoff must lie in (0,1), got {eps}"));
        }
        let nu = |w: f64| pochhammer_density(alpha, gamma, -w);
        let near = integrate(nu, eps, 1.0, QUAD)?.value;
        let far = integrate_to_infinity(|t| nu(1.0 + t), 0.0, QUAD)?.value;
        let big_mean = -integrate(|w| w * nu(w), eps, 1.0, QUAD)?.value
            - integrate_to_infinity(|t| (1.0 + t) * nu(1.0 + t), 0.0, QUAD)?.value;
        // w = ε e^{−t}
        let small_var = integrate_to_infinity(
            |t: f64| {
                let w = eps * (-t).exp();
                // w³ν(w) is of order w^{2−α}
                if w < 1e-100 {
                    0.0
                } else {
                    w * w * w * nu(w)
                }
            },
            0.0,
            QUAD,
        )?
        .value;
        Ok(JumpSampler {
            alpha,
            c: alpha + gamma - 1.0,
            eps,
            rate: near + far,
            near_share: near / (near + far),
            big_mean,
            small_var,
        })
    }

    /// Intensity of the jumps below −ε.
    pub fn rate(&self) -> f64 {
        self.rate
    }
    /// ∫_{y<−ε} y ν(dy).
    pub fn big_mean(&self) -> f64 {
        self.big_mean
    }
    /// ∫_{−ε}^0 y² ν(dy).
    pub fn small_var(&self) -> f64 {
        self.small_var
    }
    pub fn cutoff(&self) -> f64 {
        self.eps
    }

    /// One jump y < −ε.
    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> f64 {
        let a = self.alpha;
        let k = (1.0 - (-1.0f64).exp()).powf(a + 1.0);
        if rng.random::<f64>() < self.near_share {
            let lo = self.eps.powf(-a);
            loop {
                let u: f64 = rng.random();
                let w = (lo - u * (lo - 1.0)).powf(-1.0 / a);
                let acc = (-self.c * w).exp() * (w / -(-w).exp_m1()).powf(a + 1.0) * k;
                if rng.random::<f64>() < acc {
                    return -w;
                }
            }
        } else {
            let exp = Exp::new(self.c).expect("positive rate");
            loop {
                let w = 1.0 + exp.sample(rng);
                let acc = k / (-(-w).exp_m1()).powf(a + 1.0);
                if rng.random::<f64>() < acc {
                    return -w;
                }
            }
        }
    }
}

/// How the increments of ξ are produced.
#[derive(Debug, Clone)]
pub(crate) enum XiLaw {
    Gaussian { drift: f64, var: f64, draws: u32 },
    Jumps { drift: f64, var: f64, jumps: JumpSampler, at_step_end: bool },
}

/// Increments of ξ over one step as knots (offset, ξ increment from the step start),
/// the last knot at offset h.
#[derive(Debug, Clone)]
pub(crate) struct XiStepper {
    law: XiLaw,
    knots: Vec<(f64, f64)>,
}

impl XiStepper {
    pub(crate) fn new(law: XiLaw) -> Self {
        XiStepper { law, knots: Vec::with_capacity(16) }
    }

    /// Knots of one step of length h; the slice is valid until the next call.
    pub(crate) fn step<R: Rng + ?Sized>(&mut self, rng: &mut R, h: f64) -> &[(f64, f64)] {
        self.knots.clear();
        match &self.law {
            XiLaw::Gaussian { drift, var, draws } => {
                let k = *draws as f64;
                let n: f64 = (0..*draws).map(|_| -> f64 { StandardNormal.sample(rng) }).sum::<f64>() / k.sqrt();
                self.knots.push((h, drift * h + (var * h).sqrt() * n));
            }
            XiLaw::Jumps { drift, var, jumps, at_step_end } => {
                let mean = jumps.rate() * h;
                let count = if mean > 0.0 { Poisson::new(mean).expect("positive mean").sample(rng) as usize } else { 0 };
                if *at_step_end {
                    let n: f64 = StandardNormal.sample(rng);
                    let cont = drift * h + (var * h).sqrt() * n;
                    let jump: f64 = (0..count).map(|_| jumps.sample(rng)).sum();
                    if count > 0 {
                        self.knots.push((h, cont));
                    }
                    self.knots.push((h, cont + jump));
                } else {
                    let mut times: Vec<f64> = (0..count).map(|_| h * rng.random::<f64>()).collect();
                    times.sort_by(f64::total_cmp);
                    let (mut t, mut x) = (0.0, 0.0);
                    for tj in times {
                        let n: f64 = StandardNormal.sample(rng);
                        x += drift * (tj - t) + (var * (tj - t)).sqrt() * n;
                        self.knots.push((tj, x));
                        x += jumps.sample(rng);
                        self.knots.push((tj, x));
                        t = tj;
                    }
                    let n: f64 = StandardNormal.sample(rng);
                    x += drift * (h - t) + (var * (h - t)).sqrt() * n;
                    self.knots.push((h, x));
                }
            }
        }
        &self.knots
    }
}

/// ∫ e^{k(ξ_s − ξ_start)} ds over one step by the trapezoid rule on the knots.
pub(crate) fn exp_integral(knots: &[(f64, f64)], k: f64) -> f64 {
    let (mut t, mut e, mut acc) = (0.0, 1.0, 0.0);
    for &(tj, xj) in knots {
        let ej = (k * xj).exp();
        acc += 0.5 * (tj - t) * (e + ej);
        t = tj;
        e = ej;
    }
    acc
}

/// Transitions of the squared Bessel process of dimension δ > 0.
#[derive(Debug, Clone, Copy)]
pub struct Besq {
    delta: f64,
}

impl Besq {
    pub fn new(delta: f64) -> Result<Self> {
        if !(delta > 0.0) || !delta.is_finite() {
            return domain(format!("squared Bessel dimension must be positive, got {delta}"));
        }
        Ok(Besq { delta })
    }

    pub fn dimension(&self) -> f64 {
        self.delta
    }

    /// Q_τ given Q_0 = y: τ times a noncentral χ² with δ degrees of freedom and
    /// noncentrality y/τ.
    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R, y: f64, tau: f64) -> f64 {
        let lam = y / tau;
        let d = self.delta;
        let chi2 = if d > 1.0 {
            let n: f64 = StandardNormal.sample(rng);
            let g = Gamma::new(0.5 * (d - 1.0), 2.0).expect("positive shape").sample(rng);
            (n + lam.sqrt()).powi(2) + g
        } else {
            let k = if lam > 0.0 { Poisson::new(0.5 * lam).expect("positive mean").sample(rng) } else { 0.0 };
            Gamma::new(0.5 * d + k, 2.0).expect("positive shape").sample(rng)
        };
        tau * chi2
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn jump_constants_match_exponent() {
        // the approximating exponent (b − m)u + s²u²/2 + ∫_{y<−ε}(e^{uy}−1)ν(dy)
        // differs from ψ by O(u³ ε^{3−α})
        let (alpha, eps) = (1.5, 0.02);
        let psi = LevyExponent::pochhammer(alpha, 0.0).unwrap();
        let js = JumpSampler::new(&psi, eps).unwrap();
        let nu = |w: f64| pochhammer_density(alpha, 0.0, -w);
        for &u in &[0.5, 1.0, 2.0] {
            let big = integrate(|w| (-u * w).exp_m1() * nu(w), eps, 1.0, QUAD).unwrap().value
                + integrate_to_infinity(|t| (-u * (1.0 + t)).exp_m1() * nu(1.0 + t), 0.0, QUAD).unwrap().value;
            let approx = (psi.mean().unwrap() - js.big_mean()) * u + 0.5 * js.small_var() * u * u + big;
            let exact = psi.psi(u).unwrap();
            assert!((approx - exact).abs() < u.powi(3) * eps.powf(3.0 - alpha), "u = {u}: {approx} vs {exact}");
        }
    }

    #[test]
    fn jump_sample_mean() {
        let psi = LevyExponent::pochhammer(1.5, 0.0).unwrap();
        let js = JumpSampler::new(&psi, 0.05).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let n = 200_000;
        let (mut s, mut s2) = (0.0, 0.0);
        for _ in 0..n {
            let y = js.sample(&mut rng);
            assert!(y < -0.05);
            s += y;
            s2 += y * y;
        }
        let m = s / n as f64;
        let se = ((s2 / n as f64 - m * m) / n as f64).sqrt();
        let want = js.big_mean() / js.rate();
        assert!((m - want).abs() < 4.0 * se, "{m} vs {want} ± {se}");
    }

    #[test]
    fn besq_mean() {
        let b = Besq::new(1.5).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let (y, tau, n) = (0.7, 0.4, 200_000);
        let (mut s, mut s2) = (0.0, 0.0);
        for _ in 0..n {
            let v = b.sample(&mut rng, y, tau);
            s += v;
            s2 += v * v;
        }
        let m = s / n as f64;
        let se = ((s2 / n as f64 - m * m) / n as f64).sqrt();
        assert!((m - (y + 1.5 * tau)).abs() < 4.0 * se);
        let b2 = Besq::new(3.0).unwrap();
        let m2: f64 = (0..n).map(|_| b2.sample(&mut rng, y, tau)).sum::<f64>() / n as f64;
        assert!((m2 - (y + 3.0 * tau)).abs() < 0.01);
    }

    #[test]
    fn trapezoid_on_knots() {
        let k = [(0.5, 0.0), (1.0, 0.0)];
        assert!((exp_integral(&k, 2.0) - 1.0).abs() < 1e-15);
    }
}
