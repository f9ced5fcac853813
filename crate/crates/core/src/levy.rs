//! Laplace exponents of spectrally negative Lévy processes.
//!
//! ψ(u) = bu + (σ/2)u² + ∫_{(−∞,0)} (e^{uy} − 1 − uy) ν(dy), u ≥ 0,
//! with b the mean of ξ₁.

use crate::error::{domain, Error, Result};
use crate::quad::{integrate, integrate_to_infinity, QuadOptions};
use crate::special::{digamma, gamma, gamma_ratio, rgamma, rgamma_deriv};
use std::fmt;
use std::sync::Arc;

/// Lévy density on (−∞, 0).
pub type Density = Arc<dyn Fn(f64) -> f64 + Send + Sync>;

/// Absolute tolerance for jump integrals of tabulated triplets.
pub const JUMP_ABS_TOL: f64 = 1e-10;

/// Largest bracket endpoint tried by the root finders.
pub const BRACKET_CAP: f64 = 1e8;

/// Growth ψ(u) ~ a_β u^{1+β} as u → ∞.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Growth {
    pub beta: f64,
    pub a_beta: f64,
}

/// A user-supplied triplet (b, σ, ν).
#[derive(Clone)]
pub struct TabulatedTriplet {
    pub b: f64,
    pub sigma: f64,
    density: Density,
    breakpoints: Option<Arc<Vec<f64>>>,
    witness: f64,
    growth: Option<Growth>,
}

impl fmt::Debug for TabulatedTriplet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("TabulatedTriplet")
            .field("b", &self.b)
            .field("sigma", &self.sigma)
            .field("witness", &self.witness)
            .field("growth", &self.growth)
            .finish()
    }
}

fn jump_opts() -> QuadOptions {
    QuadOptions { abs_tol: 0.4 * JUMP_ABS_TOL, rel_tol: 1e-13, max_intervals: 4000 }
}

/// ∫_{(−∞,0)} g(y) ν(dy), split at −1 with y = −e^{−t} on (−1, 0).
fn jump_integral(density: &Density, g: impl Fn(f64) -> f64) -> Result<f64> {
    let map_err = |e: Error| match e {
        Error::QuadratureFailure(_) => Error::NonConvergentJumpIntegral { error: f64::NAN, tolerance: JUMP_ABS_TOL },
        other => other,
    };
    let near = integrate_to_infinity(
        |t: f64| {
            let y = -(-t).exp();
            if y > -1e-100 {
                // below this the integrability condition leaves nothing to add
                return 0.0;
            }
            g(y) * density(y) * (-y)
        },
        0.0,
        jump_opts(),
    )
    .map_err(map_err)?;
    let far = integrate_to_infinity(|s: f64| g(-1.0 - s) * density(-1.0 - s), 0.0, jump_opts()).map_err(map_err)?;
    let error = near.error + far.error;
    if error > JUMP_ABS_TOL {
        return Err(Error::NonConvergentJumpIntegral { error, tolerance: JUMP_ABS_TOL });
    }
    Ok(near.value + far.value)
}

/// Same integral for a piecewise density: one rule per table segment.
fn segment_integral(density: &Density, nodes: &[f64], g: impl Fn(f64) -> f64) -> Result<f64> {
    let opts = QuadOptions { abs_tol: 1e-14, rel_tol: 1e-13, max_intervals: 64 };
    let mut total = 0.0;
    let mut error = 0.0;
    for w in nodes.windows(2) {
        let r = integrate(|y: f64| g(y) * density(y), w[0], w[1].min(0.0), opts).map_err(|_| {
            Error::NonConvergentJumpIntegral { error: f64::NAN, tolerance: JUMP_ABS_TOL }
        })?;
        total += r.value;
        error += r.error;
    }
    if error > JUMP_ABS_TOL {
        return Err(Error::NonConvergentJumpIntegral { error, tolerance: JUMP_ABS_TOL });
    }
    Ok(total)
}

/// e^{x} − 1 − x without cancellation.
fn expm1_minus_x(x: f64) -> f64 {
    if x.abs() < 1e-4 {
        x * x * (0.5 + x / 6.0 + x * x / 24.0)
    } else {
        x.exp_m1() - x
    }
}

impl TabulatedTriplet {
    /// Builds the triplet after checking ∫ (|y| ∧ y²) ν(dy) < ∞ by quadrature.
    pub fn new(b: f64, sigma: f64, density: Density, growth: Option<Growth>) -> Result<Self> {
        if !(sigma >= 0.0) || !b.is_finite() {
            return domain(format!("need sigma >= 0 and finite b, got b = {b}, sigma = {sigma}"));
        }
        let mut t = TabulatedTriplet { b, sigma, density, breakpoints: None, witness: 0.0, growth };
        t.set_witness()?;
        Ok(t)
    }

    fn set_witness(&mut self) -> Result<()> {
        let witness = self.integral(|y| y.abs().min(y * y))?;
        if !witness.is_finite() || witness < 0.0 {
            return Err(Error::NonConvergentJumpIntegral { error: f64::INFINITY, tolerance: JUMP_ABS_TOL });
        }
        self.witness = witness;
        Ok(())
    }

    fn integral(&self, g: impl Fn(f64) -> f64) -> Result<f64> {
        match &self.breakpoints {
            Some(nodes) => segment_integral(&self.density, nodes, g),
            None => jump_integral(&self.density, g),
        }
    }

    /// Piecewise-linear density through (y_i, ν_i), zero outside the table.
    pub fn from_table(b: f64, sigma: f64, ys: Vec<f64>, nus: Vec<f64>, growth: Option<Growth>) -> Result<Self> {
        if ys.len() != nus.len() || ys.len() < 2 {
            return domain("density table needs matching y and nu arrays of length >= 2");
        }
        if ys.windows(2).any(|w| w[0] >= w[1]) || *ys.last().unwrap() > 0.0 {
            return domain("density table abscissae must be increasing and <= 0");
        }
        if nus.iter().any(|v| !(*v >= 0.0)) {
            return domain("density table values must be non-negative");
        }
        if !(sigma >= 0.0) || !b.is_finite() {
            return domain(format!("need sigma >= 0 and finite b, got b = {b}, sigma = {sigma}"));
        }
        let nodes = Arc::new(ys.clone());
        let density: Density = Arc::new(move |y: f64| {
            if y < ys[0] || y > ys[ys.len() - 1] {
                return 0.0;
            }
            let i = ys.partition_point(|&v| v <= y).clamp(1, ys.len() - 1);
            let t = (y - ys[i - 1]) / (ys[i] - ys[i - 1]);
            nus[i - 1] + t * (nus[i] - nus[i - 1])
        });
        let mut t = TabulatedTriplet { b, sigma, density, breakpoints: Some(nodes), witness: 0.0, growth };
        t.set_witness()?;
        Ok(t)
    }

    /// ∫ (|y| ∧ y²) ν(dy), computed at construction.
    pub fn integrability_witness(&self) -> f64 {
        self.witness
    }

    pub fn density(&self, y: f64) -> f64 {
        if y < 0.0 {
            (self.density)(y)
        } else {
            0.0
        }
    }

    fn psi(&self, u: f64) -> Result<f64> {
        let j = self.integral(|y| expm1_minus_x(u * y))?;
        Ok(self.b * u + 0.5 * self.sigma * u * u + j)
    }

    fn dpsi(&self, u: f64) -> Result<f64> {
        let j = self.integral(|y| y * (u * y).exp_m1())?;
        Ok(self.b + self.sigma * u + j)
    }
}

/// The three supported families.
#[derive(Debug, Clone)]
pub enum ExponentKind {
    /// ψ(u) = bu + σu²/2.
    BrownianDrift { b: f64, sigma: f64 },
    /// ψ(u) = ((u+γ−1)_α − (γ−1)_α)/α with (z)_α = Γ(z+α)/Γ(z).
    Pochhammer { alpha: f64, gamma: f64 },
    /// General triplet with quadrature for the jump part; `shift` is an Esscher shift.
    Tabulated { triplet: TabulatedTriplet, shift: f64 },
}

/// A spectrally negative Laplace exponent with its largest root θ₀ cached.
#[derive(Debug, Clone)]
pub struct LevyExponent {
    kind: ExponentKind,
    theta0: std::result::Result<f64, Error>,
}

/// ψ_γ(u) = ψ(u+γ) − ψ(γ).
#[derive(Debug, Clone)]
pub struct EsscherShift {
    pub base: LevyExponent,
    pub gamma: f64,
}

impl EsscherShift {
    pub fn new(base: LevyExponent, gamma: f64) -> Result<Self> {
        if !(gamma >= 0.0) {
            return domain(format!("Esscher shift needs gamma >= 0, got {gamma}"));
        }
        Ok(EsscherShift { base, gamma })
    }

    pub fn eval(&self, u: f64) -> Result<f64> {
        if !(u >= 0.0) {
            return domain(format!("psi needs u >= 0, got {u}"));
        }
        Ok(self.base.psi(u + self.gamma)? - self.base.psi(self.gamma)?)
    }

    /// The shifted exponent as a standalone [`LevyExponent`].
    pub fn to_exponent(&self) -> Result<LevyExponent> {
        self.base.esscher(self.gamma)
    }
}

/// (z)_α/α and its derivative in z, valid for z + α > 0.
fn poch_alpha(z: f64, alpha: f64) -> f64 {
    gamma_ratio(z, alpha)
}

fn poch_alpha_deriv(z: f64, alpha: f64) -> f64 {
    if z >= 1.0 {
        gamma_ratio(z, alpha) * (digamma(z + alpha) - digamma(z))
    } else {
        // d/dz Γ(z+α)/Γ(z) = Γ(z+α)(Υ(z+α)/Γ(z) + (1/Γ)'(z))
        let g = gamma(z + alpha);
        g * (digamma(z + alpha) * rgamma(z) + rgamma_deriv(z))
    }
}

impl LevyExponent {
    fn build(kind: ExponentKind) -> Self {
        let mut e = LevyExponent { kind, theta0: Ok(0.0) };
        e.theta0 = e.compute_theta0();
        e
    }

    pub fn brownian(b: f64, sigma: f64) -> Result<Self> {
        if !(sigma >= 0.0) || !b.is_finite() || !sigma.is_finite() {
            return domain(format!("BrownianDrift needs finite b and sigma >= 0, got b = {b}, sigma = {sigma}"));
        }
        Ok(Self::build(ExponentKind::BrownianDrift { b, sigma }))
    }

    pub fn pochhammer(alpha: f64, gamma: f64) -> Result<Self> {
        if !(alpha > 1.0 && alpha < 2.0) {
            return domain(format!("Pochhammer needs alpha in (1,2), got {alpha}"));
        }
        if !(gamma > 1.0 - alpha) || !gamma.is_finite() {
            return domain(format!("Pochhammer needs gamma > 1 - alpha, got {gamma}"));
        }
        Ok(Self::build(ExponentKind::Pochhammer { alpha, gamma }))
    }

    pub fn tabulated(triplet: TabulatedTriplet) -> Self {
        Self::build(ExponentKind::Tabulated { triplet, shift: 0.0 })
    }

    pub fn kind(&self) -> &ExponentKind {
        &self.kind
    }

    /// ψ(u) for u ≥ 0.
    pub fn psi(&self, u: f64) -> Result<f64> {
        if !(u >= 0.0) {
            return domain(format!("psi needs u >= 0, got {u}"));
        }
        self.psi_ext(u)
    }

    /// ψ on its natural domain, which for the closed-form kinds extends below 0.
    pub(crate) fn psi_ext(&self, u: f64) -> Result<f64> {
        match &self.kind {
            ExponentKind::BrownianDrift { b, sigma } => Ok(b * u + 0.5 * sigma * u * u),
            ExponentKind::Pochhammer { alpha, gamma } => {
                let z0 = gamma - 1.0;
                if u + z0 + alpha <= 0.0 {
                    return domain(format!("Pochhammer psi undefined at u = {u}"));
                }
                Ok((poch_alpha(u + z0, *alpha) - poch_alpha(z0, *alpha)) / alpha)
            }
            ExponentKind::Tabulated { triplet, shift } => {
                if u < 0.0 {
                    return domain(format!("tabulated psi needs u >= 0, got {u}"));
                }
                if *shift == 0.0 {
                    triplet.psi(u)
                } else {
                    Ok(triplet.psi(u + shift)? - triplet.psi(*shift)?)
                }
            }
        }
    }

    /// ψ'(u) for u ≥ 0.
    pub fn derivative(&self, u: f64) -> Result<f64> {
        if !(u >= 0.0) {
            return domain(format!("psi' needs u >= 0, got {u}"));
        }
        match &self.kind {
            ExponentKind::BrownianDrift { b, sigma } => Ok(b + sigma * u),
            ExponentKind::Pochhammer { alpha, gamma } => Ok(poch_alpha_deriv(u + gamma - 1.0, *alpha) / alpha),
            ExponentKind::Tabulated { triplet, shift } => triplet.dpsi(u + shift),
        }
    }

    /// Mean b = ψ'(0+).
    pub fn mean(&self) -> Result<f64> {
        self.derivative(0.0)
    }

    /// Diffusion coefficient σ.
    pub fn sigma(&self) -> f64 {
        match &self.kind {
            ExponentKind::BrownianDrift { sigma, .. } => *sigma,
            ExponentKind::Pochhammer { .. } => 0.0,
            ExponentKind::Tabulated { triplet, .. } => triplet.sigma,
        }
    }

    /// Density of the Lévy measure at y < 0 (zero for y ≥ 0).
    pub fn jump_density(&self, y: f64) -> f64 {
        if y >= 0.0 {
            return 0.0;
        }
        match &self.kind {
            ExponentKind::BrownianDrift { .. } => 0.0,
            ExponentKind::Pochhammer { alpha, gamma } => pochhammer_density(*alpha, *gamma, y),
            ExponentKind::Tabulated { triplet, shift } => (shift * y).exp() * triplet.density(y),
        }
    }

    /// Growth ψ(u) ~ a_β u^{1+β}, when known.
    pub fn growth(&self) -> Option<Growth> {
        match &self.kind {
            ExponentKind::BrownianDrift { b, sigma } => {
                if *sigma > 0.0 {
                    Some(Growth { beta: 1.0, a_beta: 0.5 * sigma })
                } else if *b > 0.0 {
                    Some(Growth { beta: 0.0, a_beta: *b })
                } else {
                    None
                }
            }
            ExponentKind::Pochhammer { alpha, .. } => Some(Growth { beta: alpha - 1.0, a_beta: 1.0 / alpha }),
            ExponentKind::Tabulated { triplet, .. } => triplet.growth,
        }
    }

    /// ψ_γ(u) = ψ(u+γ) − ψ(γ) as a new exponent.
    pub fn esscher(&self, shift: f64) -> Result<LevyExponent> {
        if !(shift >= 0.0) || !shift.is_finite() {
            return domain(format!("Esscher shift needs gamma >= 0, got {shift}"));
        }
        let kind = match &self.kind {
            ExponentKind::BrownianDrift { b, sigma } => ExponentKind::BrownianDrift { b: b + sigma * shift, sigma: *sigma },
            ExponentKind::Pochhammer { alpha, gamma } => ExponentKind::Pochhammer { alpha: *alpha, gamma: gamma + shift },
            ExponentKind::Tabulated { triplet, shift: s } => {
                ExponentKind::Tabulated { triplet: triplet.clone(), shift: s + shift }
            }
        };
        Ok(Self::build(kind))
    }

    /// Largest root θ₀ of ψ(u) = 0.
    pub fn theta0(&self) -> Result<f64> {
        self.theta0.clone()
    }

    /// The Cramér root θ > 0 when b < 0, `None` when b ≥ 0.
    pub fn cramer_theta(&self) -> Result<Option<f64>> {
        if self.mean()? >= 0.0 {
            return Ok(None);
        }
        self.theta0.clone().map(Some)
    }

    fn compute_theta0(&self) -> Result<f64> {
        if self.mean()? >= 0.0 {
            return Ok(0.0);
        }
        let hi = self.bracket(0.0, 1.0, "cramer_theta")?;
        self.solve(0.0, hi, 0.0, |_, dpsi| 1e-12 * dpsi.abs().max(1.0))
    }

    /// φ(q), the inverse of ψ on [θ₀, ∞).
    pub fn phi(&self, q: f64) -> Result<f64> {
        if !(q >= 0.0) {
            return domain(format!("phi needs q >= 0, got {q}"));
        }
        let t0 = self.theta0()?;
        if q == 0.0 {
            return Ok(t0);
        }
        let hi = self.bracket(q, (t0 + 1.0).max(2.0 * t0), "phi_inverse")?;
        self.solve(t0, hi, q, |q, _| 1e-12 * q.max(1.0))
    }

    /// Smallest doubling of `start` with ψ(hi) > target.
    fn bracket(&self, target: f64, start: f64, what: &'static str) -> Result<f64> {
        let mut hi = start;
        while hi <= BRACKET_CAP {
            if self.psi(hi)? > target {
                return Ok(hi);
            }
            hi *= 2.0;
        }
        Err(Error::BracketFailure { what, cap: BRACKET_CAP })
    }

    /// Root of ψ(u) = target in (lo, hi] with ψ(hi) > target; bisection then Newton from the right.
    fn solve(&self, mut lo: f64, mut hi: f64, target: f64, tol: impl Fn(f64, f64) -> f64) -> Result<f64> {
        for _ in 0..60 {
            if hi - lo <= 1e-3 * hi.max(1e-3) {
                break;
            }
            let mid = 0.5 * (lo + hi);
            let f = self.psi(mid)? - target;
            if f == 0.0 {
                return Ok(mid);
            }
            if f > 0.0 {
                hi = mid;
            } else {
                lo = mid;
            }
        }
        let mut x = hi;
        for _ in 0..200 {
            let f = self.psi(x)? - target;
            let d = self.derivative(x)?;
            if f.abs() < tol(target, d) {
                return Ok(x);
            }
            if f > 0.0 {
                hi = x;
            } else {
                lo = x;
            }
            let mut next = x - f / d;
            if !(next >= lo && next <= hi) || !next.is_finite() {
                next = 0.5 * (lo + hi);
            }
            if next == x || hi - lo <= 4.0 * f64::EPSILON * hi {
                return Ok(x);
            }
            x = next;
        }
        Ok(x)
    }
}

/// ν(y) = (α−1)/Γ(2−α) · e^{(α+γ−1)y} / (1−e^y)^{α+1}, y < 0.
pub fn pochhammer_density(alpha: f64, gamma: f64, y: f64) -> f64 {
    if y >= 0.0 {
        return 0.0;
    }
    let c = (alpha - 1.0) * rgamma(2.0 - alpha);
    c * ((alpha + gamma - 1.0) * y).exp() / (-(y.exp_m1())).powf(alpha + 1.0)
}
