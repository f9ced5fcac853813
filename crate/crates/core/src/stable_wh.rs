//! Wiener–Hopf factors of stable processes in the classes C_{k,l} and the
//! double Laplace transforms of passage quantities of their OU images.

use crate::error::{domain, Error, Result};
use crate::quad::{integrate, integrate_to_infinity, QuadOptions};
use crate::special::ln_gamma;
use num_complex::Complex64;
use std::f64::consts::PI;

/// Angular tolerance for the excluded rays.
pub const BRANCH_TOL: f64 = 1e-12;
/// Tolerance on ρ + k − l/α for class membership.
pub const CLASS_TOL: f64 = 1e-9;

/// Stable parameters: α ∈ (1,2), skewness β ∈ [−1,1], scale c and positivity ρ.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StableParams {
    pub alpha: f64,
    pub beta: f64,
    pub c: f64,
    pub rho: f64,
    pub class: Option<(i64, i64)>,
}

/// Doney class indices (k, l) with ρ + k = l/α.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct DoneyClass {
    pub k: i64,
    pub l: i64,
}

impl StableParams {
    pub fn new(alpha: f64, beta: f64) -> Result<Self> {
        if !(alpha > 1.0 && alpha < 2.0) {
            return domain(format!("stable alpha must lie in (1,2), got {alpha}"));
        }
        if !(-1.0..=1.0).contains(&beta) {
            return domain(format!("skewness must lie in [-1,1], got {beta}"));
        }
        let t = (alpha * PI / 2.0).tan();
        let c = 1.0 / (1.0 + beta * beta * t * t).sqrt();
        let rho = 0.5 + (beta * t).atan() / (PI * alpha);
        Ok(StableParams { alpha, beta, c, rho, class: None })
    }

    /// Attaches (k, l) after checking |ρ + k − l/α| < 1e−9.
    pub fn with_class(mut self, k: i64, l: i64) -> Result<Self> {
        let residual = self.rho + k as f64 - l as f64 / self.alpha;
        if residual.abs() >= CLASS_TOL {
            return Err(Error::ClassMismatch { k, l, residual });
        }
        self.class = Some((k, l));
        Ok(self)
    }

    /// The member of C_{k,l} with stability α: ρ = l/α − k, β from Zolotarev's relation.
    pub fn from_class(alpha: f64, k: i64, l: i64) -> Result<Self> {
        if !(alpha > 1.0 && alpha < 2.0) {
            return domain(format!("stable alpha must lie in (1,2), got {alpha}"));
        }
        let rho = l as f64 / alpha - k as f64;
        let t = (alpha * PI / 2.0).tan();
        let beta = (PI * alpha * (rho - 0.5)).tan() / t;
        if !(beta.abs() <= 1.0 + 1e-12) {
            return Err(Error::ClassMismatch { k, l, residual: rho - 0.5 });
        }
        StableParams::new(alpha, beta.clamp(-1.0, 1.0))?.with_class(k, l)
    }

    fn class_or_err(&self) -> Result<DoneyClass> {
        self.class
            .map(|(k, l)| DoneyClass { k, l })
            .ok_or_else(|| Error::Domain("stable parameters carry no (k,l) class".into()))
    }

    /// Ψ(iu) = −c|u|^α (1 − iβ sgn(u) tan(απ/2)).
    pub fn char_exponent_imag_axis(&self, u: f64) -> Complex64 {
        let t = (self.alpha * PI / 2.0).tan();
        -self.c * u.abs().powf(self.alpha) * Complex64::new(1.0, -self.beta * u.signum() * t)
    }
}

/// z^p with arg z ∈ (−π, π]; 0^p = 0.
pub fn branch_pow(z: Complex64, p: f64) -> Complex64 {
    let r = z.norm();
    if r == 0.0 {
        return Complex64::new(0.0, 0.0);
    }
    let mut phi = z.im.atan2(z.re);
    if phi <= -PI {
        phi = PI;
    }
    Complex64::from_polar(r.powf(p), p * phi)
}

/// f_m(x, z) = ∏_{i=0}^{m} (z + e^{i x (m − 2i) π}); the empty product (m = −1) is 1.
pub fn f_poly(m: i64, x: f64, z: Complex64) -> Complex64 {
    let mut p = Complex64::new(1.0, 0.0);
    for i in 0..=m {
        let ang = x * (m - 2 * i) as f64 * PI;
        p *= z + Complex64::from_polar(1.0, ang);
    }
    p
}

fn sign_pow(n: i64) -> f64 {
    if n.rem_euclid(2) == 0 {
        1.0
    } else {
        -1.0
    }
}

/// Which factor.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Side {
    Plus,
    Minus,
}

/// Ψ⁺ or Ψ⁻ for a parameter set in some class C_{k,l}.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WienerHopfFactor {
    pub side: Side,
    pub params: StableParams,
}

impl WienerHopfFactor {
    pub fn new(side: Side, params: StableParams) -> Result<Self> {
        params.class_or_err()?;
        Ok(WienerHopfFactor { side, params })
    }

    pub fn eval(&self, z: Complex64) -> Result<Complex64> {
        match self.side {
            Side::Plus => psi_plus(&self.params, z),
            Side::Minus => psi_minus(&self.params, z),
        }
    }
}

/// Ψ⁺(z) = f_{k−1}(α, (−1)^l (−z)^α) / f_{l−1}(1/α, (−1)^{k+1} z), Arg z ≠ 0.
pub fn psi_plus(params: &StableParams, z: Complex64) -> Result<Complex64> {
    let DoneyClass { k, l } = params.class_or_err()?;
    if z.norm() > 0.0 && z.re > 0.0 && z.im.abs() <= BRANCH_TOL * z.norm() {
        return Err(Error::BranchViolation { factor: "psi_plus", arg: z.im.atan2(z.re) });
    }
    let pow = PowFactors { m: k - 1, x: params.alpha, s: sign_pow(l), sigma: -1.0, alpha: params.alpha };
    let lin = LinFactors { m: l - 1, x: 1.0 / params.alpha, s: sign_pow(k + 1) };
    Ok(cancelled_ratio(&pow, &lin, z).inv())
}

/// Ψ⁻(z) = f_{l−1}(1/α, (−1)^{k+1} z) / f_k(α, (−1)^l z^α), Arg z ≠ −π.
pub fn psi_minus(params: &StableParams, z: Complex64) -> Result<Complex64> {
    let DoneyClass { k, l } = params.class_or_err()?;
    if z.norm() > 0.0 && z.re < 0.0 {
        let raw = z.im.atan2(z.re);
        if (raw + PI).abs() <= BRANCH_TOL {
            return Err(Error::BranchViolation { factor: "psi_minus", arg: raw });
        }
    }
    let pow = PowFactors { m: k, x: params.alpha, s: sign_pow(l), sigma: 1.0, alpha: params.alpha };
    let lin = LinFactors { m: l - 1, x: 1.0 / params.alpha, s: sign_pow(k + 1) };
    Ok(cancelled_ratio(&pow, &lin, z))
}

/// Factors s z + e^{i x (m−2i) π} of f_m(x, s z).
struct LinFactors {
    m: i64,
    x: f64,
    s: f64,
}

/// Factors s (σz)^α + e^{i x (m−2i) π} of f_m(x, s (σz)^α).
struct PowFactors {
    m: i64,
    x: f64,
    s: f64,
    sigma: f64,
    alpha: f64,
}

const CANCEL_TOL: f64 = 1e-5;

/// f_lin(z) / f_pow(z). Both polynomials can vanish at the same point of the
/// real axis; the vanishing pair is replaced by f'/(g' − g'' h/2), h = f/f',
/// which is exact up to O(h²).
fn cancelled_ratio(pow: &PowFactors, lin: &LinFactors, z: Complex64) -> Complex64 {
    let angle = |x: f64, m: i64, i: i64| Complex64::from_polar(1.0, x * (m - 2 * i) as f64 * PI);
    let lin_vals: Vec<Complex64> = (0..=lin.m).map(|i| lin.s * z + angle(lin.x, lin.m, i)).collect();
    let w = branch_pow(pow.sigma * z, pow.alpha);
    let pow_vals: Vec<Complex64> = (0..=pow.m).map(|i| pow.s * w + angle(pow.x, pow.m, i)).collect();
    let argmin = |v: &[Complex64]| {
        v.iter().enumerate().min_by(|a, b| a.1.norm().total_cmp(&b.1.norm())).map(|(i, _)| i)
    };
    let scale = z.norm().max(1.0);
    let pair = match (argmin(&lin_vals), argmin(&pow_vals)) {
        (Some(i), Some(j)) if lin_vals[i].norm() < CANCEL_TOL * scale && pow_vals[j].norm() < 1e3 * CANCEL_TOL * scale => {
            Some((i, j))
        }
        _ => None,
    };
    let mut num = Complex64::new(1.0, 0.0);
    let mut den = Complex64::new(1.0, 0.0);
    for (i, v) in lin_vals.iter().enumerate() {
        if pair.is_none_or(|(pi, _)| pi != i) {
            num *= v;
        }
    }
    for (j, v) in pow_vals.iter().enumerate() {
        if pair.is_none_or(|(_, pj)| pj != j) {
            den *= v;
        }
    }
    if let Some((i, _)) = pair {
        let a = pow.alpha;
        let h = lin_vals[i] / lin.s;
        let sz = pow.sigma * z;
        let g1 = pow.s * pow.sigma * a * branch_pow(sz, a - 1.0);
        let g2 = pow.s * a * (a - 1.0) * branch_pow(sz, a - 2.0);
        num *= lin.s;
        den *= g1 - 0.5 * g2 * h;
    }
    num / den
}

/// Passage below or above the level 0.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PassageSide {
    Below,
    Above,
}

/// ∫ e^{∓δx} E_x[e^{−qτ − p U_{τ−}}] dx for the stable OU process, as
/// (1/(δ−p)) (1 − E[R(χG)]) with G ~ Gamma(q/χ, 1) and
/// R(r) = Ψ⁺(−r^{−1/α}δ)/Ψ⁺(−r^{−1/α}p) below, Ψ⁻(r^{−1/α}δ)/Ψ⁻(r^{−1/α}p) above.
///
/// The factor ratio depends on δ r^{−1/α} by scaling, and the passage times
/// are related by τ^U = ln(1 + χτ^X)/χ, which fixes the normalization.
pub fn ou_fpt_double_laplace(params: &StableParams, side: PassageSide, q: f64, delta: f64, p: f64, chi: f64) -> Result<f64> {
    if !(q > 0.0 && delta > 0.0 && p >= 0.0 && chi > 0.0) {
        return domain(format!("need q, delta, chi > 0 and p >= 0, got q={q}, delta={delta}, p={p}, chi={chi}"));
    }
    if delta == p {
        return domain("delta = p is excluded");
    }
    params.class_or_err()?;
    let a = q / chi;
    let inv_alpha = 1.0 / params.alpha;
    let ratio = |r: f64| -> Result<Complex64> {
        let s = r.powf(-inv_alpha);
        match side {
            PassageSide::Below => Ok(psi_plus(params, Complex64::new(-s * delta, 0.0))?
                / psi_plus(params, Complex64::new(-s * p, 0.0))?),
            PassageSide::Above => Ok(psi_minus(params, Complex64::new(s * delta, 0.0))?
                / psi_minus(params, Complex64::new(s * p, 0.0))?),
        }
    };
    // r = χs; the factor ratio changes regime near r* = max(δ,p)^α
    let s_star = delta.max(p).powf(params.alpha) / chi;
    let opts = QuadOptions { abs_tol: 1e-13, rel_tol: 1e-11, max_intervals: 4000 };
    let mut failure: Option<Error> = None;
    let mut eval = |r: f64| -> Complex64 {
        match ratio(r) {
            Ok(v) => v,
            Err(e) => {
                failure.get_or_insert(e);
                Complex64::new(0.0, 0.0)
            }
        }
    };
    // weights carry 1/Γ(a) in log form so that large a does not overflow
    let ln_head = a * s_star.ln() - ln_gamma(a + 1.0);
    // (1/Γ(a)) ∫₀^{s*} R(χs) s^{a−1} e^{−s} ds with s = s* t^{1/a}
    let head = integrate(
        |t: f64| {
            let s = s_star * t.powf(1.0 / a);
            eval(chi * s) * (ln_head - s).exp()
        },
        0.0,
        1.0,
        opts,
    )?;
    let ln_tail = -ln_gamma(a);
    let tail_err = std::cell::RefCell::new(None::<Error>);
    let tail_f = |v: f64| {
        let s = s_star * v.exp();
        let w = (a * s.ln() - s + ln_tail).exp();
        if !s.is_finite() || w == 0.0 {
            return Complex64::new(0.0, 0.0);
        }
        match ratio(chi * s) {
            Ok(r) => r * w,
            Err(e) => {
                tail_err.borrow_mut().get_or_insert(e);
                Complex64::new(0.0, 0.0)
            }
        }
    };
    // the rest with s = s* e^v, split at the Gamma mode so the peak sits on an endpoint
    let v_mode = ((a - 1.0).max(0.0) / s_star).ln().max(0.0);
    let mut tail = integrate_to_infinity(tail_f, v_mode, opts)?.value;
    if v_mode > 0.0 {
        tail += integrate(tail_f, 0.0, v_mode, opts)?.value;
    }
    let tail_err = tail_err.into_inner();
    if let Some(e) = failure.or(tail_err) {
        return Err(e);
    }
    let integral = head.value + tail;
    if integral.im.abs() > 1e-9 * integral.re.abs().max(1.0) {
        return Err(Error::QuadratureFailure(format!("imaginary residue {:.3e}", integral.im)));
    }
    Ok((1.0 - integral.re) / (delta - p))
}
