//! The power series I_{α,ψ}(z) = Σ a_n z^n and I_{α,ψ}(q; z) = Σ a_n (q)_n z^n,
//! with a_n^{-1} = ψ(α)ψ(2α)…ψ(αn), the constant C_{θ_α} and the function N.

use crate::error::{domain, Error, Result};
use crate::levy::LevyExponent;
use crate::special::{gamma_ratio, EULER_GAMMA};
use num_complex::Complex64;
use std::sync::OnceLock;

/// Stopping rule for partial sums.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Truncation {
    pub rtol: f64,
    pub max_terms: usize,
}

impl Default for Truncation {
    fn default() -> Self {
        Truncation { rtol: 1e-13, max_terms: 400 }
    }
}

impl Truncation {
    pub fn new(rtol: f64, max_terms: usize) -> Result<Self> {
        if !(rtol > 0.0) || max_terms < 8 {
            return domain(format!("truncation needs rtol > 0 and max_terms >= 8, got {rtol}, {max_terms}"));
        }
        Ok(Truncation { rtol, max_terms })
    }
}

/// A partial sum with its truncation diagnostics.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SeriesValue<T> {
    pub value: T,
    pub terms_used: usize,
    pub tail_bound: f64,
}

/// ln|a_n| with the sign of a_n.
#[derive(Debug, Clone, Copy, PartialEq)]
struct LogCoeff {
    ln_abs: f64,
    sign: f64,
}

/// One member of the I-family: α, ψ, optional q and a truncation rule.
#[derive(Debug)]
pub struct SeriesSpec {
    alpha: f64,
    psi: LevyExponent,
    q: Option<f64>,
    truncation: Truncation,
    coeffs: OnceLock<Result<Vec<LogCoeff>>>,
}

impl Clone for SeriesSpec {
    fn clone(&self) -> Self {
        SeriesSpec {
            alpha: self.alpha,
            psi: self.psi.clone(),
            q: self.q,
            truncation: self.truncation,
            coeffs: self.coeffs.clone(),
        }
    }
}

fn log_coeffs(psi: &LevyExponent, alpha: f64, n_max: usize) -> Result<Vec<LogCoeff>> {
    let mut out = Vec::with_capacity(n_max + 1);
    let mut cur = LogCoeff { ln_abs: 0.0, sign: 1.0 };
    out.push(cur);
    for k in 1..=n_max {
        let u = alpha * k as f64;
        let p = psi.psi(u)?;
        let scale = (psi.derivative(u)?.abs() * u).max(1.0);
        if p == 0.0 || p.abs() < 1e-13 * scale {
            return Err(Error::ZeroDenominator { k, at: u });
        }
        cur = LogCoeff { ln_abs: cur.ln_abs - p.abs().ln(), sign: cur.sign * p.signum() };
        out.push(cur);
    }
    Ok(out)
}

/// a_n(ψ; α) = 1/(ψ(α)…ψ(αn)), with a_0 = 1.
pub fn coeff(psi: &LevyExponent, alpha: f64, n: usize) -> Result<f64> {
    if !(alpha > 0.0) {
        return domain(format!("alpha must be positive, got {alpha}"));
    }
    let c = log_coeffs(psi, alpha, n)?;
    let last = c[n];
    Ok(last.sign * last.ln_abs.exp())
}

impl SeriesSpec {
    pub fn new(alpha: f64, psi: LevyExponent, q: Option<f64>, truncation: Truncation) -> Result<Self> {
        if !(alpha > 0.0) || !alpha.is_finite() {
            return domain(format!("alpha must be positive, got {alpha}"));
        }
        if let Some(q) = q {
            if !(q > 0.0) || !q.is_finite() {
                return domain(format!("q must be positive, got {q}"));
            }
        }
        let truncation = Truncation::new(truncation.rtol, truncation.max_terms)?;
        Ok(SeriesSpec { alpha, psi, q, truncation, coeffs: OnceLock::new() })
    }

    /// Same α, ψ and truncation with a different q; the coefficient cache is shared.
    pub fn with_q(&self, q: Option<f64>) -> Result<Self> {
        let mut s = SeriesSpec::new(self.alpha, self.psi.clone(), q, self.truncation)?;
        if let Some(c) = self.coeffs.get() {
            let _ = s.coeffs.set(c.clone());
        } else {
            s.coeffs = OnceLock::new();
        }
        Ok(s)
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }
    pub fn psi(&self) -> &LevyExponent {
        &self.psi
    }
    pub fn q(&self) -> Option<f64> {
        self.q
    }
    pub fn truncation(&self) -> Truncation {
        self.truncation
    }

    fn table(&self) -> Result<&[LogCoeff]> {
        match self.coeffs.get_or_init(|| log_coeffs(&self.psi, self.alpha, self.truncation.max_terms)) {
            Ok(v) => Ok(v),
            Err(e) => Err(e.clone()),
        }
    }

    /// a_n from the cached table.
    pub fn coeff(&self, n: usize) -> Result<f64> {
        if n > self.truncation.max_terms {
            return coeff(&self.psi, self.alpha, n);
        }
        let c = self.table()?[n];
        Ok(c.sign * c.ln_abs.exp())
    }

    /// ln|a_n| and the sign of a_n, usable where a_n itself underflows.
    pub fn ln_coeff(&self, n: usize) -> Result<(f64, f64)> {
        let c = if n > self.truncation.max_terms { log_coeffs(&self.psi, self.alpha, n)?[n] } else { self.table()?[n] };
        Ok((c.ln_abs, c.sign))
    }

    /// ln|a_n (q)_n| and its sign for n = 0..=max_terms.
    fn weights(&self) -> Result<Vec<(f64, f64)>> {
        let table = self.table()?;
        let mut ln_poch = 0.0;
        let mut out = Vec::with_capacity(table.len());
        for (n, c) in table.iter().enumerate() {
            if n > 0 {
                if let Some(q) = self.q {
                    ln_poch += (q + (n - 1) as f64).ln();
                }
            }
            out.push((c.ln_abs + ln_poch, c.sign));
        }
        Ok(out)
    }

    /// Σ a_n (q)_n z^n for real z (the q factor only when q is set).
    pub fn eval_real(&self, z: f64) -> Result<SeriesValue<f64>> {
        if !z.is_finite() {
            return domain(format!("series argument must be finite, got {z}"));
        }
        if z == 0.0 {
            return Ok(SeriesValue { value: 1.0, terms_used: 1, tail_bound: 0.0 });
        }
        let w = self.weights()?;
        let (ln_z, sz) = (z.abs().ln(), z.signum());
        let mut sum = 1.0;
        let mut prev = 1.0f64;
        let mut small = 0;
        let mut sign_z = 1.0;
        for (n, &(lw, sa)) in w.iter().enumerate().skip(1) {
            sign_z *= sz;
            let mag = (lw + n as f64 * ln_z).exp();
            sum += sa * sign_z * mag;
            let tail = tail_estimate(mag, prev);
            prev = mag;
            if mag < self.truncation.rtol * sum.abs() {
                small += 1;
            } else {
                small = 0;
            }
            if small >= 3 && tail <= self.truncation.rtol * sum.abs() {
                return Ok(SeriesValue { value: sum, terms_used: n + 1, tail_bound: tail });
            }
        }
        Err(Error::TruncationFailure { terms: w.len(), last_term: prev, partial_sum: sum })
    }

    /// Complex argument version, principal branch of arg z.
    pub fn eval_complex(&self, z: Complex64) -> Result<SeriesValue<Complex64>> {
        if z == Complex64::new(0.0, 0.0) {
            return Ok(SeriesValue { value: Complex64::new(1.0, 0.0), terms_used: 1, tail_bound: 0.0 });
        }
        if !(z.re.is_finite() && z.im.is_finite()) {
            return domain("series argument must be finite");
        }
        let w = self.weights()?;
        let (r, th) = z.to_polar();
        let ln_z = r.ln();
        let mut sum = Complex64::new(1.0, 0.0);
        let mut prev = 1.0f64;
        let mut small = 0;
        for (n, &(lw, sa)) in w.iter().enumerate().skip(1) {
            let mag = (lw + n as f64 * ln_z).exp();
            sum += Complex64::from_polar(sa * mag, n as f64 * th);
            let tail = tail_estimate(mag, prev);
            prev = mag;
            if mag < self.truncation.rtol * sum.norm() {
                small += 1;
            } else {
                small = 0;
            }
            if small >= 3 && tail <= self.truncation.rtol * sum.norm() {
                return Ok(SeriesValue { value: sum, terms_used: n + 1, tail_bound: tail });
            }
        }
        Err(Error::TruncationFailure { terms: w.len(), last_term: prev, partial_sum: sum.norm() })
    }
}

/// Geometric majorant of the tail from the last observed term ratio.
fn tail_estimate(mag: f64, prev: f64) -> f64 {
    let r = if prev > 0.0 { mag / prev } else { 0.0 };
    if r < 1.0 {
        mag * r / (1.0 - r)
    } else {
        f64::INFINITY
    }
}

/// I_{α,ψ}(z); `spec.q` must be `None`.
pub fn eval_i(spec: &SeriesSpec, z: f64) -> Result<SeriesValue<f64>> {
    if spec.q.is_some() {
        return domain("eval_I takes a spec without q; use eval_iq");
    }
    spec.eval_real(z)
}

/// I_{α,ψ}(q; z); `spec.q` must be set.
pub fn eval_iq(spec: &SeriesSpec, z: f64) -> Result<SeriesValue<f64>> {
    if spec.q.is_none() {
        return domain("eval_Iq needs a spec with q set");
    }
    spec.eval_real(z)
}

/// Wynn's ε-algorithm on a sequence; returns the last two diagonal estimates.
fn wynn(seq: &[f64]) -> (f64, f64) {
    let n = seq.len();
    let mut prev: Vec<f64> = vec![0.0; n + 1];
    let mut cur: Vec<f64> = seq.to_vec();
    let mut best = (seq[n - 1], seq[n.saturating_sub(2)]);
    let mut level = 0;
    while cur.len() > 1 {
        let mut next = Vec::with_capacity(cur.len() - 1);
        for i in 0..cur.len() - 1 {
            let d = cur[i + 1] - cur[i];
            let v = if d == 0.0 { f64::INFINITY } else { prev[i + 1] + 1.0 / d };
            next.push(v);
        }
        prev = cur;
        cur = next;
        level += 1;
        if level % 2 == 0 && cur.len() >= 2 && cur.iter().all(|v| v.is_finite()) {
            best = (cur[cur.len() - 1], cur[cur.len() - 2]);
        }
    }
    best
}

/// C_{θ_α} for an exponent with b < 0, Cramér root θ and growth ψ(u) ~ a_β u^{1+β}.
///
/// Evaluated as
/// a_β^{−θ_α} α^{−(1+β)θ_α} e^{(1+β)θ_α E} ∏_{k≥1} e^{−(1+β)θ_α/k} ψ(αk+θ)/ψ(αk),
/// E the Euler–Mascheroni constant, with the partial log-sums at K = 64·2^j
/// accelerated by Wynn's ε-algorithm.
pub fn eval_c_theta(psi: &LevyExponent, alpha: f64, beta: f64, a_beta: f64) -> Result<f64> {
    if !(alpha > 0.0) || !(0.0..=1.0).contains(&beta) || !(a_beta > 0.0) {
        return domain(format!("need alpha > 0, beta in [0,1], a_beta > 0; got {alpha}, {beta}, {a_beta}"));
    }
    let theta = psi
        .cramer_theta()?
        .ok_or_else(|| Error::MeaninglessQuery("C_theta needs a negative mean".into()))?;
    let ta = theta / alpha;
    if (ta - ta.round()).abs() < 1e-9 {
        let k = ta.round() as usize;
        return Err(Error::ZeroDenominator { k, at: alpha * k as f64 });
    }
    let p = (1.0 + beta) * ta;
    let by_quadrature = matches!(psi.kind(), crate::levy::ExponentKind::Tabulated { .. });
    let max_level = if by_quadrature { 6 } else { 16 };
    let mut sums = Vec::new();
    let mut s = 0.0;
    let mut sign = 1.0;
    let mut k = 0usize;
    let mut k_target = 64usize;
    let mut last_est: Option<f64> = None;
    let mut spread = f64::INFINITY;
    for _level in 0..=max_level {
        while k < k_target {
            k += 1;
            let u = alpha * k as f64;
            let num = psi.psi(u + theta)?;
            let den = psi.psi(u)?;
            if den == 0.0 {
                return Err(Error::ZeroDenominator { k, at: u });
            }
            let r = num / den;
            sign *= r.signum();
            s += r.abs().ln() - p / k as f64;
        }
        sums.push(s);
        k_target *= 2;
        if sums.len() >= 3 {
            let (est, _) = wynn(&sums);
            if let Some(prev) = last_est {
                spread = (est - prev).abs();
                if spread < 1e-11 * est.abs().max(1.0) {
                    let ln_c = -ta * a_beta.ln() - p * alpha.ln() + p * EULER_GAMMA + est;
                    return Ok(sign * ln_c.exp());
                }
            }
            last_est = Some(est);
        }
    }
    Err(Error::ProductDivergence { terms: k, spread })
}

/// C_{θ_α} using the growth recorded on the exponent.
pub fn c_theta(psi: &LevyExponent, alpha: f64) -> Result<f64> {
    let g = psi
        .growth()
        .ok_or_else(|| Error::UnsupportedExponent("growth index unknown for this exponent".into()))?;
    eval_c_theta(psi, alpha, g.beta, g.a_beta)
}

/// The two pieces of N(q; x^α) kept apart for error analysis.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NTerms {
    /// I_{α,ψ}(q; x^α).
    pub regular: f64,
    /// C_{θ_α} x^θ Γ(q+θ_α)/Γ(q) I_{α,ψ_θ}(q+θ_α; x^α).
    pub singular: f64,
}

impl NTerms {
    pub fn value(&self) -> f64 {
        self.regular - self.singular
    }
}

/// N_{α,ψ,θ} with C_{θ_α} and both coefficient tables computed once.
#[derive(Debug, Clone)]
pub struct NFunction {
    alpha: f64,
    theta: f64,
    c_theta: f64,
    base: SeriesSpec,
    shifted: SeriesSpec,
}

impl NFunction {
    pub fn new(psi: &LevyExponent, alpha: f64, truncation: Truncation) -> Result<Self> {
        let theta = psi
            .cramer_theta()?
            .ok_or_else(|| Error::MeaninglessQuery("N needs b < 0 so that the Cramér root exists".into()))?;
        if !(theta > 0.0 && theta < alpha) {
            return Err(Error::MeaninglessQuery(format!("N needs 0 < theta < alpha, got theta = {theta}, alpha = {alpha}")));
        }
        let c_theta = c_theta(psi, alpha)?;
        let base = SeriesSpec::new(alpha, psi.clone(), None, truncation)?;
        let shifted = SeriesSpec::new(alpha, psi.esscher(theta)?, None, truncation)?;
        base.table()?;
        shifted.table()?;
        Ok(NFunction { alpha, theta, c_theta, base, shifted })
    }

    pub fn theta(&self) -> f64 {
        self.theta
    }
    pub fn c_theta(&self) -> f64 {
        self.c_theta
    }

    /// Both terms of N(q; x^α) for q > 0, x ≥ 0.
    pub fn terms(&self, q: f64, x: f64) -> Result<NTerms> {
        if !(x >= 0.0) {
            return domain(format!("N needs x >= 0, got {x}"));
        }
        let ta = self.theta / self.alpha;
        let z = x.powf(self.alpha);
        let regular = self.base.with_q(Some(q))?.eval_real(z)?.value;
        if x == 0.0 {
            return Ok(NTerms { regular, singular: 0.0 });
        }
        let second = self.shifted.with_q(Some(q + ta))?.eval_real(z)?.value;
        let singular = self.c_theta * x.powf(self.theta) * gamma_ratio(q, ta) * second;
        Ok(NTerms { regular, singular })
    }

    /// N(q; x^α).
    pub fn eval(&self, q: f64, x: f64) -> Result<f64> {
        Ok(self.terms(q, x)?.value())
    }
}

/// N_{α,ψ,θ}(q; x^α) as a one-shot call.
pub fn eval_n(psi: &LevyExponent, alpha: f64, q: f64, x: f64) -> Result<f64> {
    NFunction::new(psi, alpha, Truncation::default())?.eval(q, x)
}
