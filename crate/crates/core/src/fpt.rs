//! Closed-form Laplace transforms of passage times of U, X, Z and Ŷ.

use crate::error::{domain, Error, Result};
use crate::levy::LevyExponent;
use crate::series::{NFunction, SeriesSpec, Truncation};
pub use crate::simulator::FptProcess;

/// Values above 1 by less than this are accepted as rounding.
const PROB_TOL: f64 = 1e-12;

/// One passage-time query.
#[derive(Debug, Clone)]
pub struct FptQuery {
    pub process: FptProcess,
    pub psi: LevyExponent,
    pub alpha: f64,
    pub lambda: f64,
    pub q: f64,
    /// x for U, X, the Δ clock and T_0; Z_0 for Z; Ŷ_0 for Ŷ.
    pub start: f64,
    /// Ignored for `UToZero`.
    pub barrier: f64,
    pub truncation: Truncation,
}

impl FptQuery {
    pub fn new(process: FptProcess, psi: LevyExponent, alpha: f64, lambda: f64, q: f64, start: f64, barrier: f64) -> Result<Self> {
        if !(alpha > 0.0 && lambda > 0.0 && q >= 0.0 && start > 0.0) {
            return domain(format!("need alpha, lambda, start > 0 and q >= 0, got {alpha}, {lambda}, {start}, {q}"));
        }
        let upward = matches!(process, FptProcess::U | FptProcess::XMovingBoundary | FptProcess::UDeltaClock | FptProcess::Z);
        if process != FptProcess::UToZero {
            if !(barrier > 0.0) || !barrier.is_finite() {
                return domain(format!("barrier must be positive, got {barrier}"));
            }
            if upward && start > barrier {
                return domain(format!("upward passage needs start <= barrier, got {start} > {barrier}"));
            }
            if !upward && start < barrier {
                return domain(format!("downward passage needs start >= barrier, got {start} < {barrier}"));
            }
        }
        Ok(FptQuery { process, psi, alpha, lambda, q, start, barrier, truncation: Truncation::default() })
    }

    pub fn with_truncation(mut self, truncation: Truncation) -> Self {
        self.truncation = truncation;
        self
    }

    /// χ = αλ.
    pub fn chi(&self) -> f64 {
        self.alpha * self.lambda
    }

    /// γ = φ(q), the Esscher level of the Δ-clock, Z and Ŷ cases.
    pub fn gamma(&self) -> Result<f64> {
        self.psi.phi(self.q)
    }
}

/// I(p; z1) / I(p; z2) for one exponent, from a single coefficient table.
fn series_ratio(psi: &LevyExponent, alpha: f64, p: f64, z1: f64, z2: f64, trunc: Truncation) -> Result<f64> {
    if p == 0.0 {
        return Ok(1.0);
    }
    let spec = SeriesSpec::new(alpha, psi.clone(), Some(p), trunc)?;
    Ok(spec.eval_real(z1)?.value / spec.eval_real(z2)?.value)
}

/// U below 0 is continued by the recurrent extension, which needs 0 < θ < α.
fn check_recurrent(query: &FptQuery) -> Result<()> {
    if let Some(theta) = query.psi.cramer_theta()? {
        if !(theta < query.alpha) {
            return Err(Error::MeaninglessQuery(format!(
                "b < 0 with theta = {theta} >= alpha = {}: U has no recurrent extension",
                query.alpha
            )));
        }
    }
    Ok(())
}

fn check_probability(v: f64) -> Result<f64> {
    if !(v > 0.0 && v <= 1.0 + PROB_TOL) {
        return Err(Error::NotAProbability { value: v });
    }
    Ok(v.min(1.0))
}

/// The Laplace transform of the queried passage time.
///
/// * U and the moving boundary for X: I(q/χ; χx^α) / I(q/χ; χa^α).
/// * Δ clock: (x/a)^γ I_γ(γ/α; χx^α) / I_γ(γ/α; χa^α), I_γ built on ψ_γ, γ = φ(q).
/// * Z from z0 above a: (a/z0)^{−γ/α} I_γ(γ/α; χ) / I_γ(γ/α; χa/z0).
/// * Ŷ from y0 below x: (x/y0)^{γ/α} I_γ(γ/α; χ) / I_γ(γ/α; χy0/x).
/// * U to 0: N(q/χ; χx^α).
pub fn laplace_fpt(query: &FptQuery) -> Result<f64> {
    let (alpha, chi, q) = (query.alpha, query.chi(), query.q);
    let (x, a) = (query.start, query.barrier);
    let t = query.truncation;
    let v = match query.process {
        FptProcess::U | FptProcess::XMovingBoundary => {
            check_recurrent(query)?;
            series_ratio(&query.psi, alpha, q / chi, chi * x.powf(alpha), chi * a.powf(alpha), t)?
        }
        FptProcess::UDeltaClock => {
            let g = query.gamma()?;
            let shifted = query.psi.esscher(g)?;
            (x / a).powf(g) * series_ratio(&shifted, alpha, g / alpha, chi * x.powf(alpha), chi * a.powf(alpha), t)?
        }
        FptProcess::Z => {
            let g = query.gamma()?;
            let shifted = query.psi.esscher(g)?;
            (a / x).powf(-g / alpha) * series_ratio(&shifted, alpha, g / alpha, chi, chi * a / x, t)?
        }
        FptProcess::Yhat => {
            let g = query.gamma()?;
            let shifted = query.psi.esscher(g)?;
            (a / x).powf(g / alpha) * series_ratio(&shifted, alpha, g / alpha, chi, chi * x / a, t)?
        }
        FptProcess::UToZero => {
            if q == 0.0 {
                return Ok(1.0);
            }
            let n = NFunction::new(&query.psi, alpha, t)?;
            n.eval(q / chi, chi.powf(1.0 / alpha) * x)?
        }
    };
    check_probability(v)
}

/// Alternative closed forms for Z and Ŷ, kept to be
/// compared with simulation: with x = 1/z0, (1/(ax))^γ I_γ(γ/α; χ)/I_γ(γ/α; χ(ax)^α)
/// for Z, and (x/y0)^{γ/α} I_γ(γ/α; χ^{1/α})/I_γ(γ/α; (χy0/x)^{1/α}) for Ŷ.
pub fn laplace_fpt_alt(query: &FptQuery) -> Result<f64> {
    let (alpha, chi) = (query.alpha, query.chi());
    let (s, a) = (query.start, query.barrier);
    let t = query.truncation;
    let g = query.gamma()?;
    let shifted = query.psi.esscher(g)?;
    match query.process {
        FptProcess::Z => {
            let x = 1.0 / s;
            Ok((1.0 / (a * x)).powf(g) * series_ratio(&shifted, alpha, g / alpha, chi, chi * (a * x).powf(alpha), t)?)
        }
        FptProcess::Yhat => Ok((a / s).powf(g / alpha)
            * series_ratio(&shifted, alpha, g / alpha, chi.powf(1.0 / alpha), (chi * s / a).powf(1.0 / alpha), t)?),
        p => domain(format!("no alternative form kept for {p:?}")),
    }
}

/// x ↦ x^{φ(q)} H(x): a (λφ(q), B)-harmonic function of U under the Esscher
/// measure of level φ(q) becomes (qΔ, B)-harmonic under the original one.
pub fn harmonic_transfer<H>(h: H, psi: &LevyExponent, q: f64) -> Result<impl Fn(f64) -> f64>
where
    H: Fn(f64) -> f64,
{
    let g = psi.phi(q)?;
    Ok(move |x: f64| x.powf(g) * h(x))
}
