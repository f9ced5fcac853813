//! The Γ-transform: I(q; x) = χ^{q/χ} E[f((χ G_{q/χ})^{1/α} x)], G_a ~ Gamma(a, 1).

use crate::error::{domain, Error, Result};
use crate::quad::{integrate_to_infinity, QuadOptions};
use crate::special::rgamma;
use nalgebra::{DMatrix, SymmetricEigen};

/// Default Gauss–Laguerre order.
pub const DEFAULT_ORDER: usize = 64;
/// Below this value of q/χ the Gamma weight is too singular at 0 for Gauss–Laguerre.
pub const ADAPTIVE_THRESHOLD: f64 = 0.05;

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum RuleKind {
    /// Nodes and weights for r^a e^{−r} on (0, ∞).
    GaussLaguerre { order: usize, exponent: f64 },
    /// Adaptive Gauss–Kronrod, error relative to E|g(G)|.
    AdaptiveExp { rtol: f64, exponent: f64 },
}

/// Discretization of the Gamma(a+1) law; weights sum to 1.
#[derive(Debug, Clone)]
pub struct QuadratureRule {
    kind: RuleKind,
    nodes: Vec<f64>,
    weights: Vec<f64>,
}

/// p_n(r), p_n'(r) and Σ_{k<n} p_k(r)² for the Laguerre polynomials orthonormal
/// under r^a e^{−r}/Γ(a+1).
fn orthonormal_laguerre(n: usize, a: f64, r: f64) -> (f64, f64, f64) {
    let (mut p0, mut p1) = (0.0, 1.0);
    let (mut d0, mut d1) = (0.0, 0.0);
    let mut sum = 0.0;
    let mut b_prev = 0.0;
    for k in 0..n {
        sum += p1 * p1;
        let kf = k as f64;
        let b = ((kf + 1.0) * (kf + 1.0 + a)).sqrt();
        let c = 2.0 * kf + 1.0 + a;
        let p2 = ((r - c) * p1 - b_prev * p0) / b;
        let d2 = ((r - c) * d1 + p1 - b_prev * d0) / b;
        (p0, p1, d0, d1, b_prev) = (p1, p2, d1, d2, b);
    }
    (p1, d1, sum)
}

impl QuadratureRule {
    /// Golub–Welsch on the generalized Laguerre Jacobi matrix, weights normalized by Γ(a+1).
    pub fn gauss_laguerre(order: usize, a: f64) -> Result<Self> {
        if order < 2 || !(a > -1.0) {
            return domain(format!("Gauss-Laguerre needs order >= 2 and a > -1, got {order}, {a}"));
        }
        let mut j = DMatrix::<f64>::zeros(order, order);
        for i in 0..order {
            let k = i as f64;
            j[(i, i)] = 2.0 * k + 1.0 + a;
            if i + 1 < order {
                let off = ((k + 1.0) * (k + 1.0 + a)).sqrt();
                j[(i, i + 1)] = off;
                j[(i + 1, i)] = off;
            }
        }
        let eig = SymmetricEigen::new(j);
        let mut nodes: Vec<f64> = eig.eigenvalues.iter().copied().collect();
        nodes.sort_by(f64::total_cmp);
        // Eigenvector weights carry absolute noise near 1e−17, far above the true
        // weights of the outer nodes; 1/Σ p_k(r)² keeps them to relative accuracy.
        let mut weights = Vec::with_capacity(order);
        for r in nodes.iter_mut() {
            for _ in 0..3 {
                let (pn, dpn, _) = orthonormal_laguerre(order, a, *r);
                *r -= pn / dpn;
            }
            weights.push(1.0 / orthonormal_laguerre(order, a, *r).2);
        }
        let total: f64 = weights.iter().sum();
        weights.iter_mut().for_each(|w| *w /= total);
        let rule = QuadratureRule { kind: RuleKind::GaussLaguerre { order, exponent: a }, nodes, weights };
        rule.check_moments(a)?;
        Ok(rule)
    }

    pub fn adaptive_exp(rtol: f64, a: f64) -> Result<Self> {
        if !(rtol > 0.0) || !(a > -1.0) {
            return domain(format!("adaptive rule needs rtol > 0 and a > -1, got {rtol}, {a}"));
        }
        Ok(QuadratureRule { kind: RuleKind::AdaptiveExp { rtol, exponent: a }, nodes: vec![], weights: vec![] })
    }

    /// Σ w r^k = (a+1)_k for k ≤ 6.
    fn check_moments(&self, a: f64) -> Result<()> {
        if self.nodes.iter().any(|r| !(*r > 0.0)) || self.nodes.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::QuadratureFailure("Gauss-Laguerre nodes not positive and increasing".into()));
        }
        let mut want = 1.0;
        for k in 0..=6usize.min(2 * self.nodes.len() - 1) {
            if k > 0 {
                want *= a + k as f64;
            }
            let got: f64 = self.nodes.iter().zip(&self.weights).map(|(r, w)| w * r.powi(k as i32)).sum();
            if ((got - want) / want).abs() > 1e-10 {
                return Err(Error::QuadratureFailure(format!("moment {k}: {got} vs {want}")));
            }
        }
        Ok(())
    }

    pub fn kind(&self) -> RuleKind {
        self.kind
    }
    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }
    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    /// E[g(G)] for G ~ Gamma(a+1).
    pub fn expectation(&self, mut g: impl FnMut(f64) -> f64) -> Result<f64> {
        match self.kind {
            RuleKind::GaussLaguerre { .. } => {
                let mut s = 0.0;
                for (r, w) in self.nodes.iter().zip(&self.weights) {
                    let v = g(*r);
                    if !v.is_finite() {
                        return Err(Error::NonFinite { at: *r });
                    }
                    s += w * v;
                }
                Ok(s)
            }
            RuleKind::AdaptiveExp { rtol, exponent } => {
                let p = exponent + 1.0;
                // in r itself for p ≥ 1; otherwise t = r^p removes the r^{p−1} singularity at 0
                let direct = p >= 1.0;
                let norm = if direct { rgamma(p) } else { rgamma(p + 1.0) };
                let raw = |h: &mut dyn FnMut(f64) -> f64, opts: QuadOptions| -> Result<f64> {
                    let integrand = |s: f64| {
                        let (r, w) = if direct { (s, (exponent * s.ln() - s).exp()) } else { (s.powf(1.0 / p), (-s.powf(1.0 / p)).exp()) };
                        if w == 0.0 || r == 0.0 {
                            0.0
                        } else {
                            h(r) * w
                        }
                    };
                    Ok(integrate_to_infinity(integrand, 0.0, opts)?.value)
                };
                // the tolerance is relative to E|g(G)|, which stays meaningful when E[g(G)] cancels
                let loose = QuadOptions { abs_tol: 1e-300, rel_tol: 1e-3, max_intervals: 4000 };
                let mass = raw(&mut |r| g(r).abs(), loose)?;
                let opts = QuadOptions { abs_tol: (rtol * mass).max(1e-300), rel_tol: rtol, max_intervals: 4000 };
                Ok(raw(&mut g, opts)? * norm)
            }
        }
    }
}

/// Parameters of one Γ-transform.
#[derive(Debug, Clone)]
pub struct GammaTransformSpec {
    pub q: f64,
    pub chi: f64,
    pub alpha: f64,
    pub rule: QuadratureRule,
}

impl GammaTransformSpec {
    /// Default rule: Gauss–Laguerre of order 64 with exponent q/χ − 1, adaptive when q/χ < 0.05.
    pub fn new(q: f64, chi: f64, alpha: f64) -> Result<Self> {
        Self::check(q, chi, alpha)?;
        let a = q / chi;
        let rule = if a < ADAPTIVE_THRESHOLD {
            QuadratureRule::adaptive_exp(1e-10, a - 1.0)?
        } else {
            QuadratureRule::gauss_laguerre(DEFAULT_ORDER, a - 1.0)?
        };
        Ok(GammaTransformSpec { q, chi, alpha, rule })
    }

    pub fn with_rule(q: f64, chi: f64, alpha: f64, rule: QuadratureRule) -> Result<Self> {
        Self::check(q, chi, alpha)?;
        let exponent = match rule.kind {
            RuleKind::GaussLaguerre { exponent, .. } | RuleKind::AdaptiveExp { exponent, .. } => exponent,
        };
        if (exponent - (q / chi - 1.0)).abs() > 1e-14 * (q / chi).max(1.0) {
            return domain(format!("rule exponent {exponent} does not match q/chi - 1 = {}", q / chi - 1.0));
        }
        Ok(GammaTransformSpec { q, chi, alpha, rule })
    }

    fn check(q: f64, chi: f64, alpha: f64) -> Result<()> {
        if !(q > 0.0 && chi > 0.0 && alpha > 0.0) || !(q.is_finite() && chi.is_finite() && alpha.is_finite()) {
            return domain(format!("need q, chi, alpha > 0, got {q}, {chi}, {alpha}"));
        }
        Ok(())
    }

    /// χ^{q/χ}.
    pub fn prefactor(&self) -> f64 {
        self.chi.powf(self.q / self.chi)
    }
}

/// I(q; x) = χ^{q/χ} (1/Γ(q/χ)) ∫ f((χr)^{1/α} x) e^{−r} r^{q/χ−1} dr.
///
/// The default Laguerre rule is spectrally accurate when r ↦ f((χr)^{1/α}x) is
/// entire of moderate type, as for power series in y^α. For f with a kink or
/// fast decay in r (e^{−y} at α = 2 behaves like e^{−c√r}) use
/// [`QuadratureRule::adaptive_exp`].
pub fn apply(spec: &GammaTransformSpec, f: impl Fn(f64) -> f64, x: f64) -> Result<f64> {
    let inv_a = 1.0 / spec.alpha;
    let chi = spec.chi;
    let e = spec.rule.expectation(|r| f((chi * r).powf(inv_a) * x))?;
    Ok(spec.prefactor() * e)
}

/// (1+χt)^{−q/χ} times the transform of y ↦ f((1+χt)^{−1/α} y).
pub fn time_space_invariant(spec: &GammaTransformSpec, f: impl Fn(f64) -> f64, t: f64, x: f64) -> Result<f64> {
    if !(t >= 0.0) {
        return domain(format!("time must be non-negative, got {t}"));
    }
    if t == 0.0 {
        return apply(spec, f, x);
    }
    let s = 1.0 + spec.chi * t;
    let d = s.powf(-1.0 / spec.alpha);
    Ok(s.powf(-spec.q / spec.chi) * apply(spec, |y| f(d * y), x)?)
}
