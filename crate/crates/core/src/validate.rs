//! Cross-module identity suites. Each row names the identity it checks, the
//! observed residual and the tolerance; `Info` rows report a number without
//! judging it (alternative closed forms next to the ones implemented).

use crate::error::{Error, Result};
use crate::fpt::{laplace_fpt, laplace_fpt_alt, FptProcess, FptQuery};
use crate::gamma_transform::{apply, GammaTransformSpec};
use crate::levy::LevyExponent;
use crate::series::{c_theta, coeff, NFunction, SeriesSpec, Truncation};
use crate::simulator::{estimate_fpt_laplace, PathConfig, Scheme};
use crate::special::{gamma, ln_gamma};
use crate::special_ref::{bessel_i, kummer_phi, pochhammer_ml, tricomi_parts};
use crate::stable_wh::{psi_plus, psi_minus, StableParams};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use std::fmt;
use std::str::FromStr;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Suite {
    Bessel,
    Kummer,
    Tricomi,
    MittagLeffler,
    GammaTransform,
    WienerHopf,
    Fpt,
    Simulation,
    All,
}

impl Suite {
    pub const NAMES: [&'static str; 9] =
        ["bessel", "kummer", "tricomi", "mittag_leffler", "gamma_transform", "wiener_hopf", "fpt", "simulation", "all"];

    fn name(self) -> &'static str {
        Self::NAMES[self as usize]
    }
}

impl FromStr for Suite {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        use Suite::*;
        let all = [Bessel, Kummer, Tricomi, MittagLeffler, GammaTransform, WienerHopf, Fpt, Simulation, All];
        let key = s.replace('-', "_");
        all.into_iter()
            .find(|v| v.name() == key)
            .ok_or_else(|| Error::Config(format!("unknown suite `{s}`; expected one of {}", Self::NAMES.join(", "))))
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Status {
    Pass,
    Fail,
    Info,
}

#[derive(Debug, Clone, Serialize)]
pub struct CheckRow {
    pub suite: Suite,
    pub identity: String,
    pub parameters: String,
    pub observed: f64,
    pub tolerance: f64,
    pub status: Status,
}

impl CheckRow {
    fn check(suite: Suite, identity: &str, parameters: String, observed: f64, tolerance: f64) -> Self {
        let status = if observed <= tolerance { Status::Pass } else { Status::Fail };
        CheckRow { suite, identity: identity.into(), parameters, observed, tolerance, status }
    }

    fn info(suite: Suite, identity: &str, parameters: String, observed: f64) -> Self {
        CheckRow { suite, identity: identity.into(), parameters, observed, tolerance: f64::NAN, status: Status::Info }
    }

    /// A check whose computation itself failed.
    fn broken(suite: Suite, identity: &str, parameters: String, tolerance: f64, err: &Error) -> Self {
        CheckRow { suite, identity: format!("{identity} [{err}]"), parameters, observed: f64::NAN, tolerance, status: Status::Fail }
    }
}

#[derive(Debug, Clone)]
pub struct SuiteOptions {
    pub seed: u64,
    pub paths: usize,
    /// ν for the Brownian suites, ψ(u) = u²/2 − νu.
    pub nu: Vec<f64>,
}

impl Default for SuiteOptions {
    fn default() -> Self {
        SuiteOptions { seed: 1, paths: 20_000, nu: vec![0.1, 0.25, 0.4] }
    }
}

pub const X_GRID: [f64; 9] = [0.0, 0.25, 0.5, 1.0, 2.0, 3.5, 5.0, 7.5, 10.0];
pub const Q_GRID: [f64; 4] = [0.2, 0.7, 1.5, 4.0];

fn brownian(nu: f64) -> Result<LevyExponent> {
    LevyExponent::brownian(-nu, 1.0)
}

fn rel(a: f64, b: f64) -> f64 {
    if a == b {
        0.0
    } else {
        (a - b).abs() / b.abs()
    }
}

/// Worst residual over a grid, or the first error.
fn worst(mut it: impl Iterator<Item = Result<f64>>) -> Result<f64> {
    it.try_fold(0.0f64, |m, r| Ok(m.max(r?)))
}

fn row(suite: Suite, identity: &str, parameters: String, tol: f64, r: Result<f64>) -> CheckRow {
    match r {
        Ok(v) => CheckRow::check(suite, identity, parameters, v, tol),
        Err(e) => CheckRow::broken(suite, identity, parameters, tol, &e),
    }
}

fn bessel_suite(nus: &[f64]) -> Vec<CheckRow> {
    let s = Suite::Bessel;
    nus.iter()
        .map(|&nu| {
            let r = (|| {
                let spec = SeriesSpec::new(2.0, brownian(nu)?, None, Truncation::default())?;
                worst(X_GRID.iter().map(|&x| {
                    let lhs = spec.eval_real(x * x)?.value;
                    let rhs = if x == 0.0 {
                        1.0
                    } else {
                        gamma(1.0 - nu) * (x / 2f64.sqrt()).powf(nu) * bessel_i(-nu, 2f64.sqrt() * x)?
                    };
                    Ok(rel(lhs, rhs))
                }))
            })();
            row(s, "I_{2,psi}(x^2) = Gamma(1-nu) (x/sqrt2)^nu I_{-nu}(sqrt2 x)", format!("nu={nu}, x in [0,10]"), 1e-9, r)
        })
        .collect()
}

fn kummer_suite(nus: &[f64]) -> Vec<CheckRow> {
    let s = Suite::Kummer;
    nus.iter()
        .map(|&nu| {
            let r = (|| {
                let base = SeriesSpec::new(2.0, brownian(nu)?, None, Truncation::default())?;
                let mut m = 0.0f64;
                for &q in &Q_GRID {
                    let spec = base.with_q(Some(q))?;
                    for &x in &X_GRID {
                        m = m.max(rel(spec.eval_real(x * x)?.value, kummer_phi(q, 1.0 - nu, x * x / 2.0)?));
                    }
                }
                Ok(m)
            })();
            row(s, "I_{2,psi}(q; x^2) = Phi(q, 1-nu, x^2/2)", format!("nu={nu}, q in {Q_GRID:?}, x in [0,10]"), 1e-9, r)
        })
        .collect()
}

fn tricomi_suite(nus: &[f64]) -> Vec<CheckRow> {
    let s = Suite::Tricomi;
    let mut rows = Vec::new();
    for &nu in nus {
        let corrected = 2f64.powf(-nu) * gamma(1.0 - nu) / gamma(1.0 + nu);
        let c = brownian(nu).and_then(|p| c_theta(&p, 2.0));
        rows.push(row(
            s,
            "C_{2nu} = 2^{-nu} Gamma(1-nu)/Gamma(1+nu)",
            format!("nu={nu}"),
            1e-9,
            c.clone().map(|v| rel(v, corrected)),
        ));
        if let Ok(v) = c {
            rows.push(CheckRow::info(s, "C_{2nu} against -Gamma(-nu)/Gamma(nu) in the alternative form (relative gap)", format!("nu={nu}"), rel(v, -gamma(-nu) / gamma(nu))));
        }
        let r = (|| {
            let n = NFunction::new(&brownian(nu)?, 2.0, Truncation::default())?;
            let mut m = 0.0f64;
            for &q in &Q_GRID[..3] {
                let scale = gamma(q + nu) / gamma(nu);
                for &x in &X_GRID {
                    let terms = n.terms(q, x)?;
                    let rhs = if x == 0.0 {
                        1.0
                    } else {
                        let (a, b) = tricomi_parts(q, 1.0 - nu, x * x / 2.0)?;
                        scale * (a + b)
                    };
                    // both sides are differences of terms of size e^{x^2/2}
                    let size = terms.regular.abs() + terms.singular.abs();
                    m = m.max((terms.value() - rhs).abs() / size);
                }
            }
            Ok(m)
        })();
        rows.push(row(
            s,
            "N(q; x^2) = Gamma(q+nu)/Gamma(nu) Lambda(q, 1-nu, x^2/2), residual over term size",
            format!("nu={nu}, q in {:?}, x in [0,10]", &Q_GRID[..3]),
            1e-9,
            r,
        ));
    }
    rows
}

/// α^n Γ(α−1)/Γ(α(n+1)−1).
fn pochhammer_coeff_closed(alpha: f64, n: usize) -> f64 {
    (n as f64 * alpha.ln() + ln_gamma(alpha - 1.0) - ln_gamma(alpha * (n as f64 + 1.0) - 1.0)).exp()
}

fn mittag_leffler_suite() -> Vec<CheckRow> {
    let s = Suite::MittagLeffler;
    let mut rows = Vec::new();
    for alpha in [1.25, 1.5, 1.75] {
        let psi = match LevyExponent::pochhammer(alpha, 0.0) {
            Ok(p) => p,
            Err(e) => {
                rows.push(CheckRow::broken(s, "Pochhammer exponent", format!("alpha={alpha}"), 0.0, &e));
                continue;
            }
        };
        let r = worst((0..=40).map(|n| Ok(rel(coeff(&psi, alpha, n)?, pochhammer_coeff_closed(alpha, n)))));
        rows.push(row(s, "a_n = alpha^n Gamma(alpha-1)/Gamma(alpha(n+1)-1)", format!("alpha={alpha}, gamma=0, n<=40"), 1e-12, r));
        let r = (|| {
            let base = SeriesSpec::new(alpha, psi.clone(), None, Truncation::default())?;
            let mut m = 0.0f64;
            // the series grows like exp((αz)^{1/(α−1)}), so z stops below overflow
            let z_max = (200.0f64.powf(alpha - 1.0) / alpha).min(5.0);
            for q in [0.5, 1.0, 2.0] {
                let spec = base.with_q(Some(q))?;
                for z in [0.0, 0.1, 0.25, 0.5, 1.0].map(|t| t * z_max) {
                    let rhs = gamma(alpha - 1.0) * pochhammer_ml(alpha, alpha - 1.0, q, alpha * z)?;
                    m = m.max(rel(spec.eval_real(z)?.value, rhs));
                }
            }
            Ok(m)
        })();
        rows.push(row(
            s,
            "I(q; z) = Gamma(alpha-1) sum (q)_n (alpha z)^n / Gamma(alpha n + alpha - 1)",
            format!("alpha={alpha}, q in [0.5,1,2], z in [0,{:.3}]", (200.0f64.powf(alpha - 1.0) / alpha).min(5.0)),
            1e-10,
            r,
        ));
        let c = c_theta(&psi, alpha);
        let corrected = alpha.powf(1.0 / alpha) / (alpha - 1.0);
        rows.push(row(s, "C_{1/alpha} = alpha^{1/alpha}/(alpha-1)", format!("alpha={alpha}"), 1e-6, c.clone().map(|v| rel(v, corrected))));
        if let Ok(v) = c {
            rows.push(CheckRow::info(s, "C_{1/alpha} against alpha/(alpha-1) in the alternative form (relative gap)", format!("alpha={alpha}"), rel(v, alpha / (alpha - 1.0))));
        }
    }
    rows
}

/// Series against quadrature for `n` random (q, x), Brownian ν = 0.25, α = 2, λ = 1.
pub fn gamma_transform_pairs(seed: u64, n: usize) -> Result<f64> {
    let (alpha, chi) = (2.0, 2.0);
    let base = SeriesSpec::new(alpha, brownian(0.25)?, None, Truncation::default())?;
    let f = |y: f64| base.eval_real(y * y).map(|v| v.value).unwrap_or(f64::NAN);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut m = 0.0f64;
    for _ in 0..n {
        let q = 0.1 + 4.9 * rng.random::<f64>();
        let x = 0.1 + 2.9 * rng.random::<f64>();
        let spec = GammaTransformSpec::new(q, chi, alpha)?;
        let quad = apply(&spec, f, x)?;
        let series = spec.prefactor() * base.with_q(Some(q / chi))?.eval_real(chi * x.powf(alpha))?.value;
        m = m.max(rel(quad, series));
    }
    Ok(m)
}

fn gamma_transform_suite(seed: u64) -> Vec<CheckRow> {
    vec![row(
        Suite::GammaTransform,
        "chi^{q/chi} E[I((chi G)^{1/alpha} x)] = chi^{q/chi} I(q/chi; chi x^alpha), G ~ Gamma(q/chi)",
        format!("nu=0.25, alpha=2, lambda=1, 20 random (q,x), seed={seed}"),
        1e-7,
        gamma_transform_pairs(seed, 20),
    )]
}

/// Stable classes (α, k, l) of the Wiener–Hopf suite.
pub const STABLE_CLASSES: [(f64, i64, i64); 5] = [(1.5, 0, 1), (1.5, 1, 2), (4.0 / 3.0, 1, 2), (1.6, 2, 4), (1.6, 0, 1)];

/// Worst relative residual of Ψ⁻Ψ⁺ = (1 − Ψ)^{−1} at 20 points iu.
pub fn factorization_residual(p: &StableParams) -> Result<f64> {
    worst((0..20).map(|j| {
        let u = if j % 2 == 0 { 0.05 + 0.37 * j as f64 } else { -(0.11 + 0.29 * j as f64) };
        let d = Complex64::new(0.0, u);
        let lhs = psi_minus(p, d)? * psi_plus(p, d)?;
        let rhs = 1.0 / (1.0 - p.char_exponent_imag_axis(u));
        Ok((lhs - rhs).norm() / rhs.norm())
    }))
}

/// Least-squares slope of ln|Ψ⁺(−x^{1/α})| against ln x at 21 log-spaced x in [1e2, 1e4].
pub fn asymptotic_slope(p: &StableParams) -> Result<f64> {
    let pts: Vec<(f64, f64)> = (0..=20)
        .map(|i| {
            let lx = (2.0 + 2.0 * i as f64 / 20.0) * std::f64::consts::LN_10;
            let z = Complex64::new(-(lx / p.alpha).exp(), 0.0);
            Ok((lx, psi_plus(p, z)?.norm().ln()))
        })
        .collect::<Result<_>>()?;
    let n = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / n;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / n;
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
    Ok(sxy / sxx)
}

fn wiener_hopf_suite() -> Vec<CheckRow> {
    let s = Suite::WienerHopf;
    let mut rows = Vec::new();
    for (alpha, k, l) in STABLE_CLASSES {
        let label = format!("alpha={alpha:.4}, k={k}, l={l}");
        let p = match StableParams::from_class(alpha, k, l) {
            Ok(p) => p,
            Err(e) => {
                rows.push(CheckRow::broken(s, "class parameters", label, 0.0, &e));
                continue;
            }
        };
        rows.push(row(s, "Psi^-(iu) Psi^+(iu) = 1/(1 - Psi(iu)), 20 points", label.clone(), 1e-10, factorization_residual(&p)));
        rows.push(row(
            s,
            "log-log slope of |Psi^+(-x^{1/alpha})| on [1e2,1e4] = -rho (relative)",
            format!("{label}, rho={:.4}", p.rho),
            0.02,
            asymptotic_slope(&p).map(|m| rel(m, -p.rho)),
        ));
        let x: f64 = 1e4;
        if let Ok(v) = psi_plus(&p, Complex64::new(-x.powf(1.0 / p.alpha), 0.0)) {
            rows.push(CheckRow::info(s, "x^rho |Psi^+(-x^{1/alpha})| - 1 at x = 1e4", label, v.norm() * x.powf(p.rho) - 1.0));
        }
    }
    rows
}

fn fpt_suite() -> Vec<CheckRow> {
    let s = Suite::Fpt;
    let nu = 0.25;
    let (alpha, lambda, chi) = (2.0, 1.0, 2.0);
    let mut rows = Vec::new();
    let psi = match brownian(nu) {
        Ok(p) => p,
        Err(e) => return vec![CheckRow::broken(s, "Brownian exponent", format!("nu={nu}"), 0.0, &e)],
    };
    let lt = |p: FptProcess, q: f64, x: f64, a: f64| laplace_fpt(&FptQuery::new(p, psi.clone(), alpha, lambda, q, x, a)?);
    let procs = [FptProcess::U, FptProcess::XMovingBoundary, FptProcess::UDeltaClock, FptProcess::Z, FptProcess::Yhat];
    rows.push(row(s, "transform = 1 when start = barrier", "all processes, q=0.7, x=a=0.8".into(), 1e-14, worst(procs.iter().map(|&p| Ok((lt(p, 0.7, 0.8, 0.8)? - 1.0).abs())))));
    for (q, x, a) in [(0.7, 0.5, 1.0), (1.0, 0.8, 1.2), (2.0, 0.3, 0.8)] {
        let r = (|| {
            let want = kummer_phi(q / chi, 1.0 - nu, chi * x * x / 2.0)? / kummer_phi(q / chi, 1.0 - nu, chi * a * a / 2.0)?;
            Ok(rel(lt(FptProcess::U, q, x, a)?, want))
        })();
        rows.push(row(s, "E_x e^{-q T_a^U} = Phi(q/chi,1-nu,chi x^2/2)/Phi(q/chi,1-nu,chi a^2/2)", format!("nu={nu}, q={q}, x={x}, a={a}"), 1e-9, r));
    }
    for (q, x) in [(0.7, 0.5), (0.2, 1.0), (3.0, 0.3)] {
        let r = (|| {
            let qp = q / chi;
            let (t1, t2) = tricomi_parts(qp, 1.0 - nu, chi * x * x / 2.0)?;
            Ok(rel(lt(FptProcess::UToZero, q, x, 0.0)?, (t1 + t2) * gamma(qp + nu) / gamma(nu)))
        })();
        rows.push(row(s, "E_x e^{-q T_0^U} = N(q/chi; chi x^alpha) = Gamma(q'+nu)/Gamma(nu) Lambda(q',1-nu,chi x^2/2)", format!("nu={nu}, q={q}, x={x}"), 1e-9, r));
    }
    let (z0, a, q) = (0.8f64, 1.5, 0.7);
    let r = (|| Ok((lt(FptProcess::Z, q, z0, a)? - lt(FptProcess::UDeltaClock, q, 1.0, (a / z0).sqrt())?).abs()))();
    rows.push(row(s, "T_a^Z from z0 = Delta-time of U from 1 to (a/z0)^{1/alpha}", format!("q={q}, z0={z0}, a={a}"), 1e-12, r));
    let r = (|| Ok((lt(FptProcess::Z, q, z0, a)? - lt(FptProcess::Yhat, q, 1.0 / z0, 1.0 / a)?).abs()))();
    rows.push(row(s, "Yhat = 1/Z: passage of Yhat from 1/z0 below 1/a = passage of Z", format!("q={q}, z0={z0}, a={a}"), 1e-12, r));
    for (p, start, bar) in [(FptProcess::Z, z0, a), (FptProcess::Yhat, 1.0 / z0, 1.0 / a)] {
        let r = FptQuery::new(p, psi.clone(), alpha, lambda, q, start, bar)
            .and_then(|qu| Ok(laplace_fpt_alt(&qu)? - laplace_fpt(&qu)?));
        if let Ok(d) = r {
            rows.push(CheckRow::info(s, &format!("{p:?} alternative form minus implemented"), format!("q={q}, start={start:.4}, barrier={bar:.4}"), d));
        }
    }
    rows
}

/// |estimate − formula| / SE for one passage configuration.
pub fn passage_z_score(cfg: &PathConfig, process: FptProcess, q: f64, start: f64, barrier: f64, paths: usize, formula: f64) -> Result<f64> {
    let e = estimate_fpt_laplace(cfg, process, start, barrier, q, paths)?;
    Ok((e.estimate - formula).abs() / e.std_error)
}

fn simulation_suite(opts: &SuiteOptions) -> Vec<CheckRow> {
    let s = Suite::Simulation;
    let mut rows = Vec::new();
    let (nu, q, seed, n) = (0.25, 0.7, opts.seed, opts.paths);
    let label = |extra: &str| format!("{extra}, paths={n}, seed={seed}");
    let run = |psi: &LevyExponent, alpha: f64, scheme: Scheme, dt: f64, horizon: f64, p: FptProcess, q: f64, x: f64, a: f64| -> Result<f64> {
        let cfg = PathConfig::new(psi.clone(), alpha, 1.0, dt, horizon, seed, scheme)?;
        let want = laplace_fpt(&FptQuery::new(p, psi.clone(), alpha, 1.0, q, x, a)?)?;
        passage_z_score(&cfg, p, q, x, a, n, want)
    };
    let bm = brownian(nu);
    let bm_up = LevyExponent::brownian(0.2, 1.0);
    match (bm, bm_up) {
        (Ok(bm), Ok(bm_up)) => {
            for p in [FptProcess::U, FptProcess::XMovingBoundary] {
                rows.push(row(s, &format!("{p:?} passage: Monte Carlo (exact Bessel) against the Kummer ratio, |z|"), label("nu=0.25, q=0.7, x=0.5, a=1, dt=0.01"), 3.0, run(&bm, 2.0, Scheme::ExactBessel, 0.01, 20.0, p, q, 0.5, 1.0)));
            }
            let grid = [(FptProcess::UDeltaClock, &bm, 0.5, 1.0), (FptProcess::Z, &bm, 0.8, 1.5), (FptProcess::Yhat, &bm_up, 1.5, 0.8)];
            for (p, psi, x, a) in grid {
                rows.push(row(s, &format!("{p:?} passage: Monte Carlo (Euler) against the implemented transform, |z|"), label(&format!("b={:.2}, q=0.7, start={x}, barrier={a}, dt=0.01", psi.mean().unwrap_or(f64::NAN))), 3.0, run(psi, 2.0, Scheme::Euler, 0.01, 40.0, p, q, x, a)));
            }
            for (p, psi, x, a) in [(FptProcess::Z, &bm, 0.8, 1.5), (FptProcess::Yhat, &bm_up, 1.5, 0.8)] {
                let r = (|| {
                    let cfg = PathConfig::new(psi.clone(), 2.0, 1.0, 0.01, 40.0, seed, Scheme::Euler)?;
                    let alt = laplace_fpt_alt(&FptQuery::new(p, psi.clone(), 2.0, 1.0, q, x, a)?)?;
                    passage_z_score(&cfg, p, q, x, a, n, alt)
                })();
                if let Ok(z) = r {
                    rows.push(CheckRow::info(s, &format!("{p:?} alternative form against Monte Carlo, |z|"), label(&format!("q=0.7, start={x}, barrier={a}")), z));
                }
            }
        }
        (Err(e), _) | (_, Err(e)) => rows.push(CheckRow::broken(s, "Brownian exponent", String::new(), 0.0, &e)),
    }
    match LevyExponent::pochhammer(1.5, 0.0) {
        Ok(psi) => rows.push(row(
            s,
            "T_0 passage: killed-path Monte Carlo against N(q/chi; chi x^alpha), |z|",
            label("Pochhammer alpha=1.5 gamma=0, q=0.5, x=0.5, dt=0.005, cutoff=0.02"),
            3.0,
            run(&psi, 1.5, Scheme::JumpAdapted { jump_cutoff: 0.02 }, 0.005, 50.0, FptProcess::UToZero, 0.5, 0.5, 0.0),
        )),
        Err(e) => rows.push(CheckRow::broken(s, "Pochhammer exponent", String::new(), 0.0, &e)),
    }
    rows
}

/// Runs one suite (or all of them).
pub fn run_suite(suite: Suite, opts: &SuiteOptions) -> Vec<CheckRow> {
    match suite {
        Suite::Bessel => bessel_suite(&opts.nu),
        Suite::Kummer => kummer_suite(&opts.nu),
        Suite::Tricomi => tricomi_suite(&opts.nu),
        Suite::MittagLeffler => mittag_leffler_suite(),
        Suite::GammaTransform => gamma_transform_suite(opts.seed),
        Suite::WienerHopf => wiener_hopf_suite(),
        Suite::Fpt => fpt_suite(),
        Suite::Simulation => simulation_suite(opts),
        Suite::All => [
            Suite::Bessel,
            Suite::Kummer,
            Suite::Tricomi,
            Suite::MittagLeffler,
            Suite::GammaTransform,
            Suite::WienerHopf,
            Suite::Fpt,
            Suite::Simulation,
        ]
        .into_iter()
        .flat_map(|s| run_suite(s, opts))
        .collect(),
    }
}

pub fn failures(rows: &[CheckRow]) -> usize {
    rows.iter().filter(|r| r.status == Status::Fail).count()
}
