//! Passage-time sampling and Monte Carlo estimators.

use super::paths::{ou_point, WalkPoint, XiWalk};
use super::stepper::Besq;
use super::{PathConfig, Scheme, KILL_FLOOR, MIN_HITS};
use crate::error::{domain, Error, Result};
use rand::Rng;
use rand_distr::{Distribution, InverseGaussian, StandardNormal};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::io::Write;

/// Which passage time is sampled.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FptProcess {
    /// T_a^U, U started at x ≤ a, on the U clock.
    U,
    /// First time X_u = a(1+χu)^{1/α}, on the X clock.
    XMovingBoundary,
    /// Δ at T_a^U, zero weight when U reaches 0 first.
    UDeltaClock,
    /// First passage of Z above a from Z_0 = start, with β = αλ/start.
    Z,
    /// First passage of Ŷ below a from Ŷ_0 = start, with β = αλ·start.
    Yhat,
    /// T_0^U for b < 0.
    UToZero,
}

impl FptProcess {
    fn stream_tag(self) -> u64 {
        (self as u64 + 1) << 48
    }
}

/// One sampled passage.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct FptSample {
    pub hit_time: f64,
    /// Always 0 here: spectrally negative paths cross upward continuously and
    /// the downward passages sampled (Ŷ, U to 0) are continuous as well.
    pub overshoot: f64,
    /// Absorbed before the barrier, or the horizon was reached first.
    pub killed: bool,
}

impl FptSample {
    fn hit(t: f64) -> Self {
        FptSample { hit_time: t, overshoot: 0.0, killed: false }
    }
    fn killed(t: f64) -> Self {
        FptSample { hit_time: t, overshoot: 0.0, killed: true }
    }
}

/// A Monte Carlo mean with its standard error.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Estimate {
    pub estimate: f64,
    pub std_error: f64,
    pub hits: usize,
    pub paths: usize,
}

impl Estimate {
    /// Sample mean and standard error, reduced in index order.
    pub fn from_values(values: &[f64]) -> Self {
        let n = values.len() as f64;
        let mean = values.iter().sum::<f64>() / n;
        let var = values.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>() / (n - 1.0).max(1.0);
        Estimate { estimate: mean, std_error: (var / n).sqrt(), hits: values.len(), paths: values.len() }
    }
}

/// Crossing probability of a Brownian bridge with variance rate `var` over a
/// step of length h, from gaps d0, d1 > 0 below a linear barrier.
fn bridge_probability(d0: f64, d1: f64, var: f64, h: f64) -> f64 {
    (-2.0 * d0 * d1 / (var * h)).exp()
}

/// Offset in [0, h] of the first crossing of a Brownian bridge that starts d0 > 0
/// below a linear barrier and ends with gap d1 (negative when the endpoint is
/// beyond), given that it crosses. With s = ht/(h−t) the bridge becomes a
/// Brownian motion with drift |d1|/h hitting d0, whose hitting time is inverse
/// Gaussian; t = hs/(h+s).
fn bridge_hit_offset<R: Rng + ?Sized>(rng: &mut R, d0: f64, d1: f64, var: f64, h: f64) -> f64 {
    let shape = d0 * d0 / var;
    let s = if d1 == 0.0 {
        let z: f64 = StandardNormal.sample(rng);
        shape / (z * z)
    } else {
        match InverseGaussian::new(d0 * h / d1.abs(), shape) {
            Ok(ig) => ig.sample(rng),
            Err(_) => 0.5 * h,
        }
    };
    if s.is_finite() {
        h * s / (h + s)
    } else {
        h
    }
}

/// The X-time (e^{χt} − 1)/χ of U-time t.
fn x_time(chi: f64, t: f64) -> f64 {
    if chi > 0.0 {
        (chi * t).exp_m1() / chi
    } else {
        t
    }
}

/// First passage of a log-level process driven by the ξ walk. `level` maps a
/// point of the walk to (clock, log value) or `None` once the path is absorbed.
/// Each Gaussian stretch between knots gets the bridge test when `log_var`
/// (the variance rate of the log level per unit ξ-time) is given; jumps of ξ
/// are downward and move the level away from the barrier, so they never cross.
fn walk_passage(
    walk: &mut XiWalk,
    upward: bool,
    log_barrier: f64,
    horizon: f64,
    log_var: Option<f64>,
    level: impl Fn(&WalkPoint) -> Option<(f64, f64)>,
) -> Result<FptSample> {
    let gap = |l: f64| if upward { log_barrier - l } else { l - log_barrier };
    let start = walk.point();
    let (mut c0, mut l0) = level(&start).expect("start is alive");
    let mut s0 = start.time;
    if gap(l0) <= 0.0 {
        return Ok(FptSample::hit(0.0));
    }
    loop {
        walk.advance()?;
        for i in 0..walk.knots.len() {
            let p = walk.knots[i];
            let Some((c1, l1)) = level(&p) else {
                return Ok(FptSample::killed(c0));
            };
            let (g0, g1) = (gap(l0), gap(l1));
            let h = p.time - s0;
            if h > 0.0 {
                let crossed = g1 <= 0.0
                    || log_var.is_some_and(|var| walk.aux.random::<f64>() < bridge_probability(g0, g1, var, h));
                if crossed {
                    let f = match log_var {
                        Some(var) => bridge_hit_offset(&mut walk.aux, g0, g1, var, h) / h,
                        None => g0 / (g0 - g1),
                    };
                    return Ok(FptSample::hit(c0 + f * (c1 - c0)));
                }
            } else if g1 <= 0.0 {
                return Ok(FptSample::hit(c1));
            }
            (c0, l0, s0) = (c1, l1, p.time);
        }
        if c0 >= horizon {
            return Ok(FptSample::killed(c0));
        }
    }
}

/// T_a^U on a uniform U-time grid with exact transitions of U^α; with
/// `with_delta` the returned time is Δ at the passage instead.
fn exact_u_passage(cfg: &PathConfig, x: f64, a: f64, index: u64, with_delta: bool) -> Result<FptSample> {
    let besq = Besq::new(cfg.bessel_dimension())?;
    let (alpha, chi, h) = (cfg.alpha, cfg.chi(), cfg.dt);
    let tau = cfg.bessel_speed() * if chi > 0.0 { (chi * h).exp_m1() / chi } else { h };
    let shrink = (-chi * h).exp();
    let var = cfg.bessel_vol(a).powi(2);
    let mut rng = cfg.rng(index);
    if x >= a {
        return Ok(FptSample::hit(0.0));
    }
    let (mut t, mut w, mut u, mut delta) = (0.0, x.powf(alpha), x, 0.0);
    loop {
        let w1 = shrink * besq.sample(&mut rng, w, tau);
        let u1 = w1.powf(1.0 / alpha);
        let d1 = 0.5 * h * (1.0 / w + 1.0 / w1);
        if u1 >= a || rng.random::<f64>() < bridge_probability(a - u, a - u1, var, h) {
            let f = bridge_hit_offset(&mut rng, a - u, a - u1, var, h) / h;
            return Ok(FptSample::hit(if with_delta { delta + f * d1 } else { t + f * h }));
        }
        t += h;
        delta += d1;
        if t >= cfg.horizon {
            return Ok(FptSample::killed(if with_delta { delta } else { t }));
        }
        w = w1;
        u = u1;
    }
}

/// First time X_u = a(1+χu)^{1/α}, on the X-time grid u_{k+1} = u_k + h(1+χu_k)
/// with exact squared-Bessel transitions of X^α.
fn exact_x_moving_passage(cfg: &PathConfig, x: f64, a: f64, index: u64) -> Result<FptSample> {
    let besq = Besq::new(cfg.bessel_dimension())?;
    let (alpha, chi, h, c2) = (cfg.alpha, cfg.chi(), cfg.dt, cfg.bessel_speed());
    let boundary = |u: f64| a * (1.0 + chi * u).powf(1.0 / alpha);
    let mut rng = cfg.rng(index);
    if x >= a {
        return Ok(FptSample::hit(0.0));
    }
    let (mut u, mut q, mut xv) = (0.0, x.powf(alpha), x);
    loop {
        let du = h * (1.0 + chi * u);
        let q1 = besq.sample(&mut rng, q, c2 * du);
        let x1 = q1.powf(1.0 / alpha);
        let (g0, g1) = (boundary(u) - xv, boundary(u + du) - x1);
        let var = cfg.bessel_vol(0.5 * (boundary(u) + boundary(u + du))).powi(2);
        if g1 <= 0.0 || rng.random::<f64>() < bridge_probability(g0, g1, var, du) {
            return Ok(FptSample::hit(u + bridge_hit_offset(&mut rng, g0, g1, var, du)));
        }
        u += du;
        if u >= x_time(chi, cfg.horizon) {
            return Ok(FptSample::killed(u));
        }
        q = q1;
        xv = x1;
    }
}

/// T_0^U = ln(1 + χx^α V_∞)/χ from ξ run until the rest of V_∞ is negligible.
/// Relative size of the unaccumulated part of V at which U is taken to be at 0.
const ZERO_TAIL_TOL: f64 = 1e-10;

fn u_to_zero(cfg: &PathConfig, walk: &mut XiWalk, x: f64) -> Result<FptSample> {
    let b = cfg.psi().mean()?;
    if !(b < 0.0) {
        return Err(Error::MeaninglessQuery(format!("passage to 0 needs b < 0, got b = {b}")));
    }
    let (alpha, chi) = (cfg.alpha, cfg.chi());
    let to_u_time = |v: f64| {
        let s = x.powf(alpha) * v;
        if chi > 0.0 {
            (chi * s).ln_1p() / chi
        } else {
            s
        }
    };
    loop {
        walk.advance()?;
        // the remaining mass is of order e^{αξ}/(α|b|)
        let t = to_u_time(walk.v);
        if t >= cfg.horizon {
            return Ok(FptSample::killed(t));
        }
        if (alpha * walk.xi).exp() < ZERO_TAIL_TOL * alpha * b.abs() * walk.v {
            return Ok(FptSample::hit(t));
        }
    }
}

/// One passage sample for path `index`.
pub fn sample_fpt(cfg: &PathConfig, process: FptProcess, start: f64, barrier: f64, index: u64) -> Result<FptSample> {
    if !(start > 0.0) || !start.is_finite() {
        return domain(format!("start must be positive, got {start}"));
    }
    let upward = !matches!(process, FptProcess::Yhat | FptProcess::UToZero);
    if process != FptProcess::UToZero {
        if !(barrier > 0.0) || !barrier.is_finite() {
            return domain(format!("barrier must be positive, got {barrier}"));
        }
        if upward && start > barrier || !upward && start < barrier {
            return domain(format!("start {start} is on the wrong side of barrier {barrier}"));
        }
    }
    let index = index ^ process.stream_tag();
    let (alpha, chi) = (cfg.alpha, cfg.chi());
    let var = cfg.gaussian_var();
    let bridge = |scale: f64| if var > 0.0 { Some(scale * scale * var) } else { None };
    if cfg.scheme() == Scheme::ExactBessel {
        return match process {
            FptProcess::U => exact_u_passage(cfg, start, barrier, index, false),
            FptProcess::UDeltaClock => {
                if cfg.bessel_dimension() < 2.0 {
                    return Err(Error::MeaninglessQuery(
                        "the Delta clock needs a path that cannot reach 0 under exact Bessel transitions (dimension >= 2)"
                            .into(),
                    ));
                }
                exact_u_passage(cfg, start, barrier, index, true)
            }
            FptProcess::XMovingBoundary => exact_x_moving_passage(cfg, start, barrier, index),
            _ => Err(Error::Config(format!("{process:?} is sampled from the xi grid, not with exact Bessel transitions"))),
        };
    }
    let mut walk = XiWalk::new(cfg, index, false)?;
    let floor = KILL_FLOOR.ln();
    match process {
        FptProcess::U | FptProcess::XMovingBoundary | FptProcess::UDeltaClock => {
            let xa = start.powf(alpha);
            let horizon = if process == FptProcess::XMovingBoundary { x_time(chi, cfg.horizon) } else { cfg.horizon };
            walk_passage(&mut walk, true, barrier.ln(), horizon, bridge(1.0), |w| {
                let (t, u) = ou_point(cfg, start, w.xi, w.v);
                let lu = u.ln();
                if lu < floor {
                    return None;
                }
                let clock = match process {
                    FptProcess::U => t,
                    FptProcess::XMovingBoundary => xa * w.v,
                    _ => w.time,
                };
                Some((clock, lu))
            })
        }
        FptProcess::Z => {
            let x = 1.0 / start;
            let beta = chi * x;
            walk_passage(&mut walk, true, barrier.ln(), cfg.horizon, bridge(alpha), |w| {
                Some((w.time, alpha * w.xi - (x + beta * w.v).ln()))
            })
        }
        FptProcess::Yhat => {
            let beta = chi * start;
            walk_passage(&mut walk, false, barrier.ln(), cfg.horizon, bridge(alpha), |w| {
                Some((w.time, -alpha * w.xi + (start + beta * w.v).ln()))
            })
        }
        FptProcess::UToZero => u_to_zero(cfg, &mut walk, start),
    }
}

fn laplace_weight(process: FptProcess, q: f64, chi: f64, s: &FptSample) -> f64 {
    if s.killed {
        return 0.0;
    }
    match process {
        FptProcess::XMovingBoundary if chi > 0.0 => (chi * s.hit_time).ln_1p() * (-q / chi),
        _ => -q * s.hit_time,
    }
    .exp()
}

/// Samples for paths 0..n in index order.
pub fn sample_many(cfg: &PathConfig, process: FptProcess, start: f64, barrier: f64, n_paths: usize) -> Result<Vec<FptSample>> {
    (0..n_paths as u64).into_par_iter().map(|i| sample_fpt(cfg, process, start, barrier, i)).collect()
}

/// Mean of e^{−qT} (of (1+χT)^{−q/χ} for the moving boundary) with killed
/// paths contributing 0.
pub fn estimate_fpt_laplace(
    cfg: &PathConfig,
    process: FptProcess,
    start: f64,
    barrier: f64,
    q: f64,
    n_paths: usize,
) -> Result<Estimate> {
    if n_paths < 1000 {
        return domain(format!("need at least 1000 paths, got {n_paths}"));
    }
    if !(q >= 0.0) {
        return domain(format!("q must be non-negative, got {q}"));
    }
    let samples = sample_many(cfg, process, start, barrier, n_paths)?;
    laplace_from_samples(&samples, process, q, cfg.chi())
}

/// The Laplace estimate from existing samples.
pub fn laplace_from_samples(samples: &[FptSample], process: FptProcess, q: f64, chi: f64) -> Result<Estimate> {
    let hits = samples.iter().filter(|s| !s.killed).count();
    if hits < MIN_HITS {
        return Err(Error::InsufficientHits { hits, paths: samples.len(), needed: MIN_HITS });
    }
    let w: Vec<f64> = samples.iter().map(|s| laplace_weight(process, q, chi, s)).collect();
    Ok(Estimate { hits, ..Estimate::from_values(&w) })
}

/// U at U-time t for path `index`, `None` if absorbed before t.
fn sample_u_at(cfg: &PathConfig, x0: f64, t: f64, index: u64) -> Result<Option<f64>> {
    if t > cfg.horizon {
        return Err(Error::GridExhausted { reached: cfg.horizon, requested: t });
    }
    if cfg.scheme() == Scheme::ExactBessel {
        let besq = Besq::new(cfg.bessel_dimension())?;
        let chi = cfg.chi();
        let e = if chi > 0.0 { (chi * t).exp_m1() / chi } else { t };
        let mut rng = cfg.rng(index);
        let w = (-chi * t).exp() * besq.sample(&mut rng, x0.powf(cfg.alpha), cfg.bessel_speed() * e);
        return Ok(Some(w.powf(1.0 / cfg.alpha)));
    }
    let mut walk = XiWalk::new(cfg, index, false)?;
    let (mut t0, mut u0) = (0.0, x0);
    loop {
        walk.advance()?;
        let (t1, u1) = ou_point(cfg, x0, walk.xi, walk.v);
        if u1 < KILL_FLOOR {
            return Ok(None);
        }
        if t1 >= t {
            let w = (t - t0) / (t1 - t0);
            return Ok(Some(u0 + w * (u1 - u0)));
        }
        t0 = t1;
        u0 = u1;
    }
}

/// Ê[g(U_t) 1{t < T_0}] for U started at x0.
pub fn estimate_functional_u(
    cfg: &PathConfig,
    x0: f64,
    t: f64,
    n_paths: usize,
    g: impl Fn(f64) -> f64 + Sync,
) -> Result<Estimate> {
    if !(x0 > 0.0 && t >= 0.0) {
        return domain(format!("need x0 > 0 and t >= 0, got {x0}, {t}"));
    }
    let vals: Vec<Option<f64>> = (0..n_paths as u64).into_par_iter().map(|i| sample_u_at(cfg, x0, t, i)).collect::<Result<_>>()?;
    let alive = vals.iter().filter(|v| v.is_some()).count();
    let w: Vec<f64> = vals.iter().map(|v| v.map_or(0.0, &g)).collect();
    Ok(Estimate { hits: alive, ..Estimate::from_values(&w) })
}

/// X at the increasing X-times `times` for path `index`, exact squared-Bessel
/// transitions (the reflected process when 0 < δ < 2).
pub fn sample_x_at(cfg: &PathConfig, x0: f64, times: &[f64], index: u64) -> Result<Vec<f64>> {
    if cfg.scheme() != Scheme::ExactBessel {
        return Err(Error::Config("sample_x_at needs the exact Bessel scheme".into()));
    }
    if !(x0 >= 0.0) || times.windows(2).any(|w| w[1] <= w[0]) || times.first().is_some_and(|t| !(*t > 0.0)) {
        return domain("need x0 >= 0 and increasing positive times");
    }
    let besq = Besq::new(cfg.bessel_dimension())?;
    let c2 = cfg.bessel_speed();
    let mut rng = cfg.rng(index);
    let (mut q, mut prev) = (x0.powf(cfg.alpha), 0.0);
    let mut out = Vec::with_capacity(times.len());
    for &t in times {
        q = besq.sample(&mut rng, q, c2 * (t - prev));
        prev = t;
        out.push(q.powf(1.0 / cfg.alpha));
    }
    Ok(out)
}

/// Ê[g(t, X_t)] at each of `times`, all from the same paths.
pub fn estimate_time_space(
    cfg: &PathConfig,
    x0: f64,
    times: &[f64],
    n_paths: usize,
    g: impl Fn(f64, f64) -> Result<f64> + Sync,
) -> Result<Vec<Estimate>> {
    let rows: Vec<Vec<f64>> = (0..n_paths as u64)
        .into_par_iter()
        .map(|i| {
            let xs = sample_x_at(cfg, x0, times, i)?;
            times.iter().zip(xs).map(|(&t, x)| g(t, x)).collect::<Result<Vec<f64>>>()
        })
        .collect::<Result<_>>()?;
    Ok((0..times.len())
        .map(|k| Estimate::from_values(&rows.iter().map(|r| r[k]).collect::<Vec<_>>()))
        .collect())
}

/// One CSV row per path: hit_time, overshoot, killed.
pub fn write_samples_csv<W: Write>(mut out: W, samples: &[FptSample]) -> std::io::Result<()> {
    writeln!(out, "hit_time,overshoot,killed")?;
    for s in samples {
        writeln!(out, "{},{},{}", s.hit_time, s.overshoot, s.killed)?;
    }
    Ok(())
}
