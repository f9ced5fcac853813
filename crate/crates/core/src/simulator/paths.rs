//! Whole paths on the ξ grid and their images.

use super::stepper::{exp_integral, XiStepper};
use super::{PathConfig, KILL_FLOOR};
use crate::error::{domain, Error, Result};
use rand_chacha::ChaCha8Rng;

/// Hard cap on the number of ξ steps of one path.
const MAX_STEPS: usize = 50_000_000;

/// ξ on its own grid with V_s = ∫₀^s e^{αξ_r} dr and W_s = ∫₀^s e^{−αξ_r} dr.
pub(crate) struct XiWalk {
    stepper: XiStepper,
    rng: ChaCha8Rng,
    /// Bridge draws, kept apart so that coupled grids see the same increments.
    pub(crate) aux: ChaCha8Rng,
    alpha: f64,
    pub(crate) dt: f64,
    pub(crate) steps: usize,
    pub(crate) xi: f64,
    pub(crate) v: f64,
    pub(crate) w: f64,
    track_w: bool,
    /// Every knot of the last step in time order, the last one equal to the
    /// current state. Between consecutive knots at distinct times ξ is Gaussian.
    pub(crate) knots: Vec<WalkPoint>,
}

/// ξ-time, ξ and V at one instant of a walk.
#[derive(Debug, Clone, Copy)]
pub(crate) struct WalkPoint {
    pub(crate) time: f64,
    pub(crate) xi: f64,
    pub(crate) v: f64,
}

impl XiWalk {
    pub(crate) fn new(cfg: &PathConfig, index: u64, track_w: bool) -> Result<Self> {
        Ok(XiWalk {
            stepper: cfg.xi_stepper()?,
            rng: cfg.rng(index),
            aux: cfg.aux_rng(index),
            alpha: cfg.alpha,
            dt: cfg.dt,
            steps: 0,
            xi: 0.0,
            v: 0.0,
            w: 0.0,
            track_w,
            knots: Vec::with_capacity(16),
        })
    }

    pub(crate) fn time(&self) -> f64 {
        self.steps as f64 * self.dt
    }

    pub(crate) fn point(&self) -> WalkPoint {
        WalkPoint { time: self.time(), xi: self.xi, v: self.v }
    }

    pub(crate) fn advance(&mut self) -> Result<()> {
        if self.steps >= MAX_STEPS {
            return Err(Error::GridExhausted { reached: self.time(), requested: f64::INFINITY });
        }
        let start = self.time();
        let knots = self.stepper.step(&mut self.rng, self.dt);
        let ea = (self.alpha * self.xi).exp();
        self.knots.clear();
        let (mut t, mut e, mut acc) = (0.0, 1.0, 0.0);
        for &(tj, xj) in knots {
            let ej = (self.alpha * xj).exp();
            acc += 0.5 * (tj - t) * (e + ej);
            (t, e) = (tj, ej);
            self.knots.push(WalkPoint { time: start + tj, xi: self.xi + xj, v: self.v + ea * acc });
        }
        if self.track_w {
            self.w += exp_integral(knots, -self.alpha) / ea;
        }
        let last = *self.knots.last().expect("a step has at least one knot");
        self.xi = last.xi;
        self.v = last.v;
        self.steps += 1;
        Ok(())
    }
}

/// ξ and V on the grid s_i = i·dt.
#[derive(Debug, Clone, PartialEq)]
pub struct LevyPath {
    pub dt: f64,
    pub xi: Vec<f64>,
    pub v: Vec<f64>,
}

/// ξ up to ξ-time `cfg.horizon`.
pub fn simulate_levy(cfg: &PathConfig, index: u64) -> Result<LevyPath> {
    let mut walk = XiWalk::new(cfg, index, false)?;
    let n = (cfg.horizon / cfg.dt).ceil() as usize;
    let mut xi = Vec::with_capacity(n + 1);
    let mut v = Vec::with_capacity(n + 1);
    xi.push(0.0);
    v.push(0.0);
    for _ in 0..n {
        walk.advance()?;
        xi.push(walk.xi);
        v.push(walk.v);
    }
    Ok(LevyPath { dt: cfg.dt, xi, v })
}

/// The OU image U of the Lamperti process started at x0, sampled at the
/// points of the ξ grid: U-time ln(1+χx0^αV)/χ, value x0 e^ξ (1+χx0^αV)^{−1/α}.
#[derive(Debug, Clone, PartialEq)]
pub struct OuPath {
    pub xi_time: Vec<f64>,
    pub time: Vec<f64>,
    pub u: Vec<f64>,
    /// Absorbed at 0 before the horizon.
    pub killed: bool,
}

/// U-time and value of U at ξ-time with V accumulated.
pub(crate) fn ou_point(cfg: &PathConfig, x0: f64, xi: f64, v: f64) -> (f64, f64) {
    let chi = cfg.chi();
    let xa = x0.powf(cfg.alpha);
    if chi == 0.0 {
        return (xa * v, x0 * xi.exp());
    }
    let g = chi * xa * v;
    (g.ln_1p() / chi, x0 * xi.exp() * (1.0 + g).powf(-1.0 / cfg.alpha))
}

/// U killed at 0 (below [`KILL_FLOOR`]) or stopped past U-time `cfg.horizon`.
pub fn lamperti_ou(cfg: &PathConfig, x0: f64, index: u64) -> Result<OuPath> {
    if !(x0 > 0.0) {
        return domain(format!("lamperti_ou needs x0 > 0, got {x0}"));
    }
    let mut walk = XiWalk::new(cfg, index, false)?;
    let mut path = OuPath { xi_time: vec![0.0], time: vec![0.0], u: vec![x0], killed: false };
    loop {
        walk.advance()?;
        let (t, u) = ou_point(cfg, x0, walk.xi, walk.v);
        path.xi_time.push(walk.time());
        path.time.push(t);
        path.u.push(u);
        if u < KILL_FLOOR {
            path.killed = true;
            return Ok(path);
        }
        if t >= cfg.horizon {
            return Ok(path);
        }
    }
}

impl OuPath {
    /// U_t by binary search on the U-time grid and linear interpolation;
    /// `None` once the path has been absorbed.
    pub fn at(&self, t: f64) -> Result<Option<f64>> {
        let last = *self.time.last().expect("paths are never empty");
        if t > last {
            return if self.killed {
                Ok(None)
            } else {
                Err(Error::GridExhausted { reached: last, requested: t })
            };
        }
        let i = self.time.partition_point(|&s| s < t);
        if i == 0 {
            return Ok(Some(self.u[0]));
        }
        let (t0, t1) = (self.time[i - 1], self.time[i]);
        let w = if t1 > t0 { (t - t0) / (t1 - t0) } else { 1.0 };
        Ok(Some(self.u[i - 1] + w * (self.u[i] - self.u[i - 1])))
    }

    /// Δ at the grid points: ∫ U^{−α} over U-time, each step taken as its
    /// U-time length over the mean of U^α at its ends. This is the pairing that
    /// inverts the trapezoid time change; a quadrature of U^{−α} alone would
    /// overestimate by about (αΔξ)²/4 per step on rough paths.
    pub fn delta_clock(&self, alpha: f64) -> Vec<f64> {
        let mut out = Vec::with_capacity(self.time.len());
        let mut acc = 0.0;
        out.push(0.0);
        for i in 1..self.time.len() {
            let h = self.time[i] - self.time[i - 1];
            acc += 2.0 * h / (self.u[i - 1].powf(alpha) + self.u[i].powf(alpha));
            out.push(acc);
        }
        out
    }

    /// Piecewise-linear interpolation of Δ at U-time t.
    pub fn delta_at(&self, delta: &[f64], t: f64) -> Result<f64> {
        let last = *self.time.last().expect("paths are never empty");
        if t > last {
            return Err(Error::GridExhausted { reached: last, requested: t });
        }
        let i = self.time.partition_point(|&s| s < t).max(1);
        let (t0, t1) = (self.time[i - 1], self.time[i]);
        let w = if t1 > t0 { (t - t0) / (t1 - t0) } else { 1.0 };
        Ok(delta[i - 1] + w * (delta[i] - delta[i - 1]))
    }
}

/// A process sampled on the ξ grid.
#[derive(Debug, Clone, PartialEq)]
pub struct ProcessPath {
    pub xi_time: Vec<f64>,
    pub values: Vec<f64>,
}

impl ProcessPath {
    /// ∫₀^s values by the trapezoid rule at every grid point.
    pub fn running_integral(&self) -> Vec<f64> {
        let mut out = Vec::with_capacity(self.values.len());
        let mut acc = 0.0;
        out.push(0.0);
        for i in 1..self.values.len() {
            acc += 0.5 * (self.xi_time[i] - self.xi_time[i - 1]) * (self.values[i - 1] + self.values[i]);
            out.push(acc);
        }
        out
    }
}

/// Z_s = e^{αξ_s} (x + β V_s)^{−1}, so Z_0 = 1/x, up to ξ-time `cfg.horizon`.
pub fn simulate_z(cfg: &PathConfig, x: f64, beta: f64, index: u64) -> Result<ProcessPath> {
    if x == 0.0 || !x.is_finite() {
        return domain(format!("Z needs x != 0, got {x}"));
    }
    let mut walk = XiWalk::new(cfg, index, false)?;
    let n = (cfg.horizon / cfg.dt).ceil() as usize;
    let mut p = ProcessPath { xi_time: vec![0.0], values: vec![1.0 / x] };
    for _ in 0..n {
        walk.advance()?;
        p.xi_time.push(walk.time());
        p.values.push((cfg.alpha * walk.xi).exp() / (x + beta * walk.v));
    }
    Ok(p)
}

/// Y_s = e^{αξ_s}(x + β∫₀^s e^{−αξ_r}dr); with `dual` the same expression for −ξ,
/// which is Ŷ_s = e^{−αξ_s}(x + β V_s).
pub fn simulate_y(cfg: &PathConfig, x: f64, beta: f64, dual: bool, index: u64) -> Result<ProcessPath> {
    let mut walk = XiWalk::new(cfg, index, !dual)?;
    let n = (cfg.horizon / cfg.dt).ceil() as usize;
    let mut p = ProcessPath { xi_time: vec![0.0], values: vec![x] };
    for _ in 0..n {
        walk.advance()?;
        p.xi_time.push(walk.time());
        let y = if dual {
            (-cfg.alpha * walk.xi).exp() * (x + beta * walk.v)
        } else {
            (cfg.alpha * walk.xi).exp() * (x + beta * walk.w)
        };
        p.values.push(y);
    }
    Ok(p)
}
