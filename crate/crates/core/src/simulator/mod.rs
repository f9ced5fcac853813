//! Monte Carlo engine: the driving Lévy process, its Lamperti image, the OU
//! image U, the processes Y, Ŷ and Z, passage-time sampling and estimators.
//!
//! Every path owns a ChaCha8 stream selected by its index, so results do not
//! depend on scheduling; reductions run sequentially over the ordered samples.

mod estimator;
mod paths;
mod stepper;

pub use estimator::{
    estimate_fpt_laplace, estimate_functional_u, estimate_time_space, laplace_from_samples, sample_fpt, sample_many,
    sample_x_at, write_samples_csv,
    Estimate, FptProcess, FptSample,
};
pub use paths::{lamperti_ou, simulate_levy, simulate_y, simulate_z, LevyPath, OuPath, ProcessPath};
pub use stepper::{Besq, JumpSampler};

use crate::error::{domain, Error, Result};
use crate::levy::{ExponentKind, LevyExponent};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use stepper::{XiLaw, XiStepper};

/// Default small-jump cutoff.
pub const DEFAULT_JUMP_CUTOFF: f64 = 1e-3;
/// U below this level counts as absorbed at 0.
pub const KILL_FLOOR: f64 = 1e-12;
/// Fewer hits than this make an estimate meaningless.
pub const MIN_HITS: usize = 100;

/// Discretization scheme.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Scheme {
    /// Grid increments; jumps of one step are applied at its end.
    Euler,
    /// Jumps below −ε at their exact times, smaller ones as matched Gaussian noise.
    JumpAdapted { jump_cutoff: f64 },
    /// Exact squared-Bessel transitions of U and X (Brownian driver only).
    /// Below 0 the process is reflected, which is the recurrent extension when
    /// 0 < δ < 2.
    ExactBessel,
}

/// Everything a path needs.
#[derive(Debug, Clone)]
pub struct PathConfig {
    psi: LevyExponent,
    pub alpha: f64,
    pub lambda: f64,
    /// Step on the clock the scheme runs on: ξ-time for Euler and JumpAdapted,
    /// U-time (or X-time) for ExactBessel.
    pub dt: f64,
    /// Largest time on the clock of the sampled quantity.
    pub horizon: f64,
    pub seed: u64,
    scheme: Scheme,
    /// Standard normals summed into one Gaussian increment; 2 after [`PathConfig::coarsened`].
    draws_per_step: u32,
    /// Increment law on the ξ grid, built once (`None` for exact Bessel transitions).
    law: Option<XiLaw>,
}

impl PathConfig {
    pub fn new(psi: LevyExponent, alpha: f64, lambda: f64, dt: f64, horizon: f64, seed: u64, scheme: Scheme) -> Result<Self> {
        if !(alpha > 0.0 && lambda >= 0.0 && alpha.is_finite() && lambda.is_finite()) {
            return domain(format!("need alpha > 0 and lambda >= 0, got {alpha}, {lambda}"));
        }
        if !(dt > 0.0 && horizon > 0.0 && dt.is_finite() && horizon.is_finite()) {
            return domain(format!("need dt > 0 and horizon > 0, got {dt}, {horizon}"));
        }
        match scheme {
            Scheme::JumpAdapted { jump_cutoff } if !(jump_cutoff > 0.0 && jump_cutoff < 1.0) => {
                return domain(format!("jump cutoff must lie in (0,1), got {jump_cutoff}"));
            }
            Scheme::ExactBessel if !matches!(psi.kind(), ExponentKind::BrownianDrift { sigma, .. } if *sigma > 0.0) => {
                return Err(Error::UnsupportedExponent("exact Bessel transitions need a Brownian driver with sigma > 0".into()));
            }
            _ => {}
        }
        let mut cfg = PathConfig { psi, alpha, lambda, dt, horizon, seed, scheme, draws_per_step: 1, law: None };
        if scheme == Scheme::ExactBessel {
            if !(cfg.bessel_dimension() > 0.0) {
                return domain(format!("squared Bessel dimension {} is not positive", cfg.bessel_dimension()));
            }
        } else {
            cfg.law = Some(cfg.xi_law()?);
        }
        Ok(cfg)
    }

    pub fn psi(&self) -> &LevyExponent {
        &self.psi
    }

    pub fn scheme(&self) -> Scheme {
        self.scheme
    }

    /// χ = αλ.
    pub fn chi(&self) -> f64 {
        self.alpha * self.lambda
    }

    /// For the Brownian driver X^α is a squared Bessel process of dimension
    /// δ = 2 + 4b/(ασ) run at speed c² = α²σ/4.
    pub fn bessel_dimension(&self) -> f64 {
        match self.psi.kind() {
            ExponentKind::BrownianDrift { b, sigma } => 2.0 + 4.0 * b / (self.alpha * sigma),
            _ => f64::NAN,
        }
    }

    pub fn bessel_speed(&self) -> f64 {
        0.25 * self.alpha * self.alpha * self.psi.sigma()
    }

    /// Diffusion coefficient of U (and of X) at level u for the Brownian driver.
    pub fn bessel_vol(&self, u: f64) -> f64 {
        (2.0 * self.bessel_speed().sqrt() / self.alpha) * u.powf(1.0 - 0.5 * self.alpha)
    }

    /// The same paths on a grid twice as coarse: every coarse Gaussian increment
    /// is the sum of the two increments this configuration would draw.
    pub fn coarsened(&self) -> Result<PathConfig> {
        if !self.is_brownian() || self.scheme == Scheme::ExactBessel {
            return Err(Error::Config("coupled coarsening needs a Brownian driver on the xi grid".into()));
        }
        let mut cfg = PathConfig { dt: 2.0 * self.dt, draws_per_step: 2 * self.draws_per_step, ..self.clone() };
        cfg.law = Some(cfg.xi_law()?);
        Ok(cfg)
    }

    pub(crate) fn rng(&self, index: u64) -> ChaCha8Rng {
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        rng.set_stream(index);
        rng
    }

    /// A second generator for path `index`, far ahead on the same stream.
    pub(crate) fn aux_rng(&self, index: u64) -> ChaCha8Rng {
        let mut rng = self.rng(index);
        rng.set_word_pos(1u128 << 64);
        rng
    }

    pub(crate) fn xi_stepper(&self) -> Result<XiStepper> {
        match &self.law {
            Some(law) => Ok(XiStepper::new(law.clone())),
            None => Err(Error::Config("exact Bessel transitions have no xi grid".into())),
        }
    }

    /// Variance rate of the Gaussian part of the ξ increments.
    pub(crate) fn gaussian_var(&self) -> f64 {
        match &self.law {
            Some(XiLaw::Gaussian { var, .. } | XiLaw::Jumps { var, .. }) => *var,
            None => self.psi.sigma(),
        }
    }

    fn xi_law(&self) -> Result<XiLaw> {
        let b = self.psi.mean()?;
        let sigma = self.psi.sigma();
        let law = match (self.psi.kind(), self.scheme) {
            (ExponentKind::BrownianDrift { .. }, _) => XiLaw::Gaussian { drift: b, var: sigma, draws: self.draws_per_step },
            (ExponentKind::Tabulated { .. }, _) => {
                return Err(Error::UnsupportedExponent("no path sampler for tabulated triplets".into()))
            }
            (ExponentKind::Pochhammer { .. }, Scheme::ExactBessel) => unreachable!("rejected by PathConfig::new"),
            (ExponentKind::Pochhammer { .. }, scheme) => {
                let (eps, at_step_end) = match scheme {
                    Scheme::JumpAdapted { jump_cutoff } => (jump_cutoff, false),
                    _ => (DEFAULT_JUMP_CUTOFF, true),
                };
                let jumps = JumpSampler::new(&self.psi, eps)?;
                XiLaw::Jumps { drift: b - jumps.big_mean(), var: sigma + jumps.small_var(), jumps, at_step_end }
            }
        };
        Ok(law)
    }

    pub(crate) fn is_brownian(&self) -> bool {
        matches!(self.psi.kind(), ExponentKind::BrownianDrift { .. })
    }
}
