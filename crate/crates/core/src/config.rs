//! JSON run descriptors for the command-line front end.

use crate::error::{Error, Result};
use crate::fpt::FptProcess;
use crate::levy::{Growth, LevyExponent, TabulatedTriplet};
use crate::series::Truncation;
use crate::simulator::{PathConfig, Scheme};
use crate::stable_wh::{PassageSide, StableParams};
use serde::Deserialize;
use std::path::Path;

/// A Laplace exponent as written in a config file.
#[derive(Debug, Clone, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum ExponentConfig {
    /// ψ(u) = bu + σu²/2.
    Brownian { b: f64, sigma: f64 },
    Pochhammer { alpha: f64, gamma: f64 },
    /// Piecewise-linear jump density on the increasing abscissae `y` (≤ 0).
    Tabulated {
        b: f64,
        sigma: f64,
        y: Vec<f64>,
        density: Vec<f64>,
        #[serde(default)]
        growth: Option<GrowthConfig>,
    },
}

#[derive(Debug, Clone, Copy, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GrowthConfig {
    pub beta: f64,
    pub a_beta: f64,
}

impl ExponentConfig {
    pub fn build(&self) -> Result<LevyExponent> {
        match self {
            ExponentConfig::Brownian { b, sigma } => LevyExponent::brownian(*b, *sigma),
            ExponentConfig::Pochhammer { alpha, gamma } => LevyExponent::pochhammer(*alpha, *gamma),
            ExponentConfig::Tabulated { b, sigma, y, density, growth } => {
                let g = growth.map(|g| Growth { beta: g.beta, a_beta: g.a_beta });
                Ok(LevyExponent::tabulated(TabulatedTriplet::from_table(*b, *sigma, y.clone(), density.clone(), g)?))
            }
        }
    }
}

/// Parameter grids; commands take the product of the ones they use.
#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Grid {
    #[serde(default)]
    pub q: Vec<f64>,
    #[serde(default)]
    pub x: Vec<f64>,
    #[serde(default)]
    pub a: Vec<f64>,
    #[serde(default)]
    pub z: Vec<f64>,
}

#[derive(Debug, Clone, Copy, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StableConfig {
    pub alpha: f64,
    pub k: i64,
    pub l: i64,
    /// Transform variables of the double-Laplace transforms.
    #[serde(default)]
    pub delta: Option<f64>,
    #[serde(default)]
    pub p: Option<f64>,
}

impl StableConfig {
    pub fn params(&self) -> Result<StableParams> {
        StableParams::from_class(self.alpha, self.k, self.l)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SchemeConfig {
    Euler,
    JumpAdapted,
    ExactBessel,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SimulationConfig {
    pub dt: f64,
    pub horizon: f64,
    #[serde(default = "default_scheme")]
    pub scheme: SchemeConfig,
    #[serde(default)]
    pub jump_cutoff: Option<f64>,
    /// Raw samples, one row per path; needs a single (x, a) pair.
    #[serde(default)]
    pub samples_csv: Option<String>,
}

fn default_scheme() -> SchemeConfig {
    SchemeConfig::Euler
}

#[derive(Debug, Clone, Copy, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TruncationConfig {
    pub rtol: f64,
    pub max_terms: usize,
}

/// Everything a command may read from `--config`.
#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    #[serde(default)]
    pub exponent: Option<ExponentConfig>,
    #[serde(default)]
    pub alpha: Option<f64>,
    #[serde(default)]
    pub lambda: Option<f64>,
    #[serde(default)]
    pub grid: Grid,
    #[serde(default)]
    pub process: Option<FptProcess>,
    #[serde(default)]
    pub stable: Option<StableConfig>,
    #[serde(default)]
    pub side: Option<SideConfig>,
    #[serde(default)]
    pub simulation: Option<SimulationConfig>,
    #[serde(default)]
    pub truncation: Option<TruncationConfig>,
    /// ν values for the Brownian validation suites.
    #[serde(default)]
    pub nu: Vec<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SideConfig {
    Above,
    Below,
}

impl From<SideConfig> for PassageSide {
    fn from(s: SideConfig) -> Self {
        match s {
            SideConfig::Above => PassageSide::Above,
            SideConfig::Below => PassageSide::Below,
        }
    }
}

fn missing<T>(what: &str) -> Result<T> {
    Err(Error::Config(format!("config needs `{what}`")))
}

impl RunConfig {
    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Config(format!("bad config: {e}")))
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::Config(format!("{}: {e}", path.display())))?;
        Self::from_json(&text)
    }

    pub fn exponent(&self) -> Result<LevyExponent> {
        match &self.exponent {
            Some(e) => e.build(),
            None => missing("exponent"),
        }
    }

    pub fn alpha(&self) -> Result<f64> {
        self.alpha.map_or_else(|| missing("alpha"), Ok)
    }

    pub fn lambda(&self) -> Result<f64> {
        self.lambda.map_or_else(|| missing("lambda"), Ok)
    }

    pub fn process(&self) -> Result<FptProcess> {
        self.process.map_or_else(|| missing("process"), Ok)
    }

    pub fn stable(&self) -> Result<StableConfig> {
        self.stable.map_or_else(|| missing("stable"), Ok)
    }

    pub fn truncation(&self) -> Result<Truncation> {
        match self.truncation {
            Some(t) => Truncation::new(t.rtol, t.max_terms),
            None => Ok(Truncation::default()),
        }
    }

    /// A grid that must not be empty.
    pub fn axis<'a>(&'a self, name: &str, values: &'a [f64]) -> Result<&'a [f64]> {
        if values.is_empty() {
            return Err(Error::Config(format!("grid `{name}` must not be empty")));
        }
        Ok(values)
    }

    pub fn path_config(&self, seed: u64) -> Result<PathConfig> {
        let Some(sim) = &self.simulation else {
            return missing("simulation");
        };
        let scheme = match sim.scheme {
            SchemeConfig::Euler => Scheme::Euler,
            SchemeConfig::ExactBessel => Scheme::ExactBessel,
            SchemeConfig::JumpAdapted => Scheme::JumpAdapted {
                jump_cutoff: sim.jump_cutoff.unwrap_or(crate::simulator::DEFAULT_JUMP_CUTOFF),
            },
        };
        PathConfig::new(self.exponent()?, self.alpha()?, self.lambda()?, sim.dt, sim.horizon, seed, scheme)
    }
}
