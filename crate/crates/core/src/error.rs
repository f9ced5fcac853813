use thiserror::Error;

/// Errors produced by the numerical routines.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),

    #[error("jump integral did not converge (estimated error {error:.3e}, tolerance {tolerance:.3e})")]
    NonConvergentJumpIntegral { error: f64, tolerance: f64 },

    #[error("no sign change found for {what} up to bracket cap {cap}")]
    BracketFailure { what: &'static str, cap: f64 },

    #[error("zero denominator: psi({at}) = 0 at k = {k}")]
    ZeroDenominator { k: usize, at: f64 },

    #[error("series not converged after {terms} terms (last term {last_term:.3e}, partial sum {partial_sum:.3e})")]
    TruncationFailure {
        terms: usize,
        last_term: f64,
        partial_sum: f64,
    },

    #[error("infinite product failed the Cauchy criterion after {terms} terms (spread {spread:.3e})")]
    ProductDivergence { terms: usize, spread: f64 },

    #[error("quadrature failed: {0}")]
    QuadratureFailure(String),

    #[error("integrand returned a non-finite value at {at}")]
    NonFinite { at: f64 },

    #[error("argument {arg} lies on the excluded ray of {factor}")]
    BranchViolation { factor: &'static str, arg: f64 },

    #[error("parameters are not in the class C({k},{l}): rho + k - l/alpha = {residual:.3e}")]
    ClassMismatch { k: i64, l: i64, residual: f64 },

    #[error("exponent kind not supported here: {0}")]
    UnsupportedExponent(String),

    #[error("grid exhausted at clock time {reached} before {requested}")]
    GridExhausted { reached: f64, requested: f64 },

    #[error("only {hits} of {paths} paths hit before the horizon (need at least {needed})")]
    InsufficientHits {
        hits: usize,
        paths: usize,
        needed: usize,
    },

    #[error("parameter {name} = {value} sits on a pole")]
    PoleParameter { name: &'static str, value: f64 },

    #[error("query outside the hypotheses of the formula: {0}")]
    MeaninglessQuery(String),

    #[error("value {value} outside (0, 1] for a Laplace transform of a passage time")]
    NotAProbability { value: f64 },

    #[error("configuration error: {0}")]
    Config(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn domain<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Domain(msg.into()))
}
