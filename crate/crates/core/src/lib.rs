//! Γ-transform of invariant functions of self-similar Markov processes, the
//! associated power series, stable Wiener–Hopf factors, passage-time Laplace
//! transforms and a Monte Carlo engine to check them.

// `!(x > 0.0)` is used on purpose: it also rejects NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod cli;
pub mod config;
pub mod error;
pub mod fpt;
pub mod gamma_transform;
pub mod levy;
pub mod simulator;
pub mod quad;
pub mod series;
pub mod special;
pub mod special_ref;
pub mod stable_wh;
pub mod validate;

pub use error::{Error, Result};
pub use levy::{EsscherShift, ExponentKind, Growth, LevyExponent, TabulatedTriplet};
