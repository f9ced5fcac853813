//! C interface to `qinv`.
//!
//! Every function returns a [`QinvStatus`]; results go through out-pointers.
//! On failure the message is kept per thread and read with
//! [`qinv_last_error_message`]. Handles are opaque and freed with their
//! `_free` function; passing NULL to a `_free` function is a no-op.

use num_complex::Complex64;
use qinv::error::Error;
use qinv::fpt::{laplace_fpt, FptProcess, FptQuery};
use qinv::levy::LevyExponent;
use qinv::series::{c_theta, eval_n, SeriesSpec, Truncation};
use qinv::stable_wh::{psi_minus, psi_plus, StableParams};
use std::cell::RefCell;
use std::ffi::{c_char, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum QinvStatus {
    Ok = 0,
    NullPointer = 1,
    /// Parameters outside the domain of the function called.
    InvalidArgument = 2,
    /// A series, product, quadrature or root search did not converge.
    NotConverged = 3,
    /// Any other numerical failure.
    Numerical = 4,
    /// A Rust panic was caught at the boundary.
    Panic = 5,
}

/// Process whose first-passage Laplace transform is requested.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum QinvProcess {
    U = 0,
    XMovingBoundary = 1,
    UDeltaClock = 2,
    Z = 3,
    Yhat = 4,
    UToZero = 5,
}

impl From<QinvProcess> for FptProcess {
    fn from(p: QinvProcess) -> Self {
        match p {
            QinvProcess::U => FptProcess::U,
            QinvProcess::XMovingBoundary => FptProcess::XMovingBoundary,
            QinvProcess::UDeltaClock => FptProcess::UDeltaClock,
            QinvProcess::Z => FptProcess::Z,
            QinvProcess::Yhat => FptProcess::Yhat,
            QinvProcess::UToZero => FptProcess::UToZero,
        }
    }
}

/// A Lévy exponent ψ.
pub struct QinvExponent(LevyExponent);

/// A power series I_{α,ψ}(z) or I_{α,ψ}(q; z) with its coefficient cache.
pub struct QinvSeries(SeriesSpec);

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: String) {
    let c = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

fn status_of(e: &Error) -> QinvStatus {
    match e {
        Error::Domain(_)
        | Error::Config(_)
        | Error::ClassMismatch { .. }
        | Error::UnsupportedExponent(_)
        | Error::MeaninglessQuery(_)
        | Error::PoleParameter { .. }
        | Error::BranchViolation { .. } => QinvStatus::InvalidArgument,
        Error::TruncationFailure { .. }
        | Error::ProductDivergence { .. }
        | Error::QuadratureFailure(_)
        | Error::NonConvergentJumpIntegral { .. }
        | Error::BracketFailure { .. } => QinvStatus::NotConverged,
        _ => QinvStatus::Numerical,
    }
}

/// Runs `f`, records any error or panic, and maps it to a status.
fn guard(f: impl FnOnce() -> Result<(), Error>) -> QinvStatus {
    LAST_ERROR.with(|e| *e.borrow_mut() = None);
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => QinvStatus::Ok,
        Ok(Err(e)) => {
            set_error(e.to_string());
            status_of(&e)
        }
        Err(p) => {
            let msg = p
                .downcast_ref::<&str>()
                .map(|s| s.to_string())
                .or_else(|| p.downcast_ref::<String>().cloned())
                .unwrap_or_else(|| "panic".into());
            set_error(format!("panic: {msg}"));
            QinvStatus::Panic
        }
    }
}

macro_rules! nonnull {
    ($($p:ident),+) => {
        $(if $p.is_null() {
            set_error(format!("{} is NULL", stringify!($p)));
            return QinvStatus::NullPointer;
        })+
    };
}

/// Length in bytes of the last error message on this thread, without the
/// terminating NUL; 0 when the last call succeeded.
#[no_mangle]
pub extern "C" fn qinv_last_error_length() -> usize {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(0, |c| c.as_bytes().len()))
}

/// Copies the last error message into `buf` (NUL-terminated, truncated to
/// `len - 1` bytes) and returns the full message length.
///
/// # Safety
/// `buf` must be NULL or valid for `len` bytes.
#[no_mangle]
pub unsafe extern "C" fn qinv_last_error_message(buf: *mut c_char, len: usize) -> usize {
    LAST_ERROR.with(|e| {
        let e = e.borrow();
        let bytes = e.as_ref().map_or(&[][..], |c| c.as_bytes());
        if !buf.is_null() && len > 0 {
            let n = bytes.len().min(len - 1);
            std::ptr::copy_nonoverlapping(bytes.as_ptr() as *const c_char, buf, n);
            *buf.add(n) = 0;
        }
        bytes.len()
    })
}

/// ψ(u) = b u + σ² u²/2.
///
/// # Safety
/// `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn qinv_exponent_brownian(b: f64, sigma: f64, out: *mut *mut QinvExponent) -> QinvStatus {
    nonnull!(out);
    guard(|| {
        *out = Box::into_raw(Box::new(QinvExponent(LevyExponent::brownian(b, sigma)?)));
        Ok(())
    })
}

/// ψ(u) = ((u+γ−1)_α − (γ−1)_α)/α with α ∈ (1,2), γ ≥ 0.
///
/// # Safety
/// `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn qinv_exponent_pochhammer(alpha: f64, gamma: f64, out: *mut *mut QinvExponent) -> QinvStatus {
    nonnull!(out);
    guard(|| {
        *out = Box::into_raw(Box::new(QinvExponent(LevyExponent::pochhammer(alpha, gamma)?)));
        Ok(())
    })
}

/// # Safety
/// `exponent` must be NULL or a handle from a `qinv_exponent_*` constructor.
#[no_mangle]
pub unsafe extern "C" fn qinv_exponent_free(exponent: *mut QinvExponent) {
    if !exponent.is_null() {
        drop(Box::from_raw(exponent));
    }
}

/// ψ(u) for real u.
///
/// # Safety
/// `exponent` must be a live handle and `out` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn qinv_exponent_psi(exponent: *const QinvExponent, u: f64, out: *mut f64) -> QinvStatus {
    nonnull!(exponent, out);
    guard(|| {
        *out = (*exponent).0.psi(u)?;
        Ok(())
    })
}

/// Series I_{α,ψ}(z), or I_{α,ψ}(q; z) when `q` is not NaN. `rtol <= 0` and
/// `max_terms == 0` select the default truncation.
///
/// # Safety
/// `exponent` must be a live handle and `out` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn qinv_series_new(
    exponent: *const QinvExponent,
    alpha: f64,
    q: f64,
    rtol: f64,
    max_terms: usize,
    out: *mut *mut QinvSeries,
) -> QinvStatus {
    nonnull!(exponent, out);
    guard(|| {
        let d = Truncation::default();
        let t = Truncation::new(if rtol > 0.0 { rtol } else { d.rtol }, if max_terms > 0 { max_terms } else { d.max_terms })?;
        let q = if q.is_nan() { None } else { Some(q) };
        *out = Box::into_raw(Box::new(QinvSeries(SeriesSpec::new(alpha, (*exponent).0.clone(), q, t)?)));
        Ok(())
    })
}

/// # Safety
/// `series` must be NULL or a handle from [`qinv_series_new`].
#[no_mangle]
pub unsafe extern "C" fn qinv_series_free(series: *mut QinvSeries) {
    if !series.is_null() {
        drop(Box::from_raw(series));
    }
}

/// Evaluates the series at real z. `terms_used` may be NULL.
///
/// # Safety
/// `series` must be a live handle, `value` valid for writes, `terms_used`
/// NULL or valid for writes. A handle must not be used from two threads at once.
#[no_mangle]
pub unsafe extern "C" fn qinv_series_eval(series: *const QinvSeries, z: f64, value: *mut f64, terms_used: *mut usize) -> QinvStatus {
    nonnull!(series, value);
    guard(|| {
        let v = (*series).0.eval_real(z)?;
        *value = v.value;
        if !terms_used.is_null() {
            *terms_used = v.terms_used;
        }
        Ok(())
    })
}

/// Growth constant C_{θ_α} of I_{α,ψ} (needs a Cramér root θ > 0).
///
/// # Safety
/// `exponent` must be a live handle and `out` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn qinv_c_theta(exponent: *const QinvExponent, alpha: f64, out: *mut f64) -> QinvStatus {
    nonnull!(exponent, out);
    guard(|| {
        *out = c_theta(&(*exponent).0, alpha)?;
        Ok(())
    })
}

/// N_{α,ψ}(q; x), decreasing in x, for ψ with negative mean.
///
/// # Safety
/// `exponent` must be a live handle and `out` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn qinv_n_function(exponent: *const QinvExponent, alpha: f64, q: f64, x: f64, out: *mut f64) -> QinvStatus {
    nonnull!(exponent, out);
    guard(|| {
        *out = eval_n(&(*exponent).0, alpha, q, x)?;
        Ok(())
    })
}

/// Laplace transform E[e^{−qT}] of the passage time of `process` from `start`
/// to `barrier`, for U = OU image of the self-similar process with index α and
/// mean-reversion λ. `barrier` is ignored for `UToZero`.
///
/// # Safety
/// `exponent` must be a live handle and `out` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn qinv_laplace_fpt(
    exponent: *const QinvExponent,
    process: QinvProcess,
    alpha: f64,
    lambda: f64,
    q: f64,
    start: f64,
    barrier: f64,
    out: *mut f64,
) -> QinvStatus {
    nonnull!(exponent, out);
    guard(|| {
        let query = FptQuery::new(process.into(), (*exponent).0.clone(), alpha, lambda, q, start, barrier)?;
        *out = laplace_fpt(&query)?;
        Ok(())
    })
}

/// Wiener–Hopf factors Ψ⁺(z) and Ψ⁻(z) of the stable process in the class
/// C(k, l) with index α, at complex z. `plus` and `minus` each receive
/// (re, im) and may be NULL.
///
/// # Safety
/// Non-NULL out-pointers must be valid for two writes.
#[no_mangle]
pub unsafe extern "C" fn qinv_stable_wh(
    alpha: f64,
    k: i64,
    l: i64,
    z_re: f64,
    z_im: f64,
    plus: *mut f64,
    minus: *mut f64,
) -> QinvStatus {
    guard(|| {
        let params = StableParams::from_class(alpha, k, l)?;
        let z = Complex64::new(z_re, z_im);
        if !plus.is_null() {
            let v = psi_plus(&params, z)?;
            (*plus, *plus.add(1)) = (v.re, v.im);
        }
        if !minus.is_null() {
            let v = psi_minus(&params, z)?;
            (*minus, *minus.add(1)) = (v.re, v.im);
        }
        Ok(())
    })
}

/// Library version, a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn qinv_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr() as *const c_char
}
