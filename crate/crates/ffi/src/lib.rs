//! C ABI over `dirspin`.
//!
//! Results of `dirspin_*_fidelity` calls are returned as opaque
//! `DirspinFidelity` handles owned by the caller and released with
//! `dirspin_fidelity_free`. Every fallible call returns a `DirspinStatus`;
//! on failure the message is available from `dirspin_last_error_message`
//! on the same thread. Panics never cross the boundary.

use std::cell::RefCell;
use std::ffi::{c_char, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use dirspin::cli::VerifyOutcome;
use dirspin::montecarlo::{simulate_protocol, SamplerConfig};
use dirspin::povm::{OutcomeDensity, GRAM_MAX_SPINS};
use dirspin::{hilbert_dimension, optimal_fidelity, Error, FidelityResult, HalfInt, ProblemSpec};

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum DirspinStatus {
    Ok = 0,
    NullPointer = 1,
    BadN = 2,
    ParityMismatch = 3,
    OutOfRange = 4,
    NoConvergence = 5,
    EnvelopeBreach = 6,
    InvalidArgument = 7,
    BufferTooSmall = 8,
    Panic = 9,
}

impl From<&Error> for DirspinStatus {
    fn from(e: &Error) -> Self {
        match e {
            Error::BadN(_) => DirspinStatus::BadN,
            Error::ParityMismatch { .. } => DirspinStatus::ParityMismatch,
            Error::OutOfRange { .. } => DirspinStatus::OutOfRange,
            Error::NoConvergence(_) => DirspinStatus::NoConvergence,
            Error::EnvelopeBreach { .. } => DirspinStatus::EnvelopeBreach,
            Error::InvalidArgument(_) => DirspinStatus::InvalidArgument,
        }
    }
}

/// Opaque optimal-fidelity result.
pub struct DirspinFidelity {
    inner: FidelityResult,
}

/// Monte Carlo summary, filled in by `dirspin_simulate`.
#[repr(C)]
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct DirspinSimulation {
    pub exact_fidelity: f64,
    pub mean_fidelity_estimate: f64,
    pub standard_error: f64,
    pub accepted_fraction: f64,
}

/// Largest deviations of the three numerical oracles, filled in by
/// `dirspin_verify`. `passed` is 1 when all are within tolerance.
#[repr(C)]
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct DirspinVerifyReport {
    pub coupling_oracle_deviation: f64,
    pub normalization_deviation: f64,
    pub gram_deviation: f64,
    pub gram_dimension: usize,
    pub passed: i32,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_last_error(msg: String) {
    let c = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

fn clear_last_error() {
    LAST_ERROR.with(|e| *e.borrow_mut() = None);
}

fn fail(status: DirspinStatus, msg: impl Into<String>) -> DirspinStatus {
    set_last_error(msg.into());
    status
}

fn from_error(e: Error) -> DirspinStatus {
    let status = DirspinStatus::from(&e);
    fail(status, e.to_string())
}

fn guarded(f: impl FnOnce() -> DirspinStatus) -> DirspinStatus {
    clear_last_error();
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(s) => s,
        Err(payload) => {
            let msg = payload
                .downcast_ref::<&str>()
                .map(|s| s.to_string())
                .or_else(|| payload.downcast_ref::<String>().cloned())
                .unwrap_or_else(|| "panic".into());
            fail(DirspinStatus::Panic, format!("internal panic: {msg}"))
        }
    }
}

fn boxed_result(spec: Result<ProblemSpec, Error>, out: *mut *mut DirspinFidelity) -> DirspinStatus {
    if out.is_null() {
        return fail(DirspinStatus::NullPointer, "output handle pointer is null");
    }
    unsafe { *out = ptr::null_mut() };
    let result = spec.and_then(optimal_fidelity);
    match result {
        Ok(inner) => {
            let handle = Box::into_raw(Box::new(DirspinFidelity { inner }));
            unsafe { *out = handle };
            DirspinStatus::Ok
        }
        Err(e) => from_error(e),
    }
}

/// Library version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn dirspin_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// Copies the last error message of this thread into `buf` (NUL-terminated,
/// truncated to `len`). Returns the full message length including the NUL,
/// or 0 if there is no pending error.
///
/// # Safety
/// `buf` must be null or point to `len` writable bytes.
#[no_mangle]
pub unsafe extern "C" fn dirspin_last_error_message(buf: *mut c_char, len: usize) -> usize {
    LAST_ERROR.with(|e| {
        let e = e.borrow();
        let Some(msg) = e.as_ref() else { return 0 };
        let bytes = msg.as_bytes_with_nul();
        if !buf.is_null() && len > 0 {
            let n = bytes.len().min(len);
            ptr::copy_nonoverlapping(bytes.as_ptr().cast(), buf, n);
            *buf.add(n - 1) = 0;
        }
        bytes.len()
    })
}

/// Dimension of the one-copy-per-`j` space for `n` spins.
///
/// # Safety
/// `out` must be null or valid for writes.
#[no_mangle]
pub unsafe extern "C" fn dirspin_hilbert_dimension(n: i64, out: *mut u64) -> DirspinStatus {
    guarded(|| {
        if out.is_null() {
            return fail(DirspinStatus::NullPointer, "out is null");
        }
        match hilbert_dimension(n) {
            Ok(d) => {
                *out = d;
                DirspinStatus::Ok
            }
            Err(e) => from_error(e),
        }
    })
}

/// Optimal signal for `n` spins and projection `twice_m / 2`.
///
/// # Safety
/// `out` must be null or valid for writes. On success `*out` owns a handle
/// that must be released with `dirspin_fidelity_free`; on failure it is set
/// to null.
#[no_mangle]
pub unsafe extern "C" fn dirspin_optimal_fidelity(
    n: i64,
    twice_m: i64,
    out: *mut *mut DirspinFidelity,
) -> DirspinStatus {
    guarded(|| boxed_result(ProblemSpec::new(n, HalfInt::from_twice(twice_m)), out))
}

/// Optimal signal with the lowest legal `m` (0 or 1/2).
///
/// # Safety
/// See `dirspin_optimal_fidelity`.
#[no_mangle]
pub unsafe extern "C" fn dirspin_lowest_m_fidelity(
    n: i64,
    out: *mut *mut DirspinFidelity,
) -> DirspinStatus {
    guarded(|| boxed_result(ProblemSpec::lowest(n), out))
}

/// Parallel-spin signal (`m = N/2`).
///
/// # Safety
/// See `dirspin_optimal_fidelity`.
#[no_mangle]
pub unsafe extern "C" fn dirspin_parallel_fidelity(
    n: i64,
    out: *mut *mut DirspinFidelity,
) -> DirspinStatus {
    guarded(|| boxed_result(ProblemSpec::parallel(n), out))
}

/// # Safety
/// `handle` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn dirspin_fidelity_value(handle: *const DirspinFidelity) -> f64 {
    handle.as_ref().map_or(f64::NAN, |h| h.inner.fidelity)
}

/// # Safety
/// `handle` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn dirspin_fidelity_one_minus_f(handle: *const DirspinFidelity) -> f64 {
    handle.as_ref().map_or(f64::NAN, |h| h.inner.one_minus_f)
}

/// `<cos chi>` achieved by the signal.
///
/// # Safety
/// `handle` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn dirspin_fidelity_mean_x(handle: *const DirspinFidelity) -> f64 {
    handle.as_ref().map_or(f64::NAN, |h| h.inner.state.mean_x())
}

/// # Safety
/// `handle` must be null or a live handle. Returns -1 for null.
#[no_mangle]
pub unsafe extern "C" fn dirspin_fidelity_twice_m(handle: *const DirspinFidelity) -> i64 {
    handle.as_ref().map_or(-1, |h| h.inner.spec().m().twice())
}

/// Number of coefficients (`N/2 - m + 1`), 0 for null.
///
/// # Safety
/// `handle` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn dirspin_fidelity_coeff_count(handle: *const DirspinFidelity) -> usize {
    handle.as_ref().map_or(0, |h| h.inner.state.coeffs().len())
}

/// Copies the coefficients `c_j` (ascending `j`, starting at `j = m`) into
/// `buf`.
///
/// # Safety
/// `handle` must be null or a live handle; `buf` must be null or point to
/// `len` writable doubles.
#[no_mangle]
pub unsafe extern "C" fn dirspin_fidelity_coeffs(
    handle: *const DirspinFidelity,
    buf: *mut f64,
    len: usize,
) -> DirspinStatus {
    guarded(|| {
        let (Some(h), false) = (handle.as_ref(), buf.is_null()) else {
            return fail(DirspinStatus::NullPointer, "handle or buffer is null");
        };
        let c = h.inner.state.coeffs();
        if len < c.len() {
            return fail(
                DirspinStatus::BufferTooSmall,
                format!("buffer holds {len} values, {} needed", c.len()),
            );
        }
        ptr::copy_nonoverlapping(c.as_ptr(), buf, c.len());
        DirspinStatus::Ok
    })
}

/// Outcome density `p(x)` of the handle's signal at `x = cos chi`.
///
/// # Safety
/// `handle` must be null or a live handle; `out` must be null or valid for
/// writes.
#[no_mangle]
pub unsafe extern "C" fn dirspin_fidelity_density(
    handle: *const DirspinFidelity,
    x: f64,
    out: *mut f64,
) -> DirspinStatus {
    guarded(|| {
        let (Some(h), false) = (handle.as_ref(), out.is_null()) else {
            return fail(DirspinStatus::NullPointer, "handle or out is null");
        };
        if !(-1.0..=1.0).contains(&x) {
            return fail(
                DirspinStatus::InvalidArgument,
                format!("x = {x} outside [-1, 1]"),
            );
        }
        *out = OutcomeDensity::new(&h.inner.state).eval(x);
        DirspinStatus::Ok
    })
}

/// Releases a handle. Null is ignored.
///
/// # Safety
/// `handle` must be null or a handle not yet freed.
#[no_mangle]
pub unsafe extern "C" fn dirspin_fidelity_free(handle: *mut DirspinFidelity) {
    if !handle.is_null() {
        drop(Box::from_raw(handle));
    }
}

/// Sequential Monte Carlo run with the default envelope settings.
///
/// # Safety
/// `out` must be null or valid for writes.
#[no_mangle]
pub unsafe extern "C" fn dirspin_simulate(
    n: i64,
    twice_m: i64,
    seed: u64,
    shots: u64,
    out: *mut DirspinSimulation,
) -> DirspinStatus {
    guarded(|| {
        if out.is_null() {
            return fail(DirspinStatus::NullPointer, "out is null");
        }
        let run = ProblemSpec::new(n, HalfInt::from_twice(twice_m))
            .and_then(|spec| simulate_protocol(spec, &SamplerConfig::new(seed, shots)));
        match run {
            Ok(r) => {
                *out = DirspinSimulation {
                    exact_fidelity: r.exact_fidelity,
                    mean_fidelity_estimate: r.mean_fidelity_estimate,
                    standard_error: r.standard_error,
                    accepted_fraction: r.accepted_fraction,
                };
                DirspinStatus::Ok
            }
            Err(e) => from_error(e),
        }
    })
}

/// Runs the coupling-matrix, normalization and completeness oracles with
/// default quadrature orders. A failed tolerance is reported through
/// `passed`, not the status.
///
/// # Safety
/// `out` must be null or valid for writes.
#[no_mangle]
pub unsafe extern "C" fn dirspin_verify(
    n: i64,
    twice_m: i64,
    out: *mut DirspinVerifyReport,
) -> DirspinStatus {
    guarded(|| {
        if out.is_null() {
            return fail(DirspinStatus::NullPointer, "out is null");
        }
        if n > i64::from(GRAM_MAX_SPINS) {
            return fail(
                DirspinStatus::InvalidArgument,
                format!("verification supports N <= {GRAM_MAX_SPINS}"),
            );
        }
        let outcome = ProblemSpec::new(n, HalfInt::from_twice(twice_m))
            .and_then(|spec| VerifyOutcome::compute(spec, None));
        match outcome {
            Ok(o) => {
                *out = DirspinVerifyReport {
                    coupling_oracle_deviation: o.oracle_dev,
                    normalization_deviation: o.normalization_dev,
                    gram_deviation: o.gram_dev,
                    gram_dimension: o.gram_dim,
                    passed: i32::from(o.passed()),
                };
                DirspinStatus::Ok
            }
            Err(e) => from_error(e),
        }
    })
}
