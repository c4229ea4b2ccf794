//! C ABI for `arcmeasure`.
//!
//! Measures are parsed from the textual description language into an opaque
//! [`AmProvider`] handle. Every fallible call returns an [`AmStatus`]; on
//! failure, [`am_last_error_message`] describes the error for the calling
//! thread. Outputs are written through caller-supplied pointers, which are
//! left untouched on failure.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use arcmeasure::arc::{arc_measure, autocorrelation_arc, cdf, ArcOptions, CircleArc, LimitMethod, SeriesResult};
use arcmeasure::cantor::{cantor_exact, cantor_series};
use arcmeasure::fejer::fejer_kernel;
use arcmeasure::local_dim::local_dimension;
use arcmeasure::{atom_mass, parse_measure, CoefficientProvider, Error, Window};

/// Result codes. Values 2 to 4 match the command-line exit codes.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AmStatus {
    Ok = 0,
    /// Malformed description, invalid argument or unsupported request.
    InvalidInput = 2,
    /// A continuity certificate was required but the measure may have atoms.
    Certificate = 3,
    /// A ball measure was indistinguishable from zero.
    Degenerate = 4,
    /// A required pointer argument was null.
    NullPointer = 5,
    /// An internal panic was caught at the boundary.
    Panic = 6,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AmLimitMethod {
    AtomDecomposition = 0,
    DirectCesaro = 1,
    SkippedContinuous = 2,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AmWindow {
    Symmetric = 0,
    OneSided = 1,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct AmSeriesResult {
    pub value: f64,
    pub tail_estimate: f64,
    pub limit_term: f64,
    pub oscillation: f64,
    pub series_part: f64,
    pub terms_used: usize,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct AmDimensionFit {
    pub slope: f64,
    pub intercept: f64,
    pub residual: f64,
    pub hypothesis_sum: f64,
    pub hypothesis_met: bool,
}

/// A validated measure and its coefficient cache. Safe to share between
/// threads for concurrent queries.
pub struct AmProvider {
    inner: CoefficientProvider,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_last_error(msg: String) {
    let c = CString::new(msg.replace('\0', " ")).expect("interior nul removed");
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

enum Failure {
    Lib(Error),
    Null(&'static str),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Lib(e)
    }
}

fn status_of(e: &Error) -> AmStatus {
    match e {
        Error::Certificate(_) => AmStatus::Certificate,
        Error::DegenerateSignal { .. } => AmStatus::Degenerate,
        _ => AmStatus::InvalidInput,
    }
}

/// Runs `f`, translating errors and panics into status codes.
fn guard(f: impl FnOnce() -> Result<(), Failure>) -> AmStatus {
    LAST_ERROR.with(|e| *e.borrow_mut() = None);
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => AmStatus::Ok,
        Ok(Err(Failure::Lib(e))) => {
            set_last_error(e.to_string());
            status_of(&e)
        }
        Ok(Err(Failure::Null(what))) => {
            set_last_error(format!("{what} must not be null"));
            AmStatus::NullPointer
        }
        Err(payload) => {
            let msg = payload
                .downcast_ref::<&str>()
                .map(|s| s.to_string())
                .or_else(|| payload.downcast_ref::<String>().cloned())
                .unwrap_or_else(|| "unknown panic".into());
            set_last_error(format!("internal panic: {msg}"));
            AmStatus::Panic
        }
    }
}

unsafe fn provider_ref<'a>(p: *const AmProvider) -> Result<&'a CoefficientProvider, Failure> {
    // SAFETY: caller guarantees `p` is null or a live handle from `am_provider_new`.
    unsafe { p.as_ref() }.map(|p| &p.inner).ok_or(Failure::Null("provider"))
}

unsafe fn write_out<T>(out: *mut T, value: T, what: &'static str) -> Result<(), Failure> {
    if out.is_null() {
        return Err(Failure::Null(what));
    }
    // SAFETY: non-null and, per the caller contract, valid for writes.
    unsafe { out.write(value) };
    Ok(())
}

fn require_out<T>(out: *mut T, what: &'static str) -> Result<(), Failure> {
    if out.is_null() {
        Err(Failure::Null(what))
    } else {
        Ok(())
    }
}

// Enumerations arrive as plain integers: an out-of-range C enum value would
// be undefined behaviour on the Rust side.
fn limit_method(m: i32) -> Result<LimitMethod, Failure> {
    Ok(match m {
        x if x == AmLimitMethod::AtomDecomposition as i32 => LimitMethod::AtomDecomposition,
        x if x == AmLimitMethod::DirectCesaro as i32 => LimitMethod::DirectCesaro,
        x if x == AmLimitMethod::SkippedContinuous as i32 => LimitMethod::SkippedContinuous,
        other => return Err(Error::InvalidInput(format!("unknown limit method {other}")).into()),
    })
}

fn window(w: i32) -> Result<Window, Failure> {
    Ok(match w {
        x if x == AmWindow::Symmetric as i32 => Window::Symmetric,
        x if x == AmWindow::OneSided as i32 => Window::OneSided,
        other => return Err(Error::InvalidInput(format!("unknown window {other}")).into()),
    })
}

impl From<SeriesResult> for AmSeriesResult {
    fn from(r: SeriesResult) -> Self {
        Self {
            value: r.value,
            tail_estimate: r.tail_estimate,
            limit_term: r.limit_term,
            oscillation: r.oscillation,
            series_part: r.series_part,
            terms_used: r.terms_used,
        }
    }
}

/// Library version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn am_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// Message for the last failed call on this thread, or null if the last call
/// succeeded. The pointer stays valid until the next call on this thread.
#[no_mangle]
pub extern "C" fn am_last_error_message() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// Parses `description` and stores a new handle in `*out`.
///
/// # Safety
/// `description` must be a NUL-terminated string and `out` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn am_provider_new(description: *const c_char, out: *mut *mut AmProvider) -> AmStatus {
    guard(|| {
        require_out(out, "out")?;
        if description.is_null() {
            return Err(Failure::Null("description"));
        }
        // SAFETY: non-null and NUL-terminated per the contract.
        let text = unsafe { CStr::from_ptr(description) }
            .to_str()
            .map_err(|_| Error::InvalidInput("description is not valid UTF-8".into()))?;
        let spec = parse_measure(text).map_err(Error::from)?;
        let handle = Box::new(AmProvider { inner: CoefficientProvider::new(spec)? });
        unsafe { write_out(out, Box::into_raw(handle), "out") }
    })
}

/// Releases a handle. Null is ignored.
///
/// # Safety
/// `provider` must be null or a handle from [`am_provider_new`] that has not
/// been freed.
#[no_mangle]
pub unsafe extern "C" fn am_provider_free(provider: *mut AmProvider) {
    if !provider.is_null() {
        // SAFETY: ownership returns to Rust exactly once per the contract.
        drop(unsafe { Box::from_raw(provider) });
    }
}

/// `μ̂(n)` for `|n| ≤ 2^31 - 1`.
///
/// # Safety
/// `provider` must be a live handle; `re` and `im` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn am_coefficient(provider: *const AmProvider, n: i64, re: *mut f64, im: *mut f64) -> AmStatus {
    guard(|| {
        let p = unsafe { provider_ref(provider)? };
        require_out(re, "re")?;
        require_out(im, "im")?;
        if n.unsigned_abs() > arcmeasure::coefficients::MAX_FREQUENCY as u64 {
            return Err(Error::InvalidInput(format!("frequency {n} out of range")).into());
        }
        let c = p.coefficient(n);
        unsafe {
            write_out(re, c.re, "re")?;
            write_out(im, c.im, "im")
        }
    })
}

/// `μ[a, b)` for `0 ≤ a < b ≤ 1` from `terms` coefficients; `method` is an
/// [`AmLimitMethod`] value.
///
/// # Safety
/// `provider` must be a live handle; `out` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn am_arc_measure(
    provider: *const AmProvider,
    a: f64,
    b: f64,
    terms: usize,
    method: i32,
    out: *mut AmSeriesResult,
) -> AmStatus {
    guard(|| {
        let p = unsafe { provider_ref(provider)? };
        require_out(out, "out")?;
        let arc = CircleArc::new(a, b)?;
        let r = arc_measure(p, arc, terms, ArcOptions::with_limit(limit_method(method)?))?;
        unsafe { write_out(out, r.into(), "out") }
    })
}

/// `μ[0, x)` for `x ∈ [0, 1]`; `method` is an [`AmLimitMethod`] value.
///
/// # Safety
/// `provider` must be a live handle; `out` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn am_cdf(
    provider: *const AmProvider,
    x: f64,
    terms: usize,
    method: i32,
    out: *mut AmSeriesResult,
) -> AmStatus {
    guard(|| {
        let p = unsafe { provider_ref(provider)? };
        require_out(out, "out")?;
        let r = cdf(p, x, terms, ArcOptions::with_limit(limit_method(method)?))?;
        unsafe { write_out(out, r.into(), "out") }
    })
}

/// Wiener estimate of `μ{x}` over the [`AmWindow`] given by `window_kind`;
/// `oscillation` may be null.
///
/// # Safety
/// `provider` must be a live handle; `value` valid for writes; `oscillation`
/// null or valid for writes.
#[no_mangle]
pub unsafe extern "C" fn am_atom_mass(
    provider: *const AmProvider,
    x: f64,
    window_kind: i32,
    terms: usize,
    value: *mut f64,
    oscillation: *mut f64,
) -> AmStatus {
    guard(|| {
        let p = unsafe { provider_ref(provider)? };
        require_out(value, "value")?;
        let est = atom_mass(p, x, window(window_kind)?, terms)?;
        unsafe {
            write_out(value, est.value, "value")?;
            if !oscillation.is_null() {
                write_out(oscillation, est.oscillation, "oscillation")?;
            }
        }
        Ok(())
    })
}

/// `(μ ∗ μ̄)[a, b)` for a continuous measure.
///
/// # Safety
/// `provider` must be a live handle; `out` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn am_autocorrelation_arc(
    provider: *const AmProvider,
    a: f64,
    b: f64,
    terms: usize,
    out: *mut AmSeriesResult,
) -> AmStatus {
    guard(|| {
        let p = unsafe { provider_ref(provider)? };
        require_out(out, "out")?;
        let arc = CircleArc::new(a, b)?;
        let r = autocorrelation_arc(p, arc, terms)?;
        unsafe { write_out(out, r.into(), "out") }
    })
}

/// The Cantor function at `x`; 0 below 0 and 1 above 1.
#[no_mangle]
pub extern "C" fn am_cantor_exact(x: f64) -> f64 {
    cantor_exact(x)
}

/// Block-smoothed Fourier partial sum of the Cantor function at `x ∈ (0, 1)`.
///
/// # Safety
/// `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn am_cantor_series(x: f64, terms: usize, out: *mut f64) -> AmStatus {
    guard(|| {
        require_out(out, "out")?;
        let p = cantor_series(x, terms)?;
        unsafe { write_out(out, p.partial_sum, "out") }
    })
}

/// `K_n(t)` as a trigonometric sum and in closed form.
///
/// # Safety
/// `value_sum` and `value_closed` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn am_fejer_kernel(n: usize, t: f64, value_sum: *mut f64, value_closed: *mut f64) -> AmStatus {
    guard(|| {
        require_out(value_sum, "value_sum")?;
        require_out(value_closed, "value_closed")?;
        let k = fejer_kernel(n, t);
        unsafe {
            write_out(value_sum, k.value_sum, "value_sum")?;
            write_out(value_closed, k.value_closed, "value_closed")
        }
    })
}

/// Log-log fit of ball measures at `points` radii from `r_max` to `r_min`.
///
/// # Safety
/// `provider` must be a live handle; `out` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn am_local_dimension(
    provider: *const AmProvider,
    x: f64,
    r_max: f64,
    r_min: f64,
    points: usize,
    terms: usize,
    out: *mut AmDimensionFit,
) -> AmStatus {
    guard(|| {
        let p = unsafe { provider_ref(provider)? };
        require_out(out, "out")?;
        let fit = local_dimension(p, x, r_max, r_min, points, terms)?;
        let result = AmDimensionFit {
            slope: fit.slope,
            intercept: fit.intercept,
            residual: fit.residual,
            hypothesis_sum: fit.hypothesis_sum,
            hypothesis_met: fit.hypothesis_met,
        };
        unsafe { write_out(out, result, "out") }
    })
}
