//! C interface to grid states and the four steppers.
//!
//! States live behind an opaque `AdState` handle. Every fallible call
//! returns an [`AdStatus`]; on failure `ad_last_error` describes the cause.
//! Strings handed out by the library must be released with
//! `ad_string_free`, states with `ad_state_free`.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use antidiff::experiments::classify_any;
use antidiff::schemes::step;
use antidiff::state::AnyState;
use antidiff::{Error, Scalar, SchemeKind, SchemeParams};

/// Status codes returned by every fallible function.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum AdStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidUtf8 = 2,
    /// Malformed JSON or a state that fails validation.
    InvalidState = 3,
    /// Unknown scheme name, bad CFL number or scalar literal.
    InvalidArgument = 4,
    /// The scheme cannot step this state (wrong grid, lambda too large).
    Precondition = 5,
    /// A panic was caught at the boundary.
    Internal = 6,
}

/// Opaque grid state.
pub struct AdState {
    inner: AnyState,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: impl Into<String>) {
    let msg = msg.into().replace('\0', " ");
    LAST_ERROR.with(|e| *e.borrow_mut() = CString::new(msg).ok());
}

fn status_of(e: &Error) -> AdStatus {
    match e {
        Error::InvalidState(_) | Error::Json(_) | Error::InvalidDatum(_) => AdStatus::InvalidState,
        Error::PhaseMismatch { .. } | Error::ShiftedLambda(_) | Error::Precondition(_) => AdStatus::Precondition,
        _ => AdStatus::InvalidArgument,
    }
}

fn guard(f: impl FnOnce() -> Result<(), (AdStatus, String)>) -> AdStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => AdStatus::Ok,
        Ok(Err((status, msg))) => {
            set_error(msg);
            status
        }
        Err(_) => {
            set_error("internal panic");
            AdStatus::Internal
        }
    }
}

fn lib_err(e: Error) -> (AdStatus, String) {
    (status_of(&e), e.to_string())
}

unsafe fn read_str<'a>(p: *const c_char, what: &str) -> Result<&'a str, (AdStatus, String)> {
    if p.is_null() {
        return Err((AdStatus::NullPointer, format!("{what} is null")));
    }
    CStr::from_ptr(p).to_str().map_err(|_| (AdStatus::InvalidUtf8, format!("{what} is not UTF-8")))
}

unsafe fn state_ref<'a>(p: *const AdState) -> Result<&'a AdState, (AdStatus, String)> {
    p.as_ref().ok_or((AdStatus::NullPointer, "state handle is null".into()))
}

fn out_string(out: *mut *mut c_char, s: String) -> Result<(), (AdStatus, String)> {
    let c = CString::new(s).map_err(|_| (AdStatus::Internal, "string contains NUL".to_string()))?;
    unsafe { *out = c.into_raw() };
    Ok(())
}

fn check_out<T>(out: *mut T) -> Result<(), (AdStatus, String)> {
    if out.is_null() {
        Err((AdStatus::NullPointer, "output pointer is null".into()))
    } else {
        Ok(())
    }
}

/// Message of the last failure on this thread, or null. The pointer stays
/// valid until the next failing call on the same thread.
#[no_mangle]
pub extern "C" fn ad_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// Parses a state from its JSON form.
///
/// # Safety
/// `json` must be a NUL-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn ad_state_from_json(json: *const c_char, out: *mut *mut AdState) -> AdStatus {
    guard(|| {
        check_out(out)?;
        let text = read_str(json, "json")?;
        let inner = AnyState::parse(text).map_err(lib_err)?;
        *out = Box::into_raw(Box::new(AdState { inner }));
        Ok(())
    })
}

/// Serializes a state; release the result with `ad_string_free`.
///
/// # Safety
/// `state` must come from this library and `out` be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn ad_state_to_json(state: *const AdState, out: *mut *mut c_char) -> AdStatus {
    guard(|| {
        check_out(out)?;
        let s = state_ref(state)?;
        out_string(out, s.inner.to_json().to_string())
    })
}

/// Copies a state.
///
/// # Safety
/// `state` must come from this library and `out` be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn ad_state_clone(state: *const AdState, out: *mut *mut AdState) -> AdStatus {
    guard(|| {
        check_out(out)?;
        let s = state_ref(state)?;
        *out = Box::into_raw(Box::new(AdState { inner: s.inner.clone() }));
        Ok(())
    })
}

/// Advances `state` in place by `steps` steps of the named scheme at the
/// state's own CFL number. On failure the state is left unchanged.
///
/// # Safety
/// `state` must come from this library and `scheme` be NUL-terminated.
#[no_mangle]
pub unsafe extern "C" fn ad_state_step(state: *mut AdState, scheme: *const c_char, steps: usize) -> AdStatus {
    guard(|| {
        let s = state.as_mut().ok_or((AdStatus::NullPointer, "state handle is null".to_string()))?;
        let kind: SchemeKind = read_str(scheme, "scheme")?.parse().map_err(lib_err)?;
        let next = match &s.inner {
            AnyState::Rational(g) => {
                let params = SchemeParams::new(kind, g.lambda()).map_err(lib_err)?;
                let mut g = g.clone();
                for _ in 0..steps {
                    g = step(&g, &params).map_err(lib_err)?;
                }
                AnyState::Rational(g)
            }
            AnyState::Binary64(g) => {
                let params = SchemeParams::new(kind, g.lambda()).map_err(lib_err)?;
                let mut g = g.clone();
                for _ in 0..steps {
                    g = step(&g, &params).map_err(lib_err)?;
                }
                AnyState::Binary64(g)
            }
        };
        s.inner = next;
        Ok(())
    })
}

/// Stored window: first cell index and number of cells.
///
/// # Safety
/// `state` must come from this library; `start` and `len` valid pointers.
#[no_mangle]
pub unsafe extern "C" fn ad_state_window(state: *const AdState, start: *mut i64, len: *mut usize) -> AdStatus {
    guard(|| {
        check_out(start)?;
        check_out(len)?;
        let s = state_ref(state)?;
        let (a, n) = match &s.inner {
            AnyState::Rational(g) => (g.start(), g.len()),
            AnyState::Binary64(g) => (g.start(), g.len()),
        };
        *start = a;
        *len = n;
        Ok(())
    })
}

/// Value of cell `j` rounded to binary64. Cells outside the window follow
/// the tails or the period.
///
/// # Safety
/// `state` must come from this library and `out` be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn ad_state_value(state: *const AdState, j: i64, out: *mut f64) -> AdStatus {
    guard(|| {
        check_out(out)?;
        let s = state_ref(state)?;
        *out = match &s.inner {
            AnyState::Rational(g) => g.cell_value(j).to_f64(),
            AnyState::Binary64(g) => g.cell_value(j),
        };
        Ok(())
    })
}

/// Exact value of cell `j` as a string (`p/q` or a binary64 literal);
/// release it with `ad_string_free`.
///
/// # Safety
/// `state` must come from this library and `out` be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn ad_state_value_string(state: *const AdState, j: i64, out: *mut *mut c_char) -> AdStatus {
    guard(|| {
        check_out(out)?;
        let s = state_ref(state)?;
        let text = match &s.inner {
            AnyState::Rational(g) => g.cell_value(j).exact_string(),
            AnyState::Binary64(g) => g.cell_value(j).exact_string(),
        };
        out_string(out, text)
    })
}

/// Full classification report as JSON; `alpha` is the lower bound on
/// inner jumps, in the state's arithmetic. Release with `ad_string_free`.
///
/// # Safety
/// `state` must come from this library, `alpha` be NUL-terminated and
/// `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn ad_state_classify_json(
    state: *const AdState,
    alpha: *const c_char,
    out: *mut *mut c_char,
) -> AdStatus {
    guard(|| {
        check_out(out)?;
        let s = state_ref(state)?;
        let alpha = read_str(alpha, "alpha")?;
        let report = classify_any(&s.inner, alpha).map_err(lib_err)?;
        out_string(out, report.to_string())
    })
}

/// Releases a state. Null is ignored.
///
/// # Safety
/// `state` must come from this library and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn ad_state_free(state: *mut AdState) {
    if !state.is_null() {
        drop(Box::from_raw(state));
    }
}

/// Releases a string returned by this library. Null is ignored.
///
/// # Safety
/// `s` must come from this library and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn ad_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}
