//! C interface to the `adelic-gaps` engine.
//!
//! Objects cross the boundary as opaque handles created by `ag_*_parse` or
//! `ag_gap_report_new` and released with the matching `ag_*_free`. Every
//! fallible function returns an [`AgStatus`] and writes its result through
//! an out-pointer. On failure `ag_last_error_message` describes what went
//! wrong on the calling thread.
//!
//! Rationals are exchanged as strings (`"351/100"`, `"-3"`). Strings
//! returned by the library are owned by the caller and must be released
//! with `ag_string_free`.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use adelic_gaps::adele::{parse_point, torus_distance, AdelePoint, PrimeSet};
use adelic_gaps::{gap_report, Error, GapReport};

/// Result of every fallible call.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum AgStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidUtf8 = 2,
    Parse = 3,
    InvalidArgument = 4,
    DegenerateOrbit = 5,
    Internal = 6,
}

/// A set of primes: finite, or all primes outside a finite exclusion list.
pub struct AgPrimeSet(PrimeSet);

/// A point of the adele ring over some prime set.
pub struct AgPoint(AdelePoint);

/// Nearest-neighbour distances of an orbit segment.
pub struct AgGapReport(GapReport);

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(message: String) {
    let message = CString::new(message.replace('\0', " ")).expect("nul bytes removed");
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(message));
}

fn clear_error() {
    LAST_ERROR.with(|e| *e.borrow_mut() = None);
}

fn status_of(e: &Error) -> AgStatus {
    match e {
        Error::Parse(_) | Error::InvalidPrimeSet(_) => AgStatus::Parse,
        Error::DegenerateOrbit { .. } => AgStatus::DegenerateOrbit,
        _ => AgStatus::InvalidArgument,
    }
}

struct Fail(AgStatus, String);

impl From<Error> for Fail {
    fn from(e: Error) -> Self {
        Fail(status_of(&e), e.to_string())
    }
}

/// Runs `body`, converting errors and panics into a status and the thread's last error.
fn guard(body: impl FnOnce() -> Result<(), Fail>) -> AgStatus {
    clear_error();
    match catch_unwind(AssertUnwindSafe(body)) {
        Ok(Ok(())) => AgStatus::Ok,
        Ok(Err(Fail(status, message))) => {
            set_error(message);
            status
        }
        Err(panic) => {
            let message = panic
                .downcast_ref::<&str>()
                .map(|s| s.to_string())
                .or_else(|| panic.downcast_ref::<String>().cloned())
                .unwrap_or_else(|| "panic".into());
            set_error(format!("internal error: {message}"));
            AgStatus::Internal
        }
    }
}

fn null(what: &str) -> Fail {
    Fail(AgStatus::NullPointer, format!("{what} is null"))
}

unsafe fn read_str<'a>(s: *const c_char, what: &str) -> Result<&'a str, Fail> {
    if s.is_null() {
        return Err(null(what));
    }
    CStr::from_ptr(s)
        .to_str()
        .map_err(|_| Fail(AgStatus::InvalidUtf8, format!("{what} is not valid UTF-8")))
}

unsafe fn deref<'a, T>(p: *const T, what: &str) -> Result<&'a T, Fail> {
    p.as_ref().ok_or_else(|| null(what))
}

unsafe fn write_out<T>(out: *mut T, value: T) -> Result<(), Fail> {
    if out.is_null() {
        return Err(null("out"));
    }
    out.write(value);
    Ok(())
}

unsafe fn write_string(out: *mut *mut c_char, s: String) -> Result<(), Fail> {
    let s = CString::new(s).map_err(|_| Fail(AgStatus::Internal, "string contains NUL".into()))?;
    if out.is_null() {
        return Err(null("out"));
    }
    out.write(s.into_raw());
    Ok(())
}

/// Message for the last failed call on this thread, or NULL. The pointer
/// stays valid until the next library call on the same thread.
#[no_mangle]
pub extern "C" fn ag_last_error_message() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |s| s.as_ptr()))
}

/// Releases a string returned by this library. NULL is ignored.
///
/// # Safety
/// `s` must come from this library and not have been freed.
#[no_mangle]
pub unsafe extern "C" fn ag_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Parses `all`, `all-except:2,3` or `2,3,5`.
///
/// # Safety
/// `spec` must be a NUL-terminated string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn ag_prime_set_parse(
    spec: *const c_char,
    out: *mut *mut AgPrimeSet,
) -> AgStatus {
    guard(|| {
        let primes: PrimeSet = read_str(spec, "spec")?.parse()?;
        write_out(out, Box::into_raw(Box::new(AgPrimeSet(primes))))
    })
}

/// # Safety
/// `set` must come from `ag_prime_set_parse` and not have been freed.
#[no_mangle]
pub unsafe extern "C" fn ag_prime_set_free(set: *mut AgPrimeSet) {
    if !set.is_null() {
        drop(Box::from_raw(set));
    }
}

/// Parses a point such as `inf=351/100;default=0;2=1` over `primes`.
///
/// # Safety
/// `spec` must be a NUL-terminated string, `primes` a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn ag_point_parse(
    spec: *const c_char,
    primes: *const AgPrimeSet,
    out: *mut *mut AgPoint,
) -> AgStatus {
    guard(|| {
        let spec = read_str(spec, "spec")?;
        let primes = deref(primes, "primes")?;
        let point = parse_point(spec, &primes.0)?;
        write_out(out, Box::into_raw(Box::new(AgPoint(point))))
    })
}

/// # Safety
/// `point` must come from `ag_point_parse` and not have been freed.
#[no_mangle]
pub unsafe extern "C" fn ag_point_free(point: *mut AgPoint) {
    if !point.is_null() {
        drop(Box::from_raw(point));
    }
}

/// Writes the point in the grammar accepted by `ag_point_parse`.
///
/// # Safety
/// `point` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn ag_point_to_string(
    point: *const AgPoint,
    out: *mut *mut c_char,
) -> AgStatus {
    guard(|| write_string(out, deref(point, "point")?.0.to_string()))
}

/// Distance between the cosets of `x` and `y` on the torus, as a rational string.
///
/// # Safety
/// `x` and `y` must be live handles and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn ag_torus_distance(
    x: *const AgPoint,
    y: *const AgPoint,
    out: *mut *mut c_char,
) -> AgStatus {
    guard(|| {
        let d = torus_distance(&deref(x, "x")?.0, &deref(y, "y")?.0)?;
        write_string(out, d.to_string())
    })
}

/// Computes the gap report of the first `len` orbit points of `alpha`.
///
/// # Safety
/// `alpha` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn ag_gap_report_new(
    alpha: *const AgPoint,
    len: u64,
    out: *mut *mut AgGapReport,
) -> AgStatus {
    guard(|| {
        let report = gap_report(&deref(alpha, "alpha")?.0, len)?;
        write_out(out, Box::into_raw(Box::new(AgGapReport(report))))
    })
}

/// # Safety
/// `report` must come from `ag_gap_report_new` and not have been freed.
#[no_mangle]
pub unsafe extern "C" fn ag_gap_report_free(report: *mut AgGapReport) {
    if !report.is_null() {
        drop(Box::from_raw(report));
    }
}

/// Number of distinct gaps, or 0 for a NULL handle.
///
/// # Safety
/// `report` must be NULL or a live handle.
#[no_mangle]
pub unsafe extern "C" fn ag_gap_report_gap_count(report: *const AgGapReport) -> usize {
    report.as_ref().map_or(0, |r| r.0.gap_count)
}

/// The distance from the `n`-th orbit point (1-based) to its nearest neighbour.
///
/// # Safety
/// `report` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn ag_gap_report_delta(
    report: *const AgGapReport,
    n: u64,
    out: *mut *mut c_char,
) -> AgStatus {
    guard(|| {
        let report = &deref(report, "report")?.0;
        let delta = report.delta(n).ok_or_else(|| {
            Fail(
                AgStatus::InvalidArgument,
                format!("index {n} outside 1..={}", report.len),
            )
        })?;
        write_string(out, delta.to_string())
    })
}

/// The full report as JSON.
///
/// # Safety
/// `report` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn ag_gap_report_to_json(
    report: *const AgGapReport,
    out: *mut *mut c_char,
) -> AgStatus {
    guard(|| {
        let json = serde_json::to_string(&deref(report, "report")?.0)
            .map_err(|e| Fail(AgStatus::Internal, e.to_string()))?;
        write_string(out, json)
    })
}
