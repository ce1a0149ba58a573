//! C ABI for `multiconf`.
//!
//! Structures live behind the opaque handle `mc_structure_t`; every function
//! returns an `mc_status_t` and writes results through out-pointers. Strings
//! returned to the caller are owned by the caller and released with
//! `mc_string_free`. After a failing call, `mc_last_error` describes the
//! failure on the calling thread.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use multiconf::covering::Method;
use multiconf::error::Error;
use multiconf::structure::IncidenceStructure;
use multiconf::{generators, io, multiply, representation, search};

/// Opaque handle to an incidence structure.
pub struct McStructure(IncidenceStructure);

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum McStatus {
    McOk = 0,
    /// A required pointer argument was null.
    McErrNull = 1,
    /// A string argument was not valid UTF-8.
    McErrUtf8 = 2,
    /// A document failed to parse.
    McErrParse = 3,
    /// Arguments were well formed but unusable.
    McErrInvalidArgument = 4,
    /// A checked property does not hold.
    McErrFalsified = 5,
    /// The library panicked; this is a bug.
    McErrPanic = 6,
}

#[repr(C)]
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct McPlsReport {
    pub is_uniqueness: bool,
    pub every_line_ge2: bool,
    pub every_point_ge2: bool,
    pub is_pls: bool,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: String) {
    let c = CString::new(msg.replace('\0', " ")).expect("nul bytes removed");
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

struct Fail(McStatus, String);

impl From<Error> for Fail {
    fn from(e: Error) -> Self {
        let status = match e {
            Error::Json(_) | Error::Format(_) => McStatus::McErrParse,
            ref e if e.is_falsification() => McStatus::McErrFalsified,
            _ => McStatus::McErrInvalidArgument,
        };
        Fail(status, e.to_string())
    }
}

fn guard(f: impl FnOnce() -> Result<(), Fail>) -> McStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => McStatus::McOk,
        Ok(Err(Fail(status, msg))) => {
            set_error(msg);
            status
        }
        Err(_) => {
            set_error("panic inside multiconf".into());
            McStatus::McErrPanic
        }
    }
}

fn null<T>(what: &str) -> Result<T, Fail> {
    Err(Fail(McStatus::McErrNull, format!("`{what}` is null")))
}

unsafe fn str_arg<'a>(p: *const c_char, what: &str) -> Result<&'a str, Fail> {
    if p.is_null() {
        return null(what);
    }
    CStr::from_ptr(p)
        .to_str()
        .map_err(|_| Fail(McStatus::McErrUtf8, format!("`{what}` is not UTF-8")))
}

unsafe fn handle<'a>(p: *const McStructure, what: &str) -> Result<&'a IncidenceStructure, Fail> {
    match p.as_ref() {
        Some(h) => Ok(&h.0),
        None => null(what),
    }
}

unsafe fn put<T>(out: *mut T, value: T, what: &str) -> Result<(), Fail> {
    if out.is_null() {
        return null(what);
    }
    out.write(value);
    Ok(())
}

unsafe fn put_structure(out: *mut *mut McStructure, s: IncidenceStructure) -> Result<(), Fail> {
    if out.is_null() {
        return null("out");
    }
    out.write(Box::into_raw(Box::new(McStructure(s))));
    Ok(())
}

unsafe fn put_string(out: *mut *mut c_char, s: String) -> Result<(), Fail> {
    if out.is_null() {
        return null("out");
    }
    let c = CString::new(s).map_err(|_| Fail(McStatus::McErrInvalidArgument, "output contains a nul byte".into()))?;
    out.write(c.into_raw());
    Ok(())
}

/// Message for the last failing call on this thread, or null. The pointer
/// stays valid until the next failing call on the same thread.
#[no_mangle]
pub extern "C" fn mc_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// Releases a string returned by this library. Null is ignored.
///
/// # Safety
/// `s` must come from this library and not have been freed.
#[no_mangle]
pub unsafe extern "C" fn mc_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Releases a structure handle. Null is ignored.
///
/// # Safety
/// `s` must come from this library and not have been freed.
#[no_mangle]
pub unsafe extern "C" fn mc_structure_free(s: *mut McStructure) {
    if !s.is_null() {
        drop(Box::from_raw(s));
    }
}

/// Parses a structure document.
///
/// # Safety
/// `json` must be a nul-terminated string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn mc_structure_from_json(json: *const c_char, out: *mut *mut McStructure) -> McStatus {
    guard(|| {
        let text = str_arg(json, "json")?;
        put_structure(out, io::structure_from_str(text)?)
    })
}

/// Serializes a structure as a canonical document.
///
/// # Safety
/// `s` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn mc_structure_to_json(s: *const McStructure, out: *mut *mut c_char) -> McStatus {
    guard(|| put_string(out, io::structure_to_string(handle(s, "s")?)))
}

/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn mc_segment(out: *mut *mut McStructure) -> McStatus {
    guard(|| put_structure(out, generators::segment()))
}

/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn mc_grassmannian(m: usize, n: usize, out: *mut *mut McStructure) -> McStatus {
    guard(|| put_structure(out, generators::grassmannian(m, n)?))
}

/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn mc_ht_config(p: u64, out: *mut *mut McStructure) -> McStatus {
    guard(|| put_structure(out, generators::ht_config(p)?))
}

/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn mc_affine_plane(p: u64, out: *mut *mut McStructure) -> McStatus {
    guard(|| put_structure(out, generators::affine_plane(p)?.0))
}

/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn mc_projective_plane(p: u64, out: *mut *mut McStructure) -> McStatus {
    guard(|| put_structure(out, generators::projective_plane(p)?))
}

/// # Safety
/// `s` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn mc_dual(s: *const McStructure, out: *mut *mut McStructure) -> McStatus {
    guard(|| put_structure(out, handle(s, "s")?.dual()))
}

/// # Safety
/// `s` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn mc_multiply_dual(s: *const McStructure, k: usize, out: *mut *mut McStructure) -> McStatus {
    guard(|| put_structure(out, multiply::multiply_dual(k, handle(s, "s")?)?))
}

/// Correlative multiplying with an involutive correlation of `s` when one
/// exists, else any correlation.
///
/// # Safety
/// `s` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn mc_multiply_correlative(
    s: *const McStructure,
    k: usize,
    out: *mut *mut McStructure,
) -> McStatus {
    guard(|| {
        let base = handle(s, "s")?;
        let kappa = search::find_involutive_correlation(base)
            .or_else(|| search::find_correlation(base))
            .ok_or_else(|| Fail(McStatus::McErrFalsified, format!("{} is not self-dual", base.name())))?;
        put_structure(out, multiply::multiply_correlative(k, &kappa, base)?)
    })
}

/// Numbers of points, lines and flags. Any out-pointer may be null.
///
/// # Safety
/// `s` must be a live handle; non-null out-pointers must be writable.
#[no_mangle]
pub unsafe extern "C" fn mc_counts(
    s: *const McStructure,
    points: *mut usize,
    lines: *mut usize,
    flags: *mut usize,
) -> McStatus {
    guard(|| {
        let s = handle(s, "s")?;
        for (out, v) in [(points, s.num_points()), (lines, s.num_lines()), (flags, s.num_flags())] {
            if !out.is_null() {
                out.write(v);
            }
        }
        Ok(())
    })
}

/// # Safety
/// `s` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn mc_validate(s: *const McStructure, out: *mut McPlsReport) -> McStatus {
    guard(|| {
        let r = handle(s, "s")?.validate();
        put(
            out,
            McPlsReport {
                is_uniqueness: r.is_uniqueness,
                every_line_ge2: r.every_line_ge2,
                every_point_ge2: r.every_point_ge2,
                is_pls: r.is_pls,
            },
            "out",
        )
    })
}

/// # Safety
/// `a`, `b` must be live handles; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn mc_is_isomorphic(a: *const McStructure, b: *const McStructure, out: *mut bool) -> McStatus {
    guard(|| put(out, search::are_isomorphic(handle(a, "a")?, handle(b, "b")?), "out"))
}

/// Runs the full pipeline: covering by `method` (`"meta"`, `"rank"`,
/// `"tack1"`, `"tack2"`; null means `"meta"`), conditions, correlations,
/// rebuild. Writes the verdict and, if `report` is non-null, the report
/// document. A covering that cannot be recovered yields `MC_ERR_FALSIFIED`.
///
/// # Safety
/// `s` must be a live handle; `method` null or a nul-terminated string;
/// `verdict` writable; `report` null or writable.
#[no_mangle]
pub unsafe extern "C" fn mc_verify(
    s: *const McStructure,
    method: *const c_char,
    verdict: *mut bool,
    report: *mut *mut c_char,
) -> McStatus {
    guard(|| {
        let host = handle(s, "s")?;
        let method: Method = if method.is_null() {
            Method::Meta
        } else {
            str_arg(method, "method")?.parse()?
        };
        let cov = method.covering(host)?;
        let bundle = representation::verify_pipeline(host, &cov)?;
        put(verdict, bundle.verdict, "verdict")?;
        if !report.is_null() {
            let doc = io::Document::new("report", &bundle)?;
            put_string(report, doc.render())?;
        }
        Ok(())
    })
}

/// Levi graph in Graphviz format.
///
/// # Safety
/// `s` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn mc_export_dot(s: *const McStructure, out: *mut *mut c_char) -> McStatus {
    guard(|| put_string(out, io::export_levi_dot(handle(s, "s")?)))
}
