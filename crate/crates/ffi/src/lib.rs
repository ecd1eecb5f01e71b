//! C ABI for the `starline` library.
//!
//! Germs, index sets and fragments cross the boundary as opaque heap
//! handles created by `*_parse` or arithmetic functions and released with the
//! matching `*_free`. Every fallible call returns a [`StarlineStatus`]; on
//! failure the message is available from [`starline_last_error`] on the same
//! thread. Strings handed out by the library must be released with
//! [`starline_string_free`].
//!
//! # Safety
//!
//! Pointer arguments must be null or valid for the duration of the call.
//! Handles must come from this library and must not be used after being
//! freed. Null inputs are reported as `STARLINE_STATUS_NULL_POINTER`.
#![allow(clippy::missing_safety_doc)]

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use starline::{
    expr, hyper, limits, models, rational, Error, ErrorKind, Germ, NatSet, UltraFragment,
};

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StarlineStatus {
    Ok = 0,
    /// Malformed text or argument.
    Usage = 1,
    /// Mathematically refused (not finite, no witness, ...).
    Domain = 2,
    /// A self-check inside the library failed.
    Internal = 3,
    NullPointer = 4,
    InvalidUtf8 = 5,
    Panic = 6,
}

pub struct StarlineGerm {
    inner: Germ,
}

pub struct StarlineNatSet {
    inner: NatSet,
}

pub struct StarlineFragment {
    inner: UltraFragment,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct StarlineClassification {
    pub infinitesimal: bool,
    pub finite: bool,
    pub infinitely_large: bool,
    pub standard: bool,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<(String, String)>> = const { RefCell::new(None) };
}

fn set_error(name: &str, message: String) {
    LAST_ERROR.with(|e| *e.borrow_mut() = Some((name.to_string(), message)));
}

fn fail(err: Error) -> StarlineStatus {
    set_error(err.name(), err.to_string());
    match err.kind() {
        ErrorKind::Usage => StarlineStatus::Usage,
        ErrorKind::Domain => StarlineStatus::Domain,
        ErrorKind::Internal => StarlineStatus::Internal,
    }
}

struct Failure(StarlineStatus);

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure(fail(e))
    }
}

fn null(what: &str) -> Failure {
    set_error("NullPointer", format!("{what} is null"));
    Failure(StarlineStatus::NullPointer)
}

/// Runs `body`, converting errors and panics into status codes.
fn guard(body: impl FnOnce() -> Result<(), Failure>) -> StarlineStatus {
    LAST_ERROR.with(|e| *e.borrow_mut() = None);
    match catch_unwind(AssertUnwindSafe(body)) {
        Ok(Ok(())) => StarlineStatus::Ok,
        Ok(Err(Failure(s))) => s,
        Err(_) => {
            set_error("Panic", "panic inside starline".into());
            StarlineStatus::Panic
        }
    }
}

unsafe fn text<'a>(p: *const c_char, what: &str) -> Result<&'a str, Failure> {
    if p.is_null() {
        return Err(null(what));
    }
    CStr::from_ptr(p).to_str().map_err(|_| {
        set_error("InvalidUtf8", format!("{what} is not UTF-8"));
        Failure(StarlineStatus::InvalidUtf8)
    })
}

unsafe fn handle<'a, T>(p: *const T, what: &str) -> Result<&'a T, Failure> {
    p.as_ref().ok_or_else(|| null(what))
}

unsafe fn out<'a, T>(p: *mut T, what: &str) -> Result<&'a mut T, Failure> {
    p.as_mut().ok_or_else(|| null(what))
}

fn owned_string(s: String) -> *mut c_char {
    CString::new(s)
        .expect("library strings have no NUL")
        .into_raw()
}

unsafe fn fragment_or_default(p: *const StarlineFragment) -> UltraFragment {
    p.as_ref().map(|f| f.inner.clone()).unwrap_or_default()
}

fn rat_arg(s: &str, what: &str) -> Result<starline::Rational, Failure> {
    rational::parse(s).ok_or_else(|| {
        Failure(fail(Error::InvalidArgument(format!(
            "{what} `{s}` is not p/q"
        ))))
    })
}

/// Name of the last error on this thread (e.g. `"SyntaxError"`), or null.
#[no_mangle]
pub extern "C" fn starline_last_error_name() -> *mut c_char {
    LAST_ERROR.with(|e| {
        e.borrow()
            .as_ref()
            .map_or(ptr::null_mut(), |(n, _)| owned_string(n.clone()))
    })
}

/// Message of the last error on this thread, or null.
#[no_mangle]
pub extern "C" fn starline_last_error() -> *mut c_char {
    LAST_ERROR.with(|e| {
        e.borrow()
            .as_ref()
            .map_or(ptr::null_mut(), |(_, m)| owned_string(m.clone()))
    })
}

#[no_mangle]
pub unsafe extern "C" fn starline_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

#[no_mangle]
pub unsafe extern "C" fn starline_germ_parse(
    src: *const c_char,
    out_germ: *mut *mut StarlineGerm,
) -> StarlineStatus {
    guard(|| {
        let slot = out(out_germ, "out_germ")?;
        let g = expr::parse_germ(text(src, "src")?)?;
        *slot = Box::into_raw(Box::new(StarlineGerm { inner: g }));
        Ok(())
    })
}

#[no_mangle]
pub unsafe extern "C" fn starline_germ_free(g: *mut StarlineGerm) {
    if !g.is_null() {
        drop(Box::from_raw(g));
    }
}

/// Canonical text of the germ; release with `starline_string_free`.
#[no_mangle]
pub unsafe extern "C" fn starline_germ_to_string(
    g: *const StarlineGerm,
    out_str: *mut *mut c_char,
) -> StarlineStatus {
    guard(|| {
        let slot = out(out_str, "out_str")?;
        *slot = owned_string(handle(g, "germ")?.inner.to_string());
        Ok(())
    })
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StarlineOp {
    Add = 0,
    Sub = 1,
    Mul = 2,
    Div = 3,
}

/// `a op b`. Division fails with a domain error when `b` vanishes on a
/// whole residue class.
#[no_mangle]
pub unsafe extern "C" fn starline_germ_arith(
    op: StarlineOp,
    a: *const StarlineGerm,
    b: *const StarlineGerm,
    out_germ: *mut *mut StarlineGerm,
) -> StarlineStatus {
    guard(|| {
        let slot = out(out_germ, "out_germ")?;
        let (a, b) = (&handle(a, "a")?.inner, &handle(b, "b")?.inner);
        let g = match op {
            StarlineOp::Add => a + b,
            StarlineOp::Sub => a - b,
            StarlineOp::Mul => a * b,
            StarlineOp::Div => a.checked_div(b)?,
        };
        *slot = Box::into_raw(Box::new(StarlineGerm { inner: g }));
        Ok(())
    })
}

/// Writes -1, 0 or 1. A null fragment means the default fragment.
#[no_mangle]
pub unsafe extern "C" fn starline_germ_compare(
    a: *const StarlineGerm,
    b: *const StarlineGerm,
    frag: *const StarlineFragment,
    out_order: *mut i32,
) -> StarlineStatus {
    guard(|| {
        let slot = out(out_order, "out_order")?;
        let f = fragment_or_default(frag);
        *slot = hyper::compare(&handle(a, "a")?.inner, &handle(b, "b")?.inner, &f) as i32;
        Ok(())
    })
}

#[no_mangle]
pub unsafe extern "C" fn starline_germ_classify(
    g: *const StarlineGerm,
    frag: *const StarlineFragment,
    out_class: *mut StarlineClassification,
) -> StarlineStatus {
    guard(|| {
        let slot = out(out_class, "out_class")?;
        let c = handle(g, "germ")?
            .inner
            .classify(&fragment_or_default(frag));
        *slot = StarlineClassification {
            infinitesimal: c.infinitesimal,
            finite: c.finite,
            infinitely_large: c.infinitely_large,
            standard: c.standard,
        };
        Ok(())
    })
}

/// Standard part as `"p/q"`; a domain error for infinitely large germs.
#[no_mangle]
pub unsafe extern "C" fn starline_germ_standard_part(
    g: *const StarlineGerm,
    frag: *const StarlineFragment,
    out_str: *mut *mut c_char,
) -> StarlineStatus {
    guard(|| {
        let slot = out(out_str, "out_str")?;
        let st = handle(g, "germ")?
            .inner
            .standard_part(&fragment_or_default(frag))?;
        *slot = owned_string(rational::format(&st));
        Ok(())
    })
}

/// Limit verdict as a JSON object.
#[no_mangle]
pub unsafe extern "C" fn starline_limit_json(
    g: *const StarlineGerm,
    out_json: *mut *mut c_char,
) -> StarlineStatus {
    guard(|| {
        let slot = out(out_json, "out_json")?;
        let v = limits::limit(&handle(g, "germ")?.inner)?;
        *slot = owned_string(v.to_json(true).to_string());
        Ok(())
    })
}

/// Least `ν` with `|a_n - L| < eps` for all `n >= ν`. `limit` and `eps` are
/// rationals in `p/q` text.
#[no_mangle]
pub unsafe extern "C" fn starline_witness_nu(
    g: *const StarlineGerm,
    limit: *const c_char,
    eps: *const c_char,
    out_nu: *mut u64,
) -> StarlineStatus {
    guard(|| {
        let slot = out(out_nu, "out_nu")?;
        let l = rat_arg(text(limit, "limit")?, "limit")?;
        let e = rat_arg(text(eps, "eps")?, "eps")?;
        *slot = limits::witness_nu(&handle(g, "germ")?.inner, &l, &e)?;
        Ok(())
    })
}

#[no_mangle]
pub unsafe extern "C" fn starline_natset_parse(
    src: *const c_char,
    out_set: *mut *mut StarlineNatSet,
) -> StarlineStatus {
    guard(|| {
        let slot = out(out_set, "out_set")?;
        let s: NatSet = text(src, "src")?.parse()?;
        *slot = Box::into_raw(Box::new(StarlineNatSet { inner: s }));
        Ok(())
    })
}

#[no_mangle]
pub unsafe extern "C" fn starline_natset_free(s: *mut StarlineNatSet) {
    if !s.is_null() {
        drop(Box::from_raw(s));
    }
}

#[no_mangle]
pub unsafe extern "C" fn starline_natset_to_string(
    s: *const StarlineNatSet,
    out_str: *mut *mut c_char,
) -> StarlineStatus {
    guard(|| {
        let slot = out(out_str, "out_str")?;
        *slot = owned_string(handle(s, "set")?.inner.to_string());
        Ok(())
    })
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StarlineSetOp {
    Union = 0,
    Intersect = 1,
    Difference = 2,
}

#[no_mangle]
pub unsafe extern "C" fn starline_natset_combine(
    op: StarlineSetOp,
    a: *const StarlineNatSet,
    b: *const StarlineNatSet,
    out_set: *mut *mut StarlineNatSet,
) -> StarlineStatus {
    guard(|| {
        let slot = out(out_set, "out_set")?;
        let (a, b) = (&handle(a, "a")?.inner, &handle(b, "b")?.inner);
        let s = match op {
            StarlineSetOp::Union => a.union(b),
            StarlineSetOp::Intersect => a.intersect(b),
            StarlineSetOp::Difference => a.difference(b),
        };
        *slot = Box::into_raw(Box::new(StarlineNatSet { inner: s }));
        Ok(())
    })
}

#[no_mangle]
pub unsafe extern "C" fn starline_natset_complement(
    a: *const StarlineNatSet,
    out_set: *mut *mut StarlineNatSet,
) -> StarlineStatus {
    guard(|| {
        let slot = out(out_set, "out_set")?;
        let s = handle(a, "set")?.inner.complement();
        *slot = Box::into_raw(Box::new(StarlineNatSet { inner: s }));
        Ok(())
    })
}

/// Writes whether the set is cofinite and, if so, the least `ν` with
/// `{ν, ν+1, ...}` inside it (otherwise `out_witness` is left untouched).
#[no_mangle]
pub unsafe extern "C" fn starline_natset_is_cofinite(
    s: *const StarlineNatSet,
    out_cofinite: *mut bool,
    out_witness: *mut u64,
) -> StarlineStatus {
    guard(|| {
        let slot = out(out_cofinite, "out_cofinite")?;
        let set = &handle(s, "set")?.inner;
        *slot = set.is_cofinite();
        if let (Some(w), Some(dst)) = (set.frechet_witness(), out_witness.as_mut()) {
            *dst = w;
        }
        Ok(())
    })
}

/// Parses `"m:r,..."`; the empty string is the default fragment.
#[no_mangle]
pub unsafe extern "C" fn starline_fragment_parse(
    src: *const c_char,
    out_frag: *mut *mut StarlineFragment,
) -> StarlineStatus {
    guard(|| {
        let slot = out(out_frag, "out_frag")?;
        let f: UltraFragment = text(src, "src")?.parse()?;
        *slot = Box::into_raw(Box::new(StarlineFragment { inner: f }));
        Ok(())
    })
}

#[no_mangle]
pub unsafe extern "C" fn starline_fragment_free(f: *mut StarlineFragment) {
    if !f.is_null() {
        drop(Box::from_raw(f));
    }
}

#[no_mangle]
pub unsafe extern "C" fn starline_fragment_decide(
    f: *const StarlineFragment,
    s: *const StarlineNatSet,
    out_member: *mut bool,
) -> StarlineStatus {
    guard(|| {
        let slot = out(out_member, "out_member")?;
        *slot = handle(f, "fragment")?
            .inner
            .decide(&handle(s, "set")?.inner);
        Ok(())
    })
}

#[no_mangle]
pub unsafe extern "C" fn starline_fragment_measure(
    f: *const StarlineFragment,
    s: *const StarlineNatSet,
    out_measure: *mut u8,
) -> StarlineStatus {
    guard(|| {
        let slot = out(out_measure, "out_measure")?;
        *slot = handle(f, "fragment")?
            .inner
            .measure()
            .of(&handle(s, "set")?.inner);
        Ok(())
    })
}

/// Exhaustive filter checks on a universe of size `k` (1..=4), as JSON.
#[no_mangle]
pub unsafe extern "C" fn starline_model_check_json(
    k: u32,
    out_json: *mut *mut c_char,
) -> StarlineStatus {
    guard(|| {
        let slot = out(out_json, "out_json")?;
        *slot = owned_string(models::model_check(k as usize)?.to_json().to_string());
        Ok(())
    })
}
