//! C ABI over `tamari`.
//!
//! Every fallible call returns a [`TamariStatus`] and writes its result
//! through an out-pointer. On failure a message is kept per thread and can
//! be read with [`tamari_last_error_message`]. Objects come back as opaque
//! handles owned by the caller and released with the matching `_free`.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use tamari::crosssection::{g, g_bar};
use tamari::enumerate::{Enumeration, Limits};
use tamari::io::{canonical_json, EnumerationFile};
use tamari::simplicial::{enumerate_hst, validate, Triangulation, TriangulationJson};
use tamari::verify::verify_enumerations;
use tamari::witness::{build_q_t, odd_preimage};
use tamari::zonotopal::{cubillage_from_inversion_set, enumerate_bruhat, Cubillage, CubillageJson, InversionSet};
use tamari::{Error, Subset};

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TamariStatus {
    Ok = 0,
    /// Null pointer or non-UTF-8 string.
    NullOrInvalidArgument = 1,
    /// Malformed or out-of-domain input.
    InvalidInput = 2,
    LimitExceeded = 3,
    ScheduleFailed = 4,
    SearchExhausted = 5,
    Internal = 6,
    Io = 7,
    Panic = 8,
}

pub struct TamariCubillage {
    inner: Cubillage,
}

pub struct TamariTriangulation {
    inner: Triangulation,
}

pub struct TamariEnumeration {
    file: EnumerationFile,
    covers: usize,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_last_error(msg: impl Into<String>) {
    let s = msg.into().replace('\0', " ");
    LAST_ERROR.with(|e| *e.borrow_mut() = CString::new(s).ok());
}

fn status_of(e: &Error) -> TamariStatus {
    match e {
        Error::LimitExceeded { .. } => TamariStatus::LimitExceeded,
        Error::ScheduleFailed { .. } => TamariStatus::ScheduleFailed,
        Error::SearchExhausted(_) => TamariStatus::SearchExhausted,
        Error::Internal(_) | Error::Cyclic(_) => TamariStatus::Internal,
        Error::Io(_) => TamariStatus::Io,
        _ => TamariStatus::InvalidInput,
    }
}

enum Fail {
    Arg(&'static str),
    Lib(Error),
}

impl From<Error> for Fail {
    fn from(e: Error) -> Self {
        Fail::Lib(e)
    }
}

impl From<serde_json::Error> for Fail {
    fn from(e: serde_json::Error) -> Self {
        Fail::Lib(e.into())
    }
}

fn guard(f: impl FnOnce() -> Result<(), Fail>) -> TamariStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => TamariStatus::Ok,
        Ok(Err(Fail::Arg(what))) => {
            set_last_error(what);
            TamariStatus::NullOrInvalidArgument
        }
        Ok(Err(Fail::Lib(e))) => {
            set_last_error(e.to_string());
            status_of(&e)
        }
        Err(p) => {
            let msg = p
                .downcast_ref::<&str>()
                .map(|s| s.to_string())
                .or_else(|| p.downcast_ref::<String>().cloned())
                .unwrap_or_else(|| "panic".into());
            set_last_error(format!("panic: {msg}"));
            TamariStatus::Panic
        }
    }
}

unsafe fn str_arg<'a>(p: *const c_char, what: &'static str) -> Result<&'a str, Fail> {
    if p.is_null() {
        return Err(Fail::Arg(what));
    }
    CStr::from_ptr(p).to_str().map_err(|_| Fail::Arg(what))
}

unsafe fn handle<'a, T>(p: *const T, what: &'static str) -> Result<&'a T, Fail> {
    p.as_ref().ok_or(Fail::Arg(what))
}

unsafe fn put<T>(out: *mut *mut T, v: T) -> Result<(), Fail> {
    if out.is_null() {
        return Err(Fail::Arg("out pointer is null"));
    }
    *out = Box::into_raw(Box::new(v));
    Ok(())
}

unsafe fn put_string(out: *mut *mut c_char, s: String) -> Result<(), Fail> {
    if out.is_null() {
        return Err(Fail::Arg("out pointer is null"));
    }
    let c = CString::new(s).map_err(|_| Fail::Lib(Error::Internal("string contains NUL".into())))?;
    *out = c.into_raw();
    Ok(())
}

unsafe fn put_value<T>(out: *mut T, v: T) -> Result<(), Fail> {
    if out.is_null() {
        return Err(Fail::Arg("out pointer is null"));
    }
    *out = v;
    Ok(())
}

/// Message of the last failed call on this thread, or NULL. Valid until the
/// next failing call on the same thread; do not free.
#[no_mangle]
pub extern "C" fn tamari_last_error_message() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

#[no_mangle]
pub extern "C" fn tamari_clear_last_error() {
    LAST_ERROR.with(|e| *e.borrow_mut() = None);
}

/// Static version string; do not free.
#[no_mangle]
pub extern "C" fn tamari_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// Frees a string returned by this library. NULL is ignored.
///
/// # Safety
/// `s` must come from a `tamari_*` function and not have been freed.
#[no_mangle]
pub unsafe extern "C" fn tamari_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Parses a cubillage from JSON `{"n", "dim", "spectrum"}`.
///
/// # Safety
/// `json` is a NUL-terminated string; `out` is writable.
#[no_mangle]
pub unsafe extern "C" fn tamari_cubillage_from_json(json: *const c_char, out: *mut *mut TamariCubillage) -> TamariStatus {
    guard(|| {
        let j: CubillageJson = serde_json::from_str(str_arg(json, "json is null or not UTF-8")?)?;
        put(out, TamariCubillage { inner: Cubillage::from_json(&j)? })
    })
}

/// Cubillage of `Z(n, delta+1)` with the given inversion set, written as
/// space-separated subset labels (`"123 124"`, empty for none).
///
/// # Safety
/// `inversions` is a NUL-terminated string; `out` is writable.
#[no_mangle]
pub unsafe extern "C" fn tamari_cubillage_from_inversion_set(
    n: usize,
    delta: usize,
    inversions: *const c_char,
    out: *mut *mut TamariCubillage,
) -> TamariStatus {
    guard(|| {
        let lits = str_arg(inversions, "inversions is null or not UTF-8")?;
        let members = lits.split_whitespace().map(|l| Subset::parse(n, l)).collect::<Result<Vec<_>, _>>()?;
        let inv = InversionSet::new(n, delta, members)?;
        put(out, TamariCubillage { inner: cubillage_from_inversion_set(&inv)? })
    })
}

/// Canonical JSON of a cubillage, including its inversion set.
///
/// # Safety
/// `c` is a live handle; free `*out` with `tamari_string_free`.
#[no_mangle]
pub unsafe extern "C" fn tamari_cubillage_to_json(c: *const TamariCubillage, out: *mut *mut c_char) -> TamariStatus {
    guard(|| {
        let c = handle(c, "cubillage is null")?;
        put_string(out, canonical_json(&c.inner.to_json(true)?)?)
    })
}

/// `n`, zonotope dimension and spectrum size.
///
/// # Safety
/// `c` is a live handle; each out pointer is writable or NULL.
#[no_mangle]
pub unsafe extern "C" fn tamari_cubillage_shape(
    c: *const TamariCubillage,
    n: *mut usize,
    dim: *mut usize,
    spectrum_len: *mut usize,
) -> TamariStatus {
    guard(|| {
        let c = &handle(c, "cubillage is null")?.inner;
        for (p, v) in [(n, c.n()), (dim, c.dim()), (spectrum_len, c.spectrum().len())] {
            if !p.is_null() {
                *p = v;
            }
        }
        Ok(())
    })
}

/// # Safety
/// `c` is NULL or a handle not yet freed.
#[no_mangle]
pub unsafe extern "C" fn tamari_cubillage_free(c: *mut TamariCubillage) {
    if !c.is_null() {
        drop(Box::from_raw(c));
    }
}

/// `g(Q)`: the cubes with initial vertex the empty set.
///
/// # Safety
/// `c` is a live handle; `out` is writable.
#[no_mangle]
pub unsafe extern "C" fn tamari_g(c: *const TamariCubillage, out: *mut *mut TamariTriangulation) -> TamariStatus {
    guard(|| {
        let c = handle(c, "cubillage is null")?;
        put(out, TamariTriangulation { inner: g(&c.inner)? })
    })
}

/// `ḡ(Q)`: the cubes with final vertex `[n]`.
///
/// # Safety
/// `c` is a live handle; `out` is writable.
#[no_mangle]
pub unsafe extern "C" fn tamari_g_bar(c: *const TamariCubillage, out: *mut *mut TamariTriangulation) -> TamariStatus {
    guard(|| {
        let c = handle(c, "cubillage is null")?;
        put(out, TamariTriangulation { inner: g_bar(&c.inner)? })
    })
}

/// Parses a triangulation from JSON `{"n", "delta", "simplices"}`.
///
/// # Safety
/// `json` is a NUL-terminated string; `out` is writable.
#[no_mangle]
pub unsafe extern "C" fn tamari_triangulation_from_json(
    json: *const c_char,
    out: *mut *mut TamariTriangulation,
) -> TamariStatus {
    guard(|| {
        let j: TriangulationJson = serde_json::from_str(str_arg(json, "json is null or not UTF-8")?)?;
        put(out, TamariTriangulation { inner: Triangulation::from_json(&j)? })
    })
}

/// Triangulation of `C(n, delta)` from space-separated simplex labels.
///
/// # Safety
/// `simplices` is a NUL-terminated string; `out` is writable.
#[no_mangle]
pub unsafe extern "C" fn tamari_triangulation_parse(
    n: usize,
    delta: usize,
    simplices: *const c_char,
    out: *mut *mut TamariTriangulation,
) -> TamariStatus {
    guard(|| {
        let lits = str_arg(simplices, "simplices is null or not UTF-8")?;
        put(out, TamariTriangulation { inner: Triangulation::parse(n, delta, lits)? })
    })
}

/// # Safety
/// `t` is a live handle; free `*out` with `tamari_string_free`.
#[no_mangle]
pub unsafe extern "C" fn tamari_triangulation_to_json(t: *const TamariTriangulation, out: *mut *mut c_char) -> TamariStatus {
    guard(|| {
        let t = handle(t, "triangulation is null")?;
        put_string(out, canonical_json(&t.inner.to_json())?)
    })
}

/// Runs the independent triangulation checks.
///
/// # Safety
/// `t` is a live handle; `valid` is writable.
#[no_mangle]
pub unsafe extern "C" fn tamari_triangulation_validate(t: *const TamariTriangulation, valid: *mut bool) -> TamariStatus {
    guard(|| {
        let t = handle(t, "triangulation is null")?;
        put_value(valid, validate(&t.inner).valid)
    })
}

/// # Safety
/// Both are live handles; `equal` is writable.
#[no_mangle]
pub unsafe extern "C" fn tamari_triangulation_equal(
    a: *const TamariTriangulation,
    b: *const TamariTriangulation,
    equal: *mut bool,
) -> TamariStatus {
    guard(|| {
        let (a, b) = (handle(a, "first triangulation is null")?, handle(b, "second triangulation is null")?);
        put_value(equal, a.inner == b.inner)
    })
}

/// # Safety
/// `t` is NULL or a handle not yet freed.
#[no_mangle]
pub unsafe extern "C" fn tamari_triangulation_free(t: *mut TamariTriangulation) {
    if !t.is_null() {
        drop(Box::from_raw(t));
    }
}

/// A cubillage `Q` with `g(Q) = T`: `Q_T` for even δ, a completion for odd δ.
///
/// # Safety
/// `t` is a live handle; `out` is writable.
#[no_mangle]
pub unsafe extern "C" fn tamari_preimage(t: *const TamariTriangulation, out: *mut *mut TamariCubillage) -> TamariStatus {
    guard(|| {
        let t = &handle(t, "triangulation is null")?.inner;
        let q = if t.delta() % 2 == 0 { build_q_t(t)? } else { odd_preimage(t)? };
        put(out, TamariCubillage { inner: q })
    })
}

fn limits(max_elements: usize) -> Limits {
    Limits { max_elements: (max_elements > 0).then_some(max_elements), ..Limits::default() }
}

fn wrap_enumeration(file: EnumerationFile) -> TamariEnumeration {
    let covers = file.poset.covers.len();
    TamariEnumeration { file, covers }
}

/// Enumerates `B(n, delta+1)`. `max_elements == 0` means the default cap.
///
/// # Safety
/// `out` is writable.
#[no_mangle]
pub unsafe extern "C" fn tamari_enumerate_bruhat(
    n: usize,
    delta: usize,
    max_elements: usize,
    out: *mut *mut TamariEnumeration,
) -> TamariStatus {
    guard(|| {
        let e: Enumeration<Cubillage> = enumerate_bruhat(n, delta + 1, &limits(max_elements))?;
        put(out, wrap_enumeration(EnumerationFile::from_bruhat(&e)?))
    })
}

/// Enumerates `S(n, delta)`. `max_elements == 0` means the default cap.
///
/// # Safety
/// `out` is writable.
#[no_mangle]
pub unsafe extern "C" fn tamari_enumerate_hst(
    n: usize,
    delta: usize,
    max_elements: usize,
    out: *mut *mut TamariEnumeration,
) -> TamariStatus {
    guard(|| {
        let e = enumerate_hst(n, delta, &limits(max_elements))?;
        put(out, wrap_enumeration(EnumerationFile::from_hst(&e)?))
    })
}

/// Element and cover counts.
///
/// # Safety
/// `e` is a live handle; each out pointer is writable or NULL.
#[no_mangle]
pub unsafe extern "C" fn tamari_enumeration_size(
    e: *const TamariEnumeration,
    elements: *mut usize,
    covers: *mut usize,
) -> TamariStatus {
    guard(|| {
        let e = handle(e, "enumeration is null")?;
        if !elements.is_null() {
            *elements = e.file.elements.len();
        }
        if !covers.is_null() {
            *covers = e.covers;
        }
        Ok(())
    })
}

/// Canonical JSON, byte-identical to the CLI cache file.
///
/// # Safety
/// `e` is a live handle; free `*out` with `tamari_string_free`.
#[no_mangle]
pub unsafe extern "C" fn tamari_enumeration_to_json(e: *const TamariEnumeration, out: *mut *mut c_char) -> TamariStatus {
    guard(|| {
        let e = handle(e, "enumeration is null")?;
        put_string(out, canonical_json(&e.file)?)
    })
}

/// # Safety
/// `e` is NULL or a handle not yet freed.
#[no_mangle]
pub unsafe extern "C" fn tamari_enumeration_free(e: *mut TamariEnumeration) {
    if !e.is_null() {
        drop(Box::from_raw(e));
    }
}

/// Checks that `g: B(n, delta+1) -> S(n, delta)` is a quotient map whose
/// fibre quotient is `S(n, delta)`.
///
/// # Safety
/// `pass` is writable.
#[no_mangle]
pub unsafe extern "C" fn tamari_verify(n: usize, delta: usize, max_elements: usize, pass: *mut bool) -> TamariStatus {
    guard(|| {
        let lim = limits(max_elements);
        let b = enumerate_bruhat(n, delta + 1, &lim)?;
        let s = enumerate_hst(n, delta, &lim)?;
        put_value(pass, verify_enumerations(&b, &s)?.pass)
    })
}
