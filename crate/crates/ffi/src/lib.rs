//! C ABI over `cantor-toolkit`.
//!
//! Every fallible function returns a [`CtStatus`] and writes its result
//! through an out-pointer. On failure, [`ct_last_error`] describes the most
//! recent error on the calling thread. Handles are opaque and must be
//! released with their `*_free` function; strings returned by the library
//! are released with [`ct_string_free`]. Rationals cross the boundary as
//! `"p/q"` strings (decimals such as `"0.5"` are accepted on input).

use std::cell::RefCell;
use std::cmp::Ordering;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};

use cantor_toolkit::coding::{membership, Verdict};
use cantor_toolkit::dimension::sft_count;
use cantor_toolkit::exact_arith::{
    compare_brackets, default_tol, format_rational, parse_rational, solve_lambda, to_f64, Bracket, Code,
};
use cantor_toolkit::lambda_set::{cover_levels, CoverLevel};
use cantor_toolkit::report::{render_thickness, CoverView, Format, ThicknessView};
use cantor_toolkit::thickness::{ek_hulls, tau_report};
use cantor_toolkit::{Error, Rational};

/// Status code of every fallible call.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CtStatus {
    Ok = 0,
    /// A required pointer argument was null.
    NullPointer = 1,
    /// A string argument was not valid UTF-8 or could not be parsed.
    Parse = 2,
    Domain = 3,
    NoRoot = 4,
    PrecisionExhausted = 5,
    NotAdmissible = 6,
    HullViolation = 7,
    EmptyWindow = 8,
    /// An index was outside the handle's range.
    OutOfRange = 9,
    /// The library panicked; this is a bug.
    Panic = 10,
}

/// Verdict of [`ct_membership`].
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CtVerdict {
    Member = 0,
    NotMember = 1,
    Undetermined = 2,
}

/// Nested covers of a parameter set, levels `ℓ..=depth`.
pub struct CtCover {
    levels: Vec<CoverLevel>,
}

/// An exact rational interval enclosing one parameter.
pub struct CtBracket {
    inner: Bracket,
}

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_error(msg: &str) {
    let c = CString::new(msg.replace('\0', " ")).expect("no interior NUL");
    LAST_ERROR.with(|e| *e.borrow_mut() = c);
}

fn status_of(e: &Error) -> CtStatus {
    match e {
        Error::Domain(_) => CtStatus::Domain,
        Error::NoRoot(_) => CtStatus::NoRoot,
        Error::PrecisionExhausted { .. } | Error::PrecisionExhaustedAt { .. } => CtStatus::PrecisionExhausted,
        Error::HullViolation(_) => CtStatus::HullViolation,
        Error::NotAdmissible(_) => CtStatus::NotAdmissible,
        Error::EmptyWindow => CtStatus::EmptyWindow,
        Error::Parse(_) => CtStatus::Parse,
    }
}

struct Fail(CtStatus, String);

impl From<Error> for Fail {
    fn from(e: Error) -> Self {
        Fail(status_of(&e), e.to_string())
    }
}

fn null(name: &str) -> Fail {
    Fail(CtStatus::NullPointer, format!("{name} is null"))
}

/// Runs `f`, converting errors and panics into a status code.
fn guard(f: impl FnOnce() -> Result<(), Fail>) -> CtStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => CtStatus::Ok,
        Ok(Err(Fail(status, msg))) => {
            set_error(&msg);
            status
        }
        Err(_) => {
            set_error("internal panic");
            CtStatus::Panic
        }
    }
}

unsafe fn read_str<'a>(p: *const c_char, name: &str) -> Result<&'a str, Fail> {
    if p.is_null() {
        return Err(null(name));
    }
    CStr::from_ptr(p).to_str().map_err(|_| Fail(CtStatus::Parse, format!("{name} is not UTF-8")))
}

unsafe fn read_rational(p: *const c_char, name: &str) -> Result<Rational, Fail> {
    Ok(parse_rational(read_str(p, name)?)?)
}

unsafe fn write<T>(out: *mut T, value: T, name: &str) -> Result<(), Fail> {
    if out.is_null() {
        return Err(null(name));
    }
    out.write(value);
    Ok(())
}

fn c_string(s: String) -> *mut c_char {
    CString::new(s).expect("output has no interior NUL").into_raw()
}

/// Message of the last failed call on this thread; empty if none. The
/// pointer stays valid until the next failing call on the same thread.
#[no_mangle]
pub extern "C" fn ct_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ptr())
}

/// Releases a string returned by this library. Null is ignored.
///
/// # Safety
/// `s` must come from this library and not have been freed.
#[no_mangle]
pub unsafe extern "C" fn ct_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Computes the covers of `Λ(x)` down to `depth`.
///
/// # Safety
/// `x` must be a NUL-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn ct_cover_new(x: *const c_char, m: u32, depth: usize, out: *mut *mut CtCover) -> CtStatus {
    guard(|| {
        let x = read_rational(x, "x")?;
        let levels = cover_levels(&x, m, depth, &default_tol())?;
        write(out, Box::into_raw(Box::new(CtCover { levels })), "out")
    })
}

/// # Safety
/// `cover` must come from [`ct_cover_new`] and not have been freed.
#[no_mangle]
pub unsafe extern "C" fn ct_cover_free(cover: *mut CtCover) {
    if !cover.is_null() {
        drop(Box::from_raw(cover));
    }
}

/// Number of intervals at the deepest level; 0 for null.
///
/// # Safety
/// `cover` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn ct_cover_len(cover: *const CtCover) -> usize {
    cover.as_ref().and_then(|c| c.levels.last()).map_or(0, |l| l.intervals.len())
}

/// Endpoint midpoints of the `index`-th deepest interval, in increasing
/// order of the parameter.
///
/// # Safety
/// `cover` must be a live handle; `lo` and `hi` valid pointers.
#[no_mangle]
pub unsafe extern "C" fn ct_cover_interval(
    cover: *const CtCover,
    index: usize,
    lo: *mut f64,
    hi: *mut f64,
) -> CtStatus {
    guard(|| {
        let cover = cover.as_ref().ok_or_else(|| null("cover"))?;
        let level = cover.levels.last().expect("nonempty");
        let j = level
            .intervals
            .get(index)
            .ok_or_else(|| Fail(CtStatus::OutOfRange, format!("index {index} of {}", level.intervals.len())))?;
        write(lo, to_f64(&j.left().midpoint()), "lo")?;
        write(hi, to_f64(&j.right().midpoint()), "hi")
    })
}

/// The deepest level as JSON with `digits` fractional digits.
///
/// # Safety
/// `cover` must be a live handle; `out` a valid pointer. Free the result
/// with [`ct_string_free`].
#[no_mangle]
pub unsafe extern "C" fn ct_cover_json(cover: *const CtCover, digits: usize, out: *mut *mut c_char) -> CtStatus {
    guard(|| {
        let cover = cover.as_ref().ok_or_else(|| null("cover"))?;
        let json = CoverView::from_levels(&cover.levels, digits).render(Format::Json);
        write(out, c_string(json), "out")
    })
}

/// Brackets the parameter `λ` with `π_λ(code) = x`. `code` has the form
/// `"<digits>:<zero|max|trunc>"`, e.g. `"11:zero"`.
///
/// # Safety
/// `x` and `code` must be NUL-terminated strings; `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn ct_solve_lambda(
    x: *const c_char,
    m: u32,
    code: *const c_char,
    out: *mut *mut CtBracket,
) -> CtStatus {
    guard(|| {
        let x = read_rational(x, "x")?;
        let code = Code::parse(m, read_str(code, "code")?)?;
        let inner = solve_lambda(&x, &code, &default_tol())?;
        write(out, Box::into_raw(Box::new(CtBracket { inner })), "out")
    })
}

/// # Safety
/// `bracket` must come from this library and not have been freed.
#[no_mangle]
pub unsafe extern "C" fn ct_bracket_free(bracket: *mut CtBracket) {
    if !bracket.is_null() {
        drop(Box::from_raw(bracket));
    }
}

/// Exact bounds of the bracket as `"p/q"` strings.
///
/// # Safety
/// `bracket` must be a live handle; `lo` and `hi` valid pointers. Free both
/// results with [`ct_string_free`].
#[no_mangle]
pub unsafe extern "C" fn ct_bracket_bounds(
    bracket: *const CtBracket,
    lo: *mut *mut c_char,
    hi: *mut *mut c_char,
) -> CtStatus {
    guard(|| {
        let b = &bracket.as_ref().ok_or_else(|| null("bracket"))?.inner;
        if lo.is_null() || hi.is_null() {
            return Err(null("lo or hi"));
        }
        write(lo, c_string(format_rational(b.lo())), "lo")?;
        write(hi, c_string(format_rational(b.hi())), "hi")
    })
}

/// Midpoint of the bracket; NaN for null.
///
/// # Safety
/// `bracket` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn ct_bracket_midpoint(bracket: *const CtBracket) -> f64 {
    bracket.as_ref().map_or(f64::NAN, |b| to_f64(&b.inner.midpoint()))
}

/// Certified order of two parameters: writes -1, 0 or 1.
///
/// # Safety
/// `a` and `b` must be live handles; `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn ct_bracket_compare(a: *const CtBracket, b: *const CtBracket, out: *mut i32) -> CtStatus {
    guard(|| {
        let a = &a.as_ref().ok_or_else(|| null("a"))?.inner;
        let b = &b.as_ref().ok_or_else(|| null("b"))?.inner;
        let ord = match compare_brackets(a, b)? {
            Ordering::Less => -1,
            Ordering::Equal => 0,
            Ordering::Greater => 1,
        };
        write(out, ord, "out")
    })
}

/// Decides whether `x ∈ K_λ` for rational `λ ∈ (0, 1/m]`.
///
/// # Safety
/// `x` and `lambda` must be NUL-terminated strings; `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn ct_membership(
    x: *const c_char,
    lambda: *const c_char,
    m: u32,
    max_steps: usize,
    out: *mut CtVerdict,
) -> CtStatus {
    guard(|| {
        let x = read_rational(x, "x")?;
        let lambda = read_rational(lambda, "lambda")?;
        let verdict = match membership(&x, &lambda, m, max_steps)?.verdict {
            Verdict::Member { .. } => CtVerdict::Member,
            Verdict::NotMember { .. } => CtVerdict::NotMember,
            Verdict::Undetermined { .. } => CtVerdict::Undetermined,
        };
        write(out, verdict, "out")
    })
}

/// Thickness reports for `E_1 … E_kmax` as JSON.
///
/// # Safety
/// `x` must be a NUL-terminated string; `out` a valid pointer. Free the
/// result with [`ct_string_free`].
#[no_mangle]
pub unsafe extern "C" fn ct_thickness_json(
    x: *const c_char,
    m: u32,
    kmax: usize,
    depth: usize,
    digits: usize,
    out: *mut *mut c_char,
) -> CtStatus {
    guard(|| {
        let x = read_rational(x, "x")?;
        let tol = default_tol();
        let views = ek_hulls(&x, m, kmax, &tol)?
            .iter()
            .map(|sys| tau_report(sys, depth, &tol).map(|r| ThicknessView::new(&r, m, digits)))
            .collect::<Result<Vec<_>, _>>()?;
        write(out, c_string(render_thickness(&x, m, &views, Format::Json)), "out")
    })
}

/// Number of length-`n` words over `m` letters without `k` consecutive
/// zeros (decimal string) and its growth-rate estimate.
///
/// # Safety
/// `count` and `growth` must be valid pointers. Free `*count` with
/// [`ct_string_free`].
#[no_mangle]
pub unsafe extern "C" fn ct_sft_count(
    m: u32,
    k: usize,
    n: usize,
    count: *mut *mut c_char,
    growth: *mut f64,
) -> CtStatus {
    guard(|| {
        if count.is_null() || growth.is_null() {
            return Err(null("count or growth"));
        }
        let r = sft_count(m, k, n)?;
        write(growth, r.growth, "growth")?;
        write(count, c_string(r.count.to_string()), "count")
    })
}
