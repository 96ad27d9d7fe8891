//! C ABI over the hyperstutter library.
//!
//! Objects are opaque handles created by `*_parse` or by an operation and
//! released with the matching `*_free`. Every fallible call returns an
//! [`HsStatus`]; on failure `hs_last_error` describes the problem until the
//! next call on the same thread. Strings returned to the caller are released
//! with [`hs_string_free`].

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};

use hyperstutter::hyper_eval::check_traceset;
use hyperstutter::pnf::to_pnf;
use hyperstutter::reduce::{c, s};
use hyperstutter::soa::{eval_normalized, parse_flat, Normalized};
use hyperstutter::syntax::{classify, parse_hyper, Fragment, HyperFormula};
use hyperstutter::traces::TraceSet;

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum HsStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidUtf8 = 2,
    ParseError = 3,
    EvalError = 4,
    InvalidArgument = 5,
    Panic = 6,
}

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum HsFragment {
    HyperLtl = 0,
    HyperLtlC = 1,
    HyperLtlS = 2,
    GhyLtlSc = 3,
}

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum HsVariant {
    Stutter = 0,
    Context = 1,
}

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct HsClassification {
    pub fragment: HsFragment,
    pub prenex: bool,
    pub past_free: bool,
}

/// Parsed hyper formula.
pub struct HsFormula(HyperFormula);

/// Named set of lasso traces.
pub struct HsTraceSet(TraceSet);

/// Flattened arithmetic sentence.
pub struct HsSoa(Normalized);

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_error(msg: impl Into<String>) {
    let msg = CString::new(msg.into().replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = msg);
}

struct Fail(HsStatus, String);

impl Fail {
    fn new(status: HsStatus, e: impl ToString) -> Self {
        Fail(status, e.to_string())
    }
}

fn guard(body: impl FnOnce() -> Result<(), Fail>) -> HsStatus {
    set_error("");
    match catch_unwind(AssertUnwindSafe(body)) {
        Ok(Ok(())) => HsStatus::Ok,
        Ok(Err(Fail(status, msg))) => {
            set_error(msg);
            status
        }
        Err(_) => {
            set_error("internal panic");
            HsStatus::Panic
        }
    }
}

unsafe fn text<'a>(p: *const c_char) -> Result<&'a str, Fail> {
    if p.is_null() {
        return Err(Fail::new(HsStatus::NullPointer, "null string"));
    }
    CStr::from_ptr(p).to_str().map_err(|e| Fail::new(HsStatus::InvalidUtf8, e))
}

unsafe fn handle<'a, T>(p: *const T) -> Result<&'a T, Fail> {
    p.as_ref().ok_or_else(|| Fail::new(HsStatus::NullPointer, "null handle"))
}

unsafe fn put<T>(out: *mut T, v: T) -> Result<(), Fail> {
    if out.is_null() {
        return Err(Fail::new(HsStatus::NullPointer, "null output pointer"));
    }
    out.write(v);
    Ok(())
}

unsafe fn put_boxed<T>(out: *mut *mut T, v: T) -> Result<(), Fail> {
    put(out, Box::into_raw(Box::new(v)))
}

/// Message for the last failed call on this thread; empty after success.
/// Valid until the next call on this thread.
#[no_mangle]
pub extern "C" fn hs_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ptr())
}

/// Releases a string returned by this library.
///
/// # Safety
/// `s` is null or came from this library and was not freed before.
#[no_mangle]
pub unsafe extern "C" fn hs_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// # Safety
/// `src` is a NUL-terminated string; `out` is writable.
#[no_mangle]
pub unsafe extern "C" fn hs_formula_parse(src: *const c_char, out: *mut *mut HsFormula) -> HsStatus {
    guard(|| {
        let f = parse_hyper(text(src)?).map_err(|e| Fail::new(HsStatus::ParseError, e))?;
        put_boxed(out, HsFormula(f))
    })
}

/// # Safety
/// `f` is null or a live handle from this library.
#[no_mangle]
pub unsafe extern "C" fn hs_formula_free(f: *mut HsFormula) {
    if !f.is_null() {
        drop(Box::from_raw(f));
    }
}

/// Writes the concrete syntax of `f`; release it with [`hs_string_free`].
///
/// # Safety
/// `f` is a live handle; `out` is writable.
#[no_mangle]
pub unsafe extern "C" fn hs_formula_print(f: *const HsFormula, out: *mut *mut c_char) -> HsStatus {
    guard(|| {
        let s = CString::new(handle(f)?.0.to_string()).map_err(|e| Fail::new(HsStatus::InvalidUtf8, e))?;
        put(out, s.into_raw())
    })
}

/// # Safety
/// `f` is a live handle; `out` is writable.
#[no_mangle]
pub unsafe extern "C" fn hs_formula_classify(f: *const HsFormula, out: *mut HsClassification) -> HsStatus {
    guard(|| {
        let c = classify(&handle(f)?.0);
        let fragment = match c.fragment {
            Fragment::HyperLtl => HsFragment::HyperLtl,
            Fragment::HyperLtlC => HsFragment::HyperLtlC,
            Fragment::HyperLtlS => HsFragment::HyperLtlS,
            Fragment::GHyLtlSC => HsFragment::GhyLtlSc,
        };
        put(out, HsClassification { fragment, prenex: c.prenex, past_free: c.past_free })
    })
}

/// Prenex normal form of a sentence as a new handle.
///
/// # Safety
/// `f` is a live handle; `out` is writable.
#[no_mangle]
pub unsafe extern "C" fn hs_formula_to_pnf(f: *const HsFormula, out: *mut *mut HsFormula) -> HsStatus {
    guard(|| {
        let p = to_pnf(&handle(f)?.0).map_err(|e| Fail::new(HsStatus::InvalidArgument, e))?;
        put_boxed(out, HsFormula(p.formula))
    })
}

/// Parses the `name = prefix | loop` trace format.
///
/// # Safety
/// `src` is a NUL-terminated string; `out` is writable.
#[no_mangle]
pub unsafe extern "C" fn hs_traces_parse(src: *const c_char, out: *mut *mut HsTraceSet) -> HsStatus {
    guard(|| {
        let l = TraceSet::parse(text(src)?).map_err(|e| Fail::new(HsStatus::ParseError, e))?;
        put_boxed(out, HsTraceSet(l))
    })
}

/// # Safety
/// `l` is null or a live handle from this library.
#[no_mangle]
pub unsafe extern "C" fn hs_traces_free(l: *mut HsTraceSet) {
    if !l.is_null() {
        drop(Box::from_raw(l));
    }
}

/// Number of traces, or 0 for a null handle.
///
/// # Safety
/// `l` is null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn hs_traces_len(l: *const HsTraceSet) -> usize {
    l.as_ref().map_or(0, |l| l.0.len())
}

/// Whether the trace set satisfies the sentence.
///
/// # Safety
/// `l` and `f` are live handles; `out` is writable.
#[no_mangle]
pub unsafe extern "C" fn hs_check(l: *const HsTraceSet, f: *const HsFormula, out: *mut bool) -> HsStatus {
    guard(|| {
        let v = check_traceset(&handle(l)?.0, &handle(f)?.0).map_err(|e| Fail::new(HsStatus::EvalError, e))?;
        put(out, v)
    })
}

/// Parses an arithmetic sentence, flattening compound terms.
///
/// # Safety
/// `src` is a NUL-terminated string; `out` is writable.
#[no_mangle]
pub unsafe extern "C" fn hs_soa_parse(src: *const c_char, out: *mut *mut HsSoa) -> HsStatus {
    guard(|| {
        let n = parse_flat(text(src)?).map_err(|e| Fail::new(HsStatus::ParseError, e))?;
        put_boxed(out, HsSoa(n))
    })
}

/// # Safety
/// `s` is null or a live handle from this library.
#[no_mangle]
pub unsafe extern "C" fn hs_soa_free(s: *mut HsSoa) {
    if !s.is_null() {
        drop(Box::from_raw(s));
    }
}

/// Truth with numbers in `0..=bound` and sets over its subsets.
///
/// # Safety
/// `s` is a live handle; `out` is writable.
#[no_mangle]
pub unsafe extern "C" fn hs_soa_eval(s: *const HsSoa, bound: u64, out: *mut bool) -> HsStatus {
    guard(|| {
        let v = eval_normalized(&handle(s)?.0, bound).map_err(|e| Fail::new(HsStatus::EvalError, e))?;
        put(out, v)
    })
}

/// Hyper sentence produced by one of the two reductions.
///
/// # Safety
/// `s` is a live handle; `out` is writable.
#[no_mangle]
pub unsafe extern "C" fn hs_reduce(s: *const HsSoa, variant: HsVariant, out: *mut *mut HsFormula) -> HsStatus {
    guard(|| {
        let f = &handle(s)?.0.formula;
        let h = match variant {
            HsVariant::Stutter => s::hyp_s(f),
            HsVariant::Context => c::hyp_c(f),
        }
        .map_err(|e| Fail::new(HsStatus::InvalidArgument, e))?;
        put_boxed(out, HsFormula(h))
    })
}

/// Trace pool the reduction's quantifiers range over at `bound`.
///
/// # Safety
/// `s` is a live handle; `out` is writable.
#[no_mangle]
pub unsafe extern "C" fn hs_reduction_pool(
    s: *const HsSoa,
    variant: HsVariant,
    bound: u64,
    out: *mut *mut HsTraceSet,
) -> HsStatus {
    guard(|| {
        let f = &handle(s)?.0.formula;
        let pool = match variant {
            HsVariant::Stutter => s::prepare(f).and_then(|(_, vars)| s::pool_s(&vars, bound)),
            HsVariant::Context => c::pool_c_with(bound, bound),
        }
        .map_err(|e| Fail::new(HsStatus::InvalidArgument, e))?;
        put_boxed(out, HsTraceSet(pool))
    })
}

/// Least `z` solving the period equation for `0 < n1 <= n2`, `n2 >= 2`.
///
/// # Safety
/// `out` is writable.
#[no_mangle]
pub unsafe extern "C" fn hs_minimal_z(n1: u64, n2: u64, out: *mut u64) -> HsStatus {
    guard(|| {
        let z = c::minimal_z(n1, n2).map_err(|e| Fail::new(HsStatus::InvalidArgument, e))?;
        put(out, z)
    })
}

/// Library version as a static string.
#[no_mangle]
pub extern "C" fn hs_version() -> *const c_char {
    static V: &str = concat!(env!("CARGO_PKG_VERSION"), "\0");
    V.as_ptr().cast()
}
