//! C ABI over `qlogic`.
//!
//! Formulas and environments are opaque handles owned by the caller and
//! released with the matching `*_free`. Every fallible call returns a
//! [`QlStatus`]; on failure, [`ql_last_error`] describes what went wrong on
//! the calling thread. Strings handed out by the library are NUL-terminated
//! UTF-8 and must be released with [`ql_string_free`]. Reports are returned
//! as JSON in the same shape the command-line tool prints with `--json`.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};

use qlogic::dbar::{estimate_dbar, separate, DimsStrategy};
use qlogic::formula::{mk_alpha, mk_beta, mk_gamma, mk_p, mk_separator, parse, restrict};
use qlogic::valuation::evaluate_checked;
use qlogic::{Environment, Error, Formula, Tolerance};

/// Result code of every fallible call.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum QlStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidUtf8 = 2,
    ParseError = 3,
    UnboundVariable = 4,
    InvalidArgument = 5,
    SemanticError = 6,
    VerificationFailed = 7,
    JsonError = 8,
    Panic = 9,
}

/// Rank-decision tolerances; see [`ql_tolerance_default`].
#[repr(C)]
#[derive(Debug, Clone, Copy)]
pub struct QlTolerance {
    pub rank_threshold: f64,
    pub guard_band: f64,
}

/// A formula.
pub struct QlFormula(Formula);

/// Subspaces bound to variable names, all in one ambient `C^n`.
pub struct QlEnvironment(Environment);

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_error(msg: &str) {
    let c = CString::new(msg.replace('\0', "?")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = c);
}

struct Fail(QlStatus, String);

impl From<Error> for Fail {
    fn from(e: Error) -> Fail {
        let status = match &e {
            Error::Parse(_) => QlStatus::ParseError,
            Error::UnboundVariable(_) => QlStatus::UnboundVariable,
            Error::InvalidArgument(_) | Error::InvalidTolerance(_) | Error::InvalidIdentifier(_) => {
                QlStatus::InvalidArgument
            }
            Error::Certificate(_) | Error::Witness(_) | Error::Contradiction(_) => QlStatus::VerificationFailed,
            Error::Json(_) => QlStatus::JsonError,
            _ => QlStatus::SemanticError,
        };
        Fail(status, e.to_string())
    }
}

fn guard(body: impl FnOnce() -> Result<(), Fail>) -> QlStatus {
    match catch_unwind(AssertUnwindSafe(body)) {
        Ok(Ok(())) => {
            set_error("");
            QlStatus::Ok
        }
        Ok(Err(Fail(status, msg))) => {
            set_error(&msg);
            status
        }
        Err(_) => {
            set_error("internal panic");
            QlStatus::Panic
        }
    }
}

unsafe fn str_arg<'a>(p: *const c_char, what: &str) -> Result<&'a str, Fail> {
    if p.is_null() {
        return Err(Fail(QlStatus::NullPointer, format!("{what} is null")));
    }
    CStr::from_ptr(p).to_str().map_err(|_| Fail(QlStatus::InvalidUtf8, format!("{what} is not UTF-8")))
}

unsafe fn ref_arg<'a, T>(p: *const T, what: &str) -> Result<&'a T, Fail> {
    p.as_ref().ok_or_else(|| Fail(QlStatus::NullPointer, format!("{what} is null")))
}

unsafe fn put<T>(out: *mut T, value: T, what: &str) -> Result<(), Fail> {
    if out.is_null() {
        return Err(Fail(QlStatus::NullPointer, format!("{what} is null")));
    }
    out.write(value);
    Ok(())
}

unsafe fn put_formula(out: *mut *mut QlFormula, f: Formula) -> Result<(), Fail> {
    put(out, Box::into_raw(Box::new(QlFormula(f))), "out")
}

unsafe fn put_string(out: *mut *mut c_char, s: String) -> Result<(), Fail> {
    let c = CString::new(s).map_err(|_| Fail(QlStatus::InvalidArgument, "interior NUL in output".to_owned()))?;
    put(out, c.into_raw(), "out")
}

fn tolerance(t: QlTolerance) -> Result<Tolerance, Fail> {
    Ok(Tolerance::new(t.rank_threshold, t.guard_band)?)
}

fn to_json(v: &impl serde::Serialize) -> Result<String, Fail> {
    serde_json::to_string_pretty(v).map_err(|e| Fail(QlStatus::JsonError, e.to_string()))
}

/// Message for the most recent failure on this thread, or an empty string.
/// The pointer stays valid until the next call into the library.
#[no_mangle]
pub extern "C" fn ql_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ptr())
}

/// Library version, a static string.
#[no_mangle]
pub extern "C" fn ql_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// Default tolerances: rank threshold 1e-9, guard band 1e-6.
#[no_mangle]
pub extern "C" fn ql_tolerance_default() -> QlTolerance {
    let t = Tolerance::default();
    QlTolerance { rank_threshold: t.rank_threshold, guard_band: t.guard_band }
}

/// Release a string returned by the library. Null is ignored.
///
/// # Safety
/// `s` must be null or a string from this library not yet freed.
#[no_mangle]
pub unsafe extern "C" fn ql_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Parse formula text.
///
/// # Safety
/// `text` must be a NUL-terminated string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn ql_formula_parse(text: *const c_char, out: *mut *mut QlFormula) -> QlStatus {
    guard(|| {
        let text = str_arg(text, "text")?;
        let f = parse(text).map_err(Error::from)?;
        put_formula(out, f.hash_cons())
    })
}

/// Release a formula. Null is ignored.
///
/// # Safety
/// `f` must be null or a formula from this library not yet freed.
#[no_mangle]
pub unsafe extern "C" fn ql_formula_free(f: *mut QlFormula) {
    if !f.is_null() {
        drop(Box::from_raw(f));
    }
}

/// Canonical ASCII text of a formula.
///
/// # Safety
/// `f` must be a live formula; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn ql_formula_print(f: *const QlFormula, out: *mut *mut c_char) -> QlStatus {
    guard(|| {
        let f = ref_arg(f, "formula")?;
        put_string(out, f.0.to_string())
    })
}

/// Node counts: `tree` with shared subterms counted each time (saturating),
/// `dag` counting each distinct subterm once.
///
/// # Safety
/// `f` must be a live formula; `tree` and `dag` must be writable.
#[no_mangle]
pub unsafe extern "C" fn ql_formula_size(f: *const QlFormula, tree: *mut u64, dag: *mut u64) -> QlStatus {
    guard(|| {
        let f = ref_arg(f, "formula")?;
        put(tree, f.0.tree_size(), "tree")?;
        put(dag, f.0.dag_size() as u64, "dag")
    })
}

unsafe fn pair_ctor(
    a: *const c_char,
    b: *const c_char,
    out: *mut *mut QlFormula,
    mk: fn(&str, &str) -> Formula,
) -> QlStatus {
    guard(|| {
        let (a, b) = (str_arg(a, "a")?, str_arg(b, "b")?);
        Formula::try_var(a)?;
        Formula::try_var(b)?;
        if a == b {
            return Err(Fail(QlStatus::InvalidArgument, "the two variables must differ".to_owned()));
        }
        put_formula(out, mk(a, b))
    })
}

/// `(a | !b) & b`.
///
/// # Safety
/// `a`, `b` must be NUL-terminated identifiers; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn ql_formula_p(a: *const c_char, b: *const c_char, out: *mut *mut QlFormula) -> QlStatus {
    pair_ctor(a, b, out, mk_p)
}

/// `(b | !a) & a & !(a & b)`.
///
/// # Safety
/// `a`, `b` must be NUL-terminated identifiers; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn ql_formula_alpha(
    a: *const c_char,
    b: *const c_char,
    out: *mut *mut QlFormula,
) -> QlStatus {
    pair_ctor(a, b, out, mk_alpha)
}

/// The gamma formula used inside beta(l); `l >= 1`.
///
/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn ql_formula_gamma(l: usize, out: *mut *mut QlFormula) -> QlStatus {
    guard(|| put_formula(out, mk_gamma(l)?.formula))
}

/// beta(l), reaching `l` in `C^{2l}` and `l + 1` in `C^{2l+1}`; `l >= 1`.
///
/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn ql_formula_beta(l: usize, out: *mut *mut QlFormula) -> QlStatus {
    guard(|| put_formula(out, mk_beta(l)?.formula))
}

/// Formula separating `C^m` from `C^n` for `1 <= m < n`. If
/// `certificate_json` is non-null it receives the stage certificate.
///
/// # Safety
/// `out` must be writable; `certificate_json` must be null or writable.
#[no_mangle]
pub unsafe extern "C" fn ql_formula_separator(
    m: usize,
    n: usize,
    out: *mut *mut QlFormula,
    certificate_json: *mut *mut c_char,
) -> QlStatus {
    guard(|| {
        let (f, cert) = mk_separator(m, n)?;
        if out.is_null() {
            return Err(Fail(QlStatus::NullPointer, "out is null".to_owned()));
        }
        if !certificate_json.is_null() {
            put_string(certificate_json, to_json(&cert)?)?;
        }
        put_formula(out, f)
    })
}

/// `alpha` relativized to the subspace computed by `beta`. The two formulas
/// must not share variables.
///
/// # Safety
/// `alpha` and `beta` must be live formulas; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn ql_formula_restrict(
    alpha: *const QlFormula,
    beta: *const QlFormula,
    out: *mut *mut QlFormula,
) -> QlStatus {
    guard(|| {
        let (a, b) = (ref_arg(alpha, "alpha")?, ref_arg(beta, "beta")?);
        put_formula(out, restrict(&a.0, &b.0)?)
    })
}

/// Read an environment from JSON:
/// `{"ambient": n, "bindings": {"a": {"ambient": n, "basis": [[[re, im], ...], ...]}}}`.
///
/// # Safety
/// `json` must be a NUL-terminated string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn ql_environment_from_json(json: *const c_char, out: *mut *mut QlEnvironment) -> QlStatus {
    guard(|| {
        let text = str_arg(json, "json")?;
        let env: Environment = serde_json::from_str(text).map_err(|e| Fail(QlStatus::JsonError, e.to_string()))?;
        put(out, Box::into_raw(Box::new(QlEnvironment(env))), "out")
    })
}

/// Release an environment. Null is ignored.
///
/// # Safety
/// `env` must be null or an environment from this library not yet freed.
#[no_mangle]
pub unsafe extern "C" fn ql_environment_free(env: *mut QlEnvironment) {
    if !env.is_null() {
        drop(Box::from_raw(env));
    }
}

/// Evaluate a formula. `dim` receives the dimension of the value; if
/// `value_json` is non-null it receives the value as a JSON subspace.
///
/// # Safety
/// `f` and `env` must be live handles; `dim` must be writable;
/// `value_json` must be null or writable.
#[no_mangle]
pub unsafe extern "C" fn ql_evaluate(
    f: *const QlFormula,
    env: *const QlEnvironment,
    tol: QlTolerance,
    dim: *mut usize,
    value_json: *mut *mut c_char,
) -> QlStatus {
    guard(|| {
        let (f, env) = (ref_arg(f, "formula")?, ref_arg(env, "environment")?);
        let ev = evaluate_checked(&f.0, &env.0, &tolerance(tol)?)?;
        put(dim, ev.value.dim(), "dim")?;
        if !value_json.is_null() {
            put_string(value_json, to_json(&ev.value)?)?;
        }
        Ok(())
    })
}

/// Seeded random search for the largest value dimension in `C^n`.
/// `max_found` receives the maximum; if `report_json` is non-null it
/// receives the full search outcome including a witness.
///
/// # Safety
/// `f` must be a live formula; `max_found` must be writable;
/// `report_json` must be null or writable.
#[no_mangle]
pub unsafe extern "C" fn ql_estimate_dbar(
    f: *const QlFormula,
    n: usize,
    trials: usize,
    seed: u64,
    tol: QlTolerance,
    max_found: *mut usize,
    report_json: *mut *mut c_char,
) -> QlStatus {
    guard(|| {
        let f = ref_arg(f, "formula")?;
        let outcome = estimate_dbar(&f.0, n, trials, &DimsStrategy::Auto, seed, &tolerance(tol)?)?;
        put(max_found, outcome.max_found, "max_found")?;
        if !report_json.is_null() {
            put_string(report_json, to_json(&outcome)?)?;
        }
        Ok(())
    })
}

/// Build and check the separation of `C^m` from `C^n`; `report_json`
/// receives the full report. Fails with `VerificationFailed` if the
/// witness or the zero-test does not hold up.
///
/// # Safety
/// `report_json` must be writable.
#[no_mangle]
pub unsafe extern "C" fn ql_separate(
    m: usize,
    n: usize,
    trials: usize,
    seed: u64,
    tol: QlTolerance,
    report_json: *mut *mut c_char,
) -> QlStatus {
    guard(|| {
        if report_json.is_null() {
            return Err(Fail(QlStatus::NullPointer, "report_json is null".to_owned()));
        }
        let report = separate(m, n, trials, seed, &tolerance(tol)?)?;
        put_string(report_json, to_json(&report)?)
    })
}
