//! C ABI for `minfact`.
//!
//! Polynomials cross the boundary as opaque `MinfactPolynomial` handles
//! released with `minfact_polynomial_free`; strings returned to C are
//! released with `minfact_string_free`. Every entry point returns a
//! `MinfactStatus`; on failure the message is kept per thread and read
//! with `minfact_last_error`. Panics never cross the boundary.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};

use minfact::chains::{count_chains, final_weighted_sum, weighted_sum, Chain};
use minfact::poly::{hook_rhs, theorem1_rhs};
use minfact::trees::{andre_weighted_sum, cayley_weighted_sum};
use minfact::verify::{run_all, BatteryOptions};
use minfact::{FactorizationType, Polynomial};

/// Result codes shared by every function.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum MinfactStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidArgument = 2,
    InvalidUtf8 = 3,
    CheckFailed = 4,
    Internal = 5,
    Panic = 6,
}

/// Opaque handle to an exact polynomial with integer coefficients.
pub struct MinfactPolynomial(Polynomial);

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_error(msg: &str) {
    // interior NULs cannot occur in library messages; drop them if they do
    let clean = CString::new(msg.replace('\0', "")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = clean);
}

fn fail(status: MinfactStatus, msg: impl AsRef<str>) -> MinfactStatus {
    set_error(msg.as_ref());
    status
}

fn from_lib(e: minfact::Error) -> MinfactStatus {
    let status = match e {
        minfact::Error::Internal(_) => MinfactStatus::Internal,
        _ => MinfactStatus::InvalidArgument,
    };
    fail(status, e.to_string())
}

/// Runs `f`, clearing the last error first and turning panics into
/// `MinfactStatus::Panic`.
fn guard(f: impl FnOnce() -> MinfactStatus) -> MinfactStatus {
    set_error("");
    catch_unwind(AssertUnwindSafe(f))
        .unwrap_or_else(|_| fail(MinfactStatus::Panic, "panic inside minfact"))
}

unsafe fn read_type(parts: *const usize, len: usize) -> Result<FactorizationType, MinfactStatus> {
    if parts.is_null() {
        return Err(fail(MinfactStatus::NullPointer, "parts is null"));
    }
    let slice = std::slice::from_raw_parts(parts, len);
    FactorizationType::new(slice.to_vec()).map_err(from_lib)
}

unsafe fn emit(out: *mut *mut MinfactPolynomial, p: Polynomial) -> MinfactStatus {
    *out = Box::into_raw(Box::new(MinfactPolynomial(p)));
    MinfactStatus::Ok
}

unsafe fn emit_string(out: *mut *mut c_char, s: String) -> MinfactStatus {
    match CString::new(s) {
        Ok(c) => {
            *out = c.into_raw();
            MinfactStatus::Ok
        }
        Err(_) => fail(MinfactStatus::Internal, "string contains NUL"),
    }
}

unsafe fn polynomial_from_type(
    parts: *const usize,
    len: usize,
    out: *mut *mut MinfactPolynomial,
    f: fn(&FactorizationType) -> Polynomial,
) -> MinfactStatus {
    guard(|| {
        if out.is_null() {
            return fail(MinfactStatus::NullPointer, "out is null");
        }
        match read_type(parts, len) {
            Ok(a) => emit(out, f(&a)),
            Err(s) => s,
        }
    })
}

/// Sum of chain weights over all chains of type `parts[0..len]`.
///
/// # Safety
/// `parts` must point to `len` readable values and `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn minfact_weighted_sum(
    parts: *const usize,
    len: usize,
    out: *mut *mut MinfactPolynomial,
) -> MinfactStatus {
    polynomial_from_type(parts, len, out, weighted_sum)
}

/// The closed-form product for type `parts[0..len]`.
///
/// # Safety
/// `parts` must point to `len` readable values and `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn minfact_product_formula(
    parts: *const usize,
    len: usize,
    out: *mut *mut MinfactPolynomial,
) -> MinfactStatus {
    polynomial_from_type(parts, len, out, theorem1_rhs)
}

/// Number of chains of type `parts[0..len]`.
///
/// # Safety
/// `parts` must point to `len` readable values and `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn minfact_count_chains(
    parts: *const usize,
    len: usize,
    out: *mut u64,
) -> MinfactStatus {
    guard(|| {
        if out.is_null() {
            return fail(MinfactStatus::NullPointer, "out is null");
        }
        match read_type(parts, len) {
            Ok(a) => {
                *out = count_chains(&a);
                MinfactStatus::Ok
            }
            Err(s) => s,
        }
    })
}

fn check_n(n: usize, min: usize) -> Result<(), MinfactStatus> {
    if n < min || n > minfact::ncpart::MAX_LABEL {
        return Err(fail(
            MinfactStatus::InvalidArgument,
            format!("n = {n} outside {min}..={}", minfact::ncpart::MAX_LABEL),
        ));
    }
    Ok(())
}

/// Hook-weight sum over André trees on `n` vertices.
///
/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn minfact_andre_sum(
    n: usize,
    out: *mut *mut MinfactPolynomial,
) -> MinfactStatus {
    guard(|| {
        if out.is_null() {
            return fail(MinfactStatus::NullPointer, "out is null");
        }
        match check_n(n, 1) {
            Ok(()) => emit(out, andre_weighted_sum(n)),
            Err(s) => s,
        }
    })
}

/// `∏_{i=1}^{n-1} (i X_i + n + 1 − i)`.
///
/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn minfact_hook_formula(
    n: usize,
    out: *mut *mut MinfactPolynomial,
) -> MinfactStatus {
    guard(|| {
        if out.is_null() {
            return fail(MinfactStatus::NullPointer, "out is null");
        }
        match check_n(n, 1) {
            Ok(()) => emit(out, hook_rhs(n)),
            Err(s) => s,
        }
    })
}

/// Decreasing-edge sum over Cayley trees on `n` vertices.
///
/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn minfact_cayley_sum(
    n: usize,
    out: *mut *mut MinfactPolynomial,
) -> MinfactStatus {
    guard(|| {
        if out.is_null() {
            return fail(MinfactStatus::NullPointer, "out is null");
        }
        match cayley_weighted_sum(n) {
            Ok(p) => emit(out, p),
            Err(e) => from_lib(e),
        }
    })
}

/// Weight sum over final chains of length `k` in the lattice on `n` points.
///
/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn minfact_final_sum(
    n: usize,
    k: usize,
    out: *mut *mut MinfactPolynomial,
) -> MinfactStatus {
    guard(|| {
        if out.is_null() {
            return fail(MinfactStatus::NullPointer, "out is null");
        }
        match final_weighted_sum(n, k) {
            Ok(p) => emit(out, p),
            Err(e) => from_lib(e),
        }
    })
}

/// Structural equality. Null handles compare equal only to each other.
///
/// # Safety
/// Non-null arguments must be live handles.
#[no_mangle]
pub unsafe extern "C" fn minfact_polynomial_equal(
    a: *const MinfactPolynomial,
    b: *const MinfactPolynomial,
) -> bool {
    match (a.as_ref(), b.as_ref()) {
        (Some(x), Some(y)) => x.0 == y.0,
        (None, None) => true,
        _ => false,
    }
}

/// Number of nonzero terms, or 0 for a null handle.
///
/// # Safety
/// `p` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn minfact_polynomial_num_terms(p: *const MinfactPolynomial) -> usize {
    p.as_ref().map_or(0, |p| p.0.num_terms())
}

/// Text form such as `X1 + 2`; free the result with `minfact_string_free`.
///
/// # Safety
/// `p` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn minfact_polynomial_to_string(
    p: *const MinfactPolynomial,
    out: *mut *mut c_char,
) -> MinfactStatus {
    guard(|| match (p.as_ref(), out.is_null()) {
        (Some(p), false) => emit_string(out, p.0.to_string()),
        _ => fail(MinfactStatus::NullPointer, "null argument"),
    })
}

/// JSON term list; free the result with `minfact_string_free`.
///
/// # Safety
/// `p` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn minfact_polynomial_to_json(
    p: *const MinfactPolynomial,
    out: *mut *mut c_char,
) -> MinfactStatus {
    guard(|| match (p.as_ref(), out.is_null()) {
        (Some(p), false) => match serde_json::to_string(&p.0) {
            Ok(s) => emit_string(out, s),
            Err(e) => fail(MinfactStatus::Internal, e.to_string()),
        },
        _ => fail(MinfactStatus::NullPointer, "null argument"),
    })
}

/// Value at `X_i = values[i - 1]` for `i = 1..=len`; other variables are
/// zero. Fails if the result does not fit in 64 bits.
///
/// # Safety
/// `p` must be a live handle, `values` must point to `len` readable values
/// (or be null with `len == 0`) and `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn minfact_polynomial_evaluate(
    p: *const MinfactPolynomial,
    values: *const i64,
    len: usize,
    out: *mut i64,
) -> MinfactStatus {
    guard(|| {
        let Some(p) = p.as_ref() else {
            return fail(MinfactStatus::NullPointer, "polynomial is null");
        };
        if out.is_null() || (values.is_null() && len > 0) {
            return fail(MinfactStatus::NullPointer, "null argument");
        }
        let xs: &[i64] = if len == 0 {
            &[]
        } else {
            std::slice::from_raw_parts(values, len)
        };
        let v = p.0.evaluate(|i| {
            let i = i as usize;
            if i >= 1 && i <= xs.len() {
                xs[i - 1].into()
            } else {
                0.into()
            }
        });
        match i64::try_from(v) {
            Ok(v) => {
                *out = v;
                MinfactStatus::Ok
            }
            Err(e) => fail(MinfactStatus::InvalidArgument, e.to_string()),
        }
    })
}

/// Releases a handle; null is ignored.
///
/// # Safety
/// `p` must be null or a handle not yet freed.
#[no_mangle]
pub unsafe extern "C" fn minfact_polynomial_free(p: *mut MinfactPolynomial) {
    if !p.is_null() {
        drop(Box::from_raw(p));
    }
}

/// Applies the last-two-steps merge to a chain in JSON form and returns
/// `{"case","gamma","bar","sigma"}` as JSON.
///
/// # Safety
/// `chain_json` must be a NUL-terminated string and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn minfact_psi_json(
    chain_json: *const c_char,
    out: *mut *mut c_char,
) -> MinfactStatus {
    guard(|| {
        if chain_json.is_null() || out.is_null() {
            return fail(MinfactStatus::NullPointer, "null argument");
        }
        let Ok(text) = CStr::from_ptr(chain_json).to_str() else {
            return fail(MinfactStatus::InvalidUtf8, "chain is not UTF-8");
        };
        let chain: Chain = match serde_json::from_str(text) {
            Ok(c) => c,
            Err(e) => return fail(MinfactStatus::InvalidArgument, e.to_string()),
        };
        if chain.factorization_type().r() < 2 {
            return fail(
                MinfactStatus::InvalidArgument,
                "the chain needs at least two steps",
            );
        }
        match minfact::psi::psi(&chain) {
            Ok(img) => {
                let v = serde_json::json!({
                    "case": img.case,
                    "gamma": img.gamma,
                    "bar": img.bar,
                    "sigma": img.sigma,
                });
                emit_string(out, v.to_string())
            }
            Err(e) => from_lib(e),
        }
    })
}

/// Runs the whole verification battery up to `max_n`. Writes the number of
/// failing checks to `failed` (if non-null) and returns
/// `MinfactStatus::CheckFailed` when it is positive.
///
/// # Safety
/// `failed` must be null or writable.
#[no_mangle]
pub unsafe extern "C" fn minfact_verify_all(max_n: usize, failed: *mut usize) -> MinfactStatus {
    guard(|| {
        if let Err(s) = check_n(max_n, 1) {
            return s;
        }
        let reports = run_all(BatteryOptions {
            max_n,
            timing: false,
        });
        let bad: Vec<_> = reports.iter().filter(|r| !r.passed()).collect();
        if !failed.is_null() {
            *failed = bad.len();
        }
        match bad.first() {
            None => MinfactStatus::Ok,
            Some(r) => fail(
                MinfactStatus::CheckFailed,
                serde_json::to_string(r).unwrap_or_else(|_| r.check.clone()),
            ),
        }
    })
}

/// Frees a string returned by this library; null is ignored.
///
/// # Safety
/// `s` must be null or a string from this library not yet freed.
#[no_mangle]
pub unsafe extern "C" fn minfact_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Message for the last failure on this thread, or an empty string. The
/// pointer stays valid until the next call into the library on this thread.
#[no_mangle]
pub extern "C" fn minfact_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ptr())
}

/// Static description of a status code.
#[no_mangle]
pub extern "C" fn minfact_status_str(status: MinfactStatus) -> *const c_char {
    let s: &'static CStr = match status {
        MinfactStatus::Ok => c"ok",
        MinfactStatus::NullPointer => c"null pointer",
        MinfactStatus::InvalidArgument => c"invalid argument",
        MinfactStatus::InvalidUtf8 => c"invalid UTF-8",
        MinfactStatus::CheckFailed => c"verification check failed",
        MinfactStatus::Internal => c"internal consistency failure",
        MinfactStatus::Panic => c"panic",
    };
    s.as_ptr()
}

/// Library version as a static string.
#[no_mangle]
pub extern "C" fn minfact_version() -> *const c_char {
    static VERSION: &str = concat!(env!("CARGO_PKG_VERSION"), "\0");
    VERSION.as_ptr().cast()
}
