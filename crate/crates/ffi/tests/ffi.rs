use std::ffi::{CStr, CString};
use std::ptr;

use minfact_ffi::*;

fn last_error() -> String {
    unsafe { CStr::from_ptr(minfact_last_error()) }
        .to_string_lossy()
        .into_owned()
}

fn text(p: *const MinfactPolynomial) -> String {
    let mut s = ptr::null_mut();
    unsafe {
        assert_eq!(minfact_polynomial_to_string(p, &mut s), MinfactStatus::Ok);
        let out = CStr::from_ptr(s).to_string_lossy().into_owned();
        minfact_string_free(s);
        out
    }
}

#[test]
fn weighted_sum_matches_formula() {
    let parts = [2usize, 2];
    let (mut sum, mut formula) = (ptr::null_mut(), ptr::null_mut());
    unsafe {
        assert_eq!(
            minfact_weighted_sum(parts.as_ptr(), 2, &mut sum),
            MinfactStatus::Ok
        );
        assert_eq!(
            minfact_product_formula(parts.as_ptr(), 2, &mut formula),
            MinfactStatus::Ok
        );
        assert!(minfact_polynomial_equal(sum, formula));
        assert_eq!(text(sum), "X1 + 2");
        assert_eq!(minfact_polynomial_num_terms(sum), 2);
        let mut count = 0u64;
        assert_eq!(
            minfact_count_chains(parts.as_ptr(), 2, &mut count),
            MinfactStatus::Ok
        );
        assert_eq!(count, 3);
        minfact_polynomial_free(sum);
        minfact_polynomial_free(formula);
    }
}

#[test]
fn trees_and_final_chains() {
    let (mut andre, mut hook, mut cayley, mut fin) = (
        ptr::null_mut(),
        ptr::null_mut(),
        ptr::null_mut(),
        ptr::null_mut(),
    );
    unsafe {
        assert_eq!(minfact_andre_sum(5, &mut andre), MinfactStatus::Ok);
        assert_eq!(minfact_hook_formula(5, &mut hook), MinfactStatus::Ok);
        assert!(minfact_polynomial_equal(andre, hook));
        assert_eq!(minfact_cayley_sum(4, &mut cayley), MinfactStatus::Ok);
        assert_eq!(minfact_final_sum(4, 3, &mut fin), MinfactStatus::Ok);
        assert!(minfact_polynomial_equal(cayley, fin));
        let mut v = 0i64;
        assert_eq!(
            minfact_polynomial_evaluate(andre, ptr::null(), 0, &mut v),
            MinfactStatus::Ok
        );
        assert_eq!(v, 5 * 4 * 3 * 2);
        let ones = [1i64; 4];
        assert_eq!(
            minfact_polynomial_evaluate(andre, ones.as_ptr(), 4, &mut v),
            MinfactStatus::Ok
        );
        // every linear factor evaluates to n + 1 at X = 1
        assert_eq!(v, 6i64.pow(4));
        for p in [andre, hook, cayley, fin] {
            minfact_polynomial_free(p);
        }
    }
}

#[test]
fn json_and_psi() {
    let chain = CString::new(
        r#"{"a":[2,2],"n":3,"chain":[{"ground":[1,2,3],"blocks":[[1],[2],[3]]},{"ground":[1,2,3],"blocks":[[1,3],[2]]},{"ground":[1,2,3],"blocks":[[1,2,3]]}]}"#,
    )
    .unwrap();
    let mut out = ptr::null_mut();
    unsafe {
        assert_eq!(
            minfact_psi_json(chain.as_ptr(), &mut out),
            MinfactStatus::Ok
        );
        let v: serde_json::Value =
            serde_json::from_str(CStr::from_ptr(out).to_str().unwrap()).unwrap();
        minfact_string_free(out);
        assert_eq!(v["case"], 2);
        assert_eq!(v["bar"], 3);
        let mut p = ptr::null_mut();
        assert_eq!(minfact_hook_formula(2, &mut p), MinfactStatus::Ok);
        let mut js = ptr::null_mut();
        assert_eq!(minfact_polynomial_to_json(p, &mut js), MinfactStatus::Ok);
        assert_eq!(
            CStr::from_ptr(js).to_str().unwrap(),
            r#"[{"coeff":"2","vars":{}},{"coeff":"1","vars":{"1":1}}]"#
        );
        minfact_string_free(js);
        minfact_polynomial_free(p);
    }
}

#[test]
fn error_codes() {
    let bad = [1usize, 3];
    let mut p = ptr::null_mut();
    unsafe {
        assert_eq!(
            minfact_weighted_sum(bad.as_ptr(), 2, &mut p),
            MinfactStatus::InvalidArgument
        );
        assert!(p.is_null());
        assert!(last_error().contains("invalid factorization type"));
        assert_eq!(
            minfact_weighted_sum(ptr::null(), 0, &mut p),
            MinfactStatus::NullPointer
        );
        assert_eq!(
            minfact_andre_sum(3, ptr::null_mut()),
            MinfactStatus::NullPointer
        );
        assert_eq!(
            minfact_final_sum(3, 5, &mut p),
            MinfactStatus::InvalidArgument
        );
        assert_eq!(
            minfact_cayley_sum(1, &mut p),
            MinfactStatus::InvalidArgument
        );
        let junk = CString::new("{").unwrap();
        let mut s = ptr::null_mut();
        assert_eq!(
            minfact_psi_json(junk.as_ptr(), &mut s),
            MinfactStatus::InvalidArgument
        );
        let big = [1i64 << 40; 4];
        let mut hook = ptr::null_mut();
        assert_eq!(minfact_hook_formula(5, &mut hook), MinfactStatus::Ok);
        let mut v = 0i64;
        assert_eq!(
            minfact_polynomial_evaluate(hook, big.as_ptr(), 4, &mut v),
            MinfactStatus::InvalidArgument
        );
        minfact_polynomial_free(hook);
        // a successful call clears the message
        assert_eq!(minfact_andre_sum(2, &mut p), MinfactStatus::Ok);
        assert_eq!(last_error(), "");
        minfact_polynomial_free(p);
        minfact_polynomial_free(ptr::null_mut());
        minfact_string_free(ptr::null_mut());
        assert!(!minfact_polynomial_equal(ptr::null(), p));
    }
}

#[test]
fn verify_battery() {
    let mut failed = usize::MAX;
    unsafe {
        assert_eq!(minfact_verify_all(5, &mut failed), MinfactStatus::Ok);
    }
    assert_eq!(failed, 0);
    let msg = unsafe { CStr::from_ptr(minfact_status_str(MinfactStatus::CheckFailed)) };
    assert_eq!(msg.to_str().unwrap(), "verification check failed");
    let version = unsafe { CStr::from_ptr(minfact_version()) };
    assert_eq!(version.to_str().unwrap(), env!("CARGO_PKG_VERSION"));
}
