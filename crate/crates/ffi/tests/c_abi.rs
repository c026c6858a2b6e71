use std::ffi::{c_char, CStr, CString};
use std::ptr;

use antidiff_ffi::*;

const STEP: &str = r#"{"kind":"infinite","lambda":"2/5","values":["0","1"],"window_start":0}"#;

fn cstr(s: &str) -> CString {
    CString::new(s).unwrap()
}

unsafe fn take(s: *mut c_char) -> String {
    let out = CStr::from_ptr(s).to_str().unwrap().to_string();
    ad_string_free(s);
    out
}

unsafe fn last_error() -> String {
    let p = ad_last_error();
    assert!(!p.is_null());
    CStr::from_ptr(p).to_string_lossy().into_owned()
}

unsafe fn load(json: &str) -> *mut AdState {
    let mut h = ptr::null_mut();
    assert_eq!(ad_state_from_json(cstr(json).as_ptr(), &mut h), AdStatus::Ok);
    h
}

#[test]
fn upwind_step_matches_hand_computation() {
    unsafe {
        let h = load(STEP);
        assert_eq!(ad_state_step(h, cstr("upwind").as_ptr(), 1), AdStatus::Ok);
        // u_1 = 1 - 2/5 (1 - 0)
        let mut s = ptr::null_mut();
        assert_eq!(ad_state_value_string(h, 1, &mut s), AdStatus::Ok);
        assert_eq!(take(s), "3/5");
        let mut x = 0.0;
        assert_eq!(ad_state_value(h, 1, &mut x), AdStatus::Ok);
        assert!((x - 0.6).abs() < 1e-15);
        assert_eq!(ad_state_value(h, -50, &mut x), AdStatus::Ok);
        assert_eq!(x, 0.0);
        ad_state_free(h);
    }
}

#[test]
fn json_round_trip_and_clone() {
    unsafe {
        let h = load(STEP);
        let mut c = ptr::null_mut();
        assert_eq!(ad_state_clone(h, &mut c), AdStatus::Ok);
        assert_eq!(ad_state_step(c, cstr("dl_fixed").as_ptr(), 3), AdStatus::Ok);
        let mut s = ptr::null_mut();
        assert_eq!(ad_state_to_json(c, &mut s), AdStatus::Ok);
        let text = take(s);
        let again = load(&text);
        let mut s2 = ptr::null_mut();
        assert_eq!(ad_state_to_json(again, &mut s2), AdStatus::Ok);
        assert_eq!(take(s2), text);
        // the original handle is untouched
        let (mut start, mut len) = (0i64, 0usize);
        assert_eq!(ad_state_window(h, &mut start, &mut len), AdStatus::Ok);
        assert_eq!((start, len), (0, 2));
        for p in [h, c, again] {
            ad_state_free(p);
        }
    }
}

#[test]
fn classify_reports_heaviside() {
    unsafe {
        let h = load(STEP);
        let mut s = ptr::null_mut();
        assert_eq!(ad_state_classify_json(h, cstr("0").as_ptr(), &mut s), AdStatus::Ok);
        let v: serde_json::Value = serde_json::from_str(&take(s)).unwrap();
        assert_eq!(v["j_inf"], 0);
        assert_eq!(v["halpha"]["M"], 1);
        ad_state_free(h);
    }
}

#[test]
fn error_codes() {
    unsafe {
        let mut h = ptr::null_mut();
        assert_eq!(ad_state_from_json(ptr::null(), &mut h), AdStatus::NullPointer);
        assert_eq!(ad_state_from_json(cstr("{not json").as_ptr(), &mut h), AdStatus::InvalidState);
        assert!(!last_error().is_empty());
        assert_eq!(ad_state_from_json(cstr(r#"{"values":[]}"#).as_ptr(), &mut h), AdStatus::InvalidState);
        let bad_utf8 = [0xffu8, 0xfe, 0];
        assert_eq!(ad_state_from_json(bad_utf8.as_ptr() as *const c_char, &mut h), AdStatus::InvalidUtf8);

        let h = load(STEP);
        assert_eq!(ad_state_step(h, cstr("leapfrog").as_ptr(), 1), AdStatus::InvalidArgument);
        assert!(last_error().contains("leapfrog"));
        // lambda 2/5 is fine for the shifted scheme, but then dl_fixed
        // refuses the shifted-grid state
        assert_eq!(ad_state_step(h, cstr("dl_shifted").as_ptr(), 1), AdStatus::Ok);
        let before = {
            let mut s = ptr::null_mut();
            ad_state_to_json(h, &mut s);
            take(s)
        };
        assert_eq!(ad_state_step(h, cstr("dl_fixed").as_ptr(), 1), AdStatus::Precondition);
        let mut s = ptr::null_mut();
        ad_state_to_json(h, &mut s);
        assert_eq!(take(s), before);
        assert_eq!(ad_state_classify_json(h, cstr("x").as_ptr(), &mut s), AdStatus::InvalidArgument);
        assert_eq!(ad_state_step(ptr::null_mut(), cstr("upwind").as_ptr(), 1), AdStatus::NullPointer);
        assert_eq!(ad_state_value(h, 0, ptr::null_mut()), AdStatus::NullPointer);
        ad_state_free(h);
        ad_state_free(ptr::null_mut());
        ad_string_free(ptr::null_mut());
    }
}

#[test]
fn wide_lambda_rejected_by_shifted_scheme() {
    unsafe {
        let h = load(r#"{"kind":"infinite","lambda":"3/5","values":["0","1"]}"#);
        assert_eq!(ad_state_step(h, cstr("dl_shifted").as_ptr(), 1), AdStatus::Precondition);
        ad_state_free(h);
    }
}

#[test]
fn header_is_current() {
    let header = std::fs::read_to_string(concat!(env!("CARGO_MANIFEST_DIR"), "/include/antidiff.h")).unwrap();
    for f in [
        "ad_state_from_json",
        "ad_state_to_json",
        "ad_state_clone",
        "ad_state_step",
        "ad_state_window",
        "ad_state_value",
        "ad_state_value_string",
        "ad_state_classify_json",
        "ad_state_free",
        "ad_string_free",
        "ad_last_error",
    ] {
        assert!(header.contains(&format!("{f}(")), "{f} missing from header");
    }
    assert!(header.contains("typedef struct AdState AdState;"));
}
