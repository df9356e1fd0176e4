use std::ffi::{CStr, CString};
use std::ptr;

use cantor_toolkit_ffi::*;

fn c(s: &str) -> CString {
    CString::new(s).unwrap()
}

unsafe fn take(s: *mut std::ffi::c_char) -> String {
    let out = CStr::from_ptr(s).to_str().unwrap().to_owned();
    ct_string_free(s);
    out
}

unsafe fn last_error() -> String {
    CStr::from_ptr(ct_last_error()).to_str().unwrap().to_owned()
}

#[test]
fn cover_handle_reports_depth_three_intervals() {
    unsafe {
        let mut cover = ptr::null_mut();
        assert_eq!(ct_cover_new(c("1/2").as_ptr(), 2, 3, &mut cover), CtStatus::Ok);
        assert_eq!(ct_cover_len(cover), 4);
        let (mut lo, mut hi) = (0.0, 0.0);
        assert_eq!(ct_cover_interval(cover, 1, &mut lo, &mut hi), CtStatus::Ok);
        assert!((lo - 0.352201).abs() < 5e-7 && (hi - 0.366025).abs() < 5e-7, "{lo} {hi}");
        assert_eq!(ct_cover_interval(cover, 4, &mut lo, &mut hi), CtStatus::OutOfRange);

        let mut json = ptr::null_mut();
        assert_eq!(ct_cover_json(cover, 6, &mut json), CtStatus::Ok);
        let json = take(json);
        assert!(json.contains("\"0.342508\""));
        ct_cover_free(cover);
    }
}

#[test]
fn errors_map_to_status_codes() {
    unsafe {
        let mut cover = ptr::null_mut();
        assert_eq!(ct_cover_new(c("3/2").as_ptr(), 2, 3, &mut cover), CtStatus::Domain);
        assert!(cover.is_null());
        assert_eq!(ct_cover_new(c("half").as_ptr(), 2, 3, &mut cover), CtStatus::Parse);
        assert!(last_error().contains("half"));
        assert_eq!(ct_cover_new(ptr::null(), 2, 3, &mut cover), CtStatus::NullPointer);
        assert_eq!(ct_cover_new(c("1/2").as_ptr(), 2, 3, ptr::null_mut()), CtStatus::NullPointer);
        assert_eq!(ct_cover_len(ptr::null()), 0);

        let mut b = ptr::null_mut();
        assert_eq!(ct_solve_lambda(c("1/2").as_ptr(), 2, c("99:zero").as_ptr(), &mut b), CtStatus::Domain);
    }
}

#[test]
fn brackets_solve_and_compare() {
    unsafe {
        let (mut a, mut b) = (ptr::null_mut(), ptr::null_mut());
        assert_eq!(ct_solve_lambda(c("1/2").as_ptr(), 2, c("11:zero").as_ptr(), &mut a), CtStatus::Ok);
        assert_eq!(ct_solve_lambda(c("1/2").as_ptr(), 2, c("10:max").as_ptr(), &mut b), CtStatus::Ok);
        assert!((ct_bracket_midpoint(a) - 0.366025).abs() < 5e-7);
        let mut ord = 0;
        assert_eq!(ct_bracket_compare(a, b, &mut ord), CtStatus::Ok);
        assert_eq!(ord, -1);
        assert_eq!(ct_bracket_compare(b, a, &mut ord), CtStatus::Ok);
        assert_eq!(ord, 1);

        let (mut lo, mut hi) = (ptr::null_mut(), ptr::null_mut());
        assert_eq!(ct_bracket_bounds(a, &mut lo, &mut hi), CtStatus::Ok);
        let (lo, hi) = (take(lo), take(hi));
        assert!(lo.contains('/') && hi.contains('/'));
        assert_ne!(lo, hi);
        ct_bracket_free(a);
        ct_bracket_free(b);
        assert!(ct_bracket_midpoint(ptr::null()).is_nan());
    }
}

#[test]
fn membership_and_counts() {
    unsafe {
        let mut v = CtVerdict::Undetermined;
        assert_eq!(ct_membership(c("1/2").as_ptr(), c("1/3").as_ptr(), 2, 64, &mut v), CtStatus::Ok);
        assert_eq!(v, CtVerdict::Member);
        assert_eq!(ct_membership(c("1/2").as_ptr(), c("2/5").as_ptr(), 2, 64, &mut v), CtStatus::Ok);
        assert_eq!(v, CtVerdict::NotMember);

        let (mut count, mut growth) = (ptr::null_mut(), 0.0);
        assert_eq!(ct_sft_count(2, 2, 10, &mut count, &mut growth), CtStatus::Ok);
        assert_eq!(take(count), "144");
        assert!(growth > 1.5 && growth < 1.7);
        assert_eq!(ct_sft_count(1, 2, 10, &mut count, &mut growth), CtStatus::Domain);
    }
}

#[test]
fn thickness_json_lists_each_k() {
    unsafe {
        let mut out = ptr::null_mut();
        assert_eq!(ct_thickness_json(c("1/2").as_ptr(), 2, 3, 3, 6, &mut out), CtStatus::Ok);
        let doc: serde_json::Value = serde_json::from_str(&take(out)).unwrap();
        assert_eq!(doc["reports"].as_array().unwrap().len(), 3);
    }
}
