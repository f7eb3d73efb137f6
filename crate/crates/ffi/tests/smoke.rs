//! End-to-end exercise of the C ABI from Rust: handles, error codes, and
//! string ownership, plus a sanity check on the generated header.

use std::ffi::{CStr, CString};

use bigramsey_ffi::*;

fn cstr(s: &str) -> CString {
    CString::new(s).unwrap()
}

unsafe fn take_string(p: *mut std::ffi::c_char) -> String {
    assert!(!p.is_null());
    let s = CStr::from_ptr(p).to_str().unwrap().to_string();
    br_string_free(p);
    s
}

#[test]
fn colour_distance_witness_round_trip() {
    unsafe {
        let json = cstr(r#"{"d":2,"n":2,"entries":[["1","0"],["0","1"]]}"#);
        let mut tuple: *mut BrTuple = std::ptr::null_mut();
        assert_eq!(br_tuple_parse(json.as_ptr(), &mut tuple), BrStatus::BrOk);

        let mut pumpkin: *mut BrPumpkin = std::ptr::null_mut();
        assert_eq!(br_pp_colour(tuple, &mut pumpkin), BrStatus::BrOk);

        let mut diag: *mut std::ffi::c_char = std::ptr::null_mut();
        assert_eq!(br_pumpkin_diagnosis(pumpkin, &mut diag), BrStatus::BrOk);
        assert_eq!(take_string(diag), "\"valid\"");

        // Round trip through JSON re-parses to an equal chain: distance 0.
        let mut pj: *mut std::ffi::c_char = std::ptr::null_mut();
        assert_eq!(br_pumpkin_to_json(pumpkin, &mut pj), BrStatus::BrOk);
        let pumpkin_json = take_string(pj);
        let rejson = cstr(&pumpkin_json);
        let mut again: *mut BrPumpkin = std::ptr::null_mut();
        assert_eq!(br_pumpkin_parse(rejson.as_ptr(), &mut again), BrStatus::BrOk);

        let eps = cstr("1/1000");
        let mut dist: *mut std::ffi::c_char = std::ptr::null_mut();
        assert_eq!(
            br_pumpkin_dist(pumpkin, again, eps.as_ptr(), &mut dist),
            BrStatus::BrOk
        );
        assert_eq!(take_string(dist), "0");

        // Witness reproduces the pumpkin.
        let mut witness: *mut BrTuple = std::ptr::null_mut();
        assert_eq!(
            br_pumpkin_witness(pumpkin, eps.as_ptr(), &mut witness),
            BrStatus::BrOk
        );
        let mut wj: *mut std::ffi::c_char = std::ptr::null_mut();
        assert_eq!(br_tuple_to_json(witness, &mut wj), BrStatus::BrOk);
        assert_eq!(
            take_string(wj),
            r#"{"d":2,"n":2,"entries":[["1","0"],["0","1"]]}"#
        );

        br_tuple_free(witness);
        br_pumpkin_free(again);
        br_pumpkin_free(pumpkin);
        br_tuple_free(tuple);
    }
}

#[test]
fn status_codes_and_last_error() {
    unsafe {
        let mut tuple: *mut BrTuple = std::ptr::null_mut();
        let bad = cstr("{nope");
        assert_eq!(br_tuple_parse(bad.as_ptr(), &mut tuple), BrStatus::BrParse);
        let msg = take_string(br_last_error());
        assert!(!msg.is_empty());

        // Sphere violation is semantic.
        let off = cstr(r#"{"d":1,"n":1,"entries":[["1/2"]]}"#);
        assert_eq!(br_tuple_parse(off.as_ptr(), &mut tuple), BrStatus::BrOk);
        let mut pumpkin: *mut BrPumpkin = std::ptr::null_mut();
        assert_eq!(br_pp_colour(tuple, &mut pumpkin), BrStatus::BrSemantic);
        let msg = take_string(br_last_error());
        assert!(msg.contains("row 0"), "message: {msg}");
        br_tuple_free(tuple);

        // Null handling.
        assert_eq!(
            br_pp_colour(std::ptr::null(), &mut pumpkin),
            BrStatus::BrNullPointer
        );

        // Guard surfaces as its own status.
        let mut flag: u8 = 9;
        assert_eq!(
            br_hj_line_check(3, 2, 3, 1 << 20, &mut flag),
            BrStatus::BrGuard
        );
        assert_eq!(br_hj_line_check(2, 2, 2, 1 << 20, &mut flag), BrStatus::BrOk);
        assert_eq!(flag, 1);

        let mut count: u64 = 0;
        assert_eq!(br_rigid_count(4, 2, &mut count), BrStatus::BrOk);
        assert_eq!(count, 7);

        let pair = cstr(r#"{"x":{"support":[[0,"1"],[2,"1"]]},"y":{"support":[[1,"1"],[3,"1"]]}}"#);
        let mut c: u64 = 0;
        assert_eq!(br_intertwine_count(pair.as_ptr(), &mut c), BrStatus::BrOk);
        assert_eq!(c, 3);
    }
}

#[test]
fn version_and_header_exist() {
    unsafe {
        let v = CStr::from_ptr(br_version()).to_str().unwrap();
        assert_eq!(v, env!("CARGO_PKG_VERSION"));
    }
    let header = std::path::Path::new(env!("CARGO_MANIFEST_DIR")).join("include/bigramsey.h");
    let text = std::fs::read_to_string(header).expect("header generated at build time");
    for symbol in [
        "br_tuple_parse",
        "br_pp_colour",
        "br_pumpkin_dist",
        "br_pumpkin_witness",
        "br_string_free",
        "BrStatus",
    ] {
        assert!(text.contains(symbol), "header is missing {symbol}");
    }
}
