use std::ffi::{CStr, CString};
use std::ptr;

use sfm_lab_ffi::*;

fn take(s: *mut std::ffi::c_char) -> String {
    assert!(!s.is_null());
    let out = unsafe { CStr::from_ptr(s) }.to_str().unwrap().to_owned();
    unsafe { sfm_string_free(s) };
    out
}

fn last_error() -> String {
    unsafe { CStr::from_ptr(sfm_last_error_message()) }.to_str().unwrap().to_owned()
}

#[test]
fn star_matching_handle() {
    let mut g = ptr::null_mut();
    assert_eq!(unsafe { sfm_graph_star_matching(8, &mut g) }, SfmStatus::Ok);
    let mut d = 0usize;
    assert_eq!(unsafe { sfm_graph_cut_dimension(g, true, &mut d) }, SfmStatus::Ok);
    assert_eq!(d, 10);

    let mut value = ptr::null_mut();
    let mut mask = 0u32;
    assert_eq!(unsafe { sfm_graph_min_cut(g, true, &mut value, &mut mask) }, SfmStatus::Ok);
    assert_eq!(take(value), "2/1");
    let mut cut = ptr::null_mut();
    assert_eq!(unsafe { sfm_graph_cut_value(g, mask, &mut cut) }, SfmStatus::Ok);
    assert_eq!(take(cut), "2/1");
    unsafe { sfm_graph_free(g) };
}

#[test]
fn graph_json_and_errors() {
    let json = CString::new(r#"{"n_vertices":3,"mode":"undirected","edges":[[1,2,"1/2"],[2,3,"1"]]}"#).unwrap();
    let mut g = ptr::null_mut();
    assert_eq!(unsafe { sfm_graph_from_json(json.as_ptr(), &mut g) }, SfmStatus::Ok);
    let mut n = 0usize;
    assert_eq!(unsafe { sfm_graph_ground_size(g, &mut n) }, SfmStatus::Ok);
    assert_eq!(n, 3);
    let mut cut = ptr::null_mut();
    assert_eq!(unsafe { sfm_graph_cut_value(g, 0b001, &mut cut) }, SfmStatus::Ok);
    assert_eq!(take(cut), "1/2");
    assert_eq!(unsafe { sfm_graph_cut_value(g, 0b1000, &mut cut) }, SfmStatus::InvalidArgument);
    assert!(!last_error().is_empty());
    unsafe { sfm_graph_free(g) };

    let bad = CString::new(r#"{"n_vertices":3,"mode":"nope","edges":[]}"#).unwrap();
    assert_eq!(unsafe { sfm_graph_from_json(bad.as_ptr(), &mut g) }, SfmStatus::InvalidInstance);
    assert!(last_error().contains("nope"));
    assert_eq!(unsafe { sfm_graph_from_json(ptr::null(), &mut g) }, SfmStatus::NullPointer);
    assert_eq!(unsafe { sfm_graph_star_matching(40, &mut g) }, SfmStatus::InvalidArgument);
    unsafe { sfm_graph_free(ptr::null_mut()) };
    unsafe { sfm_string_free(ptr::null_mut()) };
}

#[test]
fn permutation_eval() {
    let sigma = [1usize, 2, 3, 4];
    let c = [0u8, 0, 1, 0, 1];
    let mut out = ptr::null_mut();
    assert_eq!(unsafe { sfm_permutation_eval(4, sigma.as_ptr(), c.as_ptr(), 0b0011, &mut out) }, SfmStatus::Ok);
    assert_eq!(take(out), "-1/1");
    assert_eq!(unsafe { sfm_permutation_eval(4, sigma.as_ptr(), c.as_ptr(), 0b1110, &mut out) }, SfmStatus::Ok);
    assert_eq!(take(out), "18/1");
    let dup = [1usize, 1, 3, 4];
    assert_eq!(
        unsafe { sfm_permutation_eval(4, dup.as_ptr(), c.as_ptr(), 0, &mut out) },
        SfmStatus::InvalidInstance
    );
}

#[test]
fn adversary_round() {
    let mut a = ptr::null_mut();
    assert_eq!(unsafe { sfm_adversary2n_new(4, &mut a) }, SfmStatus::Ok);
    let mut v = ptr::null_mut();
    let mut class = SfmQueryClass::Useless;
    assert_eq!(unsafe { sfm_adversary2n_query(a, 0, &mut v, &mut class) }, SfmStatus::Ok);
    assert_eq!((take(v), class), ("0/1".to_owned(), SfmQueryClass::Important));
    assert_eq!(unsafe { sfm_adversary2n_query(a, 0b0011, &mut v, ptr::null_mut()) }, SfmStatus::Ok);
    take(v);

    let guess = CString::new("0").unwrap();
    let mut fooled = false;
    let mut min = ptr::null_mut();
    assert_eq!(unsafe { sfm_adversary2n_finalize(a, guess.as_ptr(), &mut fooled, &mut min) }, SfmStatus::Ok);
    assert!(fooled);
    assert_eq!(take(min), "-1/1");
    unsafe { sfm_adversary2n_free(a) };
}

#[test]
fn st_kernel() {
    let mut pass = false;
    assert_eq!(unsafe { sfm_st_kernel_check(5, 2, &mut pass) }, SfmStatus::Ok);
    assert!(pass);
    assert_eq!(unsafe { sfm_st_kernel_check(1, 1, &mut pass) }, SfmStatus::InvalidArgument);
    assert!(last_error().contains("determinable"));
}

#[test]
fn header_declares_the_api() {
    let header = std::fs::read_to_string(concat!(env!("CARGO_MANIFEST_DIR"), "/include/sfm_lab.h")).unwrap();
    for name in [
        "SFM_STATUS_OK",
        "typedef struct SfmGraph SfmGraph",
        "sfm_graph_from_json",
        "sfm_graph_min_cut",
        "sfm_adversary2n_query",
        "sfm_last_error_message",
        "sfm_st_kernel_check",
    ] {
        assert!(header.contains(name), "header lacks {name}");
    }
}
