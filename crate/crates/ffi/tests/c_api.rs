use std::ffi::{CStr, CString};
use std::ptr;

use stickysym_ffi::*;

fn builtin(name: &str) -> *mut SsCluster {
    let name = CString::new(name).unwrap();
    let mut c = ptr::null_mut();
    assert_eq!(unsafe { ss_cluster_builtin(name.as_ptr(), &mut c) }, SsStatus::Ok);
    c
}

fn last_error() -> String {
    unsafe { CStr::from_ptr(ss_last_error()) }.to_string_lossy().into_owned()
}

#[test]
fn loop_symmetry_through_handles() {
    let c = builtin("loop:5");
    assert_eq!(unsafe { ss_cluster_len(c) }, 5);
    let mut opts = ss_options_default();
    opts.jobs = 1;
    let mut r = ptr::null_mut();
    assert_eq!(unsafe { ss_symmetry(c, &opts, &mut r) }, SsStatus::Ok);
    assert_eq!(unsafe { ss_report_sigma(r) }, 20);
    let mut n = 0u64;
    assert_eq!(unsafe { ss_report_counting_number(r, &mut n) }, SsStatus::Ok);
    assert_eq!(n, 12);
    assert_eq!(unsafe { ss_report_point_group_order(r) }, 1);
    unsafe {
        ss_report_free(r);
        ss_cluster_free(c);
    }
}

#[test]
fn report_json_and_coloring() {
    let c = builtin("octahedron");
    let mut r = ptr::null_mut();
    assert_eq!(unsafe { ss_symmetry(c, ptr::null(), &mut r) }, SsStatus::Ok);
    assert_eq!(unsafe { ss_report_sigma(r) }, 48);
    assert_eq!(unsafe { ss_report_closure_inferred(r) }, 0);

    let mut json = ptr::null_mut();
    assert_eq!(unsafe { ss_report_to_json(r, &mut json) }, SsStatus::Ok);
    let mut back = ptr::null_mut();
    assert_eq!(unsafe { ss_report_from_json(json, &mut back) }, SsStatus::Ok);
    assert_eq!(unsafe { ss_report_sigma(back) }, 48);

    // Opposite vertices share a color: the three axes are preserved.
    let labels = CString::new("1,1,2,2,3,3").unwrap();
    let mut colored = ptr::null_mut();
    assert_eq!(unsafe { ss_report_color(back, labels.as_ptr(), &mut colored) }, SsStatus::Ok);
    assert!(unsafe { ss_report_sigma(colored) } < 48);
    unsafe {
        ss_string_free(json);
        ss_report_free(colored);
        ss_report_free(back);
        ss_report_free(r);
        ss_cluster_free(c);
    }
}

#[test]
fn errors_map_to_status_codes() {
    let mut c = ptr::null_mut();
    let overlap = CString::new(r#"{"positions": [[0,0,0],[0.5,0,0]], "radii": [0.5,0.5]}"#).unwrap();
    assert_eq!(unsafe { ss_cluster_from_json(overlap.as_ptr(), &mut c) }, SsStatus::Overlap);
    assert!(c.is_null());
    assert!(last_error().contains("overlap"), "{}", last_error());

    let garbage = CString::new("{not json").unwrap();
    assert_eq!(unsafe { ss_cluster_from_json(garbage.as_ptr(), &mut c) }, SsStatus::Parse);

    let unknown = CString::new("icosahedron").unwrap();
    assert_eq!(unsafe { ss_cluster_builtin(unknown.as_ptr(), &mut c) }, SsStatus::InvalidArgument);

    assert_eq!(unsafe { ss_cluster_builtin(ptr::null(), &mut c) }, SsStatus::NullPointer);
    let mut r = ptr::null_mut();
    assert_eq!(unsafe { ss_symmetry(ptr::null(), ptr::null(), &mut r) }, SsStatus::NullPointer);
    assert_eq!(unsafe { ss_report_sigma(ptr::null()) }, 0);
    unsafe {
        ss_cluster_free(ptr::null_mut());
        ss_report_free(ptr::null_mut());
        ss_string_free(ptr::null_mut());
    }
}

#[test]
fn color_conflicting_with_radii() {
    let json = CString::new(
        r#"{"positions": [[0,0,0],[1,0,0],[0.5,0.8660254037844386,0]], "radii": [0.5,0.5,0.5]}"#,
    )
    .unwrap();
    let mut c = ptr::null_mut();
    assert_eq!(unsafe { ss_cluster_from_json(json.as_ptr(), &mut c) }, SsStatus::Ok);
    let mut r = ptr::null_mut();
    assert_eq!(unsafe { ss_symmetry(c, ptr::null(), &mut r) }, SsStatus::Ok);
    assert_eq!(unsafe { ss_report_sigma(r) }, 12);
    let short = CString::new("1,2").unwrap();
    let mut colored = ptr::null_mut();
    assert_ne!(unsafe { ss_report_color(r, short.as_ptr(), &mut colored) }, SsStatus::Ok);
    unsafe {
        ss_report_free(r);
        ss_cluster_free(c);
    }
}

#[test]
fn header_declares_the_api() {
    let header = std::fs::read_to_string(concat!(env!("CARGO_MANIFEST_DIR"), "/include/stickysym.h")).unwrap();
    for name in [
        "ss_cluster_from_json",
        "ss_cluster_builtin",
        "ss_symmetry",
        "ss_report_color",
        "ss_report_counting_number",
        "ss_report_to_json",
        "ss_last_error",
        "typedef struct SsCluster SsCluster",
        "SS_STATUS_COLOR_RADII_CONFLICT = 7",
    ] {
        assert!(header.contains(name), "missing {name}");
    }
}
