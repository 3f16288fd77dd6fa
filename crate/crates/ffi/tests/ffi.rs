use std::ffi::{CStr, CString};
use std::path::PathBuf;
use std::process::Command;
use std::ptr;

use linheight_ffi::*;

const FINITE: &str = r#"{"place":"finite","n":2,"prime":3,"A":[["1"],["1"]],"B":[["1"],["3"]],"C":[["1"],["0"]],"D":[["0"],["1"]]}"#;
const ARCH: &str = r#"{"place":"archimedean","n":2,"A":[[1],[1]],"B":[[1],[2]],"C":[[1],[0]],"D":[[0],[1]]}"#;
const IMPROPER: &str = r#"{"place":"finite","n":2,"prime":5,"A":[["1"],["0"]],"B":[["1"],["5"]],"C":[["1"],["0"]],"D":[["0"],["1"]]}"#;

fn last_error() -> Option<String> {
    let p = lc_last_error_message();
    (!p.is_null()).then(|| unsafe { CStr::from_ptr(p) }.to_string_lossy().into_owned())
}

/// Parses and evaluates `json`, returning the intersect status and the value.
fn evaluate(json: &str) -> (LcStatus, Option<f64>, String) {
    let text = CString::new(json).unwrap();
    unsafe {
        let mut inst = ptr::null_mut();
        assert_eq!(lc_instance_from_json(text.as_ptr(), &mut inst), LcStatus::Ok);
        let mut res = ptr::null_mut();
        let status = lc_intersect(inst, &mut res);
        assert!(!res.is_null());
        assert_eq!(lc_result_status(res), status);
        let mut v = f64::NAN;
        let value = (lc_result_value(res, &mut v) == LcStatus::Ok).then_some(v);
        let json_ptr = lc_result_to_json(res);
        let report = CStr::from_ptr(json_ptr).to_str().unwrap().to_owned();
        lc_string_free(json_ptr);
        lc_result_free(res);
        lc_instance_free(inst);
        (status, value, report)
    }
}

#[test]
fn finite_and_archimedean_examples() {
    let (status, value, report) = evaluate(FINITE);
    assert_eq!((status, value), (LcStatus::Ok, Some(-1.0)));
    assert!(report.contains("\"place\":\"finite\""));
    let (status, value, _) = evaluate(ARCH);
    assert_eq!(status, LcStatus::Ok);
    assert!((value.unwrap() - 2.0 * 2f64.ln()).abs() < 1e-8);
}

#[test]
fn hypothesis_failures_keep_a_result() {
    let (status, value, report) = evaluate(IMPROPER);
    assert_eq!(status, LcStatus::Hypothesis);
    assert_eq!(value, None);
    assert!(report.contains("hypothesis_failed"));
}

#[test]
fn bad_input_is_reported() {
    unsafe {
        let mut inst = ptr::null_mut();
        let bad = CString::new("{\"place\": \"finite\"}").unwrap();
        assert_eq!(lc_instance_from_json(bad.as_ptr(), &mut inst), LcStatus::Schema);
        assert!(inst.is_null());
        assert!(last_error().unwrap().contains("missing field"));

        assert_eq!(lc_instance_from_json(ptr::null(), &mut inst), LcStatus::NullPointer);
        let good = CString::new(FINITE).unwrap();
        assert_eq!(lc_instance_from_json(good.as_ptr(), ptr::null_mut()), LcStatus::NullPointer);

        let invalid = [0xffu8, 0xfe, 0];
        assert_eq!(lc_instance_from_json(invalid.as_ptr().cast(), &mut inst), LcStatus::InvalidUtf8);

        let mut res = ptr::null_mut();
        assert_eq!(lc_intersect(ptr::null(), &mut res), LcStatus::NullPointer);
        assert_eq!(lc_result_status(ptr::null()), LcStatus::NullPointer);
        assert!(lc_result_to_json(ptr::null()).is_null());

        assert_eq!(lc_instance_from_json(good.as_ptr(), &mut inst), LcStatus::Ok);
        assert_eq!(last_error(), None);
        lc_instance_free(inst);
        lc_instance_free(ptr::null_mut());
        lc_result_free(ptr::null_mut());
        lc_string_free(ptr::null_mut());
    }
}

#[test]
fn building_distance() {
    let doc = CString::new(r#"{"prime": 3, "x": [["1","0"],["0","1"]], "y": [["1","0"],["0","9"]]}"#).unwrap();
    let mut d = 0u64;
    assert_eq!(unsafe { lc_building_distance(doc.as_ptr(), &mut d) }, LcStatus::Ok);
    assert_eq!(d, 2);
    let missing = CString::new(r#"{"prime": 3, "x": [["1","0"],["0","1"]]}"#).unwrap();
    assert_eq!(unsafe { lc_building_distance(missing.as_ptr(), &mut d) }, LcStatus::Schema);
}

#[test]
fn version_is_static() {
    let v = unsafe { CStr::from_ptr(lc_version()) };
    assert_eq!(v.to_str().unwrap(), env!("CARGO_PKG_VERSION"));
}

#[test]
fn header_declares_the_interface() {
    let dir = PathBuf::from(env!("CARGO_MANIFEST_DIR"));
    let header = std::fs::read_to_string(dir.join("include/linheight.h")).unwrap();
    for name in [
        "typedef struct LcInstance LcInstance;",
        "typedef struct LcResult LcResult;",
        "LC_STATUS_HYPOTHESIS = 2",
        "lc_instance_from_json",
        "lc_intersect",
        "lc_result_value",
        "lc_result_to_json",
        "lc_last_error_message",
        "lc_building_distance",
    ] {
        assert!(header.contains(name), "{name}");
    }
}

/// Builds the C program against the header and the static library. The
/// library is built into a separate target directory because the running
/// `cargo test` holds the lock on the main one.
#[test]
fn c_program_links_and_runs() {
    let dir = PathBuf::from(env!("CARGO_MANIFEST_DIR"));
    let tmp = PathBuf::from(env!("CARGO_TARGET_TMPDIR"));
    let target = tmp.join("ffi-build");
    let built = Command::new(env!("CARGO"))
        .args(["build", "--quiet", "-p", "linheight-ffi", "--lib", "--target-dir"])
        .arg(&target)
        .current_dir(&dir)
        .status()
        .expect("cargo");
    assert!(built.success());
    let lib = target.join("debug/liblinheight_ffi.a");
    let exe = tmp.join("c_smoke");
    let status = Command::new("cc")
        .arg(dir.join("tests/c_smoke.c"))
        .arg("-I")
        .arg(dir.join("include"))
        .arg(&lib)
        .args(["-lpthread", "-ldl", "-lm", "-o"])
        .arg(&exe)
        .status()
        .expect("C compiler");
    assert!(status.success());
    let out = Command::new(&exe).output().unwrap();
    assert!(out.status.success(), "exit {:?}", out.status.code());
    assert!(String::from_utf8_lossy(&out.stdout).starts_with("value -1"));
}
