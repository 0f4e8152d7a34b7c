//! Exercises the C entry points exactly as a foreign caller would: through
//! raw pointers and status codes.

use std::ffi::{CStr, CString};
use std::ptr;
use urbanik_ffi::*;

fn open(name: &str, alpha: f64, c: f64) -> *mut UrbDistribution {
    let name = CString::new(name).unwrap();
    let mut handle: *mut UrbDistribution = ptr::null_mut();
    let status = unsafe { urb_distribution_new(name.as_ptr(), alpha, c, &mut handle) };
    assert_eq!(status, UrbStatus::Ok);
    assert!(!handle.is_null());
    handle
}

#[test]
fn version_is_a_c_string() {
    let v = unsafe { CStr::from_ptr(urb_version()) };
    assert!(!v.to_str().unwrap().is_empty());
}

#[test]
fn generated_header_compiles_as_c() {
    let header = std::path::Path::new(env!("CARGO_MANIFEST_DIR")).join("include/urbanik.h");
    assert!(header.exists(), "header not generated");
    let cc = ["cc", "clang", "gcc"]
        .iter()
        .find(|c| std::process::Command::new(c).arg("--version").output().is_ok());
    let Some(cc) = cc else {
        eprintln!("no C compiler found; skipping syntax check");
        return;
    };
    let status = std::process::Command::new(cc)
        .args(["-fsyntax-only", "-std=c99", "-Wall", "-Werror", "-x", "c"])
        .arg(&header)
        .status()
        .unwrap();
    assert!(status.success(), "header fails C99 compilation");
}

#[test]
fn lifecycle_and_cf() {
    let sinh = open("sinh", f64::NAN, f64::NAN);
    let mut cf = 0.0f64;
    assert_eq!(unsafe { urb_cf(sinh, 1.0, &mut cf) }, UrbStatus::Ok);
    assert!((cf - 1.0 / 1.0f64.sinh()).abs() < 1e-15);

    let mut from_levy = 0.0f64;
    assert_eq!(
        unsafe { urb_cf_from_levy(sinh, 1.0, &mut from_levy) },
        UrbStatus::Ok
    );
    assert!((from_levy - cf).abs() < 1e-6);

    let mut psi = 0.0f64;
    assert_eq!(unsafe { urb_bdcf(sinh, 1.0, &mut psi) }, UrbStatus::Ok);
    let coth1 = 1.0f64.cosh() / 1.0f64.sinh();
    assert!((psi - (1.0 - coth1).exp()).abs() < 1e-12);

    unsafe { urb_distribution_free(sinh) };
}

#[test]
fn error_codes() {
    let name = CString::new("cauchy").unwrap();
    let mut handle: *mut UrbDistribution = ptr::null_mut();
    let status = unsafe { urb_distribution_new(name.as_ptr(), f64::NAN, f64::NAN, &mut handle) };
    assert_eq!(status, UrbStatus::UnknownDistribution);
    assert!(handle.is_null());

    let name = CString::new("logistic").unwrap();
    let status = unsafe { urb_distribution_new(name.as_ptr(), -2.0, f64::NAN, &mut handle) };
    assert_eq!(status, UrbStatus::InvalidArgument);

    let mut cf = 0.0f64;
    assert_eq!(
        unsafe { urb_cf(ptr::null(), 1.0, &mut cf) },
        UrbStatus::NullPointer
    );
}

#[test]
fn classify_json_roundtrips() {
    let tanh = open("tanh", f64::NAN, f64::NAN);
    let mut out: *mut std::ffi::c_char = ptr::null_mut();
    assert_eq!(
        unsafe { urb_classify_json(tanh, 2, &mut out) },
        UrbStatus::Ok
    );
    let json = unsafe { CStr::from_ptr(out) }.to_str().unwrap().to_string();
    unsafe { urb_string_free(out) };
    unsafe { urb_distribution_free(tanh) };

    let doc: serde_json::Value = serde_json::from_str(&json).unwrap();
    assert_eq!(doc["distribution"], "tanh");
    assert_eq!(doc["achieved_level"], 0);
    assert_eq!(doc["mass_failures"][0]["level"], 1);
    assert!((doc["mass_failures"][0]["mass"].as_f64().unwrap() - 1.0).abs() < 1e-10);
}

#[test]
fn sampling_into_caller_buffer() {
    let sinh = open("sinh", f64::NAN, f64::NAN);
    let mut buf = vec![0.0f64; 1000];
    let status = unsafe { urb_sample(sinh, buf.len(), 200, 42, 1, buf.as_mut_ptr()) };
    assert_eq!(status, UrbStatus::Ok);
    assert!(buf.iter().any(|&x| x != 0.0));
    // Same seed, same draws.
    let mut again = vec![0.0f64; 1000];
    let status = unsafe { urb_sample(sinh, again.len(), 200, 42, 1, again.as_mut_ptr()) };
    assert_eq!(status, UrbStatus::Ok);
    assert_eq!(buf, again);
    unsafe { urb_distribution_free(sinh) };

    // No sampler for the Talacko–Zolotarev law.
    let tz = open("talacko_zolotarev", f64::NAN, 0.5);
    let status = unsafe { urb_sample(tz, 10, 10, 1, 0, buf.as_mut_ptr()) };
    assert_eq!(status, UrbStatus::Unsupported);
    unsafe { urb_distribution_free(tz) };
}
