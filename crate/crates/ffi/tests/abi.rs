use std::ffi::{c_char, CStr, CString};
use std::ptr;

use mzv_ffi::*;

fn take(s: *mut c_char) -> String {
    let out = unsafe { CStr::from_ptr(s) }.to_str().unwrap().to_string();
    unsafe { mzv_string_free(s) };
    out
}

fn last_error() -> String {
    unsafe { CStr::from_ptr(mzv_last_error_message()) }.to_str().unwrap().to_string()
}

#[test]
fn eval_and_errors() {
    let c = CString::new("3,1").unwrap();
    let (mut v, mut b) = (0.0, 0.0);
    assert_eq!(unsafe { mzv_eval(c.as_ptr(), 1e-12, &mut v, &mut b) }, MzvStatus::Ok);
    assert!((v - std::f64::consts::PI.powi(4) / 360.0).abs() < 1e-15);
    assert!(b <= 1e-12);
    assert_eq!(last_error(), "");

    let mut s = ptr::null_mut();
    assert_eq!(unsafe { mzv_eval_string(c.as_ptr(), 1e-12, &mut s) }, MzvStatus::Ok);
    assert!(take(s).starts_with("0.270580808427784547879000924"));

    let bad = CString::new("1,2").unwrap();
    assert_eq!(unsafe { mzv_eval(bad.as_ptr(), 1e-12, &mut v, &mut b) }, MzvStatus::NotAdmissible);
    assert!(last_error().contains("not admissible"));
    let junk = CString::new("2,,x").unwrap();
    assert_eq!(unsafe { mzv_eval(junk.as_ptr(), 1e-12, &mut v, &mut b) }, MzvStatus::MalformedInput);
    assert_eq!(unsafe { mzv_eval(ptr::null(), 1e-12, &mut v, &mut b) }, MzvStatus::NullPointer);
    assert_eq!(unsafe { mzv_eval(c.as_ptr(), 1e-80, &mut v, &mut b) }, MzvStatus::Precision);
}

#[test]
fn identity_round_trip() {
    let fam = CString::new("partial-integration-3").unwrap();
    let params: Vec<CString> = ["2", "1", "2"].iter().map(|p| CString::new(*p).unwrap()).collect();
    let ptrs: Vec<*const c_char> = params.iter().map(|p| p.as_ptr()).collect();
    let variant = CString::new("alternative").unwrap();
    let mut id = ptr::null_mut();
    assert_eq!(
        unsafe { mzv_identity_derive(fam.as_ptr(), ptrs.as_ptr(), ptrs.len(), variant.as_ptr(), &mut id) },
        MzvStatus::Ok
    );
    assert_eq!(unsafe { mzv_identity_is_final(id) }, 1);
    let (mut pass, mut res, mut bound) = (0, 1.0, 0.0);
    assert_eq!(unsafe { mzv_identity_verify(id, 1e-12, &mut pass, &mut res, &mut bound) }, MzvStatus::Ok);
    assert_eq!(pass, 1);
    assert!(res.abs() <= bound);

    let mut js = ptr::null_mut();
    assert_eq!(unsafe { mzv_identity_to_json(id, &mut js) }, MzvStatus::Ok);
    let text = take(js);
    let again = CString::new(text.clone()).unwrap();
    let mut id2 = ptr::null_mut();
    assert_eq!(unsafe { mzv_identity_from_json(again.as_ptr(), &mut id2) }, MzvStatus::Ok);
    let mut js2 = ptr::null_mut();
    unsafe { mzv_identity_to_json(id2, &mut js2) };
    assert_eq!(take(js2), text);
    unsafe {
        mzv_identity_free(id);
        mzv_identity_free(id2);
        mzv_identity_free(ptr::null_mut());
    }

    let unknown = CString::new("no-such-family").unwrap();
    let mut id3 = ptr::null_mut();
    assert_eq!(unsafe { mzv_identity_derive(unknown.as_ptr(), ptr::null(), 0, ptr::null(), &mut id3) }, MzvStatus::UnknownFamily);
    assert!(id3.is_null());
}

#[test]
fn ranks_and_reduction() {
    let mut r = 0usize;
    assert_eq!(unsafe { mzv_permutation_rank(4, ptr::null(), &mut r) }, MzvStatus::Ok);
    assert_eq!(r, 18);
    let syms = [0usize, 1, 1];
    assert_eq!(unsafe { mzv_permutation_rank(3, syms.as_ptr(), &mut r) }, MzvStatus::Ok);
    assert_eq!(r, 2);
    assert_eq!(unsafe { mzv_permutation_rank(1, ptr::null(), &mut r) }, MzvStatus::Precondition);

    let d = CString::new(r#"{"vertices":[0,1],"root":0,"edges":[{"from":0,"to":1,"label":2},{"from":1,"to":0,"label":1},{"from":1,"to":0,"label":0}]}"#).unwrap();
    let st = CString::new("direct").unwrap();
    let mut out = ptr::null_mut();
    assert_eq!(unsafe { mzv_diagram_reduce(d.as_ptr(), st.as_ptr(), &mut out) }, MzvStatus::Ok);
    let v: serde_json::Value = serde_json::from_str(&take(out)).unwrap();
    assert_eq!(v[0]["factors"][0], serde_json::json!([2, 1]));
    let bad = CString::new("{").unwrap();
    assert_eq!(unsafe { mzv_diagram_reduce(bad.as_ptr(), st.as_ptr(), &mut out) }, MzvStatus::Json);
}

/// Compiles a small C program against the generated header and static library.
#[test]
fn c_program_links_against_header() {
    let Ok(cc) = which_cc() else { return };
    let manifest = std::path::Path::new(env!("CARGO_MANIFEST_DIR"));
    let header_dir = manifest.join("include");
    // target/<profile>/deps/<test binary>
    let exe = std::env::current_exe().unwrap();
    let profile_dir = exe.parent().unwrap().parent().unwrap();
    let lib = profile_dir.join("libmzv_ffi.a");
    if !lib.exists() {
        eprintln!("static library not built at {}; skipping", lib.display());
        return;
    }
    let tmp = std::env::temp_dir().join(format!("mzv_ffi_c_{}", std::process::id()));
    std::fs::create_dir_all(&tmp).unwrap();
    let src = tmp.join("main.c");
    std::fs::write(
        &src,
        r#"#include <stdio.h>
#include <string.h>
#include "mzv.h"
int main(void) {
    double v = 0, b = 0;
    if (mzv_eval("2,1", 1e-12, &v, &b) != MZV_STATUS_OK) return 1;
    if (v < 1.2020569031 || v > 1.2020569032) return 2;
    size_t r = 0;
    if (mzv_permutation_rank(3, NULL, &r) != MZV_STATUS_OK || r != 4) return 3;
    if (mzv_eval("1", 1e-12, &v, &b) != MZV_STATUS_NOT_ADMISSIBLE) return 4;
    if (strlen(mzv_last_error_message()) == 0) return 5;
    const char *params[] = {"2", "3"};
    MzvIdentity *id = NULL;
    if (mzv_identity_derive("reflection", params, 2, NULL, &id) != MZV_STATUS_OK) return 6;
    int pass = 0;
    if (mzv_identity_verify(id, 1e-12, &pass, NULL, NULL) != MZV_STATUS_OK || !pass) return 7;
    char *json = NULL;
    mzv_identity_to_json(id, &json);
    printf("%s\n", json);
    mzv_string_free(json);
    mzv_identity_free(id);
    return 0;
}
"#,
    )
    .unwrap();
    let bin = tmp.join("main");
    let status = std::process::Command::new(&cc)
        .arg(&src)
        .arg("-I")
        .arg(&header_dir)
        .arg(&lib)
        .args(["-lpthread", "-ldl", "-lm", "-o"])
        .arg(&bin)
        .status()
        .unwrap();
    assert!(status.success(), "C compilation failed");
    let out = std::process::Command::new(&bin).output().unwrap();
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    assert!(String::from_utf8_lossy(&out.stdout).contains("\"family\":\"reflection\""));
    let _ = std::fs::remove_dir_all(&tmp);
}

fn which_cc() -> Result<String, ()> {
    for cc in ["cc", "gcc", "clang"] {
        if std::process::Command::new(cc).arg("--version").output().is_ok() {
            return Ok(cc.to_string());
        }
    }
    Err(())
}
