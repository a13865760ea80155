//! The C entry points, called from Rust and from a C program built against
//! the generated header.

use numrange_ffi::*;
use std::ffi::{c_char, CStr, CString};
use std::path::{Path, PathBuf};
use std::process::Command;
use std::ptr;

fn last_error() -> String {
    let mut buf = [0 as c_char; 256];
    unsafe { nr_last_error(buf.as_mut_ptr(), buf.len()) };
    unsafe { CStr::from_ptr(buf.as_ptr()) }.to_string_lossy().into_owned()
}

fn map(json: &str) -> *mut NrMap {
    let text = CString::new(json).unwrap();
    let mut out = ptr::null_mut();
    assert_eq!(unsafe { nr_map_from_json(text.as_ptr(), &mut out) }, NrStatus::Ok);
    assert!(!out.is_null());
    out
}

#[test]
fn radii_and_bloch_example() {
    let mut r = 0.0;
    assert_eq!(unsafe { nr_starlike_radius(0.0, &mut r) }, NrStatus::Ok);
    assert_eq!(r, 1.0);
    assert_eq!(unsafe { nr_spiral_radius(std::f64::consts::FRAC_PI_4, &mut r) }, NrStatus::Ok);
    assert!((r - (2f64.sqrt() - 1.0)).abs() < 1e-15);
    assert_eq!(unsafe { nr_spiral_radius(2.0, &mut r) }, NrStatus::Domain);
    assert!(last_error().contains("π/2"));

    let t = std::f64::consts::FRAC_PI_3;
    assert_eq!(unsafe { nr_bloch_r_star(t, 0.0, 1.0, &mut r) }, NrStatus::Ok);
    assert!((r - 0.5).abs() < 1e-10);
    let (mut s, mut rho) = (0.0, 0.0);
    assert_eq!(unsafe { nr_bloch_s_star(t, 0.0, 1.0, &mut s, &mut rho) }, NrStatus::Ok);
    assert!((s - (2.0 - 3f64.sqrt())).abs() < 1e-10 && (rho - s / 2.0).abs() < 1e-10);
    assert_eq!(unsafe { nr_bloch_r_star(t, 1.5, 1.0, &mut r) }, NrStatus::Precondition);
}

#[test]
fn map_handle_lifecycle() {
    let m = map(r#"{"dim": 2, "R": 1, "poly": [[{"idx": [1, 0], "re": -1, "im": 0}], [{"idx": [0, 2], "re": 0, "im": 1}]]}"#);
    let mut dim = 0;
    let mut radius = 0.0;
    unsafe {
        assert_eq!(nr_map_dim(m, &mut dim), NrStatus::Ok);
        assert_eq!(nr_map_radius(m, &mut radius), NrStatus::Ok);
    }
    assert_eq!((dim, radius), (2, 1.0));
    let x = [0.5, 0.0, 0.0, 0.5];
    let mut hx = [0.0; 4];
    assert_eq!(unsafe { nr_map_eval(m, x.as_ptr(), 2, hx.as_mut_ptr()) }, NrStatus::Ok);
    // h(x) = (−x₁, i x₂²) with x₂ = 0.5i gives (−0.5, −0.25i)
    assert_eq!(hx, [-0.5, 0.0, 0.0, -0.25]);
    assert_eq!(unsafe { nr_map_eval(m, x.as_ptr(), 3, hx.as_mut_ptr()) }, NrStatus::DimensionMismatch);
    let mut v = 0.0;
    assert_eq!(unsafe { nr_sphere_pairing(m, 0.5, 0.0, 0, 0, 42, &mut v) }, NrStatus::Ok);
    assert!(v.is_finite());
    unsafe { nr_map_free(m) };
    unsafe { nr_map_free(ptr::null_mut()) };
}

#[test]
fn resolvent_and_null_point_radius() {
    let m = map(r#"{"dim": 1, "R": 1, "poly": [[{"idx": [2], "re": 1, "im": 0}]]}"#);
    let z = [0.5, 0.0];
    let mut x = [0.0; 2];
    let mut res = f64::NAN;
    assert_eq!(unsafe { nr_solve_resolvent(m, 2.0, 0.0, z.as_ptr(), 1, f64::INFINITY, x.as_mut_ptr(), &mut res) }, NrStatus::Ok);
    assert!((x[0] - (1.0 - 0.5f64.sqrt())).abs() < 1e-12 && x[1].abs() < 1e-12 && res <= 1e-10);
    assert_eq!(unsafe { nr_solve_resolvent(m, 2.0, 0.0, z.as_ptr(), 1, 1.0, x.as_mut_ptr(), ptr::null_mut()) }, NrStatus::Ok);
    unsafe { nr_map_free(m) };

    let mut r = 0.0;
    assert_eq!(unsafe { nr_nullp_radius(0.05, -1.0, &mut r) }, NrStatus::Ok);
    assert!((r - (9.0 - 80f64.sqrt())).abs() < 1e-12);
    assert_eq!(unsafe { nr_nullp_radius(0.5, -1.0, &mut r) }, NrStatus::ConditionFailed);
}

#[test]
fn bad_inputs_map_to_status_codes() {
    let mut out = ptr::null_mut();
    let bad = CString::new("{").unwrap();
    assert_eq!(unsafe { nr_map_from_json(bad.as_ptr(), &mut out) }, NrStatus::Parse);
    assert!(out.is_null());
    let invalid = CString::new(r#"{"dim": 0, "R": 1, "poly": []}"#).unwrap();
    assert_eq!(unsafe { nr_map_from_json(invalid.as_ptr(), &mut out) }, NrStatus::Validation);
    assert_eq!(unsafe { nr_map_from_json(ptr::null(), &mut out) }, NrStatus::NullPointer);
    let utf = [0xffu8 as c_char, 0];
    assert_eq!(unsafe { nr_map_from_json(utf.as_ptr(), &mut out) }, NrStatus::InvalidUtf8);
    assert_eq!(unsafe { nr_starlike_radius(0.1, ptr::null_mut()) }, NrStatus::NullPointer);
    assert_eq!(unsafe { nr_map_dim(ptr::null(), &mut 0) }, NrStatus::NullPointer);
    assert_eq!(last_error(), "`map` is null");

    // the reported length is the full message, the copy is truncated
    let mut small = [0 as c_char; 4];
    let full = unsafe { nr_last_error(small.as_mut_ptr(), small.len()) };
    assert_eq!(full, "`map` is null".len());
    assert_eq!(unsafe { CStr::from_ptr(small.as_ptr()) }.to_str().unwrap(), "`ma");
    let ok_after = unsafe { nr_starlike_radius(0.1, &mut 0.0) };
    assert_eq!(ok_after, NrStatus::Ok);
    assert_eq!(last_error(), "");
}

#[test]
fn version_string() {
    let v = unsafe { CStr::from_ptr(nr_version()) };
    assert_eq!(v.to_str().unwrap(), env!("CARGO_PKG_VERSION"));
}

fn manifest() -> &'static Path {
    Path::new(env!("CARGO_MANIFEST_DIR"))
}

#[test]
fn header_declares_every_entry_point() {
    let h = std::fs::read_to_string(manifest().join("include/numrange.h")).unwrap();
    for name in [
        "nr_version",
        "nr_last_error",
        "nr_map_from_json",
        "nr_map_free",
        "nr_map_dim",
        "nr_map_radius",
        "nr_map_eval",
        "nr_sphere_pairing",
        "nr_solve_resolvent",
        "nr_nullp_radius",
        "nr_starlike_radius",
        "nr_spiral_radius",
        "nr_bloch_r_star",
        "nr_bloch_s_star",
        "typedef struct NrMap NrMap",
        "NR_STATUS_OK = 0",
    ] {
        assert!(h.contains(name), "header lacks {name}");
    }
}

/// Directory holding the static library built alongside this test.
fn lib_dir() -> PathBuf {
    let exe = std::env::current_exe().unwrap();
    exe.parent().and_then(Path::parent).unwrap().to_path_buf()
}

#[test]
fn c_program_links_against_the_static_library() {
    let lib = lib_dir().join("libnumrange_ffi.a");
    if Command::new("cc").arg("--version").output().is_err() || !lib.exists() {
        eprintln!("skipped: no C compiler or no static library at {}", lib.display());
        return;
    }
    let dir = tempfile::tempdir().unwrap();
    let exe = dir.path().join("smoke");
    let out = Command::new("cc")
        .arg("-std=c11")
        .arg("-D_DEFAULT_SOURCE")
        .arg("-Wall")
        .arg("-Werror")
        .arg("-I")
        .arg(manifest().join("include"))
        .arg(manifest().join("tests/smoke.c"))
        .arg(&lib)
        .args(["-lpthread", "-ldl", "-lm", "-o"])
        .arg(&exe)
        .output()
        .unwrap();
    assert!(out.status.success(), "cc failed: {}", String::from_utf8_lossy(&out.stderr));
    let run = Command::new(&exe).output().unwrap();
    assert!(run.status.success(), "{}", String::from_utf8_lossy(&run.stderr));
    assert!(String::from_utf8_lossy(&run.stdout).starts_with("ok "));
}
