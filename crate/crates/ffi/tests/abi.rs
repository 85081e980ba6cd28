use std::ffi::{c_char, c_int, CStr, CString};
use std::path::{Path, PathBuf};
use std::process::Command;
use std::ptr;

use dirac_yukawa_ffi::*;

fn builtin(name: &str) -> *mut DyModel {
    let name = CString::new(name).unwrap();
    let mut m = ptr::null_mut();
    assert_eq!(unsafe { dy_model_builtin(name.as_ptr(), &mut m) }, DyStatus::Ok);
    m
}

fn last_error() -> String {
    let p = dy_last_error();
    assert!(!p.is_null());
    unsafe { CStr::from_ptr(p) }.to_string_lossy().into_owned()
}

fn run(m: *const DyModel, cmd: &str) -> (DyStatus, Option<String>, c_int) {
    let cmd = CString::new(cmd).unwrap();
    let mut out: *mut c_char = ptr::null_mut();
    let mut pass = -1;
    let s = unsafe { dy_run(m, cmd.as_ptr(), &mut out, &mut pass) };
    let text = (!out.is_null()).then(|| {
        let t = unsafe { CStr::from_ptr(out) }.to_str().unwrap().to_string();
        unsafe { dy_string_free(out) };
        t
    });
    (s, text, pass)
}

#[test]
fn run_returns_report_json() {
    let m = builtin("ew-reference");
    let (s, text, pass) = run(m, "masses");
    assert_eq!(s, DyStatus::Ok);
    assert_eq!(pass, 1);
    let v: serde_json::Value = serde_json::from_str(&text.unwrap()).unwrap();
    assert_eq!(v["command"], "masses");
    let (s, _, _) = run(m, "frobnicate");
    assert_eq!(s, DyStatus::InputError);
    assert!(last_error().contains("frobnicate"));
    unsafe { dy_model_free(m) };
}

#[test]
fn spectrum_query_then_fill() {
    let m = builtin("u1-higgs");
    let mut n = 0usize;
    let s = unsafe { dy_dirac_spectrum(m, 1, ptr::null_mut(), 0, &mut n) };
    assert_eq!(s, DyStatus::BufferTooSmall);
    // 4 sites x 2 spinor x 2 internal
    assert_eq!(n, 16);
    let mut buf = vec![0.0; n];
    assert_eq!(unsafe { dy_dirac_spectrum(m, 1, buf.as_mut_ptr(), n, &mut n) }, DyStatus::Ok);
    assert!(buf.windows(2).all(|w| w[0] <= w[1]));
    // zero mode of the massive pair: m² = (0.5 · 2)² at k = 0
    assert!((buf[0] - 1.0).abs() < 1e-9, "{buf:?}");

    let mut lin = vec![0.0; n];
    assert_eq!(unsafe { dy_dirac_spectrum(m, 0, lin.as_mut_ptr(), n, &mut n) }, DyStatus::Ok);
    let mut sq: Vec<f64> = lin.iter().map(|x| x * x).collect();
    sq.sort_by(f64::total_cmp);
    for (a, b) in sq.iter().zip(&buf) {
        assert!((a - b).abs() < 1e-9);
    }
    unsafe { dy_model_free(m) };
}

#[test]
fn operator_dump_loads_back() {
    let m = builtin("ew-reference");
    let mut out: *mut c_char = ptr::null_mut();
    assert_eq!(unsafe { dy_dirac_operator_json(m, &mut out) }, DyStatus::Ok);
    let text = unsafe { CStr::from_ptr(out) }.to_str().unwrap().to_string();
    unsafe { dy_string_free(out) };
    let op = dirac_yukawa::lattice_dirac::io::load_operator(&text).unwrap();
    assert_eq!(op.dims(), (16, 2, 3));
    unsafe { dy_model_free(m) };
}

#[test]
fn errors_and_null_handling() {
    let mut m = ptr::null_mut();
    let bad = CString::new("/nonexistent/model.toml").unwrap();
    assert_eq!(unsafe { dy_model_load(bad.as_ptr(), &mut m) }, DyStatus::InputError);
    assert!(m.is_null());
    assert!(!last_error().is_empty());

    assert_eq!(unsafe { dy_model_builtin(ptr::null(), &mut m) }, DyStatus::NullPointer);
    let (s, _, _) = run(ptr::null(), "check");
    assert_eq!(s, DyStatus::NullPointer);

    let invalid = [0xffu8 as c_char, 0];
    assert_eq!(unsafe { dy_model_builtin(invalid.as_ptr(), &mut m) }, DyStatus::InvalidUtf8);

    unsafe {
        dy_model_free(ptr::null_mut());
        dy_string_free(ptr::null_mut());
    }
    // a successful call clears the message
    let ok = builtin("u1-higgs");
    assert!(dy_last_error().is_null());
    unsafe { dy_model_free(ok) };
}

#[test]
fn load_shipped_model_file() {
    let path = Path::new(env!("CARGO_MANIFEST_DIR")).join("../../models/u1xu1_wilson.toml");
    let path = CString::new(path.to_str().unwrap()).unwrap();
    let mut m = ptr::null_mut();
    assert_eq!(unsafe { dy_model_load(path.as_ptr(), &mut m) }, DyStatus::Ok);
    let (s, _, pass) = run(m, "verify-all");
    assert_eq!((s, pass), (DyStatus::Ok, 1));
    unsafe { dy_model_free(m) };
}

#[test]
fn version_is_crate_version() {
    let v = unsafe { CStr::from_ptr(dy_version()) }.to_str().unwrap();
    assert_eq!(v, env!("CARGO_PKG_VERSION"));
}

#[test]
fn header_declares_every_export() {
    let header = std::fs::read_to_string(Path::new(env!("CARGO_MANIFEST_DIR")).join("include/dirac_yukawa.h")).unwrap();
    for sym in [
        "dy_model_load",
        "dy_model_builtin",
        "dy_model_free",
        "dy_run",
        "dy_dirac_spectrum",
        "dy_dirac_operator_json",
        "dy_string_free",
        "dy_last_error",
        "dy_version",
        "typedef struct DyModel DyModel",
        "DY_STATUS_BUFFER_TOO_SMALL = 5",
    ] {
        assert!(header.contains(sym), "{sym}");
    }
}

fn target_dir() -> PathBuf {
    // target/<profile>/deps/abi-<hash>
    std::env::current_exe().unwrap().parent().unwrap().parent().unwrap().to_path_buf()
}

#[test]
fn c_program_links_against_staticlib() {
    let lib = target_dir().join("libdirac_yukawa_ffi.a");
    let cc = std::env::var("CC").unwrap_or_else(|_| "cc".into());
    if !lib.exists() || Command::new(&cc).arg("--version").output().is_err() {
        eprintln!("skipping: no C compiler or static library at {}", lib.display());
        return;
    }
    let root = Path::new(env!("CARGO_MANIFEST_DIR"));
    let exe = PathBuf::from(env!("CARGO_TARGET_TMPDIR")).join("dy_smoke");
    let status = Command::new(&cc)
        .arg(root.join("tests/c/smoke.c"))
        .arg("-I")
        .arg(root.join("include"))
        .arg(&lib)
        .args(["-lm", "-lpthread", "-ldl", "-o"])
        .arg(&exe)
        .status()
        .unwrap();
    assert!(status.success());
    let out = Command::new(&exe).output().unwrap();
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let line = String::from_utf8(out.stdout).unwrap();
    assert!(line.starts_with("96 "), "{line}");
}
