use std::ffi::{c_char, CStr, CString};
use std::path::PathBuf;
use std::process::Command;
use std::ptr;

use cold_ffi::*;

fn last_error() -> String {
    let mut buf = vec![0 as c_char; 512];
    unsafe { cold_last_error_message(buf.as_mut_ptr(), buf.len()) };
    unsafe { CStr::from_ptr(buf.as_ptr()) }.to_string_lossy().into_owned()
}

fn two_spin() -> *mut ColdModel {
    let mut m = ptr::null_mut();
    assert_eq!(unsafe { cold_model_two_spin(1.0, 2.0, &mut m) }, ColdStatus::Ok);
    m
}

#[test]
fn model_lifecycle() {
    let m = two_spin();
    assert_eq!(unsafe { cold_model_dim(m) }, 4);
    unsafe { cold_model_free(m) };
    let mut l = ptr::null_mut();
    assert_eq!(unsafe { cold_model_lattice(1.0, 4.0, 7, &mut l) }, ColdStatus::Ok);
    assert_eq!(unsafe { cold_model_dim(l) }, 7);
    unsafe { cold_model_free(l) };
    unsafe { cold_model_free(ptr::null_mut()) };
    assert_eq!(unsafe { cold_model_dim(ptr::null()) }, 0);

    let mut bad = 1 as *mut ColdModel;
    assert_eq!(unsafe { cold_model_ising(1.0, 0.02, 10.0, 1, &mut bad) }, ColdStatus::InvalidArgument);
    assert!(bad.is_null());
    assert!(!last_error().is_empty());
    assert_eq!(unsafe { cold_model_two_spin(1.0, 2.0, ptr::null_mut()) }, ColdStatus::NullPointer);
    let v = unsafe { CStr::from_ptr(cold_version()) }.to_str().unwrap();
    assert_eq!(v, env!("CARGO_PKG_VERSION"));
}

#[test]
fn evolve_matches_core() {
    let m = two_spin();
    let mut f = 0.0;
    let s = unsafe { cold_evolve(m, 0.1, COLD_CD_LCD2, ptr::null(), 0, 1e-10, &mut f) };
    assert_eq!(s, ColdStatus::Ok);
    assert!(1.0 - f < 1e-6);
    let beta = [0.7];
    let s = unsafe { cold_evolve(m, 0.1, COLD_CD_LCD1, beta.as_ptr(), 1, 1e-10, &mut f) };
    assert_eq!(s, ColdStatus::Ok);
    assert!(f > 0.0 && f < 1.0);

    assert_eq!(
        unsafe { cold_evolve(m, 0.1, COLD_CD_LATTICE, ptr::null(), 0, 1e-10, &mut f) },
        ColdStatus::Unsupported
    );
    assert!(last_error().contains("lattice_cd"));
    assert_eq!(unsafe { cold_evolve(m, 0.1, 42, ptr::null(), 0, 1e-10, &mut f) }, ColdStatus::InvalidArgument);
    assert_eq!(unsafe { cold_evolve(m, -1.0, COLD_CD_NONE, ptr::null(), 0, 1e-10, &mut f) }, ColdStatus::InvalidArgument);
    assert_eq!(unsafe { cold_evolve(m, 0.1, COLD_CD_NONE, ptr::null(), 2, 1e-10, &mut f) }, ColdStatus::NullPointer);
    assert_eq!(unsafe { cold_evolve(ptr::null(), 0.1, COLD_CD_NONE, ptr::null(), 0, 1e-10, &mut f) }, ColdStatus::NullPointer);
    unsafe { cold_model_free(m) };
}

#[test]
fn optimize_round_trip() {
    let m = two_spin();
    let mut o = ptr::null_mut();
    let s = unsafe { cold_optimize(m, COLD_METHOD_COLD, 1e-2, 1, 3, 5, 5.0, 0.0, &mut o) };
    assert_eq!(s, ColdStatus::Ok, "{}", last_error());
    let best = unsafe { cold_optimization_best_fidelity(o) };
    assert!(best > 0.99);
    let mut n = 0usize;
    let mut small = [0.0f64; 1];
    assert_eq!(unsafe { cold_optimization_fidelities(o, small.as_mut_ptr(), 1, &mut n) }, ColdStatus::BufferTooSmall);
    assert_eq!(n, 3);
    let mut fs = [0.0f64; 3];
    assert_eq!(unsafe { cold_optimization_fidelities(o, fs.as_mut_ptr(), 3, &mut n) }, ColdStatus::Ok);
    assert!(fs.iter().all(|&f| f <= best + 1e-12));
    let mut c = [0.0f64; 1];
    assert_eq!(unsafe { cold_optimization_coefficients(o, c.as_mut_ptr(), 1, &mut n) }, ColdStatus::Ok);
    assert_eq!(n, 1);
    // re-evaluating the coefficients reproduces the best fidelity
    let mut f = 0.0;
    unsafe { cold_evolve(m, 1e-2, COLD_CD_LCD1, c.as_ptr(), 1, 1e-10, &mut f) };
    assert!((f - best).abs() < 1e-9, "{f} vs {best}");
    assert_eq!(unsafe { cold_optimization_failed(o) }, 0);
    unsafe { cold_optimization_free(o) };

    let mut o2 = ptr::null_mut();
    assert_eq!(unsafe { cold_optimize(m, 7, 1e-2, 1, 3, 5, 5.0, 0.0, &mut o2) }, ColdStatus::InvalidArgument);
    assert_eq!(unsafe { cold_optimize(m, COLD_METHOD_BPO, 1e-2, 0, 3, 5, 5.0, 0.0, &mut o2) }, ColdStatus::InvalidArgument);
    assert!(o2.is_null());
    unsafe { cold_model_free(m) };
}

#[test]
fn run_config_returns_table() {
    let cfg = CString::new("model = two_spin\nmethods = none, lcd2\ntau_grid_invJ = 0.01\n").unwrap();
    let mut out = ptr::null_mut();
    assert_eq!(unsafe { cold_run_config(cfg.as_ptr(), COLD_FORMAT_CSV, &mut out) }, ColdStatus::Ok);
    let table = unsafe { CStr::from_ptr(out) }.to_str().unwrap().to_owned();
    unsafe { cold_string_free(out) };
    assert_eq!(table.lines().count(), 3);
    assert!(table.starts_with("schema_version,"));

    let bad = CString::new("model = two_spin\nmethods = lcd2\ntau_grid_invJ =\n").unwrap();
    let mut out = ptr::null_mut();
    assert_eq!(unsafe { cold_run_config(bad.as_ptr(), COLD_FORMAT_JSON, &mut out) }, ColdStatus::ConfigError);
    assert!(out.is_null());
    assert!(last_error().contains("tau_grid_invJ"));
}

fn crate_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
}

fn cc() -> Option<&'static str> {
    ["cc", "gcc", "clang"]
        .into_iter()
        .find(|c| Command::new(c).arg("--version").output().is_ok_and(|o| o.status.success()))
}

const C_PROGRAM: &str = r#"
#include <stdio.h>
#include "cold.h"

int main(void) {
    ColdModel *m = NULL;
    if (cold_model_two_spin(1.0, 2.0, &m) != COLD_STATUS_OK) return 10;
    double f = 0.0;
    if (cold_evolve(m, 0.1, COLD_CD_LCD2, NULL, 0, 1e-10, &f) != COLD_STATUS_OK) return 11;
    if (cold_evolve(m, 0.1, COLD_CD_LATTICE, NULL, 0, 1e-10, &f) != COLD_STATUS_UNSUPPORTED) return 12;
    char msg[256];
    if (cold_last_error_message(msg, sizeof msg) == 0) return 13;
    cold_model_free(m);
    printf("%.12f\n", f);
    return 0;
}
"#;

#[test]
fn header_compiles_and_links_from_c() {
    let header = crate_dir().join("include/cold.h");
    let text = std::fs::read_to_string(&header).unwrap();
    for f in ["cold_model_ising", "cold_optimize", "cold_run_config", "cold_last_error_message", "COLD_STATUS_PANIC"] {
        assert!(text.contains(f), "{f} missing from the header");
    }
    let Some(cc) = cc() else {
        eprintln!("no C compiler found; skipping the C build");
        return;
    };
    let tmp = PathBuf::from(env!("CARGO_TARGET_TMPDIR")).join("c_api");
    std::fs::create_dir_all(&tmp).unwrap();
    let src = tmp.join("main.c");
    std::fs::write(&src, C_PROGRAM).unwrap();
    let inc = crate_dir().join("include");
    let syntax = Command::new(cc)
        .args(["-std=c99", "-Wall", "-Werror", "-fsyntax-only", "-I"])
        .arg(&inc)
        .arg(&src)
        .output()
        .unwrap();
    assert!(syntax.status.success(), "{}", String::from_utf8_lossy(&syntax.stderr));

    // the staticlib sits next to deps/ in the profile directory
    let profile_dir = std::env::current_exe().unwrap().parent().unwrap().parent().unwrap().to_path_buf();
    let lib = profile_dir.join("libcold_ffi.a");
    if !lib.exists() {
        eprintln!("{} not built; skipping the link step", lib.display());
        return;
    }
    let exe = tmp.join("main");
    let link = Command::new(cc)
        .args(["-std=c99", "-I"])
        .arg(&inc)
        .arg(&src)
        .arg(&lib)
        .args(["-lm", "-lpthread", "-ldl", "-o"])
        .arg(&exe)
        .output()
        .unwrap();
    assert!(link.status.success(), "{}", String::from_utf8_lossy(&link.stderr));
    let run = Command::new(&exe).output().unwrap();
    assert!(run.status.success(), "exit {:?}", run.status.code());
    let f: f64 = String::from_utf8(run.stdout).unwrap().trim().parse().unwrap();
    assert!(1.0 - f < 1e-6);
}

#[test]
fn header_is_up_to_date() {
    // regenerated by build.rs on every build of this crate
    let text = std::fs::read_to_string(crate_dir().join("include/cold.h")).unwrap();
    assert!(text.starts_with("#ifndef COLD_H"));
    let exported = std::fs::read_to_string(crate_dir().join("src/lib.rs"))
        .unwrap()
        .lines()
        .filter_map(|l| l.split("extern \"C\" fn ").nth(1))
        .map(|l| l.split('(').next().unwrap().to_string())
        .collect::<Vec<_>>();
    assert!(exported.len() >= 15);
    for f in exported {
        assert!(text.contains(&format!("{f}(")), "{f} not in header");
    }
}
