use std::f64::consts::PI;
use std::ffi::{CStr, CString};
use std::path::{Path, PathBuf};
use std::process::Command;
use std::ptr;

use hyptwist_ffi::*;

fn lift(a: f64, b: f64, c: f64, d: f64) -> *mut HtLift {
    let mut out = ptr::null_mut();
    assert_eq!(unsafe { ht_lift_new(a, b, c, d, &mut out) }, HtStatus::Ok);
    out
}

fn last_error() -> String {
    let p = ht_last_error_message();
    assert!(!p.is_null());
    unsafe { CStr::from_ptr(p) }.to_string_lossy().into_owned()
}

#[test]
fn lifts_round_trip() {
    let a = lift(2.0, 1.0, 1.0, 1.0);
    let mut m = [0.0; 4];
    let (mut theta, mut trace) = (f64::NAN, f64::NAN);
    unsafe {
        assert_eq!(ht_lift_matrix(a, m.as_mut_ptr()), HtStatus::Ok);
        assert_eq!(ht_lift_theta(a, &mut theta), HtStatus::Ok);
        assert_eq!(ht_lift_trace(a, &mut trace), HtStatus::Ok);
    }
    assert_eq!(m, [2.0, 1.0, 1.0, 1.0]);
    assert!((theta - 0.0).abs() < 1e-15);
    assert_eq!(trace, 3.0);

    let mut inv = ptr::null_mut();
    let mut prod = ptr::null_mut();
    unsafe {
        assert_eq!(ht_inverse(a, &mut inv), HtStatus::Ok);
        assert_eq!(ht_compose(inv, a, &mut prod), HtStatus::Ok);
        assert_eq!(ht_lift_theta(prod, &mut theta), HtStatus::Ok);
    }
    assert!(theta.abs() < 1e-12);
    unsafe {
        ht_lift_free(a);
        ht_lift_free(inv);
        ht_lift_free(prod);
        ht_lift_free(ptr::null_mut());
    }
}

#[test]
fn classify_and_twist() {
    let mut z = ptr::null_mut();
    unsafe { assert_eq!(ht_lift_with_theta(-1.0, 0.0, 0.0, -1.0, PI, &mut z), HtStatus::Ok) };
    let mut r = HtRegion { kind: HtRegionKind::Hyperbolic, n: 0, chirality: 0 };
    unsafe { assert_eq!(ht_classify(z, 1e-9, &mut r), HtStatus::Ok) };
    assert_eq!(r, HtRegion { kind: HtRegionKind::CentralPower, n: 1, chirality: 0 });

    let par = lift(1.0, 1.0, 0.0, 1.0);
    unsafe { assert_eq!(ht_classify(par, 1e-9, &mut r), HtStatus::Ok) };
    assert_eq!(r, HtRegion { kind: HtRegionKind::Parabolic, n: 0, chirality: 1 });

    let mut t = 0.0;
    unsafe { assert_eq!(ht_twist(z, HtPoint { x: 0.3, y: 2.0 }, &mut t), HtStatus::Ok) };
    assert!((t - 2.0 * PI).abs() < 1e-9);

    let hyp = lift(2.0, 1.0, 1.0, 1.0);
    unsafe { assert_eq!(ht_twist_ideal(hyp, 0.0, false, 1e-9, &mut t), HtStatus::Ok) };
    assert!((t / PI - (t / PI).round()).abs() < 1e-9);
    unsafe { assert_eq!(ht_twist_ideal(hyp, 1.6180339888, false, 1e-9, &mut t), HtStatus::IdealAmbiguous) };
    assert!(last_error().contains("ambiguous"));
    unsafe {
        ht_lift_free(z);
        ht_lift_free(par);
        ht_lift_free(hyp);
    }
}

#[test]
fn errors_are_reported() {
    let mut out = ptr::null_mut();
    unsafe { assert_eq!(ht_lift_new(2.0, 0.0, 0.0, 2.0, &mut out), HtStatus::InvalidInput) };
    assert!(out.is_null());
    assert!(last_error().contains("determinant"));

    let amb = lift(1.5, 1e10, 1.25e-10, 1.5);
    let mut r = HtRegion { kind: HtRegionKind::Hyperbolic, n: 0, chirality: 0 };
    unsafe { assert_eq!(ht_classify(amb, 1e-9, &mut r), HtStatus::Ambiguous) };

    let mut t = 0.0;
    unsafe {
        assert_eq!(ht_lift_theta(ptr::null(), &mut t), HtStatus::NullPointer);
        assert_eq!(ht_lift_theta(amb, ptr::null_mut()), HtStatus::NullPointer);
        assert_eq!(ht_twist(amb, HtPoint { x: 0.0, y: -1.0 }, &mut t), HtStatus::InvalidInput);
        ht_lift_free(amb);
    }
    let ok = lift(1.0, 0.0, 0.0, 1.0);
    unsafe { ht_lift_free(ok) };
    assert!(ht_last_error_message().is_null());
}

#[test]
fn areas_and_pentagons() {
    let mut area = 0.0;
    let (p, q, r) = (HtPoint { x: 0.0, y: 1.0 }, HtPoint { x: 1.0, y: 1.0 }, HtPoint { x: 0.0, y: 2.0 });
    unsafe { assert_eq!(ht_tri_area(p, q, r, &mut area), HtStatus::Ok) };
    assert!(area > 0.0 && area < PI);

    let a = lift(2.0, 1.0, 1.0, 1.0);
    let b = lift(1.0, 1.0, 1.0, 2.0);
    let mut pent = HtPentagon {
        area: 0.0,
        twist_of_commutator: 0.0,
        residual: 0.0,
        congruence_residual: 0.0,
        simple: false,
        degenerate: false,
    };
    unsafe { assert_eq!(ht_pentagon(a, b, HtPoint { x: 0.2, y: 0.7 }, &mut pent), HtStatus::Ok) };
    assert!(pent.congruence_residual.abs() < 1e-6);
    if pent.simple {
        assert!(pent.residual.abs() < 1e-6);
    }
    let mut c = ptr::null_mut();
    unsafe {
        assert_eq!(ht_commutator(a, b, &mut c), HtStatus::Ok);
        ht_lift_free(a);
        ht_lift_free(b);
        ht_lift_free(c);
    }
}

#[test]
fn representations() {
    let path = Path::new(env!("CARGO_MANIFEST_DIR")).join("../core/tests/fixtures/dpoly_0_3.json");
    let json = CString::new(std::fs::read_to_string(path).unwrap()).unwrap();
    let mut rep = ptr::null_mut();
    unsafe { assert_eq!(ht_rep_from_json(json.as_ptr(), &mut rep), HtStatus::Ok) };
    let mut e = HtEuler { m: 99, theta: 0.0, theta_residual: 1.0, chi: 0, bound_satisfied: false };
    unsafe { assert_eq!(ht_euler_number(rep, &mut e), HtStatus::Ok) };
    assert_eq!(e.chi, -1);
    assert!(e.m.abs() <= 1 && e.bound_satisfied && e.theta_residual < 1e-6);
    unsafe { ht_rep_free(rep) };

    let bad = CString::new("{\"genus\": 1}").unwrap();
    let mut rep = ptr::null_mut();
    unsafe { assert_eq!(ht_rep_from_json(bad.as_ptr(), &mut rep), HtStatus::InvalidInput) };
    assert!(rep.is_null());
    unsafe { assert_eq!(ht_rep_from_json(ptr::null(), &mut rep), HtStatus::NullPointer) };

    let mut s = HtSweep { chi: 0, violations: 1, failures: 1, max_abs_m: 9, distinct_m: 0, passed: false };
    unsafe { assert_eq!(ht_milnor_wood_sweep(1, 1, 500, 3, &mut s), HtStatus::Ok) };
    assert!(s.passed && s.violations == 0 && s.max_abs_m <= 1 && s.chi == -1);
    unsafe { assert_eq!(ht_milnor_wood_sweep(0, 2, 10, 3, &mut s), HtStatus::InvalidInput) };
}

#[test]
fn version_is_a_c_string() {
    let v = unsafe { CStr::from_ptr(ht_version()) };
    assert_eq!(v.to_str().unwrap(), env!("CARGO_PKG_VERSION"));
}

#[test]
fn header_declares_the_api() {
    let header = std::fs::read_to_string(Path::new(env!("CARGO_MANIFEST_DIR")).join("include/hyptwist.h")).unwrap();
    for f in [
        "ht_lift_new",
        "ht_lift_with_theta",
        "ht_lift_free",
        "ht_lift_theta",
        "ht_lift_matrix",
        "ht_lift_trace",
        "ht_compose",
        "ht_inverse",
        "ht_commutator",
        "ht_classify",
        "ht_twist",
        "ht_twist_ideal",
        "ht_tri_area",
        "ht_pentagon",
        "ht_rep_from_json",
        "ht_rep_free",
        "ht_euler_number",
        "ht_milnor_wood_sweep",
        "ht_version",
        "ht_last_error_message",
    ] {
        assert!(header.contains(&format!("{f}(")), "{f} missing");
    }
    assert!(header.contains("typedef struct HtLift HtLift;"));
}

/// Directory holding the static library built alongside this test.
fn lib_dir() -> PathBuf {
    let exe = std::env::current_exe().unwrap();
    exe.parent().unwrap().parent().unwrap().to_path_buf()
}

#[test]
fn c_program_links_and_runs() {
    let dir = Path::new(env!("CARGO_MANIFEST_DIR"));
    let lib = lib_dir().join("libhyptwist_ffi.a");
    assert!(lib.exists(), "{} not built", lib.display());
    let tmp = tempfile::tempdir().unwrap();
    let bin = tmp.path().join("smoke");
    let status = Command::new("cc")
        .arg(dir.join("tests/smoke.c"))
        .arg("-I")
        .arg(dir.join("include"))
        .arg(&lib)
        .args(["-lm", "-lpthread", "-ldl", "-o"])
        .arg(&bin)
        .status()
        .expect("cc runs");
    assert!(status.success());
    let out = Command::new(&bin).output().unwrap();
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    assert!(String::from_utf8_lossy(&out.stdout).starts_with("ok "));
}
