//! C ABI over `hyptwist`.
//!
//! Every function returns an [`HtStatus`] and writes its result through an
//! out pointer. On failure the out pointer is left untouched and
//! [`ht_last_error_message`] describes the error on the calling thread.
//! Handles returned through `out` pointers are owned by the caller and
//! released with the matching `_free` function.

#![allow(clippy::missing_safety_doc)]

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};

use hyptwist::commutator::{commutator, pentagon};
use hyptwist::cover::{classify, compose, Chirality};
use hyptwist::doc::RepDocument;
use hyptwist::hypgeom::tri_area;
use hyptwist::surface::{euler_number, milnor_wood_sweep, SurfaceRep};
use hyptwist::twist::{twist, twist_at_infinity};
use hyptwist::{Error, Isometry, LiftedIsometry, Point, Region};

/// A lifted isometry.
pub struct HtLift(LiftedIsometry);

/// A surface group representation.
pub struct HtRep(SurfaceRep);

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum HtStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidInput = 2,
    Ambiguous = 3,
    IdealAmbiguous = 4,
    NotCentral = 5,
    Degenerate = 6,
    Internal = 7,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum HtRegionKind {
    CentralPower = 0,
    Hyperbolic = 1,
    Parabolic = 2,
    Elliptic = 3,
}

/// A region of the cover. `chirality` is `+1` or `-1` for parabolic
/// regions and `0` otherwise.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct HtRegion {
    pub kind: HtRegionKind,
    pub n: i64,
    pub chirality: i32,
}

/// A finite point `x + iy` of the upper half-plane.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HtPoint {
    pub x: f64,
    pub y: f64,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HtPentagon {
    pub area: f64,
    pub twist_of_commutator: f64,
    pub residual: f64,
    pub congruence_residual: f64,
    pub simple: bool,
    pub degenerate: bool,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HtEuler {
    pub m: i64,
    pub theta: f64,
    pub theta_residual: f64,
    pub chi: i64,
    pub bound_satisfied: bool,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HtSweep {
    pub chi: i64,
    pub violations: usize,
    pub failures: usize,
    pub max_abs_m: i64,
    /// Number of distinct Euler numbers seen.
    pub distinct_m: usize,
    pub passed: bool,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

struct Fail(HtStatus, String);

impl From<Error> for Fail {
    fn from(e: Error) -> Fail {
        let status = match e {
            Error::Ambiguous(_) => HtStatus::Ambiguous,
            Error::IdealAmbiguous(_) => HtStatus::IdealAmbiguous,
            Error::NotCentral(_) => HtStatus::NotCentral,
            Error::Degenerate(_) | Error::Coincident(_) => HtStatus::Degenerate,
            _ => HtStatus::InvalidInput,
        };
        Fail(status, e.to_string())
    }
}

fn set_error(msg: String) {
    let c = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

fn guard(f: impl FnOnce() -> Result<(), Fail>) -> HtStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => {
            LAST_ERROR.with(|e| *e.borrow_mut() = None);
            HtStatus::Ok
        }
        Ok(Err(Fail(status, msg))) => {
            set_error(msg);
            status
        }
        Err(p) => {
            let msg = p
                .downcast_ref::<&str>()
                .map(|s| s.to_string())
                .or_else(|| p.downcast_ref::<String>().cloned())
                .unwrap_or_else(|| "panic".into());
            set_error(format!("internal error: {msg}"));
            HtStatus::Internal
        }
    }
}

unsafe fn get<'a, T>(p: *const T, name: &str) -> Result<&'a T, Fail> {
    p.as_ref().ok_or_else(|| Fail(HtStatus::NullPointer, format!("{name} is null")))
}

unsafe fn put<T>(out: *mut T, v: T) -> Result<(), Fail> {
    if out.is_null() {
        return Err(Fail(HtStatus::NullPointer, "out is null".into()));
    }
    out.write(v);
    Ok(())
}

fn check_out<T>(out: *mut T) -> Result<(), Fail> {
    if out.is_null() {
        Err(Fail(HtStatus::NullPointer, "out is null".into()))
    } else {
        Ok(())
    }
}

unsafe fn put_lift(out: *mut *mut HtLift, x: LiftedIsometry) -> Result<(), Fail> {
    check_out(out)?;
    out.write(Box::into_raw(Box::new(HtLift(x))));
    Ok(())
}

fn point(p: HtPoint) -> Result<Point, Fail> {
    Ok(Point::finite(p.x, p.y)?)
}

/// Version of the library as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn ht_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// Message for the last failed call on this thread, or null. Valid until
/// the next call on this thread.
#[no_mangle]
pub extern "C" fn ht_last_error_message() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(std::ptr::null(), |c| c.as_ptr()))
}

/// The base lift of `[[a, b], [c, d]]`, whose determinant must be 1.
#[no_mangle]
pub unsafe extern "C" fn ht_lift_new(a: f64, b: f64, c: f64, d: f64, out: *mut *mut HtLift) -> HtStatus {
    guard(|| put_lift(out, LiftedIsometry::lift(Isometry::new(a, b, c, d)?, 0)))
}

/// The lift of `[[a, b], [c, d]]` with angle `theta`; either sign of the
/// matrix is accepted.
#[no_mangle]
pub unsafe extern "C" fn ht_lift_with_theta(
    a: f64,
    b: f64,
    c: f64,
    d: f64,
    theta: f64,
    out: *mut *mut HtLift,
) -> HtStatus {
    guard(|| put_lift(out, LiftedIsometry::with_theta(Isometry::new(a, b, c, d)?, theta)?))
}

#[no_mangle]
pub unsafe extern "C" fn ht_lift_free(x: *mut HtLift) {
    if !x.is_null() {
        drop(Box::from_raw(x));
    }
}

#[no_mangle]
pub unsafe extern "C" fn ht_lift_theta(x: *const HtLift, out: *mut f64) -> HtStatus {
    guard(|| put(out, get(x, "x")?.0.theta))
}

/// Writes the matrix row-major into `out[0..4]`.
#[no_mangle]
pub unsafe extern "C" fn ht_lift_matrix(x: *const HtLift, out: *mut f64) -> HtStatus {
    guard(|| {
        let m = get(x, "x")?.0.mat.entries();
        check_out(out)?;
        std::ptr::copy_nonoverlapping(m.as_ptr(), out, 4);
        Ok(())
    })
}

#[no_mangle]
pub unsafe extern "C" fn ht_lift_trace(x: *const HtLift, out: *mut f64) -> HtStatus {
    guard(|| put(out, get(x, "x")?.0.trace()))
}

/// The product `b a`.
#[no_mangle]
pub unsafe extern "C" fn ht_compose(b: *const HtLift, a: *const HtLift, out: *mut *mut HtLift) -> HtStatus {
    guard(|| put_lift(out, compose(&get(b, "b")?.0, &get(a, "a")?.0)))
}

#[no_mangle]
pub unsafe extern "C" fn ht_inverse(a: *const HtLift, out: *mut *mut HtLift) -> HtStatus {
    guard(|| put_lift(out, get(a, "a")?.0.inverse()))
}

/// The commutator `a b a⁻¹ b⁻¹`.
#[no_mangle]
pub unsafe extern "C" fn ht_commutator(a: *const HtLift, b: *const HtLift, out: *mut *mut HtLift) -> HtStatus {
    guard(|| put_lift(out, commutator(&get(a, "a")?.0, &get(b, "b")?.0)))
}

#[no_mangle]
pub unsafe extern "C" fn ht_classify(a: *const HtLift, parabolic_tol: f64, out: *mut HtRegion) -> HtStatus {
    guard(|| {
        let r = classify(&get(a, "a")?.0, parabolic_tol)?;
        let (kind, n, chirality) = match r {
            Region::CentralPower(n) => (HtRegionKind::CentralPower, n, 0),
            Region::Hyp(n) => (HtRegionKind::Hyperbolic, n, 0),
            Region::Par(n, Chirality::Plus) => (HtRegionKind::Parabolic, n, 1),
            Region::Par(n, Chirality::Minus) => (HtRegionKind::Parabolic, n, -1),
            Region::Ell(n) => (HtRegionKind::Elliptic, n, 0),
        };
        put(out, HtRegion { kind, n, chirality })
    })
}

#[no_mangle]
pub unsafe extern "C" fn ht_twist(a: *const HtLift, p: HtPoint, out: *mut f64) -> HtStatus {
    guard(|| put(out, twist(&get(a, "a")?.0, point(p)?)?))
}

/// Twist at the ideal point `b`, or at infinity when `at_infinity` is set.
#[no_mangle]
pub unsafe extern "C" fn ht_twist_ideal(
    a: *const HtLift,
    b: f64,
    at_infinity: bool,
    parabolic_tol: f64,
    out: *mut f64,
) -> HtStatus {
    guard(|| {
        let p = if at_infinity { hyptwist::hypgeom::INFINITY } else { Point::ideal(b) };
        put(out, twist_at_infinity(&get(a, "a")?.0, p, parabolic_tol)?)
    })
}

/// Signed area of the triangle `p q r`, positive when anticlockwise.
#[no_mangle]
pub unsafe extern "C" fn ht_tri_area(p: HtPoint, q: HtPoint, r: HtPoint, out: *mut f64) -> HtStatus {
    guard(|| put(out, tri_area(point(p)?, point(q)?, point(r)?)))
}

#[no_mangle]
pub unsafe extern "C" fn ht_pentagon(a: *const HtLift, b: *const HtLift, p: HtPoint, out: *mut HtPentagon) -> HtStatus {
    guard(|| {
        let r = pentagon(&get(a, "a")?.0, &get(b, "b")?.0, point(p)?)?;
        put(
            out,
            HtPentagon {
                area: r.area,
                twist_of_commutator: r.twist_of_commutator,
                residual: r.residual,
                congruence_residual: r.congruence_residual,
                simple: r.simple,
                degenerate: r.degenerate,
            },
        )
    })
}

/// Parses a representation document from a NUL-terminated UTF-8 string.
#[no_mangle]
pub unsafe extern "C" fn ht_rep_from_json(json: *const c_char, out: *mut *mut HtRep) -> HtStatus {
    guard(|| {
        if json.is_null() {
            return Err(Fail(HtStatus::NullPointer, "json is null".into()));
        }
        let s = CStr::from_ptr(json)
            .to_str()
            .map_err(|e| Fail(HtStatus::InvalidInput, format!("document is not UTF-8: {e}")))?;
        let rep = RepDocument::parse(s)?.load()?;
        check_out(out)?;
        out.write(Box::into_raw(Box::new(HtRep(rep))));
        Ok(())
    })
}

#[no_mangle]
pub unsafe extern "C" fn ht_rep_free(rep: *mut HtRep) {
    if !rep.is_null() {
        drop(Box::from_raw(rep));
    }
}

#[no_mangle]
pub unsafe extern "C" fn ht_euler_number(rep: *const HtRep, out: *mut HtEuler) -> HtStatus {
    guard(|| {
        let e = euler_number(&get(rep, "rep")?.0)?;
        put(
            out,
            HtEuler {
                m: e.m,
                theta: e.theta,
                theta_residual: e.theta_residual,
                chi: e.chi,
                bound_satisfied: e.bound_satisfied,
            },
        )
    })
}

#[no_mangle]
pub unsafe extern "C" fn ht_milnor_wood_sweep(
    genus: usize,
    boundary: usize,
    trials: usize,
    seed: u64,
    out: *mut HtSweep,
) -> HtStatus {
    guard(|| {
        let r = milnor_wood_sweep(genus, boundary, trials, seed)?;
        put(
            out,
            HtSweep {
                chi: r.chi,
                violations: r.violations,
                failures: r.failures,
                max_abs_m: r.max_abs_m,
                distinct_m: r.histogram.len(),
                passed: r.passed(),
            },
        )
    })
}
