//! The universal covering group of `PSL(2,R)`.
//!
//! An element is stored as a signed unit-determinant matrix together with
//! Milnor's angle `theta`: the continuous lift of the rotation angle of the
//! orthogonal polar factor. The pair determines the element, since `theta`
//! fixes the sheet and the matrix fixes the point on it. The group law is the
//! area formula `Θ(βα) = Θ(β) + Θ(α) - Δ[i, βi, βαi] / 2`.

use std::f64::consts::{FRAC_PI_2, PI};
use std::fmt;
use std::ops::Mul;

use serde::{Deserialize, Serialize};

use crate::hypgeom::{tri_area, wrap_angle, Isometry, I};
use crate::{Error, Result};

/// `||trace| - 2|` below this is treated as parabolic.
pub const PARABOLIC_TOL: f64 = 1e-9;
/// Distance of `theta` from a region boundary below which classification
/// refuses to decide.
pub const BOUNDARY_TOL: f64 = 1e-9;
/// Accepted disagreement between `theta` and the polar angle of the matrix.
pub const LIFT_TOL: f64 = 1e-9;

/// Rotation angle of the orthogonal factor `R` in `m = R S`, with
/// `R = [[cos t, sin t], [-sin t, cos t]]`, the rotation by `2t`
/// anticlockwise about `i`. Lies in `(-pi, pi]`.
///
/// For `2×2` matrices `m + det(m) m^{-T}` is a positive multiple of `R`, and
/// equals `[[a+d, b-c], [c-b, a+d]]`.
pub fn polar_theta(m: &Isometry) -> f64 {
    let t = (m.b - m.c).atan2(m.a + m.d);
    if t == -PI {
        PI
    } else {
        t
    }
}

/// Whether `wrap(theta - polar_theta(m))` is within [`LIFT_TOL`] of zero,
/// allowing for the rounding of a large `theta`.
fn consistent(m: &Isometry, theta: f64) -> bool {
    wrap_angle(theta - polar_theta(m)).abs() <= LIFT_TOL + 4.0 * f64::EPSILON * theta.abs()
}

/// An element of the universal cover: a signed matrix and its angle.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LiftedIsometry {
    pub mat: Isometry,
    pub theta: f64,
}

impl LiftedIsometry {
    pub const IDENTITY: LiftedIsometry = LiftedIsometry { mat: Isometry::IDENTITY, theta: 0.0 };

    /// Checks that `theta` is a lift of the polar angle of the signed matrix.
    pub fn new(mat: Isometry, theta: f64) -> Result<LiftedIsometry> {
        if !theta.is_finite() || !consistent(&mat, theta) {
            return Err(Error::InconsistentLift { theta, polar: polar_theta(&mat) });
        }
        Ok(LiftedIsometry { mat, theta })
    }

    /// Like [`LiftedIsometry::new`] but reads the sign of the matrix off
    /// `theta`, so any representative of the plane isometry is accepted.
    pub fn with_theta(mat: Isometry, theta: f64) -> Result<LiftedIsometry> {
        LiftedIsometry::new(mat, theta).or_else(|_| LiftedIsometry::new(-mat, theta))
    }

    pub fn new_unchecked(mat: Isometry, theta: f64) -> LiftedIsometry {
        LiftedIsometry { mat, theta }
    }

    /// The lift with `theta` in `(n pi - pi/2, n pi + pi/2]`, the sign of the
    /// matrix adjusted to match. `lift(m, 0)` is the base lift.
    pub fn lift(mat: Isometry, n_hint: i64) -> LiftedIsometry {
        let p = polar_theta(&mat);
        let x = p / PI - n_hint as f64;
        let k = (-x - 0.5).floor() as i64 + 1;
        let mat = if k.rem_euclid(2) == 1 { -mat } else { mat };
        LiftedIsometry { mat, theta: p + k as f64 * PI }
    }

    /// `z^n`: the `n`-th power of one full anticlockwise turn.
    pub fn z_power(n: i64) -> LiftedIsometry {
        let s = if n.rem_euclid(2) == 0 { 1.0 } else { -1.0 };
        LiftedIsometry { mat: Isometry { a: s, b: 0.0, c: 0.0, d: s }, theta: n as f64 * PI }
    }

    pub fn z() -> LiftedIsometry {
        LiftedIsometry::z_power(1)
    }

    /// The element `E(t)`: rotation by `2t` anticlockwise about `i`, reached
    /// by the path `s ↦ E(st)`.
    pub fn rotation(t: f64) -> LiftedIsometry {
        LiftedIsometry { mat: Isometry::rotation_about_i(t), theta: t }
    }

    /// `z^k · self`.
    pub fn shift(&self, k: i64) -> LiftedIsometry {
        let mat = if k.rem_euclid(2) == 1 { -self.mat } else { self.mat };
        LiftedIsometry { mat, theta: self.theta + k as f64 * PI }
    }

    /// `self · a` (apply `a` first).
    pub fn compose(&self, a: &LiftedIsometry) -> LiftedIsometry {
        compose(self, a)
    }

    pub fn inverse(&self) -> LiftedIsometry {
        LiftedIsometry { mat: self.mat.inverse(), theta: -self.theta }
    }

    pub fn trace(&self) -> f64 {
        self.mat.trace()
    }

    pub fn classify(&self, parabolic_tol: f64) -> Result<Region> {
        classify(self, parabolic_tol)
    }

    pub fn central_power(&self) -> Result<i64> {
        central_power(self)
    }
}

impl Default for LiftedIsometry {
    fn default() -> Self {
        LiftedIsometry::IDENTITY
    }
}

impl Mul for LiftedIsometry {
    type Output = LiftedIsometry;

    fn mul(self, rhs: LiftedIsometry) -> LiftedIsometry {
        compose(&self, &rhs)
    }
}

impl fmt::Display for LiftedIsometry {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, theta = {})", self.mat, self.theta)
    }
}

/// The product `b a`, with `theta` from the area formula.
pub fn compose(b: &LiftedIsometry, a: &LiftedIsometry) -> LiftedIsometry {
    let bi = b.mat.apply(I);
    let bai = b.mat.apply(a.mat.apply(I));
    LiftedIsometry { mat: b.mat * a.mat, theta: b.theta + a.theta - 0.5 * tri_area(I, bi, bai) }
}

pub fn inverse(a: &LiftedIsometry) -> LiftedIsometry {
    a.inverse()
}

/// Product of a sequence, leftmost factor outermost: `xs[0] xs[1] ... xs[k]`.
pub fn product<'a>(xs: impl IntoIterator<Item = &'a LiftedIsometry>) -> LiftedIsometry {
    xs.into_iter().fold(LiftedIsometry::IDENTITY, |acc, x| compose(&acc, x))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Chirality {
    /// Anticlockwise about the fixed point at infinity.
    Plus,
    Minus,
}

impl Chirality {
    pub fn sign(self) -> i64 {
        match self {
            Chirality::Plus => 1,
            Chirality::Minus => -1,
        }
    }
}

/// The connected strata of the universal cover.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Region {
    CentralPower(i64),
    Hyp(i64),
    Par(i64, Chirality),
    /// Never `Ell(0)`.
    Ell(i64),
}

impl Region {
    /// Open interval of `theta` values on the region (a single point for
    /// central powers).
    pub fn theta_range(&self) -> (f64, f64) {
        let pi = PI;
        match *self {
            Region::CentralPower(n) => (n as f64 * pi, n as f64 * pi),
            Region::Hyp(n) => ((n as f64 - 0.5) * pi, (n as f64 + 0.5) * pi),
            Region::Par(n, Chirality::Plus) => (n as f64 * pi, (n as f64 + 0.5) * pi),
            Region::Par(n, Chirality::Minus) => ((n as f64 - 0.5) * pi, n as f64 * pi),
            Region::Ell(n) if n > 0 => ((n - 1) as f64 * pi, n as f64 * pi),
            Region::Ell(n) => (n as f64 * pi, (n + 1) as f64 * pi),
        }
    }

    /// Open interval of twist values at finite points.
    pub fn twist_range(&self) -> (f64, f64) {
        let pi = PI;
        match *self {
            Region::CentralPower(n) => (2.0 * n as f64 * pi, 2.0 * n as f64 * pi),
            Region::Hyp(n) => ((2 * n - 1) as f64 * pi, (2 * n + 1) as f64 * pi),
            Region::Par(n, Chirality::Plus) => (2.0 * n as f64 * pi, (2 * n + 1) as f64 * pi),
            Region::Par(n, Chirality::Minus) => ((2 * n - 1) as f64 * pi, 2.0 * n as f64 * pi),
            Region::Ell(n) if n > 0 => ((2 * n - 2) as f64 * pi, 2.0 * n as f64 * pi),
            Region::Ell(n) => (2.0 * n as f64 * pi, (2 * n + 2) as f64 * pi),
        }
    }

    /// Sign of the trace on the region: `(-1)^n` for `z^n`, `Hyp_n`, `Par_n`.
    pub fn trace_sign(&self) -> Option<i64> {
        let parity = |n: i64| if n.rem_euclid(2) == 0 { 1 } else { -1 };
        match *self {
            Region::CentralPower(n) | Region::Hyp(n) | Region::Par(n, _) => Some(parity(n)),
            Region::Ell(_) => None,
        }
    }
}

impl fmt::Display for Region {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Region::CentralPower(n) => write!(f, "CentralPower({n})"),
            Region::Hyp(n) => write!(f, "Hyp({n})"),
            Region::Par(n, Chirality::Plus) => write!(f, "Par({n},+)"),
            Region::Par(n, Chirality::Minus) => write!(f, "Par({n},-)"),
            Region::Ell(n) => write!(f, "Ell({n})"),
        }
    }
}

fn near_multiple(x: f64, tol: f64) -> Option<f64> {
    let r = x.round();
    ((x - r).abs() * PI < tol).then_some(r)
}

/// Region containing `a`.
///
/// Errors with [`Error::Ambiguous`] when `theta` is within
/// [`BOUNDARY_TOL`] of a region boundary that the trace does not explain,
/// and with [`Error::InconsistentLift`] when the sign of the matrix does not
/// match `theta`.
pub fn classify(a: &LiftedIsometry, parabolic_tol: f64) -> Result<Region> {
    let t = a.trace();
    let th = a.theta;
    let x = th / PI;
    let parity = |n: f64| if (n as i64).rem_euclid(2) == 0 { 1.0 } else { -1.0 };
    if let Some(s) = a.mat.central_sign() {
        let n = x.round();
        if (th - n * PI).abs() > 1e-6 || parity(n) != s as f64 {
            return Err(Error::InconsistentLift { theta: th, polar: polar_theta(&a.mat) });
        }
        return Ok(Region::CentralPower(n as i64));
    }
    if (t.abs() - 2.0).abs() < parabolic_tol {
        let n = x.round();
        let off = th - n * PI;
        if off.abs() < BOUNDARY_TOL {
            return Err(Error::Ambiguous(format!("parabolic with theta {th} within {BOUNDARY_TOL} of {n} pi")));
        }
        if parity(n) * t < 0.0 {
            return Err(Error::InconsistentLift { theta: th, polar: polar_theta(&a.mat) });
        }
        let ch = if off > 0.0 { Chirality::Plus } else { Chirality::Minus };
        return Ok(Region::Par(n as i64, ch));
    }
    if t.abs() > 2.0 {
        if near_multiple(x - 0.5, BOUNDARY_TOL).is_some() {
            return Err(Error::Ambiguous(format!("hyperbolic with theta {th} on a half-integer multiple of pi")));
        }
        let n = x.round();
        if parity(n) * t <= 2.0 {
            return Err(Error::InconsistentLift { theta: th, polar: polar_theta(&a.mat) });
        }
        return Ok(Region::Hyp(n as i64));
    }
    if near_multiple(x, BOUNDARY_TOL).is_some() {
        return Err(Error::Ambiguous(format!("elliptic with theta {th} on a multiple of pi")));
    }
    Ok(Region::Ell(if th > 0.0 { x.ceil() as i64 } else { x.floor() as i64 }))
}

/// The `n` with `a = z^n`.
pub fn central_power(a: &LiftedIsometry) -> Result<i64> {
    let Some(s) = a.mat.central_sign() else {
        return Err(Error::NotCentral(format!("{} is not ±identity", a.mat)));
    };
    let n = (a.theta / PI).round();
    if (a.theta - n * PI).abs() >= 1e-6 {
        return Err(Error::NotCentral(format!("theta {} is not a multiple of pi", a.theta)));
    }
    let expect = if (n as i64).rem_euclid(2) == 0 { 1 } else { -1 };
    if s != expect {
        return Err(Error::InconsistentLift { theta: a.theta, polar: polar_theta(&a.mat) });
    }
    Ok(n as i64)
}

/// `|Θ(ba) - Θ(b) - Θ(a)|`, which stays below `pi/2`.
pub fn quasimorphism_defect(b: &LiftedIsometry, a: &LiftedIsometry) -> f64 {
    (compose(b, a).theta - b.theta - a.theta).abs()
}

/// Upper bound on [`quasimorphism_defect`].
pub const QUASIMORPHISM_BOUND: f64 = FRAC_PI_2;
