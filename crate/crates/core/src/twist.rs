//! The twist of a lifted isometry at a point.
//!
//! `twist` is the closed form obtained by conjugating the point to `i`
//! (where the twist is `2 theta`) and correcting with two triangle areas.
//! `twist_mod2pi` measures the same quantity directly from tangent vectors
//! modulo `2 pi`, and `twist_continuation` unwraps it along a path from `i`;
//! both serve as independent checks of the closed form.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::cover::{classify, LiftedIsometry, Region};
use crate::hypgeom::{
    coincident, distance, point_at_distance, tangent, to_disk, tri_area, wrap_angle, Extended, Isometry, Point, I,
};
use crate::{Error, Result};

/// An ideal point closer than this (chordally, in the disk) to a special
/// point of the lookup table is identified with it.
pub const IDEAL_SNAP: f64 = 1e-12;
/// Between [`IDEAL_SNAP`] and this distance the lookup refuses to decide.
pub const IDEAL_AMBIGUITY: f64 = 1e-9;
/// Largest step allowed between consecutive unwrapped samples.
pub const CONTINUATION_JUMP: f64 = PI / 2.0;
/// Cap on the number of steps tried by [`twist_continuation_auto`].
pub const MAX_CONTINUATION_STEPS: usize = 1 << 16;

/// A twist together with where and of what it was taken.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct TwistValue {
    pub value: f64,
    pub point: Point,
    pub element: LiftedIsometry,
}

/// Twist of `a` at a finite point `p`:
/// `2 theta - Δ[i, g i, g α i] - Δ[i, g α i, g α p]` with `g = to_i(p)`.
pub fn twist(a: &LiftedIsometry, p: Point) -> Result<f64> {
    let z = p.expect_finite("twist point")?;
    if p == I {
        return Ok(2.0 * a.theta);
    }
    Ok(twist_with_conjugator(a, p, &Isometry::to_i(z)))
}

/// The closed form with an arbitrary isometry `g` taking `p` to `i`.
pub fn twist_with_conjugator(a: &LiftedIsometry, p: Point, g: &Isometry) -> f64 {
    let gi = g.apply(I);
    let gai = g.apply(a.mat.apply(I));
    let gap = g.apply(a.mat.apply(p));
    2.0 * a.theta - tri_area(I, gi, gai) - tri_area(I, gai, gap)
}

/// Twist at a finite or ideal point.
pub fn twist_at(a: &LiftedIsometry, p: Point, parabolic_tol: f64) -> Result<f64> {
    match p {
        Point::Finite(_) => twist(a, p),
        Point::Ideal(_) => twist_at_infinity(a, p, parabolic_tol),
    }
}

/// Angle of the tangent at `v` towards `w`, as an argument.
fn tangent_arg(v: Complex64, w: Point) -> f64 {
    tangent(v, w).arg()
}

/// Twist of the plane isometry `g` at `p` modulo `2 pi`, from the derivative
/// of `g` and parallel transport along the geodesic `p → g p`.
pub fn twist_mod2pi(g: &Isometry, p: Point) -> Result<f64> {
    let z = p.expect_finite("twist point")?;
    let gp = g.apply(p);
    if coincident(p, gp) {
        return Ok(wrap_angle(g.rotation_at(z)));
    }
    let gz = gp.expect_finite("image")?;
    let v = tangent_arg(z, gp);
    // forward tangent of the same geodesic at g p
    let w = tangent_arg(gz, p) + PI;
    let u = v + g.rotation_at(z);
    Ok(wrap_angle(u - w))
}

/// Unwraps [`twist_mod2pi`] along the geodesic from `i` to `p`, sampled at
/// `steps + 1` points and anchored at `2 theta` at `i`.
pub fn twist_continuation(a: &LiftedIsometry, p: Point, steps: usize) -> Result<f64> {
    p.expect_finite("twist point")?;
    if steps < 2 {
        return Err(Error::InvalidArgument(format!("need at least 2 steps, got {steps}")));
    }
    let mut value = 2.0 * a.theta;
    if coincident(I, p) {
        return Ok(value);
    }
    let d = distance(I, p)?;
    for k in 1..=steps {
        let q = if k == steps { p } else { point_at_distance(I, p, d * k as f64 / steps as f64)? };
        let step = wrap_angle(twist_mod2pi(&a.mat, q)? - value);
        if step.abs() >= CONTINUATION_JUMP {
            return Err(Error::Continuation(format!("jump of {step} between samples {} and {k} of {steps}", k - 1)));
        }
        value += step;
    }
    Ok(value)
}

/// [`twist_continuation`], doubling the number of steps from `steps` until
/// no jump is detected or [`MAX_CONTINUATION_STEPS`] is exceeded.
pub fn twist_continuation_auto(a: &LiftedIsometry, p: Point, steps: usize) -> Result<f64> {
    let mut n = steps.max(2);
    loop {
        match twist_continuation(a, p, n) {
            Err(Error::Continuation(_)) if n < MAX_CONTINUATION_STEPS => n *= 2,
            r => return r,
        }
    }
}

/// Chordal distance between ideal points in the disk.
fn ideal_gap(p: Extended, q: Extended) -> f64 {
    (to_disk(Point::Ideal(p)) - to_disk(Point::Ideal(q))).norm()
}

/// Whether `p` is the special point `q`, with an error in the band where
/// rounding could decide either way.
fn is_special(p: Extended, q: Extended) -> Result<bool> {
    let gap = ideal_gap(p, q);
    if gap < IDEAL_SNAP {
        Ok(true)
    } else if gap < IDEAL_AMBIGUITY {
        Err(Error::IdealAmbiguous(format!("{p} is within {gap:e} of the fixed point {q}")))
    } else {
        Ok(false)
    }
}

/// Twist at an ideal point, an integer multiple of `pi`, read off the region
/// of `a`.
///
/// For `Hyp(n)` the two open arcs of the circle cut by the axis get
/// `(2n ± 1) pi`; the sign for the arc containing `p` is that of
/// `twist(a, q) - 2 n pi` at a finite point `q` on that side of the axis.
pub fn twist_at_infinity(a: &LiftedIsometry, p: Point, parabolic_tol: f64) -> Result<f64> {
    let b = p.expect_ideal("twist point")?;
    let region = classify(a, parabolic_tol)?;
    let two = |n: i64| 2.0 * n as f64 * PI;
    Ok(match region {
        Region::CentralPower(n) => two(n),
        Region::Ell(n) if n > 0 => two(n) - PI,
        Region::Ell(n) => two(n) + PI,
        Region::Par(n, ch) => {
            let fix = a.mat.fixed_points(parabolic_tol);
            let f = fix
                .first()
                .ok_or_else(|| Error::Degenerate("parabolic without fixed point".into()))?
                .expect_ideal("parabolic fixed point")?;
            if is_special(b, f)? {
                two(n)
            } else {
                two(n) + ch.sign() as f64 * PI
            }
        }
        Region::Hyp(n) => {
            let axis = a.mat.axis(parabolic_tol)?;
            if is_special(b, axis.start)? || is_special(b, axis.end)? {
                return Ok(two(n));
            }
            let q = point_at_distance(axis.apex(), p, 1.0)?;
            let side = twist(a, q)? - two(n);
            two(n) + side.signum() * PI
        }
    })
}

/// `Twist(ba, p) - Twist(a, p) - Twist(b, α p) + Δ[p, α p, β α p]`.
pub fn check_composition(a: &LiftedIsometry, b: &LiftedIsometry, p: Point, parabolic_tol: f64) -> Result<f64> {
    let ap = a.mat.apply(p);
    let bap = b.mat.apply(ap);
    let ba = b.compose(a);
    Ok(twist_at(&ba, p, parabolic_tol)? - twist_at(a, p, parabolic_tol)? - twist_at(b, ap, parabolic_tol)?
        + tri_area(p, ap, bap))
}

/// `Twist(b a, p) - Twist(b, p) - Twist(a, p) + Δ[p, β p, β α p]`.
pub fn check_addition(a: &LiftedIsometry, b: &LiftedIsometry, p: Point) -> Result<f64> {
    let bp = b.mat.apply(p);
    let bap = b.mat.apply(a.mat.apply(p));
    Ok(twist(&b.compose(a), p)? - twist(b, p)? - twist(a, p)? + tri_area(p, bp, bap))
}

/// `Twist(a, p) - Twist(b a b⁻¹, β p)`.
pub fn check_conjugation(a: &LiftedIsometry, b: &LiftedIsometry, p: Point) -> Result<f64> {
    let c = b.compose(&a.compose(&b.inverse()));
    Ok(twist(a, p)? - twist(&c, b.mat.apply(p))?)
}

/// `Twist(a, p) + Twist(a⁻¹, p)`.
pub fn check_inverse(a: &LiftedIsometry, p: Point) -> Result<f64> {
    Ok(twist(a, p)? + twist(&a.inverse(), p)?)
}

/// `Twist(a, p) - Twist(a, αⁿ p)`.
pub fn check_translation_invariance(a: &LiftedIsometry, p: Point, n: i64) -> Result<f64> {
    if n == 0 {
        return Ok(0.0);
    }
    let step = if n > 0 { a.mat } else { a.mat.inverse() };
    let mut q = p;
    for _ in 0..n.unsigned_abs() {
        q = step.apply(q);
    }
    Ok(twist(a, p)? - twist(a, q)?)
}

/// Whether a finite-point twist lies in the open range of its region,
/// with slack `tol`; central powers must hit their value within `tol`.
pub fn within_bounds(region: Region, value: f64, tol: f64) -> bool {
    let (lo, hi) = region.twist_range();
    match region {
        Region::CentralPower(_) => (value - lo).abs() <= tol,
        _ => value > lo - tol && value < hi + tol,
    }
}
