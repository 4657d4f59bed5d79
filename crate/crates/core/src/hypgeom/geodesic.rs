use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::point::{Extended, Point};
use crate::{Error, Result};

/// Hyperbolic distance below which two finite points are the same point.
pub const COINCIDENT_DISTANCE: f64 = 1e-9;

/// An oriented complete geodesic, given by its ideal endpoints.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Geodesic {
    pub start: Extended,
    pub end: Extended,
}

/// Euclidean shape of a geodesic in the half-plane.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum GeodesicShape {
    Vertical { x: f64 },
    Semicircle { center: f64, radius: f64 },
}

impl Geodesic {
    pub fn new(start: Extended, end: Extended) -> Result<Geodesic> {
        if start == end {
            return Err(Error::Coincident(format!("geodesic endpoints both {start}")));
        }
        Ok(Geodesic { start, end })
    }

    pub fn reversed(&self) -> Geodesic {
        Geodesic { start: self.end, end: self.start }
    }

    pub fn shape(&self) -> GeodesicShape {
        match (self.start, self.end) {
            (Extended::Infinity, Extended::Real(x)) | (Extended::Real(x), Extended::Infinity) => {
                GeodesicShape::Vertical { x }
            }
            (Extended::Real(u), Extended::Real(v)) => {
                GeodesicShape::Semicircle { center: 0.5 * (u + v), radius: 0.5 * (u - v).abs() }
            }
            (Extended::Infinity, Extended::Infinity) => unreachable!("endpoints are distinct"),
        }
    }

    /// Whether a finite point lies on the geodesic, up to a relative
    /// Euclidean tolerance.
    pub fn contains(&self, p: Point, tol: f64) -> bool {
        let Point::Finite(z) = p else {
            return match p {
                Point::Ideal(b) => b == self.start || b == self.end,
                Point::Finite(_) => unreachable!(),
            };
        };
        match self.shape() {
            GeodesicShape::Vertical { x } => (z.re - x).abs() <= tol * z.im.max(1.0),
            GeodesicShape::Semicircle { center, radius } => {
                let r = ((z.re - center).powi(2) + z.im * z.im).sqrt();
                (r - radius).abs() <= tol * radius.max(1.0)
            }
        }
    }

    /// A finite point of the geodesic: the top of a semicircle, or height 1
    /// on a vertical line.
    pub fn apex(&self) -> Point {
        match self.shape() {
            GeodesicShape::Vertical { x } => Point::Finite(Complex64::new(x, 1.0)),
            GeodesicShape::Semicircle { center, radius } => Point::Finite(Complex64::new(center, radius)),
        }
    }

    /// For real endpoints `a, b` the geodesic passes through `i` iff
    /// `ab = -1`; this evaluates `center^2 + 1 = radius^2` directly.
    pub fn passes_through_i(&self) -> bool {
        match self.shape() {
            GeodesicShape::Vertical { x } => x == 0.0,
            GeodesicShape::Semicircle { center, radius } => center * center + 1.0 == radius * radius,
        }
    }
}

/// Whether two points are the same point of the closed plane: finite points
/// within [`COINCIDENT_DISTANCE`], ideal points equal up to rounding.
pub fn coincident(p: Point, q: Point) -> bool {
    match (p, q) {
        (Point::Finite(a), Point::Finite(b)) => finite_distance(a, b) < COINCIDENT_DISTANCE,
        (Point::Ideal(Extended::Infinity), Point::Ideal(Extended::Infinity)) => true,
        (Point::Ideal(Extended::Real(a)), Point::Ideal(Extended::Real(b))) => {
            (a - b).abs() <= 1e-12 * (1.0 + a.abs().max(b.abs()))
        }
        _ => false,
    }
}

pub(crate) fn finite_distance(p: Complex64, q: Complex64) -> f64 {
    2.0 * ((p - q).norm() / (2.0 * (p.im * q.im).sqrt())).asinh()
}

/// Hyperbolic distance between finite points, `arcosh(1 + |p-q|^2 / (2 Im p Im q))`.
pub fn distance(p: Point, q: Point) -> Result<f64> {
    let a = p.expect_finite("p")?;
    let b = q.expect_finite("q")?;
    Ok(finite_distance(a, b))
}

/// Unit tangent at the finite point `v` of the geodesic towards `w`, as a
/// unit complex number.
///
/// Maps `v` to `i` by an affine map (no rotation), then reads off the
/// direction of the image of `w` in the disk centred at `i`.
pub(crate) fn tangent(v: Complex64, w: Point) -> Complex64 {
    let om = match w {
        Point::Ideal(Extended::Infinity) => return Complex64::i(),
        Point::Ideal(Extended::Real(b)) => Complex64::new((b - v.re) / v.im, 0.0),
        Point::Finite(z) => Complex64::new((z.re - v.re) / v.im, z.im / v.im),
    };
    let dir = (Complex64::i() * om + 1.0) / (om + Complex64::i());
    dir / dir.norm()
}

/// Ideal endpoint reached from `v` in the unit direction `dir`.
fn endpoint_in_direction(v: Complex64, dir: Complex64) -> Extended {
    let (u, s) = (dir.re, dir.im);
    // x + y * tan(theta/2 + pi/4), in a form without cancellation
    if s >= 0.0 {
        if u == 0.0 {
            Extended::Infinity
        } else {
            Extended::Real(v.re + v.im * (1.0 + s) / u)
        }
    } else {
        Extended::Real(v.re + v.im * u / (1.0 - s))
    }
}

/// The geodesic through `p` and `q`, oriented from `p` to `q`.
pub fn geodesic_through(p: Point, q: Point) -> Result<Geodesic> {
    if coincident(p, q) {
        return Err(Error::Coincident(format!("{p} and {q}")));
    }
    match (p, q) {
        (Point::Ideal(a), Point::Ideal(b)) => Geodesic::new(a, b),
        (Point::Finite(v), _) => {
            let dir = tangent(v, q);
            Geodesic::new(endpoint_in_direction(v, -dir), endpoint_in_direction(v, dir))
        }
        (Point::Ideal(_), Point::Finite(_)) => Ok(geodesic_through(q, p)?.reversed()),
    }
}

/// The point at distance `s` from the finite point `v` along the geodesic
/// towards `toward`.
pub fn point_at_distance(v: Point, toward: Point, s: f64) -> Result<Point> {
    let z = v.expect_finite("start")?;
    if coincident(v, toward) {
        return Err(Error::Coincident(format!("no direction from {v} to itself")));
    }
    // move v to i without rotating, walk out in the disk centred at i, move back
    let dir = tangent(z, toward);
    let w = dir * Complex64::new(0.0, -(0.5 * s).tanh());
    let zi = Complex64::i() * (1.0 + w) / (1.0 - w);
    let zi = Complex64::new(zi.re, zi.im.max(f64::MIN_POSITIVE));
    Ok(Point::Finite(Complex64::new(z.re + z.im * zi.re, z.im * zi.im)))
}

/// Anticlockwise angle at the finite point `v` from the geodesic towards `a`
/// to the geodesic towards `b`, in `(-pi, pi]`.
pub fn angle_between(v: Point, a: Point, b: Point) -> Result<f64> {
    let z = v.expect_finite("vertex")?;
    if coincident(v, a) || coincident(v, b) {
        return Err(Error::Coincident(format!("angle at {v} needs distinct rays")));
    }
    Ok(wrap_angle((tangent(z, b) / tangent(z, a)).arg()))
}

/// Reduces an angle to `(-pi, pi]`.
pub fn wrap_angle(t: f64) -> f64 {
    use std::f64::consts::{PI, TAU};
    let mut r = t.rem_euclid(TAU);
    if r > PI {
        r -= TAU;
    }
    r
}
