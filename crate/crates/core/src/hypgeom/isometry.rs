use std::fmt;
use std::ops::{Mul, Neg};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::geodesic::{Geodesic, GeodesicShape};
use super::point::{Extended, Point};
use crate::{Error, Result};

/// Accepted deviation of the determinant from 1 on construction.
pub const DET_TOL: f64 = 1e-9;
/// Entrywise tolerance for recognising `±identity`.
pub const CENTRAL_TOL: f64 = 1e-9;

/// A unit-determinant real 2×2 matrix acting by `z ↦ (az+b)/(cz+d)`.
///
/// The sign is kept: `m` and `-m` act identically on the plane but are
/// different elements of `SL(2,R)`, which matters for traces and lifts.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Isometry {
    pub a: f64,
    pub b: f64,
    pub c: f64,
    pub d: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum IsometryKind {
    Identity,
    Elliptic,
    Parabolic,
    Hyperbolic,
}

impl Isometry {
    pub const IDENTITY: Isometry = Isometry { a: 1.0, b: 0.0, c: 0.0, d: 1.0 };

    /// Builds a matrix whose determinant is already 1 within [`DET_TOL`],
    /// then rescales it so the determinant is 1 to rounding.
    pub fn new(a: f64, b: f64, c: f64, d: f64) -> Result<Isometry> {
        let det = a * d - b * c;
        if !det.is_finite() || (det - 1.0).abs() > DET_TOL {
            return Err(Error::Determinant { det, tol: DET_TOL });
        }
        Isometry::normalized(a, b, c, d)
    }

    /// Rescales any positive-determinant matrix to determinant 1.
    pub fn normalized(a: f64, b: f64, c: f64, d: f64) -> Result<Isometry> {
        if ![a, b, c, d].iter().all(|v| v.is_finite()) {
            return Err(Error::InvalidMatrix(format!("non-finite entry in [{a}, {b}, {c}, {d}]")));
        }
        let det = a * d - b * c;
        if det <= 0.0 {
            return Err(Error::InvalidMatrix(format!(
                "determinant {det} is not positive; not an orientation-preserving isometry"
            )));
        }
        // already unimodular up to rounding: rescaling would only add noise
        if (det - 1.0).abs() <= 4.0 * f64::EPSILON * (a * a + b * b + c * c + d * d) {
            return Ok(Isometry { a, b, c, d });
        }
        let s = det.sqrt();
        Ok(Isometry { a: a / s, b: b / s, c: c / s, d: d / s })
    }

    /// Parses four comma-separated entries in row-major order and normalizes.
    pub fn parse(s: &str) -> Result<Isometry> {
        let v: Vec<f64> = s
            .split(',')
            .map(|t| t.trim().parse::<f64>())
            .collect::<std::result::Result<_, _>>()
            .map_err(|e| Error::InvalidMatrix(format!("{s:?}: {e}")))?;
        if v.len() != 4 {
            return Err(Error::InvalidMatrix(format!("expected 4 entries, got {}", v.len())));
        }
        Isometry::normalized(v[0], v[1], v[2], v[3])
    }

    pub fn entries(&self) -> [f64; 4] {
        [self.a, self.b, self.c, self.d]
    }

    pub fn rows(&self) -> [[f64; 2]; 2] {
        [[self.a, self.b], [self.c, self.d]]
    }

    pub fn det(&self) -> f64 {
        self.a * self.d - self.b * self.c
    }

    pub fn trace(&self) -> f64 {
        self.a + self.d
    }

    /// Inverse of the signed matrix (determinant 1, so the adjugate).
    pub fn inverse(&self) -> Isometry {
        Isometry { a: self.d, b: -self.b, c: -self.c, d: self.a }
    }

    /// `[[cos t, sin t], [-sin t, cos t]]`, the anticlockwise rotation by
    /// `2t` about `i`.
    pub fn rotation_about_i(t: f64) -> Isometry {
        let (s, c) = t.sin_cos();
        Isometry { a: c, b: s, c: -s, d: c }
    }

    /// The isometry `[[1, -x], [0, y]] / sqrt(y)` taking `x + iy` to `i`.
    pub fn to_i(p: Complex64) -> Isometry {
        let s = p.im.sqrt();
        Isometry { a: 1.0 / s, b: -p.re / s, c: 0.0, d: s }
    }

    /// `±identity` within [`CENTRAL_TOL`]; returns the sign.
    pub fn central_sign(&self) -> Option<i32> {
        self.central_sign_tol(CENTRAL_TOL)
    }

    pub fn central_sign_tol(&self, tol: f64) -> Option<i32> {
        if self.b.abs() > tol || self.c.abs() > tol {
            return None;
        }
        if (self.a - 1.0).abs() <= tol && (self.d - 1.0).abs() <= tol {
            Some(1)
        } else if (self.a + 1.0).abs() <= tol && (self.d + 1.0).abs() <= tol {
            Some(-1)
        } else {
            None
        }
    }

    pub fn kind(&self, parabolic_tol: f64) -> IsometryKind {
        if self.central_sign().is_some() {
            return IsometryKind::Identity;
        }
        let t = self.trace().abs();
        if (t - 2.0).abs() < parabolic_tol {
            IsometryKind::Parabolic
        } else if t > 2.0 {
            IsometryKind::Hyperbolic
        } else {
            IsometryKind::Elliptic
        }
    }

    /// `c z + d`; the derivative of the action at `z` is its inverse square.
    pub fn denominator(&self, z: Complex64) -> Complex64 {
        Complex64::new(self.c * z.re + self.d, self.c * z.im)
    }

    /// Angle by which the derivative at the finite point `z` rotates tangent
    /// vectors.
    pub fn rotation_at(&self, z: Complex64) -> f64 {
        -2.0 * self.denominator(z).arg()
    }

    pub fn apply_complex(&self, z: Complex64) -> Complex64 {
        let den = self.denominator(z);
        let n2 = den.norm_sqr();
        let num = Complex64::new(self.a * z.re + self.b, self.a * z.im);
        let w = num * den.conj();
        // Im(g z) = Im z / |cz + d|^2 keeps the result strictly positive.
        Complex64::new(w.re / n2, z.im / n2)
    }

    pub fn apply(&self, p: Point) -> Point {
        match p {
            Point::Finite(z) => Point::Finite(self.apply_complex(z)),
            Point::Ideal(Extended::Infinity) => {
                if self.c == 0.0 {
                    Point::Ideal(Extended::Infinity)
                } else {
                    Point::ideal(self.a / self.c)
                }
            }
            Point::Ideal(Extended::Real(x)) => {
                let den = self.c * x + self.d;
                if den == 0.0 {
                    Point::Ideal(Extended::Infinity)
                } else {
                    Point::ideal((self.a * x + self.b) / den)
                }
            }
        }
    }

    /// Fixed points: two ideal points (repulsive first) for a hyperbolic,
    /// one ideal point for a parabolic, one finite point for an elliptic and
    /// none for `±identity`.
    pub fn fixed_points(&self, parabolic_tol: f64) -> Vec<Point> {
        let Isometry { a, b, c, d } = *self;
        match self.kind(parabolic_tol) {
            IsometryKind::Identity => Vec::new(),
            IsometryKind::Elliptic => {
                let disc = (4.0 - self.trace().powi(2)).max(0.0).sqrt();
                let z = Complex64::new((a - d) / (2.0 * c), disc / (2.0 * c.abs()));
                vec![Point::Finite(z)]
            }
            IsometryKind::Parabolic => {
                let scale = a.abs().max(b.abs()).max(c.abs()).max(d.abs());
                if c.abs() <= 1e-14 * scale {
                    vec![Point::Ideal(Extended::Infinity)]
                } else {
                    vec![Point::ideal((a - d) / (2.0 * c))]
                }
            }
            IsometryKind::Hyperbolic => {
                let scale = a.abs().max(b.abs()).max(c.abs()).max(d.abs());
                let (p, q) = if c.abs() <= 1e-14 * scale {
                    (Point::Ideal(Extended::Infinity), Point::ideal(b / (d - a)))
                } else {
                    // c z^2 + (d - a) z - b = 0, solved without cancellation
                    let bb = d - a;
                    let s = (self.trace().powi(2) - 4.0).sqrt();
                    let q = -0.5 * (bb + bb.signum() * s);
                    let q = if q == 0.0 { -0.5 * s } else { q };
                    (Point::ideal(q / c), Point::ideal(-b / q))
                };
                if self.is_attractive(p) {
                    vec![q, p]
                } else {
                    vec![p, q]
                }
            }
        }
    }

    /// Whether the ideal fixed point `p` is attracting, i.e. its eigenvalue
    /// has modulus greater than one.
    fn is_attractive(&self, p: Point) -> bool {
        match p {
            Point::Ideal(Extended::Infinity) => self.a.abs() > 1.0,
            Point::Ideal(Extended::Real(x)) => (self.c * x + self.d).abs() > 1.0,
            Point::Finite(_) => false,
        }
    }

    /// The axis of a hyperbolic isometry, oriented from the repulsive to the
    /// attractive fixed point.
    pub fn axis(&self, parabolic_tol: f64) -> Result<Geodesic> {
        if self.kind(parabolic_tol) != IsometryKind::Hyperbolic {
            return Err(Error::NotHyperbolic { trace: self.trace() });
        }
        let fp = self.fixed_points(parabolic_tol);
        let start = fp[0].expect_ideal("fixed point")?;
        let end = fp[1].expect_ideal("fixed point")?;
        Geodesic::new(start, end)
    }

    /// `2 arcosh(|tr| / 2)`.
    pub fn translation_length(&self, parabolic_tol: f64) -> Result<f64> {
        if self.kind(parabolic_tol) != IsometryKind::Hyperbolic {
            return Err(Error::NotHyperbolic { trace: self.trace() });
        }
        Ok(2.0 * (self.trace().abs() / 2.0).acosh())
    }

    /// Perpendicular distance from a finite point to the axis.
    pub fn dist_to_axis(&self, p: Point, parabolic_tol: f64) -> Result<f64> {
        let z = p.expect_finite("p")?;
        let axis = self.axis(parabolic_tol)?;
        Ok(match axis.shape() {
            GeodesicShape::Vertical { x } => ((z.re - x).abs() / z.im).asinh(),
            GeodesicShape::Semicircle { center, radius } => {
                let d2 = (z.re - center).powi(2) + z.im * z.im;
                ((d2 - radius * radius).abs() / (2.0 * radius * z.im)).asinh()
            }
        })
    }
}

impl Mul for Isometry {
    type Output = Isometry;

    fn mul(self, o: Isometry) -> Isometry {
        Isometry {
            a: self.a * o.a + self.b * o.c,
            b: self.a * o.b + self.b * o.d,
            c: self.c * o.a + self.d * o.c,
            d: self.c * o.b + self.d * o.d,
        }
    }
}

impl Neg for Isometry {
    type Output = Isometry;

    fn neg(self) -> Isometry {
        Isometry { a: -self.a, b: -self.b, c: -self.c, d: -self.d }
    }
}

impl fmt::Display for Isometry {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[[{}, {}], [{}, {}]]", self.a, self.b, self.c, self.d)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hypgeom::point::{I, INFINITY};

    #[test]
    fn identity_fixes_i() {
        assert_eq!(Isometry::IDENTITY.apply(I), I);
    }

    #[test]
    fn canonical_conjugator_sends_point_to_i() {
        let z = Complex64::new(2.5, 0.3);
        let w = Isometry::to_i(z).apply_complex(z);
        assert!((w - Complex64::i()).norm() < 1e-14);
    }

    #[test]
    fn inversion_swaps_zero_and_infinity() {
        let g = Isometry::new(0.0, -1.0, 1.0, 0.0).unwrap();
        assert_eq!(g.apply(Point::ideal(0.0)), INFINITY);
        assert_eq!(g.apply(INFINITY), Point::ideal(0.0));
    }

    #[test]
    fn sign_flip_does_not_change_action() {
        let g = Isometry::normalized(2.0, 1.0, 1.0, 1.0).unwrap();
        let p = Point::finite(0.3, 0.7).unwrap();
        assert_eq!(g.apply(p), (-g).apply(p));
    }

    #[test]
    fn rejects_bad_determinant() {
        assert!(matches!(Isometry::new(2.0, 0.0, 0.0, 1.0), Err(Error::Determinant { .. })));
        assert!(Isometry::normalized(1.0, 0.0, 0.0, -1.0).is_err());
        assert!(Isometry::parse("1,2,3").is_err());
    }

    #[test]
    fn diagonal_axis_runs_zero_to_infinity() {
        let h = 0.5f64.exp();
        let g = Isometry::new(h, 0.0, 0.0, 1.0 / h).unwrap();
        let ax = g.axis(1e-9).unwrap();
        assert_eq!(ax.start, Extended::Real(0.0));
        assert_eq!(ax.end, Extended::Infinity);
        assert!((g.translation_length(1e-9).unwrap() - 1.0).abs() < 1e-14);
        // inverse swaps the orientation
        let ax = g.inverse().axis(1e-9).unwrap();
        assert_eq!(ax.start, Extended::Infinity);
    }

    #[test]
    fn rotation_fixes_i() {
        let g = Isometry::rotation_about_i(0.4);
        let fp = g.fixed_points(1e-9);
        assert_eq!(fp.len(), 1);
        let z = fp[0].expect_finite("fp").unwrap();
        assert!((z - Complex64::i()).norm() < 1e-14);
        // anticlockwise by 2t
        assert!((g.rotation_at(Complex64::i()) - 0.8).abs() < 1e-14);
    }

    #[test]
    fn elliptic_fixed_point_has_positive_imaginary_part() {
        for g in
            [Isometry::normalized(1.0, -2.0, 1.0, 0.5).unwrap(), Isometry::normalized(0.5, 2.0, -1.0, 1.0).unwrap()]
        {
            assert_eq!(g.kind(1e-9), IsometryKind::Elliptic);
            let p = g.fixed_points(1e-9)[0];
            let z = p.expect_finite("fp").unwrap();
            assert!(z.im > 0.0);
            assert!((g.apply_complex(z) - z).norm() < 1e-12);
        }
    }

    #[test]
    fn hyperbolic_fixed_points_are_fixed_and_ordered() {
        let g = Isometry::normalized(2.0, 1.0, 1.0, 1.0).unwrap();
        let fp = g.fixed_points(1e-9);
        for p in &fp {
            let x = p.expect_ideal("fp").unwrap().real().unwrap();
            let y = (g.a * x + g.b) / (g.c * x + g.d);
            assert!((x - y).abs() < 1e-12);
        }
        // repulsive point: points near it move away
        let r = fp[0].expect_ideal("r").unwrap().real().unwrap();
        let near = Point::finite(r, 1e-3).unwrap();
        let moved = g.apply(near).expect_finite("m").unwrap();
        assert!((moved.re - r).abs() + moved.im > 1e-3);
    }

    #[test]
    fn parabolic_fixed_point() {
        let g = Isometry::new(1.0, 1.0, 0.0, 1.0).unwrap();
        assert_eq!(g.kind(1e-9), IsometryKind::Parabolic);
        assert_eq!(g.fixed_points(1e-9), vec![INFINITY]);
        let h = Isometry::new(1.0, 0.0, 1.0, 1.0).unwrap();
        assert_eq!(h.fixed_points(1e-9), vec![Point::ideal(0.0)]);
    }

    #[test]
    fn axis_rejects_non_hyperbolic() {
        assert!(Isometry::rotation_about_i(0.3).axis(1e-9).is_err());
        assert!(Isometry::rotation_about_i(0.3).translation_length(1e-9).is_err());
    }
}
