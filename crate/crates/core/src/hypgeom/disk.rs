//! Conversion to the unit disk, used for rendering and for the projective
//! (straight-chord) coordinates behind the polygon predicates.

use num_complex::Complex64;

use super::point::{Extended, Point};

/// Image in the unit disk under `z ↦ (iz + 1) / (z + i)`, which sends `i`
/// to the origin, `∞` to `(0, 1)` and `0` to `(0, -1)`. This is the Cayley
/// transform `(z - i)/(z + i)` followed by a quarter turn, so the imaginary
/// axis stays vertical.
pub fn to_disk(p: Point) -> Complex64 {
    let i = Complex64::i();
    match p {
        Point::Finite(z) => (i * z + 1.0) / (z + i),
        Point::Ideal(Extended::Real(b)) => {
            let w = (Complex64::new(1.0, b)) / Complex64::new(b, 1.0);
            w / w.norm()
        }
        Point::Ideal(Extended::Infinity) => i,
    }
}

/// Inverse of [`to_disk`]; points with modulus `>= 1 - 1e-15` map to ideal
/// points.
pub fn from_disk(w: Complex64) -> Point {
    let i = Complex64::i();
    let r = w.norm();
    if r >= 1.0 - 1e-15 {
        let u = w / r;
        if (u - i).norm() < 1e-15 {
            return Point::Ideal(Extended::Infinity);
        }
        // b = (1 - i u) / (u - i) is real on the circle
        let b = (1.0 - i * u) / (u - i);
        return Point::ideal(b.re);
    }
    let z = (1.0 - i * w) / (w - i);
    Point::Finite(Complex64::new(z.re, z.im.max(f64::MIN_POSITIVE)))
}

/// Poincaré disk to Klein (projective) disk: geodesics become chords.
pub fn disk_to_klein(w: Complex64) -> Complex64 {
    w * (2.0 / (1.0 + w.norm_sqr()))
}

pub fn klein_to_disk(k: Complex64) -> Complex64 {
    let r2 = k.norm_sqr().min(1.0);
    k / (1.0 + (1.0 - r2).sqrt())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hypgeom::point::{I, INFINITY};

    #[test]
    fn landmarks() {
        assert!(to_disk(I).norm() < 1e-16);
        assert!((to_disk(Point::ideal(0.0)) - Complex64::new(0.0, -1.0)).norm() < 1e-15);
        assert!((to_disk(INFINITY) - Complex64::new(0.0, 1.0)).norm() < 1e-15);
        assert!((to_disk(Point::ideal(1.0)) - Complex64::new(1.0, 0.0)).norm() < 1e-15);
    }

    #[test]
    fn ideal_points_land_on_the_circle() {
        for b in [-1e6, -3.0, -0.1, 0.0, 0.7, 42.0, 1e9] {
            assert!((to_disk(Point::ideal(b)).norm() - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn round_trip() {
        for p in [Point::finite(0.3, 2.0).unwrap(), Point::finite(-4.0, 0.01).unwrap()] {
            let q = from_disk(to_disk(p));
            let (a, b) = (p.expect_finite("p").unwrap(), q.expect_finite("q").unwrap());
            assert!((a - b).norm() < 1e-10 * (1.0 + a.norm()));
        }
        assert_eq!(from_disk(to_disk(INFINITY)), INFINITY);
        match from_disk(to_disk(Point::ideal(2.5))) {
            Point::Ideal(Extended::Real(b)) => assert!((b - 2.5).abs() < 1e-12),
            p => panic!("{p}"),
        }
    }

    #[test]
    fn klein_round_trip() {
        let w = Complex64::new(0.3, -0.6);
        assert!((klein_to_disk(disk_to_klein(w)) - w).norm() < 1e-15);
    }
}
