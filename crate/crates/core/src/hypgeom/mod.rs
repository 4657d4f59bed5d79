//! The upper half-plane model of the hyperbolic plane.

mod area;
mod disk;
mod geodesic;
mod isometry;
mod point;
mod polygon;

pub use area::{loop_integral, poly_area, side_integral, tri_area};
pub use disk::{disk_to_klein, from_disk, klein_to_disk, to_disk};
pub(crate) use geodesic::tangent;
pub use geodesic::{
    angle_between, coincident, distance, geodesic_through, point_at_distance, wrap_angle, Geodesic, GeodesicShape,
    COINCIDENT_DISTANCE,
};
pub use isometry::{Isometry, IsometryKind, CENTRAL_TOL, DET_TOL};
pub use point::{Extended, Point, I, INFINITY};
pub use polygon::{orientation, segments_intersect, Intersection, Polygon, SEGMENT_TOL};

use crate::Result;

pub fn apply(g: &Isometry, p: Point) -> Point {
    g.apply(p)
}

pub fn is_simple(p: &Polygon) -> Result<bool> {
    p.is_simple()
}

pub fn is_convex(p: &Polygon) -> Result<bool> {
    p.is_convex()
}

pub fn axis(g: &Isometry, parabolic_tol: f64) -> Result<Geodesic> {
    g.axis(parabolic_tol)
}

pub fn fixed_points(g: &Isometry, parabolic_tol: f64) -> Vec<Point> {
    g.fixed_points(parabolic_tol)
}

pub fn translation_length(g: &Isometry, parabolic_tol: f64) -> Result<f64> {
    g.translation_length(parabolic_tol)
}

pub fn dist_to_axis(g: &Isometry, p: Point, parabolic_tol: f64) -> Result<f64> {
    g.dist_to_axis(p, parabolic_tol)
}

/// Whether the ideal pairs `{a1, a2}` and `{b1, b2}` separate each other on
/// the boundary circle. Pairs sharing a point do not.
pub fn endpoints_interleave(a: (Extended, Extended), b: (Extended, Extended)) -> bool {
    let ang = |e: Extended| to_disk(Point::Ideal(e)).arg();
    let same = |x: Extended, y: Extended| coincident(Point::Ideal(x), Point::Ideal(y));
    if same(a.0, b.0) || same(a.0, b.1) || same(a.1, b.0) || same(a.1, b.1) {
        return false;
    }
    let (lo, hi) = {
        let (s, t) = (ang(a.0), ang(a.1));
        (s.min(t), s.max(t))
    };
    let inside = |e: Extended| {
        let t = ang(e);
        t > lo && t < hi
    };
    inside(b.0) != inside(b.1)
}

/// True iff `g` and `h` are both hyperbolic and their axes cross
/// transversally.
pub fn axes_cross(g: &Isometry, h: &Isometry, parabolic_tol: f64) -> bool {
    match (g.axis(parabolic_tol), h.axis(parabolic_tol)) {
        (Ok(x), Ok(y)) => endpoints_interleave((x.start, x.end), (y.start, y.end)),
        _ => false,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn interleaving() {
        let r = Extended::Real;
        assert!(endpoints_interleave((r(-1.0), r(1.0)), (r(0.3), Extended::Infinity)));
        assert!(!endpoints_interleave((r(-1.0), r(1.0)), (r(2.0), Extended::Infinity)));
        assert!(!endpoints_interleave((r(-1.0), r(1.0)), (r(1.0), r(3.0))));
        assert!(endpoints_interleave((r(5.0), Extended::Infinity), (r(6.0), r(-7.0))));
    }

    #[test]
    fn axes_cross_examples() {
        let e = 0.5f64.exp();
        let d = Isometry::new(e, 0.0, 0.0, 1.0 / e).unwrap();
        let d2 = d * d;
        assert!(!axes_cross(&d, &d2, 1e-9));
        let rot = Isometry::rotation_about_i(0.4);
        assert!(!axes_cross(&d, &rot, 1e-9));
        let (x, y, r) = (0.7f64, 0.4f64, 0.2f64);
        let a = Isometry::new(x.cosh(), x.sinh(), x.sinh(), x.cosh()).unwrap();
        let b = Isometry::new(y.exp(), -2.0 * r * y.sinh(), 0.0, (-y).exp()).unwrap();
        assert!(axes_cross(&a, &b, 1e-9));
    }
}
