//! Signed areas of geodesic triangles and polygons.
//!
//! The area form of the half-plane is `dx dy / y^2 = d(dx / y)`, so the
//! signed area enclosed by a closed piecewise-geodesic loop is the sum over
//! its sides of `∫ dx / y`. Along a semicircular geodesic from `p` to `q`
//! that integral is `2 atan2(x_q - x_p, y_q + y_p)`, and along a vertical
//! geodesic it vanishes. Each side contributes a value in `[-pi, pi]`, and
//! reversing a side negates its contribution exactly, so fan sums and
//! boundary sums agree to rounding.

use super::geodesic::coincident;
use super::point::{Extended, Point};
use crate::{Error, Result};

/// `∫ dx / y` along the geodesic segment from `p` to `q`.
pub fn side_integral(p: Point, q: Point) -> f64 {
    let (dx, s) = match (p, q) {
        (Point::Ideal(Extended::Infinity), _) | (_, Point::Ideal(Extended::Infinity)) => return 0.0,
        (Point::Finite(a), Point::Finite(b)) => (b.re - a.re, b.im + a.im),
        (Point::Finite(a), Point::Ideal(Extended::Real(x))) => (x - a.re, a.im),
        (Point::Ideal(Extended::Real(x)), Point::Finite(b)) => (b.re - x, b.im),
        (Point::Ideal(Extended::Real(x)), Point::Ideal(Extended::Real(y))) => (y - x, 0.0),
    };
    2.0 * dx.atan2(s)
}

/// Signed area of the geodesic triangle `a, b, c`: positive for
/// anticlockwise vertex order, zero for degenerate triangles.
pub fn tri_area(a: Point, b: Point, c: Point) -> f64 {
    if coincident(a, b) || coincident(b, c) || coincident(c, a) {
        return 0.0;
    }
    side_integral(a, b) + side_integral(b, c) + side_integral(c, a)
}

/// Signed area of a closed polygon as the fan sum
/// `Σ tri_area(v0, vk, vk+1)`; defined for self-intersecting polygons too.
pub fn poly_area(vertices: &[Point]) -> Result<f64> {
    if vertices.len() < 3 {
        return Err(Error::Degenerate(format!("polygon needs at least 3 vertices, got {}", vertices.len())));
    }
    let v0 = vertices[0];
    Ok(vertices[1..].windows(2).map(|w| tri_area(v0, w[0], w[1])).sum())
}

/// Boundary integral of a closed loop; equals [`poly_area`] away from
/// degenerate fan triangles and is defined for any number of vertices.
pub fn loop_integral(vertices: &[Point]) -> f64 {
    let m = vertices.len();
    (0..m).map(|k| side_integral(vertices[k], vertices[(k + 1) % m])).sum()
}
