//! Geodesic polygons: signed area, segment intersection, simplicity and
//! convexity.
//!
//! Intersection and convexity questions are answered in projective (Klein)
//! coordinates, where geodesic segments are straight chords of the unit
//! disk. Before projecting, the configuration is moved by an isometry that
//! takes one of its finite points to `i`, which keeps the chords away from
//! the boundary circle whenever that is possible.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::area::poly_area;
use super::disk::{disk_to_klein, from_disk, klein_to_disk, to_disk};
use super::geodesic::coincident;
use super::isometry::Isometry;
use super::point::Point;
use crate::{Error, Result};

/// Relative tolerance on chord parameters.
pub const SEGMENT_TOL: f64 = 1e-9;

/// A closed polygon given by its vertices in boundary order.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Polygon {
    pub vertices: Vec<Point>,
}

/// How two geodesic segments meet.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Intersection {
    None,
    Point(Point),
    /// The segments lie on one geodesic and share more than a point.
    Overlap,
}

impl Intersection {
    pub fn is_none(&self) -> bool {
        matches!(self, Intersection::None)
    }
}

/// Isometry moving the first finite point of `pts` to `i`.
fn recentring(pts: &[Point]) -> Isometry {
    pts.iter()
        .find_map(|p| match p {
            Point::Finite(z) => Some(Isometry::to_i(*z)),
            Point::Ideal(_) => None,
        })
        .unwrap_or(Isometry::IDENTITY)
}

fn klein(g: &Isometry, p: Point) -> Complex64 {
    disk_to_klein(to_disk(g.apply(p)))
}

fn cross(a: Complex64, b: Complex64) -> f64 {
    a.re * b.im - a.im * b.re
}

/// Intersection of the chords `p→q` and `r→s`.
fn chords(p: Complex64, q: Complex64, r: Complex64, s: Complex64) -> ChordMeet {
    let (d1, d2) = (q - p, s - r);
    let den = cross(d1, d2);
    let scale = d1.norm() * d2.norm();
    let tol = SEGMENT_TOL;
    if den.abs() <= tol * scale {
        // parallel; collinear if r lies on the line through p, q
        if cross(d1, r - p).abs() > tol * d1.norm() {
            return ChordMeet::None;
        }
        let len2 = d1.norm_sqr();
        let t_r = (r - p).re * d1.re + (r - p).im * d1.im;
        let t_s = (s - p).re * d1.re + (s - p).im * d1.im;
        let (lo, hi) = (t_r.min(t_s) / len2, t_r.max(t_s) / len2);
        let (a, b) = (lo.max(0.0), hi.min(1.0));
        return if b - a > tol {
            ChordMeet::Overlap
        } else if b - a >= -tol {
            ChordMeet::At(0.5 * (a + b))
        } else {
            ChordMeet::None
        };
    }
    let t = cross(r - p, d2) / den;
    let u = cross(r - p, d1) / den;
    if (-tol..=1.0 + tol).contains(&t) && (-tol..=1.0 + tol).contains(&u) {
        ChordMeet::At(t.clamp(0.0, 1.0))
    } else {
        ChordMeet::None
    }
}

enum ChordMeet {
    None,
    At(f64),
    Overlap,
}

/// Intersection of the geodesic segments `s1` and `s2`. With
/// `ignore_shared_endpoints`, a meeting point that is an endpoint of both
/// segments is not reported.
pub fn segments_intersect(s1: (Point, Point), s2: (Point, Point), ignore_shared_endpoints: bool) -> Intersection {
    let g = recentring(&[s1.0, s1.1, s2.0, s2.1]);
    let (p, q) = (klein(&g, s1.0), klein(&g, s1.1));
    let (r, s) = (klein(&g, s2.0), klein(&g, s2.1));
    match chords(p, q, r, s) {
        ChordMeet::None => Intersection::None,
        ChordMeet::Overlap => Intersection::Overlap,
        ChordMeet::At(t) => {
            let point = if t <= SEGMENT_TOL {
                s1.0
            } else if t >= 1.0 - SEGMENT_TOL {
                s1.1
            } else {
                g.inverse().apply(from_disk(klein_to_disk(p + (q - p) * t)))
            };
            let shared =
                |e: Point| (coincident(e, s1.0) || coincident(e, s1.1)) && (coincident(e, s2.0) || coincident(e, s2.1));
            if ignore_shared_endpoints && shared(point) {
                Intersection::None
            } else {
                Intersection::Point(point)
            }
        }
    }
}

/// Orientation of the geodesic triangle `a, b, c`: `1` anticlockwise, `-1`
/// clockwise, `0` degenerate.
pub fn orientation(a: Point, b: Point, c: Point) -> i8 {
    if coincident(a, b) || coincident(b, c) || coincident(c, a) {
        return 0;
    }
    let g = recentring(&[a, b, c]);
    let (ka, kb, kc) = (klein(&g, a), klein(&g, b), klein(&g, c));
    let x = cross(kb - ka, kc - ka);
    if x.abs() <= 1e-12 * (kb - ka).norm() * (kc - ka).norm() {
        0
    } else if x > 0.0 {
        1
    } else {
        -1
    }
}

impl Polygon {
    pub fn new(vertices: Vec<Point>) -> Result<Polygon> {
        if vertices.len() < 3 {
            return Err(Error::Degenerate(format!("polygon needs at least 3 vertices, got {}", vertices.len())));
        }
        Ok(Polygon { vertices })
    }

    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    /// Fan-sum signed area from vertex 0.
    pub fn area(&self) -> Result<f64> {
        poly_area(&self.vertices)
    }

    /// Sides in order, the last one closing the loop.
    pub fn sides(&self) -> impl Iterator<Item = (Point, Point)> + '_ {
        let m = self.vertices.len();
        (0..m).map(move |k| (self.vertices[k], self.vertices[(k + 1) % m]))
    }

    /// Whether some side has coincident endpoints.
    pub fn is_degenerate(&self) -> bool {
        self.vertices.len() < 3 || self.sides().any(|(p, q)| coincident(p, q))
    }

    fn check_nondegenerate(&self) -> Result<()> {
        if self.is_degenerate() {
            return Err(Error::Degenerate("polygon has a side of zero length".into()));
        }
        Ok(())
    }

    /// No two sides meet except adjacent sides at their shared vertex.
    pub fn is_simple(&self) -> Result<bool> {
        self.check_nondegenerate()?;
        let sides: Vec<_> = self.sides().collect();
        let m = sides.len();
        for i in 0..m {
            for j in i + 1..m {
                let adjacent = j == i + 1 || (i == 0 && j == m - 1);
                if !segments_intersect(sides[i], sides[j], adjacent).is_none() {
                    return Ok(false);
                }
            }
        }
        Ok(true)
    }

    /// Simple, and every interior angle is at most `pi` for one consistent
    /// direction of traversal.
    pub fn is_convex(&self) -> Result<bool> {
        if !self.is_simple()? {
            return Ok(false);
        }
        let g = recentring(&self.vertices);
        let k: Vec<Complex64> = self.vertices.iter().map(|&p| klein(&g, p)).collect();
        let m = k.len();
        let (mut pos, mut neg) = (false, false);
        for i in 0..m {
            let (a, b, c) = (k[i], k[(i + 1) % m], k[(i + 2) % m]);
            let x = cross(b - a, c - b);
            let tol = 1e-12 * (b - a).norm() * (c - b).norm();
            if x > tol {
                pos = true;
            } else if x < -tol {
                neg = true;
            }
        }
        Ok(pos != neg)
    }

    /// `1` if the boundary runs anticlockwise, `-1` if clockwise, from the
    /// sign of the Euclidean area of the projected polygon.
    pub fn orientation(&self) -> i8 {
        let g = recentring(&self.vertices);
        let k: Vec<Complex64> = self.vertices.iter().map(|&p| klein(&g, p)).collect();
        let m = k.len();
        let s: f64 = (0..m).map(|i| cross(k[i], k[(i + 1) % m])).sum();
        if s > 0.0 {
            1
        } else if s < 0.0 {
            -1
        } else {
            0
        }
    }
}
