//! Commutators in the universal cover: the pentagon whose area is the twist
//! of a commutator, the three-triangle area formula, the region theorem and
//! its trace corollary, and Goldman's normal form for a pair with crossing
//! axes.

use serde::{Deserialize, Serialize};

use crate::cover::{classify, Chirality, LiftedIsometry, Region};
use crate::hypgeom::{axes_cross, coincident, tri_area, wrap_angle, Isometry, Point, Polygon};
use crate::twist::{twist, twist_at};
use crate::{Error, Result};

/// `a b a⁻¹ b⁻¹`. Replacing `a` or `b` by another lift leaves it unchanged.
pub fn commutator(a: &LiftedIsometry, b: &LiftedIsometry) -> LiftedIsometry {
    a.compose(b).compose(&a.inverse().compose(&b.inverse()))
}

/// The pentagon of a pair at a point and the comparison of its area with
/// the twist of `[a⁻¹, b⁻¹]`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PentagonReport {
    /// `p, α⁻¹β⁻¹αβ p, β p, αβ p, β⁻¹αβ p`.
    pub polygon: Polygon,
    /// Some side has zero length.
    pub degenerate: bool,
    pub simple: bool,
    pub area: f64,
    pub twist_of_commutator: f64,
    /// `area - twist_of_commutator`.
    pub residual: f64,
    /// `residual` reduced to `(-pi, pi]`.
    pub congruence_residual: f64,
}

/// Vertices of the pentagon of `(α, β)` at `p` in boundary order.
pub fn pentagon_vertices(alpha: &Isometry, beta: &Isometry, p: Point) -> [Point; 5] {
    let p1 = beta.apply(p);
    let p2 = alpha.apply(p1);
    let p3 = beta.inverse().apply(p2);
    let p4 = alpha.inverse().apply(p3);
    [p, p4, p1, p2, p3]
}

pub fn pentagon(a: &LiftedIsometry, b: &LiftedIsometry, p: Point) -> Result<PentagonReport> {
    p.expect_finite("pentagon base point")?;
    let polygon = Polygon::new(pentagon_vertices(&a.mat, &b.mat, p).to_vec())?;
    let degenerate = polygon.is_degenerate();
    let simple = !degenerate && polygon.is_simple()?;
    let area = polygon.area()?;
    let tw = twist(&commutator(&a.inverse(), &b.inverse()), p)?;
    let residual = area - tw;
    Ok(PentagonReport {
        polygon,
        degenerate,
        simple,
        area,
        twist_of_commutator: tw,
        residual,
        congruence_residual: wrap_angle(residual),
    })
}

/// `Twist([a,b], p) - Δ[p, βp, βαp] + Δ[p, αp, αβp] + Δ[p, αβp, [α,β]p]`.
pub fn commutator_area_identity(a: &LiftedIsometry, b: &LiftedIsometry, p: Point, parabolic_tol: f64) -> Result<f64> {
    let (al, be) = (&a.mat, &b.mat);
    let c = commutator(a, b);
    let bp = be.apply(p);
    let bap = be.apply(al.apply(p));
    let ap = al.apply(p);
    let abp = al.apply(bp);
    let cp = c.mat.apply(p);
    Ok(twist_at(&c, p, parabolic_tol)? - tri_area(p, bp, bap) + tri_area(p, ap, abp) + tri_area(p, abp, cp))
}

/// The two sides of the twist cross-ratio identity for the pentagon of
/// `(α, β)` at `p`, with `q = αβ p`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CrossRatio {
    /// `(Tw(a, q) - Tw(a, β⁻¹q)) - (Tw(b, q) - Tw(b, α⁻¹q))`.
    pub twists: f64,
    /// `Δ[p0, p1, p2, p3, p4] + Δ[p0, p4, p1, p2, p3]`.
    pub areas: f64,
    pub residual: f64,
}

pub fn cross_ratio_identity(a: &LiftedIsometry, b: &LiftedIsometry, p: Point) -> Result<CrossRatio> {
    p.expect_finite("base point")?;
    let [p0, p4, p1, p2, p3] = pentagon_vertices(&a.mat, &b.mat, p);
    let q = p2;
    let twists =
        (twist(a, q)? - twist(a, b.mat.inverse().apply(q))?) - (twist(b, q)? - twist(b, a.mat.inverse().apply(q))?);
    let areas = Polygon::new(vec![p0, p1, p2, p3, p4])?.area()? + Polygon::new(vec![p0, p4, p1, p2, p3])?.area()?;
    Ok(CrossRatio { twists, areas, residual: twists - areas })
}

/// Whether a commutator may lie in `r`.
pub fn allowed_commutator_region(r: Region) -> bool {
    match r {
        Region::CentralPower(n) => n == 0,
        Region::Hyp(n) => (-1..=1).contains(&n),
        Region::Ell(n) => n == 1 || n == -1,
        Region::Par(0, _) => true,
        Region::Par(-1, Chirality::Plus) | Region::Par(1, Chirality::Minus) => true,
        Region::Par(..) => false,
    }
}

/// Classification of a commutator against the trace table.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TraceCheck {
    pub trace: f64,
    pub region: Region,
    pub holds: bool,
}

/// The region a commutator with trace `t` must lie in.
pub fn trace_table_holds(t: f64, r: Region, tol: f64) -> bool {
    use Region::*;
    if (t - 2.0).abs() < tol {
        matches!(r, CentralPower(0) | Par(0, _))
    } else if (t + 2.0).abs() < tol {
        matches!(r, Par(-1, Chirality::Plus) | Par(1, Chirality::Minus))
    } else if t > 2.0 {
        r == Hyp(0)
    } else if t < -2.0 {
        matches!(r, Hyp(-1) | Hyp(1))
    } else {
        matches!(r, Ell(-1) | Ell(1))
    }
}

pub fn trace_region_corollary(a: &LiftedIsometry, b: &LiftedIsometry, parabolic_tol: f64) -> Result<TraceCheck> {
    let c = commutator(a, b);
    let trace = c.trace();
    let region = classify(&c, parabolic_tol)?;
    Ok(TraceCheck { trace, region, holds: trace_table_holds(trace, region, parabolic_tol) })
}

/// `α = [[cosh x, sinh x], [sinh x, cosh x]]` with fixed points `±1` and
/// `β = [[e^y, -2r sinh y], [0, e^-y]]` with fixed points `r, ∞`.
pub fn goldman_pair(x: f64, y: f64, r: f64) -> Result<(Isometry, Isometry)> {
    if !(r > -1.0 && r < 1.0) {
        return Err(Error::InvalidArgument(format!("r = {r} is not in (-1, 1)")));
    }
    let alpha = Isometry::new(x.cosh(), x.sinh(), x.sinh(), x.cosh())?;
    let beta = Isometry::new(y.exp(), -2.0 * r * y.sinh(), 0.0, (-y).exp())?;
    Ok((alpha, beta))
}

/// `2 + 4 (r² - 1) sinh²x sinh²y`.
pub fn goldman_trace(x: f64, y: f64, r: f64) -> f64 {
    2.0 + 4.0 * (r * r - 1.0) * (x.sinh() * y.sinh()).powi(2)
}

/// The three conditions of the axes-crossing criterion for a pair.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AxesEquivalence {
    pub crossing: bool,
    pub region_in_set: bool,
    pub trace_below_two: bool,
    pub region: Region,
    pub trace: f64,
    pub consistent: bool,
}

pub fn axes_crossing_equivalence(g: &Isometry, h: &Isometry, parabolic_tol: f64) -> Result<AxesEquivalence> {
    let c = commutator(&LiftedIsometry::lift(*g, 0), &LiftedIsometry::lift(*h, 0));
    let region = classify(&c, parabolic_tol)?;
    let trace = c.trace();
    let crossing = axes_cross(g, h, parabolic_tol);
    let region_in_set = matches!(region, Region::Ell(1) | Region::Ell(-1) | Region::Hyp(1) | Region::Hyp(-1))
        || matches!(region, Region::Par(1, Chirality::Minus) | Region::Par(-1, Chirality::Plus));
    let trace_below_two = trace < 2.0 - parabolic_tol;
    Ok(AxesEquivalence {
        crossing,
        region_in_set,
        trace_below_two,
        region,
        trace,
        consistent: crossing == region_in_set && region_in_set == trace_below_two,
    })
}

/// Whether two consecutive vertices of the pentagon coincide.
pub fn pentagon_is_degenerate(a: &Isometry, b: &Isometry, p: Point) -> bool {
    let v = pentagon_vertices(a, b, p);
    (0..5).any(|k| coincident(v[k], v[(k + 1) % 5]))
}
