//! Relators of surface groups in the universal cover.
//!
//! A representation of the fundamental group of a genus `g` surface with `n`
//! boundary components is given by lifted generators `α_i, β_i, γ_j`. When
//! `[α_1, β_1] ⋯ [α_g, β_g] γ_1 ⋯ γ_n` is the identity in the plane its
//! lift is `z^m`, and `m` is the Euler number.

use std::f64::consts::PI;

use std::collections::BTreeMap;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::commutator::{commutator, pentagon_vertices};
use crate::cover::{compose, product, LiftedIsometry};
use crate::doc::RepDocument;
use crate::hypgeom::{coincident, poly_area, Isometry, Point, Polygon, I};
use crate::sample;
use crate::twist::twist;
use crate::{Error, Result};

/// Entrywise distance from `±identity` accepted for a closed-up relator.
pub const CLOSE_UP_TOL: f64 = 1e-8;
/// Accepted distance of `theta` from `m pi` for a central relator.
pub const CENTRAL_THETA_TOL: f64 = 1e-6;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SurfaceRep {
    pub genus: usize,
    pub boundary_count: usize,
    pub alphas: Vec<LiftedIsometry>,
    pub betas: Vec<LiftedIsometry>,
    pub gammas: Vec<LiftedIsometry>,
    pub basepoint: Point,
}

impl SurfaceRep {
    pub fn new(
        alphas: Vec<LiftedIsometry>,
        betas: Vec<LiftedIsometry>,
        gammas: Vec<LiftedIsometry>,
        basepoint: Point,
    ) -> Result<SurfaceRep> {
        if alphas.len() != betas.len() {
            return Err(Error::InvalidArgument(format!("{} alphas but {} betas", alphas.len(), betas.len())));
        }
        basepoint.expect_finite("basepoint")?;
        Ok(SurfaceRep { genus: alphas.len(), boundary_count: gammas.len(), alphas, betas, gammas, basepoint })
    }

    /// `2 - 2g - n`.
    pub fn euler_characteristic(&self) -> i64 {
        2 - 2 * self.genus as i64 - self.boundary_count as i64
    }

    pub fn commutators(&self) -> Vec<LiftedIsometry> {
        self.alphas.iter().zip(&self.betas).map(|(a, b)| commutator(a, b)).collect()
    }

    /// Whether the relator is `±identity` in `SL(2,R)` within [`CLOSE_UP_TOL`].
    pub fn closes_up(&self) -> bool {
        relator_product(self).mat.central_sign_tol(CLOSE_UP_TOL).is_some()
    }

    /// The same representation with every gamma replaced by its efficient
    /// lift at the basepoint.
    pub fn with_efficient_gammas(&self) -> Result<SurfaceRep> {
        let gammas = self.gammas.iter().map(|c| efficient_lift(c, self.basepoint)).collect::<Result<_>>()?;
        Ok(SurfaceRep { gammas, ..self.clone() })
    }
}

/// `[α_1, β_1] ⋯ [α_g, β_g] γ_1 ⋯ γ_n`.
pub fn relator_product(rep: &SurfaceRep) -> LiftedIsometry {
    let comms = rep.commutators();
    product(comms.iter().chain(rep.gammas.iter()))
}

/// `z^k c` with `k` chosen so that the twist at `p` is in `(-pi, pi]`.
pub fn efficient_lift(c: &LiftedIsometry, p: Point) -> Result<LiftedIsometry> {
    let t = twist(c, p)?;
    let k = ((PI - t) / (2.0 * PI)).floor() as i64;
    let mut r = c.shift(k);
    // the shift adds exactly 2 pi k up to rounding; settle the tie at +pi
    let t2 = twist(&r, p)?;
    if t2 <= -PI {
        r = r.shift(1);
    } else if t2 > PI + 1e-12 {
        r = r.shift(-1);
    }
    Ok(r)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EulerReport {
    pub m: i64,
    pub theta: f64,
    pub theta_residual: f64,
    pub chi: i64,
    /// `chi >= 0`, or `|m| <= -chi`.
    pub bound_satisfied: bool,
    /// `|theta| < (2g + n - 1) pi`, the inequality behind the bound.
    pub counting_bound_satisfied: bool,
}

/// Euler number of a closed-up representation, with the gammas replaced by
/// efficient lifts at the basepoint.
pub fn euler_number(rep: &SurfaceRep) -> Result<EulerReport> {
    let eff = rep.with_efficient_gammas()?;
    let r = relator_product(&eff);
    let Some(sign) = r.mat.central_sign_tol(CLOSE_UP_TOL) else {
        return Err(Error::NotCentral(format!("relator {} is not ±identity", r.mat)));
    };
    let m = (r.theta / PI).round();
    let theta_residual = (r.theta - m * PI).abs();
    let parity = if (m as i64).rem_euclid(2) == 0 { 1 } else { -1 };
    if theta_residual >= CENTRAL_THETA_TOL || sign != parity {
        return Err(Error::NotCentral(format!("relator theta {} does not match its sign {sign}", r.theta)));
    }
    let m = m as i64;
    let chi = rep.euler_characteristic();
    let k = (2 * rep.genus + rep.boundary_count) as f64 - 1.0;
    Ok(EulerReport {
        m,
        theta: r.theta,
        theta_residual,
        chi,
        bound_satisfied: chi >= 0 || m.abs() <= -chi,
        counting_bound_satisfied: chi >= 0 || r.theta.abs() < k * PI,
    })
}

/// A polygon identity: the twist of a product against twists of the factors
/// plus a signed area.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PolygonIdentity {
    pub vertices: Vec<Point>,
    pub degenerate: bool,
    pub simple: bool,
    pub convex: bool,
    pub area: f64,
    /// Twist of the product at the basepoint.
    pub lhs: f64,
    /// Sum of factor twists plus `area`.
    pub rhs: f64,
    pub residual: f64,
}

fn polygon_flags(vertices: &[Point]) -> (bool, bool, bool) {
    let Ok(poly) = Polygon::new(vertices.to_vec()) else {
        return (true, false, false);
    };
    if poly.is_degenerate() {
        return (true, false, false);
    }
    let simple = poly.is_simple().unwrap_or(false);
    let convex = simple && poly.is_convex().unwrap_or(false);
    (false, simple, convex)
}

fn area_of(vertices: &[Point]) -> f64 {
    if vertices.len() < 3 {
        0.0
    } else {
        poly_area(vertices).unwrap_or(0.0)
    }
}

/// Points `γ_i ⋯ γ_n p` for `i = 1..=n+1` (the last is `p`).
fn tail_orbit(cs: &[LiftedIsometry], p: Point) -> Vec<Point> {
    let mut out = vec![p];
    let mut q = p;
    for c in cs.iter().rev() {
        q = c.mat.apply(q);
        out.push(q);
    }
    out.reverse();
    out
}

/// The polygon `p → γ_1⋯γ_n p → γ_2⋯γ_n p → ⋯ → γ_n p` and its identity.
pub fn c_polygon(cs: &[LiftedIsometry], p: Point) -> Result<PolygonIdentity> {
    p.expect_finite("basepoint")?;
    if cs.len() < 2 {
        return Err(Error::InvalidArgument(format!("need at least 2 elements, got {}", cs.len())));
    }
    let orbit = tail_orbit(cs, p);
    let mut vertices = vec![p];
    if !coincident(orbit[0], p) {
        vertices.push(orbit[0]);
    }
    vertices.extend_from_slice(&orbit[1..cs.len()]);
    let (degenerate, simple, convex) = polygon_flags(&vertices);
    let area = area_of(&vertices);
    let lhs = twist(&product(cs), p)?;
    let mut rhs = area;
    for (i, c) in cs.iter().enumerate() {
        rhs += twist(c, orbit[i + 1])?;
    }
    Ok(PolygonIdentity { vertices, degenerate, simple, convex, area, lhs, rhs, residual: lhs - rhs })
}

/// The fundamental-domain polygon of a relator with its identity and the
/// decomposition into the composition polygon of the commutators and
/// gammas plus one pentagon per handle.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DPolygonReport {
    pub identity: PolygonIdentity,
    pub c_area: f64,
    pub pentagon_areas: Vec<f64>,
    /// `area - c_area - Σ pentagon_areas`.
    pub decomposition_residual: f64,
}

pub fn d_polygon(rep: &SurfaceRep) -> Result<DPolygonReport> {
    let (g, n) = (rep.genus, rep.boundary_count);
    if g == 0 && n < 3 {
        return Err(Error::InvalidArgument(format!("need genus >= 1 or at least 3 gammas, got g={g}, n={n}")));
    }
    let p = rep.basepoint;
    p.expect_finite("basepoint")?;
    let comms = rep.commutators();
    let mut factors = comms.clone();
    factors.extend_from_slice(&rep.gammas);
    // x[k] = (factors[k] ⋯ factors[last]) p, with x[len] = p
    let x = tail_orbit(&factors, p);

    let mut vertices = vec![p];
    if !coincident(x[0], p) {
        vertices.push(x[0]);
    }
    let mut pentagon_areas = Vec::with_capacity(g);
    for i in 0..g {
        let q = x[i + 1];
        let (a, b) = (rep.alphas[i].mat.inverse(), rep.betas[i].mat.inverse());
        let pent = pentagon_vertices(&a, &b, q);
        pentagon_areas.push(area_of(&pent));
        // pent = [q, [α,β] q, β⁻¹q, α⁻¹β⁻¹q, βα⁻¹β⁻¹q]
        vertices.extend_from_slice(&[pent[2], pent[3], pent[4]]);
        if !(n == 0 && i + 1 == g) {
            vertices.push(q);
        }
    }
    vertices.extend_from_slice(&x[g + 1..g + n]);

    let (degenerate, simple, convex) = polygon_flags(&vertices);
    let area = area_of(&vertices);
    let lhs = twist(&relator_product(rep), p)?;
    let mut rhs = area;
    for (j, c) in rep.gammas.iter().enumerate() {
        rhs += twist(c, x[g + j + 1])?;
    }

    let mut c_vertices = vec![p];
    if !coincident(x[0], p) {
        c_vertices.push(x[0]);
    }
    c_vertices.extend_from_slice(&x[1..factors.len()]);
    let c_area = area_of(&c_vertices);
    let decomposition_residual = area - c_area - pentagon_areas.iter().sum::<f64>();
    Ok(DPolygonReport {
        identity: PolygonIdentity { vertices, degenerate, simple, convex, area, lhs, rhs, residual: lhs - rhs },
        c_area,
        pentagon_areas,
        decomposition_residual,
    })
}

/// The `g = 0, n = 2` example: two half turns about `i`, each with twist
/// `pi`, whose product is `z`.
pub fn half_turn_fixture() -> SurfaceRep {
    let h = LiftedIsometry::rotation(PI / 2.0);
    SurfaceRep::new(Vec::new(), Vec::new(), vec![h, h], I).expect("valid fixture")
}

/// The representation `(α, β, γ)` of a one-holed torus with
/// `γ = [α, β]⁻¹`.
pub fn one_holed_torus(a: Isometry, b: Isometry, p: Point) -> Result<SurfaceRep> {
    let (a, b) = (LiftedIsometry::lift(a, 0), LiftedIsometry::lift(b, 0));
    let gamma = efficient_lift(&commutator(&a, &b).inverse(), p)?;
    SurfaceRep::new(vec![a], vec![b], vec![gamma], p)
}

/// Lift the plane inverse of `prefix` efficiently at `p`, closing up a
/// relator whose other factors compose to `prefix`.
pub fn closing_gamma(prefix: &LiftedIsometry, p: Point) -> Result<LiftedIsometry> {
    efficient_lift(&prefix.inverse(), p)
}

/// Composes a relator without the gamma factors, for building closing
/// gammas.
pub fn partial_relator(comms: &[LiftedIsometry], gammas: &[LiftedIsometry]) -> LiftedIsometry {
    comms.iter().chain(gammas).fold(LiftedIsometry::IDENTITY, |acc, x| compose(&acc, x))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MilnorWoodReport {
    pub genus: usize,
    pub boundary_count: usize,
    pub trials: usize,
    pub seed: u64,
    pub chi: i64,
    pub histogram: BTreeMap<i64, usize>,
    /// Trials with `|m| > -chi`.
    pub violations: usize,
    /// Trials with `|theta| >= (2g + n - 1) pi`.
    pub counting_violations: usize,
    /// Trials whose relator failed to close up numerically.
    pub failures: usize,
    pub max_abs_m: i64,
    /// Largest `|theta| / ((2g + n - 1) pi)`.
    pub max_theta_ratio: f64,
    pub max_theta_residual: f64,
    pub counterexample: Option<RepDocument>,
}

impl MilnorWoodReport {
    pub fn passed(&self) -> bool {
        self.violations == 0 && self.counting_violations == 0 && self.failures == 0
    }
}

/// Samples `trials` closed-up representations of the `(g, n)` surface group
/// with basepoint `i` and checks the Milnor–Wood bound on each.
pub fn milnor_wood_sweep(genus: usize, boundary: usize, trials: usize, seed: u64) -> Result<MilnorWoodReport> {
    let chi = 2 - 2 * genus as i64 - boundary as i64;
    if boundary == 0 || chi >= 0 {
        return Err(Error::InvalidArgument(format!(
            "need n >= 1 and negative Euler characteristic, got g={genus}, n={boundary}"
        )));
    }
    let k = (2 * genus + boundary - 1) as f64;
    let outcomes: Vec<_> = (0..trials)
        .into_par_iter()
        .map(|t| -> Result<(SurfaceRep, Result<EulerReport>)> {
            let mut rng = sample::trial_rng(seed, t as u64);
            let rep = sample::random_rep(&mut rng, genus, boundary, Some(I), sample::random_lift)?;
            let e = euler_number(&rep);
            Ok((rep, e))
        })
        .collect();
    let mut report = MilnorWoodReport {
        genus,
        boundary_count: boundary,
        trials,
        seed,
        chi,
        histogram: BTreeMap::new(),
        violations: 0,
        counting_violations: 0,
        failures: 0,
        max_abs_m: 0,
        max_theta_ratio: 0.0,
        max_theta_residual: 0.0,
        counterexample: None,
    };
    for outcome in outcomes {
        let (rep, e) = outcome?;
        let bad = match e {
            Ok(e) => {
                *report.histogram.entry(e.m).or_default() += 1;
                report.max_abs_m = report.max_abs_m.max(e.m.abs());
                report.max_theta_ratio = report.max_theta_ratio.max(e.theta.abs() / (k * PI));
                report.max_theta_residual = report.max_theta_residual.max(e.theta_residual);
                report.violations += usize::from(!e.bound_satisfied);
                report.counting_violations += usize::from(!e.counting_bound_satisfied);
                !e.bound_satisfied || !e.counting_bound_satisfied
            }
            Err(_) => {
                report.failures += 1;
                true
            }
        };
        if bad && report.counterexample.is_none() {
            report.counterexample = Some(RepDocument::from_rep(&rep)?);
        }
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::commutator::goldman_pair;
    use crate::cover::central_power;
    use std::f64::consts::FRAC_PI_2;

    #[test]
    fn trivial_rep() {
        let id = LiftedIsometry::IDENTITY;
        let rep = SurfaceRep::new(vec![id], vec![id], vec![id], I).unwrap();
        assert_eq!(relator_product(&rep), id);
        let e = euler_number(&rep).unwrap();
        assert_eq!(e.m, 0);
        assert!(e.bound_satisfied);
    }

    #[test]
    fn half_turns_give_z() {
        let rep = half_turn_fixture();
        let r = relator_product(&rep);
        assert_eq!(r.theta, PI);
        assert_eq!(central_power(&r).unwrap(), 1);
        let e = euler_number(&rep).unwrap();
        assert_eq!(e.m, 1);
        assert_eq!(e.chi, 0);
    }

    #[test]
    fn efficient_lift_examples() {
        let c = LiftedIsometry::lift(Isometry::new(2.0, 0.0, 0.0, 0.5).unwrap(), 0);
        assert_eq!(efficient_lift(&c, I).unwrap(), c);
        let e = LiftedIsometry::lift(Isometry::normalized(1.0, 2.0, -0.3, 0.6).unwrap(), 0);
        let eff = efficient_lift(&e, I).unwrap();
        assert!((efficient_lift(&eff.shift(6), I).unwrap().theta - eff.theta).abs() < 1e-12);
        let h = LiftedIsometry::rotation(FRAC_PI_2);
        assert_eq!(efficient_lift(&h, I).unwrap(), h);
        assert!((efficient_lift(&h.shift(-2), I).unwrap().theta - h.theta).abs() < 1e-12);
    }

    #[test]
    fn goldman_torus_has_unit_euler_number() {
        let (a, b) = goldman_pair(1.0, 1.2, 0.3).unwrap();
        let rep = one_holed_torus(a, b, I).unwrap();
        assert!(rep.closes_up());
        let e = euler_number(&rep).unwrap();
        assert_eq!(e.m.abs(), 1);
        assert!(e.bound_satisfied && e.counting_bound_satisfied);
        // shifting the handle generators does not change m
        let mut shifted = rep.clone();
        shifted.alphas[0] = shifted.alphas[0].shift(3);
        shifted.betas[0] = shifted.betas[0].shift(-1);
        assert_eq!(euler_number(&shifted).unwrap().m, e.m);
    }

    #[test]
    fn not_closed_up_is_an_error() {
        let a = LiftedIsometry::lift(Isometry::new(2.0, 0.0, 0.0, 0.5).unwrap(), 0);
        let rep = SurfaceRep::new(vec![], vec![], vec![a, a, a], I).unwrap();
        assert!(matches!(euler_number(&rep), Err(Error::NotCentral(_))));
    }

    #[test]
    fn c_polygon_of_two_is_the_addition_triangle() {
        let a = LiftedIsometry::lift(Isometry::normalized(1.3, -0.4, 2.2, 0.1).unwrap(), 0);
        let b = LiftedIsometry::lift(Isometry::normalized(0.2, 1.1, -0.9, 2.0).unwrap(), 0);
        let p = Point::finite(0.3, 1.4).unwrap();
        let c = c_polygon(&[b, a], p).unwrap();
        assert_eq!(c.vertices.len(), 3);
        assert!(c.residual.abs() < 1e-9);
        let id = LiftedIsometry::IDENTITY;
        let d = c_polygon(&[id, id], p).unwrap();
        assert!(d.degenerate);
        assert_eq!(d.residual, 0.0);
    }

    #[test]
    fn d_polygon_of_identities_is_degenerate() {
        let id = LiftedIsometry::IDENTITY;
        let rep = SurfaceRep::new(vec![id], vec![id], vec![id], I).unwrap();
        let d = d_polygon(&rep).unwrap();
        assert!(d.identity.degenerate);
        assert!(!d.identity.convex);
        assert!(d.identity.residual.abs() < 1e-12);
    }

    #[test]
    fn d_polygon_for_three_gammas_is_a_triangle() {
        let a = LiftedIsometry::lift(Isometry::normalized(1.3, -0.4, 2.2, 0.1).unwrap(), 0);
        let b = LiftedIsometry::lift(Isometry::normalized(0.2, 1.1, -0.9, 2.0).unwrap(), 0);
        let c = closing_gamma(&a.compose(&b), I).unwrap();
        let rep = SurfaceRep::new(vec![], vec![], vec![a, b, c], I).unwrap();
        let d = d_polygon(&rep).unwrap();
        assert_eq!(d.identity.vertices.len(), 3);
        assert!(d.identity.convex);
        assert!(d.identity.residual.abs() < 1e-9);
        assert!(d.decomposition_residual.abs() < 1e-12);
    }

    #[test]
    fn d_polygon_decomposes_into_c_and_pentagons() {
        let (a, b) = goldman_pair(0.8, 0.6, 0.2).unwrap();
        let rep = one_holed_torus(a, b, Point::finite(0.2, 1.3).unwrap()).unwrap();
        let d = d_polygon(&rep).unwrap();
        assert_eq!(d.identity.vertices.len(), 5);
        assert!(d.decomposition_residual.abs() < 1e-9);
        assert!(d.identity.residual.abs() < 1e-9);
    }

    #[test]
    fn small_sweep_passes() {
        let r = milnor_wood_sweep(1, 1, 200, 11).unwrap();
        assert!(r.passed(), "{r:?}");
        assert_eq!(r.histogram.values().sum::<usize>(), 200);
        assert!(r.max_abs_m <= 1);
        assert!(milnor_wood_sweep(0, 2, 10, 1).is_err());
    }

    #[test]
    fn d_polygon_rejects_small_surfaces() {
        assert!(d_polygon(&half_turn_fixture()).is_err());
    }
}
