use std::f64::consts::{FRAC_PI_2, PI};

use num_complex::Complex64;
use proptest::prelude::*;

use hyptwist::commutator::{
    allowed_commutator_region, axes_crossing_equivalence, commutator, goldman_pair, goldman_trace, pentagon,
    trace_region_corollary,
};
use hyptwist::cover::{classify, compose, polar_theta, Chirality, PARABOLIC_TOL};
use hyptwist::doc::RepDocument;
use hyptwist::hypgeom::{
    distance, from_disk, klein_to_disk, poly_area, to_disk, tri_area, wrap_angle, Extended, Geodesic, Polygon,
};
use hyptwist::sample;
use hyptwist::surface::{c_polygon, d_polygon, euler_number, SurfaceRep};
use hyptwist::twist::{
    check_addition, check_conjugation, check_inverse, twist, twist_continuation_auto, twist_mod2pi,
    twist_with_conjugator, within_bounds,
};
use hyptwist::{Isometry, LiftedIsometry, Point, Region};

fn isometry() -> impl Strategy<Value = Isometry> {
    prop::array::uniform4(-3.0..3.0f64).prop_filter_map("determinant too small", |[a, mut b, c, d]| {
        let mut a = a;
        let det = a * d - b * c;
        if det.abs() < 0.05 {
            return None;
        }
        if det < 0.0 {
            a = -a;
            b = -b;
        }
        let m = Isometry::normalized(a, b, c, d).ok()?;
        let frob = m.entries().iter().map(|x| x * x).sum::<f64>().sqrt();
        ((m.trace().abs() - 2.0).abs() > 1e-6 && frob <= 10.0).then_some(m)
    })
}

fn lift() -> impl Strategy<Value = LiftedIsometry> {
    (isometry(), -2i64..=2).prop_map(|(m, n)| LiftedIsometry::lift(m, n))
}

fn point() -> impl Strategy<Value = Point> {
    (-3.0..3.0f64, -2.0..2.0f64).prop_map(|(x, ly)| Point::finite(x, ly.exp()).unwrap())
}

fn ideal() -> impl Strategy<Value = Point> {
    prop_oneof![9 => (-5.0..5.0f64).prop_map(Point::ideal), 1 => Just(hyptwist::hypgeom::INFINITY)]
}

/// A point of the Klein model disk of radius at most `r`.
fn klein_point(r: f64) -> impl Strategy<Value = Complex64> {
    (0.0..r, 0.0..std::f64::consts::TAU).prop_map(|(s, t)| Complex64::from_polar(s, t))
}

fn from_klein(k: Complex64) -> Point {
    from_disk(klein_to_disk(k))
}

fn lift_eq(x: &LiftedIsometry, y: &LiftedIsometry, tol: f64) -> bool {
    (x.theta - y.theta).abs() <= tol && x.mat.entries().iter().zip(y.mat.entries()).all(|(u, v)| (u - v).abs() <= tol)
}

fn lift_eq_rel(x: &LiftedIsometry, y: &LiftedIsometry, tol: f64) -> bool {
    let close = |u: f64, v: f64| (u - v).abs() <= tol * (1.0 + u.abs().max(v.abs()));
    close(x.theta, y.theta) && x.mat.entries().iter().zip(y.mat.entries()).all(|(u, v)| close(*u, v))
}

proptest! {
    #![proptest_config(ProptestConfig { failure_persistence: None, ..ProptestConfig::with_cases(256) })]

    // plane geometry

    #[test]
    fn isometries_preserve_distance(g in isometry(), p in point(), q in point()) {
        let d = distance(p, q).unwrap();
        let e = distance(g.apply(p), g.apply(q)).unwrap();
        prop_assert!((d - e).abs() <= 1e-9 * (1.0 + d), "{d} vs {e}");
    }

    #[test]
    fn triangle_area_is_additive(ka in klein_point(0.95), kb in klein_point(0.95), kc in klein_point(0.95),
                                 w in prop::array::uniform3(0.05..1.0f64), q in point()) {
        let (a, b, c) = (from_klein(ka), from_klein(kb), from_klein(kc));
        let s = w[0] + w[1] + w[2];
        // straight lines in the Klein model are geodesics, so this is inside
        let p = from_klein((ka * w[0] + kb * w[1] + kc * w[2]) / s);
        let whole = tri_area(a, b, c);
        for v in [p, q] {
            let parts = tri_area(a, b, v) + tri_area(b, c, v) + tri_area(c, a, v);
            prop_assert!((whole - parts).abs() < 1e-9, "{whole} vs {parts}");
        }
    }

    #[test]
    fn triangle_area_is_isometry_invariant(g in isometry(), a in point(), b in point(), c in ideal()) {
        let x = tri_area(a, b, c);
        let y = tri_area(g.apply(a), g.apply(b), g.apply(c));
        prop_assert!((x - y).abs() < 1e-9, "{x} vs {y}");
    }

    #[test]
    fn triangle_area_is_antisymmetric(a in point(), b in point(), c in point()) {
        let x = tri_area(a, b, c);
        let y = tri_area(b, a, c);
        prop_assert!((x + y).abs() <= 8.0 * f64::EPSILON * PI);
        if x != 0.0 {
            prop_assert_eq!(x.signum(), -y.signum());
        }
    }

    #[test]
    fn triangle_area_is_below_pi(a in point(), b in point(), c in ideal(), d in ideal()) {
        prop_assert!(tri_area(a, b, c).abs() < PI);
        prop_assert!(tri_area(a, c, d).abs() < PI);
    }

    #[test]
    fn convex_polygons_have_area_in_range(r in prop::collection::vec(0.2..0.95f64, 3..8),
                                         t in prop::collection::vec(0.0..1.0f64, 3..8)) {
        let m = r.len().min(t.len());
        // increasing angles on a circle give a convex, anticlockwise polygon in Klein
        let mut angles: Vec<f64> = t[..m].iter().map(|x| x * std::f64::consts::TAU).collect();
        angles.sort_by(f64::total_cmp);
        angles.dedup_by(|x, y| (*x - *y).abs() < 1e-3);
        prop_assume!(angles.len() >= 3 && angles[0] + std::f64::consts::TAU - angles[angles.len() - 1] > 1e-3);
        let rad = r[0];
        let vs: Vec<Point> = angles.iter().map(|&a| from_klein(Complex64::from_polar(rad, a))).collect();
        let area = poly_area(&vs).unwrap();
        prop_assert!(area > 0.0 && area < (vs.len() as f64 - 2.0) * PI, "{area}");
        let poly = Polygon::new(vs).unwrap();
        prop_assert!(poly.is_simple().unwrap() && poly.is_convex().unwrap());
    }

    #[test]
    fn ideal_points_land_on_the_circle(b in ideal()) {
        prop_assert!((to_disk(b).norm() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn geodesic_through_i_iff_product_is_minus_one(k in -8i32..8, neg in any::<bool>(), d in 1e-6..1.0f64) {
        // powers of two keep -1/a exact
        let a = if neg { -(2f64.powi(k)) } else { 2f64.powi(k) };
        let g = Geodesic::new(Extended::Real(a), Extended::Real(-1.0 / a)).unwrap();
        prop_assert!(g.passes_through_i());
        let h = Geodesic::new(Extended::Real(a), Extended::Real(-1.0 / a + d)).unwrap();
        prop_assert!(!h.passes_through_i());
    }

    // universal cover

    #[test]
    fn group_law_matches_polar_angle(a in lift(), b in lift()) {
        let ba = compose(&b, &a);
        prop_assert!(wrap_angle(ba.theta - polar_theta(&(b.mat * a.mat))).abs() < 1e-9);
        prop_assert!(wrap_angle(ba.theta - polar_theta(&ba.mat)).abs() < 1e-9);
    }

    #[test]
    fn composition_is_associative(a in lift(), b in lift(), c in lift()) {
        let x = compose(&compose(&c, &b), &a);
        let y = compose(&c, &compose(&b, &a));
        prop_assert!((x.theta - y.theta).abs() < 1e-8);
    }

    #[test]
    fn z_is_central(a in lift(), k in -3i64..=3) {
        let z = LiftedIsometry::z_power(k);
        prop_assert!(lift_eq(&compose(&z, &a), &compose(&a, &z), 1e-9));
    }

    #[test]
    fn quasimorphism_defect_is_below_half_pi(a in lift(), b in lift()) {
        prop_assert!((compose(&b, &a).theta - a.theta - b.theta).abs() < FRAC_PI_2);
    }

    #[test]
    fn theta_lies_in_its_region(a in lift()) {
        if let Ok(r) = classify(&a, PARABOLIC_TOL) {
            let (lo, hi) = r.theta_range();
            prop_assert!(a.theta > lo && a.theta < hi, "{r}: {}", a.theta);
            let t = a.trace();
            match r {
                Region::Hyp(n) => {
                    let signed = if n % 2 == 0 { t } else { -t };
                    prop_assert!(signed > 2.0);
                }
                Region::Par(n, _) => {
                    let target = if n % 2 == 0 { 2.0 } else { -2.0 };
                    prop_assert!((t - target).abs() < 1e-9);
                }
                _ => {}
            }
        }
    }

    #[test]
    fn parabolic_trace_lemma(s in prop_oneof![-3.0..-0.1f64, 0.1..3.0f64], g in isometry(), n in -2i64..=2) {
        let m = g * Isometry::new(1.0, s, 0.0, 1.0).unwrap() * g.inverse();
        let a = LiftedIsometry::lift(m, n);
        if let Ok(Region::Par(k, ch)) = classify(&a, PARABOLIC_TOL) {
            let target = if k % 2 == 0 { 2.0 } else { -2.0 };
            prop_assert!((a.trace() - target).abs() < 1e-9);
            prop_assert!(matches!(ch, Chirality::Plus | Chirality::Minus));
        }
    }

    #[test]
    fn inverse_is_an_involution(a in lift()) {
        let inv = a.inverse();
        prop_assert_eq!(inv.theta, -a.theta);
        prop_assert_eq!(inv.inverse().theta, a.theta);
        prop_assert!(lift_eq(&inv.inverse(), &a, 1e-12));
    }

    // twist

    #[test]
    fn twist_respects_region_bounds(a in lift(), p in point()) {
        if let Ok(r) = classify(&a, PARABOLIC_TOL) {
            let v = twist(&a, p).unwrap();
            prop_assert!(within_bounds(r, v, 1e-9), "{r}: {v}");
        }
    }

    #[test]
    fn twist_lemmas(a in lift(), b in lift(), p in point()) {
        prop_assert!(check_conjugation(&a, &b, p).unwrap().abs() < 1e-8);
        prop_assert!(check_inverse(&a, p).unwrap().abs() < 1e-8);
        prop_assert!(check_addition(&a, &b, p).unwrap().abs() < 1e-8);
        let defect = twist(&compose(&b, &a), p).unwrap() - twist(&a, p).unwrap() - twist(&b, p).unwrap();
        prop_assert!(defect.abs() < PI);
    }

    #[test]
    fn twist_oracles_agree(a in lift(), p in point()) {
        let v = twist(&a, p).unwrap();
        let c = twist_continuation_auto(&a, p, 256).unwrap();
        prop_assert!((v - c).abs() < 1e-6, "{v} vs {c}");
        let m = twist_mod2pi(&a.mat, p).unwrap();
        prop_assert!(wrap_angle(v - m).abs() < 1e-8);
    }

    #[test]
    fn twist_does_not_depend_on_the_conjugator(a in lift(), p in point(), t in -PI..PI) {
        let z = p.expect_finite("p").unwrap();
        let g = Isometry::rotation_about_i(t) * Isometry::to_i(z);
        let v = twist(&a, p).unwrap();
        prop_assert!((twist_with_conjugator(&a, p, &g) - v).abs() < 1e-8);
    }

    #[test]
    fn twist_is_continuous(a in lift(), p in point(), dir in 0.0..std::f64::consts::TAU) {
        let z = p.expect_finite("p").unwrap();
        let q = Point::Finite(z + Complex64::from_polar(1e-7 * z.im, dir));
        let d = distance(p, q).unwrap();
        let diff = (twist(&a, p).unwrap() - twist(&a, q).unwrap()).abs();
        // the Lipschitz constant depends on the element; continuity is what is asserted
        prop_assert!(diff < 1e-4, "difference {diff} over distance {d}");
    }

    // commutators

    #[test]
    fn commutator_ignores_lifts(a in lift(), b in lift(), j in -3i64..=3, k in -3i64..=3) {
        prop_assert!(lift_eq(&commutator(&a.shift(j), &b.shift(k)), &commutator(&a, &b), 1e-9));
    }

    #[test]
    fn commutator_regions_and_traces(a in lift(), b in lift(), p in point()) {
        let c = commutator(&a, &b);
        if let Ok(r) = classify(&c, PARABOLIC_TOL) {
            prop_assert!(allowed_commutator_region(r), "{r}");
        }
        if let Ok(t) = trace_region_corollary(&a, &b, PARABOLIC_TOL) {
            prop_assert!(t.holds);
        }
        prop_assert!(twist(&c, p).unwrap().abs() < 3.0 * PI);
    }

    #[test]
    fn pentagon_identity(a in lift(), b in lift(), p in point()) {
        let r = pentagon(&a, &b, p).unwrap();
        prop_assert!(r.congruence_residual.abs() < 1e-6);
        if r.simple {
            prop_assert!(r.residual.abs() < 1e-6);
        }
    }

    #[test]
    fn goldman_formula(x in 0.05..2.0f64, y in 0.05..2.0f64, r in -0.99..0.99f64) {
        let (a, b) = goldman_pair(x, y, r).unwrap();
        let t = (a * b * a.inverse() * b.inverse()).trace();
        prop_assert!((t - goldman_trace(x, y, r)).abs() < 1e-9);
    }

    #[test]
    fn axes_crossing_criterion(g in isometry(), h in isometry()) {
        if let Ok(e) = axes_crossing_equivalence(&g, &h, PARABOLIC_TOL) {
            prop_assert!(e.consistent, "{e:?}");
        }
    }

    // surfaces

    #[test]
    fn euler_number_is_stable(seed in any::<u64>(), j in -3i64..=3, k in -3i64..=3, s in -3i64..=3) {
        let mut rng = sample::trial_rng(seed, 0);
        let rep = sample::random_rep(&mut rng, 1, 2, None, sample::random_lift).unwrap();
        let e = euler_number(&rep).unwrap();
        prop_assert!(e.theta_residual < 1e-6);
        prop_assert!(e.counting_bound_satisfied && e.bound_satisfied);
        let mut shifted = rep.clone();
        shifted.alphas[0] = shifted.alphas[0].shift(j);
        shifted.betas[0] = shifted.betas[0].shift(k);
        shifted.gammas[1] = shifted.gammas[1].shift(s);
        prop_assert_eq!(euler_number(&shifted).unwrap().m, e.m);
        prop_assert_eq!(euler_number(&rep.with_efficient_gammas().unwrap()).unwrap().m, e.m);
    }

    #[test]
    fn polygon_identities(a in lift(), b in lift(), c in lift(), p in point(), seed in any::<u64>()) {
        let cp = c_polygon(&[a, b, c], p).unwrap();
        if cp.simple {
            prop_assert!(cp.residual.abs() < 1e-7);
        }
        let mut rng = sample::trial_rng(seed, 1);
        let rep = sample::random_rep(&mut rng, 1, 1, Some(hyptwist::hypgeom::I), |r| {
            LiftedIsometry::lift(sample::near_identity(r, 0.5), 0)
        }).unwrap();
        let d = d_polygon(&rep).unwrap();
        prop_assert!(d.decomposition_residual.abs() < 1e-8);
        if d.identity.convex {
            prop_assert!(d.identity.residual.abs() < 1e-6);
        }
    }

    // documents

    #[test]
    fn documents_round_trip(seed in any::<u64>(), g in 0usize..3, n in 1usize..3) {
        let mut rng = sample::trial_rng(seed, 2);
        let rep: SurfaceRep = sample::random_rep(&mut rng, g, n, None, sample::random_lift).unwrap();
        let doc = RepDocument::from_rep(&rep).unwrap();
        let once = RepDocument::parse(&doc.to_json()).unwrap().load().unwrap();
        let twice = RepDocument::parse(&RepDocument::from_rep(&once).unwrap().to_json()).unwrap().load().unwrap();
        let all = |r: &SurfaceRep| r.alphas.iter().chain(&r.betas).chain(&r.gammas).copied().collect::<Vec<_>>();
        for (x, y) in all(&once).iter().zip(all(&twice).iter()) {
            prop_assert!(lift_eq_rel(x, y, 1e-12), "{x:?} vs {y:?}");
        }
        for (x, y) in all(&rep).iter().zip(all(&once).iter()) {
            prop_assert!(lift_eq_rel(x, y, 1e-12), "{x:?} vs {y:?}");
        }
    }
}
