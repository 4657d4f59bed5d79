//! Seeded invariant sweeps behind `hyptwist verify`.
//!
//! Each suite runs `trials` independent trials, each with its own generator
//! from [`sample::trial_rng`], in parallel. Results are merged in trial
//! order so reports are identical for a fixed seed.

use std::collections::BTreeMap;
use std::f64::consts::PI;

use rand::Rng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;
use serde_json::{json, Value};

use crate::commutator::{
    allowed_commutator_region, axes_crossing_equivalence, commutator, commutator_area_identity, cross_ratio_identity,
    goldman_pair, goldman_trace, pentagon, trace_region_corollary,
};
use crate::cover::{compose, polar_theta, quasimorphism_defect, LiftedIsometry, Region, QUASIMORPHISM_BOUND};
use crate::doc::RepDocument;
use crate::hypgeom::{to_disk, wrap_angle, Extended, Isometry, Point, I};
use crate::sample::{self, trial_rng};
use crate::surface::{c_polygon, d_polygon, milnor_wood_sweep};
use crate::twist::{
    check_addition, check_composition, check_conjugation, check_inverse, check_translation_invariance, twist,
    twist_at_infinity, twist_mod2pi, within_bounds,
};
use crate::{Error, Result, Tolerances};

pub const SUITES: [&str; 14] = [
    "composition",
    "addition",
    "conjugation",
    "inverse",
    "bounds",
    "pentagon",
    "commutator-area",
    "regions",
    "traces",
    "axes",
    "goldman",
    "cpoly",
    "dpoly",
    "milnor-wood",
];

/// `|compose(b, a).theta - polar_theta(ba)|` modulo `2 pi`.
pub const GROUP_LAW_TOL: f64 = 1e-9;
pub const PENTAGON_TOL: f64 = 1e-6;
pub const CROSS_RATIO_TOL: f64 = 1e-7;
pub const C_POLYGON_TOL: f64 = 1e-7;
pub const D_POLYGON_TOL: f64 = 1e-6;
pub const GOLDMAN_TOL: f64 = 1e-9;
/// Tolerance for ideal twists being multiples of `pi`.
pub const IDEAL_TOL: f64 = 1e-6;
/// Scale of the near-identity generators used to find convex fundamental
/// polygons.
pub const D_SEARCH_SCALE: f64 = 0.5;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct VerifyOptions {
    pub trials: usize,
    pub seed: u64,
    pub tol: Tolerances,
    pub genus: usize,
    pub boundary: usize,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        VerifyOptions { trials: 1000, seed: 0, tol: Tolerances::default(), genus: 1, boundary: 1 }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SuiteReport {
    pub suite: String,
    pub trials: usize,
    pub seed: u64,
    pub passed: bool,
    pub checked: usize,
    pub skipped: usize,
    pub violations: usize,
    pub max_residuals: BTreeMap<String, f64>,
    pub counts: BTreeMap<String, usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub details: Option<Value>,
    pub counterexample: Option<Value>,
}

#[derive(Default)]
struct Trial {
    skipped: bool,
    residuals: Vec<(&'static str, f64)>,
    counts: Vec<&'static str>,
    violation: Option<Value>,
}

impl Trial {
    fn skip() -> Trial {
        Trial { skipped: true, ..Trial::default() }
    }

    fn residual(&mut self, name: &'static str, r: f64) {
        self.residuals.push((name, r));
    }

    /// Records `r` and flags a violation if it is not below `tol`.
    fn bound(&mut self, name: &'static str, r: f64, tol: f64, ctx: impl FnOnce() -> Value) {
        self.residual(name, r);
        if (r.is_nan() || r.abs() >= tol) && self.violation.is_none() {
            self.violation = Some(json!({ "check": name, "residual": r, "tolerance": tol, "case": ctx() }));
        }
    }

    fn fail(&mut self, name: &'static str, ctx: impl FnOnce() -> Value) {
        if self.violation.is_none() {
            self.violation = Some(json!({ "check": name, "case": ctx() }));
        }
    }

    fn count(&mut self, name: &'static str) {
        self.counts.push(name);
    }
}

fn run_trials(suite: &str, opts: &VerifyOptions, f: impl Fn(usize, &mut ChaCha8Rng) -> Trial + Sync) -> SuiteReport {
    let trials: Vec<Trial> =
        (0..opts.trials).into_par_iter().map(|t| f(t, &mut trial_rng(opts.seed, t as u64))).collect();
    let mut report = SuiteReport {
        suite: suite.to_string(),
        trials: opts.trials,
        seed: opts.seed,
        passed: true,
        checked: 0,
        skipped: 0,
        violations: 0,
        max_residuals: BTreeMap::new(),
        counts: BTreeMap::new(),
        details: None,
        counterexample: None,
    };
    for (i, t) in trials.into_iter().enumerate() {
        if t.skipped {
            report.skipped += 1;
            continue;
        }
        report.checked += 1;
        for (name, r) in t.residuals {
            let e = report.max_residuals.entry(name.to_string()).or_insert(0.0);
            *e = e.max(r.abs());
        }
        for name in t.counts {
            *report.counts.entry(name.to_string()).or_default() += 1;
        }
        if let Some(v) = t.violation {
            report.violations += 1;
            if report.counterexample.is_none() {
                report.counterexample = Some(json!({ "trial": i, "failure": v }));
            }
        }
    }
    report.passed = report.violations == 0;
    report
}

fn lj(x: &LiftedIsometry) -> Value {
    json!({ "mat": x.mat.rows(), "theta": x.theta })
}

fn pj(p: Point) -> Value {
    match p {
        Point::Finite(z) => json!([z.re, z.im]),
        Point::Ideal(Extended::Real(b)) => json!(format!("ideal:{b}")),
        Point::Ideal(Extended::Infinity) => json!("ideal:inf"),
    }
}

/// Runs the named suite.
pub fn run_suite(name: &str, opts: &VerifyOptions) -> Result<SuiteReport> {
    let tol = opts.tol;
    let res = tol.residual;
    let report = match name {
        "composition" => run_trials(name, opts, |_, rng| {
            let (a, b, p) = (sample::random_lift(rng), sample::random_lift(rng), sample::random_point(rng));
            let mut t = Trial::default();
            let ba = compose(&b, &a);
            let law = wrap_angle(ba.theta - polar_theta(&ba.mat));
            t.bound("group_law", law, GROUP_LAW_TOL, || json!({ "a": lj(&a), "b": lj(&b) }));
            match check_composition(&a, &b, p, tol.parabolic) {
                Ok(r) => t.bound("composition", r, res, || json!({ "a": lj(&a), "b": lj(&b), "p": pj(p) })),
                Err(_) => t.count("composition_skipped"),
            }
            let (x, y) = (sample::spread_lift(rng), sample::spread_lift(rng));
            let d = quasimorphism_defect(&y, &x);
            t.residual("quasimorphism_defect", d);
            if d >= QUASIMORPHISM_BOUND {
                t.fail("quasimorphism_defect", || json!({ "a": lj(&x), "b": lj(&y), "defect": d }));
            }
            t
        }),
        "addition" => run_trials(name, opts, |_, rng| {
            let (a, b, p) = (sample::random_lift(rng), sample::random_lift(rng), sample::random_point(rng));
            let mut t = Trial::default();
            match check_addition(&a, &b, p) {
                Ok(r) => t.bound("addition", r, res, || json!({ "a": lj(&a), "b": lj(&b), "p": pj(p) })),
                Err(_) => return Trial::skip(),
            }
            t
        }),
        "conjugation" => run_trials(name, opts, |_, rng| {
            let (a, b, p) = (sample::random_lift(rng), sample::random_lift(rng), sample::random_point(rng));
            let mut t = Trial::default();
            match check_conjugation(&a, &b, p) {
                Ok(r) => t.bound("conjugation", r, res, || json!({ "a": lj(&a), "b": lj(&b), "p": pj(p) })),
                Err(_) => return Trial::skip(),
            }
            t
        }),
        "inverse" => run_trials(name, opts, |_, rng| {
            let (a, p) = (sample::random_lift(rng), sample::random_point(rng));
            let n = rng.gen_range(-3..=3);
            let mut t = Trial::default();
            let ctx = || json!({ "a": lj(&a), "p": pj(p), "n": n });
            match (check_inverse(&a, p), check_translation_invariance(&a, p, n)) {
                (Ok(r), Ok(s)) => {
                    t.bound("inverse", r, res, ctx);
                    t.bound("central_shift", s, res, ctx);
                }
                _ => return Trial::skip(),
            }
            let id = compose(&a, &a.inverse());
            t.bound("group_inverse", id.theta, GROUP_LAW_TOL, ctx);
            t
        }),
        "bounds" => run_trials(name, opts, |_, rng| bounds_trial(rng, tol)),
        "pentagon" => run_trials(name, opts, |_, rng| {
            let (a, b, p) = (sample::random_lift(rng), sample::random_lift(rng), sample::random_point(rng));
            let ctx = || json!({ "a": lj(&a), "b": lj(&b), "p": pj(p) });
            let mut t = Trial::default();
            let (Ok(pent), Ok(cr)) = (pentagon(&a, &b, p), cross_ratio_identity(&a, &b, p)) else {
                return Trial::skip();
            };
            t.bound("congruence", pent.congruence_residual, PENTAGON_TOL, ctx);
            if pent.simple {
                t.count("simple");
                t.bound("simple_area", pent.residual, PENTAGON_TOL, ctx);
            }
            t.bound("cross_ratio", cr.residual, CROSS_RATIO_TOL, ctx);
            t
        }),
        "commutator-area" => run_trials(name, opts, |_, rng| {
            let (a, b, p) = (sample::random_lift(rng), sample::random_lift(rng), sample::random_point(rng));
            let ctx = || json!({ "a": lj(&a), "b": lj(&b), "p": pj(p) });
            let mut t = Trial::default();
            let (Ok(r), Ok(tw)) = (commutator_area_identity(&a, &b, p, tol.parabolic), twist(&commutator(&a, &b), p))
            else {
                return Trial::skip();
            };
            t.bound("area_identity", r, res, ctx);
            t.residual("abs_twist_over_pi", tw / PI);
            if tw.abs() >= 3.0 * PI {
                t.fail("twist_below_3pi", ctx);
            }
            t
        }),
        "regions" => run_trials(name, opts, |i, rng| {
            let (a, b, family) = if i % 100 == 0 {
                let (x, y) = sample::parabolic_commutator_pair(rng);
                let (n, m) = (rng.gen_range(-2..=2), rng.gen_range(-2..=2));
                (LiftedIsometry::lift(x, n), LiftedIsometry::lift(y, m), "parabolic_family")
            } else {
                (sample::random_lift(rng), sample::random_lift(rng), "generic")
            };
            let c = commutator(&a, &b);
            let Ok(region) = c.classify(tol.parabolic) else {
                return Trial::skip();
            };
            let mut t = Trial::default();
            t.count(family);
            t.count(region_bucket(region));
            match region {
                Region::Hyp(1) => t.count("hyp_plus_one"),
                Region::Hyp(-1) => t.count("hyp_minus_one"),
                _ => {}
            }
            if !allowed_commutator_region(region) {
                t.fail("allowed_region", || json!({ "a": lj(&a), "b": lj(&b), "region": region.to_string() }));
            }
            t
        }),
        "traces" => {
            run_trials(name, opts, |i, rng| {
                let (a, b) = if i % 100 == 0 {
                    let (x, y) = sample::parabolic_commutator_pair(rng);
                    (LiftedIsometry::lift(x, 0), LiftedIsometry::lift(y, 0))
                } else {
                    (sample::random_lift(rng), sample::random_lift(rng))
                };
                let Ok(check) = trace_region_corollary(&a, &b, tol.parabolic) else {
                    return Trial::skip();
                };
                let mut t = Trial::default();
                t.count(region_bucket(check.region));
                if !check.holds {
                    t.fail("trace_table", || json!({ "a": lj(&a), "b": lj(&b), "region": check.region.to_string(), "trace": check.trace }));
                }
                t
            })
        }
        "axes" => run_trials(name, opts, |_, rng| {
            let (g, h, family) = mixed_pair(rng);
            let Ok(eq) = axes_crossing_equivalence(&g, &h, tol.parabolic) else {
                return Trial::skip();
            };
            let mut t = Trial::default();
            t.count(family);
            if eq.crossing {
                t.count("crossing");
            }
            if !eq.consistent {
                t.fail("axes_equivalence", || {
                    json!({ "g": g.rows(), "h": h.rows(), "crossing": eq.crossing, "region": eq.region.to_string(), "trace": eq.trace })
                });
            }
            t
        }),
        "goldman" => goldman_grid(20),
        "cpoly" => run_trials(name, opts, |_, rng| {
            let cs = [sample::random_lift(rng), sample::random_lift(rng), sample::random_lift(rng)];
            let p = sample::random_point(rng);
            let Ok(c) = c_polygon(&cs, p) else {
                return Trial::skip();
            };
            let mut t = Trial::default();
            t.residual("all_instances", c.residual);
            if c.simple {
                t.count("simple");
                t.bound(
                    "simple",
                    c.residual,
                    C_POLYGON_TOL,
                    || json!({ "gammas": cs.iter().map(lj).collect::<Vec<_>>(), "p": pj(p) }),
                );
            }
            t
        }),
        "dpoly" => {
            let (g, n) = (opts.genus, opts.boundary);
            if n == 0 || (g == 0 && n < 3) {
                return Err(Error::InvalidArgument(format!(
                    "dpoly needs n >= 1 and g >= 1 or n >= 3, got g={g}, n={n}"
                )));
            }
            run_trials(name, opts, move |_, rng| {
                let Ok(rep) = sample::random_rep(rng, g, n, Some(I), |r| {
                    LiftedIsometry::lift(sample::near_identity(r, D_SEARCH_SCALE), 0)
                }) else {
                    return Trial::skip();
                };
                let Ok(d) = d_polygon(&rep) else {
                    return Trial::skip();
                };
                let ctx = || json!(RepDocument::from_rep(&rep).ok());
                let mut t = Trial::default();
                t.bound("decomposition", d.decomposition_residual, res, ctx);
                t.residual("all_instances", d.identity.residual);
                if d.identity.convex {
                    t.count("convex");
                    t.bound("convex", d.identity.residual, D_POLYGON_TOL, ctx);
                }
                t
            })
        }
        "milnor-wood" => {
            let mw = milnor_wood_sweep(opts.genus, opts.boundary, opts.trials, opts.seed)?;
            SuiteReport {
                suite: name.to_string(),
                trials: mw.trials,
                seed: mw.seed,
                passed: mw.passed(),
                checked: mw.trials - mw.failures,
                skipped: 0,
                violations: mw.violations + mw.counting_violations + mw.failures,
                max_residuals: BTreeMap::from([
                    ("theta_residual".to_string(), mw.max_theta_residual),
                    ("theta_over_counting_bound".to_string(), mw.max_theta_ratio),
                ]),
                counts: BTreeMap::new(),
                details: Some(json!({
                    "genus": mw.genus,
                    "boundary_count": mw.boundary_count,
                    "chi": mw.chi,
                    "max_abs_m": mw.max_abs_m,
                    "histogram": mw.histogram,
                })),
                counterexample: mw.counterexample.map(|d| json!(d)),
            }
        }
        other => return Err(Error::InvalidArgument(format!("unknown suite `{other}`"))),
    };
    Ok(report)
}

fn region_bucket(r: Region) -> &'static str {
    match r {
        Region::Hyp(_) => "hyperbolic",
        Region::Par(..) => "parabolic",
        Region::Ell(_) => "elliptic",
        Region::CentralPower(_) => "central",
    }
}

/// Hyperbolic pairs, Goldman pairs with crossing axes, and arbitrary pairs.
fn mixed_pair(rng: &mut ChaCha8Rng) -> (Isometry, Isometry, &'static str) {
    match rng.gen_range(0..3) {
        0 => (sample::random_isometry(rng), sample::random_isometry(rng), "arbitrary"),
        1 => {
            let mut hyp = || loop {
                let m = sample::random_isometry(rng);
                if m.trace().abs() > 2.0 {
                    break m;
                }
            };
            (hyp(), hyp(), "hyperbolic")
        }
        _ => {
            let (x, y, r) = (rng.gen_range(0.1..2.0), rng.gen_range(0.1..2.0), rng.gen_range(-0.95..0.95));
            let (a, b) = goldman_pair(x, y, r).expect("|r| < 1");
            let g = sample::random_isometry(rng);
            (g * a * g.inverse(), g * b * g.inverse(), "goldman")
        }
    }
}

fn bounds_trial(rng: &mut ChaCha8Rng, tol: Tolerances) -> Trial {
    let a = sample::random_lift(rng);
    let Ok(region) = a.classify(tol.parabolic) else {
        return Trial::skip();
    };
    let mut t = Trial::default();
    t.count(region_bucket(region));
    for _ in 0..10 {
        let p = sample::random_point(rng);
        let Ok(v) = twist(&a, p) else { continue };
        if !within_bounds(region, v, 1e-9) {
            t.fail("twist_bounds", || json!({ "a": lj(&a), "p": pj(p), "twist": v, "region": region.to_string() }));
        }
        if let Ok(m) = twist_mod2pi(&a.mat, p) {
            t.bound("mod2pi_oracle", wrap_angle(v - m), 1e-8, || json!({ "a": lj(&a), "p": pj(p) }));
        }
    }
    let fixed: Vec<Point> = a.mat.fixed_points(tol.parabolic);
    for _ in 0..10 {
        let b = sample::random_ideal_point(rng);
        let Ok(v) = twist_at_infinity(&a, b, tol.parabolic) else {
            t.count("ideal_ambiguous");
            continue;
        };
        let k = (v / PI).round();
        let ctx = || json!({ "a": lj(&a), "point": pj(b), "twist": v, "region": region.to_string() });
        t.bound("ideal_multiple_of_pi", v - k * PI, IDEAL_TOL, ctx);
        let (lo, hi) = region.twist_range();
        if v < lo - IDEAL_TOL || v > hi + IDEAL_TOL {
            t.fail("ideal_range", ctx);
        }
        // away from fixed points the ideal value is the limit of finite twists
        let far = fixed.iter().all(|f| (to_disk(*f) - to_disk(b)).norm() > 1e-2);
        if far {
            if let Some(q) = approach(b) {
                if let Ok(w) = twist(&a, q) {
                    t.bound("ideal_limit", w - v, 1e-3, ctx);
                }
            }
        }
    }
    t
}

/// A finite point close to the ideal point `b`.
fn approach(b: Point) -> Option<Point> {
    match b {
        Point::Ideal(Extended::Real(x)) => Point::finite(x, 1e-10).ok(),
        Point::Ideal(Extended::Infinity) => Point::finite(0.0, 1e10).ok(),
        Point::Finite(_) => None,
    }
}

fn goldman_grid(n: usize) -> SuiteReport {
    let step = |lo: f64, hi: f64, k: usize| lo + (hi - lo) * k as f64 / (n - 1) as f64;
    let mut report = SuiteReport {
        suite: "goldman".to_string(),
        trials: n * n * n,
        seed: 0,
        passed: true,
        checked: 0,
        skipped: 0,
        violations: 0,
        max_residuals: BTreeMap::new(),
        counts: BTreeMap::new(),
        details: Some(json!({ "x": [0.1, 2.0], "y": [0.1, 2.0], "r": [-0.95, 0.95], "points_per_axis": n })),
        counterexample: None,
    };
    let mut worst = 0.0f64;
    for i in 0..n {
        for j in 0..n {
            for k in 0..n {
                let (x, y, r) = (step(0.1, 2.0, i), step(0.1, 2.0, j), step(-0.95, 0.95, k));
                report.checked += 1;
                let Ok((a, b)) = goldman_pair(x, y, r) else {
                    report.violations += 1;
                    continue;
                };
                let tr = (a * b * a.inverse() * b.inverse()).trace();
                let d = (tr - goldman_trace(x, y, r)).abs();
                worst = worst.max(d);
                if d.is_nan() || d >= GOLDMAN_TOL {
                    report.violations += 1;
                    if report.counterexample.is_none() {
                        report.counterexample = Some(json!({ "x": x, "y": y, "r": r, "trace": tr, "residual": d }));
                    }
                }
            }
        }
    }
    report.max_residuals.insert("trace_formula".to_string(), worst);
    report.passed = report.violations == 0;
    report
}

/// Largest quasimorphism defect over `trials` spread pairs.
pub fn quasimorphism_sup(trials: usize, seed: u64) -> f64 {
    (0..trials)
        .into_par_iter()
        .map(|t| {
            let mut rng = trial_rng(seed, t as u64);
            let (a, b) = (sample::spread_lift(&mut rng), sample::spread_lift(&mut rng));
            quasimorphism_defect(&b, &a)
        })
        .reduce(|| 0.0, f64::max)
}
