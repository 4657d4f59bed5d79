//! Seeded random samplers for isometries, lifts, points and surface
//! representations.
//!
//! Every sweep derives one generator per trial from `(seed, trial)` so
//! results do not depend on how trials are scheduled across threads.

use std::f64::consts::PI;

use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::commutator::commutator;
use crate::cover::LiftedIsometry;
use crate::hypgeom::{Isometry, Point};
use crate::surface::{closing_gamma, partial_relator, SurfaceRep};
use crate::Result;

/// Frobenius norm above which sampled matrices are rejected.
pub const NORM_CAP: f64 = 10.0;
/// `||trace| - 2|` below this is rejected by [`random_isometry`].
pub const PARABOLIC_GAP: f64 = 1e-6;
/// Frobenius norm above which a relator prefix is resampled.
pub const RELATOR_NORM_CAP: f64 = 1e3;

fn splitmix64(mut x: u64) -> u64 {
    x = x.wrapping_add(0x9e37_79b9_7f4a_7c15);
    x = (x ^ (x >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    x = (x ^ (x >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    x ^ (x >> 31)
}

/// The generator for one trial of a seeded sweep.
pub fn trial_rng(seed: u64, trial: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed ^ splitmix64(trial))
}

fn normal<R: Rng + ?Sized>(rng: &mut R) -> f64 {
    rng.sample(StandardNormal)
}

pub fn frobenius(m: &Isometry) -> f64 {
    m.entries().iter().map(|x| x * x).sum::<f64>().sqrt()
}

/// Gaussian entries normalised to determinant 1, rejecting near-parabolic
/// and badly conditioned matrices.
pub fn random_isometry<R: Rng + ?Sized>(rng: &mut R) -> Isometry {
    loop {
        let [mut a, mut b, c, d] = [normal(rng), normal(rng), normal(rng), normal(rng)];
        let det = a * d - b * c;
        if det.abs() < 1e-3 {
            continue;
        }
        if det < 0.0 {
            a = -a;
            b = -b;
        }
        let Ok(m) = Isometry::normalized(a, b, c, d) else { continue };
        if (m.trace().abs() - 2.0).abs() < PARABOLIC_GAP || frobenius(&m) > NORM_CAP {
            continue;
        }
        return m;
    }
}

/// A random lift of a random isometry, on a sheet between `-2` and `2`.
pub fn random_lift<R: Rng + ?Sized>(rng: &mut R) -> LiftedIsometry {
    let m = random_isometry(rng);
    LiftedIsometry::lift(m, rng.gen_range(-2..=2))
}

/// `x ~ N(0,1)`, `y = exp(N(0,1))`.
pub fn random_point<R: Rng + ?Sized>(rng: &mut R) -> Point {
    let x = normal(rng);
    let y = normal(rng).exp();
    Point::finite(x, y).expect("positive imaginary part")
}

pub fn random_ideal_point<R: Rng + ?Sized>(rng: &mut R) -> Point {
    if rng.gen_bool(0.05) {
        crate::hypgeom::INFINITY
    } else {
        Point::ideal(2.0 * normal(rng))
    }
}

/// Isometries with widely spread translation lengths and rotation angles,
/// lifted to a random sheet; used to probe how close the quasimorphism
/// defect gets to its bound.
pub fn spread_lift<R: Rng + ?Sized>(rng: &mut R) -> LiftedIsometry {
    let m = random_isometry(rng);
    let s = (2.0 * normal(rng)).exp().sqrt();
    let d = Isometry::new(s, 0.0, 0.0, 1.0 / s).expect("diagonal");
    let m = d * m * d.inverse();
    LiftedIsometry::lift(m, rng.gen_range(-1..=1))
}

/// A conjugate of `z -> z + t` (trace `2`) or its negative (trace `-2`).
pub fn random_parabolic<R: Rng + ?Sized>(rng: &mut R) -> Isometry {
    let t = if rng.gen_bool(0.5) { 1.0 } else { -1.0 } * normal(rng).exp();
    let base = Isometry::new(1.0, t, 0.0, 1.0).expect("unipotent");
    let g = random_isometry(rng);
    let m = g * base * g.inverse();
    if rng.gen_bool(0.5) {
        -m
    } else {
        m
    }
}

/// `exp(X)` for a traceless `X` with Gaussian entries of the given scale.
pub fn near_identity<R: Rng + ?Sized>(rng: &mut R, scale: f64) -> Isometry {
    let (x0, x1, x2) = (scale * normal(rng), scale * normal(rng), scale * normal(rng));
    let (a, b, c) = (x0, x1 + x2, x1 - x2);
    let delta = x0 * x0 + x1 * x1 - x2 * x2;
    let (ch, sh) = if delta > 1e-14 {
        let r = delta.sqrt();
        (r.cosh(), r.sinh() / r)
    } else if delta < -1e-14 {
        let r = (-delta).sqrt();
        (r.cos(), r.sin() / r)
    } else {
        (1.0, 1.0)
    };
    Isometry::normalized(ch + sh * a, sh * b, sh * c, ch - sh * a).expect("exponential is invertible")
}

/// A closed-up representation of the `(g, n)` surface group with random
/// handle generators and gammas, the last gamma closing the relator with its
/// efficient lift at `basepoint` (random when `None`). Prefixes with
/// Frobenius norm above [`RELATOR_NORM_CAP`] are resampled.
pub fn random_rep<R: Rng + ?Sized>(
    rng: &mut R,
    genus: usize,
    boundary: usize,
    basepoint: Option<Point>,
    mut gen: impl FnMut(&mut R) -> LiftedIsometry,
) -> Result<SurfaceRep> {
    assert!(boundary >= 1, "the closing element needs a boundary component");
    loop {
        let alphas: Vec<_> = (0..genus).map(|_| gen(rng)).collect();
        let betas: Vec<_> = (0..genus).map(|_| gen(rng)).collect();
        let mut gammas: Vec<_> = (0..boundary - 1).map(|_| gen(rng)).collect();
        let comms: Vec<_> = alphas.iter().zip(&betas).map(|(a, b)| commutator(a, b)).collect();
        let prefix = partial_relator(&comms, &gammas);
        if frobenius(&prefix.mat) > RELATOR_NORM_CAP {
            continue;
        }
        let p = basepoint.unwrap_or_else(|| random_point(rng));
        gammas.push(closing_gamma(&prefix, p)?);
        return SurfaceRep::new(alphas, betas, gammas, p);
    }
}

/// A pair whose commutator is parabolic by construction: either two
/// isometries with a common ideal fixed point (commutator of trace `2`) or a
/// Goldman pair with `(1 - r²) sinh²x sinh²y = 1` (trace `-2`), conjugated
/// by a random isometry.
pub fn parabolic_commutator_pair<R: Rng + ?Sized>(rng: &mut R) -> (Isometry, Isometry) {
    let (a, b) = if rng.gen_bool(0.5) {
        let (l, m) = (normal(rng).exp(), normal(rng).exp());
        (
            Isometry::new(l, normal(rng), 0.0, 1.0 / l).expect("upper triangular"),
            Isometry::new(m, normal(rng), 0.0, 1.0 / m).expect("upper triangular"),
        )
    } else {
        loop {
            let (x, y) = (rng.gen_range(0.3..2.0f64), rng.gen_range(0.3..2.0f64));
            let s = x.sinh() * y.sinh();
            if s < 1.05 {
                continue;
            }
            let r = (1.0 - 1.0 / (s * s)).sqrt() * if rng.gen_bool(0.5) { 1.0 } else { -1.0 };
            break crate::commutator::goldman_pair(x, y, r).expect("|r| < 1");
        }
    };
    let g = random_isometry(rng);
    (g * a * g.inverse(), g * b * g.inverse())
}

/// A random rotation angle in `(-pi, pi]` for lifts of elliptic elements.
pub fn random_angle<R: Rng + ?Sized>(rng: &mut R) -> f64 {
    rng.gen_range(-PI..PI)
}
