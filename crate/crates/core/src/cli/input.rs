use std::path::Path;

use hyptwist::commutator::goldman_pair;
use hyptwist::doc::{RepDocument, LOAD_DET_TOL};
use hyptwist::{Error, Isometry, LiftedIsometry, Point, Result};
use serde_json::{json, Value};

use super::{LiftArgs, PairArgs};

/// Parses `a,b,c,d`, rejecting determinants further than the document
/// tolerance from 1.
pub fn matrix(s: &str) -> Result<Isometry> {
    let v: Vec<f64> = s
        .split(',')
        .map(|t| t.trim().parse::<f64>())
        .collect::<std::result::Result<_, _>>()
        .map_err(|e| Error::InvalidMatrix(format!("{s:?}: {e}")))?;
    let [a, b, c, d] = v[..] else {
        return Err(Error::InvalidMatrix(format!("expected 4 entries, got {}", v.len())));
    };
    let det = a * d - b * c;
    if !det.is_finite() || (det - 1.0).abs() > LOAD_DET_TOL {
        return Err(Error::Determinant { det, tol: LOAD_DET_TOL });
    }
    Isometry::normalized(a, b, c, d)
}

fn with_theta(m: Isometry, theta: Option<f64>) -> Result<LiftedIsometry> {
    match theta {
        Some(t) if !t.is_finite() => Err(Error::InvalidArgument(format!("theta {t} is not finite"))),
        Some(t) => LiftedIsometry::with_theta(m, t),
        None => Ok(LiftedIsometry::lift(m, 0)),
    }
}

/// Parses `a,b,c,d` or `a,b,c,d:theta`.
pub fn lift(s: &str) -> Result<LiftedIsometry> {
    match s.split_once(':') {
        Some((m, t)) => {
            let t: f64 =
                t.trim().parse().map_err(|_| Error::InvalidArgument(format!("cannot parse theta in {s:?}")))?;
            with_theta(matrix(m)?, Some(t))
        }
        None => with_theta(matrix(s)?, None),
    }
}

pub fn lift_args(l: &LiftArgs) -> Result<LiftedIsometry> {
    let m = l.mat.as_deref().ok_or_else(|| Error::InvalidArgument("--mat is required".into()))?;
    with_theta(matrix(m)?, l.theta)
}

pub fn goldman(s: &str) -> Result<(f64, f64, f64)> {
    let v: Vec<f64> = s
        .split(',')
        .map(|t| t.trim().parse::<f64>())
        .collect::<std::result::Result<_, _>>()
        .map_err(|e| Error::InvalidArgument(format!("--goldman {s:?}: {e}")))?;
    match v[..] {
        [x, y, r] => Ok((x, y, r)),
        _ => Err(Error::InvalidArgument(format!("--goldman expects x,y,r, got {s:?}"))),
    }
}

/// The pair and a JSON description of how it was given.
pub fn pair(p: &PairArgs) -> Result<(LiftedIsometry, LiftedIsometry, Value)> {
    match (&p.a, &p.b, &p.goldman) {
        (Some(a), Some(b), None) => Ok((lift(a)?, lift(b)?, json!({ "a": a, "b": b }))),
        (None, None, Some(g)) => {
            let (x, y, r) = goldman(g)?;
            let (a, b) = goldman_pair(x, y, r)?;
            Ok((LiftedIsometry::lift(a, 0), LiftedIsometry::lift(b, 0), json!({ "goldman": [x, y, r] })))
        }
        _ => Err(Error::InvalidArgument("give either --a and --b, or --goldman x,y,r".into())),
    }
}

pub fn point(s: &str) -> Result<Point> {
    Point::parse(s)
}

pub fn document(path: &Path) -> Result<RepDocument> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Error::InvalidArgument(format!("cannot read {}: {e}", path.display())))?;
    RepDocument::parse(&text)
}

pub fn lift_json(x: &LiftedIsometry) -> Value {
    json!({ "mat": x.mat.rows(), "theta": x.theta })
}

pub fn point_json(p: Point) -> Value {
    match p {
        Point::Finite(z) => json!([z.re, z.im]),
        Point::Ideal(b) => json!(format!("ideal:{b}")),
    }
}
