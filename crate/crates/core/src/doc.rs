//! The JSON representation document.
//!
//! ```json
//! {
//!   "genus": 1,
//!   "boundary_count": 1,
//!   "alphas": [{ "mat": [[2.0, 1.0], [1.0, 1.0]] }],
//!   "betas": [{ "mat": [[1.0, 0.5], [0.0, 1.0]], "theta": 0.24497866312686414 }],
//!   "gammas": [{ "mat": [[1.0, 0.0], [0.0, 1.0]] }],
//!   "basepoint": [0.0, 1.0]
//! }
//! ```
//!
//! Matrices are row-major. A generator without `theta` is given its base lift.

use serde::{Deserialize, Serialize};

use crate::cover::LiftedIsometry;
use crate::hypgeom::{Isometry, Point};
use crate::surface::SurfaceRep;
use crate::{Error, Result};

/// Largest `|det - 1|` accepted before normalisation.
pub const LOAD_DET_TOL: f64 = 1e-6;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GeneratorDoc {
    pub mat: [[f64; 2]; 2],
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub theta: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RepDocument {
    pub genus: usize,
    pub boundary_count: usize,
    #[serde(default)]
    pub alphas: Vec<GeneratorDoc>,
    #[serde(default)]
    pub betas: Vec<GeneratorDoc>,
    #[serde(default)]
    pub gammas: Vec<GeneratorDoc>,
    pub basepoint: [f64; 2],
}

impl GeneratorDoc {
    pub fn to_lift(&self) -> Result<LiftedIsometry> {
        let [[a, b], [c, d]] = self.mat;
        let det = a * d - b * c;
        if !det.is_finite() || (det - 1.0).abs() > LOAD_DET_TOL {
            return Err(Error::Determinant { det, tol: LOAD_DET_TOL });
        }
        let m = Isometry::normalized(a, b, c, d)?;
        match self.theta {
            Some(t) => LiftedIsometry::with_theta(m, t),
            None => Ok(LiftedIsometry::lift(m, 0)),
        }
    }

    pub fn from_lift(x: &LiftedIsometry) -> GeneratorDoc {
        GeneratorDoc { mat: x.mat.rows(), theta: Some(x.theta) }
    }
}

impl RepDocument {
    pub fn parse(s: &str) -> Result<RepDocument> {
        serde_json::from_str(s).map_err(|e| Error::InvalidArgument(format!("representation document: {e}")))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("documents serialize")
    }

    pub fn load(&self) -> Result<SurfaceRep> {
        if self.alphas.len() != self.genus || self.betas.len() != self.genus {
            return Err(Error::InvalidArgument(format!(
                "genus {} needs {} alphas and betas, got {} and {}",
                self.genus,
                self.genus,
                self.alphas.len(),
                self.betas.len()
            )));
        }
        if self.gammas.len() != self.boundary_count {
            return Err(Error::InvalidArgument(format!(
                "boundary_count {} but {} gammas",
                self.boundary_count,
                self.gammas.len()
            )));
        }
        let lifts = |gs: &[GeneratorDoc]| gs.iter().map(GeneratorDoc::to_lift).collect::<Result<Vec<_>>>();
        let [x, y] = self.basepoint;
        SurfaceRep::new(lifts(&self.alphas)?, lifts(&self.betas)?, lifts(&self.gammas)?, Point::finite(x, y)?)
    }

    pub fn from_rep(rep: &SurfaceRep) -> Result<RepDocument> {
        let z = rep.basepoint.expect_finite("basepoint")?;
        let docs = |xs: &[LiftedIsometry]| xs.iter().map(GeneratorDoc::from_lift).collect();
        Ok(RepDocument {
            genus: rep.genus,
            boundary_count: rep.boundary_count,
            alphas: docs(&rep.alphas),
            betas: docs(&rep.betas),
            gammas: docs(&rep.gammas),
            basepoint: [z.re, z.im],
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const SAMPLE: &str = r#"{
        "genus": 1,
        "boundary_count": 1,
        "alphas": [{ "mat": [[2.0, 1.0], [1.0, 1.0]] }],
        "betas": [{ "mat": [[1.0, 0.5], [0.0, 1.0]], "theta": 0.24497866312686414 }],
        "gammas": [{ "mat": [[-1.0, 0.0], [0.0, -1.0]], "theta": 3.141592653589793 }],
        "basepoint": [0.0, 1.0]
    }"#;

    #[test]
    fn loads_sample() {
        let rep = RepDocument::parse(SAMPLE).unwrap().load().unwrap();
        assert_eq!(rep.genus, 1);
        assert_eq!(rep.alphas[0], LiftedIsometry::lift(Isometry::new(2.0, 1.0, 1.0, 1.0).unwrap(), 0));
        assert!((rep.betas[0].theta - 0.24497866312686414).abs() < 1e-15);
        assert_eq!(rep.gammas[0].central_power().unwrap(), 1);
    }

    #[test]
    fn round_trip() {
        let rep = RepDocument::parse(SAMPLE).unwrap().load().unwrap();
        let doc = RepDocument::from_rep(&rep).unwrap();
        let again = RepDocument::parse(&doc.to_json()).unwrap().load().unwrap();
        for (x, y) in rep
            .alphas
            .iter()
            .chain(&rep.betas)
            .chain(&rep.gammas)
            .zip(again.alphas.iter().chain(&again.betas).chain(&again.gammas))
        {
            assert!((x.theta - y.theta).abs() <= 1e-12);
            for (u, v) in x.mat.entries().iter().zip(y.mat.entries()) {
                assert!((u - v).abs() <= 1e-12);
            }
        }
    }

    #[test]
    fn rejects_bad_documents() {
        let bad_det = SAMPLE.replace("[[2.0, 1.0], [1.0, 1.0]]", "[[2.0, 1.0], [1.0, 1.1]]");
        assert!(matches!(RepDocument::parse(&bad_det).unwrap().load(), Err(Error::Determinant { .. })));
        let near = SAMPLE.replace("[[2.0, 1.0], [1.0, 1.0]]", "[[2.0000001, 1.0], [1.0, 1.0]]");
        let rep = RepDocument::parse(&near).unwrap().load().unwrap();
        assert!((rep.alphas[0].mat.det() - 1.0).abs() < 1e-14);
        let wrong_theta = SAMPLE.replace("\"theta\": 0.24497866312686414", "\"theta\": 2.0");
        assert!(RepDocument::parse(&wrong_theta).unwrap().load().is_err());
        assert!(RepDocument::parse(&SAMPLE.replace("\"genus\": 1", "\"genus\": 2")).unwrap().load().is_err());
        assert!(RepDocument::parse("{").is_err());
        assert!(RepDocument::parse(&SAMPLE.replace("[0.0, 1.0]", "[0.0, -1.0]")).unwrap().load().is_err());
    }
}
