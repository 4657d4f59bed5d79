use std::fmt;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::{Error, Result};

/// A point of the extended real line, i.e. of the boundary circle in
/// half-plane coordinates.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum Extended {
    Real(f64),
    Infinity,
}

impl Extended {
    pub fn is_infinite(self) -> bool {
        matches!(self, Extended::Infinity)
    }

    pub fn real(self) -> Option<f64> {
        match self {
            Extended::Real(b) => Some(b),
            Extended::Infinity => None,
        }
    }
}

impl fmt::Display for Extended {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Extended::Real(b) => write!(f, "{b}"),
            Extended::Infinity => write!(f, "inf"),
        }
    }
}

/// A point of the closed upper half-plane: either an interior point with
/// positive imaginary part or an ideal point.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum Point {
    Finite(Complex64),
    Ideal(Extended),
}

pub const I: Point = Point::Finite(Complex64 { re: 0.0, im: 1.0 });
pub const INFINITY: Point = Point::Ideal(Extended::Infinity);

impl Point {
    pub fn finite(x: f64, y: f64) -> Result<Point> {
        if !(x.is_finite() && y.is_finite()) || y <= 0.0 {
            return Err(Error::InvalidPoint(format!("({x}, {y}) is not in the upper half-plane")));
        }
        Ok(Point::Finite(Complex64::new(x, y)))
    }

    pub fn ideal(b: f64) -> Point {
        if b.is_finite() {
            Point::Ideal(Extended::Real(b))
        } else {
            INFINITY
        }
    }

    pub fn is_finite(&self) -> bool {
        matches!(self, Point::Finite(_))
    }

    pub fn is_ideal(&self) -> bool {
        !self.is_finite()
    }

    /// The complex coordinate of a finite point, or an error naming `what`.
    pub fn expect_finite(&self, what: &str) -> Result<Complex64> {
        match *self {
            Point::Finite(z) => Ok(z),
            Point::Ideal(_) => Err(Error::IdealPoint(format!("{what} = {self}"))),
        }
    }

    pub fn expect_ideal(&self, what: &str) -> Result<Extended> {
        match *self {
            Point::Ideal(b) => Ok(b),
            Point::Finite(_) => Err(Error::FinitePoint(format!("{what} = {self}"))),
        }
    }

    /// Parses `x,y`, `ideal:b` or `ideal:inf`.
    pub fn parse(s: &str) -> Result<Point> {
        let s = s.trim();
        if let Some(rest) = s.strip_prefix("ideal:") {
            let rest = rest.trim();
            if matches!(rest, "inf" | "infinity" | "∞") {
                return Ok(INFINITY);
            }
            let b: f64 = rest.parse().map_err(|_| Error::InvalidPoint(format!("cannot parse ideal point {s:?}")))?;
            if !b.is_finite() {
                return Err(Error::InvalidPoint(format!("cannot parse ideal point {s:?}")));
            }
            return Ok(Point::ideal(b));
        }
        let parts: Vec<&str> = s.split(',').map(str::trim).collect();
        if parts.len() != 2 {
            return Err(Error::InvalidPoint(format!("expected x,y or ideal:b, got {s:?}")));
        }
        let parse =
            |t: &str| t.parse::<f64>().map_err(|_| Error::InvalidPoint(format!("cannot parse coordinate {t:?}")));
        Point::finite(parse(parts[0])?, parse(parts[1])?)
    }
}

impl fmt::Display for Point {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Point::Finite(z) => write!(f, "{}+{}i", z.re, z.im),
            Point::Ideal(b) => write!(f, "ideal:{b}"),
        }
    }
}

impl From<Complex64> for Point {
    fn from(z: Complex64) -> Self {
        Point::Finite(z)
    }
}
