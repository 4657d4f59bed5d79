//! Twist of elements of the universal cover of `PSL(2,R)` at points of the
//! hyperbolic plane.
//!
//! The crate is organised bottom-up:
//!
//! * [`hypgeom`]: upper half-plane points, isometries, geodesics, signed
//!   areas, polygon predicates and the disk model used for rendering.
//! * [`cover`]: lifted isometries (signed matrix plus Milnor's angle), the
//!   group law, and classification into the regions `Hyp_n`, `Par_n^±`,
//!   `Ell_n` and the central powers `z^n`.
//! * [`twist`]: the twist function in closed form plus two independent
//!   evaluators (geometric mod 2π and path continuation).
//! * [`commutator`]: commutator pentagons, the commutator area formula,
//!   the region theorem and Goldman's axes-crossing criterion.
//! * [`surface`]: relator products, efficient boundary lifts, Euler numbers
//!   and the polygon identities for surface relators.
//! * [`verify`], [`doc`], [`render`]: sweeps, JSON documents and SVG output
//!   used by the `hyptwist` binary.

pub mod commutator;
pub mod cover;
pub mod doc;
mod error;
pub mod hypgeom;
pub mod render;
pub mod sample;
pub mod surface;
pub mod twist;
pub mod verify;

pub use cover::{LiftedIsometry, Region};
pub use error::{Error, Result};
pub use hypgeom::{Extended, Geodesic, Isometry, Point, Polygon};

/// Numeric tolerances shared by classification and the identity checks.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct Tolerances {
    /// `||trace| - 2|` below this is parabolic.
    pub parabolic: f64,
    /// Residual bound for the exact lemma identities.
    pub residual: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances { parabolic: cover::PARABOLIC_TOL, residual: 1e-8 }
    }
}
