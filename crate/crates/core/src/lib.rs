//! Lift zonoids in finite dimension.
//!
//! Support functions of zonoids, lift zonoids and zonoid α-trimmed regions,
//! zonoid data depth by linear programming, the half-space barycentric
//! representation of interior points, and closed forms for Gaussian
//! measures.

pub mod barycentric;
pub mod cli;
pub mod config;
pub mod depth;
pub mod error;
pub mod gaussian;
pub mod io;
pub mod measures;
pub mod rng;
pub mod verify;
pub mod zonoid;

pub use config::Tolerances;
pub use error::{Error, Result};
pub use measures::{
    Direction, EmpiricalMeasure, GaussianMeasure, HalfSpace, Measure, ProjectionLaw, Vector,
};
