//! Numeric tolerances shared by every module.
//!
//! Property tests and the verification harness read their thresholds from
//! [`Tolerances::DEFAULT`] so there is a single place to change them.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Tolerances {
    /// Allowed deviation of a direction from unit length.
    pub unit_norm: f64,
    /// Mass / quantile round trip accuracy.
    pub mass_roundtrip: f64,
    /// Relative gap under which two projections count as tied.
    pub tie: f64,
    /// LP objective below which a point is declared outside the hull.
    pub lp_feasibility: f64,
    /// Reduced-cost threshold for optimality in the simplex pricing step.
    pub lp_optimality: f64,
    /// Reduced costs (or basic slacks) this close to zero flag dual degeneracy.
    pub dual_degenerate: f64,
    /// Pivoted-QR rank threshold, relative to the largest column norm.
    pub rank: f64,
    /// Distance to the mean under which a point is treated as the mean.
    pub mean_point: f64,
    /// Relative residual accepted by the half-space representation solver.
    pub represent_residual: f64,
    /// Depth below which representation reports `OutsideSupport`.
    pub min_alpha: f64,
}

impl Tolerances {
    pub const DEFAULT: Tolerances = Tolerances {
        unit_norm: 1e-12,
        mass_roundtrip: 1e-10,
        tie: 1e-12,
        lp_feasibility: 1e-9,
        lp_optimality: 1e-11,
        dual_degenerate: 1e-9,
        rank: 1e-10,
        mean_point: 1e-10,
        represent_residual: 1e-8,
        min_alpha: 1e-6,
    };

    /// Applies a `key=value` override, as accepted on the command line.
    pub fn set(&mut self, key: &str, value: f64) -> Result<()> {
        if !(value.is_finite() && value >= 0.0) {
            return Err(Error::Input(format!(
                "tolerance {key} must be a finite non-negative number"
            )));
        }
        let slot = match key {
            "unit_norm" => &mut self.unit_norm,
            "mass_roundtrip" => &mut self.mass_roundtrip,
            "tie" => &mut self.tie,
            "lp_feasibility" => &mut self.lp_feasibility,
            "lp_optimality" => &mut self.lp_optimality,
            "dual_degenerate" => &mut self.dual_degenerate,
            "rank" => &mut self.rank,
            "mean_point" => &mut self.mean_point,
            "represent_residual" => &mut self.represent_residual,
            "min_alpha" => &mut self.min_alpha,
            _ => return Err(Error::Input(format!("unknown tolerance `{key}`"))),
        };
        *slot = value;
        Ok(())
    }
}

impl Default for Tolerances {
    fn default() -> Self {
        Self::DEFAULT
    }
}
