//! Zonoid data depth of a point with respect to a weighted point cloud.
//!
//! With `v_i = γ_i / t` the depth program `min t` subject to
//! `Σ γ_i x_i = x`, `Σ γ_i = 1`, `0 ≤ γ_i ≤ t w_i` becomes the bounded
//! program
//!
//! ```text
//! max Σ v_i   subject to   Σ v_i (x_i - x) = 0,   0 ≤ v_i ≤ w_i,
//! ```
//!
//! whose optimum is the depth `α(x)`. The row duals `y` give the outer
//! normal `u = -y/‖y‖` of `D_α(x)` at `x`, and `⟨x,u⟩ - 1/‖y‖` is the
//! projection level of the marginal atoms.

mod oracle;
pub mod simplex;

pub use oracle::depth_bruteforce_oracle;

use nalgebra::{DMatrix, DVector};
use serde::Serialize;

use crate::config::Tolerances;
use crate::error::{Error, Result};
use crate::measures::{check_dim, Direction, EmpiricalMeasure, Vector};
use simplex::{BoundedLp, LpOutcome};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum DepthStatus {
    /// Interior of the convex hull of the atoms.
    Interior,
    /// On the boundary of the convex hull.
    Boundary,
    Outside,
    Mean,
}

#[derive(Debug, Clone, PartialEq)]
pub struct DepthCertificate {
    pub depth: f64,
    /// Normalized inclusion profile `γ` with `Σ γ_i x_i = x`, `Σ γ_i = 1`.
    pub atom_weights: Vec<f64>,
    pub dual_direction: Option<Direction>,
    pub status: DepthStatus,
    pub iterations: usize,
    pub dual_degenerate: bool,
    /// Projection level `a` of the marginal atoms along the dual direction.
    pub threshold: Option<f64>,
    pub primal_objective: f64,
    pub dual_objective: f64,
}

impl DepthCertificate {
    /// `max_i γ_i / w_i`, the optimal `t` of the original program.
    pub fn max_weight_ratio(&self) -> f64 {
        if self.depth > 0.0 {
            1.0 / self.depth
        } else {
            f64::INFINITY
        }
    }

    pub fn to_json(&self) -> CertificateJson {
        CertificateJson {
            depth: self.depth,
            status: self.status,
            dual_direction: self
                .dual_direction
                .as_ref()
                .map(|u| u.as_vector().as_slice().to_vec()),
            max_weight_ratio: (self.depth > 0.0).then(|| self.depth.recip()),
            iterations: self.iterations,
            dual_degenerate: self.dual_degenerate,
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct CertificateJson {
    pub depth: f64,
    pub status: DepthStatus,
    pub dual_direction: Option<Vec<f64>>,
    /// Absent for points outside the hull.
    pub max_weight_ratio: Option<f64>,
    pub iterations: usize,
    pub dual_degenerate: bool,
}

/// Depth queries against one measure; the rank check runs once.
#[derive(Debug, Clone)]
pub struct DepthSolver<'a> {
    measure: &'a EmpiricalMeasure,
    mean: Vector,
    scale: f64,
    tol: Tolerances,
}

impl<'a> DepthSolver<'a> {
    pub fn new(measure: &'a EmpiricalMeasure, tol: Tolerances) -> Result<Self> {
        let d = measure.dim();
        let rank = measure.affine_rank(tol.rank);
        if rank < d {
            return Err(Error::Degenerate(format!(
                "atoms span an affine subspace of dimension {rank} < {d}"
            )));
        }
        let scale = measure.atoms().amax().max(f64::MIN_POSITIVE);
        Ok(DepthSolver {
            measure,
            mean: measure.mean(),
            scale,
            tol,
        })
    }

    pub fn measure(&self) -> &EmpiricalMeasure {
        self.measure
    }

    fn solve_lp(&self, x: &Vector) -> Result<(simplex::LpSolution, f64)> {
        let atoms = self.measure.atoms();
        let mut a = DMatrix::zeros(atoms.nrows(), atoms.ncols());
        for (j, col) in atoms.column_iter().enumerate() {
            a.set_column(j, &(col - x));
        }
        let s = a.amax();
        let s = if s > 0.0 { 1.0 / s } else { 1.0 };
        let lp = BoundedLp {
            a: a * s,
            b: DVector::zeros(atoms.nrows()),
            cost: vec![1.0; atoms.ncols()],
            upper: self.measure.weights().to_vec(),
        };
        match simplex::solve(
            &lp,
            self.tol.lp_optimality,
            self.tol.lp_feasibility,
            self.tol.dual_degenerate,
        )? {
            LpOutcome::Optimal(sol) => Ok((sol, s)),
            // v = 0 is always feasible
            LpOutcome::Infeasible { .. } => {
                Err(Error::Lp("depth program reported infeasible".into()))
            }
        }
    }

    /// Whether `x` sits on the boundary of the convex hull: pushing it a
    /// hair away from the mean leaves the hull.
    fn on_hull_boundary(&self, x: &Vector) -> Result<bool> {
        let off = x - &self.mean;
        let push = 1e-8 * self.scale;
        let pushed = x + &off * (push / off.norm());
        let (sol, _) = self.solve_lp(&pushed)?;
        Ok(sol.objective <= self.tol.lp_feasibility)
    }

    pub fn depth(&self, x: &Vector) -> Result<DepthCertificate> {
        let m = self.measure;
        check_dim(m.dim(), x.len())?;
        if x.iter().any(|v| !v.is_finite()) {
            return Err(Error::NonFinite("query point".into()));
        }
        if (x - &self.mean).norm() <= self.tol.mean_point {
            return Ok(DepthCertificate {
                depth: 1.0,
                atom_weights: m.weights().to_vec(),
                dual_direction: None,
                status: DepthStatus::Mean,
                iterations: 0,
                dual_degenerate: false,
                threshold: None,
                primal_objective: 1.0,
                dual_objective: 1.0,
            });
        }

        let (sol, s) = self.solve_lp(x)?;
        let depth = sol.objective;
        if depth <= self.tol.lp_feasibility {
            return Ok(DepthCertificate {
                depth: 0.0,
                atom_weights: Vec::new(),
                dual_direction: None,
                status: DepthStatus::Outside,
                iterations: sol.iterations,
                dual_degenerate: sol.degenerate,
                threshold: None,
                primal_objective: depth,
                dual_objective: 0.0,
            });
        }
        let depth = depth.min(1.0);
        let gamma: Vec<f64> = sol.x.iter().map(|v| v / sol.objective).collect();

        // duals of the scaled rows, mapped back to the original rows
        let y = &sol.dual * s;
        let ynorm = y.norm();
        let (direction, threshold) = if ynorm > 0.0 {
            let u = Direction::new(-&y / ynorm)?;
            let level = u.dot(x) - 1.0 / ynorm;
            (Some(u), Some(level))
        } else {
            (None, None)
        };
        let dual_objective: f64 = m
            .atoms()
            .column_iter()
            .zip(m.weights())
            .map(|(xi, w)| w * (1.0 - y.dot(&(xi - x))).max(0.0))
            .sum();

        let status = match &direction {
            Some(u) => {
                let top = m
                    .projections(u)?
                    .into_iter()
                    .fold(f64::NEG_INFINITY, f64::max);
                if top - u.dot(x) <= 1e-12 * self.scale || self.on_hull_boundary(x)? {
                    DepthStatus::Boundary
                } else {
                    DepthStatus::Interior
                }
            }
            None => {
                if self.on_hull_boundary(x)? {
                    DepthStatus::Boundary
                } else {
                    DepthStatus::Interior
                }
            }
        };

        Ok(DepthCertificate {
            depth,
            atom_weights: gamma,
            dual_direction: direction,
            status,
            iterations: sol.iterations,
            dual_degenerate: sol.degenerate,
            threshold,
            primal_objective: sol.objective,
            dual_objective,
        })
    }
}

/// Zonoid data depth of `x`.
pub fn zonoid_depth(measure: &EmpiricalMeasure, x: &Vector) -> Result<DepthCertificate> {
    zonoid_depth_with(measure, x, Tolerances::DEFAULT)
}

pub fn zonoid_depth_with(
    measure: &EmpiricalMeasure,
    x: &Vector,
    tol: Tolerances,
) -> Result<DepthCertificate> {
    DepthSolver::new(measure, tol)?.depth(x)
}

/// Outer normal of `D_α(x)` at `x` read off the optimal duals.
pub fn depth_dual_direction(cert: &DepthCertificate) -> Result<Direction> {
    match cert.status {
        DepthStatus::Mean => Err(Error::NoDual("every direction supports the mean".into())),
        DepthStatus::Outside => Err(Error::NoDual("point is outside the hull".into())),
        DepthStatus::Interior | DepthStatus::Boundary => cert
            .dual_direction
            .clone()
            .ok_or_else(|| Error::NoDual("optimal dual vanished".into())),
    }
}
