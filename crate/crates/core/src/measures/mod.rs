//! Measure models: weighted point clouds and nondegenerate Gaussians, with
//! their one-dimensional projections, upper quantiles, half-space masses and
//! half-space barycenters.

mod empirical;
mod gaussian;
mod types;

pub use empirical::EmpiricalMeasure;
pub use gaussian::GaussianMeasure;
pub(crate) use types::check_dim;
pub use types::{offset_serde, Direction, HalfSpace, Vector};

use nalgebra::DMatrix;

use crate::error::{Error, Result};
use crate::gaussian::scalar::{normal_quantile, normal_sf};

#[derive(Debug, Clone, PartialEq)]
pub enum Measure {
    Empirical(EmpiricalMeasure),
    Gaussian(GaussianMeasure),
}

impl From<EmpiricalMeasure> for Measure {
    fn from(m: EmpiricalMeasure) -> Self {
        Measure::Empirical(m)
    }
}

impl From<GaussianMeasure> for Measure {
    fn from(m: GaussianMeasure) -> Self {
        Measure::Gaussian(m)
    }
}

/// Law of `⟨X, u⟩`.
#[derive(Debug, Clone, PartialEq)]
pub enum ProjectionLaw {
    /// Values sorted ascending (stable among ties) with their weights.
    Empirical {
        values: Vec<f64>,
        weights: Vec<f64>,
    },
    Gaussian {
        mean: f64,
        std: f64,
    },
}

impl ProjectionLaw {
    /// `P(⟨X, u⟩ ≥ a)`.
    pub fn upper_mass(&self, a: f64) -> f64 {
        match self {
            ProjectionLaw::Empirical { values, weights } => {
                let start = values.partition_point(|v| *v < a);
                weights[start..].iter().sum()
            }
            ProjectionLaw::Gaussian { mean, std } => {
                if a == f64::NEG_INFINITY {
                    1.0
                } else {
                    normal_sf((a - mean) / std)
                }
            }
        }
    }

    /// Upper α-quantile.
    ///
    /// Continuous laws: the `a` with `P(⟨X,u⟩ ≥ a) = α`. Empirical laws: the
    /// largest atom value `a` with `P(⟨X,u⟩ ≥ a) ≥ α`; the strict upper mass
    /// at that value is then below α and the caller splits the boundary atom.
    pub fn upper_quantile(&self, alpha: f64) -> Result<f64> {
        if !(alpha > 0.0 && alpha <= 1.0) {
            return Err(Error::InvalidAlpha(alpha));
        }
        match self {
            ProjectionLaw::Empirical { values, weights } => {
                let mut cum = 0.0;
                for (v, w) in values.iter().zip(weights).rev() {
                    cum += w;
                    if cum >= alpha * (1.0 - 1e-12) {
                        return Ok(*v);
                    }
                }
                Ok(values[0])
            }
            ProjectionLaw::Gaussian { mean, std } => {
                if alpha == 1.0 {
                    Ok(f64::NEG_INFINITY)
                } else {
                    Ok(mean - std * normal_quantile(alpha)?)
                }
            }
        }
    }
}

impl Measure {
    pub fn dim(&self) -> usize {
        match self {
            Measure::Empirical(m) => m.dim(),
            Measure::Gaussian(g) => g.dim(),
        }
    }

    pub fn mean(&self) -> Vector {
        match self {
            Measure::Empirical(m) => m.mean(),
            Measure::Gaussian(g) => g.mean().clone(),
        }
    }

    pub fn project(&self, u: &Direction) -> Result<ProjectionLaw> {
        match self {
            Measure::Empirical(m) => {
                let p = m.projections(u)?;
                let mut order: Vec<usize> = (0..p.len()).collect();
                order.sort_by(|&i, &j| p[i].total_cmp(&p[j]));
                Ok(ProjectionLaw::Empirical {
                    values: order.iter().map(|&i| p[i]).collect(),
                    weights: order.iter().map(|&i| m.weights()[i]).collect(),
                })
            }
            Measure::Gaussian(g) => {
                let (mean, std) = g.projection(u)?;
                Ok(ProjectionLaw::Gaussian { mean, std })
            }
        }
    }

    pub fn upper_quantile(&self, u: &Direction, alpha: f64) -> Result<f64> {
        self.project(u)?.upper_quantile(alpha)
    }

    pub fn halfspace_mass(&self, h: &HalfSpace) -> Result<f64> {
        match self {
            Measure::Empirical(m) => m.halfspace_mass(h),
            Measure::Gaussian(g) => g.halfspace_mass(h),
        }
    }

    pub fn halfspace_barycenter(&self, h: &HalfSpace) -> Result<Vector> {
        match self {
            Measure::Empirical(m) => m.halfspace_barycenter(h),
            Measure::Gaussian(g) => g.halfspace_barycenter(h),
        }
    }

    pub fn affine_image(&self, m: &DMatrix<f64>, b: &Vector) -> Result<Measure> {
        Ok(match self {
            Measure::Empirical(e) => Measure::Empirical(e.affine_image(m, b)?),
            Measure::Gaussian(g) => Measure::Gaussian(g.affine_image(m, b)?),
        })
    }

    pub fn as_empirical(&self) -> Option<&EmpiricalMeasure> {
        match self {
            Measure::Empirical(m) => Some(m),
            Measure::Gaussian(_) => None,
        }
    }

    pub fn as_gaussian(&self) -> Option<&GaussianMeasure> {
        match self {
            Measure::Gaussian(g) => Some(g),
            Measure::Empirical(_) => None,
        }
    }
}
