use nalgebra::DMatrix;

use super::types::{check_dim, check_finite, Direction, HalfSpace, Vector};
use crate::error::{Error, Result};
use crate::gaussian::scalar::{normal_sf, upper_conditional_mean};

/// Nondegenerate Gaussian `N(m, A Aᵀ)` given by its mean and a square
/// full-rank covariance factor `A`.
#[derive(Debug, Clone, PartialEq)]
pub struct GaussianMeasure {
    mean: Vector,
    factor: DMatrix<f64>,
    factor_inv: DMatrix<f64>,
}

impl GaussianMeasure {
    pub fn new(mean: Vector, factor: DMatrix<f64>) -> Result<Self> {
        check_finite(&mean, "gaussian mean")?;
        let d = mean.len();
        if d == 0 {
            return Err(Error::Input(
                "gaussian must have dimension at least 1".into(),
            ));
        }
        if factor.shape() != (d, d) {
            return Err(Error::DimensionMismatch {
                expected: d,
                found: factor.nrows().max(factor.ncols()),
            });
        }
        if factor.iter().any(|x| !x.is_finite()) {
            return Err(Error::NonFinite("covariance factor".into()));
        }
        let sv = factor.singular_values();
        let smax = sv.max();
        let smin = sv.min();
        if smin.is_nan() || smin <= 1e-12 * smax {
            return Err(Error::Degenerate(format!(
                "covariance factor is rank deficient (singular values {smin:e} .. {smax:e})"
            )));
        }
        let factor_inv = factor
            .clone()
            .try_inverse()
            .ok_or_else(|| Error::Degenerate("covariance factor is not invertible".into()))?;
        Ok(GaussianMeasure {
            mean,
            factor,
            factor_inv,
        })
    }

    pub fn standard(dim: usize) -> Self {
        GaussianMeasure {
            mean: Vector::zeros(dim),
            factor: DMatrix::identity(dim, dim),
            factor_inv: DMatrix::identity(dim, dim),
        }
    }

    /// Factor by Cholesky decomposition of the covariance.
    pub fn from_covariance(mean: Vector, covariance: DMatrix<f64>) -> Result<Self> {
        let d = mean.len();
        if covariance.shape() != (d, d) {
            return Err(Error::DimensionMismatch {
                expected: d,
                found: covariance.nrows(),
            });
        }
        let asym = (&covariance - covariance.transpose()).amax();
        if asym > 1e-12 * covariance.amax().max(1.0) {
            return Err(Error::Degenerate("covariance is not symmetric".into()));
        }
        let chol = covariance
            .cholesky()
            .ok_or_else(|| Error::Degenerate("covariance is not positive definite".into()))?;
        Self::new(mean, chol.l())
    }

    pub fn dim(&self) -> usize {
        self.mean.len()
    }

    pub fn mean(&self) -> &Vector {
        &self.mean
    }

    pub fn factor(&self) -> &DMatrix<f64> {
        &self.factor
    }

    pub(crate) fn factor_inv(&self) -> &DMatrix<f64> {
        &self.factor_inv
    }

    pub fn covariance(&self) -> DMatrix<f64> {
        &self.factor * self.factor.transpose()
    }

    /// `A⁻¹ (x - m)`.
    pub fn whiten(&self, x: &Vector) -> Result<Vector> {
        check_dim(self.dim(), x.len())?;
        Ok(&self.factor_inv * (x - &self.mean))
    }

    /// `m + A z`.
    pub fn unwhiten(&self, z: &Vector) -> Vector {
        &self.mean + &self.factor * z
    }

    /// Projection `⟨X, u⟩ ~ N(s, σ²)` returned as `(s, σ)`.
    pub fn projection(&self, u: &Direction) -> Result<(f64, f64)> {
        check_dim(self.dim(), u.dim())?;
        Ok((u.dot(&self.mean), self.factor.tr_mul(u.as_vector()).norm()))
    }

    /// Whitened form `{z : ⟨z, v⟩ ≥ c}` of a half-space, as `(v, c)`.
    pub(crate) fn whitened_halfspace(&self, h: &HalfSpace) -> Result<(Vector, f64)> {
        let (s, sigma) = self.projection(&h.direction)?;
        let v = self.factor.tr_mul(h.direction.as_vector()) / sigma;
        Ok((v, (h.offset - s) / sigma))
    }

    pub fn halfspace_mass(&self, h: &HalfSpace) -> Result<f64> {
        check_dim(self.dim(), h.dim())?;
        if h.is_whole_space() {
            return Ok(1.0);
        }
        let (_, c) = self.whitened_halfspace(h)?;
        Ok(normal_sf(c))
    }

    /// `m + A v φ(c)/(1 - Φ(c))`, evaluated through the Mills ratio so far
    /// half-spaces stay finite.
    pub fn halfspace_barycenter(&self, h: &HalfSpace) -> Result<Vector> {
        check_dim(self.dim(), h.dim())?;
        if h.is_whole_space() {
            return Ok(self.mean.clone());
        }
        let (v, c) = self.whitened_halfspace(h)?;
        let shift = upper_conditional_mean(c);
        if !shift.is_finite() {
            return Err(Error::ZeroMass);
        }
        Ok(&self.mean + &self.factor * (v * shift))
    }

    pub fn affine_image(&self, m: &DMatrix<f64>, b: &Vector) -> Result<Self> {
        check_dim(self.dim(), m.ncols())?;
        check_dim(m.nrows(), b.len())?;
        check_finite(b, "offset vector")?;
        let mean = m * &self.mean + b;
        let factor = m * &self.factor;
        if factor.is_square() {
            Self::new(mean, factor)
        } else {
            let cov = &factor * factor.transpose();
            Self::from_covariance(mean, cov)
        }
    }
}
