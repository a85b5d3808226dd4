//! Gaussian closed forms: every trimmed region of `N(m, AAᵀ)` is the image
//! under `z ↦ m + Az` of a ball of radius `r(α)`, so depth and half-space
//! representation reduce to scalar inversions in whitened coordinates.

pub mod scalar;

use crate::barycentric::{Method, RepresentationResult};
use crate::error::Result;
use crate::measures::{Direction, GaussianMeasure, HalfSpace, Vector};
use scalar::{g_inverse, normal_cdf, radius_inverse};

/// Zonoid depth `r⁻¹(‖A⁻¹(x − m)‖)`.
pub fn gaussian_depth(g: &GaussianMeasure, x: &Vector) -> Result<f64> {
    let z = g.whiten(x)?;
    radius_inverse(z.norm())
}

/// The half-space whose barycenter is `x`, from `a′ = −G⁻¹(‖x′‖)` in
/// whitened coordinates.
pub fn gaussian_represent(g: &GaussianMeasure, x: &Vector) -> Result<RepresentationResult> {
    let z = g.whiten(x)?;
    let rho = z.norm();
    if rho == 0.0 {
        return Ok(RepresentationResult {
            halfspace: HalfSpace::whole_space(g.dim()),
            alpha: 1.0,
            residual: (g.mean() - x).norm(),
            unique: true,
            method: Method::ClosedForm,
        });
    }
    let u_white = &z / rho;
    let a_white = -g_inverse(rho)?;
    // ⟨A⁻¹(y − m), u′⟩ = ⟨y − m, A⁻ᵀu′⟩
    let n = g.factor_inv().tr_mul(&u_white);
    let norm = n.norm();
    let direction = Direction::new(n.clone() / norm)?;
    let offset = (a_white + g.mean().dot(&n)) / norm;
    let halfspace = HalfSpace::new(direction, offset)?;
    let residual = (g.halfspace_barycenter(&halfspace)? - x).norm();
    Ok(RepresentationResult {
        halfspace,
        alpha: normal_cdf(-a_white),
        residual,
        unique: true,
        method: Method::ClosedForm,
    })
}
