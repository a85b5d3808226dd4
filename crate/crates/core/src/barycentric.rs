//! Half-space barycentric representation: a point `x` in the interior of
//! the support is the barycenter `B_H(μ)` of some half-space `H`, and the
//! pairs `(a, u)`, `(h, u)` and `(α, u)` attached to that half-space serve as
//! coordinates of `x`.

use nalgebra::{DMatrix, DVector};
use rand_distr::{Distribution, StandardNormal};
use serde::{Deserialize, Serialize};

use crate::config::Tolerances;
use crate::depth::{DepthSolver, DepthStatus};
use crate::error::{Error, Result};
use crate::gaussian::gaussian_represent;
use crate::gaussian::scalar::{normal_sf, radius_inverse};
use crate::measures::{
    check_dim, Direction, EmpiricalMeasure, GaussianMeasure, HalfSpace, Measure, Vector,
};
use crate::rng::chunked_sum;
use crate::zonoid::{support_trimmed, trimmed_boundary_point, TrimmedRegionQuery};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CoordKind {
    /// `(a, u)`: offset of the representing half-space.
    Offset,
    /// `(h, u)`: `h = ⟨x, u⟩ = h(D_α(x), u)`.
    Support,
    /// `(α, u)`: depth level.
    Depth,
}

impl std::str::FromStr for CoordKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "offset" => Ok(CoordKind::Offset),
            "support" => Ok(CoordKind::Support),
            "depth" => Ok(CoordKind::Depth),
            _ => Err(Error::Input(format!(
                "unknown coordinate kind `{s}` (offset, support, depth)"
            ))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BarycentricCoords {
    pub kind: CoordKind,
    pub scalar: f64,
    pub direction: Direction,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Method {
    #[serde(rename = "lp-dual")]
    LpDual,
    #[serde(rename = "closed-form")]
    ClosedForm,
    #[serde(rename = "refined")]
    Refined,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RepresentationResult {
    pub halfspace: HalfSpace,
    pub alpha: f64,
    /// `‖B_H(μ) − x‖`, with the marginal atoms of an empirical measure
    /// included fractionally.
    pub residual: f64,
    pub unique: bool,
    pub method: Method,
}

pub fn represent(measure: &Measure, x: &Vector) -> Result<RepresentationResult> {
    represent_with(measure, x, Tolerances::DEFAULT)
}

pub fn represent_with(
    measure: &Measure,
    x: &Vector,
    tol: Tolerances,
) -> Result<RepresentationResult> {
    check_dim(measure.dim(), x.len())?;
    if x.iter().any(|c| !c.is_finite()) {
        return Err(Error::NonFinite("query point".into()));
    }
    match measure {
        Measure::Gaussian(g) => gaussian_represent(g, x),
        Measure::Empirical(m) => represent_empirical(m, x, tol),
    }
}

fn whole_space(measure_mean: &Vector, x: &Vector, method: Method) -> RepresentationResult {
    RepresentationResult {
        halfspace: HalfSpace::whole_space(x.len()),
        alpha: 1.0,
        residual: (measure_mean - x).norm(),
        unique: true,
        method,
    }
}

fn represent_empirical(
    m: &EmpiricalMeasure,
    x: &Vector,
    tol: Tolerances,
) -> Result<RepresentationResult> {
    let solver = DepthSolver::new(m, tol)?;
    let cert = solver.depth(x)?;
    match cert.status {
        DepthStatus::Mean => return Ok(whole_space(&m.mean(), x, Method::LpDual)),
        DepthStatus::Outside => return Err(Error::OutsideSupport { depth: 0.0 }),
        _ if cert.depth < tol.min_alpha => return Err(Error::OutsideSupport { depth: cert.depth }),
        _ => {}
    }
    let alpha = cert.depth;
    let scale = 1.0 + x.norm();
    let measure: Measure = m.clone().into();

    if let Some(u) = cert.dual_direction.clone() {
        let a = measure.upper_quantile(&u, alpha)?;
        let proj = m.projections(&u)?;
        let spread = proj.iter().fold(0.0f64, |s, p| s.max(p.abs())).max(1.0);
        let band = 1e-9 * spread;
        // atoms above the level count fully, atoms at the level with the LP's share
        let mut mass = vec![0.0; m.len()];
        let mut fractional = false;
        let mut at_level = 0usize;
        for (i, (&p, &w)) in proj.iter().zip(m.weights()).enumerate() {
            if p > a + band {
                mass[i] = w;
            } else if p >= a - band {
                at_level += 1;
                mass[i] = cert.atom_weights[i] * alpha;
                if mass[i] < w * (1.0 - 1e-9) {
                    fractional = true;
                }
            }
        }
        let total: f64 = mass.iter().sum();
        let bary = m.atoms() * DVector::from_vec(mass) / total;
        let residual = (bary - x).norm().max((total - alpha).abs());
        if residual <= tol.represent_residual * scale {
            let unique = !(fractional
                || at_level > 1
                || cert.dual_degenerate
                || cert.status == DepthStatus::Boundary);
            return Ok(RepresentationResult {
                halfspace: HalfSpace::new(u, a)?,
                alpha,
                residual,
                unique,
                method: Method::LpDual,
            });
        }
        log::debug!("lp-dual representation residual {residual:e}; refining");
        return refine(&measure, x, alpha, u, tol);
    }
    let start = Direction::new(x - m.mean())?;
    refine(&measure, x, alpha, start, tol)
}

/// Gauss-Newton on `(α, u) ↦ trimmed_boundary_point(α, u) − x` with
/// forward-difference Jacobians.
fn refine(
    measure: &Measure,
    x: &Vector,
    alpha0: f64,
    u0: Direction,
    tol: Tolerances,
) -> Result<RepresentationResult> {
    const STEP: f64 = 1e-5;
    const MAX_ITER: usize = 60;
    let d = x.len();
    let scale = 1.0 + x.norm();
    let eval = |theta: &DVector<f64>| -> Result<Vector> {
        let alpha = theta[0].clamp(tol.min_alpha, 1.0);
        let u = Direction::new(theta.rows(1, d).into_owned())?;
        Ok(trimmed_boundary_point(measure, &TrimmedRegionQuery::new(alpha, u)?)? - x)
    };
    let mut theta = DVector::zeros(d + 1);
    theta[0] = alpha0;
    theta.rows_mut(1, d).copy_from(u0.as_vector());
    let mut f = eval(&theta)?;
    for _ in 0..MAX_ITER {
        if f.norm() <= tol.represent_residual * scale {
            break;
        }
        let mut jac = DMatrix::zeros(d, d + 1);
        for k in 0..=d {
            let mut t = theta.clone();
            t[k] += STEP;
            jac.set_column(k, &((eval(&t)? - &f) / STEP));
        }
        let step = jac
            .svd(true, true)
            .solve(&(-&f), 1e-12)
            .map_err(|_| Error::NotConverged { residual: f.norm() })?;
        // backtrack on the residual norm
        let mut lambda = 1.0;
        let mut improved = false;
        for _ in 0..30 {
            let mut t = &theta + &step * lambda;
            t[0] = t[0].clamp(tol.min_alpha, 1.0);
            let nu = t.rows(1, d).norm();
            if nu > 0.0 {
                let mut tail = t.rows_mut(1, d);
                tail /= nu;
            }
            if let Ok(ft) = eval(&t) {
                if ft.norm() < f.norm() {
                    theta = t;
                    f = ft;
                    improved = true;
                    break;
                }
            }
            lambda *= 0.5;
        }
        if !improved {
            break;
        }
    }
    let residual = f.norm();
    if residual > tol.represent_residual * scale {
        return Err(Error::NotConverged { residual });
    }
    let alpha = theta[0].clamp(tol.min_alpha, 1.0);
    let u = Direction::new(theta.rows(1, d).into_owned())?;
    let a = measure.upper_quantile(&u, alpha)?;
    Ok(RepresentationResult {
        halfspace: HalfSpace::new(u, a)?,
        alpha,
        residual,
        unique: measure.as_gaussian().is_some(),
        method: Method::Refined,
    })
}

pub fn coords_from_point(
    measure: &Measure,
    x: &Vector,
    kind: CoordKind,
) -> Result<BarycentricCoords> {
    check_dim(measure.dim(), x.len())?;
    if (x - measure.mean()).norm() <= Tolerances::DEFAULT.mean_point {
        return Err(Error::MeanPoint);
    }
    let r = represent(measure, x)?;
    let u = r.halfspace.direction;
    let scalar = match kind {
        CoordKind::Offset => r.halfspace.offset,
        CoordKind::Support => u.dot(x),
        CoordKind::Depth => r.alpha,
    };
    Ok(BarycentricCoords {
        kind,
        scalar,
        direction: u,
    })
}

pub fn point_from_coords(measure: &Measure, c: &BarycentricCoords) -> Result<Vector> {
    check_dim(measure.dim(), c.direction.dim())?;
    let u = &c.direction;
    match c.kind {
        CoordKind::Offset => measure.halfspace_barycenter(&HalfSpace::new(u.clone(), c.scalar)?),
        CoordKind::Depth => {
            if c.scalar == 1.0 {
                return Ok(measure.mean());
            }
            trimmed_boundary_point(measure, &TrimmedRegionQuery::new(c.scalar, u.clone())?)
        }
        CoordKind::Support => {
            let alpha = level_for_support(measure, u, c.scalar)?;
            if alpha == 1.0 {
                return Ok(measure.mean());
            }
            trimmed_boundary_point(measure, &TrimmedRegionQuery::new(alpha, u.clone())?)
        }
    }
}

/// The `α` with `h(D_α, u) = h`.
fn level_for_support(measure: &Measure, u: &Direction, h: f64) -> Result<f64> {
    if !h.is_finite() {
        return Err(Error::NonFinite("support value".into()));
    }
    match measure {
        Measure::Gaussian(g) => {
            let (s, sigma) = g.projection(u)?;
            let r = (h - s) / sigma;
            if r < 0.0 {
                return Err(Error::NoSolution(format!(
                    "support value {h} is below the mean projection {s}"
                )));
            }
            radius_inverse(r)
        }
        Measure::Empirical(m) => {
            let proj = m.projections(u)?;
            let top = proj.iter().copied().fold(f64::NEG_INFINITY, f64::max);
            let low = u.dot(&m.mean());
            let slack = 1e-12 * (1.0 + top.abs());
            if h > top + slack {
                return Err(Error::NoSolution(format!(
                    "support value {h} exceeds the largest projection {top}"
                )));
            }
            if h < low - slack {
                return Err(Error::NoSolution(format!(
                    "support value {h} is below the mean projection {low}"
                )));
            }
            let support =
                |alpha: f64| support_trimmed(measure, &TrimmedRegionQuery::new(alpha, u.clone())?);
            // h(D_α, u) is nonincreasing in α
            let (mut lo, mut hi) = (0.0f64, 1.0f64);
            if support(hi)? >= h {
                return Ok(1.0);
            }
            for _ in 0..200 {
                let mid = 0.5 * (lo + hi);
                if mid <= lo || mid >= hi {
                    break;
                }
                if support(mid)? >= h {
                    lo = mid;
                } else {
                    hi = mid;
                }
            }
            Ok(if lo > 0.0 { lo } else { hi })
        }
    }
}

/// `μ(H Δ G)`, with a standard error for Monte-Carlo estimates.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SymmetricDifference {
    pub mass: f64,
    pub std_error: f64,
}

/// Default sample count for Gaussian pairs in general position.
pub const UNIQUENESS_SAMPLES: usize = 1_000_000;

pub fn verify_uniqueness(
    measure: &Measure,
    h: &HalfSpace,
    g: &HalfSpace,
    seed: u64,
) -> Result<SymmetricDifference> {
    verify_uniqueness_with(measure, h, g, seed, UNIQUENESS_SAMPLES)
}

pub fn verify_uniqueness_with(
    measure: &Measure,
    h: &HalfSpace,
    g: &HalfSpace,
    seed: u64,
    samples: usize,
) -> Result<SymmetricDifference> {
    check_dim(measure.dim(), h.dim())?;
    check_dim(measure.dim(), g.dim())?;
    let exact = |mass: f64| SymmetricDifference {
        mass: mass.max(0.0),
        std_error: 0.0,
    };
    match measure {
        Measure::Empirical(m) => {
            let mass = (0..m.len())
                .filter(|&i| {
                    let xi = m.atom(i);
                    h.contains(&xi) != g.contains(&xi)
                })
                .map(|i| m.weights()[i])
                .sum();
            Ok(exact(mass))
        }
        Measure::Gaussian(gm) => {
            if h.is_whole_space() || g.is_whole_space() {
                let mh = gm.halfspace_mass(h)?;
                let mg = gm.halfspace_mass(g)?;
                return Ok(exact((mh - mg).abs()));
            }
            let cos = h.direction.dot(g.direction.as_vector());
            if (cos.abs() - 1.0).abs() <= 1e-12 {
                return Ok(exact(parallel_symmetric_difference(gm, h, g, cos > 0.0)?));
            }
            if samples == 0 {
                return Err(Error::Input("at least one sample is required".into()));
            }
            let d = gm.dim();
            let hits = chunked_sum(seed, samples, 0u64, |rng, len, acc| {
                let mut z = Vector::zeros(d);
                for _ in 0..len {
                    for c in z.iter_mut() {
                        *c = StandardNormal.sample(rng);
                    }
                    let y = gm.unwhiten(&z);
                    if h.contains(&y) != g.contains(&y) {
                        *acc += 1;
                    }
                }
            });
            let p = hits as f64 / samples as f64;
            Ok(SymmetricDifference {
                mass: p,
                std_error: (p * (1.0 - p) / samples as f64).sqrt(),
            })
        }
    }
}

/// Both half-spaces are bounded by hyperplanes orthogonal to one direction;
/// everything reduces to the law of one projection.
fn parallel_symmetric_difference(
    gm: &GaussianMeasure,
    h: &HalfSpace,
    g: &HalfSpace,
    same: bool,
) -> Result<f64> {
    let (s, sigma) = gm.projection(&h.direction)?;
    let ch = (h.offset - s) / sigma;
    if same {
        let (s2, sigma2) = gm.projection(&g.direction)?;
        let cg = (g.offset - s2) / sigma2;
        let (lo, hi) = if ch <= cg { (ch, cg) } else { (cg, ch) };
        return Ok(normal_sf(lo) - normal_sf(hi));
    }
    // G = {t ≤ -b} in the coordinate t = ⟨y, u_H⟩
    let cg = (-g.offset - s) / sigma;
    let upper = normal_sf(ch);
    let lower = normal_sf(-cg);
    let overlap = if cg > ch {
        normal_sf(ch) - normal_sf(cg)
    } else {
        0.0
    };
    Ok(upper + lower - 2.0 * overlap)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gaussian::scalar::{g_ratio, radius};
    use crate::measures::EmpiricalMeasure;
    use proptest::prelude::*;

    const PHI1: f64 = 0.8413447460685429;

    fn v(x: &[f64]) -> Vector {
        Vector::from_column_slice(x)
    }

    fn dir(x: &[f64]) -> Direction {
        Direction::from_slice(x).unwrap()
    }

    fn two_atoms() -> Measure {
        EmpiricalMeasure::from_rows(&[vec![-1.0], vec![1.0]], None)
            .unwrap()
            .into()
    }

    fn std2() -> Measure {
        GaussianMeasure::standard(2).into()
    }

    #[test]
    fn empirical_two_atoms_fractional() {
        let r = represent(&two_atoms(), &v(&[0.5])).unwrap();
        assert!((r.alpha - 2.0 / 3.0).abs() < 1e-12);
        assert_eq!(r.halfspace.direction.as_vector()[0], 1.0);
        // the marginal atom is -1; a third of its weight is included
        assert_eq!(r.halfspace.offset, -1.0);
        assert!(r.residual < 1e-12);
        assert!(!r.unique);
        assert_eq!(r.method, Method::LpDual);
    }

    #[test]
    fn mean_and_outside() {
        let r = represent(&two_atoms(), &v(&[0.0])).unwrap();
        assert!(r.halfspace.is_whole_space());
        assert_eq!(r.alpha, 1.0);
        assert!(matches!(
            represent(&two_atoms(), &v(&[1.5])),
            Err(Error::OutsideSupport { .. })
        ));
        let r = represent(&std2(), &v(&[0.0, 0.0])).unwrap();
        assert!(r.halfspace.is_whole_space());
        assert!(matches!(
            coords_from_point(&std2(), &v(&[0.0, 0.0]), CoordKind::Depth),
            Err(Error::MeanPoint)
        ));
    }

    #[test]
    fn tiny_depth_is_outside() {
        let m: Measure =
            EmpiricalMeasure::from_rows(&[vec![-1.0], vec![1.0]], Some(vec![1.0 - 1e-8, 1e-8]))
                .unwrap()
                .into();
        assert!(matches!(
            represent(&m, &v(&[1.0])),
            Err(Error::OutsideSupport { .. })
        ));
    }

    #[test]
    fn gaussian_example_offset() {
        let g1 = crate::gaussian::scalar::g_inverse(0.5).unwrap();
        let r = represent(&std2(), &v(&[0.5, 0.0])).unwrap();
        assert!((r.halfspace.direction.as_vector() - v(&[1.0, 0.0])).norm() < 1e-15);
        assert!((r.halfspace.offset + g1).abs() < 1e-12);
        assert!(r.unique);
    }

    #[test]
    fn gaussian_coordinate_examples() {
        let x = v(&[0.3, -0.4]);
        let u = v(&[0.6, -0.8]);
        let c = coords_from_point(&std2(), &x, CoordKind::Support).unwrap();
        assert!((c.scalar - 0.5).abs() < 1e-12 && (c.direction.as_vector() - &u).norm() < 1e-12);
        let c = coords_from_point(&std2(), &x, CoordKind::Offset).unwrap();
        assert!((c.scalar + crate::gaussian::scalar::g_inverse(0.5).unwrap()).abs() < 1e-12);
        let r = radius(0.3).unwrap();
        let c = coords_from_point(&std2(), &(&u * r), CoordKind::Depth).unwrap();
        assert!((c.scalar - 0.3).abs() < 1e-12);
    }

    #[test]
    fn gaussian_inverse_examples() {
        let u = dir(&[0.0, 1.0]);
        let c = BarycentricCoords {
            kind: CoordKind::Depth,
            scalar: 0.4,
            direction: u.clone(),
        };
        let p = point_from_coords(&std2(), &c).unwrap();
        assert!((p - v(&[0.0, radius(0.4).unwrap()])).norm() < 1e-14);
        // barycenter of {⟨·,u⟩ ≥ a} sits at G(-a) u
        let c = BarycentricCoords {
            kind: CoordKind::Offset,
            scalar: 1.0,
            direction: u.clone(),
        };
        let p = point_from_coords(&std2(), &c).unwrap();
        assert!((p[1] - g_ratio(-1.0)).abs() < 1e-13);
        let c = BarycentricCoords {
            kind: CoordKind::Depth,
            scalar: 1.0,
            direction: u.clone(),
        };
        assert_eq!(
            point_from_coords(&two_atoms_2d(), &c).unwrap(),
            two_atoms_2d().mean()
        );
        let c = BarycentricCoords {
            kind: CoordKind::Support,
            scalar: -0.1,
            direction: u,
        };
        assert!(matches!(
            point_from_coords(&std2(), &c),
            Err(Error::NoSolution(_))
        ));
    }

    fn two_atoms_2d() -> Measure {
        EmpiricalMeasure::from_rows(&[vec![-1.0, 0.0], vec![1.0, 0.5], vec![0.0, 2.0]], None)
            .unwrap()
            .into()
    }

    #[test]
    fn empirical_support_inverse() {
        let m = two_atoms();
        let u = dir(&[1.0]);
        let c = BarycentricCoords {
            kind: CoordKind::Support,
            scalar: 0.5,
            direction: u.clone(),
        };
        let p = point_from_coords(&m, &c).unwrap();
        assert!((p[0] - 0.5).abs() < 1e-12);
        let c = BarycentricCoords {
            kind: CoordKind::Support,
            scalar: 1.5,
            direction: u,
        };
        assert!(matches!(
            point_from_coords(&m, &c),
            Err(Error::NoSolution(_))
        ));
    }

    #[test]
    fn refinement_reaches_closed_form() {
        let mu: Measure = GaussianMeasure::from_covariance(
            v(&[1.0, 0.0]),
            DMatrix::from_row_slice(2, 2, &[1.0, 0.4, 0.4, 2.0]),
        )
        .unwrap()
        .into();
        let x = v(&[1.6, 0.7]);
        let r = refine(&mu, &x, 0.5, dir(&[1.0, 1.0]), Tolerances::DEFAULT).unwrap();
        assert_eq!(r.method, Method::Refined);
        assert!(r.residual <= 1e-8);
        let exact = represent(&mu, &x).unwrap();
        assert!((r.alpha - exact.alpha).abs() < 1e-7);
        assert!((r.halfspace.offset - exact.halfspace.offset).abs() < 1e-6);
        assert!(
            (r.halfspace.direction.as_vector() - exact.halfspace.direction.as_vector()).norm()
                < 1e-6
        );
    }

    #[test]
    fn symmetric_difference_examples() {
        let h = HalfSpace::new(dir(&[1.0]), 0.0).unwrap();
        let g = HalfSpace::new(dir(&[1.0]), 1.0).unwrap();
        let n1: Measure = GaussianMeasure::standard(1).into();
        assert_eq!(verify_uniqueness(&n1, &h, &h, 0).unwrap().mass, 0.0);
        let s = verify_uniqueness(&n1, &h, &g, 0).unwrap();
        assert!((s.mass - (PHI1 - 0.5)).abs() < 1e-15);
        assert_eq!(s.std_error, 0.0);
        let g = HalfSpace::new(dir(&[1.0]), 0.5).unwrap();
        assert_eq!(
            verify_uniqueness(&two_atoms(), &h, &g, 0).unwrap().mass,
            0.0
        );
        // opposite orientations: {x ≥ 0} Δ {x ≤ 1} = {x < 0} ∪ {x > 1}
        let g = HalfSpace::at_most(dir(&[1.0]), 1.0).unwrap();
        let s = verify_uniqueness(&n1, &h, &g, 0).unwrap();
        assert!((s.mass - (0.5 + (1.0 - PHI1))).abs() < 1e-15);
    }

    #[test]
    fn symmetric_difference_monte_carlo() {
        let h = HalfSpace::new(dir(&[1.0, 0.0]), 0.0).unwrap();
        let g = HalfSpace::new(dir(&[0.0, 1.0]), 0.0).unwrap();
        // two quarter planes
        let s = verify_uniqueness_with(&std2(), &h, &g, 5, 200_000).unwrap();
        assert!((s.mass - 0.5).abs() < 5.0 * s.std_error);
        assert!(s.std_error > 0.0);
        let again = verify_uniqueness_with(&std2(), &h, &g, 5, 200_000).unwrap();
        assert_eq!(s, again);
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]

        #[test]
        fn gaussian_round_trips(x in prop::collection::vec(-2.5f64..2.5, 2)) {
            let x = Vector::from_vec(x);
            prop_assume!(x.norm() > 1e-3);
            let mu = std2();
            for kind in [CoordKind::Offset, CoordKind::Support, CoordKind::Depth] {
                let c = coords_from_point(&mu, &x, kind).unwrap();
                let back = point_from_coords(&mu, &c).unwrap();
                prop_assert!((&back - &x).norm() <= 1e-7 * (1.0 + x.norm()), "{:?}: {} vs {}", kind, back, x);
            }
        }

        #[test]
        fn form_consistency(x in prop::collection::vec(-2.5f64..2.5, 3)) {
            let x = Vector::from_vec(x);
            prop_assume!(x.norm() > 1e-3);
            let g = GaussianMeasure::from_covariance(
                v(&[0.5, -1.0, 0.2]),
                DMatrix::from_row_slice(3, 3, &[2.0, 0.3, 0.1, 0.3, 1.0, -0.2, 0.1, -0.2, 0.5]),
            ).unwrap();
            let mu: Measure = g.into();
            let a = coords_from_point(&mu, &x, CoordKind::Offset).unwrap();
            let h = coords_from_point(&mu, &x, CoordKind::Support).unwrap();
            let al = coords_from_point(&mu, &x, CoordKind::Depth).unwrap();
            prop_assert!((a.direction.as_vector() - h.direction.as_vector()).norm() <= 1e-12);
            prop_assert!((a.direction.as_vector() - al.direction.as_vector()).norm() <= 1e-12);
            let mass = mu.halfspace_mass(&HalfSpace::new(a.direction.clone(), a.scalar).unwrap()).unwrap();
            prop_assert!((mass - al.scalar).abs() <= 1e-10);
            let hs = support_trimmed(&mu, &TrimmedRegionQuery::new(al.scalar, al.direction.clone()).unwrap()).unwrap();
            prop_assert!((hs - h.scalar).abs() <= 1e-8);
            for c in [a, h, al] {
                let back = point_from_coords(&mu, &c).unwrap();
                prop_assert!((&back - &x).norm() <= 1e-7 * (1.0 + x.norm()));
            }
        }

        #[test]
        fn offset_recovered(a in -3.0f64..3.0, t in 0.0f64..std::f64::consts::TAU) {
            let mu = std2();
            let u = dir(&[t.cos(), t.sin()]);
            let p = point_from_coords(&mu, &BarycentricCoords { kind: CoordKind::Offset, scalar: a, direction: u.clone() }).unwrap();
            let r = represent(&mu, &p).unwrap();
            prop_assert!((r.halfspace.offset - a).abs() <= 1e-7);
            prop_assert!((r.halfspace.direction.as_vector() - u.as_vector()).norm() <= 1e-7);
        }

        #[test]
        fn monotone_links(a1 in -3.0f64..3.0, gap in 0.01f64..1.0) {
            let mu = std2();
            let u = dir(&[1.0, 0.0]);
            let a2 = a1 + gap;
            let p = |a: f64| point_from_coords(&mu, &BarycentricCoords { kind: CoordKind::Offset, scalar: a, direction: u.clone() }).unwrap();
            let m1 = mu.halfspace_mass(&HalfSpace::new(u.clone(), a1).unwrap()).unwrap();
            let m2 = mu.halfspace_mass(&HalfSpace::new(u.clone(), a2).unwrap()).unwrap();
            prop_assert!(m1 > m2);
            prop_assert!(p(a1).norm() < p(a2).norm() || a1 < 0.0 && a2 <= 0.0 && p(a1).norm() > p(a2).norm());
        }

        #[test]
        fn empirical_representation_reproduces_point(
            rows in prop::collection::vec(prop::collection::vec(-1.0f64..1.0, 2), 4..12),
            x in prop::collection::vec(-0.3f64..0.3, 2),
        ) {
            let Ok(m) = EmpiricalMeasure::from_rows(&rows, None) else { return Ok(()); };
            prop_assume!(m.affine_rank(1e-6) == 2);
            let mu: Measure = m.clone().into();
            let x = m.mean() + Vector::from_vec(x);
            match represent(&mu, &x) {
                Ok(r) => {
                    prop_assert!(r.residual <= 1e-8 * (1.0 + x.norm()));
                    let upper = mu.halfspace_mass(&r.halfspace).unwrap();
                    prop_assert!(upper + 1e-12 >= r.alpha);
                }
                Err(Error::OutsideSupport { .. }) => {}
                Err(e) => prop_assert!(false, "{e}"),
            }
        }
    }
}
