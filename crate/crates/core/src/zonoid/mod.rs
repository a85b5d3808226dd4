//! Support functions of the zonoid `Z(μ)`, the lift zonoid `Ẑ(μ)` and the
//! zonoid α-trimmed regions `D_α(μ)`, boundary points of the trimmed
//! regions, and the exact planar zonotope of a point cloud.

mod directions;
mod polygon;

pub use directions::{direction_grid, random_rotation};
pub use polygon::{zonotope_polygon_2d, Polygon2D};

use crate::config::Tolerances;
use crate::error::{Error, Result};
use crate::gaussian::scalar::{normal_cdf, normal_pdf, radius};
use crate::measures::{check_dim, Direction, EmpiricalMeasure, GaussianMeasure, Measure, Vector};

/// Unit direction `(t, u)` in `ℝ × ℝ^d`, dual to the lift-zonoid space.
#[derive(Debug, Clone, PartialEq)]
pub struct LiftDirection {
    t: f64,
    u: Vector,
}

impl LiftDirection {
    /// Normalizes `(t, u)` jointly.
    pub fn new(t: f64, u: Vector) -> Result<Self> {
        if !t.is_finite() || u.iter().any(|x| !x.is_finite()) {
            return Err(Error::NonFinite("lift direction".into()));
        }
        let norm = (t * t + u.norm_squared()).sqrt();
        if norm == 0.0 {
            return Err(Error::Input("lift direction must be nonzero".into()));
        }
        Ok(LiftDirection {
            t: t / norm,
            u: u / norm,
        })
    }

    pub fn t(&self) -> f64 {
        self.t
    }

    pub fn u(&self) -> &Vector {
        &self.u
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct TrimmedRegionQuery {
    pub alpha: f64,
    pub direction: Direction,
}

impl TrimmedRegionQuery {
    pub fn new(alpha: f64, direction: Direction) -> Result<Self> {
        check_alpha(alpha)?;
        Ok(TrimmedRegionQuery { alpha, direction })
    }
}

/// `E (s + σZ)₊` for `Z ~ N(0,1)`.
fn gaussian_positive_part(s: f64, sigma: f64) -> f64 {
    if sigma == 0.0 {
        return s.max(0.0);
    }
    let z = s / sigma;
    sigma * normal_pdf(z) + s * normal_cdf(z)
}

/// `h(Z(μ), u) = E⟨X, u⟩₊`.
pub fn support_zonoid(measure: &Measure, u: &Direction) -> Result<f64> {
    match measure {
        Measure::Empirical(m) => {
            let p = m.projections(u)?;
            Ok(p.iter()
                .zip(m.weights())
                .map(|(pi, w)| w * pi.max(0.0))
                .sum())
        }
        Measure::Gaussian(g) => {
            let (s, sigma) = g.projection(u)?;
            Ok(gaussian_positive_part(s, sigma))
        }
    }
}

/// `E (t + ⟨X, u⟩)₊` for an arbitrary (not necessarily unit) pair `(t, u)`.
///
/// This is the support function of `Ẑ(μ)`, extended positively homogeneously.
pub fn lift_support_raw(measure: &Measure, t: f64, u: &Vector) -> Result<f64> {
    check_dim(measure.dim(), u.len())?;
    match measure {
        Measure::Empirical(m) => {
            let p = m.atoms().tr_mul(u);
            Ok(p.iter()
                .zip(m.weights())
                .map(|(pi, w)| w * (t + pi).max(0.0))
                .sum())
        }
        Measure::Gaussian(g) => {
            let s = t + u.dot(g.mean());
            let sigma = g.factor().tr_mul(u).norm();
            Ok(gaussian_positive_part(s, sigma))
        }
    }
}

/// `h(Ẑ(μ), (t, u))`.
pub fn support_lift_zonoid(measure: &Measure, w: &LiftDirection) -> Result<f64> {
    lift_support_raw(measure, w.t, &w.u)
}

/// Greedy maximizer of `E[g(X)⟨X,u⟩]` over `g ∈ [0,1]` with `E g(X) = α`.
///
/// `mass[i] = w_i g(x_i)`. Atoms are filled in decreasing order of
/// projection; atoms tied at the marginal level share the remaining mass in
/// proportion to their weights.
#[derive(Debug, Clone)]
pub struct GreedyFill {
    pub mass: Vec<f64>,
    /// Some atom was only partly included.
    pub fractional: bool,
    /// More than one atom sat at the marginal level.
    pub marginal_tie: bool,
    /// Projection value of the marginal level.
    pub threshold: f64,
}

pub fn greedy_fill(projections: &[f64], weights: &[f64], alpha: f64, tie_tol: f64) -> GreedyFill {
    let n = projections.len();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| projections[j].total_cmp(&projections[i]));
    let scale = projections
        .iter()
        .fold(0.0f64, |a, p| a.max(p.abs()))
        .max(1.0);
    let tol = tie_tol * scale;

    let mut mass = vec![0.0; n];
    let mut cum = 0.0;
    let mut start = 0;
    while start < n {
        let level = projections[order[start]];
        let mut end = start + 1;
        while end < n && level - projections[order[end]] <= tol {
            end += 1;
        }
        let group = &order[start..end];
        let group_weight: f64 = group.iter().map(|&i| weights[i]).sum();
        let remaining = alpha - cum;
        let last_group = end == n;
        if cum + group_weight < alpha * (1.0 - 1e-15) && !last_group {
            for &i in group {
                mass[i] = weights[i];
            }
            cum += group_weight;
            start = end;
            continue;
        }
        let share = (remaining / group_weight).min(1.0);
        for &i in group {
            mass[i] = weights[i] * share;
        }
        return GreedyFill {
            mass,
            fractional: share < 1.0 - 1e-12,
            marginal_tie: group.len() > 1,
            threshold: level,
        };
    }
    unreachable!("greedy fill over an empty measure")
}

fn check_alpha(alpha: f64) -> Result<()> {
    if alpha > 0.0 && alpha <= 1.0 {
        Ok(())
    } else {
        Err(Error::InvalidAlpha(alpha))
    }
}

fn empirical_fill(m: &EmpiricalMeasure, q: &TrimmedRegionQuery) -> Result<(Vec<f64>, GreedyFill)> {
    let p = m.projections(&q.direction)?;
    let fill = greedy_fill(&p, m.weights(), q.alpha, Tolerances::DEFAULT.tie);
    Ok((p, fill))
}

/// `h(D_α(μ), u)`.
pub fn support_trimmed(measure: &Measure, q: &TrimmedRegionQuery) -> Result<f64> {
    check_alpha(q.alpha)?;
    match measure {
        Measure::Empirical(m) => {
            let (p, fill) = empirical_fill(m, q)?;
            Ok(p.iter().zip(&fill.mass).map(|(pi, g)| pi * g).sum::<f64>() / q.alpha)
        }
        Measure::Gaussian(g) => {
            let (s, sigma) = g.projection(&q.direction)?;
            if q.alpha == 1.0 {
                Ok(s)
            } else {
                Ok(s + sigma * radius(q.alpha)?)
            }
        }
    }
}

fn gaussian_boundary_point(g: &GaussianMeasure, q: &TrimmedRegionQuery) -> Result<Vector> {
    check_dim(g.dim(), q.direction.dim())?;
    if q.alpha == 1.0 {
        return Ok(g.mean().clone());
    }
    let v = g.factor().tr_mul(q.direction.as_vector());
    let v = &v / v.norm();
    Ok(g.unwhiten(&(v * radius(q.alpha)?)))
}

/// The point of `D_α(μ)` maximizing `⟨·, u⟩`: `(1/α) E[X g*(X)]`.
pub fn trimmed_boundary_point(measure: &Measure, q: &TrimmedRegionQuery) -> Result<Vector> {
    check_alpha(q.alpha)?;
    match measure {
        Measure::Empirical(m) => {
            let (_, fill) = empirical_fill(m, q)?;
            Ok(m.atoms() * Vector::from_vec(fill.mass) / q.alpha)
        }
        Measure::Gaussian(g) => gaussian_boundary_point(g, q),
    }
}

/// Boundary point together with the fill that produced it (empirical only).
pub fn trimmed_boundary_fill(
    m: &EmpiricalMeasure,
    q: &TrimmedRegionQuery,
) -> Result<(Vector, GreedyFill)> {
    check_alpha(q.alpha)?;
    let (_, fill) = empirical_fill(m, q)?;
    let point = m.atoms() * Vector::from_column_slice(&fill.mass) / q.alpha;
    Ok((point, fill))
}

/// `max_u |h(D_α, u) - h(D_β, u)|` over `k` grid directions, a lower bound
/// on the Hausdorff distance between the two regions.
pub fn hausdorff_support_distance(
    measure: &Measure,
    alpha: f64,
    beta: f64,
    k: usize,
    seed: u64,
) -> Result<f64> {
    check_alpha(alpha)?;
    check_alpha(beta)?;
    if measure.dim() > 1 && k < 4 {
        return Err(Error::Input(format!(
            "at least 4 directions are needed, got {k}"
        )));
    }
    let mut worst = 0.0f64;
    for u in direction_grid(measure.dim(), k, seed) {
        let ha = support_trimmed(measure, &TrimmedRegionQuery::new(alpha, u.clone())?)?;
        let hb = support_trimmed(measure, &TrimmedRegionQuery::new(beta, u)?)?;
        worst = worst.max((ha - hb).abs());
    }
    Ok(worst)
}

#[cfg(test)]
mod tests {
    use super::*;
    use nalgebra::DMatrix;
    use proptest::prelude::*;

    const PHI0: f64 = 0.3989422804014326779399460599343818684759;
    const SQRT_2_OVER_PI: f64 = 0.7978845608028653558798921198687637369517;

    fn emp(rows: &[&[f64]]) -> Measure {
        let rows: Vec<Vec<f64>> = rows.iter().map(|r| r.to_vec()).collect();
        EmpiricalMeasure::from_rows(&rows, None).unwrap().into()
    }

    fn dir(x: &[f64]) -> Direction {
        Direction::from_slice(x).unwrap()
    }

    fn q(alpha: f64, x: &[f64]) -> TrimmedRegionQuery {
        TrimmedRegionQuery::new(alpha, dir(x)).unwrap()
    }

    #[test]
    fn support_zonoid_examples() {
        let m = emp(&[&[1.0, 0.0], &[0.0, 1.0], &[-1.0, -1.0]]);
        assert!((support_zonoid(&m, &dir(&[1.0, 0.0])).unwrap() - 1.0 / 3.0).abs() < 1e-16);
        let g: Measure = GaussianMeasure::standard(3).into();
        assert!((support_zonoid(&g, &dir(&[1.0, 2.0, -2.0])).unwrap() - PHI0).abs() < 1e-15);
        let u = dir(&[0.3, -0.7]);
        let diff = support_zonoid(&m, &u).unwrap() - support_zonoid(&m, &u.negated()).unwrap();
        assert!(diff.abs() < 1e-15);
    }

    #[test]
    fn support_lift_examples() {
        let m = emp(&[&[-1.0], &[1.0]]);
        let w = LiftDirection::new(1.0, Vector::zeros(1)).unwrap();
        assert_eq!(support_lift_zonoid(&m, &w).unwrap(), 1.0);
        let w = LiftDirection::new(0.0, Vector::from_vec(vec![1.0])).unwrap();
        assert_eq!(support_lift_zonoid(&m, &w).unwrap(), 0.5);
        let w = LiftDirection::new(0.0, Vector::from_vec(vec![2.0])).unwrap();
        assert_eq!(support_lift_zonoid(&m, &w).unwrap(), 0.5);
        let g: Measure = GaussianMeasure::standard(1).into();
        let w = LiftDirection::new(0.0, Vector::from_vec(vec![3.0])).unwrap();
        assert!((support_lift_zonoid(&g, &w).unwrap() - PHI0).abs() < 1e-15);
        assert!(LiftDirection::new(0.0, Vector::zeros(2)).is_err());
    }

    #[test]
    fn support_trimmed_examples() {
        let m = emp(&[&[-1.0], &[1.0]]);
        assert!((support_trimmed(&m, &q(2.0 / 3.0, &[1.0])).unwrap() - 0.5).abs() < 1e-15);
        let m2 = emp(&[&[1.0, 2.0], &[-3.0, 0.5], &[0.2, 0.2]]);
        let u = dir(&[0.4, 0.9]);
        let h1 = support_trimmed(&m2, &TrimmedRegionQuery::new(1.0, u.clone()).unwrap()).unwrap();
        assert!((h1 - u.dot(&m2.mean())).abs() < 1e-15);
        let g: Measure = GaussianMeasure::standard(2).into();
        assert!(
            (support_trimmed(&g, &q(0.5, &[1.0, 1.0])).unwrap() - SQRT_2_OVER_PI).abs() < 1e-15
        );
        assert!(support_trimmed(
            &m,
            &TrimmedRegionQuery {
                alpha: 0.0,
                direction: dir(&[1.0])
            }
        )
        .is_err());
        assert!(TrimmedRegionQuery::new(1.2, dir(&[1.0])).is_err());
    }

    #[test]
    fn boundary_point_examples() {
        let g: Measure = GaussianMeasure::standard(2).into();
        let u = dir(&[3.0, 4.0]);
        let b =
            trimmed_boundary_point(&g, &TrimmedRegionQuery::new(0.3, u.clone()).unwrap()).unwrap();
        assert!((b - u.as_vector() * radius(0.3).unwrap()).norm() < 1e-15);
        let m = emp(&[&[-1.0], &[1.0]]);
        let b = trimmed_boundary_point(&m, &q(2.0 / 3.0, &[1.0])).unwrap();
        assert!((b[0] - 0.5).abs() < 1e-15);
        let m2 = emp(&[&[1.0, 2.0], &[-3.0, 0.5], &[0.2, 0.2]]);
        let b = trimmed_boundary_point(&m2, &q(1.0, &[0.3, 0.1])).unwrap();
        assert!((b - m2.mean()).norm() < 1e-15);
    }

    #[test]
    fn tie_split_is_order_independent() {
        let a = EmpiricalMeasure::from_rows(
            &[vec![1.0, 1.0], vec![1.0, -1.0], vec![-1.0, 0.0]],
            Some(vec![0.2, 0.4, 0.4]),
        )
        .unwrap();
        let b = EmpiricalMeasure::from_rows(
            &[vec![1.0, -1.0], vec![-1.0, 0.0], vec![1.0, 1.0]],
            Some(vec![0.4, 0.4, 0.2]),
        )
        .unwrap();
        let query = q(0.3, &[1.0, 0.0]);
        let pa = trimmed_boundary_point(&a.into(), &query).unwrap();
        let pb = trimmed_boundary_point(&b.into(), &query).unwrap();
        assert!((pa - &pb).norm() < 1e-15);
        // both tied atoms share the 0.3 in proportion 1:2
        assert!((pb[0] - 1.0).abs() < 1e-15);
        assert!((pb[1] - (0.1 - 0.2) / 0.3).abs() < 1e-15);
    }

    #[test]
    fn hausdorff_examples() {
        let m = emp(&[&[-1.0], &[1.0]]);
        assert_eq!(hausdorff_support_distance(&m, 0.4, 0.4, 8, 0).unwrap(), 0.0);
        // u = +1: h(D_.5)=1, h(D_.75)=(0.5 - 0.25)/0.75 = 1/3; u = -1 symmetric
        let d = hausdorff_support_distance(&m, 0.5, 0.75, 2, 0).unwrap();
        assert!((d - 2.0 / 3.0).abs() < 1e-15);
        let g: Measure = GaussianMeasure::standard(3).into();
        let d = hausdorff_support_distance(&g, 0.2, 0.6, 17, 4).unwrap();
        assert!((d - (radius(0.2).unwrap() - radius(0.6).unwrap())).abs() < 1e-14);
        assert!(hausdorff_support_distance(&g, 0.2, 0.6, 3, 4).is_err());
    }

    #[test]
    fn zonotope_matches_support_on_grid() {
        let m = EmpiricalMeasure::from_rows(
            &[
                vec![1.0, 0.2],
                vec![-0.3, 0.9],
                vec![0.4, -1.1],
                vec![2.0, 2.0],
                vec![-2.0, -2.0],
                vec![0.0, 0.0],
            ],
            Some(vec![0.1, 0.2, 0.3, 0.15, 0.05, 0.2]),
        )
        .unwrap();
        let poly = zonotope_polygon_2d(&m).unwrap();
        let mm: Measure = m.into();
        for u in direction_grid(2, 360, 9) {
            assert!((poly.support(&u) - support_zonoid(&mm, &u).unwrap()).abs() < 1e-10);
        }
    }

    #[test]
    fn distinct_measures_have_distinct_lift_zonoids() {
        // finite check of identifiability: some lift direction separates them
        let a = emp(&[&[0.0], &[1.0]]);
        let b = EmpiricalMeasure::from_rows(&[vec![0.0], vec![1.0]], Some(vec![0.4, 0.6]))
            .unwrap()
            .into();
        let c = emp(&[&[0.0], &[1.0], &[2.0]]);
        let grid: Vec<(f64, f64)> = (0..40).map(|i| (-2.0 + i as f64 * 0.1, 1.0)).collect();
        for (x, y) in [(&a, &b), (&a, &c), (&b, &c)] {
            let separated = grid.iter().any(|&(t, u)| {
                let u = Vector::from_vec(vec![u]);
                (lift_support_raw(x, t, &u).unwrap() - lift_support_raw(y, t, &u).unwrap()).abs()
                    > 1e-9
            });
            assert!(separated);
        }
    }

    fn arb_measure() -> impl Strategy<Value = EmpiricalMeasure> {
        (1usize..4, 1usize..15)
            .prop_flat_map(|(d, n)| {
                (
                    prop::collection::vec(prop::collection::vec(-3.0f64..3.0, d), n),
                    prop::collection::vec(0.05f64..1.0, n),
                )
            })
            .prop_map(|(rows, w)| EmpiricalMeasure::from_rows(&rows, Some(w)).unwrap())
    }

    fn arb_dir(d: usize) -> impl Strategy<Value = Direction> {
        prop::collection::vec(-1.0f64..1.0, d)
            .prop_filter("nonzero", |v| v.iter().map(|x| x * x).sum::<f64>() > 1e-6)
            .prop_map(|v| Direction::from_slice(&v).unwrap())
    }

    fn measure_and_dirs() -> impl Strategy<Value = (EmpiricalMeasure, Direction, Direction)> {
        arb_measure().prop_flat_map(|m| {
            let d = m.dim();
            (Just(m), arb_dir(d), arb_dir(d))
        })
    }

    proptest! {
        #[test]
        fn sublinear((m, u1, u2) in measure_and_dirs()) {
            let m: Measure = m.into();
            let s = u1.as_vector() + u2.as_vector();
            let lhs = lift_support_raw(&m, 0.0, &s).unwrap();
            let rhs = support_zonoid(&m, &u1).unwrap() + support_zonoid(&m, &u2).unwrap();
            prop_assert!(lhs <= rhs + 1e-12);
        }

        #[test]
        fn symmetric_about_half_mean((m, u, _u) in measure_and_dirs()) {
            let mean = m.mean();
            let m: Measure = m.into();
            let diff = support_zonoid(&m, &u).unwrap() - support_zonoid(&m, &u.negated()).unwrap();
            prop_assert!((diff - u.dot(&mean)).abs() <= 1e-10);
        }

        #[test]
        fn nested_regions((m, u, _u) in measure_and_dirs(), a in 0.01f64..1.0, b in 0.01f64..1.0) {
            let (lo, hi) = if a < b { (a, b) } else { (b, a) };
            let m: Measure = m.into();
            let hl = support_trimmed(&m, &TrimmedRegionQuery::new(lo, u.clone()).unwrap()).unwrap();
            let hh = support_trimmed(&m, &TrimmedRegionQuery::new(hi, u).unwrap()).unwrap();
            prop_assert!(hl >= hh - 1e-12);
        }

        #[test]
        fn centered_reflection((m, u, _u) in measure_and_dirs(), a in 0.01f64..0.99) {
            let mean = m.mean();
            let d = m.dim();
            let c = m.affine_image(&DMatrix::identity(d, d), &(-mean)).unwrap();
            let c: Measure = c.into();
            let lhs = a * support_trimmed(&c, &TrimmedRegionQuery::new(a, u.clone()).unwrap()).unwrap();
            let rhs = (1.0 - a) * support_trimmed(&c, &TrimmedRegionQuery::new(1.0 - a, u.negated()).unwrap()).unwrap();
            prop_assert!((lhs - rhs).abs() <= 1e-10);
        }

        #[test]
        fn trimmed_support_is_lift_section((m, u, _u) in measure_and_dirs(), a in 0.01f64..1.0) {
            // h(D_α, u) = (1/α) min_t [h(Ẑ, (t, u)) - tα]; the minimum sits at t = -p_i
            let p = m.projections(&u).unwrap();
            let m: Measure = m.into();
            let best = p.iter()
                .map(|pi| lift_support_raw(&m, -pi, u.as_vector()).unwrap() + pi * a)
                .fold(f64::INFINITY, f64::min);
            let h = support_trimmed(&m, &TrimmedRegionQuery::new(a, u).unwrap()).unwrap();
            prop_assert!((best / a - h).abs() <= 1e-10 * (1.0 + h.abs()));
        }

        #[test]
        fn boundary_point_attains_support((m, u, _u) in measure_and_dirs(), a in 0.001f64..1.0) {
            let m: Measure = m.into();
            let query = TrimmedRegionQuery::new(a, u.clone()).unwrap();
            let b = trimmed_boundary_point(&m, &query).unwrap();
            let h = support_trimmed(&m, &query).unwrap();
            prop_assert!((u.dot(&b) - h).abs() <= 1e-12 * (1.0 + h.abs()));
        }

        #[test]
        fn boundary_point_lies_in_region((m, u, v) in measure_and_dirs(), a in 0.01f64..1.0) {
            let m: Measure = m.into();
            let b = trimmed_boundary_point(&m, &TrimmedRegionQuery::new(a, u).unwrap()).unwrap();
            let h = support_trimmed(&m, &TrimmedRegionQuery::new(a, v.clone()).unwrap()).unwrap();
            prop_assert!(v.dot(&b) <= h + 1e-10);
        }
    }
}
