//! Verification harness: property suites over seeded random instances.
//!
//! Instances are generated from `(seed, instance index)` streams and
//! evaluated in parallel; results are merged in index order, so a report
//! depends only on the seed and the sample count.

use nalgebra::DMatrix;
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;
use serde::Serialize;

use crate::barycentric::{
    coords_from_point, point_from_coords, represent, BarycentricCoords, CoordKind,
};
use crate::depth::{depth_bruteforce_oracle, zonoid_depth};
use crate::error::{Error, Result};
use crate::gaussian::gaussian_represent;
use crate::gaussian::scalar::{g_ratio, normal_quantile, radius};
use crate::measures::{Direction, EmpiricalMeasure, GaussianMeasure, HalfSpace, Measure, Vector};
use crate::rng::{chunked_sum, stream};
use crate::zonoid::{
    direction_grid, lift_support_raw, support_trimmed, support_zonoid, trimmed_boundary_point,
    TrimmedRegionQuery,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Suite {
    Theorem1,
    Gaussian,
    Roundtrip,
    Oracle,
}

impl std::str::FromStr for Suite {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "theorem1" => Ok(Suite::Theorem1),
            "gaussian" => Ok(Suite::Gaussian),
            "roundtrip" => Ok(Suite::Roundtrip),
            "oracle" => Ok(Suite::Oracle),
            _ => Err(Error::Input(format!(
                "unknown suite `{s}` (theorem1, gaussian, roundtrip, oracle)"
            ))),
        }
    }
}

#[derive(Debug, Clone)]
pub struct VerifyConfig {
    pub seed: u64,
    /// Monte-Carlo sample count per estimate.
    pub samples: usize,
    /// Run the measure-level suite on this measure instead of random ones.
    pub measure: Option<Measure>,
}

impl Default for VerifyConfig {
    fn default() -> Self {
        VerifyConfig {
            seed: 0,
            samples: 1_000_000,
            measure: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    pub max_error: f64,
    pub tolerance: f64,
}

impl Check {
    fn new(name: &str, max_error: f64, tolerance: f64) -> Self {
        Check {
            name: name.to_string(),
            passed: max_error <= tolerance,
            max_error,
            tolerance,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Report {
    pub suite: Suite,
    pub seed: u64,
    pub samples: usize,
    pub passed: bool,
    pub checks: Vec<Check>,
}

/// `max` that lets NaN through, so a broken computation fails its check.
fn worst(a: f64, b: f64) -> f64 {
    if a.is_nan() || b.is_nan() {
        f64::NAN
    } else {
        a.max(b)
    }
}

fn worst_of(it: impl IntoIterator<Item = f64>) -> f64 {
    it.into_iter().fold(0.0, worst)
}

pub fn run_suite(suite: Suite, cfg: &VerifyConfig) -> Result<Report> {
    let checks = match suite {
        Suite::Theorem1 => theorem1(cfg)?,
        Suite::Gaussian => gaussian(cfg)?,
        Suite::Roundtrip => roundtrip(cfg)?,
        Suite::Oracle => oracle(cfg)?,
    };
    Ok(Report {
        suite,
        seed: cfg.seed,
        samples: cfg.samples,
        passed: checks.iter().all(|c| c.passed),
        checks,
    })
}

fn uniform_cloud(
    rng: &mut ChaCha8Rng,
    n: usize,
    d: usize,
    random_weights: bool,
) -> Result<EmpiricalMeasure> {
    let atoms = DMatrix::from_fn(d, n, |_, _| rng.random_range(-1.0..1.0));
    let weights: Vec<f64> = if random_weights {
        let raw: Vec<f64> = (0..n).map(|_| rng.random_range(0.1..1.0)).collect();
        let total: f64 = raw.iter().sum();
        raw.into_iter().map(|w| w / total).collect()
    } else {
        vec![1.0 / n as f64; n]
    };
    EmpiricalMeasure::new(atoms, weights)
}

fn random_direction(rng: &mut ChaCha8Rng, d: usize) -> Direction {
    loop {
        let v = Vector::from_fn(d, |_, _| rng.sample::<f64, _>(StandardNormal));
        if v.norm() > 1e-3 {
            return Direction::new(v).expect("nonzero draw");
        }
    }
}

/// Random point with norm uniform in `(lo, hi)`.
fn random_point(rng: &mut ChaCha8Rng, d: usize, lo: f64, hi: f64) -> Vector {
    let u = random_direction(rng, d);
    u.into_vector() * rng.random_range(lo..hi)
}

const ALPHA_GRID: [f64; 10] = [0.05, 0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.85, 1.0];

#[derive(Debug, Clone, Copy, Default)]
struct Theorem1Errors {
    antisymmetry: f64,
    sublinearity: f64,
    lift_section: f64,
    nesting: f64,
    reflection: f64,
    continuity: f64,
    farthest_atom: f64,
}

fn theorem1_measure(measure: &Measure, seed: u64) -> Result<Theorem1Errors> {
    let d = measure.dim();
    let dirs = direction_grid(d, 64, seed);
    let mean = measure.mean();
    let h =
        |a: f64, u: &Direction| support_trimmed(measure, &TrimmedRegionQuery::new(a, u.clone())?);
    let mut e = Theorem1Errors::default();

    let centered = measure.affine_image(&DMatrix::identity(d, d), &(-&mean))?;
    let farthest = measure.as_empirical();

    for (k, u) in dirs.iter().enumerate() {
        let hz = support_zonoid(measure, u)?;
        let hz_neg = support_zonoid(measure, &u.negated())?;
        e.antisymmetry = worst(e.antisymmetry, (hz - hz_neg - u.dot(&mean)).abs());

        let v = dirs[(k + 1) % dirs.len()].as_vector();
        let sum = lift_support_raw(measure, 0.0, &(u.as_vector() + v))?;
        let parts =
            lift_support_raw(measure, 0.0, u.as_vector())? + lift_support_raw(measure, 0.0, v)?;
        e.sublinearity = worst(e.sublinearity, (sum - parts).max(0.0));

        let mut prev = f64::INFINITY;
        for &a in &ALPHA_GRID {
            let ha = h(a, u)?;
            e.nesting = worst(e.nesting, (ha - prev).max(0.0));
            prev = ha;
            // α h(D_α, u) = min_t E(t + ⟨X,u⟩)₊ − tα, attained at t = −q_α
            let q = measure.upper_quantile(u, a)?;
            let section = if q.is_finite() {
                lift_support_raw(measure, -q, u.as_vector())? + q * a
            } else {
                u.dot(&mean)
            };
            e.lift_section = worst(e.lift_section, (a * ha - section).abs());
            if a < 1.0 {
                let hc = support_trimmed(&centered, &TrimmedRegionQuery::new(a, u.clone())?)?;
                let hc_neg =
                    support_trimmed(&centered, &TrimmedRegionQuery::new(1.0 - a, u.negated())?)?;
                e.reflection = worst(e.reflection, (a * hc - (1.0 - a) * hc_neg).abs());
            }
        }
        for a in [0.25, 0.5, 0.75] {
            e.continuity = worst(e.continuity, (h(a + 1e-4, u)? - h(a, u)?).abs());
        }
        if let Some(m) = farthest {
            let proj = m.projections(u)?;
            let mut order: Vec<usize> = (0..proj.len()).collect();
            order.sort_by(|&i, &j| proj[j].total_cmp(&proj[i]));
            let spread = proj[order[0]] - proj[*order.last().unwrap()];
            let tied = order.len() > 1 && proj[order[0]] - proj[order[1]] <= 1e-9 * spread.max(1.0);
            if !tied {
                let b =
                    trimmed_boundary_point(measure, &TrimmedRegionQuery::new(1e-4, u.clone())?)?;
                e.farthest_atom = worst(e.farthest_atom, (b - m.atom(order[0])).norm());
            }
        }
    }
    Ok(e)
}

fn theorem1(cfg: &VerifyConfig) -> Result<Vec<Check>> {
    let measures: Vec<Measure> = match &cfg.measure {
        Some(m) => vec![m.clone()],
        None => (0..20u64)
            .map(|i| {
                let mut rng = stream(cfg.seed, i);
                let d = rng.random_range(1..=5);
                let n = rng.random_range(20..=200);
                uniform_cloud(&mut rng, n, d, true).map(Measure::from)
            })
            .collect::<Result<_>>()?,
    };
    let errors: Vec<Theorem1Errors> = measures
        .par_iter()
        .enumerate()
        .map(|(i, m)| theorem1_measure(m, cfg.seed.wrapping_add(i as u64)))
        .collect::<Result<_>>()?;
    let col = |f: fn(&Theorem1Errors) -> f64| worst_of(errors.iter().map(f));
    let mut checks = vec![
        Check::new("zonoid_antisymmetry", col(|e| e.antisymmetry), 1e-10),
        Check::new("sublinearity", col(|e| e.sublinearity), 1e-12),
        Check::new("lift_section", col(|e| e.lift_section), 1e-10),
        Check::new("nesting", col(|e| e.nesting), 1e-12),
        Check::new("centered_reflection", col(|e| e.reflection), 1e-10),
        Check::new("continuity_in_alpha", col(|e| e.continuity), 1e-3),
    ];
    if measures.iter().all(|m| m.as_empirical().is_some()) {
        checks.push(Check::new(
            "farthest_atom_limit",
            col(|e| e.farthest_atom),
            1e-6,
        ));
    }
    Ok(checks)
}

/// Running sums of `y 1_H(y)` and its square over all draws.
#[derive(Debug, Clone)]
struct Moments {
    sum: Vec<f64>,
    sum_sq: Vec<f64>,
}

impl std::ops::AddAssign for Moments {
    fn add_assign(&mut self, o: Self) {
        for (a, b) in self.sum.iter_mut().zip(o.sum) {
            *a += b;
        }
        for (a, b) in self.sum_sq.iter_mut().zip(o.sum_sq) {
            *a += b;
        }
    }
}

/// Largest componentwise `|B̂ − x| / (σ̂/√N)` for the Monte-Carlo
/// barycenter `B̂ = (1/N) Σ y_i 1_H(y_i) / μ(H)` under `N(0, I)`, where
/// `σ̂` is the sample standard deviation of the summands.
pub fn monte_carlo_barycenter_z(h: &HalfSpace, x: &Vector, seed: u64, samples: usize) -> f64 {
    let d = x.len();
    let mass = GaussianMeasure::standard(d)
        .halfspace_mass(h)
        .unwrap_or(0.0);
    if samples < 2 || mass <= 0.0 {
        return f64::INFINITY;
    }
    let zero = Moments {
        sum: vec![0.0; d],
        sum_sq: vec![0.0; d],
    };
    let m = chunked_sum(seed, samples, zero, |rng, len, acc| {
        let mut z = Vector::zeros(d);
        for _ in 0..len {
            for c in z.iter_mut() {
                *c = rng.sample(StandardNormal);
            }
            if h.contains(&z) {
                for j in 0..d {
                    let y = z[j] / mass;
                    acc.sum[j] += y;
                    acc.sum_sq[j] += y * y;
                }
            }
        }
    });
    let n = samples as f64;
    (0..d)
        .map(|j| {
            let mean = m.sum[j] / n;
            let var = ((m.sum_sq[j] - n * mean * mean) / (n - 1.0)).max(0.0);
            (mean - x[j]).abs() / (var / n).sqrt()
        })
        .fold(0.0, worst)
}

fn gaussian(cfg: &VerifyConfig) -> Result<Vec<Check>> {
    let half = (radius(0.5)? - (2.0 / std::f64::consts::PI).sqrt()).abs();

    let mut rng = stream(cfg.seed, 0);
    let mut support_err = 0.0f64;
    let std3: Measure = GaussianMeasure::standard(3).into();
    for _ in 0..20 {
        let alpha = rng.random_range(0.01..0.99);
        let u = random_direction(&mut rng, 3);
        let h = support_trimmed(&std3, &TrimmedRegionQuery::new(alpha, u)?)?;
        support_err = worst(support_err, (h - radius(alpha)?).abs());
    }

    let chain = chain_identity_error()?;

    let dims = [1usize, 2, 5];
    let cases: Vec<(f64, f64, f64)> = (0..50u64)
        .into_par_iter()
        .map(|i| -> Result<(f64, f64, f64)> {
            let mut rng = stream(cfg.seed, 1000 + i);
            let d = dims[i as usize % dims.len()];
            let x = random_point(&mut rng, d, 0.05, 3.0);
            let g = GaussianMeasure::standard(d);
            let r = gaussian_represent(&g, &x)?;
            let exact = (g.halfspace_barycenter(&r.halfspace)? - &x).norm();
            let z = if cfg.samples > 0 {
                monte_carlo_barycenter_z(&r.halfspace, &x, cfg.seed ^ ((i + 1) << 40), cfg.samples)
            } else {
                0.0
            };
            // general covariance through whitening
            let a = DMatrix::from_fn(d, d, |_, _| rng.random_range(-0.5..0.5))
                + DMatrix::identity(d, d) * 1.5;
            let gm =
                GaussianMeasure::new(Vector::from_fn(d, |_, _| rng.random_range(-1.0..1.0)), a)?;
            let y = gm.unwhiten(&x);
            let rg = gaussian_represent(&gm, &y)?;
            let general = (gm.halfspace_barycenter(&rg.halfspace)? - &y).norm() / (1.0 + y.norm());
            Ok((exact, z, general))
        })
        .collect::<Result<_>>()?;

    let mut checks = vec![
        Check::new("radius_half", half, 1e-10),
        Check::new("radius_vs_support", support_err, 1e-9),
        Check::new("chain_identity", chain, 1e-10),
        Check::new(
            "represent_closed_form",
            worst_of(cases.iter().map(|c| c.0)),
            1e-8,
        ),
        Check::new(
            "represent_general_covariance",
            worst_of(cases.iter().map(|c| c.2)),
            1e-8,
        ),
    ];
    if cfg.samples > 0 {
        checks.push(Check::new(
            "represent_monte_carlo_sigmas",
            worst_of(cases.iter().map(|c| c.1)),
            4.0,
        ));
    }
    Ok(checks)
}

fn chain_identity_error() -> Result<f64> {
    let mut err = 0.0f64;
    for k in 1..100 {
        let alpha = k as f64 / 100.0;
        err = worst(
            err,
            (g_ratio(normal_quantile(alpha)?) - radius(alpha)?).abs(),
        );
    }
    Ok(err)
}

fn roundtrip(cfg: &VerifyConfig) -> Result<Vec<Check>> {
    let kinds = [CoordKind::Offset, CoordKind::Support, CoordKind::Depth];
    let errs: Vec<[f64; 4]> = (0..100u64)
        .into_par_iter()
        .map(|i| -> Result<[f64; 4]> {
            let mut rng = stream(cfg.seed, 2000 + i);
            let d = 2 + (i as usize % 2);
            let mu: Measure = GaussianMeasure::standard(d).into();
            let x = random_point(&mut rng, d, 0.05, 3.0);
            let mut out = [0.0; 4];
            for (slot, kind) in kinds.iter().enumerate() {
                let c = coords_from_point(&mu, &x, *kind)?;
                let back = point_from_coords(&mu, &c)?;
                out[slot] = (back - &x).norm() / x.norm();
            }
            let a = rng.random_range(-3.0..3.0);
            let u = random_direction(&mut rng, d);
            let p = point_from_coords(
                &mu,
                &BarycentricCoords {
                    kind: CoordKind::Offset,
                    scalar: a,
                    direction: u.clone(),
                },
            )?;
            let r = represent(&mu, &p)?;
            out[3] = (r.halfspace.offset - a)
                .abs()
                .max((r.halfspace.direction.as_vector() - u.as_vector()).norm());
            Ok(out)
        })
        .collect::<Result<_>>()?;
    let col = |k: usize| worst_of(errs.iter().map(|e| e[k]));
    Ok(vec![
        Check::new("offset_form", col(0), 1e-7),
        Check::new("support_form", col(1), 1e-7),
        Check::new("depth_form", col(2), 1e-7),
        Check::new("offset_recovery", col(3), 1e-7),
        Check::new("chain_identity", chain_identity_error()?, 1e-10),
    ])
}

/// `(measure, query)` for the LP-versus-oracle comparison; even indices
/// query a convex combination of the atoms, odd ones a point of the
/// enlarged cube.
pub fn oracle_instance(seed: u64, index: u64) -> Result<(EmpiricalMeasure, Vector)> {
    let mut rng = stream(seed, 3000 + index);
    let d = rng.random_range(1..=3);
    let n = rng.random_range(d + 2..=10);
    let m = uniform_cloud(&mut rng, n, d, false)?;
    let x = if index.is_multiple_of(2) {
        let lambda: Vec<f64> = (0..n).map(|_| rng.random::<f64>().powi(3)).collect();
        let total: f64 = lambda.iter().sum();
        m.atoms() * Vector::from_vec(lambda) / total
    } else {
        Vector::from_fn(d, |_, _| rng.random_range(-1.5..1.5))
    };
    Ok((m, x))
}

fn oracle(cfg: &VerifyConfig) -> Result<Vec<Check>> {
    let errs: Vec<f64> = (0..200u64)
        .into_par_iter()
        .map(|i| -> Result<f64> {
            let (m, x) = oracle_instance(cfg.seed, i)?;
            let lp = match zonoid_depth(&m, &x) {
                Ok(c) => c.depth,
                Err(Error::Degenerate(_)) => return Ok(0.0),
                Err(e) => return Err(e),
            };
            Ok((lp - depth_bruteforce_oracle(&m, &x, 64)?).abs())
        })
        .collect::<Result<_>>()?;
    let two = EmpiricalMeasure::from_rows(&[vec![-1.0], vec![1.0]], None)?;
    let example = (zonoid_depth(&two, &Vector::from_vec(vec![0.5]))?.depth - 2.0 / 3.0).abs();
    Ok(vec![
        Check::new("lp_vs_oracle", worst_of(errs), 1e-6),
        Check::new("two_atom_example", example, 1e-12),
    ])
}
