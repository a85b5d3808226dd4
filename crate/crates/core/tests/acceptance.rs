//! Acceptance gate. Runs each criterion at its stated tolerance and time
//! budget, prints one PASS/FAIL line per criterion, and exits non-zero if
//! any criterion fails.
//!
//! Random instances come from fixed seeds; reference values are computed
//! here directly from their definitions rather than through the library's
//! own helpers wherever that is practical.

use std::process::Command;
use std::time::{Duration, Instant};

use liftzonoid::barycentric::{coords_from_point, point_from_coords, CoordKind};
use liftzonoid::depth::{depth_bruteforce_oracle, zonoid_depth};
use liftzonoid::gaussian::gaussian_represent;
use liftzonoid::gaussian::scalar::{g_ratio, normal_quantile, radius};
use liftzonoid::zonoid::{
    support_trimmed, support_zonoid, trimmed_boundary_point, zonotope_polygon_2d,
    TrimmedRegionQuery,
};
use liftzonoid::{Direction, EmpiricalMeasure, GaussianMeasure, HalfSpace, Measure, Vector};
use nalgebra::DMatrix;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;

const SQRT_2_OVER_PI: f64 = 0.7978845608028653558798921198687637369517;

struct Outcome {
    passed: bool,
    detail: String,
}

type Criterion = (&'static str, fn() -> Outcome, Duration);

fn outcome(passed: bool, detail: String) -> Outcome {
    Outcome { passed, detail }
}

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn unit(rng: &mut ChaCha8Rng, d: usize) -> Direction {
    loop {
        let v = Vector::from_fn(d, |_, _| rng.sample::<f64, _>(StandardNormal));
        if v.norm() > 1e-3 {
            return Direction::new(v).unwrap();
        }
    }
}

fn point_with_norm_in(rng: &mut ChaCha8Rng, d: usize, lo: f64, hi: f64) -> Vector {
    let r = rng.random_range(lo..hi);
    unit(rng, d).into_vector() * r
}

fn cloud(rng: &mut ChaCha8Rng, n: usize, d: usize, weighted: bool) -> EmpiricalMeasure {
    let atoms = DMatrix::from_fn(d, n, |_, _| rng.random_range(-1.0..1.0));
    let mut w: Vec<f64> = if weighted {
        (0..n).map(|_| rng.random_range(0.1..1.0)).collect()
    } else {
        vec![1.0; n]
    };
    let total: f64 = w.iter().sum();
    w.iter_mut().for_each(|x| *x /= total);
    EmpiricalMeasure::new(atoms, w).unwrap()
}

fn max_of(it: impl IntoIterator<Item = f64>) -> f64 {
    it.into_iter().fold(0.0, |a, b| {
        if a.is_nan() || b.is_nan() {
            f64::NAN
        } else {
            a.max(b)
        }
    })
}

/// 1. Gaussian trimmed regions are balls of radius `I(α)/α`.
fn gaussian_radius() -> Outcome {
    let half = (radius(0.5).unwrap() - SQRT_2_OVER_PI).abs();
    let mut r = rng(101);
    let mut worst = 0.0f64;
    for _ in 0..20 {
        let d = r.random_range(1..=5);
        let alpha = r.random_range(0.001..0.999);
        let u = unit(&mut r, d);
        let g: Measure = GaussianMeasure::standard(d).into();
        let h = support_trimmed(&g, &TrimmedRegionQuery::new(alpha, u).unwrap()).unwrap();
        worst = max_of([worst, (h - radius(alpha).unwrap()).abs()]);
    }
    outcome(
        half <= 1e-10 && worst <= 1e-9,
        format!("|r(1/2)-sqrt(2/pi)|={half:.2e} (tol 1e-10), support gap {worst:.2e} (tol 1e-9)"),
    )
}

/// 2. Closed-form and Monte-Carlo barycenters of the representing
///    half-space reproduce the point.
fn gaussian_closure() -> Outcome {
    const N: usize = 1_000_000;
    let dims = [1usize, 2, 5];
    let results: Vec<(f64, f64)> = (0..50u64)
        .into_par_iter()
        .map(|i| {
            let mut r = rng(2000 + i);
            let d = dims[i as usize % 3];
            let x = point_with_norm_in(&mut r, d, 0.05, 3.0);
            let g = GaussianMeasure::standard(d);
            let rep = gaussian_represent(&g, &x).unwrap();
            let closed = (g.halfspace_barycenter(&rep.halfspace).unwrap() - &x).norm();
            (closed, mc_sigmas(&rep.halfspace, &x, 7000 + i, N))
        })
        .collect();
    let closed = max_of(results.iter().map(|r| r.0));
    let z = max_of(results.iter().map(|r| r.1));
    outcome(
        closed <= 1e-8 && z <= 4.0,
        format!("closed-form residual {closed:.2e} (tol 1e-8), worst MC deviation {z:.2} sigma/sqrt(N) (tol 4), N={N}"),
    )
}

/// `max_j |B̂_j − x_j| / (σ̂_j/√N)` for `B̂ = mean of y·1_H(y)/μ(H)`.
fn mc_sigmas(h: &HalfSpace, x: &Vector, seed: u64, n: usize) -> f64 {
    let d = x.len();
    let mass = 1.0 - liftzonoid::gaussian::scalar::normal_cdf(h.offset);
    let mut r = rng(seed);
    let mut sum = vec![0.0; d];
    let mut sum_sq = vec![0.0; d];
    let mut z = vec![0.0; d];
    for _ in 0..n {
        let mut proj = 0.0;
        for (j, zj) in z.iter_mut().enumerate() {
            *zj = r.sample(StandardNormal);
            proj += *zj * h.direction.as_vector()[j];
        }
        if proj >= h.offset {
            for j in 0..d {
                let y = z[j] / mass;
                sum[j] += y;
                sum_sq[j] += y * y;
            }
        }
    }
    let nf = n as f64;
    max_of((0..d).map(|j| {
        let mean = sum[j] / nf;
        let sd = ((sum_sq[j] - nf * mean * mean) / (nf - 1.0)).sqrt();
        (mean - x[j]).abs() / (sd / nf.sqrt())
    }))
}

/// 3. LP depth against the brute-force oracle.
fn depth_vs_oracle() -> Outcome {
    let results: Vec<(f64, bool)> = (0..200u64)
        .into_par_iter()
        .map(|i| {
            let mut r = rng(3000 + i);
            let d = r.random_range(1..=3);
            let n = r.random_range(d + 2..=10);
            let m = cloud(&mut r, n, d, false);
            let x = if i % 2 == 0 {
                let lambda: Vec<f64> = (0..n).map(|_| r.random::<f64>().powi(2)).collect();
                let s: f64 = lambda.iter().sum();
                m.atoms() * Vector::from_vec(lambda) / s
            } else {
                Vector::from_fn(d, |_, _| r.random_range(-1.5..1.5))
            };
            let lp = zonoid_depth(&m, &x).unwrap().depth;
            let oracle = depth_bruteforce_oracle(&m, &x, 64).unwrap();
            ((lp - oracle).abs(), lp > 0.0)
        })
        .collect();
    let worst = max_of(results.iter().map(|r| r.0));
    let inside = results.iter().filter(|r| r.1).count();
    let two = EmpiricalMeasure::from_rows(&[vec![-1.0], vec![1.0]], None).unwrap();
    let example = (zonoid_depth(&two, &Vector::from_vec(vec![0.5]))
        .unwrap()
        .depth
        - 2.0 / 3.0)
        .abs();
    let mixed = inside > 0 && inside < results.len();
    outcome(
        worst <= 1e-6 && example <= 1e-12 && mixed,
        format!(
            "max |lp - oracle| {worst:.2e} (tol 1e-6) over 200 instances ({inside} inside hull), two-atom example error {example:.1e} (tol 1e-12)"
        ),
    )
}

/// 4. Structural properties of zonoids and trimmed regions.
fn trimmed_region_properties() -> Outcome {
    let alphas: Vec<f64> = (1..=20).map(|k| k as f64 / 20.0).collect();
    let errs: Vec<[f64; 5]> = (0..20u64)
        .into_par_iter()
        .map(|i| {
            let mut r = rng(4000 + i);
            let d = r.random_range(1..=5);
            let n = r.random_range(20..=200);
            let m = cloud(&mut r, n, d, true);
            let mean = m.mean();
            let mu: Measure = m.clone().into();
            let mut centered_atoms = m.atoms().clone();
            for mut c in centered_atoms.column_iter_mut() {
                c -= &mean;
            }
            let centered: Measure = EmpiricalMeasure::new(centered_atoms, m.weights().to_vec())
                .unwrap()
                .into();
            let h = |mu: &Measure, a: f64, u: &Direction| {
                support_trimmed(mu, &TrimmedRegionQuery::new(a, u.clone()).unwrap()).unwrap()
            };
            let mut e = [0.0f64; 5];
            let dirs: Vec<Direction> = if d == 1 {
                vec![
                    Direction::from_slice(&[1.0]).unwrap(),
                    Direction::from_slice(&[-1.0]).unwrap(),
                ]
            } else {
                (0..64).map(|_| unit(&mut r, d)).collect()
            };
            for u in &dirs {
                let b = support_zonoid(&mu, u).unwrap()
                    - support_zonoid(&mu, &u.negated()).unwrap()
                    - u.dot(&mean);
                e[0] = max_of([e[0], b.abs()]);
                let mut prev = f64::INFINITY;
                for &a in &alphas {
                    let v = h(&mu, a, u);
                    e[1] = max_of([e[1], (v - prev).max(0.0)]);
                    prev = v;
                    if a < 1.0 {
                        let f = a * h(&centered, a, u)
                            - (1.0 - a) * h(&centered, 1.0 - a, &u.negated());
                        e[2] = max_of([e[2], f.abs()]);
                    }
                }
                for a in [0.25, 0.5, 0.75] {
                    e[3] = max_of([e[3], (h(&mu, a + 1e-4, u) - h(&mu, a, u)).abs()]);
                }
                let proj: Vec<f64> = (0..n).map(|k| u.dot(&m.atom(k))).collect();
                let mut idx: Vec<usize> = (0..n).collect();
                idx.sort_by(|&p, &q| proj[q].total_cmp(&proj[p]));
                if proj[idx[0]] - proj[idx[1]] > 1e-9 {
                    let bp = trimmed_boundary_point(
                        &mu,
                        &TrimmedRegionQuery::new(1e-4, u.clone()).unwrap(),
                    )
                    .unwrap();
                    e[4] = max_of([e[4], (bp - m.atom(idx[0])).norm()]);
                }
            }
            e
        })
        .collect();
    let col = |k: usize| max_of(errs.iter().map(|e| e[k]));
    let (b, nest, f, g, hh) = (col(0), col(1), col(2), col(3), col(4));
    outcome(
        b <= 1e-10 && nest <= 1e-12 && f <= 1e-10 && g < 1e-3 && hh <= 1e-6,
        format!("(b) {b:.1e} (e) {nest:.1e} (f) {f:.1e} (g) {g:.2e} (h) {hh:.1e}"),
    )
}

/// 5. Zonoid support equals the direct positive-part sum and the exact
///    planar zonotope.
fn support_identity() -> Outcome {
    let mut r = rng(5000);
    let mut direct_gap = 0.0f64;
    let mut polygon_gap = 0.0f64;
    for _ in 0..10 {
        let n = r.random_range(2..=40);
        let m = cloud(&mut r, n, 2, true);
        let mu: Measure = m.clone().into();
        let poly = zonotope_polygon_2d(&m).unwrap();
        for k in 0..360 {
            let t = (k as f64).to_radians();
            let (c, s) = (t.cos(), t.sin());
            let u = Direction::from_slice(&[c, s]).unwrap();
            let h = support_zonoid(&mu, &u).unwrap();
            let direct: f64 = (0..n)
                .map(|i| m.weights()[i] * (m.atoms()[(0, i)] * c + m.atoms()[(1, i)] * s).max(0.0))
                .sum();
            direct_gap = max_of([direct_gap, (h - direct).abs()]);
            polygon_gap = max_of([polygon_gap, (h - poly.support(&u)).abs()]);
        }
    }
    outcome(
        direct_gap <= 1e-12 && polygon_gap <= 1e-10,
        format!("direct sum gap {direct_gap:.1e} (tol 1e-12), polygon gap {polygon_gap:.1e} (tol 1e-10)"),
    )
}

/// 6. Coordinate round trips on the standard Gaussian and the chain
///    identity `G(Φ⁻¹(α)) = r(α)`.
fn coordinate_round_trips() -> Outcome {
    let mut r = rng(6000);
    let mut worst = 0.0f64;
    for i in 0..100 {
        let d = 2 + i % 2;
        let mu: Measure = GaussianMeasure::standard(d).into();
        let x = point_with_norm_in(&mut r, d, 0.05, 3.0);
        for kind in [CoordKind::Offset, CoordKind::Support, CoordKind::Depth] {
            let c = coords_from_point(&mu, &x, kind).unwrap();
            let back = point_from_coords(&mu, &c).unwrap();
            worst = max_of([worst, (back - &x).norm() / x.norm()]);
        }
    }
    let chain = max_of((1..1000).map(|k| {
        let a = k as f64 / 1000.0;
        (g_ratio(normal_quantile(a).unwrap()) - radius(a).unwrap()).abs()
    }));
    outcome(
        worst <= 1e-7 && chain <= 1e-10,
        format!(
            "round trip rel. error {worst:.1e} (tol 1e-7), chain identity {chain:.1e} (tol 1e-10)"
        ),
    )
}

/// 7. `verify` output is byte-identical across runs and worker counts.
fn determinism() -> Outcome {
    let bin = env!("CARGO_BIN_EXE_liftzonoid");
    let run = |suite: &str, workers: &str| {
        let out = Command::new(bin)
            .args([
                "verify",
                "--suite",
                suite,
                "--seed",
                "42",
                "--samples",
                "200000",
                "--workers",
                workers,
            ])
            .output()
            .expect("spawn liftzonoid");
        (out.status.code(), out.stdout)
    };
    let mut notes = Vec::new();
    let mut ok = true;
    for suite in ["theorem1", "gaussian", "roundtrip", "oracle"] {
        let a = run(suite, "1");
        let b = run(suite, "4");
        let c = run(suite, "4");
        let same = a == b && b == c && !a.1.is_empty() && a.0 == Some(0);
        ok &= same;
        notes.push(format!(
            "{suite}:{}",
            if same { "identical" } else { "DIFFERS" }
        ));
    }
    outcome(ok, notes.join(" "))
}

fn main() {
    let criteria: [Criterion; 7] = [
        ("gaussian radius", gaussian_radius, Duration::from_secs(1)),
        (
            "gaussian representation closure",
            gaussian_closure,
            Duration::from_secs(60),
        ),
        (
            "depth LP vs oracle",
            depth_vs_oracle,
            Duration::from_secs(30),
        ),
        (
            "trimmed region properties",
            trimmed_region_properties,
            Duration::from_secs(60),
        ),
        (
            "support function identity",
            support_identity,
            Duration::from_secs(5),
        ),
        (
            "coordinate round trips",
            coordinate_round_trips,
            Duration::from_secs(5),
        ),
        ("verify determinism", determinism, Duration::from_secs(60)),
    ];
    let mut failed = 0;
    for (k, (name, f, budget)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let o = f();
        let took = start.elapsed();
        let pass = o.passed && took <= *budget;
        if !pass {
            failed += 1;
        }
        println!(
            "criterion {} [{name}]: {}  {}  ({:.2}s, budget {}s)",
            k + 1,
            if pass { "PASS" } else { "FAIL" },
            o.detail,
            took.as_secs_f64(),
            budget.as_secs()
        );
    }
    println!(
        "acceptance: {} of {} criteria passed",
        criteria.len() - failed,
        criteria.len()
    );
    if failed > 0 {
        std::process::exit(1);
    }
}
