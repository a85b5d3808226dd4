//! Slow reference for zonoid depth on tiny inputs.
//!
//! `x` lies in `D_α` iff `⟨x,u⟩ ≤ h(D_α,u)` for every direction. For a
//! finite point set the binding directions are facet normals of some
//! `D_α`, and every such facet is spanned by `d` atoms' affine hull
//! differences, so the candidate set below (plus a dense grid) suffices.
//! Depth is then found by bisection on `α`.

use nalgebra::Vector3;

use crate::error::{Error, Result};
use crate::measures::{EmpiricalMeasure, Vector};

const MAX_ATOMS: usize = 12;
const MAX_DIM: usize = 3;

fn candidate_normals(m: &EmpiricalMeasure, grid: usize) -> Vec<Vector> {
    let d = m.dim();
    let n = m.len();
    let mut out: Vec<Vector> = Vec::new();
    let mut push = |v: Vector| {
        let norm = v.norm();
        if norm > 1e-12 {
            let v = v / norm;
            out.push(-&v);
            out.push(v);
        }
    };
    match d {
        1 => push(Vector::from_element(1, 1.0)),
        2 => {
            for i in 0..n {
                for j in i + 1..n {
                    let e = m.atom(j) - m.atom(i);
                    push(Vector::from_vec(vec![-e[1], e[0]]));
                }
            }
            for k in 0..grid {
                let t = k as f64 * std::f64::consts::TAU / grid as f64;
                push(Vector::from_vec(vec![t.cos(), t.sin()]));
            }
        }
        _ => {
            let p = |i: usize| {
                let a = m.atom(i);
                Vector3::new(a[0], a[1], a[2])
            };
            for i in 0..n {
                for j in i + 1..n {
                    for k in j + 1..n {
                        let c = (p(j) - p(i)).cross(&(p(k) - p(i)));
                        push(Vector::from_column_slice(c.as_slice()));
                    }
                    // facets of zonoid regions can also be spanned by two parallel edge classes
                    for k in 0..n {
                        for l in k + 1..n {
                            let c = (p(j) - p(i)).cross(&(p(l) - p(k)));
                            push(Vector::from_column_slice(c.as_slice()));
                        }
                    }
                }
            }
            let g = (grid / 4).max(2);
            for a in 0..g {
                let z = -1.0 + (2 * a + 1) as f64 / g as f64;
                let r = (1.0 - z * z).sqrt();
                for b in 0..2 * g {
                    let t = b as f64 * std::f64::consts::PI / g as f64;
                    push(Vector::from_vec(vec![r * t.cos(), r * t.sin(), z]));
                }
            }
        }
    }
    out
}

/// Mean of the top `α` mass of the projections, ties shared evenly.
fn top_mass_level(proj: &[f64], w: &[f64], alpha: f64) -> f64 {
    let mut order: Vec<(f64, f64)> = proj.iter().copied().zip(w.iter().copied()).collect();
    order.sort_by(|a, b| b.0.total_cmp(&a.0));
    let mut left = alpha;
    let mut acc = 0.0;
    for (p, wi) in order {
        let take = wi.min(left);
        acc += take * p;
        left -= take;
        if left <= 0.0 {
            break;
        }
    }
    acc / alpha
}

fn contains(m: &EmpiricalMeasure, normals: &[Vector], x: &Vector, alpha: f64) -> bool {
    let w = m.weights();
    normals.iter().all(|u| {
        let proj: Vec<f64> = (0..m.len()).map(|i| m.atom(i).dot(u)).collect();
        let scale = proj.iter().fold(1.0f64, |s, p| s.max(p.abs()));
        x.dot(u) <= top_mass_level(&proj, w, alpha) + 1e-11 * scale
    })
}

/// Depth of `x` by bisection over candidate facet normals; `grid`
/// controls the extra dense directions. Only for `n ≤ 12`, `d ≤ 3`.
pub fn depth_bruteforce_oracle(m: &EmpiricalMeasure, x: &Vector, grid: usize) -> Result<f64> {
    let (n, d) = (m.len(), m.dim());
    if n > MAX_ATOMS || d > MAX_DIM {
        return Err(Error::TooLarge(format!(
            "oracle handles n ≤ {MAX_ATOMS}, d ≤ {MAX_DIM}; got n = {n}, d = {d}"
        )));
    }
    if x.len() != d {
        return Err(Error::DimensionMismatch {
            expected: d,
            found: x.len(),
        });
    }
    let normals = candidate_normals(m, grid);
    let lo0 = m.weights().iter().copied().fold(1.0, f64::min);
    if !contains(m, &normals, x, lo0) {
        // D_{min w} is the convex hull
        return Ok(0.0);
    }
    let (mut lo, mut hi) = (lo0, 1.0);
    if contains(m, &normals, x, hi) {
        return Ok(1.0);
    }
    for _ in 0..60 {
        let mid = 0.5 * (lo + hi);
        if contains(m, &normals, x, mid) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(lo)
}
