use serde::Serialize;

use crate::error::{Error, Result};
use crate::measures::{Direction, EmpiricalMeasure};

/// Convex polygon with counterclockwise vertices. Degenerate zonotopes come
/// out as a single point or a two-vertex segment.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Polygon2D {
    pub vertices: Vec<[f64; 2]>,
}

impl Polygon2D {
    pub fn support(&self, u: &Direction) -> f64 {
        let u = u.as_vector();
        self.vertices
            .iter()
            .map(|v| v[0] * u[0] + v[1] * u[1])
            .fold(f64::NEG_INFINITY, f64::max)
    }

    /// Signed area (positive for counterclockwise order).
    pub fn area(&self) -> f64 {
        let n = self.vertices.len();
        (0..n)
            .map(|i| {
                let a = self.vertices[i];
                let b = self.vertices[(i + 1) % n];
                a[0] * b[1] - a[1] * b[0]
            })
            .sum::<f64>()
            * 0.5
    }
}

fn cross(a: [f64; 2], b: [f64; 2]) -> f64 {
    a[0] * b[1] - a[1] * b[0]
}

/// Zonoid of a planar empirical measure: the Minkowski sum of the segments
/// `[0, w_i x_i]`.
///
/// Generators are flipped into the half-plane of angles `[0, π)`, parallel
/// ones merged, and the boundary is walked once forward and once backward in
/// angular order starting from the lowest-angle extreme vertex.
pub fn zonotope_polygon_2d(measure: &EmpiricalMeasure) -> Result<Polygon2D> {
    if measure.dim() != 2 {
        return Err(Error::WrongDimension {
            expected: 2,
            found: measure.dim(),
        });
    }
    let atoms = measure.atoms();
    let mut center = [0.0, 0.0];
    let mut gens: Vec<([f64; 2], f64)> = Vec::new();
    let mut scale = 0.0f64;
    for (i, w) in measure.weights().iter().enumerate() {
        let g = [atoms[(0, i)] * w, atoms[(1, i)] * w];
        center[0] += 0.5 * g[0];
        center[1] += 0.5 * g[1];
        scale = scale.max(g[0].abs().max(g[1].abs()));
        if g == [0.0, 0.0] {
            continue;
        }
        let flipped = if g[1] < 0.0 || (g[1] == 0.0 && g[0] < 0.0) {
            [-g[0], -g[1]]
        } else {
            g
        };
        gens.push((flipped, flipped[1].atan2(flipped[0])));
    }
    if gens.is_empty() {
        return Ok(Polygon2D {
            vertices: vec![center],
        });
    }
    gens.sort_by(|a, b| a.1.total_cmp(&b.1));

    let mut merged: Vec<[f64; 2]> = Vec::new();
    for (g, _) in gens {
        if let Some(last) = merged.last_mut() {
            let tol = 1e-12 * (last[0].hypot(last[1]) * g[0].hypot(g[1])).max(scale * scale * 1e-6);
            if cross(*last, g).abs() <= tol && last[0] * g[0] + last[1] * g[1] > 0.0 {
                last[0] += g[0];
                last[1] += g[1];
                continue;
            }
        }
        merged.push(g);
    }
    // first and last may be antiparallel-adjacent through the angle wrap
    // (angles near 0 and near π); those are parallel as centered segments
    if merged.len() > 1 {
        let first = merged[0];
        let last = *merged.last().unwrap();
        let tol = 1e-12 * first[0].hypot(first[1]) * last[0].hypot(last[1]);
        if cross(first, last).abs() <= tol && first[0] * last[0] + first[1] * last[1] < 0.0 {
            merged[0] = [first[0] - last[0], first[1] - last[1]];
            merged.pop();
        }
    }

    let half_sum = merged.iter().fold([0.0, 0.0], |acc, g| {
        [acc[0] + 0.5 * g[0], acc[1] + 0.5 * g[1]]
    });
    let mut p = [center[0] - half_sum[0], center[1] - half_sum[1]];
    let mut vertices = Vec::with_capacity(2 * merged.len());
    if merged.len() == 1 {
        let g = merged[0];
        vertices.push(p);
        vertices.push([p[0] + g[0], p[1] + g[1]]);
        return Ok(Polygon2D { vertices });
    }
    for sign in [1.0, -1.0] {
        for g in &merged {
            vertices.push(p);
            p = [p[0] + sign * g[0], p[1] + sign * g[1]];
        }
    }
    Ok(Polygon2D { vertices })
}
