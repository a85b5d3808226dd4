use nalgebra::DMatrix;
use rand::Rng;
use rand_distr::StandardNormal;

use crate::measures::{Direction, Vector};
use crate::rng::stream;

const GOLDEN_ANGLE: f64 = 2.399_963_229_728_653_3;

/// Quasi-uniform unit directions.
///
/// * `d = 1`: the two directions `±1` (whatever `k` is).
/// * `d = 2`: golden-angle points on the circle, rotated by a seed-derived
///   angle and returned in counterclockwise order.
/// * `d = 3`: a Fibonacci sphere under a seed-derived rotation.
/// * `d > 3`: normalized Gaussian draws from the seeded stream.
pub fn direction_grid(dim: usize, k: usize, seed: u64) -> Vec<Direction> {
    let mut rng = stream(seed, 0x5eed_d1ec);
    match dim {
        0 => Vec::new(),
        1 => vec![Direction::axis(1, 0), Direction::axis(1, 0).negated()],
        2 => {
            let offset: f64 = rng.random::<f64>() * std::f64::consts::TAU;
            let mut angles: Vec<f64> = (0..k)
                .map(|j| (offset + j as f64 * GOLDEN_ANGLE).rem_euclid(std::f64::consts::TAU))
                .collect();
            angles.sort_by(f64::total_cmp);
            angles
                .into_iter()
                .map(|t| Direction::from_slice(&[t.cos(), t.sin()]).expect("unit circle point"))
                .collect()
        }
        3 => {
            let rot = random_rotation(3, &mut rng);
            (0..k)
                .map(|j| {
                    let z = 1.0 - (2.0 * j as f64 + 1.0) / k as f64;
                    let r = (1.0 - z * z).max(0.0).sqrt();
                    let t = j as f64 * GOLDEN_ANGLE;
                    let p = Vector::from_vec(vec![r * t.cos(), r * t.sin(), z]);
                    Direction::new(&rot * p).expect("sphere point")
                })
                .collect()
        }
        _ => (0..k)
            .map(|_| loop {
                let v = Vector::from_fn(dim, |_, _| rng.sample::<f64, _>(StandardNormal));
                if let Ok(u) = Direction::new(v) {
                    break u;
                }
            })
            .collect(),
    }
}

/// Orthogonal matrix from the QR factor of a Gaussian matrix.
pub fn random_rotation<R: Rng>(dim: usize, rng: &mut R) -> DMatrix<f64> {
    let g = DMatrix::from_fn(dim, dim, |_, _| rng.sample::<f64, _>(StandardNormal));
    let qr = g.qr();
    let (q, r) = (qr.q(), qr.r());
    let mut q = q;
    for j in 0..dim {
        if r[(j, j)] < 0.0 {
            let mut col = q.column_mut(j);
            col *= -1.0;
        }
    }
    q
}
