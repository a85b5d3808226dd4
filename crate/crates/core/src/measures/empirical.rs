use nalgebra::DMatrix;

use super::types::{check_dim, check_finite, Direction, HalfSpace, Vector};
use crate::error::{Error, Result};

/// Weighted finite point cloud. Atoms are stored as the columns of a `d × n`
/// matrix; weights are positive and sum to one.
#[derive(Debug, Clone, PartialEq)]
pub struct EmpiricalMeasure {
    atoms: DMatrix<f64>,
    weights: Vec<f64>,
}

impl EmpiricalMeasure {
    /// Builds a measure from atom columns and positive weights.
    ///
    /// Weights are divided by their sum; a warning is logged when that sum is
    /// off from one by more than `1e-9`.
    pub fn new(atoms: DMatrix<f64>, weights: Vec<f64>) -> Result<Self> {
        let (d, n) = atoms.shape();
        if n == 0 {
            return Err(Error::Empty);
        }
        if d == 0 {
            return Err(Error::Input(
                "atoms must have at least one coordinate".into(),
            ));
        }
        if weights.len() != n {
            return Err(Error::InvalidWeights(format!(
                "{} weights for {n} atoms",
                weights.len()
            )));
        }
        if atoms.iter().any(|x| !x.is_finite()) {
            return Err(Error::NonFinite("atom coordinates".into()));
        }
        if let Some(w) = weights.iter().find(|w| !(w.is_finite() && **w > 0.0)) {
            return Err(Error::InvalidWeights(format!("weight {w} is not positive")));
        }
        let total: f64 = weights.iter().sum();
        if (total - 1.0).abs() > 1e-9 {
            log::warn!("weights sum to {total}; renormalizing");
        }
        let weights = weights.into_iter().map(|w| w / total).collect();
        Ok(EmpiricalMeasure { atoms, weights })
    }

    pub fn uniform(atoms: DMatrix<f64>) -> Result<Self> {
        let n = atoms.ncols();
        Self::new(atoms, vec![1.0 / n as f64; n])
    }

    /// Atoms given as rows.
    pub fn from_rows(rows: &[Vec<f64>], weights: Option<Vec<f64>>) -> Result<Self> {
        let n = rows.len();
        if n == 0 {
            return Err(Error::Empty);
        }
        let d = rows[0].len();
        if let Some(bad) = rows.iter().find(|r| r.len() != d) {
            return Err(Error::DimensionMismatch {
                expected: d,
                found: bad.len(),
            });
        }
        let atoms = DMatrix::from_fn(d, n, |i, j| rows[j][i]);
        let weights = weights.unwrap_or_else(|| vec![1.0 / n as f64; n]);
        Self::new(atoms, weights)
    }

    pub fn dim(&self) -> usize {
        self.atoms.nrows()
    }

    pub fn len(&self) -> usize {
        self.atoms.ncols()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn atoms(&self) -> &DMatrix<f64> {
        &self.atoms
    }

    pub fn atom(&self, i: usize) -> Vector {
        self.atoms.column(i).into_owned()
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn mean(&self) -> Vector {
        &self.atoms * Vector::from_column_slice(&self.weights)
    }

    /// Projections `⟨x_i, u⟩` in atom order.
    pub fn projections(&self, u: &Direction) -> Result<Vec<f64>> {
        check_dim(self.dim(), u.dim())?;
        Ok(self.atoms.tr_mul(u.as_vector()).as_slice().to_vec())
    }

    pub fn halfspace_mass(&self, h: &HalfSpace) -> Result<f64> {
        check_dim(self.dim(), h.dim())?;
        if h.is_whole_space() {
            return Ok(1.0);
        }
        let p = self.projections(&h.direction)?;
        Ok(p.iter()
            .zip(&self.weights)
            .filter(|(pi, _)| **pi >= h.offset)
            .map(|(_, w)| w)
            .sum())
    }

    /// Weighted average of the atoms inside `h`.
    pub fn halfspace_barycenter(&self, h: &HalfSpace) -> Result<Vector> {
        check_dim(self.dim(), h.dim())?;
        if h.is_whole_space() {
            return Ok(self.mean());
        }
        let p = self.projections(&h.direction)?;
        let mut sum = Vector::zeros(self.dim());
        let mut mass = 0.0;
        for (i, (pi, w)) in p.iter().zip(&self.weights).enumerate() {
            if *pi >= h.offset {
                sum += self.atoms.column(i) * *w;
                mass += w;
            }
        }
        if mass == 0.0 {
            return Err(Error::ZeroMass);
        }
        Ok(sum / mass)
    }

    /// Law of `M X + b`.
    pub fn affine_image(&self, m: &DMatrix<f64>, b: &Vector) -> Result<Self> {
        check_dim(self.dim(), m.ncols())?;
        check_dim(m.nrows(), b.len())?;
        check_finite(b, "offset vector")?;
        let mut atoms = m * &self.atoms;
        for mut col in atoms.column_iter_mut() {
            col += b;
        }
        Self::new(atoms, self.weights.clone())
    }

    /// Numerical rank of the centered atom matrix, by column-pivoted QR.
    pub fn affine_rank(&self, rel_tol: f64) -> usize {
        let mean = self.mean();
        let mut centered = self.atoms.transpose();
        for mut row in centered.row_iter_mut() {
            row -= mean.transpose();
        }
        let max_col = centered.column_iter().map(|c| c.norm()).fold(0.0, f64::max);
        if max_col == 0.0 {
            return 0;
        }
        let qr = centered.col_piv_qr();
        let r = qr.r();
        let k = r.nrows().min(r.ncols());
        (0..k)
            .filter(|&i| r[(i, i)].abs() > rel_tol * max_col)
            .count()
    }
}
