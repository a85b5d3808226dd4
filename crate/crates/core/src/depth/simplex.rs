//! Dense bounded-variable revised simplex.
//!
//! Solves `max cᵀx` subject to `A x = b`, `0 ≤ x ≤ u` (entries of `u` may be
//! infinite). Phase one minimizes the sum of one artificial per row; phase
//! two keeps the remaining artificials fixed at zero. Pricing is Dantzig's
//! rule until a run of degenerate pivots, after which Bland's rule takes
//! over for the rest of the solve. The basis inverse is kept explicitly,
//! updated by Gauss-Jordan pivots and refactored by LU with partial
//! pivoting every [`REFACTOR_EVERY`] iterations.

use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};

const REFACTOR_EVERY: usize = 64;
const DEGENERATE_RUN_FOR_BLAND: usize = 32;
const PIVOT_TOL: f64 = 1e-11;

#[derive(Debug, Clone)]
pub struct BoundedLp {
    pub a: DMatrix<f64>,
    pub b: DVector<f64>,
    pub cost: Vec<f64>,
    pub upper: Vec<f64>,
}

#[derive(Debug, Clone)]
pub struct LpSolution {
    pub x: Vec<f64>,
    pub objective: f64,
    /// Row duals `y` with reduced costs `d_j = c_j - yᵀ a_j`.
    pub dual: DVector<f64>,
    pub reduced_costs: Vec<f64>,
    pub iterations: usize,
    /// Some nonbasic reduced cost or basic slack to a bound is within the
    /// degeneracy tolerance, so the optimal dual need not be unique.
    pub degenerate: bool,
}

#[derive(Debug, Clone)]
pub enum LpOutcome {
    Optimal(LpSolution),
    Infeasible {
        infeasibility: f64,
        iterations: usize,
    },
}

#[derive(Debug, Clone, Copy, PartialEq)]
enum State {
    Basic(usize),
    Lower,
    Upper,
}

struct Simplex<'a> {
    lp: &'a BoundedLp,
    m: usize,
    n: usize,
    art_sign: Vec<f64>,
    upper: Vec<f64>,
    cost: Vec<f64>,
    state: Vec<State>,
    value: Vec<f64>,
    basis: Vec<usize>,
    binv: DMatrix<f64>,
    iterations: usize,
    bland: bool,
    degenerate_run: usize,
    opt_tol: f64,
}

impl<'a> Simplex<'a> {
    fn new(lp: &'a BoundedLp, opt_tol: f64) -> Self {
        let (m, n) = lp.a.shape();
        let art_sign: Vec<f64> =
            lp.b.iter()
                .map(|bi| if *bi < 0.0 { -1.0 } else { 1.0 })
                .collect();
        let mut upper = lp.upper.clone();
        upper.extend(std::iter::repeat_n(f64::INFINITY, m));
        let mut state = vec![State::Lower; n + m];
        let mut value = vec![0.0; n + m];
        for i in 0..m {
            state[n + i] = State::Basic(i);
            value[n + i] = lp.b[i].abs();
        }
        let binv = DMatrix::from_diagonal(&DVector::from_vec(art_sign.clone()));
        Simplex {
            lp,
            m,
            n,
            art_sign,
            upper,
            cost: vec![0.0; n + m],
            state,
            value,
            basis: (n..n + m).collect(),
            binv,
            iterations: 0,
            bland: false,
            degenerate_run: 0,
            opt_tol,
        }
    }

    fn column(&self, j: usize) -> DVector<f64> {
        if j < self.n {
            self.lp.a.column(j).into_owned()
        } else {
            let mut e = DVector::zeros(self.m);
            e[j - self.n] = self.art_sign[j - self.n];
            e
        }
    }

    fn duals(&self) -> DVector<f64> {
        let cb = DVector::from_iterator(self.m, self.basis.iter().map(|&k| self.cost[k]));
        self.binv.tr_mul(&cb)
    }

    fn reduced_cost(&self, j: usize, y: &DVector<f64>) -> f64 {
        if j < self.n {
            self.cost[j] - self.lp.a.column(j).dot(y)
        } else {
            self.cost[j] - self.art_sign[j - self.n] * y[j - self.n]
        }
    }

    fn refactor(&mut self) -> Result<()> {
        let mut bmat = DMatrix::zeros(self.m, self.m);
        for (r, &k) in self.basis.iter().enumerate() {
            bmat.set_column(r, &self.column(k));
        }
        self.binv = bmat
            .lu()
            .try_inverse()
            .ok_or_else(|| Error::Lp("basis matrix became singular".into()))?;
        let mut rhs = self.lp.b.clone();
        for j in 0..self.n + self.m {
            if !matches!(self.state[j], State::Basic(_)) && self.value[j] != 0.0 {
                rhs -= self.column(j) * self.value[j];
            }
        }
        let xb = &self.binv * rhs;
        for (r, &k) in self.basis.iter().enumerate() {
            self.value[k] = xb[r];
        }
        Ok(())
    }

    /// Runs simplex iterations on the current cost until optimal.
    fn optimize(&mut self, max_iter: usize) -> Result<()> {
        loop {
            if self.iterations >= max_iter {
                return Err(Error::Lp(format!("iteration limit {max_iter} reached")));
            }
            let y = self.duals();
            let mut entering: Option<(usize, f64, f64)> = None;
            for j in 0..self.n + self.m {
                let dir = match self.state[j] {
                    State::Basic(_) => continue,
                    _ if self.upper[j] == 0.0 => continue,
                    State::Lower => 1.0,
                    State::Upper => -1.0,
                };
                let d = self.reduced_cost(j, &y);
                if d * dir > self.opt_tol {
                    if self.bland {
                        entering = Some((j, dir, d));
                        break;
                    }
                    if entering.is_none_or(|(_, _, best)| d.abs() > best.abs()) {
                        entering = Some((j, dir, d));
                    }
                }
            }
            let Some((j, dir, _)) = entering else {
                return Ok(());
            };

            let col = &self.binv * self.column(j);
            let mut theta = self.upper[j];
            let mut leaving: Option<(usize, bool)> = None;
            let mut best_pivot = 0.0;
            for r in 0..self.m {
                let delta = dir * col[r];
                let k = self.basis[r];
                let (limit, to_upper) = if delta > PIVOT_TOL {
                    (self.value[k] / delta, false)
                } else if delta < -PIVOT_TOL && self.upper[k].is_finite() {
                    ((self.upper[k] - self.value[k]) / -delta, true)
                } else {
                    continue;
                };
                let limit = limit.max(0.0);
                let better = if limit < theta - 1e-13 {
                    true
                } else if limit <= theta + 1e-13 {
                    match leaving {
                        None => true,
                        Some((r0, _)) if self.bland => k < self.basis[r0],
                        Some(_) => delta.abs() > best_pivot,
                    }
                } else {
                    false
                };
                if better {
                    theta = limit.min(theta);
                    leaving = Some((r, to_upper));
                    best_pivot = delta.abs();
                }
            }
            if theta.is_infinite() {
                return Err(Error::Lp("problem is unbounded".into()));
            }

            for r in 0..self.m {
                let k = self.basis[r];
                self.value[k] -= dir * theta * col[r];
            }
            self.value[j] += dir * theta;
            self.iterations += 1;
            if theta <= 1e-12 {
                self.degenerate_run += 1;
                if self.degenerate_run >= DEGENERATE_RUN_FOR_BLAND {
                    self.bland = true;
                }
            } else {
                self.degenerate_run = 0;
            }

            match leaving {
                None => {
                    self.state[j] = if dir > 0.0 {
                        State::Upper
                    } else {
                        State::Lower
                    };
                    self.value[j] = if dir > 0.0 { self.upper[j] } else { 0.0 };
                }
                Some((r, to_upper)) => {
                    let k = self.basis[r];
                    self.state[k] = if to_upper { State::Upper } else { State::Lower };
                    self.value[k] = if to_upper { self.upper[k] } else { 0.0 };
                    self.basis[r] = j;
                    self.state[j] = State::Basic(r);
                    self.pivot(r, &col);
                    if self.iterations.is_multiple_of(REFACTOR_EVERY) {
                        self.refactor()?;
                    }
                }
            }
        }
    }

    fn pivot(&mut self, r: usize, col: &DVector<f64>) {
        let p = col[r];
        let pivot_row = self.binv.row(r) / p;
        for i in 0..self.m {
            if i != r && col[i] != 0.0 {
                let f = col[i];
                for (k, pk) in pivot_row.iter().enumerate() {
                    self.binv[(i, k)] -= f * pk;
                }
            }
        }
        self.binv.set_row(r, &pivot_row);
    }
}

/// Solves the LP. `opt_tol` is the reduced-cost optimality threshold and
/// `feas_tol` the phase-one infeasibility threshold.
pub fn solve(
    lp: &BoundedLp,
    opt_tol: f64,
    feas_tol: f64,
    degenerate_tol: f64,
) -> Result<LpOutcome> {
    let (m, n) = lp.a.shape();
    if lp.b.len() != m || lp.cost.len() != n || lp.upper.len() != n {
        return Err(Error::Lp("inconsistent problem dimensions".into()));
    }
    if lp.upper.iter().any(|u| u.is_nan() || *u < 0.0) {
        return Err(Error::Lp("upper bounds must be non-negative".into()));
    }
    let max_iter = 50 * (n + m) + 1000;
    let mut s = Simplex::new(lp, opt_tol);

    let infeasibility = |s: &Simplex| (n..n + m).map(|k| s.value[k]).sum::<f64>();
    if infeasibility(&s) > feas_tol {
        for k in n..n + m {
            s.cost[k] = -1.0;
        }
        s.optimize(max_iter)?;
        let infeas = infeasibility(&s);
        if infeas > feas_tol {
            return Ok(LpOutcome::Infeasible {
                infeasibility: infeas,
                iterations: s.iterations,
            });
        }
    }

    // phase two: artificials pinned at zero
    for k in n..n + m {
        s.cost[k] = 0.0;
        s.upper[k] = 0.0;
        if !matches!(s.state[k], State::Basic(_)) {
            s.state[k] = State::Lower;
            s.value[k] = 0.0;
        }
    }
    s.cost[..n].copy_from_slice(&lp.cost);
    s.bland = false;
    s.degenerate_run = 0;
    s.optimize(max_iter)?;
    s.refactor()?;

    let y = s.duals();
    let reduced_costs: Vec<f64> = (0..n).map(|j| s.reduced_cost(j, &y)).collect();
    let degenerate = (0..n).any(|j| match s.state[j] {
        State::Basic(_) => {
            let slack = s.value[j].min(lp.upper[j] - s.value[j]);
            slack <= degenerate_tol * lp.upper[j].min(1.0)
        }
        _ => lp.upper[j] > 0.0 && reduced_costs[j].abs() <= degenerate_tol,
    });
    let x: Vec<f64> = (0..n).map(|j| s.value[j].clamp(0.0, lp.upper[j])).collect();
    let objective = x.iter().zip(&lp.cost).map(|(xi, ci)| xi * ci).sum();
    Ok(LpOutcome::Optimal(LpSolution {
        x,
        objective,
        dual: y,
        reduced_costs,
        iterations: s.iterations,
        degenerate,
    }))
}
