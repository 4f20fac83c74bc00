//! Primal active-set solver for nonnegative least squares with optional
//! "sum to one" groups:
//!
//! ```text
//! min ||G c - t||   s.t.  c >= 0,   sum_{j in g} c_j = 1  for every group g
//! ```
//!
//! With no groups this is exactly the Lawson–Hanson iteration. Groups are
//! handled by a null-space parametrization of the equality constraints on the
//! passive set, so every inner solve is an ordinary least-squares problem.

use nalgebra::{DMatrix, DVector};

use super::linalg::lstsq;
use crate::error::{Error, Result};
use crate::vector::DenseVector;

pub(crate) struct GroupedLsq<'a> {
    pub dim: usize,
    pub columns: Vec<&'a [f64]>,
    pub target: &'a [f64],
    /// Group index per column; `None` for free nonnegative columns.
    pub group: Vec<Option<usize>>,
    pub num_groups: usize,
}

#[derive(Debug, Clone)]
pub(crate) struct ActiveSetSolution {
    pub coeffs: Vec<f64>,
    pub point: Vec<f64>,
    pub iterations: usize,
    /// Largest KKT defect at the returned iterate.
    pub kkt_residual: f64,
}

impl<'a> GroupedLsq<'a> {
    fn n(&self) -> usize {
        self.columns.len()
    }

    fn combine(&self, c: &[f64]) -> Vec<f64> {
        let mut p = vec![0.0; self.dim];
        for (j, col) in self.columns.iter().enumerate() {
            if c[j] != 0.0 {
                for i in 0..self.dim {
                    p[i] += c[j] * col[i];
                }
            }
        }
        p
    }

    fn gradient(&self, c: &[f64]) -> Vec<f64> {
        let p = self.combine(c);
        let r: Vec<f64> = p.iter().zip(self.target).map(|(a, b)| a - b).collect();
        self.columns
            .iter()
            .map(|col| col.iter().zip(&r).map(|(a, b)| a * b).sum())
            .collect()
    }

    /// Group multipliers and reduced gradients at `c` for passive set `free`.
    fn reduced(&self, c: &[f64], free: &[bool]) -> (Vec<f64>, f64) {
        let g = self.gradient(c);
        let mut sum = vec![0.0; self.num_groups];
        let mut cnt = vec![0usize; self.num_groups];
        for j in 0..self.n() {
            if let (Some(k), true) = (self.group[j], free[j]) {
                sum[k] += g[j];
                cnt[k] += 1;
            }
        }
        let nu: Vec<f64> = (0..self.num_groups)
            .map(|k| if cnt[k] > 0 { -sum[k] / cnt[k] as f64 } else { 0.0 })
            .collect();
        let red: Vec<f64> = (0..self.n())
            .map(|j| g[j] + self.group[j].map_or(0.0, |k| nu[k]))
            .collect();
        let mut defect: f64 = 0.0;
        for j in 0..self.n() {
            if free[j] {
                defect = defect.max(red[j].abs());
            } else {
                defect = defect.max(-red[j]);
            }
        }
        (red, defect)
    }

    /// Least-squares solve restricted to the passive set, honouring groups.
    fn passive_solve(&self, c: &[f64], free: &[bool]) -> Vec<f64> {
        // Pivot member per group: the passive column currently carrying most weight.
        let mut pivot: Vec<Option<usize>> = vec![None; self.num_groups];
        for j in 0..self.n() {
            if let (Some(k), true) = (self.group[j], free[j]) {
                match pivot[k] {
                    Some(p) if c[p] >= c[j] => {}
                    _ => pivot[k] = Some(j),
                }
            }
        }
        let mut rhs: Vec<f64> = self.target.to_vec();
        for p in pivot.iter().flatten() {
            for i in 0..self.dim {
                rhs[i] -= self.columns[*p][i];
            }
        }
        let unknowns: Vec<usize> = (0..self.n())
            .filter(|&j| free[j] && self.group[j].map_or(true, |k| pivot[k] != Some(j)))
            .collect();
        let mut z = vec![0.0; self.n()];
        for p in pivot.iter().flatten() {
            z[*p] = 1.0;
        }
        if unknowns.is_empty() {
            return z;
        }
        let m = DMatrix::from_fn(self.dim, unknowns.len(), |i, u| {
            let j = unknowns[u];
            match self.group[j] {
                None => self.columns[j][i],
                Some(k) => self.columns[j][i] - self.columns[pivot[k].unwrap()][i],
            }
        });
        let y = lstsq(&m, &DVector::from_vec(rhs));
        for (u, &j) in unknowns.iter().enumerate() {
            z[j] = y[u];
            if let Some(k) = self.group[j] {
                z[pivot[k].unwrap()] -= y[u];
            }
        }
        z
    }

    fn default_start(&self) -> Vec<f64> {
        let mut c = vec![0.0; self.n()];
        for k in 0..self.num_groups {
            let best = (0..self.n())
                .filter(|&j| self.group[j] == Some(k))
                .min_by(|&a, &b| {
                    let da: f64 = self.columns[a]
                        .iter()
                        .zip(self.target)
                        .map(|(x, y)| (x - y) * (x - y))
                        .sum();
                    let db: f64 = self.columns[b]
                        .iter()
                        .zip(self.target)
                        .map(|(x, y)| (x - y) * (x - y))
                        .sum();
                    da.partial_cmp(&db).unwrap()
                });
            if let Some(j) = best {
                c[j] = 1.0;
            }
        }
        c
    }

    fn scale(&self) -> f64 {
        let cmax = self
            .columns
            .iter()
            .map(|c| c.iter().map(|v| v * v).sum::<f64>().sqrt())
            .fold(0.0, f64::max);
        let t: f64 = self.target.iter().map(|v| v * v).sum::<f64>().sqrt();
        cmax * (cmax + t)
    }

    pub fn solve(&self, start: Option<Vec<f64>>, tol: f64, max_iter: usize) -> Result<ActiveSetSolution> {
        let n = self.n();
        for k in 0..self.num_groups {
            if !self.group.iter().any(|g| *g == Some(k)) {
                return Err(Error::Input(format!("group {k} has no columns")));
            }
        }
        let mut c = start.unwrap_or_else(|| self.default_start());
        let mut free: Vec<bool> = c.iter().map(|&v| v > 0.0).collect();
        // Roundoff floor for reduced gradients.
        let tol = tol.max(1e-13 * self.scale());
        let mut rejected = vec![false; n];
        let mut iterations = 0usize;
        if free.iter().any(|&f| f) {
            // A warm start need not be stationary on its own support.
            self.inner(&mut c, &mut free, None);
        }

        loop {
            iterations += 1;
            let (red, defect) = self.reduced(&c, &free);
            if iterations > max_iter {
                return Err(Error::numerical(
                    "active_set",
                    "iteration cap exceeded",
                    defect,
                    Some(DenseVector::from_vec(self.combine(&c))),
                ));
            }
            let entering = (0..n)
                .filter(|&j| !free[j] && !rejected[j] && red[j] < -tol)
                .min_by(|&a, &b| red[a].partial_cmp(&red[b]).unwrap());
            let Some(j_new) = entering else {
                return Ok(ActiveSetSolution {
                    point: self.combine(&c),
                    coeffs: c,
                    iterations,
                    kkt_residual: defect,
                });
            };
            free[j_new] = true;
            if !self.inner(&mut c, &mut free, Some(j_new)) {
                free[j_new] = false;
                rejected[j_new] = true;
            } else {
                rejected.iter_mut().for_each(|r| *r = false);
            }
        }
    }

    /// Inner Lawson–Hanson loop. Returns false if the newly added column was
    /// immediately rejected by the subproblem (numerically dependent).
    fn inner(&self, c: &mut [f64], free: &mut [bool], added: Option<usize>) -> bool {
        let n = self.n();
        let mut first = true;
        for _ in 0..=n + 1 {
            let z = self.passive_solve(c, free);
            if first {
                if let Some(j) = added {
                    if z[j] <= 0.0 {
                        return false;
                    }
                }
                first = false;
            }
            let blocking: Vec<usize> = (0..n).filter(|&j| free[j] && z[j] <= 0.0).collect();
            if blocking.is_empty() {
                for j in 0..n {
                    c[j] = if free[j] { z[j] } else { 0.0 };
                }
                return true;
            }
            let mut alpha = 1.0f64;
            for &j in &blocking {
                let denom = c[j] - z[j];
                if denom > 0.0 {
                    alpha = alpha.min(c[j] / denom);
                }
            }
            for j in 0..n {
                if free[j] {
                    c[j] += alpha * (z[j] - c[j]);
                }
            }
            for j in 0..n {
                if free[j] && c[j] <= 1e-15 {
                    let keep = self.group[j].is_some_and(|k| {
                        !(0..n).any(|i| i != j && free[i] && self.group[i] == Some(k) && c[i] > 1e-15)
                    });
                    if !keep {
                        free[j] = false;
                        c[j] = 0.0;
                    }
                }
            }
        }
        true
    }
}
