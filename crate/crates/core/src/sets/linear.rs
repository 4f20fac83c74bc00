//! Linear (LP-representable) forms of polyhedral sets.

use super::SetDescription;
use crate::error::{Error, Result};
use crate::kernels::lp::{solve_lp, LinearProgram, LpStatus, RowSense, FEAS_TOL};
use crate::vector::DenseVector;

/// `{x : A x ≤ b, E x = f, x ∈ conv(P_k) + cone(R_k) for every k}`.
#[derive(Debug, Clone, Default)]
pub struct LinearForm {
    pub dim: usize,
    pub ineq: Vec<(Vec<f64>, f64)>,
    pub eq: Vec<(Vec<f64>, f64)>,
    pub vsets: Vec<(Vec<DenseVector>, Vec<DenseVector>)>,
}

/// Result of maximizing a linear functional over a [`LinearForm`].
#[derive(Debug, Clone)]
pub enum LinearMax {
    Optimal { value: f64, point: DenseVector },
    Unbounded,
    Infeasible,
}

impl LinearForm {
    fn shifted(mut self, s: &DenseVector) -> Self {
        for (a, b) in self.ineq.iter_mut().chain(self.eq.iter_mut()) {
            *b += a.iter().zip(s.iter()).map(|(x, y)| x * y).sum::<f64>();
        }
        for (p, _) in &mut self.vsets {
            for q in p.iter_mut() {
                *q = &*q + s;
            }
        }
        self
    }

    fn merge(&mut self, other: LinearForm) {
        self.ineq.extend(other.ineq);
        self.eq.extend(other.eq);
        self.vsets.extend(other.vsets);
    }

    /// Builds the LP over stacked variables `(x, λ_1, μ_1, ...)`.
    pub fn program(&self, objective: &DenseVector) -> LinearProgram {
        let d = self.dim;
        let extra: usize = self.vsets.iter().map(|(p, r)| p.len() + r.len()).sum();
        let n = d + extra;
        let mut c = vec![0.0; n];
        c[..d].copy_from_slice(objective.as_slice());
        let mut lp = LinearProgram::maximize(c);
        for j in 0..d {
            lp.set_free(j);
        }
        let pad = |a: &[f64]| {
            let mut row = vec![0.0; n];
            row[..d].copy_from_slice(a);
            row
        };
        for (a, b) in &self.ineq {
            lp.add_row(pad(a), RowSense::Le, *b);
        }
        for (a, b) in &self.eq {
            lp.add_row(pad(a), RowSense::Eq, *b);
        }
        let mut off = d;
        for (pts, rays) in &self.vsets {
            for i in 0..d {
                let mut row = vec![0.0; n];
                row[i] = 1.0;
                for (k, g) in pts.iter().chain(rays).enumerate() {
                    row[off + k] = -g[i];
                }
                lp.add_row(row, RowSense::Eq, 0.0);
            }
            let mut row = vec![0.0; n];
            for k in 0..pts.len() {
                row[off + k] = 1.0;
            }
            lp.add_row(row, RowSense::Eq, 1.0);
            off += pts.len() + rays.len();
        }
        lp
    }

    pub fn maximize(&self, u: &DenseVector) -> Result<LinearMax> {
        u.check_dim(self.dim, "linear objective")?;
        let out = solve_lp(&self.program(u), FEAS_TOL)?;
        Ok(match out.status {
            LpStatus::Infeasible => LinearMax::Infeasible,
            LpStatus::Unbounded => LinearMax::Unbounded,
            LpStatus::Optimal => {
                let x = out.primal_solution.expect("optimal has solution");
                LinearMax::Optimal {
                    value: out.optimal_value,
                    point: DenseVector::from_slice(&x.as_slice()[..self.dim]),
                }
            }
        })
    }

    pub fn is_feasible(&self) -> Result<bool> {
        let zero = DenseVector::zeros(self.dim.max(1));
        if self.dim == 0 {
            return Err(Error::Input("empty linear form".into()));
        }
        Ok(!matches!(self.maximize(&zero)?, LinearMax::Infeasible))
    }
}

impl SetDescription {
    /// LP description, when the set is polyhedral.
    pub fn linear_form(&self) -> Option<LinearForm> {
        let d = self.dim();
        let mut lf = LinearForm { dim: d, ..Default::default() };
        match self {
            SetDescription::Halfspace { normal, offset } => lf.ineq.push((normal.as_slice().to_vec(), *offset)),
            SetDescription::Hyperplane { normal, offset } => lf.eq.push((normal.as_slice().to_vec(), *offset)),
            SetDescription::Box { lower, upper } => {
                for i in 0..d {
                    if upper[i].is_finite() {
                        lf.ineq.push((DenseVector::basis(d, i).into_vec(), upper[i]));
                    }
                    if lower[i].is_finite() {
                        lf.ineq.push(((-&DenseVector::basis(d, i)).into_vec(), -lower[i]));
                    }
                }
            }
            SetDescription::HPolyhedron { rows } => {
                lf.ineq = rows.iter().map(|r| (r.normal.as_slice().to_vec(), r.offset)).collect();
            }
            SetDescription::Motzkin { points, rays } => lf.vsets.push((points.clone(), rays.clone())),
            SetDescription::Translate { inner, shift } => return inner.linear_form().map(|f| f.shifted(shift)),
            SetDescription::Intersection { members } => {
                for m in members {
                    lf.merge(m.linear_form()?);
                }
            }
            SetDescription::Ball { .. } | SetDescription::BallSum { .. } => return None,
        }
        Some(lf)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn v(x: &[f64]) -> DenseVector {
        DenseVector::from_slice(x)
    }

    #[test]
    fn maximize_over_motzkin_slice() {
        let m = SetDescription::motzkin(vec![v(&[0.0, 0.0]), v(&[2.0, 0.0])], vec![v(&[0.0, 1.0])]).unwrap();
        let s = SetDescription::intersection(vec![m, SetDescription::halfspace(v(&[0.0, 1.0]), 3.0).unwrap()]).unwrap();
        match s.linear_form().unwrap().maximize(&v(&[1.0, 1.0])).unwrap() {
            LinearMax::Optimal { value, .. } => assert!((value - 5.0).abs() < 1e-9),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn translated_box_rows() {
        let b = SetDescription::cuboid(vec![0.0, f64::NEG_INFINITY], vec![1.0, 2.0]).unwrap();
        let t = SetDescription::Translate { inner: Box::new(b), shift: v(&[1.0, 1.0]) };
        let lf = t.linear_form().unwrap();
        assert_eq!(lf.ineq.len(), 3);
        match lf.maximize(&v(&[1.0, 1.0])).unwrap() {
            LinearMax::Optimal { value, .. } => assert!((value - 5.0).abs() < 1e-9),
            other => panic!("{other:?}"),
        }
        assert!(matches!(lf.maximize(&v(&[0.0, -1.0])).unwrap(), LinearMax::Unbounded));
    }
}
