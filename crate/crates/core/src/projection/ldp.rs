//! Projection onto `{y : A y ≤ b}` as a least-distance program.
//!
//! `min ‖z‖ s.t. A (x + z) ≤ b` is solved through the nonnegative least
//! squares problem `min ‖E u − e_{d+1}‖, u ≥ 0` with columns
//! `E_j = (−a_j, ⟨a_j, x⟩ − b_j)`; the minimizer is `z = −r_{1..d} / r_{d+1}`
//! for the residual `r = E u − e_{d+1}`.

use super::{dykstra, ProjectionConfig, ProjectionResult};
use crate::error::{Error, Result};
use crate::kernels::nnls;
use crate::sets::{HalfspaceRow, SetDescription};
use crate::vector::DenseVector;

fn max_violation(rows: &[HalfspaceRow], y: &DenseVector) -> f64 {
    rows.iter().map(|r| r.violation(y)).fold(0.0, f64::max)
}

pub fn project_rows(rows: &[HalfspaceRow], x: &DenseVector, cfg: &ProjectionConfig) -> Result<ProjectionResult> {
    let d = x.dim();
    if max_violation(rows, x) <= 0.0 {
        return Ok(ProjectionResult { point: x.clone(), distance: 0.0, iterations: 0, residual: 0.0 });
    }
    let scale = 1.0 + x.norm() + rows.iter().map(|r| r.offset.abs()).fold(0.0, f64::max);
    let cols: Vec<DenseVector> = rows
        .iter()
        .map(|r| {
            let mut c: Vec<f64> = r.normal.iter().map(|a| -a / scale).collect();
            c.push(r.violation(x) / scale);
            DenseVector::from_vec(c)
        })
        .collect();
    let target = DenseVector::basis(d + 1, d);
    let sol = nnls(&cols, &target, cfg.tol.min(1e-12))?;
    let r = &sol.point - &target;
    if r.norm() < 1e-14 || r[d].abs() < 1e-14 {
        return Err(Error::Precondition("polyhedron is empty".into()));
    }
    let z = DenseVector::from_vec((0..d).map(|i| -r[i] / r[d]).collect());
    let y = x + &z;
    let viol = max_violation(rows, &y);
    if viol <= 10.0 * cfg.tol * scale {
        // multipliers u give the optimality certificate; report the feasibility defect
        return Ok(ProjectionResult { distance: z.norm(), point: y, iterations: 1, residual: viol.max(0.0) });
    }
    let members: Vec<SetDescription> = rows
        .iter()
        .map(|r| SetDescription::Halfspace { normal: r.normal.clone(), offset: r.offset })
        .collect();
    dykstra(&members, x, cfg)
}
