//! Cyclic projection schemes for intersections.

use super::{project, ProjectionConfig, ProjectionResult};
use crate::error::{Error, Result};
use crate::sets::SetDescription;
use crate::vector::DenseVector;

/// Dykstra's algorithm: converges to the projection of `x` onto the
/// intersection of `sets`. Stops once a full cycle moves the iterate by at
/// most `tol` and every member's last output lies within `10 tol`.
pub fn dykstra(sets: &[SetDescription], x: &DenseVector, cfg: &ProjectionConfig) -> Result<ProjectionResult> {
    if sets.is_empty() {
        return Err(Error::Input("dykstra needs at least one set".into()));
    }
    if sets.len() == 1 {
        return project(&sets[0], x, cfg);
    }
    let mut y = x.clone();
    let mut incr: Vec<DenseVector> = vec![DenseVector::zeros(x.dim()); sets.len()];
    let mut outputs: Vec<DenseVector> = vec![x.clone(); sets.len()];
    let mut gap = f64::INFINITY;
    for iter in 1..=cfg.max_iter {
        let start = y.clone();
        for (k, s) in sets.iter().enumerate() {
            let z = &y + &incr[k];
            let p = project(s, &z, cfg)?.point;
            incr[k] = &z - &p;
            outputs[k] = p.clone();
            y = p;
        }
        let moved = y.dist(&start);
        gap = outputs.iter().map(|o| o.dist(&y)).fold(0.0, f64::max);
        if moved <= cfg.tol && gap <= 10.0 * cfg.tol {
            return Ok(ProjectionResult { distance: x.dist(&y), point: y, iterations: iter, residual: gap });
        }
    }
    Err(Error::numerical(
        "dykstra",
        "memberships did not settle; the intersection may be empty",
        gap,
        Some(y),
    ))
}

/// Plain cyclic projections (no corrections). Finds a point of the
/// intersection but not, in general, the projection of `x`.
pub fn alternating_cyclic(sets: &[SetDescription], x: &DenseVector, cfg: &ProjectionConfig) -> Result<ProjectionResult> {
    if sets.is_empty() {
        return Err(Error::Input("cyclic projection needs at least one set".into()));
    }
    let mut y = x.clone();
    let mut gap = f64::INFINITY;
    for iter in 1..=cfg.max_iter {
        let start = y.clone();
        let mut outs = Vec::with_capacity(sets.len());
        for s in sets {
            y = project(s, &y, cfg)?.point;
            outs.push(y.clone());
        }
        gap = outs.iter().map(|o| o.dist(&y)).fold(0.0, f64::max);
        if y.dist(&start) <= cfg.tol && gap <= 10.0 * cfg.tol {
            return Ok(ProjectionResult { distance: x.dist(&y), point: y, iterations: iter, residual: gap });
        }
    }
    Err(Error::numerical("alternating_cyclic", "no common point found", gap, Some(y)))
}
