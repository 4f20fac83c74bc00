//! Euclidean projections onto every set variant.

mod ball_cut;
mod dykstra;
mod ldp;
pub mod invariants;

pub use dykstra::{alternating_cyclic, dykstra};
pub use ldp::project_rows;

use serde::Serialize;

use crate::error::Result;
use crate::kernels::qp_point_to_motzkin;
use crate::sets::{HalfspaceRow, SetDescription};
use crate::vector::DenseVector;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ProjectionConfig {
    pub tol: f64,
    pub max_iter: usize,
}

impl Default for ProjectionConfig {
    fn default() -> Self {
        ProjectionConfig { tol: 1e-10, max_iter: 100_000 }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ProjectionResult {
    pub point: DenseVector,
    pub distance: f64,
    pub iterations: usize,
    /// Variational-inequality defect `max_z ⟨x − p, z − p⟩` over the probe family.
    pub residual: f64,
}

impl ProjectionResult {
    fn new(x: &DenseVector, point: DenseVector, iterations: usize, residual: f64) -> Self {
        ProjectionResult { distance: x.dist(&point), point, iterations, residual }
    }
}

fn vi_defect(x: &DenseVector, p: &DenseVector, probes: impl IntoIterator<Item = DenseVector>) -> f64 {
    let g = x - p;
    probes.into_iter().map(|z| g.dot(&(&z - p))).fold(0.0, f64::max)
}

fn clamp_box(lower: &[f64], upper: &[f64], x: &DenseVector) -> DenseVector {
    DenseVector::from_vec(x.iter().enumerate().map(|(i, v)| v.max(lower[i]).min(upper[i])).collect())
}

fn ball_point(center: &DenseVector, radius: f64, x: &DenseVector) -> DenseVector {
    let r = x.dist(center);
    if r <= radius {
        x.clone()
    } else {
        center.axpy(radius / r, &(x - center))
    }
}

fn halfspace_point(normal: &DenseVector, offset: f64, x: &DenseVector) -> DenseVector {
    let e = normal.dot(x) - offset;
    if e <= 0.0 {
        x.clone()
    } else {
        x.axpy(-e, normal)
    }
}

/// Deterministic probe points in `set` near `p`: generators, vertices, or
/// `±e_i` face points, depending on the variant.
pub fn probe_family(set: &SetDescription, p: &DenseVector) -> Vec<DenseVector> {
    let d = p.dim();
    let unit = |i: usize, s: f64| p.axpy(s, &DenseVector::basis(d, i));
    match set {
        SetDescription::Halfspace { normal, offset } => {
            let mut z: Vec<DenseVector> = (0..d)
                .flat_map(|i| [unit(i, 1.0), unit(i, -1.0)])
                .map(|q| halfspace_point(normal, *offset, &q))
                .collect();
            z.push(p - normal);
            z
        }
        SetDescription::Hyperplane { normal, offset } => (0..d)
            .flat_map(|i| [unit(i, 1.0), unit(i, -1.0)])
            .map(|q| q.axpy(offset - normal.dot(&q), normal))
            .collect(),
        SetDescription::Ball { center, radius } => (0..d)
            .flat_map(|i| [1.0, -1.0].map(|s| center.axpy(s * radius, &DenseVector::basis(d, i))))
            .collect(),
        SetDescription::Box { lower, upper } => {
            let mut z = Vec::with_capacity(2 * d);
            for i in 0..d {
                for (bound, step) in [(upper[i], 1.0), (lower[i], -1.0)] {
                    let mut q = p.clone();
                    q[i] = if bound.is_finite() { bound } else { p[i] + step };
                    z.push(q);
                }
            }
            z
        }
        SetDescription::Motzkin { points, rays } => {
            let mut z = points.clone();
            z.extend(rays.iter().map(|r| p + r));
            z
        }
        SetDescription::HPolyhedron { rows } => match crate::sets::vrep::enumerate_polyhedron(rows) {
            Some(g) if g.points.len() <= 4096 => {
                let mut z = g.points.clone();
                z.extend(g.rays.iter().map(|r| p + r));
                z
            }
            _ => Vec::new(),
        },
        SetDescription::Translate { inner, shift } => {
            probe_family(inner, &(p - shift)).into_iter().map(|z| &z + shift).collect()
        }
        _ => Vec::new(),
    }
}

/// Euclidean projection of `x` onto `set`.
pub fn project(set: &SetDescription, x: &DenseVector, cfg: &ProjectionConfig) -> Result<ProjectionResult> {
    x.check_dim(set.dim(), "project")?;
    let exact = |p: DenseVector| {
        let r = vi_defect(x, &p, probe_family(set, &p));
        Ok(ProjectionResult::new(x, p, 0, r))
    };
    match set {
        SetDescription::Halfspace { normal, offset } => exact(halfspace_point(normal, *offset, x)),
        SetDescription::Hyperplane { normal, offset } => exact(x.axpy(offset - normal.dot(x), normal)),
        SetDescription::Ball { center, radius } => exact(ball_point(center, *radius, x)),
        SetDescription::Box { lower, upper } => exact(clamp_box(lower, upper, x)),
        SetDescription::Motzkin { points, rays } => {
            let sol = qp_point_to_motzkin(points, rays, x, cfg.tol, cfg.max_iter)?;
            let r = vi_defect(x, &sol.point, probe_family(set, &sol.point));
            Ok(ProjectionResult::new(x, sol.point, sol.iterations, r))
        }
        SetDescription::HPolyhedron { rows } => project_rows(rows, x, cfg),
        SetDescription::Translate { inner, shift } => {
            let r = project(inner, &(x - shift), cfg)?;
            Ok(ProjectionResult::new(x, &r.point + shift, r.iterations, r.residual))
        }
        SetDescription::BallSum { inner, radius } => {
            let r = project(inner, x, cfg)?;
            if r.distance <= *radius {
                return Ok(ProjectionResult::new(x, x.clone(), r.iterations, 0.0));
            }
            let p = r.point.axpy(radius / r.distance, &(x - &r.point));
            Ok(ProjectionResult::new(x, p, r.iterations, r.residual))
        }
        SetDescription::Intersection { members } => {
            if members.len() == 1 {
                return project(&members[0], x, cfg);
            }
            if let Some(rows) = rows_of(set) {
                return project_rows(&rows, x, cfg);
            }
            if let Some((center, radius, rest)) = ball_split(members) {
                return ball_cut::project_with_ball(&rest, center, radius, x, cfg);
            }
            dykstra(members, x, cfg)
        }
    }
}

/// Splits `B(c, r) ∩ K` off the first ball member when `K` has an exact
/// projection (rows, or a single non-intersection member).
fn ball_split(members: &[SetDescription]) -> Option<(&DenseVector, f64, SetDescription)> {
    let k = members.iter().position(|m| matches!(m, SetDescription::Ball { .. }))?;
    let SetDescription::Ball { center, radius } = &members[k] else { return None };
    let others: Vec<SetDescription> =
        members.iter().enumerate().filter(|(i, _)| *i != k).map(|(_, m)| m.clone()).collect();
    let rest = if others.len() == 1 {
        others.into_iter().next().unwrap()
    } else {
        SetDescription::Intersection { members: others }
    };
    let exact = match &rest {
        SetDescription::Intersection { .. } => rows_of(&rest).is_some(),
        _ => true,
    };
    exact.then_some((center, *radius, rest))
}

/// Inequality rows for sets without generator parts.
pub(crate) fn rows_of(set: &SetDescription) -> Option<Vec<HalfspaceRow>> {
    let lf = set.linear_form()?;
    if !lf.vsets.is_empty() {
        return None;
    }
    let mut rows: Vec<HalfspaceRow> =
        lf.ineq.iter().map(|(a, b)| HalfspaceRow::new(DenseVector::from_slice(a), *b)).collect();
    for (a, b) in &lf.eq {
        rows.push(HalfspaceRow::new(DenseVector::from_slice(a), *b));
        rows.push(HalfspaceRow::new(-&DenseVector::from_slice(a), -b));
    }
    if rows.is_empty() {
        return None;
    }
    Some(rows)
}

/// `dist(x, set)` with the default configuration.
pub fn distance(set: &SetDescription, x: &DenseVector) -> Result<f64> {
    Ok(project(set, x, &ProjectionConfig::default())?.distance)
}

#[cfg(test)]
mod tests;
