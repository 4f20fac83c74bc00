//! Recession cones and cone-level LP tests.

use crate::error::{Error, Result};
use crate::kernels::lp::{solve_lp, LinearProgram, LpStatus, RowSense, FEAS_TOL};
use crate::kernels::nnls;
use crate::sets::vrep::enumerate_polyhedron;
use crate::sets::{HalfspaceRow, SetDescription};
use crate::vector::DenseVector;

/// A closed convex cone in R^d.
#[derive(Debug, Clone, PartialEq)]
pub enum ConeDescription {
    /// `cone(generators)`; no generators means `{0}`.
    Generators { dim: usize, generators: Vec<DenseVector> },
    /// `{d : ⟨row, d⟩ ≤ 0 for every row}`; no rows means the whole space.
    HForm { dim: usize, rows: Vec<DenseVector> },
}

impl ConeDescription {
    pub fn dim(&self) -> usize {
        match self {
            ConeDescription::Generators { dim, .. } | ConeDescription::HForm { dim, .. } => *dim,
        }
    }

    pub fn zero(dim: usize) -> Self {
        ConeDescription::Generators { dim, generators: Vec::new() }
    }

    pub fn contains(&self, d: &DenseVector, tol: f64) -> Result<bool> {
        d.check_dim(self.dim(), "cone membership")?;
        let scale = 1.0 + d.norm();
        Ok(match self {
            ConeDescription::Generators { generators, .. } => {
                if generators.is_empty() {
                    d.norm() <= tol
                } else {
                    nnls(generators, d, 1e-12)?.residual <= tol * scale
                }
            }
            ConeDescription::HForm { rows, .. } => rows.iter().all(|r| r.dot(d) <= tol * scale * r.norm()),
        })
    }

    /// Extreme rays, converting a pointed H-form cone by enumeration.
    pub fn to_generators(&self) -> Option<Vec<DenseVector>> {
        match self {
            ConeDescription::Generators { generators, .. } => Some(generators.clone()),
            ConeDescription::HForm { dim, rows } => {
                if rows.is_empty() {
                    return None;
                }
                let hs: Vec<HalfspaceRow> = rows.iter().map(|r| HalfspaceRow::new(r.clone(), 0.0)).collect();
                let g = enumerate_polyhedron(&hs)?;
                debug_assert_eq!(g.points[0].dim(), *dim);
                Some(g.rays.iter().filter_map(|r| r.normalized()).collect())
            }
        }
    }
}

fn homogeneous_rows(set: &SetDescription) -> Option<Vec<DenseVector>> {
    let rows = crate::projection::rows_of(set)?;
    Some(rows.into_iter().map(|r| r.normal).collect())
}

/// The asymptotic cone `{d : x + t d ∈ S for all t > 0}`.
pub fn recession_cone(set: &SetDescription) -> Result<ConeDescription> {
    let dim = set.dim();
    Ok(match set {
        SetDescription::Ball { .. } => ConeDescription::zero(dim),
        SetDescription::Box { lower, upper } if lower.iter().chain(upper).all(|v| v.is_finite()) => {
            ConeDescription::zero(dim)
        }
        SetDescription::Halfspace { .. }
        | SetDescription::Hyperplane { .. }
        | SetDescription::Box { .. }
        | SetDescription::HPolyhedron { .. } => {
            ConeDescription::HForm { dim, rows: homogeneous_rows(set).unwrap_or_default() }
        }
        SetDescription::Motzkin { rays, .. } => ConeDescription::Generators {
            dim,
            generators: rays.iter().filter(|r| r.norm() > 0.0).cloned().collect(),
        },
        SetDescription::Translate { inner, .. } => recession_cone(inner)?,
        SetDescription::Intersection { .. } | SetDescription::BallSum { .. } => {
            return Err(Error::Unsupported(format!(
                "recession cone of a {} set: compose the members' cones manually",
                set.type_tag()
            )))
        }
    })
}

/// `d ∈ S_∞`, for every variant (intersections and enlargements included).
pub fn recession_contains(set: &SetDescription, d: &DenseVector, tol: f64) -> Result<bool> {
    match set {
        SetDescription::Intersection { members } => {
            for m in members {
                if !recession_contains(m, d, tol)? {
                    return Ok(false);
                }
            }
            Ok(true)
        }
        SetDescription::BallSum { inner, .. } | SetDescription::Translate { inner, .. } => {
            recession_contains(inner, d, tol)
        }
        _ => recession_cone(set)?.contains(d, tol),
    }
}

/// `max s·d_i` over `d ∈ ∩ cones, |d_j| ≤ 1`.
fn max_coordinate(cones: &[&ConeDescription], i: usize, s: f64) -> Result<f64> {
    let dim = cones[0].dim();
    let extra: usize = cones
        .iter()
        .map(|c| match c {
            ConeDescription::Generators { generators, .. } => generators.len(),
            ConeDescription::HForm { .. } => 0,
        })
        .sum();
    let n = dim + extra;
    let mut obj = vec![0.0; n];
    obj[i] = s;
    let mut lp = LinearProgram::maximize(obj);
    for j in 0..dim {
        lp.set_bounds(j, -1.0, 1.0);
    }
    let mut off = dim;
    for c in cones {
        match c {
            ConeDescription::Generators { generators, .. } => {
                for j in 0..dim {
                    let mut row = vec![0.0; n];
                    row[j] = 1.0;
                    for (k, g) in generators.iter().enumerate() {
                        row[off + k] = -g[j];
                    }
                    lp.add_row(row, RowSense::Eq, 0.0);
                }
                off += generators.len();
            }
            ConeDescription::HForm { rows, .. } => {
                for r in rows {
                    let mut row = vec![0.0; n];
                    row[..dim].copy_from_slice(r.as_slice());
                    lp.add_row(row, RowSense::Le, 0.0);
                }
            }
        }
    }
    let out = solve_lp(&lp, FEAS_TOL)?;
    match out.status {
        LpStatus::Optimal => Ok(out.optimal_value),
        // d = 0 is always feasible and the box bounds the objective
        other => Err(Error::numerical("cone LP", format!("unexpected status {other:?}"), f64::NAN, None)),
    }
}

fn intersection_trivial(cones: &[&ConeDescription], tol: f64) -> Result<bool> {
    let dim = cones[0].dim();
    for c in cones {
        if c.dim() != dim {
            return Err(Error::dim(dim, c.dim(), "cone intersection"));
        }
        if let ConeDescription::Generators { generators, .. } = c {
            if generators.is_empty() {
                return Ok(true);
            }
        }
    }
    for i in 0..dim {
        for s in [1.0, -1.0] {
            if max_coordinate(cones, i, s)? > tol {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// True iff the cone is `{0}`: every coordinate of the cone's
/// box-truncation is pinned to zero by `2d` LPs.
pub fn cone_is_trivial(cone: &ConeDescription, tol: f64) -> Result<bool> {
    intersection_trivial(&[cone], tol)
}

pub fn cones_intersection_trivial(a: &ConeDescription, b: &ConeDescription, tol: f64) -> Result<bool> {
    intersection_trivial(&[a, b], tol)
}

/// Every row of `b` holds on `a`: `max ⟨row, d⟩ ≤ tol` over `a ∩ box`.
fn hform_implies(a: &ConeDescription, rows: &[DenseVector], tol: f64) -> Result<bool> {
    for r in rows {
        if max_linear(a, r)? > tol * r.norm() {
            return Ok(false);
        }
    }
    Ok(true)
}

fn max_linear(cone: &ConeDescription, u: &DenseVector) -> Result<f64> {
    let dim = cone.dim();
    let (n, gens) = match cone {
        ConeDescription::Generators { generators, .. } => (dim + generators.len(), generators.as_slice()),
        ConeDescription::HForm { .. } => (dim, &[][..]),
    };
    let mut obj = vec![0.0; n];
    obj[..dim].copy_from_slice(u.as_slice());
    let mut lp = LinearProgram::maximize(obj);
    for j in 0..dim {
        lp.set_bounds(j, -1.0, 1.0);
    }
    match cone {
        ConeDescription::Generators { .. } => {
            for j in 0..dim {
                let mut row = vec![0.0; n];
                row[j] = 1.0;
                for (k, g) in gens.iter().enumerate() {
                    row[dim + k] = -g[j];
                }
                lp.add_row(row, RowSense::Eq, 0.0);
            }
        }
        ConeDescription::HForm { rows, .. } => {
            for r in rows {
                lp.add_row(r.as_slice().to_vec(), RowSense::Le, 0.0);
            }
        }
    }
    let out = solve_lp(&lp, FEAS_TOL)?;
    if out.status != LpStatus::Optimal {
        return Err(Error::numerical("cone LP", format!("unexpected status {:?}", out.status), f64::NAN, None));
    }
    Ok(out.optimal_value)
}

fn generators_inside(gens: &[DenseVector], cone: &ConeDescription, tol: f64) -> Result<bool> {
    for g in gens {
        let unit = g.normalized().unwrap_or_else(|| g.clone());
        if !cone.contains(&unit, tol)? {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Cone equality by mutual inclusion.
pub fn cone_equal(a: &ConeDescription, b: &ConeDescription, tol: f64) -> Result<bool> {
    if a.dim() != b.dim() {
        return Err(Error::dim(a.dim(), b.dim(), "cone equality"));
    }
    match (a, b) {
        (ConeDescription::Generators { generators: ga, .. }, ConeDescription::Generators { generators: gb, .. }) => {
            Ok(generators_inside(ga, b, tol)? && generators_inside(gb, a, tol)?)
        }
        (ConeDescription::HForm { rows: ra, .. }, ConeDescription::HForm { rows: rb, .. }) => {
            Ok(hform_implies(a, rb, tol)? && hform_implies(b, ra, tol)?)
        }
        (ConeDescription::Generators { generators: ga, .. }, h @ ConeDescription::HForm { .. })
        | (h @ ConeDescription::HForm { .. }, ConeDescription::Generators { generators: ga, .. }) => {
            let gh = h.to_generators().ok_or_else(|| {
                Error::Unsupported("cone equality between generator and H-forms needs the H-form cone converted to generators (pointed cone)".into())
            })?;
            let g = ConeDescription::Generators { dim: a.dim(), generators: ga.clone() };
            Ok(generators_inside(ga, h, tol)? && generators_inside(&gh, &g, tol)?)
        }
    }
}

/// Boundedness of the minimal-distance set through `A_∞ ∩ B_∞ = {0}`.
pub fn minimal_set_bounded(a: &SetDescription, b: &SetDescription) -> Result<bool> {
    cones_intersection_trivial(&recession_cone(a)?, &recession_cone(b)?, 1e-9)
}

fn collect_cones(set: &SetDescription, out: &mut Vec<ConeDescription>) -> Result<()> {
    match set {
        SetDescription::Intersection { members } => {
            for m in members {
                collect_cones(m, out)?;
            }
        }
        SetDescription::BallSum { inner, .. } | SetDescription::Translate { inner, .. } => collect_cones(inner, out)?,
        _ => out.push(recession_cone(set)?),
    }
    Ok(())
}

/// `S_∞ = {0}`, i.e. the (nonempty, closed, convex) set is bounded.
pub fn set_is_bounded(set: &SetDescription) -> Result<bool> {
    let mut cones = Vec::new();
    collect_cones(set, &mut cones)?;
    let refs: Vec<&ConeDescription> = cones.iter().collect();
    intersection_trivial(&refs, 1e-9)
}
