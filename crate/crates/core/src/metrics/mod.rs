//! Excess, Hausdorff and truncated (Attouch–Wets) distances between convex
//! sets as certified brackets, plus Kuratowski–Painlevé residual tables.

mod diameter;
mod kp;
mod output;
pub mod support;

pub use diameter::diameter_estimate;
pub use kp::{kp_lower_witness, kp_upper_check, ResidualRow, ResidualTable};
pub use output::{brackets_to_csv, format_real, BracketRow};
pub use support::{direction_grid, exact_maximizer, grid_mesh_angle, support_bracket, SupportBracket};

use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::geometry::{recession_contains, set_is_bounded};
use crate::projection::{project, rows_of, ProjectionConfig};
use crate::sets::{real_to_json, vector_to_json, SetDescription};
use crate::vector::DenseVector;

/// Truncation radii used by the Attouch–Wets experiments.
pub const AW_GRID: [f64; 5] = [1.0, 2.0, 4.0, 8.0, 16.0];

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MetricConfig {
    pub projection: ProjectionConfig,
    /// Directions per ambient dimension in the sampling grids.
    pub directions_per_dim: usize,
}

impl Default for MetricConfig {
    fn default() -> Self {
        MetricConfig { projection: ProjectionConfig::default(), directions_per_dim: 64 }
    }
}

impl MetricConfig {
    fn grid(&self, d: usize) -> Vec<DenseVector> {
        direction_grid(d, self.directions_per_dim * d)
    }
}

/// `lower ≤ value ≤ upper`. `witness` is a point whose re-evaluation gives `lower`.
#[derive(Debug, Clone, PartialEq)]
pub struct MetricBracket {
    pub lower: f64,
    pub upper: f64,
    pub witness: Option<DenseVector>,
    pub method: String,
}

impl MetricBracket {
    pub fn exact(value: f64, witness: Option<DenseVector>, method: &str) -> Self {
        MetricBracket { lower: value, upper: value, witness, method: method.into() }
    }

    pub fn zero(method: &str) -> Self {
        Self::exact(0.0, None, method)
    }

    pub fn is_exact(&self) -> bool {
        self.lower == self.upper
    }

    pub fn slack(&self) -> f64 {
        self.upper - self.lower
    }

    /// Bracket of `max(self, other)`.
    pub fn max(self, other: MetricBracket) -> MetricBracket {
        let upper = self.upper.max(other.upper);
        let (winner, loser) = if other.lower > self.lower { (other, self) } else { (self, other) };
        let method = if winner.method == loser.method { winner.method } else { format!("{}; {}", winner.method, loser.method) };
        MetricBracket { lower: winner.lower, upper, witness: winner.witness, method }
    }

    pub fn to_json(&self) -> Value {
        json!({
            "lower": real_to_json(self.lower),
            "upper": real_to_json(self.upper),
            "witness": self.witness.as_ref().map(vector_to_json),
            "method": self.method,
        })
    }
}

fn dist(set: &SetDescription, x: &DenseVector, cfg: &MetricConfig) -> Result<f64> {
    Ok(project(set, x, &cfg.projection)?.distance)
}

/// `e(A, B) = sup_{a ∈ A} d(a, B)`. Refuses unbounded `A`.
pub fn excess(a: &SetDescription, b: &SetDescription, cfg: &MetricConfig) -> Result<MetricBracket> {
    if a.dim() != b.dim() {
        return Err(Error::dim(a.dim(), b.dim(), "excess"));
    }
    if !set_is_bounded(a)? {
        if let Some(e) = recession_excess(a, b, cfg)? {
            return Ok(e);
        }
        return Err(Error::Precondition(
            "excess over an unbounded set is not bracketed; use excess_truncated".into(),
        ));
    }
    excess_bounded(a, b, cfg)
}

/// For `A = conv(P) + cone(R)`: infinite when some ray leaves `B_∞`, otherwise
/// `max_{p ∈ P} d(p, B)`, since `d(p + r, B) ≤ d(p, B)` for `r ∈ B_∞`.
fn recession_excess(a: &SetDescription, b: &SetDescription, cfg: &MetricConfig) -> Result<Option<MetricBracket>> {
    let Some(g) = a.generators() else { return Ok(None) };
    if g.points.is_empty() {
        return Ok(None);
    }
    for r in g.rays.iter().filter(|r| r.norm() > 0.0) {
        if !recession_contains(b, r, 1e-9)? {
            return Ok(Some(MetricBracket::exact(f64::INFINITY, None, "a recession ray of A escapes B")));
        }
    }
    let mut e = vertex_excess(&g.points, b, cfg)?;
    e.method = "maximum over the listed points; rays absorbed by the recession cone of B".into();
    Ok(Some(e))
}

/// Zero when every row of a polyhedral `B` is satisfied by the support of `A`.
fn contained_in_rows(a: &SetDescription, b: &SetDescription, cfg: &MetricConfig) -> Result<bool> {
    let Some(rows) = rows_of(b) else { return Ok(false) };
    for r in &rows {
        let s = support_bracket(a, &r.normal, &cfg.projection)?;
        if s.upper > r.offset + 1e-12 * (1.0 + r.offset.abs()) {
            return Ok(false);
        }
    }
    Ok(true)
}

fn excess_bounded(a: &SetDescription, b: &SetDescription, cfg: &MetricConfig) -> Result<MetricBracket> {
    if a == b {
        return Ok(MetricBracket::zero("identical sets"));
    }
    match (a, b) {
        (SetDescription::Translate { inner, shift }, _) => {
            let mut e = excess_bounded(inner, &b.translate(&-shift)?, cfg)?;
            e.witness = e.witness.map(|w| &w + shift);
            return Ok(e);
        }
        (_, SetDescription::Translate { inner, shift }) => {
            let mut e = excess_bounded(&a.translate(&-shift)?, inner, cfg)?;
            e.witness = e.witness.map(|w| &w + shift);
            return Ok(e);
        }
        (SetDescription::BallSum { inner, radius }, _) => return excess_of_enlargement(inner, *radius, b, cfg),
        (_, SetDescription::BallSum { inner, radius }) => {
            // d(x, K + rB) = max(0, d(x, K) - r)
            let e = excess_bounded(a, inner, cfg)?;
            let lower = (e.lower - radius).max(0.0);
            let witness = if lower > 0.0 { e.witness } else { None };
            return Ok(MetricBracket { lower, upper: (e.upper - radius).max(0.0), witness, method: e.method });
        }
        _ => {}
    }
    if let Some(g) = a.generators() {
        if g.rays.iter().all(|r| r.norm() == 0.0) && !g.points.is_empty() {
            return vertex_excess(&g.points, b, cfg);
        }
    }
    match b {
        SetDescription::Halfspace { normal, offset } => {
            let s = support_bracket(a, normal, &cfg.projection)?;
            let lower = (s.lower - offset).max(0.0);
            return Ok(MetricBracket {
                lower,
                upper: (s.upper - offset).max(0.0),
                witness: if lower > 0.0 { s.point } else { None },
                method: "support of A along the halfspace normal".into(),
            });
        }
        SetDescription::Hyperplane { normal, offset } => {
            let up = support_bracket(a, normal, &cfg.projection)?;
            let down = support_bracket(a, &-normal, &cfg.projection)?;
            let hi = MetricBracket {
                lower: (up.lower - offset).max(0.0),
                upper: (up.upper - offset).max(0.0),
                witness: up.point,
                method: "support of A along both hyperplane normals".into(),
            };
            let lo = MetricBracket {
                lower: (down.lower + offset).max(0.0),
                upper: (down.upper + offset).max(0.0),
                witness: down.point,
                method: hi.method.clone(),
            };
            return Ok(hi.max(lo));
        }
        SetDescription::Ball { center, radius } => {
            if let SetDescription::Ball { center: ca, radius: ra } = a {
                let gap = ca.dist(center);
                let value = (gap + ra - radius).max(0.0);
                let dir = (ca - center).normalized().unwrap_or_else(|| DenseVector::basis(ca.dim(), 0));
                let w = ca.axpy(*ra, &dir);
                return Ok(MetricBracket::exact(value, (value > 0.0).then_some(w), "ball against ball"));
            }
        }
        _ => {}
    }
    if contained_in_rows(a, b, cfg)? {
        return Ok(MetricBracket::zero("support certificate of containment"));
    }
    sampled_excess(a, b, cfg)
}

/// Exact over a V-polytope: `d(·, B)` is convex, so the maximum sits at a vertex.
fn vertex_excess(points: &[DenseVector], b: &SetDescription, cfg: &MetricConfig) -> Result<MetricBracket> {
    let mut best = MetricBracket::exact(0.0, None, "maximum over the listed points");
    for p in points {
        let d = dist(b, p, cfg)?;
        if d > best.lower {
            best = MetricBracket::exact(d, Some(p.clone()), "maximum over the listed points");
        }
    }
    Ok(best)
}

fn excess_of_enlargement(k: &SetDescription, r: f64, b: &SetDescription, cfg: &MetricConfig) -> Result<MetricBracket> {
    let e = excess_bounded(k, b, cfg)?;
    let enlarged = k.minkowski_ball(r)?;
    let mut out = sampled_excess(&enlarged, b, cfg)?;
    if let Some(w) = e.witness.filter(|_| e.lower > 0.0) {
        let p = project(b, &w, &cfg.projection)?.point;
        let dir = (&w - &p).normalized().unwrap_or_else(|| DenseVector::basis(w.dim(), 0));
        let w2 = w.axpy(r, &dir);
        let d = dist(b, &w2, cfg)?;
        if d > out.lower {
            out.lower = d;
            out.witness = Some(w2);
        }
    }
    out.upper = out.upper.min(e.upper + r).max(out.lower);
    out.method = "enlargement: inner excess plus radius".into();
    Ok(out)
}

/// Candidate points of `A`: maximizers (or far-point projections) along the grid.
fn candidates(a: &SetDescription, cfg: &MetricConfig) -> Result<Vec<DenseVector>> {
    let mut out = Vec::new();
    for u in cfg.grid(a.dim()) {
        if let Some(p) = support_bracket(a, &u, &cfg.projection)?.point {
            out.push(p);
        }
    }
    Ok(out)
}

fn sampled_excess(a: &SetDescription, b: &SetDescription, cfg: &MetricConfig) -> Result<MetricBracket> {
    let mut lower = 0.0;
    let mut witness = None;
    for p in candidates(a, cfg)? {
        let d = dist(b, &p, cfg)?;
        if d > lower {
            lower = d;
            witness = Some(p);
        }
    }
    let diam = diameter_estimate(a, cfg)?;
    let mesh = grid_mesh_angle(&cfg.grid(a.dim()));
    let upper = lower + diam.upper * mesh;
    Ok(MetricBracket { lower, upper, witness, method: format!("grid samples; declared slack diameter x mesh ({mesh:.3e})") })
}

/// `e_N(A, B) = e(A ∩ N·B_X, B)`; an empty truncation has excess 0.
pub fn excess_truncated(a: &SetDescription, b: &SetDescription, n: f64, cfg: &MetricConfig) -> Result<MetricBracket> {
    if !(n >= 1.0) || !n.is_finite() {
        return Err(Error::Precondition(format!("truncation radius must be a finite N >= 1, got {n}")));
    }
    if a.dim() != b.dim() {
        return Err(Error::dim(a.dim(), b.dim(), "excess_truncated"));
    }
    let d = a.dim();
    let origin = DenseVector::zeros(d);
    if dist(a, &origin, cfg)? > n {
        return Ok(MetricBracket::zero("empty truncation"));
    }
    // e_N ≤ e, with equality once the maximizing point lies inside N·B_X
    let full = recession_excess(a, b, cfg)?.filter(|e| e.upper.is_finite());
    if let Some(e) = &full {
        if e.upper == 0.0 || e.witness.as_ref().is_some_and(|w| w.norm() <= n) {
            return Ok(e.clone());
        }
    }
    if let Some(g) = a.generators() {
        if g.rays.iter().all(|r| r.norm() == 0.0) && g.points.iter().all(|p| p.norm() <= n) {
            return excess_bounded(a, b, cfg);
        }
    }
    let ball = SetDescription::ball(origin, n)?;
    let mut members = match a {
        SetDescription::Intersection { members } => members.clone(),
        other => vec![other.clone()],
    };
    members.push(ball);
    let truncated = SetDescription::Intersection { members };
    let mut e = excess_bounded(&truncated, b, cfg)?;
    if let Some(f) = full {
        e.upper = e.upper.min(f.upper).max(e.lower);
    } else if set_is_bounded(a)? {
        let full = excess_bounded(a, b, cfg)?;
        e.upper = e.upper.min(full.upper).max(e.lower);
    }
    Ok(e)
}

/// `h(A, B) = max{e(A, B), e(B, A)}`.
pub fn hausdorff(a: &SetDescription, b: &SetDescription, cfg: &MetricConfig) -> Result<MetricBracket> {
    Ok(excess(a, b, cfg)?.max(excess(b, a, cfg)?))
}

pub fn hausdorff_truncated(a: &SetDescription, b: &SetDescription, n: f64, cfg: &MetricConfig) -> Result<MetricBracket> {
    Ok(excess_truncated(a, b, n, cfg)?.max(excess_truncated(b, a, n, cfg)?))
}

/// Whether some ray of `A` escapes `B_∞`; such pairs have infinite excess.
pub fn excess_is_infinite(a: &SetDescription, b: &SetDescription) -> Result<bool> {
    let Some(g) = a.generators() else { return Ok(false) };
    for r in g.rays.iter().filter(|r| r.norm() > 0.0) {
        if !recession_contains(b, r, 1e-9)? {
            return Ok(true);
        }
    }
    Ok(false)
}
