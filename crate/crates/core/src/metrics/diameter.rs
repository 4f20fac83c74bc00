use super::{support_bracket, MetricBracket, MetricConfig};
use crate::error::Result;
use crate::geometry::set_is_bounded;
use crate::metrics::grid_mesh_angle;
use crate::sets::SetDescription;
use crate::vector::DenseVector;

fn unbounded(method: &str) -> MetricBracket {
    MetricBracket::exact(f64::INFINITY, None, method)
}

fn farthest_pair(points: &[DenseVector]) -> (f64, Option<DenseVector>) {
    let mut best = (0.0, points.first().cloned());
    for (i, p) in points.iter().enumerate() {
        for q in &points[i + 1..] {
            let d = p.dist(q);
            if d > best.0 {
                best = (d, Some(p.clone()));
            }
        }
    }
    best
}

/// `diam(S) = sup ‖x − y‖`. Closed forms where available, otherwise a bracket
/// whose lower side is the widest pair of grid maximizers and whose upper side
/// is the smaller of the bounding-box diagonal and the largest directional
/// width inflated by the grid mesh.
pub fn diameter_estimate(set: &SetDescription, cfg: &MetricConfig) -> Result<MetricBracket> {
    let d = set.dim();
    match set {
        SetDescription::Ball { center, radius } => {
            return Ok(MetricBracket::exact(2.0 * radius, Some(center.axpy(*radius, &DenseVector::basis(d, 0))), "ball"))
        }
        SetDescription::Box { lower, upper } => {
            if lower.iter().chain(upper).any(|v| !v.is_finite()) {
                return Ok(unbounded("box with an infinite side"));
            }
            let diag = lower.iter().zip(upper).map(|(l, u)| (u - l) * (u - l)).sum::<f64>().sqrt();
            return Ok(MetricBracket::exact(diag, Some(DenseVector::from_slice(lower)), "box diagonal"));
        }
        SetDescription::Halfspace { .. } => return Ok(unbounded("halfspace")),
        SetDescription::Hyperplane { normal, offset } => {
            if d == 1 {
                return Ok(MetricBracket::exact(0.0, Some(normal.scale(*offset)), "point"));
            }
            return Ok(unbounded("hyperplane"));
        }
        SetDescription::Translate { inner, shift } => {
            let mut b = diameter_estimate(inner, cfg)?;
            b.witness = b.witness.map(|w| &w + shift);
            return Ok(b);
        }
        SetDescription::BallSum { inner, radius } => {
            let b = diameter_estimate(inner, cfg)?;
            return Ok(MetricBracket {
                lower: b.lower + 2.0 * radius,
                upper: b.upper + 2.0 * radius,
                witness: None,
                method: format!("{} plus twice the radius", b.method),
            });
        }
        _ => {}
    }
    if let Some(g) = set.generators() {
        if g.rays.iter().any(|r| r.norm() > 0.0) {
            return Ok(unbounded("recession ray"));
        }
        let (value, w) = farthest_pair(&g.points);
        return Ok(MetricBracket::exact(value, w, "farthest pair of extreme points"));
    }
    if !set_is_bounded(set)? {
        return Ok(unbounded("nontrivial recession cone"));
    }
    sampled_diameter(set, cfg)
}

fn sampled_diameter(set: &SetDescription, cfg: &MetricConfig) -> Result<MetricBracket> {
    let d = set.dim();
    let pc = &cfg.projection;
    let grid = cfg.grid(d);
    let mut points = Vec::with_capacity(grid.len());
    let mut max_width: f64 = 0.0;
    for u in &grid {
        let hi = support_bracket(set, u, pc)?;
        let lo = support_bracket(set, &-u, pc)?;
        max_width = max_width.max(hi.upper + lo.upper);
        points.extend(hi.point);
        points.extend(lo.point);
    }
    let mut bbox: f64 = 0.0;
    for i in 0..d {
        let e = DenseVector::basis(d, i);
        let w = support_bracket(set, &e, pc)?.upper + support_bracket(set, &-&e, pc)?.upper;
        bbox += w * w;
    }
    let mut upper = bbox.sqrt();
    // the diameter direction is within the mesh angle of some grid direction
    let mesh = grid_mesh_angle(&grid);
    if mesh < std::f64::consts::FRAC_PI_2 {
        upper = upper.min(max_width / mesh.cos());
    }
    if let SetDescription::Intersection { members } = set {
        for m in members.iter().filter(|m| !matches!(m, SetDescription::Intersection { .. })) {
            upper = upper.min(diameter_estimate(m, cfg)?.upper);
        }
    }
    let (lower, witness) = farthest_pair(&points);
    Ok(MetricBracket { lower, upper: upper.max(lower), witness, method: "grid widths and bounding box".into() })
}
