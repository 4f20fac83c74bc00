//! Two-sided support brackets and deterministic direction grids.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::Result;
use crate::projection::{project, ProjectionConfig};
use crate::sets::{LinearMax, SetDescription};
use crate::vector::{standard_normal, DenseVector};

/// `lower ≤ h_K(u) ≤ upper`; `point` is a member of `K` with `⟨u, point⟩ = lower`.
#[derive(Debug, Clone, PartialEq)]
pub struct SupportBracket {
    pub lower: f64,
    pub upper: f64,
    pub point: Option<DenseVector>,
}

const GRID_SEED: u64 = 0x6d65_7368;

/// `count` deterministic unit directions in R^d. The plane gets evenly spaced
/// angles; higher dimensions get `±e_i` followed by seeded Gaussian directions.
pub fn direction_grid(d: usize, count: usize) -> Vec<DenseVector> {
    match d {
        1 => vec![DenseVector::from_slice(&[1.0]), DenseVector::from_slice(&[-1.0])],
        2 => (0..count)
            .map(|k| {
                let t = 2.0 * std::f64::consts::PI * k as f64 / count as f64;
                DenseVector::from_slice(&[t.cos(), t.sin()])
            })
            .collect(),
        _ => {
            let mut out = Vec::with_capacity(count.max(2 * d));
            for i in 0..d {
                out.push(DenseVector::basis(d, i));
                out.push(-&DenseVector::basis(d, i));
            }
            let mut rng = ChaCha8Rng::seed_from_u64(GRID_SEED ^ d as u64);
            while out.len() < count {
                let g = DenseVector::from_vec((0..d).map(|_| standard_normal(&mut rng)).collect());
                if let Some(u) = g.normalized() {
                    out.push(u);
                }
            }
            out
        }
    }
}

/// Largest angle between a unit vector and its nearest grid direction:
/// exact in the plane, estimated from seeded probes otherwise.
pub fn grid_mesh_angle(grid: &[DenseVector]) -> f64 {
    let d = grid[0].dim();
    if d == 1 {
        return 0.0;
    }
    if d == 2 {
        return std::f64::consts::PI / grid.len() as f64;
    }
    let mut rng = ChaCha8Rng::seed_from_u64(GRID_SEED.wrapping_add(1));
    let mut worst: f64 = 0.0;
    for _ in 0..4096 {
        let g = DenseVector::from_vec((0..d).map(|_| standard_normal(&mut rng)).collect());
        let Some(x) = g.normalized() else { continue };
        let best = grid.iter().map(|u| u.dot(&x)).fold(-1.0, f64::max);
        worst = worst.max(best.clamp(-1.0, 1.0).acos());
    }
    worst
}

/// A maximizer of `⟨u, ·⟩` for sets where one is available in closed form or by LP.
pub fn exact_maximizer(set: &SetDescription, u: &DenseVector) -> Result<Option<DenseVector>> {
    Ok(match set {
        SetDescription::Ball { center, radius } => Some(center.axpy(radius / u.norm(), u)),
        SetDescription::Box { lower, upper } => {
            let mut p = Vec::with_capacity(u.dim());
            for i in 0..u.dim() {
                let b = if u[i] > 0.0 {
                    upper[i]
                } else if u[i] < 0.0 {
                    lower[i]
                } else if lower[i].is_finite() {
                    lower[i]
                } else if upper[i].is_finite() {
                    upper[i]
                } else {
                    0.0
                };
                if !b.is_finite() {
                    return Ok(None);
                }
                p.push(b);
            }
            Some(DenseVector::from_vec(p))
        }
        SetDescription::Motzkin { points, .. } => {
            if set.support(u)?.is_infinite() {
                None
            } else {
                points
                    .iter()
                    .max_by(|a, b| u.dot(a).partial_cmp(&u.dot(b)).unwrap())
                    .cloned()
            }
        }
        SetDescription::Halfspace { normal, offset } | SetDescription::Hyperplane { normal, offset } => {
            (!set.support(u)?.is_infinite()).then(|| normal.scale(*offset))
        }
        SetDescription::Translate { inner, shift } => exact_maximizer(inner, u)?.map(|p| &p + shift),
        SetDescription::BallSum { inner, radius } => exact_maximizer(inner, u)?.map(|p| p.axpy(radius / u.norm(), u)),
        SetDescription::HPolyhedron { .. } | SetDescription::Intersection { .. } => match set.linear_form() {
            Some(lf) => match lf.maximize(u)? {
                LinearMax::Optimal { point, .. } => Some(point),
                _ => None,
            },
            None => None,
        },
    })
}

/// `min_{t ∈ T} t β + h_K(u − t g)` for an intersection of `K` with one row
/// `⟨g, x⟩ ≤ β` (`T = [0, ∞)`) or `⟨g, x⟩ = β` (`T = R`). Every `t` gives an
/// upper bound on the support of the intersection by weak duality.
fn dual_row_bound(k: &SetDescription, g: &DenseVector, beta: f64, equality: bool, u: &DenseVector) -> Result<f64> {
    let phi = |t: f64| -> Result<f64> {
        let w = u.axpy(-t, g);
        // h_K(0) = 0 for nonempty K
        let h = if w.norm() == 0.0 { 0.0 } else { k.support(&w)?.value };
        Ok(t * beta + h)
    };
    let scale = u.norm() / g.norm();
    let mut ts: Vec<f64> = vec![0.0];
    for e in -12..=12 {
        let t = scale * 2f64.powi(e);
        ts.push(t);
        if equality {
            ts.push(-t);
        }
    }
    ts.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let vals: Vec<f64> = ts.iter().map(|&t| phi(t)).collect::<Result<_>>()?;
    let (imin, &vmin) = vals.iter().enumerate().min_by(|a, b| a.1.partial_cmp(b.1).unwrap()).unwrap();
    if !vmin.is_finite() {
        return Ok(vmin);
    }
    let mut lo = ts[imin.saturating_sub(1)];
    let mut hi = ts[(imin + 1).min(ts.len() - 1)];
    let ratio = (5f64.sqrt() - 1.0) / 2.0;
    let mut best = vmin;
    let mut x1 = hi - ratio * (hi - lo);
    let mut x2 = lo + ratio * (hi - lo);
    let mut f1 = phi(x1)?;
    let mut f2 = phi(x2)?;
    for _ in 0..200 {
        if f1 <= f2 {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - ratio * (hi - lo);
            f1 = phi(x1)?;
        } else {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + ratio * (hi - lo);
            f2 = phi(x2)?;
        }
        best = best.min(f1).min(f2);
        if hi - lo <= 1e-15 * (1.0 + hi.abs()) {
            break;
        }
    }
    Ok(best)
}

fn support_upper(set: &SetDescription, u: &DenseVector) -> Result<f64> {
    let sv = set.support(u)?;
    if sv.exact {
        return Ok(sv.value);
    }
    let mut best = sv.value;
    match set {
        SetDescription::Intersection { members } if members.len() >= 2 => {
            for (i, m) in members.iter().enumerate() {
                let (g, beta, eq) = match m {
                    SetDescription::Halfspace { normal, offset } => (normal, *offset, false),
                    SetDescription::Hyperplane { normal, offset } => (normal, *offset, true),
                    _ => continue,
                };
                let rest: Vec<SetDescription> =
                    members.iter().enumerate().filter(|(j, _)| *j != i).map(|(_, s)| s.clone()).collect();
                let k = if rest.len() == 1 { rest.into_iter().next().unwrap() } else { SetDescription::Intersection { members: rest } };
                best = best.min(dual_row_bound(&k, g, beta, eq, u)?);
            }
        }
        SetDescription::Translate { inner, shift } => best = best.min(support_upper(inner, u)? + u.dot(shift)),
        SetDescription::BallSum { inner, radius } => best = best.min(support_upper(inner, u)? + radius * u.norm()),
        _ => {}
    }
    Ok(best)
}

/// Brackets `h_K(u)`. Exact variants return `lower = upper`; otherwise the
/// lower side comes from projecting a far point along `u` and the upper side
/// from member supports and a one-row Lagrangian dual.
pub fn support_bracket(set: &SetDescription, u: &DenseVector, cfg: &ProjectionConfig) -> Result<SupportBracket> {
    let sv = set.support(u)?;
    if sv.exact {
        if sv.is_infinite() {
            return Ok(SupportBracket { lower: f64::INFINITY, upper: f64::INFINITY, point: None });
        }
        let point = exact_maximizer(set, u)?;
        return Ok(SupportBracket { lower: point.as_ref().map_or(sv.value, |p| u.dot(p)).min(sv.value), upper: sv.value, point });
    }
    let upper = support_upper(set, u)?;
    let base = project(set, &DenseVector::zeros(u.dim()), cfg)?.point;
    let unit = u.scale(1.0 / u.norm());
    let reach = if upper.is_finite() { (upper / u.norm() - unit.dot(&base)).max(0.0) } else { 1.0 };
    let far = base.axpy(1e6 * (1.0 + reach + base.norm()), &unit);
    let p = project(set, &far, cfg)?.point;
    let lower = u.dot(&p).min(upper);
    Ok(SupportBracket { lower, upper, point: Some(p) })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn v(x: &[f64]) -> DenseVector {
        DenseVector::from_slice(x)
    }

    #[test]
    fn spherical_cap_support_is_tight() {
        let alpha = 0.02;
        let cap = SetDescription::intersection(vec![
            SetDescription::ball(v(&[0.0, 0.0]), 1.0).unwrap(),
            SetDescription::halfspace(v(&[-1.0, 0.0]), -(1.0 - alpha)).unwrap(),
        ])
        .unwrap();
        let b = support_bracket(&cap, &v(&[0.0, 1.0]), &ProjectionConfig::default()).unwrap();
        let chord_half = (2.0 * alpha - alpha * alpha).sqrt();
        assert!((b.upper - chord_half).abs() < 1e-9, "{b:?}");
        assert!(b.lower <= b.upper && b.upper - b.lower < 1e-4, "{b:?}");
    }

    #[test]
    fn grid_is_deterministic() {
        assert_eq!(direction_grid(5, 320), direction_grid(5, 320));
        assert_eq!(direction_grid(2, 128).len(), 128);
        assert!((grid_mesh_angle(&direction_grid(2, 128)) - std::f64::consts::PI / 128.0).abs() < 1e-15);
    }

    #[test]
    fn halfplane_ball_support() {
        let s = SetDescription::intersection(vec![
            SetDescription::halfspace(v(&[-1.0, 0.0]), -1.0).unwrap(),
            SetDescription::ball(v(&[0.0, 0.0]), 2.0).unwrap(),
        ])
        .unwrap();
        let b = support_bracket(&s, &v(&[1.0, 0.0]), &ProjectionConfig::default()).unwrap();
        assert!((b.upper - 2.0).abs() < 1e-9 && (b.lower - 2.0).abs() < 1e-6, "{b:?}");
    }
}
