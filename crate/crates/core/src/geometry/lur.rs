//! Sampled modulus of local uniform rotundity at a boundary point.

use crate::error::{Error, Result};
use crate::metrics::{direction_grid, format_real, support_bracket, MetricConfig};
use crate::sets::SetDescription;
use crate::vector::DenseVector;

const BISECTIONS: usize = 60;
const PROBE_FAN: usize = 64;

/// `δ(ε)` estimates: each entry is the smallest sampled boundary depth of a
/// midpoint `(a + y)/2` with `‖y − a‖ ≥ ε`, hence an upper estimate.
#[derive(Debug, Clone, PartialEq)]
pub struct LurProfile {
    pub eps_grid: Vec<f64>,
    pub delta_estimates: Vec<f64>,
    pub sample_counts: Vec<usize>,
}

impl LurProfile {
    pub fn to_csv(&self) -> String {
        let mut out = String::from("eps,delta,samples\n");
        for i in 0..self.eps_grid.len() {
            out.push_str(&format!(
                "{},{},{}\n",
                format_real(self.eps_grid[i]),
                format_real(self.delta_estimates[i]),
                self.sample_counts[i]
            ));
        }
        out
    }
}

/// First exit of the ray `p + t u` from `set`, or `None` if the ray stays inside.
fn exit_distance(set: &SetDescription, p: &DenseVector, u: &DenseVector, scale: f64) -> Result<Option<f64>> {
    let mut hi = scale;
    while set.contains(&p.axpy(hi, u), 0.0)? {
        hi *= 2.0;
        if hi > 1e8 * scale {
            return Ok(None);
        }
    }
    let mut lo = 0.0;
    for _ in 0..BISECTIONS {
        let mid = 0.5 * (lo + hi);
        if set.contains(&p.axpy(mid, u), 0.0)? {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(Some(hi))
}

/// `dist(∂A, m)` for `m ∈ A`: the shortest exit over a probe fan.
fn boundary_depth(set: &SetDescription, m: &DenseVector, fan: &[DenseVector], scale: f64) -> Result<f64> {
    let mut best = f64::INFINITY;
    for u in fan {
        if let Some(t) = exit_distance(set, m, u, scale)? {
            best = best.min(t);
        }
    }
    Ok(best)
}

/// Midpoint of the bounding box along the axes; must be an interior point.
fn interior_reference(set: &SetDescription, cfg: &MetricConfig) -> Result<(DenseVector, f64)> {
    let d = set.dim();
    let mut c = vec![0.0; d];
    let mut width = f64::INFINITY;
    for (i, ci) in c.iter_mut().enumerate() {
        let e = DenseVector::basis(d, i);
        let hi = support_bracket(set, &e, &cfg.projection)?;
        let lo = support_bracket(set, &-&e, &cfg.projection)?;
        if !hi.upper.is_finite() || !lo.upper.is_finite() {
            return Err(Error::Precondition("LUR modulus needs a bounded body".into()));
        }
        *ci = 0.5 * (hi.lower - lo.lower);
        width = width.min(hi.lower + lo.lower);
    }
    let c = DenseVector::from_vec(c);
    let rho = 1e-6 * width;
    let inside = set.contains(&c, 0.0)?
        && (0..d).all(|i| {
            [rho, -rho].iter().all(|&s| set.contains(&c.axpy(s, &DenseVector::basis(d, i)), 0.0).unwrap_or(false))
        });
    if !(width > 0.0) || !inside {
        return Err(Error::Precondition("could not locate an interior reference point".into()));
    }
    Ok((c, width))
}

/// Samples boundary points `y` along `512·d` rays from an interior reference
/// and reports, per `ε`, the least midpoint depth among `‖y − a‖ ≥ ε`.
pub fn lur_modulus(set: &SetDescription, a: &DenseVector, eps_grid: &[f64], cfg: &MetricConfig) -> Result<LurProfile> {
    let d = set.dim();
    a.check_dim(d, "lur_modulus")?;
    if eps_grid.is_empty() || eps_grid.windows(2).any(|w| w[1] <= w[0]) || eps_grid[0] <= 0.0 {
        return Err(Error::validation("eps_grid", "must be nonempty, positive and strictly increasing"));
    }
    let (c, scale) = interior_reference(set, cfg)?;
    let fan = direction_grid(d, PROBE_FAN.max(2 * d));
    if !set.contains(a, 1e-9)? {
        return Err(Error::Precondition("the base point is not in the set".into()));
    }
    let outward = (a - &c).normalized().ok_or_else(|| Error::Precondition("base point is the interior reference".into()))?;
    if set.contains(&a.axpy(1e-6 * scale, &outward), 0.0)? {
        return Err(Error::Precondition("the base point is not on the boundary".into()));
    }
    let mut samples: Vec<(f64, f64)> = Vec::new();
    for u in direction_grid(d, 512 * d) {
        let Some(t) = exit_distance(set, &c, &u, scale)? else { continue };
        let y = c.axpy(t, &u);
        let m = a.axpy(1.0, &y).scale(0.5);
        let depth = if set.contains(&m, 0.0)? { boundary_depth(set, &m, &fan, scale)? } else { 0.0 };
        samples.push((a.dist(&y), depth));
    }
    let mut delta_estimates = Vec::with_capacity(eps_grid.len());
    let mut sample_counts = Vec::with_capacity(eps_grid.len());
    for &eps in eps_grid {
        let eligible: Vec<f64> = samples.iter().filter(|(r, _)| *r >= eps).map(|(_, dep)| *dep).collect();
        sample_counts.push(eligible.len());
        delta_estimates.push(eligible.iter().cloned().fold(f64::INFINITY, f64::min));
    }
    Ok(LurProfile { eps_grid: eps_grid.to_vec(), delta_estimates, sample_counts })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn v(x: &[f64]) -> DenseVector {
        DenseVector::from_slice(x)
    }

    #[test]
    fn ball_modulus_matches_midpoint_depth() {
        let ball = SetDescription::ball(v(&[0.0, 0.0]), 1.0).unwrap();
        let eps = [0.25, 0.5, 1.0];
        let p = lur_modulus(&ball, &v(&[0.0, 1.0]), &eps, &MetricConfig::default()).unwrap();
        for (e, dlt) in eps.iter().zip(&p.delta_estimates) {
            let exact = 1.0 - (1.0 - e * e / 4.0).sqrt();
            assert!((dlt - exact).abs() <= 0.05 * exact, "eps {e}: {dlt} vs {exact}");
        }
        assert!(p.delta_estimates.windows(2).all(|w| w[0] <= w[1]));
    }

    #[test]
    fn flat_face_is_not_rotund() {
        let sq = SetDescription::cuboid(vec![0.0, 0.0], vec![1.0, 1.0]).unwrap();
        let p = lur_modulus(&sq, &v(&[1.0, 0.5]), &[0.4], &MetricConfig::default()).unwrap();
        assert!(p.delta_estimates[0] <= 1e-6, "{p:?}");
        assert!(p.sample_counts[0] > 0);
    }

    #[test]
    fn interior_base_point_is_refused() {
        let ball = SetDescription::ball(v(&[0.0, 0.0]), 1.0).unwrap();
        assert!(matches!(
            lur_modulus(&ball, &v(&[0.5, 0.0]), &[0.5], &MetricConfig::default()),
            Err(Error::Precondition(_))
        ));
    }
}
