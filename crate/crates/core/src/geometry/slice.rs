//! Slices `S(f, α, K)` and the strong-exposedness diagnostic built on them.

use crate::error::{Error, Result};
use crate::metrics::{diameter_estimate, support_bracket, MetricBracket, MetricConfig};
use crate::sets::SetDescription;
use crate::vector::DenseVector;

/// `{x ∈ K : ⟨f, x⟩ ≥ sup f(K) − α}`. When the support is only bracketed the
/// upper side is used, so the returned slice never exceeds the true one.
pub fn slice(f: &DenseVector, alpha: f64, k: &SetDescription, cfg: &MetricConfig) -> Result<SetDescription> {
    f.check_dim(k.dim(), "slice")?;
    if !(alpha > 0.0) || !alpha.is_finite() {
        return Err(Error::validation("alpha", format!("slice width must be positive and finite, got {alpha}")));
    }
    let sup = support_bracket(k, f, &cfg.projection)?.upper;
    if !sup.is_finite() {
        return Err(Error::Precondition("slice undefined; f unbounded on K".into()));
    }
    let cut = SetDescription::halfspace(-f, alpha - sup)?;
    let mut members = match k {
        SetDescription::Intersection { members } => members.clone(),
        other => vec![other.clone()],
    };
    members.push(cut);
    SetDescription::intersection(members)
}

pub fn slice_diameter(f: &DenseVector, alpha: f64, k: &SetDescription, cfg: &MetricConfig) -> Result<MetricBracket> {
    diameter_estimate(&slice(f, alpha, k, cfg)?, cfg)
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExposureTrend {
    pub exposes: bool,
    /// `(α, diameter bracket)` with `α` decreasing.
    pub rows: Vec<(f64, MetricBracket)>,
    /// Why the verdict was forced, e.g. an unbounded slice.
    pub flag: Option<String>,
}

impl ExposureTrend {
    pub fn to_csv(&self) -> String {
        let mut out = String::from("alpha,lower,upper\n");
        for (a, b) in &self.rows {
            out.push_str(&format!(
                "{},{},{}\n",
                crate::metrics::format_real(*a),
                crate::metrics::format_real(b.lower),
                crate::metrics::format_real(b.upper)
            ));
        }
        out
    }
}

/// Whether `f` strongly exposes `a` in `A`, judged on the slice-diameter trend
/// over `alpha_grid`: the upper brackets must be nonincreasing as `α` shrinks
/// and the last one must drop below half of the first lower bracket.
pub fn strongly_exposes_check(
    f: &DenseVector,
    a: &DenseVector,
    set: &SetDescription,
    alpha_grid: &[f64],
    cfg: &MetricConfig,
) -> Result<ExposureTrend> {
    if alpha_grid.len() < 2 {
        return Err(Error::validation("alpha_grid", "need at least two slice widths"));
    }
    if !set.contains(a, 1e-9)? {
        return Err(Error::Precondition("the exposed candidate is not in the set".into()));
    }
    let sup = support_bracket(set, f, &cfg.projection)?;
    if !sup.upper.is_finite() {
        return Ok(ExposureTrend { exposes: false, rows: Vec::new(), flag: Some("slice unbounded: f unbounded on the set".into()) });
    }
    let defect = sup.upper - f.dot(a);
    if defect > 1e-9 * (1.0 + sup.upper.abs()) {
        return Err(Error::Precondition(format!("f does not support the set at the candidate (defect {defect:e})")));
    }
    let mut grid = alpha_grid.to_vec();
    grid.sort_by(|x, y| y.partial_cmp(x).unwrap());
    let mut rows = Vec::with_capacity(grid.len());
    for &alpha in &grid {
        let b = slice_diameter(f, alpha, set, cfg)?;
        if !b.upper.is_finite() {
            return Ok(ExposureTrend { exposes: false, rows, flag: Some(format!("unbounded slice at alpha {alpha}")) });
        }
        rows.push((alpha, b));
    }
    let monotone = rows.windows(2).all(|w| w[1].1.upper <= w[0].1.upper + 1e-9);
    let shrinks = rows.last().unwrap().1.upper <= 0.5 * rows[0].1.lower;
    Ok(ExposureTrend { exposes: monotone && shrinks, rows, flag: None })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn v(x: &[f64]) -> DenseVector {
        DenseVector::from_slice(x)
    }

    fn ball() -> SetDescription {
        SetDescription::ball(v(&[0.0, 0.0]), 1.0).unwrap()
    }

    fn square() -> SetDescription {
        SetDescription::cuboid(vec![0.0, 0.0], vec![1.0, 1.0]).unwrap()
    }

    #[test]
    fn ball_slice_is_a_cap() {
        let cfg = MetricConfig::default();
        let s = slice(&v(&[1.0, 0.0]), 0.02, &ball(), &cfg).unwrap();
        assert!(s.contains(&v(&[0.99, 0.0]), 0.0).unwrap());
        assert!(!s.contains(&v(&[0.97, 0.0]), 0.0).unwrap());
        let d = slice_diameter(&v(&[1.0, 0.0]), 0.02, &ball(), &cfg).unwrap();
        let chord = 2.0 * (0.04f64 - 0.0004).sqrt();
        assert!((chord - 0.39799).abs() < 1e-5);
        assert!(d.lower <= chord + 1e-8 && chord <= d.upper + 1e-8, "{d:?}");
    }

    #[test]
    fn box_slice_diameter() {
        let cfg = MetricConfig::default();
        let d = slice_diameter(&v(&[1.0, 0.0]), 0.25, &square(), &cfg).unwrap();
        let exact = 1.0625f64.sqrt();
        assert!(d.lower <= exact + 1e-12 && exact <= d.upper + 1e-12, "{d:?}");
    }

    #[test]
    fn unbounded_functional_is_refused() {
        let m = SetDescription::motzkin(vec![v(&[0.0, 0.0])], vec![v(&[1.0, 0.0])]).unwrap();
        assert!(matches!(slice(&v(&[1.0, 0.0]), 0.1, &m, &MetricConfig::default()), Err(Error::Precondition(_))));
    }

    #[test]
    fn exposure_verdicts() {
        let cfg = MetricConfig::default();
        let grid = [0.1, 0.05, 0.025, 0.0125];
        let t = strongly_exposes_check(&v(&[1.0, 0.0]), &v(&[1.0, 0.0]), &ball(), &grid, &cfg).unwrap();
        assert!(t.exposes, "{t:?}");
        let t = strongly_exposes_check(&v(&[1.0, 0.0]), &v(&[1.0, 0.5]), &square(), &grid, &cfg).unwrap();
        assert!(!t.exposes);
        assert!(t.rows.iter().all(|(_, b)| b.lower >= 1.0));
        let h = SetDescription::halfspace(v(&[1.0, 0.0]), 0.0).unwrap();
        let t = strongly_exposes_check(&v(&[1.0, 0.0]), &v(&[0.0, 0.0]), &h, &grid, &cfg).unwrap();
        assert!(!t.exposes && t.flag.is_some());
        assert!(matches!(
            strongly_exposes_check(&v(&[1.0, 0.0]), &v(&[0.0, 0.0]), &ball(), &grid, &cfg),
            Err(Error::Precondition(_))
        ));
    }

    #[test]
    fn slice_diameters_shrink_with_alpha() {
        let cfg = MetricConfig::default();
        let mut prev = f64::INFINITY;
        for alpha in [0.1, 0.05, 0.025, 0.0125, 0.00625] {
            let d = slice_diameter(&v(&[0.6, 0.8]), alpha, &ball(), &cfg).unwrap();
            assert!(d.upper <= prev + 1e-9);
            prev = d.upper;
        }
    }
}
