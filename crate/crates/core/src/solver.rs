//! Minimal-distance pairs between closed convex sets.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::kernels::qp_motzkin_pair;
use crate::projection::{project, ProjectionConfig};
use crate::sets::{PiecewiseSet, SetDescription};
use crate::vector::DenseVector;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum SolveStatus {
    Converged,
    CapReached,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SolveMethod {
    /// Exact active-set pair solve when both sets have cheap generators,
    /// confirmed by alternating projections; alternating projections otherwise.
    Auto,
    /// Plain alternating projections.
    Alternating,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SolveConfig {
    pub tol: f64,
    pub max_iter: usize,
    /// Defaults to the origin.
    pub start: Option<DenseVector>,
    pub method: SolveMethod,
    pub projection: ProjectionConfig,
}

impl Default for SolveConfig {
    fn default() -> Self {
        SolveConfig {
            tol: 1e-11,
            max_iter: 100_000,
            start: None,
            method: SolveMethod::Auto,
            projection: ProjectionConfig::default(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SolveReport {
    pub a: DenseVector,
    pub b: DenseVector,
    pub distance: f64,
    pub lower_bound: f64,
    pub iterations: usize,
    pub trace: Vec<f64>,
    pub status: SolveStatus,
}

impl SolveReport {
    pub fn to_json(&self, with_trace: bool) -> serde_json::Value {
        let mut v = serde_json::to_value(self).expect("report serializes");
        if !with_trace {
            v.as_object_mut().expect("object").remove("trace");
        }
        v
    }
}

/// A certified lower bound on `dist(A, B)` from a linear functional.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct LowerBound {
    pub value: f64,
    /// False when a needed support value was infinite.
    pub certified: bool,
}

/// `(inf_B ⟨f,·⟩ − sup_A ⟨f,·⟩) / ‖f‖`, clamped at zero.
pub fn distance_lower_bound(a: &SetDescription, b: &SetDescription, f: &DenseVector) -> Result<LowerBound> {
    if f.norm() == 0.0 {
        return Err(Error::Input("separating functional must be nonzero".into()));
    }
    let sa = a.support(f)?;
    let sb = b.support(&-f)?;
    if sa.is_infinite() || sb.is_infinite() {
        return Ok(LowerBound { value: 0.0, certified: false });
    }
    let gap = (-sb.value - sa.value) / f.norm();
    Ok(LowerBound { value: gap.max(0.0), certified: true })
}

fn alternate(
    a_set: &SetDescription,
    b_set: &SetDescription,
    mut a: DenseVector,
    cfg: &SolveConfig,
) -> Result<(DenseVector, DenseVector, Vec<f64>, SolveStatus)> {
    let pc = &cfg.projection;
    let mut b = project(b_set, &a, pc)?.point;
    let mut trace = vec![a.dist(&b)];
    for _ in 0..cfg.max_iter {
        let a2 = project(a_set, &b, pc)?.point;
        let b2 = project(b_set, &a2, pc)?.point;
        let moved = a2.dist(&a).max(b2.dist(&b));
        a = a2;
        b = b2;
        trace.push(a.dist(&b));
        if moved <= cfg.tol {
            return Ok((a, b, trace, SolveStatus::Converged));
        }
    }
    Ok((a, b, trace, SolveStatus::CapReached))
}

/// Computes `dist(A, B)` and a pair attaining it.
pub fn min_distance_pair(a_set: &SetDescription, b_set: &SetDescription, cfg: &SolveConfig) -> Result<SolveReport> {
    if a_set.dim() != b_set.dim() {
        return Err(Error::dim(a_set.dim(), b_set.dim(), "min_distance_pair"));
    }
    let d = a_set.dim();
    let start = match &cfg.start {
        Some(s) => {
            s.check_dim(d, "solver start")?;
            s.clone()
        }
        None => DenseVector::zeros(d),
    };
    let mut a0 = project(a_set, &start, &cfg.projection)?.point;
    if cfg.method == SolveMethod::Auto {
        if let (Some(ga), Some(gb)) = (a_set.generators(), b_set.generators()) {
            let pair = qp_motzkin_pair(&ga.points, &ga.rays, &gb.points, &gb.rays, cfg.tol, cfg.max_iter)?;
            a0 = project(a_set, &pair.a, &cfg.projection)?.point;
        }
    }
    let (a, b, trace, mut status) = alternate(a_set, b_set, a0, cfg)?;
    let slack = 10.0 * cfg.projection.tol.max(cfg.tol);
    if status == SolveStatus::Converged && !(a_set.contains(&a, slack)? && b_set.contains(&b, slack)?) {
        status = SolveStatus::CapReached;
    }
    let distance = a.dist(&b);
    let f = &b - &a;
    let lower_bound = if f.norm() > 0.0 {
        distance_lower_bound(a_set, b_set, &f)?.value.min(distance)
    } else {
        0.0
    };
    Ok(SolveReport { iterations: trace.len() - 1, a, b, distance, lower_bound, trace, status })
}

#[derive(Debug, Clone, PartialEq)]
pub struct PiecewiseReport {
    pub report: SolveReport,
    pub pieces: (usize, usize),
    /// Piece pairs whose solve failed.
    pub failures: Vec<(usize, usize, String)>,
}

impl PiecewiseReport {
    pub fn partial(&self) -> bool {
        !self.failures.is_empty()
    }
}

/// Minimizes over all piece pairs; ties go to the lexicographically first pair.
pub fn piecewise_min_distance(a: &PiecewiseSet, b: &PiecewiseSet, cfg: &SolveConfig) -> Result<PiecewiseReport> {
    let mut best: Option<(SolveReport, (usize, usize))> = None;
    let mut failures = Vec::new();
    for (i, pa) in a.pieces.iter().enumerate() {
        for (j, pb) in b.pieces.iter().enumerate() {
            match min_distance_pair(pa, pb, cfg) {
                Ok(r) => {
                    let better = best.as_ref().map_or(true, |(cur, _)| r.distance < cur.distance - 1e-12);
                    if better {
                        best = Some((r, (i, j)));
                    }
                }
                Err(e) => failures.push((i, j, e.to_string())),
            }
        }
    }
    match best {
        Some((report, pieces)) => Ok(PiecewiseReport { report, pieces, failures }),
        None => Err(Error::numerical("piecewise_min_distance", "every piece pair failed", f64::NAN, None)),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn v(x: &[f64]) -> DenseVector {
        DenseVector::from_slice(x)
    }

    #[test]
    fn disjoint_balls() {
        let a = SetDescription::ball(v(&[0.0, 0.0]), 1.0).unwrap();
        let b = SetDescription::ball(v(&[4.0, 0.0]), 1.0).unwrap();
        let r = min_distance_pair(&a, &b, &SolveConfig::default()).unwrap();
        assert!((r.distance - 2.0).abs() < 1e-10);
        assert!(r.a.dist(&v(&[1.0, 0.0])) < 1e-9 && r.b.dist(&v(&[3.0, 0.0])) < 1e-9);
        assert_eq!(r.status, SolveStatus::Converged);
        assert!((r.lower_bound - 2.0).abs() < 1e-9);
    }

    #[test]
    fn intersecting_halfspace_and_ball() {
        let a = SetDescription::halfspace(v(&[1.0, 0.0]), 0.0).unwrap();
        let b = SetDescription::ball(v(&[0.0, 0.0]), 1.0).unwrap();
        let r = min_distance_pair(&a, &b, &SolveConfig::default()).unwrap();
        assert!(r.distance < 1e-12);
    }

    #[test]
    fn motzkin_against_hyperplane() {
        // points (1/4) e1 and e_k + (1/k) e1 style rays in R^8
        let k = 8;
        let mut points = vec![DenseVector::basis(k, 0).scale(0.25)];
        points.push(&DenseVector::basis(k, 0).scale(0.5) + &DenseVector::basis(k, 3));
        let rays: Vec<DenseVector> =
            (1..k).map(|j| &DenseVector::basis(k, j) + &DenseVector::basis(k, 0).scale(1.0 / (j + 1) as f64)).collect();
        let a = SetDescription::motzkin(points, rays).unwrap();
        let b = SetDescription::hyperplane(DenseVector::basis(k, 0), 0.0).unwrap();
        let r = min_distance_pair(&a, &b, &SolveConfig::default()).unwrap();
        assert!((r.distance - 0.25).abs() < 1e-10);
        let lb = distance_lower_bound(&a, &b, &-&DenseVector::basis(k, 0)).unwrap();
        assert!(lb.certified && (lb.value - 0.25).abs() < 1e-12);
    }

    #[test]
    fn lower_bound_examples() {
        let a = SetDescription::halfspace(v(&[1.0, 0.0]), 0.0).unwrap();
        let b = SetDescription::ball(v(&[4.0, 0.0]), 1.0).unwrap();
        let lb = distance_lower_bound(&a, &b, &v(&[1.0, 0.0])).unwrap();
        assert_eq!(lb, LowerBound { value: 3.0, certified: true });
        // parallel strips, functional along the strips
        let s1 = SetDescription::cuboid(vec![f64::NEG_INFINITY, 0.0], vec![f64::INFINITY, 1.0]).unwrap();
        let s2 = SetDescription::cuboid(vec![f64::NEG_INFINITY, 3.0], vec![f64::INFINITY, 4.0]).unwrap();
        let lb = distance_lower_bound(&s1, &s2, &v(&[1.0, 0.0])).unwrap();
        assert_eq!(lb.value, 0.0);
        assert!(!lb.certified);
        let lb = distance_lower_bound(&s1, &s2, &v(&[0.0, 1.0])).unwrap();
        assert_eq!(lb.value, 2.0);
    }

    #[test]
    fn trace_is_monotone_on_slow_instance() {
        let a = SetDescription::ball(v(&[0.0, 0.0]), 1.0).unwrap();
        let b = SetDescription::halfspace(v(&[-1.0, 0.0]), -1.0).unwrap();
        let cfg = SolveConfig { method: SolveMethod::Alternating, max_iter: 2000, ..Default::default() };
        let r = min_distance_pair(&a, &b, &SolveConfig { start: Some(v(&[0.0, 1.0])), ..cfg }).unwrap();
        assert!(r.trace.windows(2).all(|w| w[1] <= w[0] + 1e-12));
        assert!(r.distance < 1e-3);
    }

    #[test]
    fn piecewise_identical_sets() {
        let p = PiecewiseSet::new(vec![SetDescription::ball(v(&[1.0, 1.0]), 1.0).unwrap()]).unwrap();
        let r = piecewise_min_distance(&p, &p, &SolveConfig::default()).unwrap();
        assert!(r.report.distance < 1e-12);
        assert_eq!(r.pieces, (0, 0));
        assert!(!r.partial());
    }

    #[test]
    fn report_json_elides_trace() {
        let a = SetDescription::ball(v(&[0.0]), 1.0).unwrap();
        let b = SetDescription::ball(v(&[3.0]), 1.0).unwrap();
        let r = min_distance_pair(&a, &b, &SolveConfig::default()).unwrap();
        let j = r.to_json(false);
        assert!(j.get("trace").is_none());
        assert_eq!(j["status"], "converged");
    }

    fn random_polytope(rng: &mut ChaCha8Rng, center: f64) -> SetDescription {
        let pts = (0..rng.gen_range(1..5))
            .map(|_| v(&[center + rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)]))
            .collect();
        let rays = (0..rng.gen_range(0..2))
            .map(|_| v(&[rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)]))
            .collect();
        SetDescription::motzkin(pts, rays).unwrap()
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(32))]
        #[test]
        fn certificate_consistency_and_symmetry(seed in any::<u64>()) {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let a = random_polytope(&mut rng, 0.0);
            let shift = rng.gen_range(0.0..4.0);
            let b = random_polytope(&mut rng, shift);
            let b = if rng.gen_bool(0.5) { b } else { b.minkowski_ball(0.3).unwrap() };
            let cfg = SolveConfig::default();
            let r = min_distance_pair(&a, &b, &cfg).unwrap();
            prop_assert!(r.lower_bound <= r.distance + 1e-8);
            prop_assert!(r.trace.windows(2).all(|w| w[1] <= w[0] + 1e-12));
            prop_assert!((r.a.dist(&r.b) - r.distance).abs() < 1e-10);
            let pcfg = ProjectionConfig::default();
            for _ in 0..100 {
                let x = crate::projection::invariants::sample_member(&a, &mut rng, &pcfg).unwrap();
                let y = project(&b, &v(&[rng.gen_range(-3.0..7.0), rng.gen_range(-3.0..3.0), rng.gen_range(-3.0..3.0)]), &pcfg).unwrap().point;
                prop_assert!(r.distance <= x.dist(&y) + 1e-9);
            }
            let s = min_distance_pair(&b, &a, &cfg).unwrap();
            prop_assert!((s.distance - r.distance).abs() < 1e-9);
        }
    }
}
