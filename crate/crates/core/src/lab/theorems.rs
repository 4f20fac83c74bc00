//! Convergence of minimal pairs under shrinking perturbations: the unique-pair
//! case, rotund bodies and bodies meeting with interior.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{example_two_cones, CheckOutcome, ShiftSign};
use crate::error::{Error, Result};
use crate::metrics::direction_grid;
use crate::projection::distance;
use crate::sets::{LinearMax, SetDescription};
use crate::solver::{min_distance_pair, SolveConfig, SolveMethod};
use crate::vector::{random_unit, DenseVector};

/// Final residual required of the unique-pair family.
pub const STABILITY_TOL: f64 = 1e-3;
/// Final residual required of the rotund-body family.
pub const LUR_TOL: f64 = 1e-4;
const PROBE: f64 = 1e-3;
const SENSITIVITY: f64 = 3.0;
const PROBES: usize = 4;
const MAX_REDRAWS: usize = 20;

/// Minimal pairs `(a_k, b_k)` along a perturbation schedule.
#[derive(Debug, Clone, PartialEq)]
pub struct TrackRun {
    pub limit: (DenseVector, DenseVector),
    pub pairs: Vec<(DenseVector, DenseVector)>,
    /// `‖a_k − a‖` per step.
    pub residuals: Vec<f64>,
    pub redraws: usize,
}

impl TrackRun {
    pub fn final_residual(&self) -> f64 {
        *self.residuals.last().unwrap_or(&f64::INFINITY)
    }

    /// Least-squares slope of `log2 ‖a_k − a‖` over the last half of the steps.
    pub fn tail_slope(&self) -> f64 {
        let n = self.residuals.len();
        let pts: Vec<(f64, f64)> =
            (n / 2..n).map(|k| (k as f64, (self.residuals[k] + 1e-300).log2())).collect();
        if pts.len() < 2 {
            return 0.0;
        }
        let m = pts.len() as f64;
        let (sx, sy) = pts.iter().fold((0.0, 0.0), |(a, b), p| (a + p.0, b + p.1));
        let (mx, my) = (sx / m, sy / m);
        let num: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
        let den: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
        num / den
    }
}

/// Solves every perturbed pair and measures the drift from `limit.0`.
pub fn track_pairs<F>(limit: (DenseVector, DenseVector), steps: usize, mut step: F, cfg: &SolveConfig) -> Result<TrackRun>
where
    F: FnMut(usize) -> Result<(SetDescription, SetDescription)>,
{
    let mut pairs = Vec::with_capacity(steps);
    let mut residuals = Vec::with_capacity(steps);
    for k in 1..=steps {
        let (a, b) = step(k)?;
        let r = min_distance_pair(&a, &b, cfg)?;
        residuals.push(r.a.dist(&limit.0));
        pairs.push((r.a, r.b));
    }
    Ok(TrackRun { limit, pairs, residuals, redraws: 0 })
}

fn dyadic(k: usize) -> f64 {
    0.5f64.powi(k as i32)
}

/// Rows per step, the last one held to `final_tol`, plus a tail-trend row.
fn convergence_outcome(name: &str, run: &TrackRun, final_tol: f64) -> CheckOutcome {
    let mut out = CheckOutcome::new(name);
    let n = run.residuals.len();
    for (k, r) in run.residuals.iter().enumerate() {
        let bound = if k + 1 == n { final_tol } else { f64::INFINITY };
        out.record(k + 1, *r, bound, || format!("step {} residual {r:e}", k + 1));
    }
    let slope = run.tail_slope();
    out.record(n + 1, slope, 0.0, || format!("tail slope {slope}"));
    out
}

/// Spread of the `A`-side solutions from 16 far starts.
fn multistart_spread(a: &SetDescription, b: &SetDescription, far: f64) -> Result<f64> {
    let cfg = SolveConfig { method: SolveMethod::Alternating, ..SolveConfig::default() };
    let mut sols: Vec<DenseVector> = Vec::new();
    for u in direction_grid(a.dim(), 16) {
        sols.push(min_distance_pair(a, b, &SolveConfig { start: Some(u.scale(far)), ..cfg.clone() })?.a);
    }
    let mut spread: f64 = 0.0;
    for i in 0..sols.len() {
        for j in 0..i {
            spread = spread.max(sols[i].dist(&sols[j]));
        }
    }
    Ok(spread)
}

/// Random polytope against a ball at positive distance with a unique
/// nearest pair; vertices jitter and the center moves by `2^{−k}`.
pub fn thm_stability_family(seed: u64, steps: usize) -> Result<(TrackRun, CheckOutcome)> {
    if steps < 3 {
        return Err(Error::validation("steps", "need at least three steps"));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x5354_4142);
    for redraw in 0..=MAX_REDRAWS {
        let d = 2 + rng.gen_range(0..3);
        let m = d + 2 + rng.gen_range(0..4);
        let pts: Vec<DenseVector> =
            (0..m).map(|_| random_unit(&mut rng, d).scale(1.5 * rng.gen::<f64>().powf(1.0 / d as f64))).collect();
        let center = random_unit(&mut rng, d).scale(3.0 + rng.gen::<f64>());
        let radius = 0.5 + 0.5 * rng.gen::<f64>();
        let a = SetDescription::motzkin(pts.clone(), vec![])?;
        let b = SetDescription::ball(center.clone(), radius)?;
        let base = min_distance_pair(&a, &b, &SolveConfig::default())?;
        if base.distance < 0.1 || multistart_spread(&a, &b, 100.0)? >= 1e-6 {
            continue;
        }
        // ill-conditioned pairs count as degenerate: a probe jitter independent
        // of the schedule must not move the nearest point by more than
        // SENSITIVITY times its size
        let mut worst: f64 = 0.0;
        for _ in 0..PROBES {
            let probe: Vec<DenseVector> = (0..=m).map(|_| random_unit(&mut rng, d)).collect();
            let pa = SetDescription::motzkin(pts.iter().zip(&probe).map(|(p, u)| p.axpy(PROBE, u)).collect(), vec![])?;
            let pb = SetDescription::ball(center.axpy(PROBE, &probe[m]), radius)?;
            worst = worst.max(min_distance_pair(&pa, &pb, &SolveConfig::default())?.a.dist(&base.a));
        }
        if worst > SENSITIVITY * PROBE {
            continue;
        }
        let jitter: Vec<Vec<DenseVector>> =
            (0..steps).map(|_| (0..=m).map(|_| random_unit(&mut rng, d)).collect()).collect();
        let step = |k: usize| -> Result<(SetDescription, SetDescription)> {
            let h = dyadic(k);
            let j = &jitter[k - 1];
            let moved = pts.iter().zip(j).map(|(p, u)| p.axpy(h, u)).collect();
            Ok((SetDescription::motzkin(moved, vec![])?, SetDescription::ball(center.axpy(h, &j[m]), radius)?))
        };
        let mut run = track_pairs((base.a, base.b), steps, step, &SolveConfig::default())?;
        run.redraws = redraw;
        let out = convergence_outcome("thm-stability", &run, STABILITY_TOL);
        return Ok((run, out));
    }
    Err(Error::Precondition(format!("no nondegenerate draw after {MAX_REDRAWS} redraws")))
}

/// [`thm_stability_family`] over seeds `seed..seed + trials`. Exhausted
/// redraws count as degenerate rejections, at most 5% of the trials.
pub fn thm_stability_suite(trials: usize, seed: u64, steps: usize) -> Result<CheckOutcome> {
    if trials == 0 {
        return Err(Error::validation("trials", "need at least one trial"));
    }
    let mut out = CheckOutcome::new("thm-stability");
    let mut rejected = 0;
    let mut worst_slope = f64::NEG_INFINITY;
    for t in 0..trials {
        let s = seed.wrapping_add(t as u64);
        match thm_stability_family(s, steps) {
            Ok((run, _)) => {
                let r = run.final_residual();
                worst_slope = worst_slope.max(run.tail_slope());
                out.record(t, r, STABILITY_TOL, || format!("seed {s}: final residual {r:e}"));
            }
            Err(Error::Precondition(msg)) => {
                rejected += 1;
                out.notes.push(format!("seed {s}: rejected ({msg})"));
            }
            Err(e) => return Err(e),
        }
    }
    out.record(trials, worst_slope, 0.0, || format!("worst tail slope {worst_slope}"));
    let frac = rejected as f64 / trials as f64;
    out.record(trials + 1, frac, 0.05, || format!("{rejected} of {trials} draws rejected"));
    Ok(out)
}

/// [`prop_bounded_intersection_family`] over seeds `seed..seed + trials`;
/// one row per seed holding its worst excess over the row bounds.
pub fn prop_bounded_suite(trials: usize, seed: u64, steps: usize) -> Result<CheckOutcome> {
    if trials == 0 {
        return Err(Error::validation("trials", "need at least one trial"));
    }
    let mut out = CheckOutcome::new("prop-bounded");
    for t in 0..trials {
        let s = seed.wrapping_add(t as u64);
        let (_, o) = prop_bounded_intersection_family(s, steps)?;
        let excess = o.rows.iter().map(|r| r.observed - r.bound).fold(f64::NEG_INFINITY, f64::max);
        out.record(t, excess, 0.0, || format!("seed {s}: {}", o.worst_case.clone().unwrap_or_default()));
    }
    Ok(out)
}

/// Body used by [`thm_lur_family`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LurBody {
    Ball,
    /// The cube `[−1, 1]^d`, flat at the contact face.
    Cube,
}

/// Position of the second set relative to the contact point `e_1`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum LurCase {
    /// `{x1 ≥ 1}`, touching at `e_1`.
    Tangent,
    /// `{x1 ≥ 1 + gap}`.
    Gap(f64),
}

/// Unit ball (or cube) against a halfspace normal to `e_1`. Step `k` jitters the
/// center by `2^{−k}`, sets the radius to `1 + (−1)^k 2^{−k}` and pushes the
/// halfspace out by `2^{−k}`. For the cube the halfspace normal also tilts
/// with alternating sign, sending the nearest face point from one edge to the other.
pub fn thm_lur_family(dim: usize, steps: usize, case: LurCase, body: LurBody) -> Result<(TrackRun, CheckOutcome)> {
    if dim < 2 {
        return Err(Error::validation("dim", "need at least two dimensions"));
    }
    let gap = match case {
        LurCase::Tangent => 0.0,
        LurCase::Gap(g) if g > 0.0 => g,
        LurCase::Gap(g) => return Err(Error::validation("gap", format!("must be positive, got {g}"))),
    };
    let e1 = DenseVector::basis(dim, 0);
    let e2 = DenseVector::basis(dim, 1);
    let mut rng = ChaCha8Rng::seed_from_u64(0x4c55_52 ^ dim as u64);
    let jitter: Vec<DenseVector> = (0..steps).map(|_| random_unit(&mut rng, dim)).collect();
    let step = |k: usize| -> Result<(SetDescription, SetDescription)> {
        let h = dyadic(k);
        let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
        let c = jitter[k - 1].scale(h);
        let r = 1.0 + sign * h;
        match body {
            LurBody::Ball => Ok((SetDescription::ball(c, r)?, SetDescription::halfspace(-&e1, -(1.0 + gap + h))?)),
            LurBody::Cube => {
                let lo = c.iter().map(|ci| ci - r).collect();
                let hi = c.iter().map(|ci| ci + r).collect();
                let n = e1.axpy(sign * 0.5, &e2).normalized().expect("nonzero");
                // sup of ⟨n, ·⟩ over the cube plus the gap
                let top: f64 = n.iter().zip(c.iter()).map(|(ni, ci)| ni * ci + ni.abs() * r).sum();
                Ok((SetDescription::cuboid(lo, hi)?, SetDescription::halfspace(-&n, -(top + gap + h))?))
            }
        }
    };
    let limit = (e1.clone(), e1.scale(1.0 + gap));
    let run = track_pairs(limit, steps, step, &SolveConfig::default())?;
    let name = match body {
        LurBody::Ball => "thm-lur",
        LurBody::Cube => "thm-lur/cube-control",
    };
    let mut out = convergence_outcome(name, &run, LUR_TOL);
    // drift against the slice-diameter rate √h
    let worst = run.residuals.iter().enumerate().map(|(k, r)| r / dyadic(k + 1).sqrt()).fold(0.0, f64::max);
    out.record(steps + 2, worst, 4.0, || format!("max residual/sqrt(h) {worst}"));
    Ok((run, out))
}

/// Large ball against a box meeting its interior; pairs must stay bounded and
/// settle on a point of the limit intersection.
pub fn prop_bounded_intersection_family(seed: u64, steps: usize) -> Result<(TrackRun, CheckOutcome)> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x5052_4f50);
    let d = 2 + rng.gen_range(0..3);
    let c = random_unit(&mut rng, d).scale(0.5 * rng.gen::<f64>());
    let radius = 3.0;
    let mid = c.axpy(rng.gen::<f64>(), &random_unit(&mut rng, d));
    let half: Vec<f64> = (0..d).map(|_| 0.5 + rng.gen::<f64>()).collect();
    let cube = |m: &DenseVector| {
        SetDescription::cuboid(
            m.iter().zip(&half).map(|(x, w)| x - w).collect(),
            m.iter().zip(&half).map(|(x, w)| x + w).collect(),
        )
    };
    let a = SetDescription::ball(c.clone(), radius)?;
    let b = cube(&mid)?;
    let moves: Vec<(DenseVector, DenseVector)> =
        (0..steps).map(|_| (random_unit(&mut rng, d), random_unit(&mut rng, d))).collect();
    let step = |k: usize| -> Result<(SetDescription, SetDescription)> {
        let h = dyadic(k);
        let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
        let (u, w) = &moves[k - 1];
        Ok((SetDescription::ball(c.axpy(h, u), radius + sign * h)?, cube(&mid.axpy(h, w))?))
    };
    let base = min_distance_pair(&a, &b, &SolveConfig::default())?;
    let run = track_pairs((base.a, base.b), steps, step, &SolveConfig::default())?;
    let mut out = CheckOutcome::new("prop-bounded");
    let bound = c.norm() + radius + 2.0;
    for (k, (ak, _)) in run.pairs.iter().enumerate() {
        out.record(k + 1, ak.norm(), bound, || format!("step {} |a_k| {}", k + 1, ak.norm()));
    }
    let last = &run.pairs.last().expect("steps ≥ 1").0;
    let miss = distance(&a, last)?.max(distance(&b, last)?);
    out.record(steps + 1, miss, 1e-6, || format!("final point misses the limit intersection by {miss:e}"));
    Ok((run, out))
}

/// Largest `x_{2n}` over `A_n ∩ B_n` of the two-cone family, by LP, for `n = 3..=N`.
pub fn two_cone_heights(big_n: usize, sign: ShiftSign) -> Result<Vec<(usize, f64)>> {
    let mut rows = Vec::new();
    for n in 3..=big_n {
        let f = example_two_cones(n, big_n, sign)?;
        let both = SetDescription::intersection(vec![
            f.a_n.convex().expect("convex").clone(),
            f.b_n.convex().expect("convex").clone(),
        ])?;
        let lf = both.linear_form().expect("generator sets are polyhedral");
        let h = match lf.maximize(&DenseVector::basis(2 * big_n, 2 * n - 1))? {
            LinearMax::Optimal { value, .. } => value,
            LinearMax::Unbounded => f64::INFINITY,
            LinearMax::Infeasible => return Err(Error::Precondition(format!("A_{n} and B_{n} do not meet"))),
        };
        rows.push((n, h));
    }
    Ok(rows)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn balls_track_the_line_of_centers() {
        let e1 = DenseVector::basis(3, 0);
        let step = |k: usize| -> Result<(SetDescription, SetDescription)> {
            let h = dyadic(k);
            Ok((SetDescription::ball(e1.scale(h), 1.0)?, SetDescription::ball(e1.scale(4.0), 1.0)?))
        };
        let run = track_pairs((e1.clone(), e1.scale(3.0)), 10, step, &SolveConfig::default()).unwrap();
        for (k, r) in run.residuals.iter().enumerate() {
            assert!((r - dyadic(k + 1)).abs() < 1e-8, "{k}: {r}");
        }
    }

    #[test]
    fn seeded_polytope_ball_instance() {
        let (run, out) = thm_stability_family(7, 12).unwrap();
        assert!(run.final_residual() < STABILITY_TOL, "{:?}", run.residuals);
        assert!(out.passed, "{}", out.summary());
    }

    #[test]
    fn tangent_corner_singleton() {
        // ball touching the unit square only at the origin
        let c = DenseVector::from_slice(&[-1.0, -1.0]).scale(0.5f64.sqrt());
        let step = |k: usize| -> Result<(SetDescription, SetDescription)> {
            let h = dyadic(k);
            let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
            Ok((
                SetDescription::ball(c.scale(1.0 + sign * h), 1.0)?,
                SetDescription::cuboid(vec![0.0, 0.0], vec![1.0, 1.0])?,
            ))
        };
        let o = DenseVector::zeros(2);
        let run = track_pairs((o.clone(), o.clone()), 16, step, &SolveConfig::default()).unwrap();
        let (a, b) = run.pairs.last().unwrap();
        assert!(a.norm() < 1e-3 && b.norm() < 1e-3, "{a:?} {b:?}");
    }

    #[test]
    fn rotund_body_converges_at_the_slice_rate() {
        let (run, out) = thm_lur_family(5, 12, LurCase::Tangent, LurBody::Ball).unwrap();
        assert!(run.final_residual() < 0.05, "{:?}", run.residuals);
        let ratio = out.rows.last().unwrap();
        assert!(ratio.pass, "{ratio:?}");
        let (run, _) = thm_lur_family(5, 12, LurCase::Gap(1.0), LurBody::Ball).unwrap();
        assert!(run.final_residual() < 1e-3);
        assert!(run.pairs.last().unwrap().1.dist(&DenseVector::basis(5, 0).scale(2.0)) < 1e-2);
    }

    #[test]
    fn cube_control_oscillates() {
        let (run, out) = thm_lur_family(4, 12, LurCase::Tangent, LurBody::Cube).unwrap();
        assert!(!out.passed);
        assert!(run.final_residual() > 0.1);
        let x2: Vec<f64> = run.pairs.iter().map(|(a, _)| a[1]).collect();
        assert!(x2.windows(2).all(|w| w[0] * w[1] < 0.0), "{x2:?}");
    }

    #[test]
    fn bounded_intersection_clusters() {
        let (_, out) = prop_bounded_intersection_family(42, 30).unwrap();
        assert!(out.passed, "{}", out.summary());
    }

    #[test]
    fn concentric_ball_and_box() {
        let o = DenseVector::zeros(3);
        let step = |_k: usize| -> Result<(SetDescription, SetDescription)> {
            Ok((SetDescription::ball(o.clone(), 2.0)?, SetDescription::cuboid(vec![-1.0; 3], vec![1.0; 3])?))
        };
        let run = track_pairs((o.clone(), o.clone()), 4, step, &SolveConfig::default()).unwrap();
        assert!(run.pairs.iter().all(|(a, b)| a.dist(b) == 0.0));
    }

    #[test]
    fn opposite_shift_heights_grow() {
        let h = two_cone_heights(6, ShiftSign::Opposite).unwrap();
        for (n, v) in &h {
            let nf = *n as f64;
            assert!((v - (1.0 + nf / nf.ln())).abs() < 1e-6, "n {n}: {v}");
        }
        assert!(h.windows(2).all(|w| w[1].1 > w[0].1));
    }
}
