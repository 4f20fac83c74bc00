//! Checks for upper semicontinuity of the distance, the recession-cone
//! description of bounded minimal sets and the exit-separation constant.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::CheckOutcome;
use crate::error::{Error, Result};
use crate::geometry::{gamma_adversarial, gamma_corpus, minimal_set_bounded, GAMMA};
use crate::metrics::direction_grid;
use crate::projection::distance;
use crate::sets::{HalfspaceRow, SetDescription};
use crate::solver::{min_distance_pair, SolveConfig, SolveMethod, SolveStatus};
use crate::vector::{random_unit, DenseVector};

/// `(A_k, B_k)` for `k = 1..` together with the limits `(A, B)`.
#[derive(Debug, Clone)]
pub struct DistanceFamily {
    pub name: String,
    pub steps: Vec<(SetDescription, SetDescription)>,
    pub limit: (SetDescription, SetDescription),
}

/// Slack for the final distance when the limits intersect.
const MEET_TOL: f64 = 1e-4;

/// Indices from which the tail maximum stands in for the limsup.
fn tail_start(len: usize) -> usize {
    len - len.div_ceil(3)
}

/// `limsup dist(A_k, B_k) ≤ dist(A, B)`, read off the last third of the steps.
pub fn fact2_check(family: &DistanceFamily, tol: f64, cfg: &SolveConfig) -> CheckOutcome {
    fact2_check_with(family, tol, None, cfg)
}

/// As [`fact2_check`]; with `meet_tol`, intersecting limits also require the
/// final distance to fall below it.
pub fn fact2_check_with(family: &DistanceFamily, tol: f64, meet_tol: Option<f64>, cfg: &SolveConfig) -> CheckOutcome {
    let mut out = CheckOutcome::new(&format!("fact2/{}", family.name));
    if family.steps.is_empty() {
        out.fail("empty family");
        return out;
    }
    let limit = match min_distance_pair(&family.limit.0, &family.limit.1, cfg) {
        Ok(r) => r.distance,
        Err(e) => {
            out.fail(format!("limit solve failed: {e}"));
            return out;
        }
    };
    let start = tail_start(family.steps.len());
    let mut last = None;
    for (k, (a, b)) in family.steps.iter().enumerate() {
        match min_distance_pair(a, b, cfg) {
            Ok(r) => {
                if k >= start {
                    out.record(k + 1, r.distance - limit, tol, || format!("step {} distance {:e} vs limit {:e}", k + 1, r.distance, limit));
                }
                last = Some(r.distance);
            }
            Err(e) => out.fail(format!("step {}: {e}", k + 1)),
        }
    }
    if let (Some(meet), true) = (meet_tol, limit <= 1e-12) {
        match last {
            Some(d) => out.record(family.steps.len() + 1, d, meet, || format!("final distance {d:e} with meeting limits")),
            None => out.fail("no final distance"),
        }
    }
    out
}

fn random_polytope(rng: &mut ChaCha8Rng, center: &DenseVector, radius: f64) -> Result<SetDescription> {
    let d = center.dim();
    let m = d + 2 + rng.gen_range(0..4);
    let pts = (0..m).map(|_| center.axpy(radius * rng.gen::<f64>().powf(1.0 / d as f64), &random_unit(rng, d))).collect();
    SetDescription::motzkin(pts, vec![])
}

/// Kinds by `seed % 4`: disjoint polytopes, overlapping polytopes, ball
/// against a polytope, overlapping balls. Step `k` moves each set by `2^{−k}/2`
/// in Hausdorff distance.
pub fn perturbation_family(seed: u64, steps: usize) -> Result<DistanceFamily> {
    if steps < 3 {
        return Err(Error::validation("steps", "need at least three steps"));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed.wrapping_mul(0x9e37_79b9_7f4a_7c15) ^ 0xfac7);
    let d = 2 + rng.gen_range(0..3);
    let kind = seed % 4;
    let gap = if kind % 2 == 0 { 4.0 } else { 0.5 };
    let ca = DenseVector::zeros(d);
    let cb = ca.axpy(gap, &random_unit(&mut rng, d));
    let (a, b, name) = match kind {
        0 => (random_polytope(&mut rng, &ca, 1.5)?, random_polytope(&mut rng, &cb, 1.5)?, "polytopes-apart"),
        1 => {
            let b = random_polytope(&mut rng, &cb, 1.5)?;
            // keep a shared vertex so the limits surely meet
            let mut a_pts = random_polytope(&mut rng, &ca, 1.5)?.generators().expect("motzkin").points;
            a_pts.push(b.generators().expect("motzkin").points[0].clone());
            (SetDescription::motzkin(a_pts, vec![])?, b, "polytopes-meeting")
        }
        2 => (SetDescription::ball(ca.clone(), 1.0)?, random_polytope(&mut rng, &cb, 1.5)?, "ball-polytope"),
        _ => (SetDescription::ball(ca.clone(), 1.0)?, SetDescription::ball(cb.clone(), 1.0)?, "balls-meeting"),
    };
    let perturb = |s: &SetDescription, h: f64, rng: &mut ChaCha8Rng| -> Result<SetDescription> {
        match s {
            SetDescription::Ball { center, radius } => {
                let sign = if rng.gen::<bool>() { 1.0 } else { -1.0 };
                SetDescription::ball(center.axpy(h / 4.0, &random_unit(rng, d)), radius + sign * h / 4.0)
            }
            other => other.translate(&random_unit(rng, d).scale(h / 2.0)),
        }
    };
    let mut seq = Vec::with_capacity(steps);
    for k in 1..=steps {
        let h = 0.5f64.powi(k as i32);
        seq.push((perturb(&a, h, &mut rng)?, perturb(&b, h, &mut rng)?));
    }
    Ok(DistanceFamily { name: format!("{name}#{seed}"), steps: seq, limit: (a, b) })
}

/// [`fact2_check`] over `families` seeded perturbation families.
pub fn fact2_suite(families: usize, steps: usize, seed: u64, tol: f64) -> Result<CheckOutcome> {
    let cfg = SolveConfig::default();
    let mut out = CheckOutcome::new("fact2");
    for i in 0..families {
        let fam = perturbation_family(seed.wrapping_add(i as u64), steps)?;
        let one = fact2_check_with(&fam, tol, Some(MEET_TOL), &cfg);
        for r in &one.rows {
            let slack = r.observed - r.bound;
            out.record(i, slack.max(0.0), 0.0, || format!("{}: {}", fam.name, one.worst_case.clone().unwrap_or_default()));
        }
        for note in one.notes {
            out.fail(format!("{}: {note}", fam.name));
        }
    }
    Ok(out)
}

/// Compares the recession-cone verdict on `m(A, B)` with the spread of
/// alternating-projection solutions from 16 far starts.
pub fn lemma_recession_check(a: &SetDescription, b: &SetDescription, cfg: &SolveConfig) -> Result<CheckOutcome> {
    let mut out = CheckOutcome::new("lemma-recession");
    let base = min_distance_pair(a, b, cfg)?;
    if base.status != SolveStatus::Converged {
        out.notes.push("skipped: distance not attained within the iteration cap".into());
        return Ok(out);
    }
    let cone_bounded = minimal_set_bounded(a, b)?;
    let scale = 1.0 + base.a.norm().max(base.b.norm());
    let far = 100.0 * scale;
    let d = a.dim();
    let alt = SolveConfig { method: SolveMethod::Alternating, ..cfg.clone() };
    let mut sols = Vec::with_capacity(16);
    for u in direction_grid(d, 16) {
        let r = min_distance_pair(a, b, &SolveConfig { start: Some(u.scale(far)), ..alt.clone() })?;
        if (r.distance - base.distance).abs() > 1e-6 * scale {
            out.fail(format!("start {u:?} reached distance {:e} instead of {:e}", r.distance, base.distance));
        }
        sols.push(r.a);
    }
    let mut spread = 0.0;
    let mut far_pair = (0, 0);
    for i in 0..sols.len() {
        for j in 0..i {
            let s = sols[i].dist(&sols[j]);
            if s > spread {
                spread = s;
                far_pair = (i, j);
            }
        }
    }
    let spread_bounded = spread <= 10.0 * scale;
    out.notes.push(format!("cone bounded: {cone_bounded}; spread {spread:e} vs scale {scale:e}"));
    let agree = cone_bounded == spread_bounded;
    out.record(0, if agree { 0.0 } else { 1.0 }, 0.0, || format!("cone {cone_bounded}, spread {spread:e}"));
    if !cone_bounded {
        let (i, j) = far_pair;
        // the minimizer set may be a half-line, so try both ends of the far pair
        let verified = match (&sols[i] - &sols[j]).normalized() {
            Some(dir) => {
                escape_holds(a, b, &sols[i], &dir, base.distance, scale)?
                    || escape_holds(a, b, &sols[j], &dir.scale(-1.0), base.distance, scale)?
            }
            None => false,
        };
        out.record(1, if verified { 0.0 } else { 1.0 }, 0.0, || "escape direction not verified".into());
    }
    Ok(out)
}

/// `a + t·dir` stays in `A` at the minimal distance for `t ∈ {1, 10, 100}`.
fn escape_holds(a: &SetDescription, b: &SetDescription, base: &DenseVector, dir: &DenseVector, dist: f64, scale: f64) -> Result<bool> {
    for t in [1.0, 10.0, 100.0] {
        let p = base.axpy(t * scale, dir);
        let tol = 1e-6 * (scale + t * scale);
        if !a.contains(&p, tol)? || distance(b, &p)? > dist + tol {
            return Ok(false);
        }
    }
    Ok(true)
}

/// `{lo ≤ ⟨n, x⟩ ≤ hi}`.
fn slab_rows(lo: f64, hi: f64, n: &DenseVector) -> Vec<HalfspaceRow> {
    vec![HalfspaceRow::new(n.clone(), hi), HalfspaceRow::new(-n, -lo)]
}

/// Seeded attained-distance instance and its expected verdict (bounded
/// minimal set or not). Kinds cycle through balls, polytopes, ball against a
/// halfspace, parallel strips, cones sharing a ray and opposite cones.
pub fn recession_instance(seed: u64) -> Result<(String, SetDescription, SetDescription, bool)> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x7265_6365);
    let d = 2 + rng.gen_range(0..2);
    let u = random_unit(&mut rng, d);
    let o = DenseVector::zeros(d);
    let c = u.scale(4.0 + rng.gen::<f64>());
    Ok(match seed % 6 {
        0 => ("balls".into(), SetDescription::ball(o, 1.0)?, SetDescription::ball(c, 1.0 + rng.gen::<f64>())?, true),
        1 => ("polytopes".into(), random_polytope(&mut rng, &o, 1.5)?, random_polytope(&mut rng, &c, 1.5)?, true),
        2 => {
            let h = SetDescription::halfspace(-&u, -3.0)?;
            ("ball-halfspace".into(), SetDescription::ball(o, 1.0)?, h, true)
        }
        3 => {
            let a = SetDescription::hpolyhedron(slab_rows(-1.0, 1.0, &u))?;
            let b = SetDescription::hpolyhedron(slab_rows(3.0, 3.5 + rng.gen::<f64>(), &u))?;
            ("strips".into(), a, b, false)
        }
        4 | 5 => {
            // a ray orthogonal-ish to the offset between the bases
            let mut r = random_unit(&mut rng, d);
            r = r.axpy(-r.dot(&u), &u).normalized().unwrap_or_else(|| DenseVector::basis(d, 0));
            let pa = random_polytope(&mut rng, &o, 1.0)?.generators().expect("motzkin").points;
            let pb = random_polytope(&mut rng, &c, 1.0)?.generators().expect("motzkin").points;
            let shared = seed % 6 == 4;
            let rb = if shared { r.clone() } else { -&r };
            let a = SetDescription::motzkin(pa, vec![r])?;
            let b = SetDescription::motzkin(pb, vec![rb])?;
            (if shared { "shared-ray" } else { "opposite-rays" }.into(), a, b, !shared)
        }
        _ => unreachable!(),
    })
}

/// [`lemma_recession_check`] over `count` seeded instances.
pub fn lemma_recession_suite(count: usize, seed: u64) -> Result<CheckOutcome> {
    let cfg = SolveConfig::default();
    let mut out = CheckOutcome::new("lemma-recession");
    for i in 0..count {
        let (name, a, b, expect) = recession_instance(seed.wrapping_add(i as u64))?;
        let one = lemma_recession_check(&a, &b, &cfg)?;
        let cone = minimal_set_bounded(&a, &b)?;
        if cone != expect {
            out.notes.push(format!("instance {i} ({name}): construction predicted bounded={expect}, cone says {cone}"));
        }
        let bad = one.rows.iter().map(|r| r.observed).fold(0.0, f64::max) + if one.passed { 0.0 } else { 1.0 };
        out.record(i, bad.min(1.0), 0.0, || format!("instance {i} ({name}): {}", one.notes.join("; ")));
    }
    Ok(out)
}

/// Exit-separation ratio over the seeded corpus plus boundary stress cases.
pub fn lemma_gamma17_suite(trials: usize, dims: &[usize], seed: u64) -> Result<CheckOutcome> {
    if trials == 0 {
        return Err(Error::validation("trials", "need at least one trial"));
    }
    let mut out = CheckOutcome::new("gamma17");
    for &d in dims {
        let s = gamma_corpus(d, trials, seed)?;
        let adv = gamma_adversarial(d, trials.div_ceil(10), seed)?;
        let worst = if adv.max_ratio > s.max_ratio { &adv } else { &s };
        out.record(d, worst.max_ratio, GAMMA, || {
            let w = worst.worst.as_ref().map(|w| format!("x={:?} y={:?} a={:?} b={:?}", w[0], w[1], w[2], w[3])).unwrap_or_default();
            format!("dim {d} R={} {w}", worst.worst_radius)
        });
        out.trials += s.trials + adv.trials - 1;
    }
    Ok(out)
}
