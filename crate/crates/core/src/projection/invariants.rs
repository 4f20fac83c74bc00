//! Seeded invariant sweeps over a fixed zoo of sets.

use rand::Rng;
use rand_chacha::ChaCha8Rng;
use rand::SeedableRng;
use serde::Serialize;

use super::{project, ProjectionConfig};
use crate::error::Result;
use crate::sets::{HalfspaceRow, SetDescription};
use crate::vector::DenseVector;

fn v(x: &[f64]) -> DenseVector {
    DenseVector::from_slice(x)
}

/// One validated example per set variant.
pub fn variant_zoo() -> Vec<(&'static str, SetDescription)> {
    let motzkin = SetDescription::motzkin(
        vec![v(&[0.0, 0.0, 0.0]), v(&[1.0, 2.0, 0.0]), v(&[-1.0, 0.5, 1.0])],
        vec![v(&[1.0, 0.0, 0.0]), v(&[0.3, 0.0, 1.0])],
    )
    .unwrap();
    let rows = vec![
        HalfspaceRow::new(v(&[1.0, 1.0, 1.0]), 1.0),
        HalfspaceRow::new(v(&[-1.0, 0.0, 0.0]), 0.0),
        HalfspaceRow::new(v(&[0.0, -1.0, 0.0]), 0.0),
        HalfspaceRow::new(v(&[0.0, 0.0, -1.0]), 0.0),
        HalfspaceRow::new(v(&[1.0, -2.0, 0.5]), 0.4),
    ];
    vec![
        ("halfspace", SetDescription::halfspace(v(&[1.0, -2.0, 0.5]), 0.3).unwrap()),
        ("hyperplane", SetDescription::hyperplane(v(&[0.0, 1.0, 1.0]), -1.0).unwrap()),
        ("ball", SetDescription::ball(v(&[0.5, -0.5, 1.0]), 1.5).unwrap()),
        ("box", SetDescription::cuboid(vec![-1.0, 0.0, f64::NEG_INFINITY], vec![1.0, f64::INFINITY, 0.5]).unwrap()),
        ("hpoly", SetDescription::hpolyhedron(rows).unwrap()),
        ("motzkin", motzkin.clone()),
        ("translate", SetDescription::Translate { inner: Box::new(motzkin), shift: v(&[0.5, -1.0, 2.0]) }),
        (
            "intersection",
            SetDescription::intersection(vec![
                SetDescription::ball(v(&[0.0, 0.0, 0.0]), 1.0).unwrap(),
                SetDescription::halfspace(v(&[1.0, 1.0, 0.0]), 0.5).unwrap(),
            ])
            .unwrap(),
        ),
        (
            "ballsum",
            SetDescription::cuboid(vec![0.0, 0.0, 0.0], vec![1.0, 2.0, 0.5]).unwrap().minkowski_ball(0.75).unwrap(),
        ),
    ]
}

fn random_point(rng: &mut ChaCha8Rng, dim: usize, spread: f64) -> DenseVector {
    DenseVector::from_vec((0..dim).map(|_| rng.gen_range(-spread..spread)).collect())
}

/// A random member of `set`: coefficient-space sampling for generator
/// descriptions, coordinate sampling for boxes, interior sampling for balls,
/// projected random points otherwise.
pub fn sample_member(set: &SetDescription, rng: &mut ChaCha8Rng, cfg: &ProjectionConfig) -> Result<DenseVector> {
    let d = set.dim();
    Ok(match set {
        SetDescription::Motzkin { points, rays } => {
            let w: Vec<f64> = points.iter().map(|_| -rng.gen::<f64>().max(1e-300).ln()).collect();
            let s: f64 = w.iter().sum();
            let mut z = DenseVector::zeros(d);
            for (p, wi) in points.iter().zip(&w) {
                z = z.axpy(wi / s, p);
            }
            for r in rays {
                z = z.axpy(rng.gen_range(0.0..3.0), r);
            }
            z
        }
        SetDescription::Box { lower, upper } => DenseVector::from_vec(
            (0..d)
                .map(|i| {
                    let lo = if lower[i].is_finite() { lower[i] } else { upper[i].min(0.0) - 3.0 };
                    let hi = if upper[i].is_finite() { upper[i] } else { lo.max(0.0) + 3.0 };
                    // snap to a face a third of the time
                    match rng.gen_range(0..6) {
                        0 => lo,
                        1 => hi,
                        _ => rng.gen_range(lo..=hi),
                    }
                })
                .collect(),
        ),
        SetDescription::Ball { center, radius } => {
            let dir = random_point(rng, d, 1.0);
            let n = dir.norm().max(1e-12);
            center.axpy(radius * rng.gen::<f64>().powf(1.0 / d as f64) / n, &dir)
        }
        SetDescription::Translate { inner, shift } => &sample_member(inner, rng, cfg)? + shift,
        _ => {
            let x = random_point(rng, d, 4.0);
            project(set, &x, cfg)?.point
        }
    })
}

#[derive(Debug, Clone, Default, Serialize)]
pub struct InvariantReport {
    pub variant: String,
    pub nonexpansive_violations: usize,
    pub idempotence_violations: usize,
    pub vi_violations: usize,
    pub membership_violations: usize,
    pub worst_nonexpansive_excess: f64,
    pub worst_vi: f64,
}

impl InvariantReport {
    pub fn total_violations(&self) -> usize {
        self.nonexpansive_violations + self.idempotence_violations + self.vi_violations + self.membership_violations
    }
}

/// Runs the nonexpansiveness (200 pairs), idempotence, variational-inequality
/// (100 members per input) and distance/membership checks for one set.
pub fn check_set(name: &str, set: &SetDescription, seed: u64, cfg: &ProjectionConfig) -> Result<InvariantReport> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let d = set.dim();
    let slack = 10.0 * cfg.tol;
    let mut rep = InvariantReport { variant: name.to_string(), ..Default::default() };
    let members: Vec<DenseVector> = (0..100).map(|_| sample_member(set, &mut rng, cfg)).collect::<Result<_>>()?;
    for k in 0..200 {
        let x = random_point(&mut rng, d, 5.0);
        let y = if k % 4 == 0 { x.axpy(1e-3, &random_point(&mut rng, d, 1.0)) } else { random_point(&mut rng, d, 5.0) };
        let px = project(set, &x, cfg)?;
        let py = project(set, &y, cfg)?;
        let excess = px.point.dist(&py.point) - x.dist(&y);
        rep.worst_nonexpansive_excess = rep.worst_nonexpansive_excess.max(excess);
        if excess > 1e-8 {
            rep.nonexpansive_violations += 1;
        }
        if k < 100 {
            let again = project(set, &px.point, cfg)?;
            if again.distance > slack {
                rep.idempotence_violations += 1;
            }
            if !set.contains(&px.point, slack)? {
                rep.membership_violations += 1;
            }
            let g = &x - &px.point;
            let scale = 1.0 + g.norm();
            for z in &members {
                let vi = g.dot(&(z - &px.point)) / scale;
                rep.worst_vi = rep.worst_vi.max(vi);
                if vi > slack {
                    rep.vi_violations += 1;
                }
            }
            // a member has distance zero, and zero distance means membership
            let zd = project(set, &members[k], cfg)?.distance;
            if zd > slack {
                rep.membership_violations += 1;
            }
        }
    }
    Ok(rep)
}

pub fn invariant_suite(seed: u64) -> Result<Vec<InvariantReport>> {
    let cfg = ProjectionConfig::default();
    variant_zoo()
        .iter()
        .enumerate()
        .map(|(i, (name, set))| check_set(name, set, seed.wrapping_add(i as u64), &cfg))
        .collect()
}
