//! Sampled checks of the three block inclusions behind the directional bound
//! on `A ∩ B` for the two-cone family.
//!
//! Membership in `t·conv(∪ V_n)` for sets `V_n ∋ 0` living in orthogonal
//! planar blocks is decided through gauges: `x` belongs iff
//! `Σ_n g_{V_n}(x_n) ≤ t`.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::polygon::{norm, Polygon, Wedge, P2};
use super::CheckOutcome;
use crate::error::{Error, Result};

const SLACK: f64 = 1e-9;

fn dirichlet(rng: &mut impl Rng, k: usize) -> Vec<f64> {
    let e: Vec<f64> = (0..k).map(|_| -(1.0 - rng.gen::<f64>()).ln()).collect();
    let s: f64 = e.iter().sum();
    e.into_iter().map(|x| x / s).collect()
}

fn fmt_point(x: &[P2]) -> String {
    let parts: Vec<String> = x.iter().map(|p| format!("({:.6e},{:.6e})", p[0], p[1])).collect();
    parts.join(" ")
}

/// Block cones of index `n`: `C_n = cone{(1,0), (1/n,1)} − (1/n, 0)` and its mirror.
fn block_cones(n: usize) -> (Wedge, Wedge) {
    let k = 1.0 / n as f64;
    (Wedge { apex: [-k, 0.0], r1: [1.0, 0.0], r2: [k, 1.0] }, Wedge { apex: [k, 0.0], r1: [-1.0, 0.0], r2: [-k, 1.0] })
}

/// `(C_n + εB) ∩ (D_n + εB) ⊂ 2B` with `ε = 1/√(n²+1)`.
pub fn lemma_cone_caps(n_grid: &[usize], samples: usize, seed: u64) -> Result<CheckOutcome> {
    if n_grid.is_empty() || samples == 0 {
        return Err(Error::validation("samples", "need a nonempty block grid and at least one sample"));
    }
    let mut out = CheckOutcome::new("hull-lemma-caps");
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let per = samples.div_ceil(n_grid.len());
    let mut idx = 0;
    for &n in n_grid {
        if n == 0 {
            return Err(Error::validation("n_grid", "block indices start at 1"));
        }
        let (c, d) = block_cones(n);
        let eps = 1.0 / ((n * n + 1) as f64).sqrt();
        let inside = |p: P2, tol: f64| c.distance(p) <= eps + tol && d.distance(p) <= eps + tol;
        // the cap of the enlarged wedges sits exactly at height 2
        let cap = [0.0, 2.0];
        if inside(cap, 1e-12) {
            out.record(idx, norm(cap), 2.0 + SLACK, || format!("n={n} cap {}", fmt_point(&[cap])));
            idx += 1;
        } else {
            out.fail(format!("n={n}: cap point not in the enlarged intersection"));
        }
        let (x_hi, y_lo) = (2.0 / n as f64 + eps, -eps);
        let mut drawn = 0;
        let mut attempts = 0;
        while drawn < per && attempts < 1000 * per {
            attempts += 1;
            let p = [x_hi * (2.0 * rng.gen::<f64>() - 1.0), y_lo + (2.0 - y_lo) * rng.gen::<f64>()];
            if !inside(p, 0.0) {
                continue;
            }
            drawn += 1;
            out.record(idx, norm(p), 2.0 + SLACK, || format!("n={n} {}", fmt_point(&[p])));
            idx += 1;
        }
        if drawn < per {
            out.notes.push(format!("n={n}: only {drawn} of {per} samples accepted"));
        }
    }
    Ok(out)
}

fn random_blocks(rng: &mut impl Rng, big_n: usize) -> Vec<Polygon> {
    (0..big_n)
        .map(|_| {
            let k = 4 + rng.gen_range(0..5);
            Polygon::random_star(rng, k, 0.3, 2.0)
        })
        .collect()
}

/// `conv(∪W_n + εB_Y) ⊂ 2 conv(∪[W_n + √N ε B_{X_n}])` for random block polygons.
pub fn lemma_ball_spread(big_n: usize, eps_grid: &[f64], samples: usize, seed: u64) -> Result<CheckOutcome> {
    if big_n == 0 || eps_grid.is_empty() || samples == 0 {
        return Err(Error::validation("samples", "need blocks, enlargements and samples"));
    }
    let mut out = CheckOutcome::new("hull-lemma-enlargement");
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x2);
    let w = random_blocks(&mut rng, big_n);
    let root_n = (big_n as f64).sqrt();
    for s in 0..samples {
        let eps = eps_grid[s % eps_grid.len()];
        let terms = 1 + rng.gen_range(0..3);
        let mu = dirichlet(&mut rng, terms);
        let mut x = vec![[0.0; 2]; big_n];
        for &m in &mu {
            let blk = rng.gen_range(0..big_n);
            let wp = w[blk].sample(&mut rng);
            // b uniform in the unit ball of Y_N, pushed to the sphere half the time
            let mut b: Vec<f64> = (0..2 * big_n).map(|_| crate::vector::standard_normal(&mut rng)).collect();
            let bn = b.iter().map(|v| v * v).sum::<f64>().sqrt();
            let radius = if rng.gen::<bool>() { 1.0 } else { rng.gen::<f64>().powf(1.0 / (2 * big_n) as f64) };
            for v in &mut b {
                *v *= radius / bn;
            }
            x[blk][0] += m * wp[0];
            x[blk][1] += m * wp[1];
            for k in 0..big_n {
                x[k][0] += m * eps * b[2 * k];
                x[k][1] += m * eps * b[2 * k + 1];
            }
        }
        let g: f64 = (0..big_n).map(|k| w[k].enlarged_gauge(x[k], root_n * eps)).sum();
        out.record(s, 0.5 * g, 1.0 + SLACK, || format!("eps={eps} x={}", fmt_point(&x)));
    }
    Ok(out)
}

/// `conv(∪W_n) ∩ conv(∪Z_n) ⊂ 2 conv(∪(W_n ∩ Z_n))`, sampled by rejection.
pub fn lemma_block_intersection(big_n: usize, samples: usize, seed: u64, identical: bool) -> Result<CheckOutcome> {
    if big_n == 0 || samples == 0 {
        return Err(Error::validation("samples", "need blocks and samples"));
    }
    let mut out = CheckOutcome::new("hull-lemma-intersection");
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x3);
    let w = random_blocks(&mut rng, big_n);
    let z = if identical { w.clone() } else { random_blocks(&mut rng, big_n) };
    let mut drawn = 0;
    let mut attempts = 0;
    while drawn < samples && attempts < 200 * samples {
        attempts += 1;
        let lambda = dirichlet(&mut rng, big_n + 1);
        let x: Vec<P2> = (0..big_n)
            .map(|k| {
                let p = w[k].sample(&mut rng);
                [lambda[k] * p[0], lambda[k] * p[1]]
            })
            .collect();
        let gz: f64 = (0..big_n).map(|k| z[k].gauge(x[k])).sum();
        if gz > 1.0 {
            continue;
        }
        let g: f64 = (0..big_n).map(|k| w[k].gauge(x[k]).max(z[k].gauge(x[k]))).sum();
        out.record(drawn, 0.5 * g, 1.0 + SLACK, || format!("x={}", fmt_point(&x)));
        drawn += 1;
    }
    if drawn == 0 {
        out.fail("left-hand set never sampled; skipped");
    } else if drawn < samples {
        out.notes.push(format!("only {drawn} of {samples} samples accepted"));
    }
    Ok(out)
}

/// The three inclusions with `N` blocks, cap blocks `n_grid` and `samples` draws each.
pub fn lemma_hull_inclusion_suite(big_n: usize, n_grid: &[usize], samples: usize, seed: u64) -> Result<[CheckOutcome; 3]> {
    if big_n > 16 {
        return Err(Error::validation("N", format!("at most 16 blocks, got {big_n}")));
    }
    let nf = big_n as f64;
    let eps = [1.0 / (nf * nf * nf + nf).sqrt(), 0.05, 0.5];
    Ok([
        lemma_cone_caps(n_grid, samples, seed)?,
        lemma_ball_spread(big_n, &eps, samples, seed)?,
        lemma_block_intersection(big_n.min(4), samples, seed, false)?,
    ])
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cap_point_is_tight() {
        let out = lemma_cone_caps(&[2], 200, 1).unwrap();
        assert!(out.passed);
        assert!((out.rows[0].observed - 2.0).abs() < 1e-15);
    }

    #[test]
    fn zero_enlargement_holds() {
        assert!(lemma_ball_spread(4, &[0.0], 500, 5).unwrap().passed);
    }

    #[test]
    fn identical_families() {
        let out = lemma_block_intersection(3, 500, 9, true).unwrap();
        assert!(out.passed && out.trials == 500);
        assert!(out.rows.iter().all(|r| r.observed <= 0.5 + 1e-12));
    }

    #[test]
    fn suite_is_deterministic() {
        let a = lemma_hull_inclusion_suite(6, &[1, 2, 5], 300, 42).unwrap();
        let b = lemma_hull_inclusion_suite(6, &[1, 2, 5], 300, 42).unwrap();
        assert_eq!(a, b);
        assert!(a.iter().all(|o| o.passed), "{:?}", a.iter().map(|o| o.summary()).collect::<Vec<_>>());
    }
}
