//! Exact projection onto `K ∩ B(c, r)` through the ball multiplier.
//!
//! With multiplier `μ ≥ 0` on `‖z − c‖² ≤ r²` the Lagrangian minimizer is
//! `z(μ) = P_K((x + μ c)/(1 + μ))`, and `‖z(μ) − c‖` is nonincreasing in `μ`
//! (the dual is concave), so bisection on `s = μ/(1 + μ)` finds the
//! complementary multiplier.

use super::{project, ProjectionConfig, ProjectionResult};
use crate::error::{Error, Result};
use crate::sets::SetDescription;
use crate::vector::DenseVector;

const BISECTIONS: usize = 80;

pub(crate) fn project_with_ball(
    rest: &SetDescription,
    center: &DenseVector,
    radius: f64,
    x: &DenseVector,
    cfg: &ProjectionConfig,
) -> Result<ProjectionResult> {
    let slack = cfg.tol * (1.0 + radius);
    let at = |s: f64| -> Result<DenseVector> {
        let y = x.scale(1.0 - s).axpy(s, center);
        Ok(project(rest, &y, cfg)?.point)
    };
    let z0 = at(0.0)?;
    if z0.dist(center) <= radius + slack {
        return Ok(ProjectionResult { distance: x.dist(&z0), point: z0, iterations: 0, residual: 0.0 });
    }
    let zc = at(1.0)?;
    let gap = zc.dist(center) - radius;
    if gap > slack {
        return Err(Error::numerical("ball cut", "the ball misses the other members", gap, Some(zc)));
    }
    let (mut lo, mut hi) = (0.0, 1.0);
    let mut best = zc;
    let mut iterations = 0;
    for _ in 0..BISECTIONS {
        iterations += 1;
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        let z = at(mid)?;
        if z.dist(center) <= radius + slack {
            hi = mid;
            best = z;
        } else {
            lo = mid;
        }
    }
    let residual = (best.dist(center) - radius).abs().min(radius);
    Ok(ProjectionResult { distance: x.dist(&best), point: best, iterations, residual })
}
