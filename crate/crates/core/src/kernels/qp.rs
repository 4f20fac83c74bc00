//! Nearest points in Motzkin sets `conv(P) + cone(R)`.

use nalgebra::DMatrix;

use super::active_set::GroupedLsq;
use super::linalg::spectral_norm_sq_upper;
use super::simplex::project_simplex_slice;
use crate::error::{Error, Result};
use crate::vector::DenseVector;

const POWER_ITERATIONS: usize = 50;
const WARM_START_STEPS: usize = 200;

#[derive(Debug, Clone)]
pub struct MotzkinProjection {
    pub lambda: Vec<f64>,
    pub mu: Vec<f64>,
    pub point: DenseVector,
    pub iterations: usize,
    pub kkt_residual: f64,
}

fn check_inputs(points: &[DenseVector], rays: &[DenseVector], dim: usize, tol: f64) -> Result<()> {
    if points.is_empty() {
        return Err(Error::Input("Motzkin set needs at least one point".into()));
    }
    if !(tol > 0.0) {
        return Err(Error::validation("tol", "must be positive"));
    }
    for p in points {
        p.check_dim(dim, "motzkin point")?;
    }
    for r in rays {
        r.check_dim(dim, "motzkin ray")?;
    }
    Ok(())
}

/// Projected gradient on `(λ, μ)` with step `1/L`, halving on ascent.
fn projected_gradient(cols: &[&[f64]], np: usize, target: &[f64], steps: usize) -> Vec<f64> {
    let dim = target.len();
    let n = cols.len();
    let m = DMatrix::from_fn(dim, n, |i, j| cols[j][i]);
    let l = spectral_norm_sq_upper(&m, POWER_ITERATIONS).max(1e-300);
    let mut c = vec![0.0; n];
    c[0] = 1.0;
    let eval = |c: &[f64]| -> (Vec<f64>, f64) {
        let mut r: Vec<f64> = target.iter().map(|t| -t).collect();
        for (j, col) in cols.iter().enumerate() {
            for i in 0..dim {
                r[i] += c[j] * col[i];
            }
        }
        let f = r.iter().map(|v| v * v).sum();
        (r, f)
    };
    let (mut r, mut f) = eval(&c);
    let mut step = 1.0 / l;
    for _ in 0..steps {
        let g: Vec<f64> = cols
            .iter()
            .map(|col| col.iter().zip(&r).map(|(a, b)| a * b).sum())
            .collect();
        let mut trial: Vec<f64> = c.iter().zip(&g).map(|(ci, gi)| ci - step * gi).collect();
        let lam = project_simplex_slice(&trial[..np]);
        trial[..np].copy_from_slice(&lam);
        for t in &mut trial[np..] {
            *t = t.max(0.0);
        }
        let (r2, f2) = eval(&trial);
        if f2 > f * (1.0 + 1e-12) {
            step *= 0.5;
            continue;
        }
        let moved = c.iter().zip(&trial).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
        c = trial;
        r = r2;
        f = f2;
        if moved == 0.0 {
            break;
        }
    }
    c
}

/// Euclidean projection of `target` onto `conv(points) + cone(rays)`.
pub fn qp_point_to_motzkin(
    points: &[DenseVector],
    rays: &[DenseVector],
    target: &DenseVector,
    tol: f64,
    max_iter: usize,
) -> Result<MotzkinProjection> {
    let dim = target.dim();
    check_inputs(points, rays, dim, tol)?;
    let np = points.len();
    let cols: Vec<&[f64]> = points.iter().chain(rays).map(|v| v.as_slice()).collect();
    let warm = projected_gradient(&cols, np, target.as_slice(), WARM_START_STEPS.min(max_iter));
    let mut group = vec![Some(0); np];
    group.extend(std::iter::repeat(None).take(rays.len()));
    let problem = GroupedLsq { dim, columns: cols, target: target.as_slice(), group, num_groups: 1 };
    let sol = problem.solve(Some(warm), tol, max_iter)?;
    Ok(MotzkinProjection {
        lambda: sol.coeffs[..np].to_vec(),
        mu: sol.coeffs[np..].to_vec(),
        point: DenseVector::from_vec(sol.point),
        iterations: sol.iterations,
        kkt_residual: sol.kkt_residual,
    })
}

/// A nearest pair between two Motzkin sets.
#[derive(Debug, Clone)]
pub struct MotzkinPair {
    pub a: DenseVector,
    pub b: DenseVector,
    pub iterations: usize,
    pub kkt_residual: f64,
}

/// Minimizes `‖a − b‖` over `a ∈ conv(P1)+cone(R1)`, `b ∈ conv(P2)+cone(R2)`.
pub fn qp_motzkin_pair(
    p1: &[DenseVector],
    r1: &[DenseVector],
    p2: &[DenseVector],
    r2: &[DenseVector],
    tol: f64,
    max_iter: usize,
) -> Result<MotzkinPair> {
    let dim = p1.first().map(|p| p.dim()).unwrap_or(0);
    check_inputs(p1, r1, dim, tol)?;
    check_inputs(p2, r2, dim, tol)?;
    let neg: Vec<Vec<f64>> = p2.iter().chain(r2).map(|v| v.iter().map(|x| -x).collect()).collect();
    let mut cols: Vec<&[f64]> = p1.iter().chain(r1).map(|v| v.as_slice()).collect();
    cols.extend(neg.iter().map(|v| v.as_slice()));
    let mut group = vec![Some(0); p1.len()];
    group.extend(std::iter::repeat(None).take(r1.len()));
    group.extend(std::iter::repeat(Some(1)).take(p2.len()));
    group.extend(std::iter::repeat(None).take(r2.len()));
    let zero = vec![0.0; dim];
    // Start from the closest pair of generating points.
    let mut start = vec![0.0; cols.len()];
    let mut best = (0, 0, f64::INFINITY);
    for (i, a) in p1.iter().enumerate() {
        for (j, b) in p2.iter().enumerate() {
            let d = a.dist(b);
            if d < best.2 {
                best = (i, j, d);
            }
        }
    }
    start[best.0] = 1.0;
    start[p1.len() + r1.len() + best.1] = 1.0;
    let problem = GroupedLsq { dim, columns: cols, target: &zero, group, num_groups: 2 };
    let sol = problem.solve(Some(start), tol, max_iter)?;
    let split = p1.len() + r1.len();
    let mut a = vec![0.0; dim];
    let mut b = vec![0.0; dim];
    for (j, v) in p1.iter().chain(r1).enumerate() {
        for i in 0..dim {
            a[i] += sol.coeffs[j] * v[i];
        }
    }
    for (j, v) in p2.iter().chain(r2).enumerate() {
        for i in 0..dim {
            b[i] += sol.coeffs[split + j] * v[i];
        }
    }
    Ok(MotzkinPair {
        a: DenseVector::from_vec(a),
        b: DenseVector::from_vec(b),
        iterations: sol.iterations,
        kkt_residual: sol.kkt_residual,
    })
}
