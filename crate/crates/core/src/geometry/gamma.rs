//! Segment–sphere exits and the uniform bound on how far apart two exits can be.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::vector::DenseVector;

/// Constant in the exit-separation bound.
pub const GAMMA: f64 = 17.0;
const MARGIN: f64 = 1e-12;

/// The unique `a′ = x + t(a − x)`, `t ∈ (0, 1)`, with `‖a′‖ = R`, for `‖x‖ < R < ‖a‖`.
pub fn sphere_segment_exit(x: &DenseVector, a: &DenseVector, r: f64) -> Result<DenseVector> {
    a.check_dim(x.dim(), "sphere_segment_exit")?;
    if !(x.norm() < r - MARGIN) {
        return Err(Error::Precondition(format!("need |x| < R, got |x| = {} and R = {r}", x.norm())));
    }
    if !(a.norm() > r + MARGIN) {
        return Err(Error::Precondition(format!("need R < |a|, got R = {r} and |a| = {}", a.norm())));
    }
    let d = a - x;
    let qa = d.norm_sq();
    let qb = x.dot(&d);
    let qc = x.norm_sq() - r * r;
    let disc = (qb * qb - qa * qc).sqrt();
    // qc < 0, so the positive root is computed without cancellation on either sign of qb
    let t = if qb >= 0.0 { -qc / (qb + disc) } else { (disc - qb) / qa };
    Ok(x.axpy(t, &d))
}

/// Exit through the sphere of radius `R` of an arbitrary norm, by bisection on `t`.
pub fn sphere_segment_exit_with_norm<N>(x: &DenseVector, a: &DenseVector, r: f64, norm: N) -> Result<DenseVector>
where
    N: Fn(&DenseVector) -> f64,
{
    a.check_dim(x.dim(), "sphere_segment_exit")?;
    if !(norm(x) < r - MARGIN) || !(norm(a) > r + MARGIN) {
        return Err(Error::Precondition("need |x| < R < |a| in the given norm".into()));
    }
    let d = a - x;
    let (mut lo, mut hi) = (0.0, 1.0);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if norm(&x.axpy(mid, &d)) < r {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(x.axpy(hi, &d))
}

/// `‖b′ − a′‖ / max{‖x‖, ‖y‖, ‖a − b‖}` for `R > 1`, `‖x‖, ‖y‖ < R`, `‖a‖, ‖b‖ > 2R`.
pub fn gamma_bound_check(x: &DenseVector, y: &DenseVector, a: &DenseVector, b: &DenseVector, r: f64) -> Result<f64> {
    if !(r > 1.0) {
        return Err(Error::Precondition(format!("need R > 1, got {r}")));
    }
    if !(a.norm() > 2.0 * r) || !(b.norm() > 2.0 * r) {
        return Err(Error::Precondition(format!(
            "need |a|, |b| > 2R = {}, got {} and {}",
            2.0 * r,
            a.norm(),
            b.norm()
        )));
    }
    let ap = sphere_segment_exit(x, a, r)?;
    let bp = sphere_segment_exit(y, b, r)?;
    let num = ap.dist(&bp);
    let den = x.norm().max(y.norm()).max(a.dist(b));
    if den == 0.0 {
        return Ok(0.0);
    }
    Ok(num / den)
}

#[derive(Debug, Clone, PartialEq)]
pub struct GammaSummary {
    pub dim: usize,
    pub trials: usize,
    pub max_ratio: f64,
    pub worst: Option<[DenseVector; 4]>,
    pub worst_radius: f64,
}

fn gaussian_direction(rng: &mut ChaCha8Rng, d: usize) -> DenseVector {
    loop {
        let g = DenseVector::from_vec(
            (0..d)
                .map(|_| {
                    let u1: f64 = rng.gen::<f64>().max(f64::MIN_POSITIVE);
                    let u2: f64 = rng.gen();
                    (-2.0 * u1.ln()).sqrt() * (2.0 * std::f64::consts::PI * u2).cos()
                })
                .collect(),
        );
        if let Some(u) = g.normalized() {
            return u;
        }
    }
}

/// Uniform in the ball of the given radius.
fn in_ball(rng: &mut ChaCha8Rng, d: usize, radius: f64) -> DenseVector {
    let s: f64 = rng.gen::<f64>().powf(1.0 / d as f64);
    gaussian_direction(rng, d).scale(radius * s)
}

/// Uniform on the shell `inner < ‖z‖ ≤ 2 inner`.
fn in_shell(rng: &mut ChaCha8Rng, d: usize, inner: f64) -> DenseVector {
    let u: f64 = rng.gen::<f64>();
    // radius^d is uniform on (inner^d, (2 inner)^d]; factor out inner^d
    let growth = 2f64.powi(d as i32) - 1.0;
    let s = (1.0 + (1.0 - u) * growth).powf(1.0 / d as f64);
    gaussian_direction(rng, d).scale(inner * s.max(1.0 + 1e-12))
}

/// Seeded corpus: `x, y` uniform in `(R/2)B`, `a` uniform on the shell
/// `(2R, 4R]`, `b = a + h` with `‖h‖` uniform in `(0, R]`; draws with
/// `‖b‖ ≤ 2R` are redrawn. `R` is uniform in `(1, 10]`.
pub fn gamma_corpus(dim: usize, trials: usize, seed: u64) -> Result<GammaSummary> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ (dim as u64).wrapping_mul(0x9e37_79b9_7f4a_7c15));
    let mut summary = GammaSummary { dim, trials, max_ratio: 0.0, worst: None, worst_radius: 0.0 };
    for _ in 0..trials {
        let r = 1.0 + 9.0 * (1.0 - rng.gen::<f64>());
        let x = in_ball(&mut rng, dim, r / 2.0);
        let y = in_ball(&mut rng, dim, r / 2.0);
        let a = in_shell(&mut rng, dim, 2.0 * r);
        let b = loop {
            let len = r * (1.0 - rng.gen::<f64>());
            let b = a.axpy(len, &gaussian_direction(&mut rng, dim));
            if b.norm() > 2.0 * r {
                break b;
            }
        };
        let ratio = gamma_bound_check(&x, &y, &a, &b, r)?;
        if ratio > summary.max_ratio {
            summary.max_ratio = ratio;
            summary.worst = Some([x, y, a, b]);
            summary.worst_radius = r;
        }
    }
    Ok(summary)
}

/// Boundary-hugging cases: `‖a‖ = 2R(1 + 1e−9)` and `x` just inside `R S_X`.
pub fn gamma_adversarial(dim: usize, trials: usize, seed: u64) -> Result<GammaSummary> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed.wrapping_add(dim as u64));
    let mut summary = GammaSummary { dim, trials, max_ratio: 0.0, worst: None, worst_radius: 0.0 };
    for k in 0..trials {
        let r = 1.0 + 1e-9 + 4.0 * rng.gen::<f64>();
        let ua = gaussian_direction(&mut rng, dim);
        let a = ua.scale(2.0 * r * (1.0 + 1e-9));
        let x = if k % 2 == 0 {
            gaussian_direction(&mut rng, dim).scale(r * (1.0 - 1e-9))
        } else {
            DenseVector::zeros(dim)
        };
        let y = gaussian_direction(&mut rng, dim).scale(r * (1.0 - 1e-9) * rng.gen::<f64>());
        let b = loop {
            let b = a.axpy(r * rng.gen::<f64>(), &gaussian_direction(&mut rng, dim));
            if b.norm() > 2.0 * r {
                break b;
            }
        };
        let ratio = gamma_bound_check(&x, &y, &a, &b, r)?;
        if ratio > summary.max_ratio {
            summary.max_ratio = ratio;
            summary.worst = Some([x, y, a, b]);
            summary.worst_radius = r;
        }
    }
    Ok(summary)
}
