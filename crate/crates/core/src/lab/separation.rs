//! Separation margin `sup_f inf f(B) − sup f(A)` and the certificate that
//! only the zero functional attains a zero gap.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::kernels::{solve_lp, LinearProgram, LpStatus, RowSense};
use crate::kernels::lp::FEAS_TOL;
use crate::sets::{LinearMax, SetDescription};
use crate::solver::{min_distance_pair, SolveConfig};
use crate::vector::{random_unit, DenseVector};

const ZERO_TOL: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq)]
pub struct Separation {
    /// Euclidean margin `inf f(B) − sup f(A)` over unit `f`.
    pub margin: f64,
    /// A maximizing functional; at margin zero, any nonzero one found.
    pub functional: Option<DenseVector>,
    /// At margin zero: whether the functional must vanish. `None` when the
    /// sets are not generator-representable and no LP certificate exists.
    pub only_zero: Option<bool>,
}

impl Separation {
    /// Not separated: zero margin and only the zero functional attains it.
    pub fn not_separated(&self) -> bool {
        self.margin <= ZERO_TOL && self.only_zero == Some(true)
    }
}

/// LP over `(f, s, m)`: `⟨f,p⟩ ≤ s` on points of `A`, `⟨f,r⟩ ≤ 0` on its rays,
/// `⟨f,q⟩ ≥ s + m` on points of `B`, `⟨f,r′⟩ ≥ 0` on its rays, `‖f‖_∞ ≤ 1`.
fn margin_program(
    (pa, ra): (&[DenseVector], &[DenseVector]),
    (pb, rb): (&[DenseVector], &[DenseVector]),
    d: usize,
    objective: Vec<f64>,
    fix_margin: bool,
) -> LinearProgram {
    let n = d + 2;
    let mut lp = LinearProgram::maximize(objective);
    for j in 0..d {
        lp.set_bounds(j, -1.0, 1.0);
    }
    lp.set_free(d);
    if fix_margin {
        lp.set_bounds(d + 1, 0.0, 0.0);
    } else {
        lp.set_free(d + 1);
    }
    let coeffs = |v: &DenseVector, s: f64, m: f64| {
        let mut row = vec![0.0; n];
        row[..d].copy_from_slice(v.as_slice());
        row[d] = s;
        row[d + 1] = m;
        row
    };
    for p in pa {
        lp.add_row(coeffs(p, -1.0, 0.0), RowSense::Le, 0.0);
    }
    for r in ra {
        lp.add_row(coeffs(r, 0.0, 0.0), RowSense::Le, 0.0);
    }
    for q in pb {
        lp.add_row(coeffs(q, -1.0, -1.0), RowSense::Ge, 0.0);
    }
    for r in rb {
        lp.add_row(coeffs(r, 0.0, 0.0), RowSense::Ge, 0.0);
    }
    lp
}

fn lp_optimum(lp: &LinearProgram) -> Result<(f64, DenseVector)> {
    let out = solve_lp(lp, FEAS_TOL)?;
    if out.status != LpStatus::Optimal {
        return Err(Error::numerical("separation LP", format!("status {:?}", out.status), f64::NAN, None));
    }
    Ok((out.optimal_value, out.primal_solution.expect("optimal has a solution")))
}

/// Separation margin of two closed convex sets.
///
/// Generator-representable sets go through the LP; the margin itself is then
/// the minimal distance when positive. Other sets fall back to the distance
/// solver and carry no zero-functional certificate.
pub fn separation_margin(a: &SetDescription, b: &SetDescription, cfg: &SolveConfig) -> Result<Separation> {
    let d = a.dim();
    if b.dim() != d {
        return Err(Error::dim(d, b.dim(), "separation_margin"));
    }
    let (Some(ga), Some(gb)) = (a.generators(), b.generators()) else {
        let r = min_distance_pair(a, b, cfg)?;
        let f = (&r.b - &r.a).normalized();
        return Ok(Separation { margin: r.distance, functional: f, only_zero: None });
    };
    let sa = (&ga.points[..], &ga.rays[..]);
    let sb = (&gb.points[..], &gb.rays[..]);
    let mut obj = vec![0.0; d + 2];
    obj[d + 1] = 1.0;
    let (m, _) = lp_optimum(&margin_program(sa, sb, d, obj, false))?;
    if m > ZERO_TOL {
        let r = min_distance_pair(a, b, cfg)?;
        let f = (&r.b - &r.a).normalized();
        return Ok(Separation { margin: r.distance, functional: f, only_zero: Some(false) });
    }
    // at zero margin, maximize ±f_i; every optimum zero means f = 0 is forced
    for i in 0..d {
        for sign in [1.0, -1.0] {
            let mut obj = vec![0.0; d + 2];
            obj[i] = sign;
            let (val, x) = lp_optimum(&margin_program(sa, sb, d, obj, true))?;
            if val > ZERO_TOL {
                let f = DenseVector::from_slice(&x.as_slice()[..d]);
                return Ok(Separation { margin: 0.0, functional: f.normalized(), only_zero: Some(false) });
            }
        }
    }
    Ok(Separation { margin: 0.0, functional: None, only_zero: Some(true) })
}

/// Largest LP support of `A ∩ B` over `samples` seeded unit directions.
pub fn directional_bound(a: &SetDescription, b: &SetDescription, samples: usize, seed: u64) -> Result<f64> {
    let both = SetDescription::intersection(vec![a.clone(), b.clone()])?;
    let lf = both.linear_form().ok_or_else(|| Error::Unsupported("directional bound needs polyhedral sets".into()))?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut worst = f64::NEG_INFINITY;
    for _ in 0..samples {
        let u = random_unit(&mut rng, a.dim());
        match lf.maximize(&u)? {
            LinearMax::Optimal { value, .. } => worst = worst.max(value),
            LinearMax::Unbounded => return Ok(f64::INFINITY),
            LinearMax::Infeasible => return Err(Error::Precondition("the sets do not intersect".into())),
        }
    }
    Ok(worst)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lab::{example_two_cones, ShiftSign};

    fn v(x: &[f64]) -> DenseVector {
        DenseVector::from_slice(x)
    }

    #[test]
    fn disjoint_balls() {
        let a = SetDescription::ball(v(&[0.0, 0.0]), 1.0).unwrap();
        let b = SetDescription::ball(v(&[4.0, 0.0]), 1.0).unwrap();
        let s = separation_margin(&a, &b, &SolveConfig::default()).unwrap();
        assert!((s.margin - 2.0).abs() < 1e-9);
        assert!(s.functional.unwrap().dist(&v(&[1.0, 0.0])) < 1e-9);
    }

    #[test]
    fn touching_boxes_are_separable_without_gap() {
        let a = SetDescription::cuboid(vec![0.0, 0.0], vec![1.0, 1.0]).unwrap();
        let b = SetDescription::cuboid(vec![1.0, 0.0], vec![2.0, 1.0]).unwrap();
        let s = separation_margin(&a, &b, &SolveConfig::default()).unwrap();
        assert_eq!(s.margin, 0.0);
        assert_eq!(s.only_zero, Some(false));
        assert!(s.functional.as_ref().unwrap().dist(&v(&[1.0, 0.0])) < 1e-9);
        assert!(!s.not_separated());
    }

    #[test]
    fn overlapping_polytopes_are_not_separated() {
        let a = SetDescription::cuboid(vec![0.0, 0.0], vec![2.0, 2.0]).unwrap();
        let b = SetDescription::cuboid(vec![1.0, 1.0], vec![3.0, 3.0]).unwrap();
        assert!(separation_margin(&a, &b, &SolveConfig::default()).unwrap().not_separated());
    }

    #[test]
    fn block_cones_are_not_separated() {
        let f = example_two_cones(3, 4, ShiftSign::Opposite).unwrap();
        let (a, b) = (f.limit_a.convex().unwrap(), f.limit_b.convex().unwrap());
        assert!(separation_margin(a, b, &SolveConfig::default()).unwrap().not_separated());
        assert!(directional_bound(a, b, 20, 1).unwrap() <= 8.0);
    }
}
