//! Nonnegative least squares.

use super::active_set::GroupedLsq;
use crate::error::{Error, Result};
use crate::vector::DenseVector;

/// Iteration cap shared by the active-set kernels.
pub const ACTIVE_SET_MAX_ITER: usize = 100_000;

#[derive(Debug, Clone)]
pub struct NnlsResult {
    pub coeffs: Vec<f64>,
    /// The combination `G λ`.
    pub point: DenseVector,
    /// `‖G λ − x‖`.
    pub residual: f64,
    pub kkt_residual: f64,
}

/// Solves `min ‖G λ − x‖` over `λ ≥ 0`. Columns are given as vectors.
pub fn nnls(columns: &[DenseVector], target: &DenseVector, tol: f64) -> Result<NnlsResult> {
    if columns.is_empty() {
        return Err(Error::Input("nnls needs at least one column".into()));
    }
    if !(tol > 0.0) {
        return Err(Error::validation("tol", "must be positive"));
    }
    for c in columns {
        c.check_dim(target.dim(), "nnls column")?;
    }
    let problem = GroupedLsq {
        dim: target.dim(),
        columns: columns.iter().map(|c| c.as_slice()).collect(),
        target: target.as_slice(),
        group: vec![None; columns.len()],
        num_groups: 0,
    };
    let sol = problem.solve(None, tol, ACTIVE_SET_MAX_ITER)?;
    let point = DenseVector::from_vec(sol.point);
    Ok(NnlsResult {
        residual: point.dist(target),
        coeffs: sol.coeffs,
        point,
        kkt_residual: sol.kkt_residual,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn v(x: &[f64]) -> DenseVector {
        DenseVector::from_slice(x)
    }

    #[test]
    fn target_inside_cone() {
        let r = nnls(&[v(&[1.0, 0.0]), v(&[1.0, 1.0])], &v(&[2.0, 1.0]), 1e-10).unwrap();
        assert!((r.coeffs[0] - 1.0).abs() < 1e-12);
        assert!((r.coeffs[1] - 1.0).abs() < 1e-12);
        assert!(r.residual < 1e-12);
    }

    #[test]
    fn projects_onto_edge_ray() {
        let g = [v(&[1.0, 0.0]), v(&[1.0, 1.0])];
        let x = v(&[-1.0, 2.0]);
        let r = nnls(&g, &x, 1e-10).unwrap();
        assert!((r.point[0] - 0.5).abs() < 1e-12 && (r.point[1] - 0.5).abs() < 1e-12);
        // grid oracle over the coefficient square
        let mut best = f64::INFINITY;
        for i in 0..=400 {
            for j in 0..=400 {
                let (a, b) = (i as f64 * 0.005, j as f64 * 0.005);
                let p = v(&[a + b, b]);
                best = best.min(p.dist(&x));
            }
        }
        assert!(r.residual <= best + 1e-12);
        let res = &r.point - &x;
        for c in &g {
            assert!(res.dot(c) >= -1e-10);
        }
    }

    #[test]
    fn polar_target_maps_to_origin() {
        let r = nnls(&[v(&[1.0, 0.0])], &v(&[-3.0, 4.0]), 1e-10).unwrap();
        assert_eq!(r.coeffs, vec![0.0]);
        assert_eq!(r.point.as_slice(), &[0.0, 0.0]);
    }

    #[test]
    fn rejects_empty_and_mismatched() {
        assert!(nnls(&[], &v(&[1.0]), 1e-9).is_err());
        assert!(nnls(&[v(&[1.0])], &v(&[1.0, 2.0]), 1e-9).is_err());
    }

    #[test]
    fn dependent_columns() {
        let g = [v(&[1.0, 1.0]), v(&[2.0, 2.0]), v(&[0.0, 1.0]), v(&[1.0, 2.0])];
        let r = nnls(&g, &v(&[3.0, 5.0]), 1e-10).unwrap();
        assert!(r.residual < 1e-10);
        assert!(r.coeffs.iter().all(|&c| c >= 0.0));
    }
}
