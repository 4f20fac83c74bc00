//! Small dense least-squares helpers backed by nalgebra's SVD.

use nalgebra::{DMatrix, DVector};

/// Minimum-norm solution of `min ||m y - r||`.
pub(crate) fn lstsq(m: &DMatrix<f64>, r: &DVector<f64>) -> DVector<f64> {
    if m.ncols() == 0 {
        return DVector::zeros(0);
    }
    let svd = m.clone().svd(true, true);
    let smax = svd.singular_values.iter().fold(0.0f64, |a, &b| a.max(b));
    let eps = (smax * 1e-13).max(1e-300);
    svd.solve(r, eps).unwrap_or_else(|_| DVector::zeros(m.ncols()))
}

/// Columns given as slices, stacked into a `dim x cols.len()` matrix.

/// Upper estimate of the squared spectral norm of `m` by power iteration on
/// `m^T m`, inflated slightly so `1/L` is a safe gradient step.
pub(crate) fn spectral_norm_sq_upper(m: &DMatrix<f64>, iterations: usize) -> f64 {
    let n = m.ncols();
    if n == 0 {
        return 0.0;
    }
    let mut v = DVector::from_fn(n, |i, _| 1.0 + (i as f64) * 1e-3);
    let mut lambda = 0.0;
    for _ in 0..iterations {
        let w = m.transpose() * (m * &v);
        let norm = w.norm();
        if norm == 0.0 {
            return 0.0;
        }
        lambda = norm / v.norm();
        v = w / norm;
    }
    // Frobenius norm bounds the spectral norm from above; never exceed it.
    let fro = m.norm_squared();
    (lambda * 1.01).min(fro).max(lambda)
}
