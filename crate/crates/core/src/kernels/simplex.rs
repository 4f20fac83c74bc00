//! Euclidean projection onto the probability simplex.

use crate::error::{Error, Result};
use crate::vector::DenseVector;

/// Projects `weights` onto `{w >= 0, sum w = 1}` (sort-and-threshold).
pub fn project_simplex(weights: &DenseVector) -> Result<DenseVector> {
    if weights.dim() == 0 {
        return Err(Error::Input("cannot project an empty vector".into()));
    }
    Ok(DenseVector::from_vec(project_simplex_slice(weights.as_slice())))
}

pub(crate) fn project_simplex_slice(w: &[f64]) -> Vec<f64> {
    let mut sorted = w.to_vec();
    sorted.sort_by(|a, b| b.partial_cmp(a).unwrap());
    let mut cumsum = 0.0;
    let mut theta = 0.0;
    for (k, &v) in sorted.iter().enumerate() {
        cumsum += v;
        let t = (cumsum - 1.0) / (k as f64 + 1.0);
        if v - t > 0.0 {
            theta = t;
        }
    }
    let mut out: Vec<f64> = w.iter().map(|v| (v - theta).max(0.0)).collect();
    // Clean the last ulp of drift so the sum is exactly representable near 1.
    let s: f64 = out.iter().sum();
    if s > 0.0 && (s - 1.0).abs() > 0.0 {
        let (imax, _) = out
            .iter()
            .enumerate()
            .fold((0, f64::NEG_INFINITY), |b, (i, &v)| if v > b.1 { (i, v) } else { b });
        out[imax] += 1.0 - s;
        if out[imax] < 0.0 {
            out[imax] = 0.0;
        }
    }
    out
}
