use serde_json::{json, Value};

use super::format_real;
use crate::error::Result;
use crate::projection::{project, ProjectionConfig};
use crate::sets::{real_to_json, vector_to_json, SetDescription};
use crate::vector::DenseVector;

/// One cell `d(x, S)`; failed projections keep their message instead of a value.
#[derive(Debug, Clone, PartialEq)]
pub struct ResidualRow {
    pub n: usize,
    pub point: usize,
    pub residual: Option<f64>,
    pub nearest: Option<DenseVector>,
    pub error: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct ResidualTable {
    pub rows: Vec<ResidualRow>,
}

impl ResidualTable {
    fn push(&mut self, n: usize, point: usize, set: &SetDescription, x: &DenseVector, cfg: &ProjectionConfig) {
        let row = match project(set, x, cfg) {
            Ok(r) => ResidualRow { n, point, residual: Some(r.distance), nearest: Some(r.point), error: None },
            Err(e) => ResidualRow { n, point, residual: None, nearest: None, error: Some(e.to_string()) },
        };
        self.rows.push(row);
    }

    /// Residuals of one tracked point in index order.
    pub fn series(&self, point: usize) -> Vec<(usize, Option<f64>)> {
        self.rows.iter().filter(|r| r.point == point).map(|r| (r.n, r.residual)).collect()
    }

    pub fn failures(&self) -> usize {
        self.rows.iter().filter(|r| r.error.is_some()).count()
    }

    /// Lower-KP evidence: for every tracked point the residuals are
    /// nonincreasing (up to `tol`) and the last one is at most `tol`.
    pub fn decreasing_to(&self, tol: f64) -> bool {
        let mut ids: Vec<usize> = self.rows.iter().map(|r| r.point).collect();
        ids.dedup();
        ids.iter().all(|&p| {
            let s = self.series(p);
            let vals: Option<Vec<f64>> = s.iter().map(|(_, r)| *r).collect();
            match vals {
                Some(v) if !v.is_empty() => v.windows(2).all(|w| w[1] <= w[0] + tol) && *v.last().unwrap() <= tol,
                _ => false,
            }
        })
    }

    pub fn max_residual(&self) -> f64 {
        self.rows.iter().filter_map(|r| r.residual).fold(0.0, f64::max)
    }

    pub fn to_csv(&self) -> String {
        let dim = self.rows.iter().filter_map(|r| r.nearest.as_ref()).map(|p| p.dim()).max().unwrap_or(0);
        let mut out = String::from("n,point,residual");
        for i in 0..dim {
            out.push_str(&format!(",nearest_{i}"));
        }
        out.push_str(",error\n");
        for r in &self.rows {
            out.push_str(&format!("{},{},{}", r.n, r.point, r.residual.map(format_real).unwrap_or_default()));
            for i in 0..dim {
                out.push(',');
                if let Some(p) = &r.nearest {
                    out.push_str(&format_real(p[i]));
                }
            }
            out.push(',');
            if let Some(e) = &r.error {
                out.push('"');
                out.push_str(&e.replace('"', "\"\""));
                out.push('"');
            }
            out.push('\n');
        }
        out
    }

    pub fn to_json(&self) -> Value {
        Value::Array(
            self.rows
                .iter()
                .map(|r| {
                    json!({
                        "n": r.n,
                        "point": r.point,
                        "residual": r.residual.map(real_to_json),
                        "nearest": r.nearest.as_ref().map(vector_to_json),
                        "error": r.error,
                    })
                })
                .collect(),
        )
    }
}

/// Residuals `d(x, A_n)` for each tracked limit point `x` and index `n`.
/// Sequence construction errors are recorded like projection failures.
pub fn kp_lower_witness<F>(
    limit_points: &[DenseVector],
    sequence: F,
    indices: &[usize],
    cfg: &ProjectionConfig,
) -> ResidualTable
where
    F: Fn(usize) -> Result<SetDescription>,
{
    let mut table = ResidualTable::default();
    for &n in indices {
        let set = sequence(n);
        for (i, x) in limit_points.iter().enumerate() {
            match &set {
                Ok(s) => table.push(n, i, s, x, cfg),
                Err(e) => table.rows.push(ResidualRow { n, point: i, residual: None, nearest: None, error: Some(e.to_string()) }),
            }
        }
    }
    table
}

/// Residuals `d(x_n, A)` of a selection `x_n` against the limit set.
pub fn kp_upper_check(points: &[(usize, DenseVector)], limit: &SetDescription, cfg: &ProjectionConfig) -> ResidualTable {
    let mut table = ResidualTable::default();
    for (n, x) in points {
        table.push(*n, 0, limit, x, cfg);
    }
    table
}
