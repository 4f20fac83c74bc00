//! Dense two-phase simplex with Bland's anti-cycling rule.
//!
//! Problems in this crate are tiny (a few hundred columns at most), so the
//! tableau is kept dense and every pivot touches the whole matrix.

use crate::error::{Error, Result};
use crate::vector::DenseVector;

/// Default feasibility tolerance for constraint residuals.
pub const FEAS_TOL: f64 = 1e-9;
/// Default iteration cap (pivots summed over both phases).
pub const MAX_PIVOTS: usize = 100_000;

const PIVOT_EPS: f64 = 1e-11;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RowSense {
    Le,
    Eq,
    Ge,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Direction {
    Maximize,
    Minimize,
}

/// `opt c^T x  s.t.  rows[i] . x (sense) rhs[i],  lower <= x <= upper`.
#[derive(Debug, Clone)]
pub struct LinearProgram {
    pub direction: Direction,
    pub objective: Vec<f64>,
    pub rows: Vec<Vec<f64>>,
    pub senses: Vec<RowSense>,
    pub rhs: Vec<f64>,
    pub lower: Vec<f64>,
    pub upper: Vec<f64>,
}

impl LinearProgram {
    /// New problem over `n` variables, all nonnegative by default.
    pub fn new(direction: Direction, objective: Vec<f64>) -> Self {
        let n = objective.len();
        LinearProgram {
            direction,
            objective,
            rows: Vec::new(),
            senses: Vec::new(),
            rhs: Vec::new(),
            lower: vec![0.0; n],
            upper: vec![f64::INFINITY; n],
        }
    }

    pub fn maximize(objective: Vec<f64>) -> Self {
        Self::new(Direction::Maximize, objective)
    }

    pub fn minimize(objective: Vec<f64>) -> Self {
        Self::new(Direction::Minimize, objective)
    }

    pub fn num_vars(&self) -> usize {
        self.objective.len()
    }

    pub fn add_row(&mut self, coeffs: Vec<f64>, sense: RowSense, rhs: f64) -> &mut Self {
        self.rows.push(coeffs);
        self.senses.push(sense);
        self.rhs.push(rhs);
        self
    }

    pub fn set_bounds(&mut self, var: usize, lower: f64, upper: f64) -> &mut Self {
        self.lower[var] = lower;
        self.upper[var] = upper;
        self
    }

    pub fn set_free(&mut self, var: usize) -> &mut Self {
        self.set_bounds(var, f64::NEG_INFINITY, f64::INFINITY)
    }

    fn check(&self) -> Result<()> {
        let n = self.num_vars();
        if n == 0 {
            return Err(Error::Input("linear program has no variables".into()));
        }
        if self.senses.len() != self.rows.len() || self.rhs.len() != self.rows.len() {
            return Err(Error::dim(self.rows.len(), self.rhs.len(), "lp rhs/sense length"));
        }
        if self.lower.len() != n || self.upper.len() != n {
            return Err(Error::dim(n, self.lower.len(), "lp bound vectors"));
        }
        for (i, row) in self.rows.iter().enumerate() {
            if row.len() != n {
                return Err(Error::dim(n, row.len(), format!("lp row {i}")));
            }
            if row.iter().any(|v| !v.is_finite()) || !self.rhs[i].is_finite() {
                return Err(Error::Input(format!("lp row {i} has non-finite data")));
            }
        }
        Ok(())
    }

    /// Largest constraint or bound violation of `x`.
    pub fn max_violation(&self, x: &[f64]) -> f64 {
        let mut worst: f64 = 0.0;
        for (i, row) in self.rows.iter().enumerate() {
            let lhs: f64 = row.iter().zip(x).map(|(a, b)| a * b).sum();
            let scale = 1.0 + self.rhs[i].abs();
            let v = match self.senses[i] {
                RowSense::Le => lhs - self.rhs[i],
                RowSense::Ge => self.rhs[i] - lhs,
                RowSense::Eq => (lhs - self.rhs[i]).abs(),
            };
            worst = worst.max(v / scale);
        }
        for j in 0..x.len() {
            worst = worst.max(self.lower[j] - x[j]).max(x[j] - self.upper[j]);
        }
        worst
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LpStatus {
    Optimal,
    Infeasible,
    Unbounded,
}

#[derive(Debug, Clone)]
pub struct LpOutcome {
    pub status: LpStatus,
    /// Objective value at the optimum; `NaN` unless optimal.
    pub optimal_value: f64,
    pub primal_solution: Option<DenseVector>,
    pub pivots: usize,
}

impl LpOutcome {
    fn empty(status: LpStatus, pivots: usize) -> Self {
        LpOutcome {
            status,
            optimal_value: f64::NAN,
            primal_solution: None,
            pivots,
        }
    }

    pub fn is_optimal(&self) -> bool {
        self.status == LpStatus::Optimal
    }
}

/// How an original variable is recovered from the standard-form columns.
struct VarMap {
    offset: f64,
    terms: Vec<(usize, f64)>,
}

/// Solves `lp`, certifying the returned point against `tol`.
pub fn solve_lp(lp: &LinearProgram, tol: f64) -> Result<LpOutcome> {
    if !(tol > 0.0) {
        return Err(Error::Input("lp tolerance must be positive".into()));
    }
    lp.check()?;
    let n = lp.num_vars();
    if (0..n).any(|j| lp.lower[j] > lp.upper[j]) {
        return Ok(LpOutcome::empty(LpStatus::Infeasible, 0));
    }

    // Map every original variable onto nonnegative standard columns.
    let mut maps = Vec::with_capacity(n);
    let mut ncols = 0usize;
    let mut bound_rows: Vec<(usize, f64)> = Vec::new();
    for j in 0..n {
        let (lo, hi) = (lp.lower[j], lp.upper[j]);
        let map = if lo.is_finite() {
            let c = ncols;
            ncols += 1;
            if hi.is_finite() {
                bound_rows.push((c, hi - lo));
            }
            VarMap {
                offset: lo,
                terms: vec![(c, 1.0)],
            }
        } else if hi.is_finite() {
            let c = ncols;
            ncols += 1;
            VarMap {
                offset: hi,
                terms: vec![(c, -1.0)],
            }
        } else {
            let c = ncols;
            ncols += 2;
            VarMap {
                offset: 0.0,
                terms: vec![(c, 1.0), (c + 1, -1.0)],
            }
        };
        maps.push(map);
    }

    let sign = match lp.direction {
        Direction::Maximize => 1.0,
        Direction::Minimize => -1.0,
    };
    let mut cost = vec![0.0; ncols];
    for (j, map) in maps.iter().enumerate() {
        for &(c, k) in &map.terms {
            cost[c] += sign * lp.objective[j] * k;
        }
    }

    let mut std_rows: Vec<(Vec<f64>, RowSense, f64)> = Vec::new();
    for (i, row) in lp.rows.iter().enumerate() {
        let mut coeffs = vec![0.0; ncols];
        let mut rhs = lp.rhs[i];
        for (j, map) in maps.iter().enumerate() {
            if row[j] == 0.0 {
                continue;
            }
            rhs -= row[j] * map.offset;
            for &(c, k) in &map.terms {
                coeffs[c] += row[j] * k;
            }
        }
        std_rows.push((coeffs, lp.senses[i], rhs));
    }
    for &(c, width) in &bound_rows {
        let mut coeffs = vec![0.0; ncols];
        coeffs[c] = 1.0;
        std_rows.push((coeffs, RowSense::Le, width));
    }

    let mut tab = Tableau::build(&std_rows, ncols);
    let mut pivots = 0usize;

    // Phase 1: drive artificial variables to zero.
    if tab.num_artificial > 0 {
        let mut phase1 = vec![0.0; tab.width()];
        for a in tab.artificial_start..tab.width() {
            phase1[a] = -1.0;
        }
        tab.set_objective(&phase1);
        match tab.run(&mut pivots, MAX_PIVOTS)? {
            PhaseEnd::Optimal => {}
            PhaseEnd::Unbounded => {
                return Err(Error::numerical(
                    "solve_lp",
                    "phase one reported unbounded",
                    f64::INFINITY,
                    None,
                ))
            }
        }
        let scale = 1.0 + std_rows.iter().map(|r| r.2.abs()).fold(0.0, f64::max);
        if -tab.objective_value() > tol * scale {
            return Ok(LpOutcome::empty(LpStatus::Infeasible, pivots));
        }
        tab.evict_artificials();
    }

    let mut phase2 = cost;
    phase2.resize(tab.width(), 0.0);
    tab.set_objective(&phase2);
    match tab.run(&mut pivots, MAX_PIVOTS)? {
        PhaseEnd::Optimal => {}
        PhaseEnd::Unbounded => return Ok(LpOutcome::empty(LpStatus::Unbounded, pivots)),
    }

    let y = tab.primal(ncols);
    let x: Vec<f64> = maps
        .iter()
        .map(|m| m.offset + m.terms.iter().map(|&(c, k)| k * y[c]).sum::<f64>())
        .collect();
    let violation = lp.max_violation(&x);
    let x_vec = DenseVector::from_vec(x.clone());
    if violation > tol.max(FEAS_TOL) * 10.0 {
        return Err(Error::numerical(
            "solve_lp",
            "returned vertex violates constraints",
            violation,
            Some(x_vec),
        ));
    }
    let value: f64 = lp.objective.iter().zip(&x).map(|(c, v)| c * v).sum();
    Ok(LpOutcome {
        status: LpStatus::Optimal,
        optimal_value: value,
        primal_solution: Some(x_vec),
        pivots,
    })
}

enum PhaseEnd {
    Optimal,
    Unbounded,
}

/// Dense tableau for `max c^T y, A y = b, y >= 0` with `b >= 0`.
struct Tableau {
    m: usize,
    cols: usize,
    /// m rows of `cols + 1` entries, the last being the right-hand side.
    data: Vec<f64>,
    basis: Vec<usize>,
    /// Reduced-cost row (`cols + 1` entries, last is the objective value).
    obj: Vec<f64>,
    artificial_start: usize,
    num_artificial: usize,
    /// Columns that may never enter the basis (artificials after phase 1).
    banned: Vec<bool>,
}

impl Tableau {
    fn build(rows: &[(Vec<f64>, RowSense, f64)], ncols: usize) -> Self {
        let mut slack_count = 0;
        let mut art_count = 0;
        let mut normalized = Vec::with_capacity(rows.len());
        for (coeffs, sense, rhs) in rows {
            let (coeffs, sense, rhs) = if *rhs < 0.0 {
                let flipped = match sense {
                    RowSense::Le => RowSense::Ge,
                    RowSense::Ge => RowSense::Le,
                    RowSense::Eq => RowSense::Eq,
                };
                (coeffs.iter().map(|v| -v).collect::<Vec<_>>(), flipped, -rhs)
            } else {
                (coeffs.clone(), *sense, *rhs)
            };
            match sense {
                RowSense::Le => slack_count += 1,
                RowSense::Ge => {
                    slack_count += 1;
                    art_count += 1
                }
                RowSense::Eq => art_count += 1,
            }
            normalized.push((coeffs, sense, rhs));
        }
        let m = normalized.len();
        let artificial_start = ncols + slack_count;
        let cols = artificial_start + art_count;
        let stride = cols + 1;
        let mut data = vec![0.0; m * stride];
        let mut basis = vec![0; m];
        let mut slack = ncols;
        let mut art = artificial_start;
        for (i, (coeffs, sense, rhs)) in normalized.iter().enumerate() {
            let row = &mut data[i * stride..(i + 1) * stride];
            row[..ncols].copy_from_slice(coeffs);
            row[cols] = *rhs;
            match sense {
                RowSense::Le => {
                    row[slack] = 1.0;
                    basis[i] = slack;
                    slack += 1;
                }
                RowSense::Ge => {
                    row[slack] = -1.0;
                    slack += 1;
                    row[art] = 1.0;
                    basis[i] = art;
                    art += 1;
                }
                RowSense::Eq => {
                    row[art] = 1.0;
                    basis[i] = art;
                    art += 1;
                }
            }
        }
        Tableau {
            m,
            cols,
            data,
            basis,
            obj: vec![0.0; stride],
            artificial_start,
            num_artificial: art_count,
            banned: vec![false; cols],
        }
    }

    fn width(&self) -> usize {
        self.cols
    }

    fn stride(&self) -> usize {
        self.cols + 1
    }

    fn at(&self, i: usize, j: usize) -> f64 {
        self.data[i * self.stride() + j]
    }

    fn objective_value(&self) -> f64 {
        self.obj[self.cols]
    }

    /// Installs cost vector `c` (maximize) and prices out the basis.
    fn set_objective(&mut self, c: &[f64]) {
        let stride = self.stride();
        let mut obj = vec![0.0; stride];
        for j in 0..self.cols {
            obj[j] = -c[j];
        }
        for i in 0..self.m {
            let cb = c[self.basis[i]];
            if cb != 0.0 {
                let row = &self.data[i * stride..(i + 1) * stride];
                for j in 0..stride {
                    obj[j] += cb * row[j];
                }
            }
        }
        self.obj = obj;
    }

    fn pivot(&mut self, r: usize, c: usize) {
        let stride = self.stride();
        let p = self.data[r * stride + c];
        for j in 0..stride {
            self.data[r * stride + j] /= p;
        }
        self.data[r * stride + c] = 1.0;
        let pivot_row: Vec<f64> = self.data[r * stride..(r + 1) * stride].to_vec();
        for i in 0..self.m {
            if i == r {
                continue;
            }
            let f = self.data[i * stride + c];
            if f != 0.0 {
                let row = &mut self.data[i * stride..(i + 1) * stride];
                for j in 0..stride {
                    row[j] -= f * pivot_row[j];
                }
                row[c] = 0.0;
            }
        }
        let f = self.obj[c];
        if f != 0.0 {
            for j in 0..stride {
                self.obj[j] -= f * pivot_row[j];
            }
            self.obj[c] = 0.0;
        }
        self.basis[r] = c;
    }

    fn run(&mut self, pivots: &mut usize, cap: usize) -> Result<PhaseEnd> {
        let rhs_col = self.cols;
        loop {
            // Bland: lowest-index column with negative reduced cost.
            let entering = (0..self.cols).find(|&j| !self.banned[j] && self.obj[j] < -1e-10);
            let Some(c) = entering else {
                return Ok(PhaseEnd::Optimal);
            };
            let mut best: Option<(usize, f64)> = None;
            for i in 0..self.m {
                let a = self.at(i, c);
                if a > PIVOT_EPS {
                    let ratio = self.at(i, rhs_col).max(0.0) / a;
                    best = match best {
                        None => Some((i, ratio)),
                        Some((bi, br)) => {
                            if ratio < br - 1e-13
                                || (ratio <= br + 1e-13 && self.basis[i] < self.basis[bi])
                            {
                                Some((i, ratio))
                            } else {
                                Some((bi, br))
                            }
                        }
                    };
                }
            }
            let Some((r, _)) = best else {
                return Ok(PhaseEnd::Unbounded);
            };
            self.pivot(r, c);
            *pivots += 1;
            if *pivots > cap {
                let y = self.primal(self.cols);
                return Err(Error::numerical(
                    "solve_lp",
                    "pivot cap exceeded",
                    f64::NAN,
                    Some(DenseVector::from_vec(y)),
                ));
            }
        }
    }

    /// After phase 1: pivot zero-valued artificials out, drop redundant rows,
    /// and forbid artificial columns from re-entering.
    fn evict_artificials(&mut self) {
        let mut i = 0;
        while i < self.m {
            if self.basis[i] >= self.artificial_start {
                let c = (0..self.artificial_start).find(|&j| self.at(i, j).abs() > 1e-9);
                match c {
                    Some(c) => {
                        self.pivot(i, c);
                        i += 1;
                    }
                    None => {
                        let stride = self.stride();
                        self.data.drain(i * stride..(i + 1) * stride);
                        self.basis.remove(i);
                        self.m -= 1;
                    }
                }
            } else {
                i += 1;
            }
        }
        for j in self.artificial_start..self.cols {
            self.banned[j] = true;
        }
    }

    fn primal(&self, ncols: usize) -> Vec<f64> {
        let mut y = vec![0.0; ncols];
        for i in 0..self.m {
            if self.basis[i] < ncols {
                y[self.basis[i]] = self.at(i, self.cols).max(0.0);
            }
        }
        y
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn vertex_brute_force(rows: &[[f64; 3]], obj: [f64; 2]) -> f64 {
        // rows: a.x <= b; enumerate pairwise intersections.
        let mut best = f64::NEG_INFINITY;
        for i in 0..rows.len() {
            for j in i + 1..rows.len() {
                let (a, b) = (rows[i], rows[j]);
                let det = a[0] * b[1] - a[1] * b[0];
                if det.abs() < 1e-12 {
                    continue;
                }
                let x = (a[2] * b[1] - a[1] * b[2]) / det;
                let y = (a[0] * b[2] - a[2] * b[0]) / det;
                if rows.iter().all(|r| r[0] * x + r[1] * y <= r[2] + 1e-12) {
                    best = best.max(obj[0] * x + obj[1] * y);
                }
            }
        }
        best
    }

    #[test]
    fn simplex_vertex_optimum() {
        let mut lp = LinearProgram::maximize(vec![1.0, 1.0]);
        lp.add_row(vec![1.0, 1.0], RowSense::Eq, 1.0);
        let out = solve_lp(&lp, 1e-9).unwrap();
        assert_eq!(out.status, LpStatus::Optimal);
        assert!((out.optimal_value - 1.0).abs() < 1e-12);
    }

    #[test]
    fn contradictory_bounds_are_infeasible() {
        let mut lp = LinearProgram::maximize(vec![1.0]);
        lp.set_free(0);
        lp.add_row(vec![1.0], RowSense::Le, -1.0);
        lp.add_row(vec![1.0], RowSense::Ge, 0.0);
        assert_eq!(solve_lp(&lp, 1e-9).unwrap().status, LpStatus::Infeasible);
    }

    #[test]
    fn polygon_optimum_matches_vertex_enumeration() {
        // x2 <= x1, x1 <= 2, x >= 0 : maximize x2
        let rows = [[-1.0, 1.0, 0.0], [1.0, 0.0, 2.0], [-1.0, 0.0, 0.0], [0.0, -1.0, 0.0]];
        let expected = vertex_brute_force(&rows, [0.0, 1.0]);
        assert!((expected - 2.0).abs() < 1e-12);
        let mut lp = LinearProgram::maximize(vec![0.0, 1.0]);
        lp.add_row(vec![-1.0, 1.0], RowSense::Le, 0.0);
        lp.add_row(vec![1.0, 0.0], RowSense::Le, 2.0);
        let out = solve_lp(&lp, 1e-9).unwrap();
        assert!((out.optimal_value - expected).abs() < 1e-10);
        let x = out.primal_solution.unwrap();
        assert!((x[0] - 2.0).abs() < 1e-10 && (x[1] - 2.0).abs() < 1e-10);
    }

    #[test]
    fn unbounded_and_free_variables() {
        let mut lp = LinearProgram::maximize(vec![1.0, 0.0]);
        lp.add_row(vec![0.0, 1.0], RowSense::Le, 1.0);
        assert_eq!(solve_lp(&lp, 1e-9).unwrap().status, LpStatus::Unbounded);

        // min |shifted| with free var: min x s.t. x >= -3 (free)
        let mut lp = LinearProgram::minimize(vec![1.0]);
        lp.set_free(0);
        lp.add_row(vec![1.0], RowSense::Ge, -3.0);
        let out = solve_lp(&lp, 1e-9).unwrap();
        assert!((out.optimal_value + 3.0).abs() < 1e-12);
    }

    #[test]
    fn boxed_and_upper_only_bounds() {
        let mut lp = LinearProgram::maximize(vec![1.0, -1.0]);
        lp.set_bounds(0, -1.0, 4.0);
        lp.set_bounds(1, f64::NEG_INFINITY, 2.0);
        lp.add_row(vec![1.0, 1.0], RowSense::Ge, 0.0);
        let out = solve_lp(&lp, 1e-9).unwrap();
        // x0 = 4, x1 = -4
        assert!((out.optimal_value - 8.0).abs() < 1e-10);
    }

    #[test]
    fn degenerate_problem_terminates() {
        // Classic cycling example (Beale) terminates under Bland's rule.
        let mut lp = LinearProgram::maximize(vec![0.75, -150.0, 0.02, -6.0]);
        lp.add_row(vec![0.25, -60.0, -0.04, 9.0], RowSense::Le, 0.0);
        lp.add_row(vec![0.5, -90.0, -0.02, 3.0], RowSense::Le, 0.0);
        lp.add_row(vec![0.0, 0.0, 1.0, 0.0], RowSense::Le, 1.0);
        let out = solve_lp(&lp, 1e-9).unwrap();
        assert!((out.optimal_value - 0.05).abs() < 1e-9);
    }

    #[test]
    fn dimension_mismatch_is_input_error() {
        let mut lp = LinearProgram::maximize(vec![1.0, 1.0]);
        lp.add_row(vec![1.0], RowSense::Le, 1.0);
        assert!(matches!(solve_lp(&lp, 1e-9), Err(Error::Dimension { .. })));
    }
}
