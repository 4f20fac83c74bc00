//! Conversions to the Motzkin form `conv(P) + cone(R)`.

use nalgebra::{DMatrix, DVector};

use super::{HalfspaceRow, SetDescription};
use crate::vector::DenseVector;

/// Upper limit on enumerated row subsets during vertex enumeration.
const MAX_COMBINATIONS: usize = 50_000;
const MAX_BOX_DIM: usize = 10;
const VERTEX_TOL: f64 = 1e-9;

/// Points and rays generating a set.
#[derive(Debug, Clone, PartialEq)]
pub struct Generators {
    pub points: Vec<DenseVector>,
    pub rays: Vec<DenseVector>,
}

fn binomial(n: usize, k: usize) -> usize {
    if k > n {
        return 0;
    }
    let mut r: usize = 1;
    for i in 0..k {
        r = r.saturating_mul(n - i) / (i + 1);
    }
    r
}

fn for_each_subset(n: usize, k: usize, f: &mut impl FnMut(&[usize])) {
    if k > n {
        return;
    }
    let mut idx: Vec<usize> = (0..k).collect();
    loop {
        f(&idx);
        let mut i = k;
        while i > 0 && idx[i - 1] == n - k + i - 1 {
            i -= 1;
        }
        if i == 0 {
            return;
        }
        idx[i - 1] += 1;
        for j in i..k {
            idx[j] = idx[j - 1] + 1;
        }
    }
}

fn push_unique(list: &mut Vec<DenseVector>, v: DenseVector, tol: f64) {
    if !list.iter().any(|w| w.dist(&v) <= tol * (1.0 + v.norm())) {
        list.push(v);
    }
}

/// Orthonormal basis of the complement of the unit vector `n`.
fn complement_basis(n: &DenseVector) -> Vec<DenseVector> {
    let d = n.dim();
    let mut basis: Vec<DenseVector> = Vec::new();
    for i in 0..d {
        let mut e = DenseVector::basis(d, i);
        e = e.axpy(-e.dot(n), n);
        for b in &basis {
            e = e.axpy(-e.dot(b), b);
        }
        let nn = e.norm();
        if nn > 1e-8 {
            basis.push(e.scale(1.0 / nn));
        }
        if basis.len() + 1 == d {
            break;
        }
    }
    basis
}

/// Vertices and extreme rays of a pointed polyhedron `{x : A x ≤ b}` by
/// brute-force enumeration of tight row subsets. Returns `None` when the
/// enumeration is too large or the polyhedron has no vertex.
pub fn enumerate_polyhedron(rows: &[HalfspaceRow]) -> Option<Generators> {
    let m = rows.len();
    let d = rows.first()?.normal.dim();
    if binomial(m, d).saturating_add(binomial(m, d.saturating_sub(1))) > MAX_COMBINATIONS {
        return None;
    }
    let feasible = |x: &DenseVector| rows.iter().all(|r| r.violation(x) <= VERTEX_TOL * (1.0 + r.offset.abs()));
    let mut points = Vec::new();
    for_each_subset(m, d, &mut |s| {
        let a = DMatrix::from_fn(d, d, |i, j| rows[s[i]].normal[j]);
        let b = DVector::from_fn(d, |i, _| rows[s[i]].offset);
        if let Some(x) = a.lu().solve(&b) {
            let x = DenseVector::from_vec(x.iter().copied().collect());
            if x.iter().all(|v| v.is_finite()) && feasible(&x) {
                push_unique(&mut points, x, 1e-9);
            }
        }
    });
    if points.is_empty() {
        return None;
    }
    let mut rays = Vec::new();
    let mut consider = |r: DenseVector| {
        if rows.iter().all(|row| row.normal.dot(&r) <= 1e-10) {
            push_unique(&mut rays, r, 1e-9);
        }
    };
    if d == 1 {
        consider(DenseVector::from_slice(&[1.0]));
        consider(DenseVector::from_slice(&[-1.0]));
    } else {
        for_each_subset(m, d - 1, &mut |s| {
            // pad to a square matrix so the SVD returns a full right basis
            let a = DMatrix::from_fn(d, d, |i, j| if i + 1 < d { rows[s[i]].normal[j] } else { 0.0 });
            let svd = a.svd(false, true);
            let vt = svd.v_t.expect("requested");
            let sv = &svd.singular_values;
            let smax = sv.iter().fold(0.0f64, |x, y| x.max(*y));
            let (kmin, &smin) = sv.iter().enumerate().min_by(|a, b| a.1.partial_cmp(b.1).unwrap()).unwrap();
            let rank_ok = sv.iter().enumerate().all(|(k, s)| k == kmin || *s > 1e-10 * smax.max(1.0));
            if rank_ok && smin <= 1e-12 * smax.max(1.0) {
                let r = DenseVector::from_vec(vt.row(kmin).iter().copied().collect());
                consider(r.clone());
                consider(-&r);
            }
        });
    }
    Some(Generators { points, rays })
}

impl SetDescription {
    /// Motzkin generators, when they are cheap to obtain.
    pub fn generators(&self) -> Option<Generators> {
        match self {
            SetDescription::Motzkin { points, rays } => Some(Generators { points: points.clone(), rays: rays.clone() }),
            SetDescription::Halfspace { normal, offset } | SetDescription::Hyperplane { normal, offset } => {
                let mut rays = Vec::new();
                for b in complement_basis(normal) {
                    rays.push(-&b);
                    rays.push(b);
                }
                if matches!(self, SetDescription::Halfspace { .. }) {
                    rays.push(-normal);
                }
                Some(Generators { points: vec![normal.scale(*offset)], rays })
            }
            SetDescription::Ball { center, radius } if *radius == 0.0 => {
                Some(Generators { points: vec![center.clone()], rays: vec![] })
            }
            SetDescription::Box { lower, upper } => {
                let d = lower.len();
                let both: Vec<usize> = (0..d).filter(|&i| lower[i].is_finite() && upper[i].is_finite() && lower[i] < upper[i]).collect();
                if both.len() > MAX_BOX_DIM {
                    return None;
                }
                let base: Vec<f64> = (0..d)
                    .map(|i| if lower[i].is_finite() { lower[i] } else if upper[i].is_finite() { upper[i] } else { 0.0 })
                    .collect();
                let mut points = Vec::with_capacity(1 << both.len());
                for mask in 0..(1usize << both.len()) {
                    let mut p = base.clone();
                    for (k, &i) in both.iter().enumerate() {
                        if mask >> k & 1 == 1 {
                            p[i] = upper[i];
                        }
                    }
                    points.push(DenseVector::from_vec(p));
                }
                let mut rays = Vec::new();
                for i in 0..d {
                    if upper[i] == f64::INFINITY {
                        rays.push(DenseVector::basis(d, i));
                    }
                    if lower[i] == f64::NEG_INFINITY {
                        rays.push(-&DenseVector::basis(d, i));
                    }
                }
                Some(Generators { points, rays })
            }
            SetDescription::HPolyhedron { rows } => enumerate_polyhedron(rows),
            SetDescription::Translate { inner, shift } => inner.generators().map(|g| Generators {
                points: g.points.iter().map(|p| p + shift).collect(),
                rays: g.rays,
            }),
            SetDescription::Intersection { .. } => {
                let lf = self.linear_form()?;
                if !lf.vsets.is_empty() {
                    return None;
                }
                let mut rows: Vec<HalfspaceRow> = Vec::new();
                for (a, b) in &lf.ineq {
                    rows.push(HalfspaceRow::new(DenseVector::from_slice(a), *b));
                }
                for (a, b) in &lf.eq {
                    rows.push(HalfspaceRow::new(DenseVector::from_slice(a), *b));
                    rows.push(HalfspaceRow::new(-&DenseVector::from_slice(a), -b));
                }
                enumerate_polyhedron(&rows)
            }
            _ => None,
        }
    }
}

/// Convex hull of planar points, counter-clockwise, collinear points dropped.
pub fn planar_hull(points: &[DenseVector]) -> Vec<DenseVector> {
    let mut pts: Vec<(f64, f64)> = points.iter().map(|p| (p[0], p[1])).collect();
    pts.sort_by(|a, b| a.partial_cmp(b).unwrap());
    pts.dedup();
    if pts.len() < 3 {
        return pts.into_iter().map(|(x, y)| DenseVector::from_slice(&[x, y])).collect();
    }
    let cross = |o: (f64, f64), a: (f64, f64), b: (f64, f64)| (a.0 - o.0) * (b.1 - o.1) - (a.1 - o.1) * (b.0 - o.0);
    let mut lower: Vec<(f64, f64)> = Vec::new();
    for &p in &pts {
        while lower.len() >= 2 && cross(lower[lower.len() - 2], lower[lower.len() - 1], p) <= 0.0 {
            lower.pop();
        }
        lower.push(p);
    }
    let mut upper: Vec<(f64, f64)> = Vec::new();
    for &p in pts.iter().rev() {
        while upper.len() >= 2 && cross(upper[upper.len() - 2], upper[upper.len() - 1], p) <= 0.0 {
            upper.pop();
        }
        upper.push(p);
    }
    lower.pop();
    upper.pop();
    lower.extend(upper);
    lower.into_iter().map(|(x, y)| DenseVector::from_slice(&[x, y])).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn v(x: &[f64]) -> DenseVector {
        DenseVector::from_slice(x)
    }

    #[test]
    fn square_vertices() {
        let rows = vec![
            HalfspaceRow::new(v(&[1.0, 0.0]), 1.0),
            HalfspaceRow::new(v(&[-1.0, 0.0]), 1.0),
            HalfspaceRow::new(v(&[0.0, 1.0]), 1.0),
            HalfspaceRow::new(v(&[0.0, -1.0]), 1.0),
            HalfspaceRow::new(v(&[1.0, 1.0]), 5.0),
        ];
        let g = enumerate_polyhedron(&rows).unwrap();
        assert_eq!(g.points.len(), 4);
        assert!(g.rays.is_empty());
    }

    #[test]
    fn quadrant_has_two_rays() {
        let rows = vec![HalfspaceRow::new(v(&[-1.0, 0.0]), 0.0), HalfspaceRow::new(v(&[0.0, -1.0]), 0.0)];
        let g = enumerate_polyhedron(&rows).unwrap();
        assert_eq!(g.points, vec![v(&[0.0, 0.0])]);
        assert_eq!(g.rays.len(), 2);
    }

    #[test]
    fn halfspace_generators_cover_set() {
        let h = SetDescription::halfspace(v(&[1.0, 1.0, 0.0]), 1.0).unwrap();
        let g = h.generators().unwrap();
        assert_eq!(g.rays.len(), 5);
        let m = SetDescription::motzkin(g.points, g.rays).unwrap();
        for x in [v(&[0.0, 0.0, 3.0]), v(&[5.0, -7.0, 1.0]), v(&[2.0, 2.0, 0.0])] {
            assert_eq!(h.contains(&x, 1e-9).unwrap(), m.contains(&x, 1e-7).unwrap());
        }
    }

    #[test]
    fn box_generators() {
        let b = SetDescription::cuboid(vec![0.0, 0.0, f64::NEG_INFINITY], vec![1.0, f64::INFINITY, 2.0]).unwrap();
        let g = b.generators().unwrap();
        assert_eq!(g.points.len(), 2);
        assert_eq!(g.rays.len(), 2);
    }

    #[test]
    fn hull_of_square_with_interior() {
        let pts = [v(&[0.0, 0.0]), v(&[1.0, 0.0]), v(&[1.0, 1.0]), v(&[0.0, 1.0]), v(&[0.5, 0.5]), v(&[0.5, 0.0])];
        let h = planar_hull(&pts);
        assert_eq!(h.len(), 4);
    }
}
