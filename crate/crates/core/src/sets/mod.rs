//! Closed convex sets in R^d.

pub(crate) mod json;
pub(crate) mod linear;
mod support;
pub mod vrep;

pub use json::{
    parse_piecewise_json, parse_set_json, piecewise_from_value, piecewise_to_json, real_to_json, set_from_value, set_to_json,
    set_to_json_string, vector_to_json,
};
pub use linear::{LinearForm, LinearMax};
pub use support::SupportValue;

use crate::error::{Error, Result};
use crate::vector::DenseVector;

/// A single inequality `⟨normal, x⟩ ≤ offset`.
#[derive(Debug, Clone, PartialEq)]
pub struct HalfspaceRow {
    pub normal: DenseVector,
    pub offset: f64,
}

impl HalfspaceRow {
    pub fn new(normal: DenseVector, offset: f64) -> Self {
        HalfspaceRow { normal, offset }
    }

    pub fn violation(&self, x: &DenseVector) -> f64 {
        self.normal.dot(x) - self.offset
    }
}

/// Description of a nonempty closed convex set.
#[derive(Debug, Clone, PartialEq)]
pub enum SetDescription {
    Halfspace { normal: DenseVector, offset: f64 },
    Hyperplane { normal: DenseVector, offset: f64 },
    Ball { center: DenseVector, radius: f64 },
    /// Coordinate box; bounds may be infinite.
    Box { lower: Vec<f64>, upper: Vec<f64> },
    HPolyhedron { rows: Vec<HalfspaceRow> },
    /// `conv(points) + cone(rays)`
    Motzkin { points: Vec<DenseVector>, rays: Vec<DenseVector> },
    Translate { inner: Box<SetDescription>, shift: DenseVector },
    Intersection { members: Vec<SetDescription> },
    /// `inner + radius * B`
    BallSum { inner: Box<SetDescription>, radius: f64 },
}

/// A finite union of convex pieces.
#[derive(Debug, Clone, PartialEq)]
pub struct PiecewiseSet {
    pub pieces: Vec<SetDescription>,
}

impl PiecewiseSet {
    pub fn new(pieces: Vec<SetDescription>) -> Result<Self> {
        if pieces.is_empty() {
            return Err(Error::validation("/pieces", "needs at least one piece"));
        }
        let pieces = pieces
            .into_iter()
            .enumerate()
            .map(|(i, p)| p.validate_at(&format!("/pieces/{i}")))
            .collect::<Result<Vec<_>>>()?;
        let d = pieces[0].dim();
        for (i, p) in pieces.iter().enumerate() {
            if p.dim() != d {
                return Err(Error::dim(d, p.dim(), format!("/pieces/{i}")));
            }
        }
        Ok(PiecewiseSet { pieces })
    }

    pub fn dim(&self) -> usize {
        self.pieces[0].dim()
    }

    pub fn contains(&self, x: &DenseVector, tol: f64) -> Result<bool> {
        for p in &self.pieces {
            if p.contains(x, tol)? {
                return Ok(true);
            }
        }
        Ok(false)
    }
}

fn check_finite(v: f64, field: &str) -> Result<()> {
    if v.is_finite() {
        Ok(())
    } else {
        Err(Error::validation(field, "must be finite"))
    }
}

fn unit_normal(normal: &DenseVector, offset: f64, at: &str) -> Result<(DenseVector, f64)> {
    check_finite(offset, &format!("{at}/offset"))?;
    let n = normal.norm();
    if !(n > 0.0) {
        return Err(Error::validation(format!("{at}/normal"), "normal must be nonzero"));
    }
    // already unit up to rounding: keep the bits so re-validation is idempotent
    if (n - 1.0).abs() <= 4.0 * f64::EPSILON {
        return Ok((normal.clone(), offset));
    }
    Ok((normal.scale(1.0 / n), offset / n))
}

impl SetDescription {
    pub fn halfspace(normal: DenseVector, offset: f64) -> Result<Self> {
        SetDescription::Halfspace { normal, offset }.validate()
    }

    pub fn hyperplane(normal: DenseVector, offset: f64) -> Result<Self> {
        SetDescription::Hyperplane { normal, offset }.validate()
    }

    pub fn ball(center: DenseVector, radius: f64) -> Result<Self> {
        SetDescription::Ball { center, radius }.validate()
    }

    pub fn cuboid(lower: Vec<f64>, upper: Vec<f64>) -> Result<Self> {
        SetDescription::Box { lower, upper }.validate()
    }

    pub fn hpolyhedron(rows: Vec<HalfspaceRow>) -> Result<Self> {
        SetDescription::HPolyhedron { rows }.validate()
    }

    pub fn motzkin(points: Vec<DenseVector>, rays: Vec<DenseVector>) -> Result<Self> {
        SetDescription::Motzkin { points, rays }.validate()
    }

    pub fn intersection(members: Vec<SetDescription>) -> Result<Self> {
        SetDescription::Intersection { members }.validate()
    }

    /// Ambient dimension. Meaningful for validated sets.
    pub fn dim(&self) -> usize {
        match self {
            SetDescription::Halfspace { normal, .. } | SetDescription::Hyperplane { normal, .. } => normal.dim(),
            SetDescription::Ball { center, .. } => center.dim(),
            SetDescription::Box { lower, .. } => lower.len(),
            SetDescription::HPolyhedron { rows } => rows.first().map_or(0, |r| r.normal.dim()),
            SetDescription::Motzkin { points, .. } => points.first().map_or(0, |p| p.dim()),
            SetDescription::Translate { shift, .. } => shift.dim(),
            SetDescription::Intersection { members } => members.first().map_or(0, |m| m.dim()),
            SetDescription::BallSum { inner, .. } => inner.dim(),
        }
    }

    pub fn type_tag(&self) -> &'static str {
        match self {
            SetDescription::Halfspace { .. } => "halfspace",
            SetDescription::Hyperplane { .. } => "hyperplane",
            SetDescription::Ball { .. } => "ball",
            SetDescription::Box { .. } => "box",
            SetDescription::HPolyhedron { .. } => "hpoly",
            SetDescription::Motzkin { .. } => "motzkin",
            SetDescription::Translate { .. } => "translate",
            SetDescription::Intersection { .. } => "intersection",
            SetDescription::BallSum { .. } => "ballsum",
        }
    }

    /// Checks every invariant and normalizes halfspace normals.
    /// Error fields are JSON pointers into the set's serialized form.
    pub fn validate(self) -> Result<Self> {
        self.validate_at("")
    }

    pub(crate) fn validate_at(self, at: &str) -> Result<Self> {
        let out = match self {
            SetDescription::Halfspace { normal, offset } => {
                let (normal, offset) = unit_normal(&normal, offset, at)?;
                SetDescription::Halfspace { normal, offset }
            }
            SetDescription::Hyperplane { normal, offset } => {
                let (normal, offset) = unit_normal(&normal, offset, at)?;
                SetDescription::Hyperplane { normal, offset }
            }
            SetDescription::Ball { center, radius } => {
                if !(radius >= 0.0) || !radius.is_finite() {
                    return Err(Error::validation(format!("{at}/radius"), "radius must be finite and >= 0"));
                }
                SetDescription::Ball { center, radius }
            }
            SetDescription::Box { lower, upper } => {
                if lower.is_empty() {
                    return Err(Error::validation(format!("{at}/lower"), "box needs dimension >= 1"));
                }
                if lower.len() != upper.len() {
                    return Err(Error::dim(lower.len(), upper.len(), format!("{at}/upper")));
                }
                for i in 0..lower.len() {
                    if lower[i].is_nan() || lower[i] == f64::INFINITY {
                        return Err(Error::validation(format!("{at}/lower"), format!("entry {i} is invalid")));
                    }
                    if upper[i].is_nan() || upper[i] == f64::NEG_INFINITY {
                        return Err(Error::validation(format!("{at}/upper"), format!("entry {i} is invalid")));
                    }
                    if lower[i] > upper[i] {
                        return Err(Error::validation(format!("{at}/upper"), format!("upper[{i}] < lower[{i}]")));
                    }
                }
                SetDescription::Box { lower, upper }
            }
            SetDescription::HPolyhedron { rows } => {
                if rows.is_empty() {
                    return Err(Error::validation(format!("{at}/rows"), "needs at least one row"));
                }
                let d = rows[0].normal.dim();
                let mut out = Vec::with_capacity(rows.len());
                for (i, r) in rows.iter().enumerate() {
                    let here = format!("{at}/rows/{i}");
                    if r.normal.dim() != d {
                        return Err(Error::dim(d, r.normal.dim(), format!("{here}/normal")));
                    }
                    let (normal, offset) = unit_normal(&r.normal, r.offset, &here)?;
                    out.push(HalfspaceRow { normal, offset });
                }
                let set = SetDescription::HPolyhedron { rows: out };
                if !set.linear_form().expect("polyhedral").is_feasible()? {
                    return Err(Error::validation(format!("{at}/rows"), "polyhedron is empty"));
                }
                set
            }
            SetDescription::Motzkin { points, rays } => {
                if points.is_empty() {
                    return Err(Error::validation(format!("{at}/points"), "needs at least one point"));
                }
                let d = points[0].dim();
                for (i, p) in points.iter().enumerate() {
                    if p.dim() != d {
                        return Err(Error::dim(d, p.dim(), format!("{at}/points/{i}")));
                    }
                }
                for (i, r) in rays.iter().enumerate() {
                    if r.dim() != d {
                        return Err(Error::dim(d, r.dim(), format!("{at}/rays/{i}")));
                    }
                }
                SetDescription::Motzkin { points, rays }
            }
            SetDescription::Translate { inner, shift } => {
                let inner = inner.validate_at(&format!("{at}/inner"))?;
                if inner.dim() != shift.dim() {
                    return Err(Error::dim(inner.dim(), shift.dim(), format!("{at}/shift")));
                }
                SetDescription::Translate { inner: Box::new(inner), shift }
            }
            SetDescription::Intersection { members } => {
                if members.is_empty() {
                    return Err(Error::validation(format!("{at}/members"), "needs at least one member"));
                }
                let members = members
                    .into_iter()
                    .enumerate()
                    .map(|(i, m)| m.validate_at(&format!("{at}/members/{i}")))
                    .collect::<Result<Vec<_>>>()?;
                let d = members[0].dim();
                for (i, m) in members.iter().enumerate() {
                    if m.dim() != d {
                        return Err(Error::dim(d, m.dim(), format!("{at}/members/{i}")));
                    }
                }
                let set = SetDescription::Intersection { members };
                if let Some(lf) = set.linear_form() {
                    if !lf.is_feasible()? {
                        return Err(Error::validation(format!("{at}/members"), "intersection is empty"));
                    }
                }
                set
            }
            SetDescription::BallSum { inner, radius } => {
                if !(radius >= 0.0) || !radius.is_finite() {
                    return Err(Error::validation(format!("{at}/radius"), "radius must be finite and >= 0"));
                }
                let inner = inner.validate_at(&format!("{at}/inner"))?;
                SetDescription::BallSum { inner: Box::new(inner), radius }
            }
        };
        Ok(out)
    }

    /// `self + v`, simplified for the variants that absorb a shift.
    pub fn translate(&self, v: &DenseVector) -> Result<Self> {
        v.check_dim(self.dim(), "translate shift")?;
        Ok(match self {
            SetDescription::Halfspace { normal, offset } => {
                SetDescription::Halfspace { normal: normal.clone(), offset: offset + normal.dot(v) }
            }
            SetDescription::Hyperplane { normal, offset } => {
                SetDescription::Hyperplane { normal: normal.clone(), offset: offset + normal.dot(v) }
            }
            SetDescription::Ball { center, radius } => SetDescription::Ball { center: center + v, radius: *radius },
            SetDescription::Box { lower, upper } => SetDescription::Box {
                lower: lower.iter().zip(v.iter()).map(|(l, s)| l + s).collect(),
                upper: upper.iter().zip(v.iter()).map(|(u, s)| u + s).collect(),
            },
            SetDescription::HPolyhedron { rows } => SetDescription::HPolyhedron {
                rows: rows
                    .iter()
                    .map(|r| HalfspaceRow { normal: r.normal.clone(), offset: r.offset + r.normal.dot(v) })
                    .collect(),
            },
            SetDescription::Motzkin { points, rays } => SetDescription::Motzkin {
                points: points.iter().map(|p| p + v).collect(),
                rays: rays.clone(),
            },
            SetDescription::Translate { inner, shift } => {
                SetDescription::Translate { inner: inner.clone(), shift: shift + v }
            }
            _ => SetDescription::Translate { inner: Box::new(self.clone()), shift: v.clone() },
        })
    }

    /// `self + r * B`. A zero radius returns the set unchanged.
    pub fn minkowski_ball(&self, r: f64) -> Result<Self> {
        if !(r >= 0.0) || !r.is_finite() {
            return Err(Error::validation("radius", "enlargement radius must be finite and >= 0"));
        }
        if r == 0.0 {
            return Ok(self.clone());
        }
        Ok(match self {
            SetDescription::Ball { center, radius } => SetDescription::Ball { center: center.clone(), radius: radius + r },
            SetDescription::BallSum { inner, radius } => SetDescription::BallSum { inner: inner.clone(), radius: radius + r },
            _ => SetDescription::BallSum { inner: Box::new(self.clone()), radius: r },
        })
    }

    /// True iff `dist(x, self) ≤ tol`.
    pub fn contains(&self, x: &DenseVector, tol: f64) -> Result<bool> {
        x.check_dim(self.dim(), "contains")?;
        Ok(match self {
            SetDescription::Halfspace { normal, offset } => normal.dot(x) - offset <= tol,
            SetDescription::Hyperplane { normal, offset } => (normal.dot(x) - offset).abs() <= tol,
            SetDescription::Ball { center, radius } => x.dist(center) <= radius + tol,
            SetDescription::Box { lower, upper } => {
                let mut s = 0.0;
                for i in 0..x.dim() {
                    let e = (lower[i] - x[i]).max(x[i] - upper[i]).max(0.0);
                    s += e * e;
                }
                s.sqrt() <= tol
            }
            SetDescription::Translate { inner, shift } => inner.contains(&(x - shift), tol)?,
            SetDescription::Intersection { members } => {
                for m in members {
                    if !m.contains(x, tol)? {
                        return Ok(false);
                    }
                }
                crate::projection::distance(self, x)? <= tol
            }
            _ => crate::projection::distance(self, x)? <= tol,
        })
    }

    /// True for sets whose every piece is described by finitely many
    /// linear data (rows, points, rays).
    pub fn is_polyhedral(&self) -> bool {
        self.linear_form().is_some()
    }

    /// Recursion-free primitives: everything except wrappers and intersections.
    pub fn is_primitive(&self) -> bool {
        !matches!(
            self,
            SetDescription::Translate { .. } | SetDescription::Intersection { .. } | SetDescription::BallSum { .. }
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn v(x: &[f64]) -> DenseVector {
        DenseVector::from_slice(x)
    }

    #[test]
    fn halfspace_normalized() {
        let h = SetDescription::halfspace(v(&[2.0, 0.0]), 4.0).unwrap();
        assert_eq!(h, SetDescription::Halfspace { normal: v(&[1.0, 0.0]), offset: 2.0 });
    }

    #[test]
    fn inverted_box_rejected() {
        let e = SetDescription::cuboid(vec![0.0, 0.0], vec![-1.0, 1.0]).unwrap_err();
        match e {
            Error::Validation { field, .. } => assert_eq!(field, "/upper"),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn motzkin_accepted() {
        let m = SetDescription::motzkin(vec![v(&[0.0, 0.0])], vec![v(&[1.0, 0.0]), v(&[1.0, 1.0])]).unwrap();
        assert_eq!(m.dim(), 2);
    }

    #[test]
    fn validation_errors_name_fields() {
        let e = SetDescription::halfspace(v(&[0.0, 0.0]), 1.0).unwrap_err();
        assert!(matches!(e, Error::Validation { ref field, .. } if field == "/normal"));
        let e = SetDescription::ball(v(&[0.0]), -1.0).unwrap_err();
        assert!(matches!(e, Error::Validation { ref field, .. } if field == "/radius"));
        let e = SetDescription::motzkin(vec![v(&[0.0, 0.0])], vec![v(&[1.0])]).unwrap_err();
        assert!(matches!(e, Error::Dimension { .. }));
        let e = SetDescription::intersection(vec![
            SetDescription::halfspace(v(&[1.0]), -1.0).unwrap(),
            SetDescription::halfspace(v(&[-1.0]), -1.0).unwrap(),
        ])
        .unwrap_err();
        assert!(matches!(e, Error::Validation { .. }));
    }

    #[test]
    fn primitive_membership() {
        let b = SetDescription::ball(v(&[0.0, 0.0]), 1.0).unwrap();
        assert!(b.contains(&v(&[0.6, 0.8]), 1e-9).unwrap());
        let h = SetDescription::halfspace(v(&[1.0, 0.0]), 0.0).unwrap();
        assert!(!h.contains(&v(&[1e-3, 0.0]), 1e-9).unwrap());
        assert!(b.contains(&v(&[1.0]), 1e-9).is_err());
    }

    #[test]
    fn translate_simplifies() {
        let b = SetDescription::ball(v(&[0.0, 0.0]), 1.0).unwrap();
        assert_eq!(
            b.translate(&v(&[2.0, 0.0])).unwrap(),
            SetDescription::Ball { center: v(&[2.0, 0.0]), radius: 1.0 }
        );
        let bx = SetDescription::cuboid(vec![0.0, 0.0], vec![1.0, 1.0]).unwrap();
        assert_eq!(bx.minkowski_ball(0.0).unwrap(), bx);
        assert!(bx.minkowski_ball(-1.0).is_err());
    }
}
