//! Dense Euclidean vectors.

use std::fmt;
use std::ops::{Add, AddAssign, Index, IndexMut, Mul, Neg, Sub, SubAssign};

use crate::error::{Error, Result};

/// A finite point or direction in R^d.
#[derive(Clone, PartialEq, Default)]
pub struct DenseVector(Vec<f64>);

impl DenseVector {
    /// Builds a vector, rejecting empty input and non-finite entries.
    pub fn new(entries: Vec<f64>) -> Result<Self> {
        if entries.is_empty() {
            return Err(Error::Input("vector must have dimension >= 1".into()));
        }
        if let Some(i) = entries.iter().position(|v| !v.is_finite()) {
            return Err(Error::Input(format!(
                "vector entry {i} is not finite ({})",
                entries[i]
            )));
        }
        Ok(DenseVector(entries))
    }

    /// Builds a vector without validation. Callers guarantee finiteness.
    pub fn from_vec(entries: Vec<f64>) -> Self {
        debug_assert!(entries.iter().all(|v| v.is_finite()));
        DenseVector(entries)
    }

    pub fn from_slice(entries: &[f64]) -> Self {
        Self::from_vec(entries.to_vec())
    }

    pub fn zeros(dim: usize) -> Self {
        DenseVector(vec![0.0; dim])
    }

    /// The `i`-th standard basis vector (0-based).
    pub fn basis(dim: usize, i: usize) -> Self {
        let mut v = vec![0.0; dim];
        v[i] = 1.0;
        DenseVector(v)
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.0
    }

    pub fn as_mut_slice(&mut self) -> &mut [f64] {
        &mut self.0
    }

    pub fn into_vec(self) -> Vec<f64> {
        self.0
    }

    pub fn iter(&self) -> std::slice::Iter<'_, f64> {
        self.0.iter()
    }

    pub fn dot(&self, other: &DenseVector) -> f64 {
        debug_assert_eq!(self.dim(), other.dim());
        self.0.iter().zip(&other.0).map(|(a, b)| a * b).sum()
    }

    pub fn norm_sq(&self) -> f64 {
        self.dot(self)
    }

    pub fn norm(&self) -> f64 {
        self.norm_sq().sqrt()
    }

    pub fn norm_inf(&self) -> f64 {
        self.0.iter().fold(0.0, |m, v| m.max(v.abs()))
    }

    pub fn dist(&self, other: &DenseVector) -> f64 {
        self.0
            .iter()
            .zip(&other.0)
            .map(|(a, b)| (a - b) * (a - b))
            .sum::<f64>()
            .sqrt()
    }

    pub fn scale(&self, s: f64) -> DenseVector {
        DenseVector(self.0.iter().map(|v| v * s).collect())
    }

    /// `self + s * other`
    pub fn axpy(&self, s: f64, other: &DenseVector) -> DenseVector {
        DenseVector(self.0.iter().zip(&other.0).map(|(a, b)| a + s * b).collect())
    }

    pub fn normalized(&self) -> Option<DenseVector> {
        let n = self.norm();
        (n > 0.0).then(|| self.scale(1.0 / n))
    }

    /// Checks that `self` has dimension `expected`.
    pub fn check_dim(&self, expected: usize, context: &str) -> Result<()> {
        if self.dim() != expected {
            return Err(Error::dim(expected, self.dim(), context));
        }
        Ok(())
    }
}

impl fmt::Debug for DenseVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list().entries(self.0.iter()).finish()
    }
}

impl Index<usize> for DenseVector {
    type Output = f64;
    fn index(&self, i: usize) -> &f64 {
        &self.0[i]
    }
}

impl IndexMut<usize> for DenseVector {
    fn index_mut(&mut self, i: usize) -> &mut f64 {
        &mut self.0[i]
    }
}

impl From<Vec<f64>> for DenseVector {
    fn from(v: Vec<f64>) -> Self {
        DenseVector::from_vec(v)
    }
}

impl<'a> Add<&'a DenseVector> for &'a DenseVector {
    type Output = DenseVector;
    fn add(self, rhs: &DenseVector) -> DenseVector {
        self.axpy(1.0, rhs)
    }
}

impl<'a> Sub<&'a DenseVector> for &'a DenseVector {
    type Output = DenseVector;
    fn sub(self, rhs: &DenseVector) -> DenseVector {
        self.axpy(-1.0, rhs)
    }
}

impl Add for DenseVector {
    type Output = DenseVector;
    fn add(self, rhs: DenseVector) -> DenseVector {
        &self + &rhs
    }
}

impl Sub for DenseVector {
    type Output = DenseVector;
    fn sub(self, rhs: DenseVector) -> DenseVector {
        &self - &rhs
    }
}

impl AddAssign<&DenseVector> for DenseVector {
    fn add_assign(&mut self, rhs: &DenseVector) {
        for (a, b) in self.0.iter_mut().zip(&rhs.0) {
            *a += b;
        }
    }
}

impl SubAssign<&DenseVector> for DenseVector {
    fn sub_assign(&mut self, rhs: &DenseVector) {
        for (a, b) in self.0.iter_mut().zip(&rhs.0) {
            *a -= b;
        }
    }
}

impl Mul<f64> for &DenseVector {
    type Output = DenseVector;
    fn mul(self, s: f64) -> DenseVector {
        self.scale(s)
    }
}

impl Neg for &DenseVector {
    type Output = DenseVector;
    fn neg(self) -> DenseVector {
        self.scale(-1.0)
    }
}

/// Box–Muller normal deviate.
pub(crate) fn standard_normal(rng: &mut impl rand::Rng) -> f64 {
    let u1: f64 = rng.gen::<f64>().max(f64::MIN_POSITIVE);
    let u2: f64 = rng.gen();
    (-2.0 * u1.ln()).sqrt() * (2.0 * std::f64::consts::PI * u2).cos()
}

/// Uniform direction on the unit sphere of R^d.
pub(crate) fn random_unit(rng: &mut impl rand::Rng, d: usize) -> DenseVector {
    loop {
        let g = DenseVector::from_vec((0..d).map(|_| standard_normal(rng)).collect());
        if let Some(u) = g.normalized() {
            return u;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_empty_and_nan() {
        assert!(DenseVector::new(vec![]).is_err());
        assert!(DenseVector::new(vec![1.0, f64::NAN]).is_err());
        assert!(DenseVector::new(vec![1.0, f64::INFINITY]).is_err());
        assert!(DenseVector::new(vec![1.0]).is_ok());
    }

    #[test]
    fn basic_algebra() {
        let a = DenseVector::from_slice(&[3.0, 4.0]);
        let b = DenseVector::from_slice(&[1.0, 0.0]);
        assert_eq!(a.norm(), 5.0);
        assert_eq!(a.dot(&b), 3.0);
        assert_eq!((&a - &b).as_slice(), &[2.0, 4.0]);
        assert_eq!(a.axpy(2.0, &b).as_slice(), &[5.0, 4.0]);
        assert_eq!(a.dist(&b), (4.0f64 + 16.0).sqrt());
    }
}

impl serde::Serialize for DenseVector {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.0.serialize(s)
    }
}
