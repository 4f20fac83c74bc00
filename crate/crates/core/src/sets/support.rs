//! Support function `h_K(u) = sup_{x∈K} ⟨u, x⟩`.

use super::linear::LinearMax;
use super::SetDescription;
use crate::error::{Error, Result};
use crate::vector::DenseVector;

/// An extended-real support value. `value` is `+∞` for unbounded directions;
/// `exact == false` marks a certified upper bound.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SupportValue {
    pub value: f64,
    pub exact: bool,
}

impl SupportValue {
    pub fn exact(value: f64) -> Self {
        SupportValue { value, exact: true }
    }

    pub fn infinite() -> Self {
        SupportValue { value: f64::INFINITY, exact: true }
    }

    pub fn is_infinite(&self) -> bool {
        self.value == f64::INFINITY
    }

    fn shift(self, by: f64) -> Self {
        SupportValue { value: self.value + by, exact: self.exact }
    }
}

/// Relative tolerance for treating a direction as parallel to a normal.
const PARALLEL_TOL: f64 = 1e-10;

/// Returns `t` with `u = t n` if `u` is parallel to the unit vector `n`.
fn parallel_factor(u: &DenseVector, n: &DenseVector) -> Option<f64> {
    let t = u.dot(n);
    let perp = u.axpy(-t, n).norm();
    (perp <= PARALLEL_TOL * u.norm()).then_some(t)
}

/// Tolerance for `⟨u, r⟩ > 0` on rays.
pub(crate) fn ray_ascends(u: &DenseVector, r: &DenseVector) -> bool {
    u.dot(r) > PARALLEL_TOL * u.norm() * r.norm()
}

impl SetDescription {
    pub fn support(&self, u: &DenseVector) -> Result<SupportValue> {
        u.check_dim(self.dim(), "support direction")?;
        if u.norm() == 0.0 {
            return Err(Error::Input("support direction must be nonzero".into()));
        }
        Ok(match self {
            SetDescription::Halfspace { normal, offset } => match parallel_factor(u, normal) {
                Some(t) if t > 0.0 => SupportValue::exact(t * offset),
                _ => SupportValue::infinite(),
            },
            SetDescription::Hyperplane { normal, offset } => match parallel_factor(u, normal) {
                Some(t) => SupportValue::exact(t * offset),
                None => SupportValue::infinite(),
            },
            SetDescription::Ball { center, radius } => SupportValue::exact(u.dot(center) + radius * u.norm()),
            SetDescription::Box { lower, upper } => {
                let mut s = 0.0;
                for i in 0..u.dim() {
                    s += if u[i] > 0.0 {
                        u[i] * upper[i]
                    } else if u[i] < 0.0 {
                        u[i] * lower[i]
                    } else {
                        0.0
                    };
                }
                SupportValue::exact(s)
            }
            SetDescription::Motzkin { points, rays } => {
                if rays.iter().any(|r| ray_ascends(u, r)) {
                    SupportValue::infinite()
                } else {
                    SupportValue::exact(points.iter().map(|p| u.dot(p)).fold(f64::NEG_INFINITY, f64::max))
                }
            }
            SetDescription::Translate { inner, shift } => inner.support(u)?.shift(u.dot(shift)),
            SetDescription::BallSum { inner, radius } => inner.support(u)?.shift(radius * u.norm()),
            SetDescription::HPolyhedron { .. } => self.lp_support(u)?,
            SetDescription::Intersection { members } => {
                if self.is_polyhedral() {
                    self.lp_support(u)?
                } else {
                    let mut best = f64::INFINITY;
                    for m in members {
                        best = best.min(m.support(u)?.value);
                    }
                    SupportValue { value: best, exact: false }
                }
            }
        })
    }

    fn lp_support(&self, u: &DenseVector) -> Result<SupportValue> {
        let lf = self.linear_form().expect("polyhedral set");
        match lf.maximize(u)? {
            LinearMax::Optimal { value, .. } => Ok(SupportValue::exact(value)),
            LinearMax::Unbounded => Ok(SupportValue::infinite()),
            LinearMax::Infeasible => Err(Error::Precondition("support of an empty set".into())),
        }
    }
}
