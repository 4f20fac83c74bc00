//! Generators for the counterexample and stability families.

use std::collections::BTreeMap;

use super::{Expected, FamilyInstance, FamilySet};
use crate::error::{Error, Result};
use crate::sets::{HalfspaceRow, PiecewiseSet, SetDescription};
use crate::vector::DenseVector;

/// Tangent cuts used to outer-approximate the curve `x2 = 2/x1²`.
pub const TANGENT_CUTS: usize = 64;

/// Height at which the unbounded limit pieces are cut off.
fn limit_height(n: usize) -> f64 {
    8.0 * (n.max(32) as f64).powi(2) + 1.0
}

fn v(x: &[f64]) -> DenseVector {
    DenseVector::from_slice(x)
}

fn row(a: f64, b: f64, c: f64) -> HalfspaceRow {
    HalfspaceRow::new(v(&[a, b]), c)
}

fn mirror_rows(rows: &[HalfspaceRow]) -> Vec<HalfspaceRow> {
    rows.iter().map(|r| row(-r.normal[0], r.normal[1], r.offset)).collect()
}

/// Triangle `(−1, 0), (−1, 2), (−1/n, 1)` written with the slope `n/(n−1)`.
fn trapezoid_rows(n: f64) -> Vec<HalfspaceRow> {
    let s = n / (n - 1.0);
    vec![row(-1.0, 0.0, 1.0), row(1.0, 0.0, -1.0 / n), row(s, -1.0, -s), row(s, 1.0, 2.0 - s)]
}

/// `{−1 ≤ x1 ≤ t_right, x2 ≤ height}` cut by tangents to `x2 = 2/x1²` at
/// `cuts` points spaced geometrically in `|t|` from 1 down to `|t_right|`.
/// The last tangent touches exactly at `t_right`.
fn epigraph_rows(t_right: f64, height: f64, cuts: usize) -> Vec<HalfspaceRow> {
    let mut rows = vec![row(-1.0, 0.0, 1.0), row(1.0, 0.0, t_right), row(0.0, 1.0, height)];
    let ratio = -t_right;
    for k in 0..cuts {
        let t = if k + 1 == cuts { t_right } else { -ratio.powf(k as f64 / (cuts - 1) as f64) };
        let f = 2.0 / (t * t);
        let df = -4.0 / (t * t * t);
        rows.push(row(df, -1.0, df * t - f));
    }
    rows
}

fn poly(rows: Vec<HalfspaceRow>) -> Result<SetDescription> {
    SetDescription::hpolyhedron(rows)
}

fn check_n(n: usize, lo: usize, hi: usize, what: &str) -> Result<()> {
    if n < lo || n > hi {
        return Err(Error::validation(what, format!("must lie in [{lo}, {hi}], got {n}")));
    }
    Ok(())
}

/// Nonconvex pair of unions: a triangle and a capped epigraph on each side.
/// The minimal pair is the two cap corners `(∓1/(2n), 8n²)`.
pub fn example_nonconvex(n: usize) -> Result<FamilyInstance> {
    check_n(n, 2, usize::MAX, "n")?;
    let nf = n as f64;
    let t_cap = -1.0 / (2.0 * nf);
    let cap = 8.0 * nf * nf;
    let tri = trapezoid_rows(nf);
    let epi = epigraph_rows(t_cap, cap, TANGENT_CUTS);
    let a_n = PiecewiseSet::new(vec![poly(tri.clone())?, poly(epi.clone())?])?;
    let b_n = PiecewiseSet::new(vec![poly(mirror_rows(&tri))?, poly(mirror_rows(&epi))?])?;

    let h = limit_height(n);
    let limit_tri = vec![row(-1.0, 0.0, 1.0), row(1.0, -1.0, -1.0), row(1.0, 1.0, 1.0)];
    let limit_epi = epigraph_rows(-(2.0 / h).sqrt(), h, TANGENT_CUTS);
    let limit_a = PiecewiseSet::new(vec![poly(limit_tri.clone())?, poly(limit_epi.clone())?])?;
    let limit_b = PiecewiseSet::new(vec![poly(mirror_rows(&limit_tri))?, poly(mirror_rows(&limit_epi))?])?;

    let mut metadata = BTreeMap::new();
    metadata.insert("tangent_cuts".into(), TANGENT_CUTS.to_string());
    metadata.insert("limit_truncation_height".into(), format!("{h}"));
    metadata.insert("limit_comparison".into(), "approximate: limits are box-truncated".into());
    metadata.insert("limit_intersection".into(), "(0,1)".into());
    Ok(FamilyInstance {
        name: "nonconvex".into(),
        n,
        truncation: 2,
        a_n: FamilySet::Pieces(a_n),
        b_n: FamilySet::Pieces(b_n),
        limit_a: FamilySet::Pieces(limit_a),
        limit_b: FamilySet::Pieces(limit_b),
        expected: Expected {
            distance: Some(1.0 / nf),
            pair: Some((v(&[t_cap, cap]), v(&[-t_cap, cap]))),
            bounds: BTreeMap::new(),
        },
        metadata,
    })
}

/// Convex hulls of the pieces of [`example_nonconvex`]; the limits are the
/// unbounded hulls `C = {−1 ≤ x1 ≤ 0, x2 ≥ x1 + 1}` and its mirror.
pub fn example_hulls(n: usize) -> Result<FamilyInstance> {
    let base = example_nonconvex(n)?;
    let hull_of = |s: &FamilySet| -> Result<SetDescription> {
        let mut pts = Vec::new();
        for p in s.pieces().pieces {
            let g = p.generators().ok_or_else(|| Error::Unsupported("piece without vertex enumeration".into()))?;
            pts.extend(g.points);
        }
        SetDescription::motzkin(crate::sets::vrep::planar_hull(&pts), vec![])
    };
    let c_n = hull_of(&base.a_n)?;
    let d_n = hull_of(&base.b_n)?;
    let c = poly(vec![row(-1.0, 0.0, 1.0), row(1.0, 0.0, 0.0), row(1.0, -1.0, -1.0)])?;
    let d = poly(vec![row(1.0, 0.0, 1.0), row(-1.0, 0.0, 0.0), row(-1.0, -1.0, -1.0)])?;
    let mut metadata = BTreeMap::new();
    metadata.insert("note/pair".into(), "same pair as the nonconvex family".into());
    metadata.insert("limit_intersection".into(), "{x1 = 0, x2 >= 1}".into());
    metadata.insert("recession_ray".into(), "(0,1)".into());
    Ok(FamilyInstance {
        name: "hulls".into(),
        n,
        truncation: 2,
        a_n: FamilySet::Convex(c_n),
        b_n: FamilySet::Convex(d_n),
        limit_a: FamilySet::Convex(c),
        limit_b: FamilySet::Convex(d),
        expected: base.expected,
        metadata,
    })
}

/// Cone `A = cone{e_k + e_1/k}` against the hyperplane `x1 = 0` in `R^K`,
/// with `A_n = conv{ln n e_n + e_1/n, e_1/n} + rays of A`.
pub fn example_cone_hyperplane(n: usize, k: usize) -> Result<FamilyInstance> {
    check_n(k, 2, 128, "K")?;
    check_n(n, 2, k, "n")?;
    let nf = n as f64;
    let e = |i: usize| DenseVector::basis(k, i);
    let rays: Vec<DenseVector> = (0..k).map(|i| e(i).axpy(1.0 / (i + 1) as f64, &e(0))).collect();
    let a = SetDescription::motzkin(vec![DenseVector::zeros(k)], rays.clone())?;
    let b = SetDescription::hyperplane(e(0), 0.0)?;
    let tip = e(n - 1).scale(nf.ln()).axpy(1.0 / nf, &e(0));
    let a_n = SetDescription::motzkin(vec![tip.clone(), e(0).scale(1.0 / nf)], rays)?;
    let foot = e(n - 1).scale(nf.ln());
    let mut bounds = BTreeMap::new();
    bounds.insert("hausdorff_a_n_a".into(), nf.ln() / nf + 1.0 / nf);
    bounds.insert("norm_a_n".into(), (nf.ln().powi(2) + 1.0 / (nf * nf)).sqrt());
    let mut metadata = BTreeMap::new();
    metadata.insert("note/pair".into(), "the minimal set is the segment [e1/n, a_n]".into());
    metadata.insert("certificate".into(), "e1".into());
    metadata.insert("limit_intersection".into(), "{0}".into());
    Ok(FamilyInstance {
        name: "cone-hyperplane".into(),
        n,
        truncation: k,
        a_n: FamilySet::Convex(a_n),
        b_n: FamilySet::Convex(b.clone()),
        limit_a: FamilySet::Convex(a),
        limit_b: FamilySet::Convex(b),
        expected: Expected { distance: Some(1.0 / nf), pair: Some((tip, foot)), bounds },
        metadata,
    })
}

/// Reading of the block-`n` shift applied to the second family.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum ShiftSign {
    /// `D'_n = D_n + e_{2n−1}/ln n`, mirroring the shift of `C'_n`.
    #[default]
    Opposite,
    /// `D'_n = D_n − e_{2n−1}/ln n`, the same shift as `C'_n`.
    Literal,
}

impl ShiftSign {
    pub fn as_str(&self) -> &'static str {
        match self {
            ShiftSign::Opposite => "opposite",
            ShiftSign::Literal => "literal",
        }
    }
}

impl std::str::FromStr for ShiftSign {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "opposite" => Ok(ShiftSign::Opposite),
            "literal" => Ok(ShiftSign::Literal),
            other => Err(Error::Input(format!("unknown shift sign `{other}`"))),
        }
    }
}

/// Block cones in `R^{2N}`: `C_k = cone{e_{2k−1}, e_{2k} + e_{2k−1}/k} − e_{2k−1}/k`
/// and its mirror `D_k`, with block `n` shifted by `1/ln n`.
pub fn example_two_cones(n: usize, big_n: usize, sign: ShiftSign) -> Result<FamilyInstance> {
    check_n(big_n, 3, 32, "N")?;
    check_n(n, 3, big_n, "n")?;
    let d = 2 * big_n;
    let e = |i: usize| DenseVector::basis(d, i);
    let shift = 1.0 / (n as f64).ln();
    let mut c_pts = Vec::new();
    let mut d_pts = Vec::new();
    let mut c_rays = Vec::new();
    let mut d_rays = Vec::new();
    for k in 1..=big_n {
        let (x, y) = (2 * k - 2, 2 * k - 1);
        let kf = k as f64;
        c_pts.push(e(x).scale(-1.0 / kf));
        d_pts.push(e(x).scale(1.0 / kf));
        c_rays.push(e(x));
        c_rays.push(e(y).axpy(1.0 / kf, &e(x)));
        d_rays.push(-&e(x));
        d_rays.push(e(y).axpy(-1.0 / kf, &e(x)));
    }
    let a = SetDescription::motzkin(c_pts.clone(), c_rays.clone())?;
    let b = SetDescription::motzkin(d_pts.clone(), d_rays.clone())?;
    let x = 2 * n - 2;
    c_pts[n - 1] = c_pts[n - 1].axpy(-shift, &e(x));
    let d_sign = match sign {
        ShiftSign::Opposite => 1.0,
        ShiftSign::Literal => -1.0,
    };
    d_pts[n - 1] = d_pts[n - 1].axpy(d_sign * shift, &e(x));
    let a_n = SetDescription::motzkin(c_pts, c_rays)?;
    let b_n = SetDescription::motzkin(d_pts, d_rays)?;
    let mut bounds = BTreeMap::new();
    bounds.insert("separation_margin".into(), 0.0);
    bounds.insert("directional_bound".into(), 8.0);
    bounds.insert("hausdorff_a_n_a".into(), shift);
    let nf = n as f64;
    // block-n common points satisfy −λa + y/n ≤ x ≤ μb − y/n with a = 1/n + 1/ln n
    // and independent weights λ, μ ∈ [0, 1]; a negative b is best dropped (μ = 0)
    let b_off = 1.0 / nf + d_sign * shift;
    bounds.insert("block_height".into(), nf * (1.0 / nf + shift + b_off.max(0.0)) / 2.0);
    let mut metadata = BTreeMap::new();
    metadata.insert("shift_sign".into(), sign.as_str().into());
    metadata.insert("note/block_height".into(), "block-n weights of A and B may differ".into());
    metadata.insert("claimed_common_point".into(), format!("{n}*e_{}", 2 * n));
    let claimed = e(2 * n - 1).scale(nf);
    let member = a_n.contains(&claimed, 1e-9)? && b_n.contains(&claimed, 1e-9)?;
    metadata.insert("claimed_common_point_member".into(), member.to_string());
    Ok(FamilyInstance {
        name: "two-cones".into(),
        n,
        truncation: d,
        a_n: FamilySet::Convex(a_n),
        b_n: FamilySet::Convex(b_n),
        limit_a: FamilySet::Convex(a),
        limit_b: FamilySet::Convex(b),
        expected: Expected { distance: Some(0.0), pair: None, bounds },
        metadata,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::minimal_set_bounded;
    use crate::lab::two_cone_heights;
    use crate::solver::{distance_lower_bound, min_distance_pair, piecewise_min_distance, SolveConfig};

    #[test]
    fn tangent_cuts_are_valid() {
        for n in [2usize, 7, 32] {
            let t_cap = -1.0 / (2.0 * n as f64);
            let rows = epigraph_rows(t_cap, 8.0 * (n * n) as f64, TANGENT_CUTS);
            for i in 0..1000 {
                let t = -1.0 + (1.0 + t_cap) * i as f64 / 999.0;
                let p = v(&[t, 2.0 / (t * t)]);
                for r in &rows[3..] {
                    assert!(r.violation(&p) <= 1e-9 * (1.0 + p[1]), "n {n} t {t}");
                }
            }
        }
    }

    #[test]
    fn nonconvex_small_case() {
        let f = example_nonconvex(2).unwrap();
        let (a, b) = f.expected.pair.clone().unwrap();
        assert_eq!(a, v(&[-0.25, 32.0]));
        assert_eq!(b, v(&[0.25, 32.0]));
        assert!(f.limit_a.contains(&v(&[0.0, 1.0]), 1e-12).unwrap());
        assert!(f.limit_b.contains(&v(&[0.0, 1.0]), 1e-12).unwrap());
        let r = piecewise_min_distance(&f.a_n.pieces(), &f.b_n.pieces(), &SolveConfig::default()).unwrap();
        assert!((r.report.distance - 0.5).abs() < 1e-6);
        assert_eq!(r.pieces, (1, 1));
        assert!(r.report.a.dist(&a) < 1e-4);
    }

    #[test]
    fn hull_limits_share_the_vertical_ray() {
        let f = example_hulls(3).unwrap();
        let (c, d) = (f.limit_a.convex().unwrap(), f.limit_b.convex().unwrap());
        assert!(!minimal_set_bounded(c, d).unwrap());
        for y in [1.0, 5.0, 1e4] {
            assert!(c.contains(&v(&[0.0, y]), 1e-12).unwrap() && d.contains(&v(&[0.0, y]), 1e-12).unwrap());
        }
        assert!(!c.contains(&v(&[0.0, 0.9]), 1e-12).unwrap());
        let r = min_distance_pair(f.a_n.convex().unwrap(), f.b_n.convex().unwrap(), &SolveConfig::default()).unwrap();
        assert!(r.a.dist(&v(&[-1.0 / 6.0, 72.0])) < 1e-4, "{:?}", r.a);
    }

    #[test]
    fn cone_hyperplane_certificate() {
        let f = example_cone_hyperplane(4, 8).unwrap();
        let (a_n, b) = (f.a_n.convex().unwrap(), f.b_n.convex().unwrap());
        let tip = f.expected.pair.as_ref().unwrap().0.clone();
        assert!(a_n.contains(&tip, 1e-12).unwrap());
        let lb = distance_lower_bound(b, a_n, &DenseVector::basis(8, 0)).unwrap();
        assert!(lb.certified && (lb.value - 0.25).abs() < 1e-12);
        let r = min_distance_pair(a_n, b, &SolveConfig::default()).unwrap();
        assert!((r.distance - 0.25).abs() < 1e-9);
        assert!((f.expected.bounds["norm_a_n"] - tip.norm()).abs() < 1e-12);
    }

    #[test]
    fn out_of_range_indices() {
        assert!(example_nonconvex(1).is_err());
        assert!(example_cone_hyperplane(9, 8).is_err());
        assert!(example_cone_hyperplane(2, 129).is_err());
        assert!(example_two_cones(2, 8, ShiftSign::Opposite).is_err());
        assert!(example_two_cones(4, 33, ShiftSign::Opposite).is_err());
    }

    #[test]
    fn two_cone_block_heights() {
        let f = example_two_cones(4, 4, ShiftSign::Opposite).unwrap();
        assert!((f.expected.bounds["block_height"] - (1.0 + 4.0 / 4f64.ln())).abs() < 1e-12);
        let g = example_two_cones(4, 4, ShiftSign::Literal).unwrap();
        assert!((g.expected.bounds["block_height"] - 0.5 * (1.0 + 4.0 / 4f64.ln())).abs() < 1e-12);
        assert_eq!(f.metadata["claimed_common_point_member"], "false");
        assert_eq!(g.metadata["claimed_common_point_member"], "false");
        let lp = two_cone_heights(4, ShiftSign::Literal).unwrap();
        assert!((lp[1].1 - g.expected.bounds["block_height"]).abs() < 1e-9, "{lp:?}");
    }

    #[test]
    fn json_round_trip_is_exact() {
        for f in [
            example_nonconvex(5).unwrap(),
            example_hulls(4).unwrap(),
            example_cone_hyperplane(3, 6).unwrap(),
            example_two_cones(5, 6, ShiftSign::Literal).unwrap(),
        ] {
            let text = serde_json::to_string(&f.to_json()).unwrap();
            let back = FamilyInstance::from_json(&serde_json::from_str(&text).unwrap()).unwrap();
            assert_eq!(back, f, "{}", f.name);
        }
    }
}
