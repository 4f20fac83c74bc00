use super::invariants::{check_set, variant_zoo};
use super::*;

fn v(x: &[f64]) -> DenseVector {
    DenseVector::from_slice(x)
}

fn close(a: &DenseVector, b: &[f64], tol: f64) -> bool {
    a.iter().zip(b).all(|(x, y)| (x - y).abs() <= tol)
}

#[test]
fn halfspace_reflection() {
    let h = SetDescription::halfspace(v(&[1.0, 0.0]), 0.0).unwrap();
    let r = project(&h, &v(&[2.0, 3.0]), &ProjectionConfig::default()).unwrap();
    assert!(close(&r.point, &[0.0, 3.0], 1e-15));
    assert_eq!(r.distance, 2.0);
    assert!(r.residual <= 1e-12);
}

#[test]
fn ball_radial() {
    let b = SetDescription::ball(v(&[0.0, 0.0]), 1.0).unwrap();
    let r = project(&b, &v(&[3.0, 4.0]), &ProjectionConfig::default()).unwrap();
    assert!(close(&r.point, &[0.6, 0.8], 1e-15));
    assert!((r.distance - 4.0).abs() < 1e-15);
}

#[test]
fn motzkin_matches_nnls_oracle() {
    let m = SetDescription::motzkin(vec![v(&[0.0, 0.0])], vec![v(&[1.0, 0.0]), v(&[1.0, 1.0])]).unwrap();
    let x = v(&[-1.0, 2.0]);
    let r = project(&m, &x, &ProjectionConfig::default()).unwrap();
    let cone = crate::kernels::nnls(&[v(&[1.0, 0.0]), v(&[1.0, 1.0])], &x, 1e-12).unwrap();
    assert!(close(&r.point, &[0.5, 0.5], 1e-10));
    assert!(r.point.dist(&cone.point) < 1e-10);
    assert!((r.distance - 4.5f64.sqrt()).abs() < 1e-10);
}

#[test]
fn dykstra_orthant_corner() {
    let sets = [
        SetDescription::halfspace(v(&[1.0, 0.0]), 0.0).unwrap(),
        SetDescription::halfspace(v(&[0.0, 1.0]), 0.0).unwrap(),
    ];
    let r = dykstra(&sets, &v(&[1.0, 1.0]), &ProjectionConfig::default()).unwrap();
    assert!(close(&r.point, &[0.0, 0.0], 1e-10));
}

#[test]
fn dykstra_ball_cap() {
    let sets = [
        SetDescription::ball(v(&[0.0, 0.0]), 1.0).unwrap(),
        SetDescription::halfspace(v(&[1.0, 0.0]), 0.5).unwrap(),
    ];
    let x = v(&[2.0, 0.0]);
    let r = dykstra(&sets, &x, &ProjectionConfig::default()).unwrap();
    // oracle: minimize |x - p| over the constrained region, parametrized by
    // the segment x1 = 0.5 and the arc x1 <= 0.5 of the ball boundary
    let mut best = f64::INFINITY;
    for k in 0..=200_000 {
        let t = -1.0 + 2.0 * k as f64 / 200_000.0;
        let h = (1.0 - 0.25f64).sqrt();
        let seg = v(&[0.5, t * h]);
        best = best.min(seg.dist(&x));
        let th = std::f64::consts::PI * (1.0 / 3.0 + (1.0 - 1.0 / 3.0) * (t + 1.0) / 2.0);
        best = best.min(v(&[th.cos(), th.sin()]).dist(&x));
    }
    assert!(close(&r.point, &[0.5, 0.0], 1e-9));
    assert!((r.distance - best).abs() < 1e-9);
}

#[test]
fn dykstra_single_member_is_project() {
    let b = SetDescription::ball(v(&[1.0, 1.0]), 0.5).unwrap();
    let x = v(&[-2.0, 3.0]);
    let cfg = ProjectionConfig::default();
    assert_eq!(dykstra(std::slice::from_ref(&b), &x, &cfg).unwrap(), project(&b, &x, &cfg).unwrap());
}

#[test]
fn dykstra_reports_empty_intersection() {
    let sets = [
        SetDescription::ball(v(&[0.0, 0.0]), 1.0).unwrap(),
        SetDescription::ball(v(&[3.0, 0.0]), 1.0).unwrap(),
    ];
    let cfg = ProjectionConfig { tol: 1e-10, max_iter: 500 };
    assert!(matches!(dykstra(&sets, &v(&[0.0, 5.0]), &cfg), Err(crate::error::Error::Numerical { .. })));
}

#[test]
fn polyhedron_projection_is_exact() {
    let rows = vec![
        HalfspaceRow::new(v(&[1.0, 0.0]), 1.0),
        HalfspaceRow::new(v(&[0.0, 1.0]), 1.0),
        HalfspaceRow::new(v(&[-1.0, -1.0]), 0.0),
    ];
    let p = SetDescription::hpolyhedron(rows).unwrap();
    let r = project(&p, &v(&[3.0, 2.0]), &ProjectionConfig::default()).unwrap();
    assert!(close(&r.point, &[1.0, 1.0], 1e-12));
    let r = project(&p, &v(&[-3.0, 0.0]), &ProjectionConfig::default()).unwrap();
    assert!(close(&r.point, &[-1.5, 1.5], 1e-12) || close(&r.point, &[-1.0, 1.0], 1e-12));
    assert!(r.residual <= 1e-10);
}

#[test]
fn ballsum_and_translate() {
    let bx = SetDescription::cuboid(vec![0.0, 0.0], vec![1.0, 1.0]).unwrap();
    let s = bx.minkowski_ball(0.5).unwrap();
    let cfg = ProjectionConfig::default();
    let r = project(&s, &v(&[3.0, 0.5]), &cfg).unwrap();
    assert!(close(&r.point, &[1.5, 0.5], 1e-15));
    assert_eq!(project(&s, &v(&[1.2, 1.2]), &cfg).unwrap().distance, 0.0);
    let t = bx.translate(&v(&[5.0, 0.0])).unwrap();
    assert!(t.contains(&v(&[5.5, 0.5]), 0.0).unwrap());
}

#[test]
fn translate_contains_matches_shifted() {
    let m = SetDescription::motzkin(vec![v(&[0.0, 0.0]), v(&[1.0, 2.0])], vec![v(&[1.0, 0.0])]).unwrap();
    let s = v(&[0.25, -3.0]);
    let t = SetDescription::Translate { inner: Box::new(m.clone()), shift: s.clone() };
    for x in [v(&[0.5, 1.0]), v(&[-0.1, 0.0]), v(&[10.0, 1.9]), v(&[0.0, 2.1])] {
        assert_eq!(t.contains(&(&x + &s), 1e-9).unwrap(), m.contains(&x, 1e-9).unwrap());
    }
}

#[test]
fn motzkin_ball_enlargement_membership() {
    // C_2: apex (-1/2, 0) with rays (1,0), (1/2,1), enlarged by 1/sqrt(5)
    let c2 = SetDescription::motzkin(vec![v(&[-0.5, 0.0])], vec![v(&[1.0, 0.0]), v(&[0.5, 1.0])]).unwrap();
    let r = 1.0 / 5f64.sqrt();
    let e = c2.minkowski_ball(r).unwrap();
    for i in 0..40 {
        let x = v(&[-2.0 + 0.1 * i as f64, 1.5 - 0.07 * i as f64]);
        let d = distance(&c2, &x).unwrap();
        assert_eq!(e.contains(&x, 0.0).unwrap(), d <= r, "{x:?}");
    }
}

#[test]
fn every_variant_passes_invariants() {
    let cfg = ProjectionConfig::default();
    for (i, (name, set)) in variant_zoo().iter().enumerate() {
        let rep = check_set(name, set, 42 + i as u64, &cfg).unwrap();
        assert_eq!(rep.total_violations(), 0, "{rep:?}");
    }
}
