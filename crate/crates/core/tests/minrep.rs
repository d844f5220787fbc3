mod common;

use common::*;
use elliptica::field::{build_field_data, FieldConfig};
use elliptica::minrep::*;
use elliptica::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn catenoid_grid() -> Vec<Complex64> {
    (0..10)
        .flat_map(|i| {
            (0..10).map(move |j| {
                let r = 0.3 + 0.3 * i as f64;
                Complex64::from_polar(r, -3.0 + 0.6 * j as f64)
            })
        })
        .collect()
}

#[test]
fn forms_examples() {
    let phi = forms(&Catenoid, c(1.0, 0.0));
    assert!(phi[0].norm() < 1e-15);
    assert!((phi[1] - c(0.0, 1.0)).norm() < 1e-15);
    assert!((phi[2] - c(1.0, 0.0)).norm() < 1e-15);
}

#[test]
fn catenoid_closed_form_on_grid() {
    let tol = 1e-10;
    for z in catenoid_grid() {
        let hint = [Complex64::from_polar(1.0, z.arg())];
        let x = surface_map(&Catenoid, c(1.0, 0.0), z, &hint, tol).unwrap();
        let got = Catenoid::to_closed_form_frame(x);
        let expect = Catenoid::closed_form(z);
        for k in 0..3 {
            assert!((got[k] - expect[k]).abs() < 1e-6, "{z}: {got:?} vs {expect:?}");
        }
    }
}

#[test]
fn path_bookkeeping() {
    let tol = 1e-11;
    let a = c(0.5, 0.2);
    let zero = integrate(&Catenoid, &PathSpec::polyline(&[a, a]), tol).unwrap();
    assert!(zero.value.iter().all(|v| v.norm() == 0.0));
    let path = PathSpec::polyline(&[a, c(1.0, 1.0), c(2.0, -0.5)]);
    let f = integrate(&Catenoid, &path, tol).unwrap();
    let b = integrate(&Catenoid, &path.reversed(), tol).unwrap();
    for k in 0..3 {
        assert!((f.value[k] + b.value[k]).norm() < 2.0 * tol);
    }
    let other = PathSpec::polyline(&[a, c(0.9, -0.8), c(2.0, -0.5)]);
    let g = integrate(&Catenoid, &other, tol).unwrap();
    for k in 0..3 {
        assert!((f.value[k].re - g.value[k].re).abs() <= 2.0 * tol);
    }
    let loop_ = period_vector(&Catenoid, &PathSpec::circle(c(2.0, 0.0), 0.5), tol).unwrap();
    assert!(loop_.norm() <= tol);
}

#[test]
fn catenoid_end_has_zero_period() {
    for r in [0.1, 1.0, 5.0] {
        let v = period_vector(&Catenoid, &PathSpec::circle(c(0.0, 0.0), r), 1e-11).unwrap();
        assert!(v.norm() < 1e-9, "{v:?}");
    }
    let n0 = gauss_map_of(c(0.0, 0.0));
    let ninf = gauss_map_of(elliptica::cx::INFINITY);
    assert_eq!(n0, [0.0, 0.0, -1.0]);
    assert!((ninf[2] - 1.0).abs() < 1e-15 && ninf[0].abs() < 1e-15);
}

#[test]
fn conformality_on_both_surfaces() {
    let data = build_field_data(&FieldConfig::default()).unwrap();
    let l = *data.gamma.lattice();
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for _ in 0..500 {
        let z = l.point(rng.gen(), rng.gen());
        if l.torus_distance(z, data.points().tc) < 1e-3 || l.torus_distance(z, data.points().bc) < 1e-3 {
            continue;
        }
        assert!(conformality_residual(&forms(&data, z)) <= 1e-12);
        let w = c(rng.gen_range(-3.0..3.0), rng.gen_range(-3.0..3.0));
        assert!(conformality_residual(&forms(&Catenoid, w)) <= 1e-12);
    }
}

#[test]
fn curvature_is_nonpositive() {
    let data = build_field_data(&FieldConfig::default()).unwrap();
    let l = *data.gamma.lattice();
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for _ in 0..1000 {
        let z = l.point(rng.gen(), rng.gen());
        let k = curvature_k(&data, z);
        assert!(k <= 0.0 || !k.is_finite(), "K = {k} at {z}");
    }
    assert!((metric_ds(&Catenoid, Complex64::from_polar(1.0, 0.7)) - 1.0).abs() < 1e-15);
}

#[test]
fn line_types() {
    let data = build_field_data(&FieldConfig::default()).unwrap();
    let p = data.points();
    let zero = c(0.0, 0.0);
    let inset = |a: Complex64, b: Complex64| PathSpec::polyline(&[a + 1e-3 * (b - a), b - 1e-3 * (b - a)]);
    assert_eq!(line_type(&data, &inset(p.a, zero), 64), LineType::Asymptotic);
    assert!(symmetry_line_check(&data, &inset(p.a, zero), 64));
    let s = data.scale();
    let rho = inset(p.tc, p.a_prime);
    assert_eq!(line_type(&data, &rho, 64), LineType::Principal);
    assert!(symmetry_line_check(&data, &rho, 64));
    let generic = PathSpec::polyline(&[c(0.13 * s, 0.21 * s), c(0.71 * s, 0.37 * s)]);
    assert_eq!(line_type(&data, &generic, 64), LineType::Neither);
    assert!(!symmetry_line_check(&data, &generic, 64));
    let meridian = PathSpec::polyline(&[c(0.2, 0.0), c(3.0, 0.0)]);
    assert_eq!(line_type(&Catenoid, &meridian, 64), LineType::Principal);
}

#[test]
fn jorge_meeks_examples() {
    assert_eq!(jorge_meeks_degree(1, 2).unwrap(), 2);
    assert_eq!(jorge_meeks_degree(0, 2).unwrap(), 1);
    assert_eq!(jorge_meeks_degree(0, 1).unwrap(), 0);
    assert!(jorge_meeks_degree(-1, 2).is_err());
}

#[test]
fn path_near_end_is_rejected() {
    let data = build_field_data(&FieldConfig::default()).unwrap();
    let tc = data.points().tc;
    let r = integrate(&data, &PathSpec::polyline(&[tc - 0.1, tc + 0.1]), 1e-10);
    assert!(matches!(r, Err(elliptica::Error::PathTooClose { .. })));
}
