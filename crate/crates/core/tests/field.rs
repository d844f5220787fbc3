mod common;

use std::collections::HashMap;
use std::f64::consts::{FRAC_PI_3, FRAC_PI_4};

use common::*;
use elliptica::elliptic::{count_degree, LatticeSumPolicy, SymmetricWp, TorusFunction};
use elliptica::field::*;
use elliptica::gamma::{rectangular_lattice_for_alpha, GammaFn};
use elliptica::minrep::{curvature_k, integrate, PathSpec, WeierstrassData};
use elliptica::{Error, Execution};

fn config(n: usize, cutoff: f64) -> FieldConfig {
    FieldConfig { mesh_nu: n, mesh_nv: n, end_cutoff: cutoff, ..FieldConfig::default() }
}

fn shifted_union(mesh: &SurfaceMesh, shift: [f64; 3]) -> SurfaceMesh {
    let mut out = mesh.clone();
    let n = mesh.vertices.len() as u32;
    out.vertices.extend(mesh.vertices.iter().map(|v| [v[0] + shift[0], v[1] + shift[1], v[2] + shift[2]]));
    out.provenance.extend_from_slice(&mesh.provenance);
    out.markers.extend_from_slice(&mesh.markers);
    out.faces.extend(mesh.faces.iter().map(|f| f.map(|i| i + n)));
    out
}

/// Largest distance from a point of `a` to the nearest point of `b`.
fn directed_hausdorff(a: &[[f64; 3]], b: &[[f64; 3]], cell: f64) -> f64 {
    let key = |p: &[f64; 3]| p.map(|x| (x / cell).floor() as i64);
    let mut grid: HashMap<[i64; 3], Vec<[f64; 3]>> = HashMap::new();
    for p in b {
        grid.entry(key(p)).or_default().push(*p);
    }
    a.iter()
        .map(|p| {
            let k = key(p);
            let mut best = f64::INFINITY;
            for dx in -1..=1 {
                for dy in -1..=1 {
                    for dz in -1..=1 {
                        for q in grid.get(&[k[0] + dx, k[1] + dy, k[2] + dz]).into_iter().flatten() {
                            let d = ((p[0] - q[0]).powi(2) + (p[1] - q[1]).powi(2) + (p[2] - q[2]).powi(2)).sqrt();
                            best = best.min(d);
                        }
                    }
                }
            }
            best
        })
        .fold(0.0, f64::max)
}

#[test]
fn gauss_map_degree_and_dh_divisor() {
    let data = build_field_data(&FieldConfig::default()).unwrap();
    for v in [c(0.3, 0.7), c(-1.1, 0.2), c(2.5, -0.9)] {
        assert_eq!(count_degree(&data.gauss_fn(), v, 16, Execution::Parallel).unwrap(), 2);
    }
    let (zeros, poles) = data.dh_divisor(Execution::Parallel).unwrap();
    assert_eq!((zeros, poles), (2, 2));
}

#[test]
fn gauss_map_along_boundary_paths() {
    let data = build_field_data(&FieldConfig::default()).unwrap();
    let p = data.points();
    for k in 1..40 {
        let t = k as f64 / 40.0;
        let g = data.g(p.tc + t * (p.b - p.tc));
        assert!((g.arg() - FRAC_PI_4).abs() < 1e-9, "{g}");
        let g = data.g(p.tc + t * (p.e - p.tc));
        assert!(g.im.abs() < 1e-9 * g.norm() && g.re > 0.0);
    }
    let end = 0.5 * (data.gamma.lattice().w2 - data.gamma.lattice().w1);
    let mut last = 0.0;
    for k in 1..40 {
        let gamma = data.gamma.value(end * (k as f64 / 40.0));
        assert!((gamma.arg() - FRAC_PI_4).abs() < 1e-9);
        assert!(gamma.norm() > last);
        last = gamma.norm();
    }
}

#[test]
fn square_torus_certificate() {
    let data = build_field_data(&FieldConfig::default()).unwrap();
    let r = verify_square_torus(&data.gamma).unwrap();
    assert!((r.alpha - FRAC_PI_4).abs() < 1e-9);

    let l = rectangular_lattice_for_alpha(FRAC_PI_3, LatticeSumPolicy::default()).unwrap();
    let g = GammaFn::build(SymmetricWp::build(l, LatticeSumPolicy::default()).unwrap()).unwrap();
    match verify_square_torus(&g) {
        Err(Error::NotSquare { alpha }) => assert!((alpha - FRAC_PI_3).abs() < 1e-8),
        other => panic!("{other:?}"),
    }
    assert!(matches!(FieldData::new(g, 1.0), Err(Error::ConstructionPrecondition(_))));
}

#[test]
fn dg_vanishes_only_at_half_periods() {
    let data = build_field_data(&FieldConfig::default()).unwrap();
    let p = data.points();
    let l = *data.gamma.lattice();
    let floor = (1..200)
        .map(|k| data.spherical_derivative(p.tc + (k as f64 / 200.0) * (p.a - p.tc)))
        .fold(f64::INFINITY, f64::min);
    assert!(floor > 0.5, "{floor}");
    for w in [c(0.0, 0.0), l.w1, l.w2, l.w1 + l.w2] {
        assert!(data.gauss_fn().derivative(w).norm() < 1e-8);
    }
    assert!(curvature_k(&data, c(0.0, 0.0)).abs() < 1e-12);
}

#[test]
fn end_loops_close() {
    let cfg = FieldConfig::default();
    let data = build_field_data(&cfg).unwrap();
    let a = end_loops(&data, &cfg, 0.25).unwrap();
    let b = end_loops(&data, &cfg, 0.125).unwrap();
    for k in 0..2 {
        assert!(a[k].norm() <= 10.0 * cfg.quad_tol);
        for i in 0..3 {
            assert!((a[k].p[i] - b[k].p[i]).abs() <= 2.0 * 10.0 * cfg.quad_tol);
        }
    }
}

#[test]
fn translation_periods_are_orthogonal_and_horizontal() {
    let cfg = FieldConfig::default();
    let data = build_field_data(&cfg).unwrap();
    let t = translation_periods(&data, &cfg).unwrap();
    let l = t.lambda;
    assert!((l - 1.910_098_894_513_856).abs() < 1e-9, "{l}");
    for v in [t.v1, t.v2] {
        assert!((v.norm() - l * 2f64.sqrt()).abs() <= 1e-6 * l);
        assert!(v.p[2].abs() <= 1e-6 * l);
    }
    let dot: f64 = (0..3).map(|k| t.v1.p[k] * t.v2.p[k]).sum();
    assert!(dot.abs() <= 1e-6 * t.v1.norm() * t.v2.norm());
    let b = b_to_a_integral(&data, cfg.quad_tol).unwrap();
    assert!(b[0].abs() < 1e-8 && b[2].abs() < 1e-8 && (b[1].abs() - l).abs() < 1e-8, "{b:?}");
}

#[test]
fn one_dimensional_period_cross_check() {
    let cfg = FieldConfig::default();
    let data = build_field_data(&cfg).unwrap();
    let p = data.points();
    let q = integrate(&data, &PathSpec::polyline(&[p.b, p.e, p.a_prime]), 1e-11).unwrap();
    let two_d = 2.0 * q.value[1].re;
    let one_d = 2.0 * period_integral_1d(1.0, 1e-12).unwrap();
    assert!((two_d.abs() - one_d).abs() <= 1e-6 * one_d, "{two_d} vs {one_d}");
}

#[test]
fn lambda_varies_monotonically_with_c() {
    let mut last = 0.0;
    for c in [0.5, 1.0, 2.0] {
        let cfg = FieldConfig { c, ..FieldConfig::default() };
        let data = build_field_data(&cfg).unwrap();
        let l = translation_periods(&data, &cfg).unwrap().lambda;
        let oracle = period_integral_1d(c, 1e-12).unwrap();
        assert!((l - oracle).abs() <= 1e-6 * oracle, "c = {c}: {l} vs {oracle}");
        assert!(l > last);
        last = l;
    }
}

#[test]
fn catenoid_reference_data() {
    let cat = catenoid_reference();
    assert_eq!(cat.g(c(0.5, 0.5)), c(0.5, 0.5));
    assert_eq!(cat.dh(c(2.0, 0.0)), c(0.5, 0.0));
}

#[test]
fn fundamental_domain_mesh() {
    let cfg = config(32, 50.0);
    let data = build_field_data(&cfg).unwrap();
    let mesh = mesh_fundamental_domain(&data, &cfg, Execution::Parallel).unwrap();
    assert_eq!(mesh.vertices.len(), 32 * 32);
    let ext = mesh.extent();
    let straight: Vec<[f64; 3]> = mesh.indices_with(marker::STRAIGHT).iter().map(|&i| mesh.vertices[i]).collect();
    assert!(collinearity_residual(&straight) <= 1e-6);
    let rho: Vec<[f64; 3]> = mesh.indices_with(marker::RHO).iter().map(|&i| mesh.vertices[i]).collect();
    let (_, n, r) = plane_fit(&rho);
    assert!(r <= 1e-6);
    assert!(n[2].abs() < 1e-9 && (n[0].abs() - n[1].abs()).abs() < 1e-9, "{n:?}");
    assert!(ext > 1.0);
    let seq = mesh_fundamental_domain(&data, &cfg, Execution::Sequential).unwrap();
    assert_eq!(seq, mesh);
}

#[test]
fn mesh_is_a_graph_over_the_x2_x3_plane() {
    let cfg = config(32, 50.0);
    let data = build_field_data(&cfg).unwrap();
    let mesh = mesh_fundamental_domain(&data, &cfg, Execution::Parallel).unwrap();
    assert_eq!(projection_overlaps(&mesh, 0, Execution::Parallel), (0, 0));
}

#[test]
fn quotient_piece_and_replication() {
    let cfg = config(24, 2.0);
    let data = build_field_data(&cfg).unwrap();
    let t = translation_periods(&data, &cfg).unwrap();
    let mesh = mesh_fundamental_domain(&data, &cfg, Execution::Parallel).unwrap();
    let parts = quotient_piece(&mesh, &data, t.lambda).unwrap();
    assert_eq!(parts.len(), 16);
    let pairs = [(0usize, 570usize), (5, 300), (17, 555)];
    for part in &parts {
        assert!((part.area() - mesh.area()).abs() <= 1e-12 * mesh.area());
        for &(i, j) in &pairs {
            let d = |m: &SurfaceMesh| {
                let (a, b) = (m.vertices[i], m.vertices[j]);
                ((a[0] - b[0]).powi(2) + (a[1] - b[1]).powi(2) + (a[2] - b[2]).powi(2)).sqrt()
            };
            assert!((d(part) - d(&mesh)).abs() < 1e-9);
        }
    }

    let block = replicate(&mesh, &data, &t, (1, 1)).unwrap();
    assert_eq!(end_loops_count(&block, &data), (4, 4));

    let wide = replicate(&mesh, &data, &t, (2, 1)).unwrap();
    let moved: Vec<[f64; 3]> = block
        .vertices
        .iter()
        .map(|v| [v[0] + t.v1.p[0], v[1] + t.v1.p[1], v[2] + t.v1.p[2]])
        .collect();
    let mut union = block.vertices.clone();
    union.extend_from_slice(&moved);
    let tol = 1e-6 * t.lambda;
    assert!(directed_hausdorff(&union, &wide.vertices, 0.1) <= tol);
    assert!(directed_hausdorff(&wide.vertices, &union, 0.1) <= tol);
}

#[test]
fn embedding_probe_and_negative_control() {
    let cfg = config(24, 2.0);
    let data = build_field_data(&cfg).unwrap();
    let t = translation_periods(&data, &cfg).unwrap();
    let mesh = mesh_fundamental_domain(&data, &cfg, Execution::Parallel).unwrap();
    let piece = fundamental_piece(&mesh, &data, t.lambda).unwrap();
    assert!(embedding_probe(&piece, 0.05 * t.lambda, Execution::Parallel).is_embedded());
    let block = replicate(&mesh, &data, &t, (1, 1)).unwrap();
    let report = embedding_probe(&block, 0.05 * t.lambda, Execution::Parallel);
    assert!(report.is_embedded(), "{} intersections", report.intersections.len());
    let half = t.v1.p.map(|x| 0.5 * x);
    let control = embedding_probe(&shifted_union(&block, half), 0.05 * t.lambda, Execution::Sequential);
    assert!(!control.is_embedded());
}

#[test]
fn obj_export_format() {
    let cfg = config(8, 2.0);
    let data = build_field_data(&cfg).unwrap();
    let mesh = mesh_fundamental_domain(&data, &cfg, Execution::Parallel).unwrap();
    let mut buf = Vec::new();
    mesh.write_obj(&mut buf).unwrap();
    let text = String::from_utf8(buf).unwrap();
    let v = text.lines().filter(|l| l.starts_with("v ")).count();
    let f: Vec<&str> = text.lines().filter(|l| l.starts_with("f ")).collect();
    assert_eq!(v, 64);
    assert_eq!(f.len(), mesh.faces.len());
    assert!(f.iter().all(|l| l.split(' ').skip(1).all(|i| (1..=64).contains(&i.parse::<usize>().unwrap()))));
    let mut ply = Vec::new();
    mesh.write_ply(&mut ply).unwrap();
    assert!(ply.starts_with(b"ply\nformat binary_little_endian 1.0\n"));
}

#[test]
fn config_validation() {
    assert!(FieldConfig { c: -1.0, ..FieldConfig::default() }.validate().is_err());
    assert!(FieldConfig { end_cutoff: 0.5, ..FieldConfig::default() }.validate().is_err());
    assert!(FieldConfig { mesh_nu: 2, ..FieldConfig::default() }.validate().is_err());
}
