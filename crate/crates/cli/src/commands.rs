use std::f64::consts::{FRAC_PI_2, PI};
use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::Path;

use elliptica::cx::{chordal, cis, I};
use elliptica::elliptic::{
    c_from_diagonal, compute_c, count_degree, half_period_values, SymmetricWp,
};
use elliptica::field::{
    b_to_a_integral, collinearity_residual, format_g, embedding_probe, end_loops_count, end_period_closure,
    fundamental_piece, marker, mean_curvature_stats, mesh_fundamental_domain, period_integral_1d, plane_fit,
    replicate, total_curvature, translation_periods, FieldConfig, FieldData, SurfaceMesh, TranslationPeriods,
};
use elliptica::gamma::GammaFn;
use elliptica::minrep::{conformality_residual, forms, line_type, surface_map, Catenoid, LineType, PathSpec};
use elliptica::mobius::{induced_involution, probe_points, FixedSet, InvolutionKind, TorusInvolution};
use elliptica::{Complex64, Execution, Lattice};
use serde::Serialize;

use crate::config::RunConfig;
use crate::cx::{j, JsonComplex};
use crate::CliError;

const EXEC: Execution = Execution::Parallel;

/// Serialized report plus whether every numerical check passed.
pub struct Report {
    pub json: String,
    pub accepted: bool,
}

fn finish<T: Serialize>(report: &T, accepted: bool) -> Result<Report, CliError> {
    let json = serde_json::to_string_pretty(report).map_err(|e| CliError::Numerical(e.to_string()))?;
    Ok(Report { json, accepted })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum MeshFormat {
    Obj,
    Ply,
}

impl MeshFormat {
    fn resolve(explicit: Option<MeshFormat>, path: &Path) -> MeshFormat {
        explicit.unwrap_or_else(|| match path.extension().and_then(|e| e.to_str()) {
            Some(e) if e.eq_ignore_ascii_case("ply") => MeshFormat::Ply,
            _ => MeshFormat::Obj,
        })
    }
}

fn create(path: &Path) -> Result<BufWriter<File>, CliError> {
    File::create(path)
        .map(BufWriter::new)
        .map_err(|e| CliError::Write(format!("cannot create {}: {e}", path.display())))
}

fn write_mesh(mesh: &SurfaceMesh, path: &Path, format: Option<MeshFormat>) -> Result<(), CliError> {
    let w = create(path)?;
    let r = match MeshFormat::resolve(format, path) {
        MeshFormat::Obj => mesh.write_obj(w),
        MeshFormat::Ply => mesh.write_ply(w),
    };
    r.map_err(|e| CliError::Write(format!("cannot write {}: {e}", path.display())))
}

#[derive(Serialize)]
struct LatticeJson {
    w1: JsonComplex,
    w2: JsonComplex,
}

fn lattice_json(l: &Lattice) -> LatticeJson {
    LatticeJson { w1: j(l.w1), w2: j(l.w2) }
}

#[derive(Serialize)]
struct Check {
    name: &'static str,
    value: f64,
    limit: f64,
    pass: bool,
}

fn check(name: &'static str, value: f64, limit: f64) -> Check {
    Check { name, value, limit, pass: value <= limit }
}

fn all_pass(checks: &[Check]) -> bool {
    checks.iter().all(|c| c.pass)
}

fn build_wp(cfg: &RunConfig) -> Result<SymmetricWp, CliError> {
    Ok(SymmetricWp::build(cfg.lattice()?, cfg.policy())?)
}

fn field_data(cfg: &RunConfig) -> Result<(FieldData, FieldConfig), CliError> {
    let fc = cfg.field_config();
    let gamma = GammaFn::build(build_wp(cfg)?)
        .map_err(|e| CliError::Validation(format!("the field needs the square torus: {e}")))?;
    Ok((FieldData::new(gamma, fc.c)?, fc))
}

// ---- torus ----

#[derive(Serialize)]
struct HalfPeriodJson {
    x: JsonComplex,
    wp_w2: JsonComplex,
    alpha: Option<f64>,
    rho: Option<f64>,
    mirrored: bool,
}

#[derive(Serialize)]
struct Reduced {
    z: JsonComplex,
    reduced: JsonComplex,
}

#[derive(Serialize)]
struct TorusReport {
    command: &'static str,
    lattice: LatticeJson,
    shape: elliptica::TorusShape,
    tau: JsonComplex,
    reduced_basis: [JsonComplex; 2],
    half_period_values: HalfPeriodJson,
    c: JsonComplex,
    points: Vec<Reduced>,
}

pub fn torus(cfg: &RunConfig, zs: &[Complex64]) -> Result<Report, CliError> {
    let l = cfg.lattice()?;
    let class = l.classify();
    let wp = build_wp(cfg)?;
    let hp = half_period_values(&wp);
    let (b1, b2) = l.reduced_basis();
    let report = TorusReport {
        command: "torus",
        lattice: lattice_json(&l),
        shape: class.shape,
        tau: j(class.tau),
        reduced_basis: [j(b1), j(b2)],
        half_period_values: HalfPeriodJson {
            x: j(hp.x),
            wp_w2: j(hp.wp_w2),
            alpha: hp.alpha,
            rho: hp.rho,
            mirrored: hp.mirrored,
        },
        c: j(wp.c),
        points: zs.iter().map(|&z| Reduced { z: j(z), reduced: j(l.reduce(z)) }).collect(),
    };
    finish(&report, true)
}

// ---- wp ----

#[derive(Serialize)]
struct WpPoint {
    z: JsonComplex,
    wp: JsonComplex,
    wp_prime: JsonComplex,
}

#[derive(Serialize)]
struct WpReport {
    command: &'static str,
    lattice: LatticeJson,
    c: JsonComplex,
    points: Vec<WpPoint>,
    csv: Option<String>,
}

pub fn wp(cfg: &RunConfig, zs: &[Complex64], csv: Option<&Path>, grid: usize) -> Result<Report, CliError> {
    let wp = build_wp(cfg)?;
    let l = wp.lattice;
    if let Some(path) = csv {
        if grid == 0 {
            return Err(CliError::Validation("grid must be positive".into()));
        }
        let cells: Vec<Complex64> = (0..grid * grid)
            .map(|k| l.point(((k / grid) as f64 + 0.37) / grid as f64, ((k % grid) as f64 + 0.37) / grid as f64))
            .collect();
        let rows = EXEC.map(&cells, |&z| (z, wp.value(z), wp.derivative(z)));
        let mut w = create(path)?;
        let mut text = String::from("re(z),im(z),re(℘),im(℘),re(℘′),im(℘′)\n");
        for (z, v, d) in rows {
            let row: Vec<String> = [z.re, z.im, v.re, v.im, d.re, d.im].iter().map(|&x| format_g(x, 17)).collect();
            text.push_str(&row.join(","));
            text.push('\n');
        }
        w.write_all(text.as_bytes())
            .and_then(|_| w.flush())
            .map_err(|e| CliError::Write(format!("cannot write {}: {e}", path.display())))?;
    }
    let report = WpReport {
        command: "wp",
        lattice: lattice_json(&l),
        c: j(wp.c),
        points: zs
            .iter()
            .map(|&z| WpPoint { z: j(z), wp: j(wp.value(z)), wp_prime: j(wp.derivative(z)) })
            .collect(),
        csv: csv.map(|p| p.display().to_string()),
    };
    finish(&report, true)
}

// ---- gamma ----

#[derive(Serialize)]
struct SpecialValue {
    label: &'static str,
    z: JsonComplex,
    expected: JsonComplex,
    value: JsonComplex,
    chordal_error: f64,
}

#[derive(Serialize)]
struct GammaPoint {
    z: JsonComplex,
    gamma: JsonComplex,
    gamma_prime: JsonComplex,
}

#[derive(Serialize)]
struct GammaReport {
    command: &'static str,
    lattice: LatticeJson,
    alpha: f64,
    theta: f64,
    c0: JsonComplex,
    unit_c0_lattice: LatticeJson,
    special_values: Vec<SpecialValue>,
    checks: Vec<Check>,
    points: Vec<GammaPoint>,
    pass: bool,
}

fn gamma_checks(g: &GammaFn, seed: u64) -> Result<(GammaFn, Vec<Check>), CliError> {
    let special = g
        .special_values()
        .iter()
        .map(|&(_, z, e)| chordal(g.value(z), e))
        .fold(0.0, f64::max);
    let r = g.rescale_for_unit_c0()?;
    let equation = r
        .regular_samples(100, seed)
        .iter()
        .map(|&z| r.algebraic_residual(z, 1.0))
        .fold(0.0, f64::max);
    let identity = g.gamma_sq_identity_residual(&g.regular_samples(100, seed.wrapping_add(1)));
    let angles = (g.alpha + g.theta - FRAC_PI_2).abs();
    Ok((
        r,
        vec![
            check("alpha_plus_theta", angles, 0.0),
            check("special_values", special, 1e-8),
            check("log_derivative_equation", equation, 1e-8),
            check("gamma_squared_identity", identity, 1e-8),
        ],
    ))
}

pub fn gamma(cfg: &RunConfig, zs: &[Complex64]) -> Result<Report, CliError> {
    let g = GammaFn::build(build_wp(cfg)?)?;
    let (r, checks) = gamma_checks(&g, cfg.seed)?;
    let pass = all_pass(&checks);
    let report = GammaReport {
        command: "gamma",
        lattice: lattice_json(g.lattice()),
        alpha: g.alpha,
        theta: g.theta,
        c0: j(g.measured_c0()),
        unit_c0_lattice: lattice_json(r.lattice()),
        special_values: g
            .special_values()
            .into_iter()
            .map(|(label, z, e)| SpecialValue {
                label,
                z: j(z),
                expected: j(e),
                value: j(g.value(z)),
                chordal_error: chordal(g.value(z), e),
            })
            .collect(),
        checks,
        points: zs
            .iter()
            .map(|&z| GammaPoint { z: j(z), gamma: j(g.value(z)), gamma_prime: j(g.derivative(z)) })
            .collect(),
        pass,
    };
    finish(&report, pass)
}

// ---- involutions ----

#[derive(Serialize)]
struct MapJson {
    a: JsonComplex,
    b: JsonComplex,
    c: JsonComplex,
    d: JsonComplex,
    conjugate_first: bool,
}

#[derive(Serialize)]
struct LineJson {
    point: JsonComplex,
    direction: JsonComplex,
}

#[derive(Serialize)]
#[serde(rename_all = "lowercase")]
enum FixedJson {
    Points(Vec<JsonComplex>),
    Lines(Vec<LineJson>),
}

#[derive(Serialize)]
struct InvolutionJson {
    name: &'static str,
    valid: bool,
    induced_map: Option<MapJson>,
    probe_residual: Option<f64>,
    involution_residual: Option<f64>,
    fixed_set: Option<FixedJson>,
    error: Option<String>,
}

#[derive(Serialize)]
struct InvolutionsReport {
    command: &'static str,
    lattice: LatticeJson,
    shape: elliptica::TorusShape,
    involutions: Vec<InvolutionJson>,
    pass: bool,
}

fn involution_entries(wp: &SymmetricWp, seed: u64) -> Vec<InvolutionJson> {
    let l = wp.lattice;
    let probes = probe_points(&l, 100, seed);
    InvolutionKind::ALL
        .iter()
        .map(|&kind| {
            let inv = TorusInvolution::standard(kind, &l);
            let mut entry = InvolutionJson {
                name: kind.name(),
                valid: inv.is_valid_on(&l),
                induced_map: None,
                probe_residual: None,
                involution_residual: None,
                fixed_set: None,
                error: None,
            };
            if !entry.valid {
                return entry;
            }
            entry.fixed_set = Some(match inv.fixed_points(&l) {
                FixedSet::Points(p) => FixedJson::Points(p.iter().map(|t| j(t.z)).collect()),
                FixedSet::Lines(v) => FixedJson::Lines(
                    v.iter().map(|f| LineJson { point: j(f.point), direction: j(f.direction) }).collect(),
                ),
            });
            match induced_involution(&inv, wp, &probes) {
                Ok(fit) => {
                    let [a, b, c, d] = fit.map.normalized();
                    entry.induced_map =
                        Some(MapJson { a: j(a), b: j(b), c: j(c), d: j(d), conjugate_first: fit.map.conjugate_first });
                    entry.probe_residual = Some(fit.probe_residual);
                    entry.involution_residual = Some(fit.involution_residual);
                }
                Err(e) => entry.error = Some(e.to_string()),
            }
            entry
        })
        .collect()
}

pub fn involutions(cfg: &RunConfig) -> Result<Report, CliError> {
    let wp = build_wp(cfg)?;
    let involutions = involution_entries(&wp, cfg.seed);
    let pass = involutions.iter().all(|e| e.error.is_none());
    let report = InvolutionsReport {
        command: "involutions",
        lattice: lattice_json(&wp.lattice),
        shape: wp.lattice.classify().shape,
        involutions,
        pass,
    };
    finish(&report, pass)
}

// ---- periods ----

#[derive(Serialize)]
struct PeriodVectors {
    v1: [f64; 3],
    v2: [f64; 3],
}

#[derive(Serialize)]
struct PeriodsReport {
    command: &'static str,
    lattice: LatticeJson,
    c: f64,
    lambda: f64,
    period_vectors: PeriodVectors,
    end_closure_residuals: [f64; 2],
    b_to_a: [f64; 3],
    one_dimensional_integral: f64,
    checks: Vec<Check>,
    pass: bool,
}

fn period_checks(data: &FieldData, fc: &FieldConfig, t: &TranslationPeriods) -> Result<([f64; 2], f64, Vec<Check>), CliError> {
    let ends = end_period_closure(data, fc)?;
    let lambda = t.lambda;
    let (n1, n2) = (t.v1.norm(), t.v2.norm());
    let p = data.points();
    let q = elliptica::minrep::integrate(data, &PathSpec::polyline(&[p.b, p.e, p.a_prime]), fc.quad_tol)?;
    let one_d = 2.0 * period_integral_1d(fc.c, 1e-12)?;
    let checks = vec![
        check("end_closure", ends[0].norm().max(ends[1].norm()) / lambda, 1e-6),
        check("equal_magnitudes", (n1 - n2).abs() / n1.max(n2), 1e-6),
        check("magnitude_lambda_sqrt2", (n1 - lambda * 2f64.sqrt()).abs() / n1, 1e-6),
        check("horizontal", t.v1.p[2].abs().max(t.v2.p[2].abs()) / lambda, 1e-6),
        check("orthogonal", (0..3).map(|k| t.v1.p[k] * t.v2.p[k]).sum::<f64>().abs() / (n1 * n2), 1e-6),
        check("one_dimensional_cross_check", ((2.0 * q.value[1].re).abs() - one_d).abs() / one_d, 1e-6),
    ];
    Ok(([ends[0].norm(), ends[1].norm()], one_d, checks))
}

pub fn periods(cfg: &RunConfig) -> Result<Report, CliError> {
    let (data, fc) = field_data(cfg)?;
    let t = translation_periods(&data, &fc)?;
    let (ends, one_d, checks) = period_checks(&data, &fc, &t)?;
    let pass = all_pass(&checks);
    let report = PeriodsReport {
        command: "periods",
        lattice: lattice_json(data.gamma.lattice()),
        c: fc.c,
        lambda: t.lambda,
        period_vectors: PeriodVectors { v1: t.v1.p, v2: t.v2.p },
        end_closure_residuals: ends,
        b_to_a: b_to_a_integral(&data, fc.quad_tol)?,
        one_dimensional_integral: one_d,
        checks,
        pass,
    };
    finish(&report, pass)
}

// ---- mesh ----

#[derive(Serialize)]
struct CurvatureJson {
    total: f64,
    ratio_to_minus_8pi: f64,
    truncated_expectation: f64,
}

#[derive(Serialize)]
struct MeanCurvatureJson {
    rms: f64,
    mean: f64,
    max: f64,
    samples: usize,
}

#[derive(Serialize)]
struct MeshReport {
    command: &'static str,
    region: &'static str,
    vertices: usize,
    faces: usize,
    extent: f64,
    lambda: f64,
    total_curvature: CurvatureJson,
    mean_curvature_times_lambda: MeanCurvatureJson,
    checks: Vec<Check>,
    output: Option<String>,
    pass: bool,
}

fn mesh_checks(mesh: &SurfaceMesh) -> Vec<Check> {
    let pts = |m: u8| mesh.indices_with(m).iter().map(|&i| mesh.vertices[i]).collect::<Vec<_>>();
    vec![
        check("straight_edge_collinearity", collinearity_residual(&pts(marker::STRAIGHT)), 1e-6),
        check("rho_edge_planarity", plane_fit(&pts(marker::RHO)).2, 1e-6),
        check("planar_edge_planarity", plane_fit(&pts(marker::PLANAR)).2, 1e-6),
    ]
}

pub fn mesh(cfg: &RunConfig, out: Option<&Path>, format: Option<MeshFormat>, piece: bool) -> Result<Report, CliError> {
    let (data, fc) = field_data(cfg)?;
    let t = translation_periods(&data, &fc)?;
    let r = mesh_fundamental_domain(&data, &fc, EXEC)?;
    let k = total_curvature(&data, &r, fc.end_cutoff);
    let ratio = k.total / (-8.0 * PI);
    let h = mean_curvature_stats(&r, t.lambda);
    let mut checks = mesh_checks(&r);
    checks.push(check("total_curvature_band", (ratio - 1.0).abs(), 0.02));
    let exported = if piece { fundamental_piece(&r, &data, t.lambda)? } else { r };
    if let Some(path) = out {
        write_mesh(&exported, path, format)?;
    }
    let pass = all_pass(&checks);
    let report = MeshReport {
        command: "mesh",
        region: if piece { "P" } else { "R" },
        vertices: exported.vertices.len(),
        faces: exported.faces.len(),
        extent: exported.extent(),
        lambda: t.lambda,
        total_curvature: CurvatureJson { total: k.total, ratio_to_minus_8pi: ratio, truncated_expectation: k.truncated_expectation },
        mean_curvature_times_lambda: MeanCurvatureJson { rms: h.rms, mean: h.mean, max: h.max, samples: h.samples },
        checks,
        output: out.map(|p| p.display().to_string()),
        pass,
    };
    finish(&report, pass)
}

// ---- catenoid ----

#[derive(Serialize)]
struct IntersectionJson {
    faces: [u32; 2],
    point: [f64; 3],
}

#[derive(Serialize)]
struct ProbeJson {
    end_cutoff: f64,
    exclusion_radius: f64,
    triangles: usize,
    excluded_triangles: usize,
    pairs_tested: usize,
}

#[derive(Serialize)]
struct CatenoidReport {
    command: &'static str,
    lattice: LatticeJson,
    c: f64,
    copies: [usize; 2],
    vertices: usize,
    faces: usize,
    necks_per_level: [usize; 2],
    lambda: f64,
    period_vectors: PeriodVectors,
    end_closure_residuals: [f64; 2],
    intersections: Vec<IntersectionJson>,
    probe: ProbeJson,
    checks: Vec<Check>,
    output: Option<String>,
    pass: bool,
}

pub fn catenoid(
    cfg: &RunConfig,
    out: Option<&Path>,
    format: Option<MeshFormat>,
    probe_cutoff: f64,
) -> Result<Report, CliError> {
    let (data, fc) = field_data(cfg)?;
    if !(probe_cutoff > 1.0 && probe_cutoff.is_finite()) {
        return Err(CliError::Validation(format!("probe cutoff {probe_cutoff} must exceed 1")));
    }
    let t = translation_periods(&data, &fc)?;
    let (ends, _, mut checks) = period_checks(&data, &fc, &t)?;
    let r = mesh_fundamental_domain(&data, &fc, EXEC)?;
    let field = replicate(&r, &data, &t, fc.copies)?;
    let necks = end_loops_count(&field, &data);
    let expected = ((fc.copies.0 + 1) * (fc.copies.1 + 1)) as f64;
    checks.push(check("necks_top", (necks.0 as f64 - expected).abs(), 0.0));
    checks.push(check("necks_bottom", (necks.1 as f64 - expected).abs(), 0.0));
    if let Some(path) = out {
        write_mesh(&field, path, format)?;
    }
    let probe_cfg = FieldConfig { end_cutoff: probe_cutoff, ..fc };
    let probe_mesh = replicate(&mesh_fundamental_domain(&data, &probe_cfg, EXEC)?, &data, &t, fc.copies)?;
    let radius = 0.05 * t.lambda;
    let probe = embedding_probe(&probe_mesh, radius, EXEC);
    checks.push(check("intersections", probe.intersections.len() as f64, 0.0));
    let pass = all_pass(&checks);
    let report = CatenoidReport {
        command: "catenoid",
        lattice: lattice_json(data.gamma.lattice()),
        c: fc.c,
        copies: [fc.copies.0, fc.copies.1],
        vertices: field.vertices.len(),
        faces: field.faces.len(),
        necks_per_level: [necks.0, necks.1],
        lambda: t.lambda,
        period_vectors: PeriodVectors { v1: t.v1.p, v2: t.v2.p },
        end_closure_residuals: ends,
        intersections: probe
            .intersections
            .iter()
            .map(|x| IntersectionJson { faces: [x.faces.0, x.faces.1], point: x.point })
            .collect(),
        probe: ProbeJson {
            end_cutoff: probe_cutoff,
            exclusion_radius: radius,
            triangles: probe.triangles,
            excluded_triangles: probe.excluded_triangles,
            pairs_tested: probe.pairs_tested,
        },
        checks,
        output: out.map(|p| p.display().to_string()),
        pass,
    };
    finish(&report, pass)
}

// ---- verify-all ----

#[derive(Serialize)]
struct Suite {
    name: &'static str,
    max_residual: f64,
    limit: f64,
    pass: bool,
}

#[derive(Serialize)]
struct VerifyReport {
    command: &'static str,
    lattice: LatticeJson,
    seed: u64,
    suites: Vec<Suite>,
    pass: bool,
}

fn suite(name: &'static str, max_residual: f64, limit: f64) -> Suite {
    Suite { name, max_residual, limit, pass: max_residual <= limit }
}

fn elliptic_suites(wp: &SymmetricWp, seed: u64, out: &mut Vec<Suite>) -> Result<(), CliError> {
    let l = wp.lattice;
    let (s, d) = (l.w1 + l.w2, l.w1 - l.w2);
    let normalization = [(0.5 * s, I), (-0.5 * s, I), (0.5 * d, -I), (-0.5 * d, -I), (Complex64::new(0.0, 0.0), 0.0 * I)]
        .iter()
        .map(|&(z, e)| (wp.value(z) - e).norm())
        .fold(0.0, f64::max);
    out.push(suite("wp_normalization", normalization, 1e-8));
    let pts = probe_points(&l, 1000, seed);
    let reduce = pts
        .iter()
        .map(|&z| {
            let w = z + 2.0 * (3.0 * l.w1 - 2.0 * l.w2);
            (l.reduce(w) - l.reduce(z)).norm().min(l.torus_distance(l.reduce(w), z))
        })
        .fold(0.0, f64::max);
    out.push(suite("lattice_reduction", reduce, 1e-9 * l.scale()));
    let reciprocal = pts
        .iter()
        .map(|&z| (wp.value(-z + s) * wp.value(z) + 1.0).norm())
        .fold(0.0, f64::max);
    out.push(suite("reciprocal_identity", reciprocal, 1e-7));
    let even = pts
        .iter()
        .map(|&z| chordal(wp.value(-z), wp.value(z)))
        .fold(0.0, f64::max);
    out.push(suite("wp_even", even, 1e-9));
    let algebraic = pts[..100].iter().map(|&z| wp.algebraic_residual(z)).fold(0.0, f64::max);
    out.push(suite("algebraic_equation", algebraic, 1e-8));
    let a = compute_c(wp)?;
    out.push(suite("c_routes", (a - c_from_diagonal(wp)).norm() / a.norm(), 1e-6));
    let entries = involution_entries(wp, seed);
    let induced = entries
        .iter()
        .filter(|e| e.valid)
        .map(|e| if e.error.is_some() { f64::INFINITY } else { e.probe_residual.unwrap_or(0.0) })
        .fold(0.0, f64::max);
    out.push(suite("induced_involutions", induced, 1e-8));
    let squares = InvolutionKind::ALL
        .iter()
        .map(|&k| TorusInvolution::standard(k, &l))
        .filter(|i| i.is_valid_on(&l))
        .map(|i| i.square_residual(&l, &pts[..100]))
        .fold(0.0, f64::max);
    out.push(suite("involution_squares", squares, 1e-10 * l.scale()));
    let values = [Complex64::new(0.37, 0.81), Complex64::new(-1.3, 0.4), Complex64::new(2.2, -1.7)];
    let mut degree = 0.0f64;
    for v in values {
        degree = degree.max((count_degree(wp, v, 16, EXEC)? as f64 - 2.0).abs());
        degree = degree.max((count_degree(&wp.prime(), v, 16, EXEC)? as f64 - 3.0).abs());
    }
    out.push(suite("degree_counts", degree, 0.0));
    Ok(())
}

pub fn verify_all(cfg: &RunConfig) -> Result<Report, CliError> {
    let wp = build_wp(cfg)?;
    let mut suites = Vec::new();
    elliptic_suites(&wp, cfg.seed, &mut suites)?;

    let square_cfg = RunConfig { lattice: crate::config::LatticeConfig::default(), ..*cfg };
    let gamma_wp = if wp.lattice.classify().shape.is_rectangular() { wp } else { build_wp(&square_cfg)? };
    if let Ok(g) = GammaFn::build(gamma_wp) {
        let (_, checks) = gamma_checks(&g, cfg.seed)?;
        suites.extend(checks.into_iter().map(|c| suite(c.name, c.value, c.limit)));
    }

    let mut catenoid = 0.0f64;
    for i in 0..10 {
        for k in 0..10 {
            let z = Complex64::from_polar(0.3 + 0.3 * i as f64, -3.0 + 0.6 * k as f64);
            let hint = [cis(z.arg())];
            let x = Catenoid::to_closed_form_frame(surface_map(&Catenoid, Complex64::new(1.0, 0.0), z, &hint, 1e-10)?);
            let e = Catenoid::closed_form(z);
            catenoid = (0..3).map(|n| (x[n] - e[n]).abs()).fold(catenoid, f64::max);
        }
    }
    suites.push(suite("catenoid_closed_form", catenoid, 1e-6));

    let (data, fc) = field_data(&square_cfg)?;
    let t = translation_periods(&data, &fc)?;
    let (_, _, checks) = period_checks(&data, &fc, &t)?;
    suites.extend(checks.into_iter().map(|c| suite(c.name, c.value, c.limit)));
    let r = mesh_fundamental_domain(&data, &fc, EXEC)?;
    let conformality = r
        .provenance
        .iter()
        .map(|&z| conformality_residual(&forms(&data, z)))
        .chain(probe_points(&Lattice::square(), 200, cfg.seed).iter().map(|&z| conformality_residual(&forms(&Catenoid, z))))
        .fold(0.0, f64::max);
    suites.push(suite("conformality", conformality, 1e-12));
    let k = total_curvature(&data, &r, fc.end_cutoff);
    suites.push(suite("total_curvature_band", (k.total / (-8.0 * PI) - 1.0).abs(), 0.02));
    suites.extend(mesh_checks(&r).into_iter().map(|c| suite(c.name, c.value, c.limit)));
    let p = data.points();
    let inset = |a: Complex64, b: Complex64| PathSpec::polyline(&[a + 1e-3 * (b - a), b - 1e-3 * (b - a)]);
    let lines = [
        (inset(p.e, p.a_prime), LineType::Asymptotic),
        (inset(p.tc, p.a_prime), LineType::Principal),
        (inset(p.tc, p.e), LineType::Principal),
        (inset(p.a, Complex64::new(0.0, 0.0)), LineType::Asymptotic),
    ];
    let misclassified = lines.iter().filter(|(path, want)| line_type(&data, path, 64) != *want).count();
    suites.push(suite("line_types", misclassified as f64, 0.0));
    let mut degree = 0.0f64;
    for v in [Complex64::new(0.37, 0.81), Complex64::new(-1.3, 0.4)] {
        degree = degree.max((count_degree(&data.gauss_fn(), v, 16, EXEC)? as f64 - 2.0).abs());
    }
    suites.push(suite("gauss_map_degree", degree, 0.0));
    let probe_cfg = FieldConfig { end_cutoff: 2.0, copies: (1, 1), ..fc };
    let block = replicate(&mesh_fundamental_domain(&data, &probe_cfg, EXEC)?, &data, &t, (1, 1))?;
    let hits = embedding_probe(&block, 0.05 * t.lambda, EXEC).intersections.len();
    suites.push(suite("embedding_intersections", hits as f64, 0.0));

    let pass = suites.iter().all(|s| s.pass);
    let report = VerifyReport { command: "verify-all", lattice: lattice_json(&wp.lattice), seed: cfg.seed, suites, pass };
    finish(&report, pass)
}

