use std::io::{self, Write};

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::exec::Execution;
use crate::field::data::{FieldConfig, FieldData};
use crate::minrep::{curvature_k, integrate, PathSpec, WeierstrassData};

pub mod marker {
    /// Truncation boundary at an end.
    pub const END: u8 = 1;
    /// The straight edge `E → A′`.
    pub const STRAIGHT: u8 = 2;
    /// The planar edge `TC → A′` (`g` on the meridian `e^{−iπ/4}ℝ₊`).
    pub const RHO: u8 = 4;
    /// The planar edge `TC → E` (`g ∈ ℝ₊`).
    pub const PLANAR: u8 = 8;
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct SurfaceMesh {
    pub vertices: Vec<[f64; 3]>,
    pub faces: Vec<[u32; 3]>,
    /// Torus coordinate of each vertex.
    pub provenance: Vec<Complex64>,
    pub markers: Vec<u8>,
}

pub(crate) fn sub(a: [f64; 3], b: [f64; 3]) -> [f64; 3] {
    [a[0] - b[0], a[1] - b[1], a[2] - b[2]]
}

pub(crate) fn add(a: [f64; 3], b: [f64; 3]) -> [f64; 3] {
    [a[0] + b[0], a[1] + b[1], a[2] + b[2]]
}

pub(crate) fn scale(a: [f64; 3], s: f64) -> [f64; 3] {
    [a[0] * s, a[1] * s, a[2] * s]
}

pub(crate) fn dot(a: [f64; 3], b: [f64; 3]) -> f64 {
    a[0] * b[0] + a[1] * b[1] + a[2] * b[2]
}

pub(crate) fn cross(a: [f64; 3], b: [f64; 3]) -> [f64; 3] {
    [a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]]
}

pub(crate) fn norm(a: [f64; 3]) -> f64 {
    dot(a, a).sqrt()
}

impl SurfaceMesh {
    pub fn triangle(&self, f: usize) -> [[f64; 3]; 3] {
        self.faces[f].map(|i| self.vertices[i as usize])
    }

    pub fn triangle_area(&self, f: usize) -> f64 {
        let [a, b, c] = self.triangle(f);
        0.5 * norm(cross(sub(b, a), sub(c, a)))
    }

    pub fn area(&self) -> f64 {
        (0..self.faces.len()).map(|f| self.triangle_area(f)).sum()
    }

    /// Largest coordinate extent of the vertex set.
    pub fn extent(&self) -> f64 {
        extent(&self.vertices)
    }

    pub fn validate(&self) -> Result<()> {
        let n = self.vertices.len() as u32;
        for (k, f) in self.faces.iter().enumerate() {
            if f.iter().any(|&i| i >= n) {
                return Err(Error::MeshFailure(format!("face {k} indexes a missing vertex")));
            }
            if self.triangle_area(k) <= 1e-14 {
                return Err(Error::MeshFailure(format!("face {k} is degenerate")));
            }
        }
        if self.vertices.iter().flatten().any(|x| !x.is_finite()) {
            return Err(Error::MeshFailure("non-finite vertex".into()));
        }
        Ok(())
    }

    pub fn indices_with(&self, mark: u8) -> Vec<usize> {
        (0..self.markers.len()).filter(|&i| self.markers[i] & mark != 0).collect()
    }

    pub fn write_obj<W: Write>(&self, mut w: W) -> io::Result<()> {
        for v in &self.vertices {
            writeln!(w, "v {} {} {}", format_g(v[0], 9), format_g(v[1], 9), format_g(v[2], 9))?;
        }
        for f in &self.faces {
            writeln!(w, "f {} {} {}", f[0] + 1, f[1] + 1, f[2] + 1)?;
        }
        w.flush()
    }

    pub fn write_ply<W: Write>(&self, mut w: W) -> io::Result<()> {
        write!(
            w,
            "ply\nformat binary_little_endian 1.0\nelement vertex {}\nproperty double x\nproperty double y\nproperty double z\nelement face {}\nproperty list uchar uint vertex_indices\nend_header\n",
            self.vertices.len(),
            self.faces.len()
        )?;
        for v in &self.vertices {
            for x in v {
                w.write_all(&x.to_le_bytes())?;
            }
        }
        for f in &self.faces {
            w.write_all(&[3u8])?;
            for i in f {
                w.write_all(&i.to_le_bytes())?;
            }
        }
        w.flush()
    }
}

pub(crate) fn extent(points: &[[f64; 3]]) -> f64 {
    let mut lo = [f64::INFINITY; 3];
    let mut hi = [f64::NEG_INFINITY; 3];
    for p in points {
        for k in 0..3 {
            lo[k] = lo[k].min(p[k]);
            hi[k] = hi[k].max(p[k]);
        }
    }
    (0..3).map(|k| hi[k] - lo[k]).fold(0.0, f64::max)
}

/// C `printf("%.*g")` formatting.
pub fn format_g(x: f64, precision: usize) -> String {
    if x == 0.0 {
        return if x.is_sign_negative() { "-0".into() } else { "0".into() };
    }
    if !x.is_finite() {
        return if x.is_nan() { "nan".into() } else if x > 0.0 { "inf".into() } else { "-inf".into() };
    }
    let p = precision.max(1);
    let sci = format!("{:.*e}", p - 1, x);
    let (mantissa, exp) = sci.split_once('e').expect("exponent present");
    let exp: i32 = exp.parse().expect("integer exponent");
    if exp < -4 || exp >= p as i32 {
        let m = strip_zeros(mantissa);
        let sign = if exp < 0 { '-' } else { '+' };
        format!("{m}e{sign}{:02}", exp.abs())
    } else {
        let decimals = (p as i32 - 1 - exp).max(0) as usize;
        strip_zeros(&format!("{:.*}", decimals, x)).to_string()
    }
}

fn strip_zeros(s: &str) -> &str {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        s
    }
}

/// Fan parametrization of the region `R` from `TC`:
/// `z(u, v) = TC + u·((1−v)(E − TC) + v(A′ − TC))`.
pub(crate) fn fan_point(data: &FieldData, u: f64, v: f64) -> Complex64 {
    let p = data.points();
    p.tc + u * ((1.0 - v) * (p.e - p.tc) + v * (p.a_prime - p.tc))
}

/// Smallest `u` on the ray `v` with `|g| ≥ 1/end_cutoff`.
pub(crate) fn truncation_u(data: &FieldData, v: f64, end_cutoff: f64) -> f64 {
    let target = 1.0 / end_cutoff;
    let (mut lo, mut hi) = (0.0f64, 1.0f64);
    for _ in 0..80 {
        let mid = 0.5 * (lo + hi);
        if data.g(fan_point(data, mid, v)).norm() < target {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    hi
}

/// Mesh of the region `R` (triangle `TC, E, A′`, one sixteenth of the torus)
/// under `X`, with base point `X(A′) = 0`. Rows run from the straight edge
/// `E → A′` toward `TC`, stopping where `|g| = 1/end_cutoff`.
pub fn mesh_fundamental_domain(data: &FieldData, config: &FieldConfig, exec: Execution) -> Result<SurfaceMesh> {
    config.validate()?;
    let (nu, nv) = (config.mesh_nu, config.mesh_nv);
    let vs: Vec<f64> = (0..nv).map(|j| j as f64 / (nv - 1) as f64).collect();
    let u0: Vec<f64> = exec.map(&vs, |&v| truncation_u(data, v, config.end_cutoff));
    let grid: Vec<Vec<Complex64>> = (0..nv)
        .map(|j| {
            (0..nu)
                .map(|i| {
                    let t = i as f64 / (nu - 1) as f64;
                    let u = u0[j] * (1.0 / u0[j]).powf(t);
                    fan_point(data, if i == nu - 1 { 1.0 } else { u }, vs[j])
                })
                .collect()
        })
        .collect();
    let seg_tol = config.quad_tol / (nu + nv) as f64;
    let mut segments: Vec<(Complex64, Complex64)> = (0..nv - 1)
        .map(|j| (grid[nv - 1 - j][nu - 1], grid[nv - 2 - j][nu - 1]))
        .collect();
    for row in &grid {
        for i in (1..nu).rev() {
            segments.push((row[i], row[i - 1]));
        }
    }
    let integrals: Vec<Result<[f64; 3]>> = exec.map(&segments, |&(a, b)| {
        integrate(data, &PathSpec::polyline(&[a, b]), seg_tol).map(|q| q.value.map(|v| v.re))
    });
    let mut values = Vec::with_capacity(integrals.len());
    for r in integrals {
        values.push(r.map_err(|e| Error::MeshFailure(format!("segment integration failed: {e}")))?);
    }
    let mut x = vec![vec![[0.0; 3]; nu]; nv];
    for j in 1..nv {
        let idx = nv - 1 - j;
        x[idx][nu - 1] = add(x[idx + 1][nu - 1], values[j - 1]);
    }
    let mut k = nv - 1;
    for j in 0..nv {
        for i in (1..nu).rev() {
            x[j][i - 1] = add(x[j][i], values[k]);
            k += 1;
        }
    }
    let mut mesh = SurfaceMesh::default();
    for j in 0..nv {
        for i in 0..nu {
            mesh.vertices.push(x[j][i]);
            mesh.provenance.push(grid[j][i]);
            let mut m = 0;
            if i == 0 {
                m |= marker::END;
            }
            if i == nu - 1 {
                m |= marker::STRAIGHT;
            }
            if j == 0 {
                m |= marker::PLANAR;
            }
            if j == nv - 1 {
                m |= marker::RHO;
            }
            mesh.markers.push(m);
        }
    }
    let id = |i: usize, j: usize| (j * nu + i) as u32;
    for j in 0..nv - 1 {
        for i in 0..nu - 1 {
            mesh.faces.push([id(i, j), id(i + 1, j), id(i + 1, j + 1)]);
            mesh.faces.push([id(i, j), id(i + 1, j + 1), id(i, j + 1)]);
        }
    }
    crate::field::replicate::orient_faces(&mut mesh, data);
    mesh.validate()?;
    Ok(mesh)
}

/// Largest distance from the best-fit line, divided by the extent.
pub fn collinearity_residual(points: &[[f64; 3]]) -> f64 {
    let (c, axes, _) = principal_axes(points);
    let d = axes[2];
    let worst = points
        .iter()
        .map(|p| {
            let r = sub(*p, c);
            norm(sub(r, scale(d, dot(r, d))))
        })
        .fold(0.0, f64::max);
    worst / extent(points).max(f64::MIN_POSITIVE)
}

/// Best-fit plane `(point, unit normal)` and the largest distance from it,
/// divided by the extent.
pub fn plane_fit(points: &[[f64; 3]]) -> ([f64; 3], [f64; 3], f64) {
    let (c, axes, _) = principal_axes(points);
    let n = axes[0];
    let worst = points.iter().map(|p| dot(sub(*p, c), n).abs()).fold(0.0, f64::max);
    (c, n, worst / extent(points).max(f64::MIN_POSITIVE))
}

/// Centroid and covariance eigenvectors sorted by increasing eigenvalue.
fn principal_axes(points: &[[f64; 3]]) -> ([f64; 3], [[f64; 3]; 3], [f64; 3]) {
    let n = points.len().max(1) as f64;
    let mut c = [0.0; 3];
    for p in points {
        c = add(c, *p);
    }
    c = scale(c, 1.0 / n);
    let mut m = nalgebra::Matrix3::<f64>::zeros();
    for p in points {
        let r = nalgebra::Vector3::from(sub(*p, c));
        m += r * r.transpose();
    }
    let eig = nalgebra::SymmetricEigen::new(m);
    let mut order = [0usize, 1, 2];
    order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
    let axes = order.map(|k| {
        let v = eig.eigenvectors.column(k);
        [v[0], v[1], v[2]]
    });
    (c, axes, order.map(|k| eig.eigenvalues[k]))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CurvatureReport {
    /// `∫K dA` over the quotient, from the mesh of `R` times 16.
    pub total: f64,
    /// `−8π` corrected for the two truncated end caps.
    pub truncated_expectation: f64,
}

/// `16·Σ K(centroid)·area` over the mesh of `R`.
pub fn total_curvature(data: &FieldData, mesh: &SurfaceMesh, end_cutoff: f64) -> CurvatureReport {
    let mut sum = 0.0;
    for (f, face) in mesh.faces.iter().enumerate() {
        let z = face.iter().map(|&i| mesh.provenance[i as usize]).sum::<Complex64>() / 3.0;
        sum += curvature_k(data, z) * mesh.triangle_area(f);
    }
    let eps = 1.0 / end_cutoff;
    let cap = 4.0 * std::f64::consts::PI * eps * eps / (1.0 + eps * eps);
    CurvatureReport { total: 16.0 * sum, truncated_expectation: -8.0 * std::f64::consts::PI + 2.0 * cap }
}

/// Per-vertex mean curvature `|H|` from the cotangent Laplacian, with
/// `None` on boundary vertices.
pub fn mean_curvature(mesh: &SurfaceMesh) -> Vec<Option<f64>> {
    let n = mesh.vertices.len();
    let mut lap = vec![[0.0; 3]; n];
    let mut area = vec![0.0; n];
    let mut edge_count = std::collections::HashMap::new();
    for (f, face) in mesh.faces.iter().enumerate() {
        let a = mesh.triangle_area(f);
        for k in 0..3 {
            let (i, j, o) = (face[k] as usize, face[(k + 1) % 3] as usize, face[(k + 2) % 3] as usize);
            let (pi, pj, po) = (mesh.vertices[i], mesh.vertices[j], mesh.vertices[o]);
            let (e1, e2) = (sub(pi, po), sub(pj, po));
            let cot = dot(e1, e2) / norm(cross(e1, e2));
            let d = sub(pj, pi);
            lap[i] = add(lap[i], scale(d, 0.5 * cot));
            lap[j] = add(lap[j], scale(d, -0.5 * cot));
            area[i] += a / 3.0;
            *edge_count.entry((i.min(j), i.max(j))).or_insert(0u32) += 1;
        }
    }
    let mut boundary = vec![false; n];
    for (&(i, j), &c) in &edge_count {
        if c == 1 {
            boundary[i] = true;
            boundary[j] = true;
        }
    }
    (0..n)
        .map(|i| (!boundary[i] && area[i] > 0.0).then(|| 0.5 * norm(lap[i]) / area[i]))
        .collect()
}

/// Statistics of `|H|·λ` over interior vertices.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MeanCurvatureStats {
    pub rms: f64,
    pub mean: f64,
    pub max: f64,
    pub samples: usize,
}

pub fn mean_curvature_stats(mesh: &SurfaceMesh, lambda: f64) -> MeanCurvatureStats {
    let h: Vec<f64> = mean_curvature(mesh).into_iter().flatten().map(|h| h * lambda).collect();
    let n = h.len().max(1) as f64;
    MeanCurvatureStats {
        rms: (h.iter().map(|x| x * x).sum::<f64>() / n).sqrt(),
        mean: h.iter().sum::<f64>() / n,
        max: h.iter().copied().fold(0.0, f64::max),
        samples: h.len(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn format_g_matches_printf() {
        assert_eq!(format_g(1.0, 9), "1");
        assert_eq!(format_g(-0.5, 9), "-0.5");
        assert_eq!(format_g(1.0 / 3.0, 9), "0.333333333");
        assert_eq!(format_g(123456789.0, 9), "123456789");
        assert_eq!(format_g(1234567890.0, 9), "1.23456789e+09");
        assert_eq!(format_g(0.0001, 9), "0.0001");
        assert_eq!(format_g(0.00001234, 9), "1.234e-05");
        assert_eq!(format_g(0.0, 9), "0");
        assert_eq!(format_g(9.9999999999, 9), "10");
        assert_eq!(format_g(2.5e-300, 9), "2.5e-300");
    }

    #[test]
    fn line_and_plane_fits() {
        let line: Vec<[f64; 3]> = (0..10).map(|k| [k as f64, 2.0 * k as f64, -(k as f64)]).collect();
        assert!(collinearity_residual(&line) < 1e-14);
        let plane: Vec<[f64; 3]> = (0..20).map(|k| {
            let (s, t) = ((k as f64).sin(), (k as f64 * 0.7).cos());
            [s, t, 1.0 - s - t]
        }).collect();
        let (_, n, r) = plane_fit(&plane);
        assert!(r < 1e-14);
        assert!((dot(n, [1.0, 1.0, 1.0]).abs() - 3f64.sqrt()).abs() < 1e-12);
    }
}
