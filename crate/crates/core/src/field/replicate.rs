use std::collections::HashMap;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::field::data::FieldData;
use crate::field::mesh::{add, collinearity_residual, dot, marker, norm, plane_fit, scale, sub, SurfaceMesh};
use crate::field::periods::TranslationPeriods;
use crate::minrep::gauss_map;

/// Rigid motion `x ↦ M·x + t` of ℝ³ paired with the torus map
/// `z ↦ a·w + b` (`w = z̄` when `conj`) it realizes.
#[derive(Debug, Clone, Copy, PartialEq)]
struct Symmetry {
    m: [[f64; 3]; 3],
    t: [f64; 3],
    a: Complex64,
    b: Complex64,
    conj: bool,
}

impl Symmetry {
    fn identity() -> Self {
        Symmetry {
            m: [[1.0, 0.0, 0.0], [0.0, 1.0, 0.0], [0.0, 0.0, 1.0]],
            t: [0.0; 3],
            a: Complex64::new(1.0, 0.0),
            b: Complex64::new(0.0, 0.0),
            conj: false,
        }
    }

    fn apply(&self, x: [f64; 3]) -> [f64; 3] {
        let r = [dot(self.m[0], x), dot(self.m[1], x), dot(self.m[2], x)];
        add(r, self.t)
    }

    fn apply_torus(&self, z: Complex64) -> Complex64 {
        self.a * if self.conj { z.conj() } else { z } + self.b
    }

    /// `self ∘ other`.
    fn after(&self, other: &Symmetry) -> Symmetry {
        let mut m = [[0.0; 3]; 3];
        for i in 0..3 {
            for j in 0..3 {
                m[i][j] = (0..3).map(|k| self.m[i][k] * other.m[k][j]).sum();
            }
        }
        let t = self.apply(other.t);
        let (oa, ob) = if self.conj { (other.a.conj(), other.b.conj()) } else { (other.a, other.b) };
        Symmetry { m, t, a: self.a * oa, b: self.a * ob + self.b, conj: self.conj ^ other.conj }
    }

    /// Reflection in the plane through `c` with unit normal `n`, paired with
    /// the torus reflection in the line through `q` with direction `d`.
    fn reflection(c: [f64; 3], n: [f64; 3], q: Complex64, d: Complex64) -> Symmetry {
        let mut m = [[0.0; 3]; 3];
        for i in 0..3 {
            for j in 0..3 {
                m[i][j] = if i == j { 1.0 } else { 0.0 } - 2.0 * n[i] * n[j];
            }
        }
        let t = scale(n, 2.0 * dot(c, n));
        let u = d / d.norm();
        Symmetry { m, t, a: u * u, b: q - u * u * q.conj(), conj: true }
    }

    /// Half-turn about the line through `c` with unit direction `d`, paired
    /// with the torus reflection in the line through `q` with direction `e`.
    fn half_turn(c: [f64; 3], d: [f64; 3], q: Complex64, e: Complex64) -> Symmetry {
        let mut m = [[0.0; 3]; 3];
        for i in 0..3 {
            for j in 0..3 {
                m[i][j] = 2.0 * d[i] * d[j] - if i == j { 1.0 } else { 0.0 };
            }
        }
        let mc = [dot(m[0], c), dot(m[1], c), dot(m[2], c)];
        let t = sub(c, mc);
        let u = e / e.norm();
        Symmetry { m, t, a: u * u, b: q - u * u * q.conj(), conj: true }
    }

    fn translation(v: [f64; 3], shift: Complex64) -> Symmetry {
        Symmetry { t: v, b: shift, ..Symmetry::identity() }
    }
}

fn edge_points(mesh: &SurfaceMesh, sym: &Symmetry, mark: u8) -> (Vec<[f64; 3]>, Vec<Complex64>) {
    mesh.indices_with(mark)
        .into_iter()
        .map(|i| (sym.apply(mesh.vertices[i]), sym.apply_torus(mesh.provenance[i])))
        .unzip()
}

fn plane_symmetry(mesh: &SurfaceMesh, sym: &Symmetry, mark: u8, tol: f64) -> Result<Symmetry> {
    let (pts, zs) = edge_points(mesh, sym, mark);
    let (c, n, residual) = plane_fit(&pts);
    let s = Symmetry::reflection(c, n, zs[0], zs[zs.len() - 1] - zs[0]);
    let moved = pts.iter().map(|&p| norm(sub(s.apply(p), p))).fold(0.0, f64::max);
    if moved > tol {
        return Err(Error::SymmetryViolation(format!(
            "reflection moves its own edge by {moved:e} (planarity residual {residual:e})"
        )));
    }
    Ok(s)
}

fn line_symmetry(mesh: &SurfaceMesh, sym: &Symmetry, mark: u8, tol: f64) -> Result<Symmetry> {
    let (pts, zs) = edge_points(mesh, sym, mark);
    let a = pts[0];
    let b = pts[pts.len() - 1];
    let d = scale(sub(b, a), 1.0 / norm(sub(b, a)));
    let s = Symmetry::half_turn(a, d, zs[0], zs[zs.len() - 1] - zs[0]);
    let moved = pts.iter().map(|&p| norm(sub(s.apply(p), p))).fold(0.0, f64::max);
    if moved > tol {
        return Err(Error::SymmetryViolation(format!(
            "half-turn moves its own axis by {moved:e} (collinearity {:e})",
            collinearity_residual(&pts)
        )));
    }
    Ok(s)
}

/// The sixteen symmetries carrying `R` onto the quotient piece: eight
/// reflections around `TC` form `P`, and a half-turn about the straight edge
/// gives its partner.
fn quotient_symmetries(mesh: &SurfaceMesh, tol: f64) -> Result<Vec<Symmetry>> {
    let mut piece = vec![Symmetry::identity()];
    for k in 1..8 {
        let prev = piece[k - 1];
        let mark = if k % 2 == 1 { marker::PLANAR } else { marker::RHO };
        let s = plane_symmetry(mesh, &prev, mark, tol)?;
        piece.push(s.after(&prev));
    }
    let (last, _) = edge_points(mesh, &piece[7], marker::RHO);
    let (first, _) = edge_points(mesh, &piece[0], marker::RHO);
    let gap = last.iter().zip(&first).map(|(p, q)| norm(sub(*p, *q))).fold(0.0, f64::max);
    if gap > tol {
        return Err(Error::SymmetryViolation(format!("the eight copies around TC do not close (gap {gap:e})")));
    }
    let turn = line_symmetry(mesh, &piece[0], marker::STRAIGHT, tol)?;
    let partner: Vec<Symmetry> = piece.iter().map(|s| turn.after(s)).collect();
    piece.extend(partner);
    Ok(piece)
}

fn transformed(mesh: &SurfaceMesh, sym: &Symmetry, data: &FieldData) -> SurfaceMesh {
    let mut out = SurfaceMesh {
        vertices: mesh.vertices.iter().map(|&x| sym.apply(x)).collect(),
        faces: mesh.faces.clone(),
        provenance: mesh.provenance.iter().map(|&z| sym.apply_torus(z)).collect(),
        markers: mesh.markers.clone(),
    };
    orient_faces(&mut out, data);
    out
}

/// Reverse faces whose normal disagrees with the Gauss map.
pub(crate) fn orient_faces(mesh: &mut SurfaceMesh, data: &FieldData) {
    for f in 0..mesh.faces.len() {
        let [a, b, c] = mesh.triangle(f);
        let n = crate::field::mesh::cross(sub(b, a), sub(c, a));
        let z = mesh.faces[f].iter().map(|&i| mesh.provenance[i as usize]).sum::<Complex64>() / 3.0;
        if dot(n, gauss_map(data, z)) < 0.0 {
            mesh.faces[f].swap(1, 2);
        }
    }
}

fn append(target: &mut SurfaceMesh, part: &SurfaceMesh) {
    let offset = target.vertices.len() as u32;
    target.vertices.extend_from_slice(&part.vertices);
    target.provenance.extend_from_slice(&part.provenance);
    target.markers.extend_from_slice(&part.markers);
    target.faces.extend(part.faces.iter().map(|f| f.map(|i| i + offset)));
}

/// Merge vertices closer than `tol`; markers are combined.
pub fn weld(mesh: &SurfaceMesh, tol: f64) -> SurfaceMesh {
    let cell = 4.0 * tol;
    let key = |p: [f64; 3]| p.map(|x| (x / cell).floor() as i64);
    let mut grid: HashMap<[i64; 3], Vec<usize>> = HashMap::new();
    let mut remap = vec![0u32; mesh.vertices.len()];
    let mut out = SurfaceMesh::default();
    for (i, &p) in mesh.vertices.iter().enumerate() {
        let k = key(p);
        let mut found = None;
        'search: for dx in -1..=1 {
            for dy in -1..=1 {
                for dz in -1..=1 {
                    if let Some(list) = grid.get(&[k[0] + dx, k[1] + dy, k[2] + dz]) {
                        for &j in list {
                            if norm(sub(out.vertices[j], p)) <= tol {
                                found = Some(j);
                                break 'search;
                            }
                        }
                    }
                }
            }
        }
        let j = match found {
            Some(j) => {
                out.markers[j] |= mesh.markers[i];
                j
            }
            None => {
                out.vertices.push(p);
                out.provenance.push(mesh.provenance[i]);
                out.markers.push(mesh.markers[i]);
                grid.entry(k).or_default().push(out.vertices.len() - 1);
                out.vertices.len() - 1
            }
        };
        remap[i] = j as u32;
    }
    out.faces = mesh.faces.iter().map(|f| f.map(|i| remap[i as usize])).collect();
    out
}

/// The sixteen congruent copies of `R` forming one period cell, unwelded.
pub fn quotient_piece(mesh: &SurfaceMesh, data: &FieldData, lambda: f64) -> Result<Vec<SurfaceMesh>> {
    let tol = 1e-9 * lambda;
    let syms = quotient_symmetries(mesh, tol)?;
    Ok(syms.iter().map(|s| transformed(mesh, s, data)).collect())
}

/// The piece `P`: the eight copies of `R` around `TC`, welded.
pub fn fundamental_piece(mesh: &SurfaceMesh, data: &FieldData, lambda: f64) -> Result<SurfaceMesh> {
    let parts = quotient_piece(mesh, data, lambda)?;
    let mut out = SurfaceMesh::default();
    for p in &parts[..8] {
        append(&mut out, p);
    }
    Ok(weld(&out, 1e-9 * lambda))
}

/// Quotient piece translated by `i·v1 + j·v2` for `0 ≤ i ≤ copies.0`,
/// `0 ≤ j ≤ copies.1`, welded within `1e-9·λ`.
pub fn replicate(
    mesh: &SurfaceMesh,
    data: &FieldData,
    periods: &TranslationPeriods,
    copies: (usize, usize),
) -> Result<SurfaceMesh> {
    let lambda = periods.lambda;
    let parts = quotient_piece(mesh, data, lambda)?;
    let l = *data.gamma.lattice();
    let mut out = SurfaceMesh::default();
    for i in 0..=copies.0 {
        for j in 0..=copies.1 {
            let v = add(scale(periods.v1.p, i as f64), scale(periods.v2.p, j as f64));
            let shift = 2.0 * (i as f64 * l.w1 + j as f64 * l.w2);
            let t = Symmetry::translation(v, shift);
            for p in &parts {
                append(&mut out, &transformed(p, &t, data));
            }
        }
    }
    let welded = weld(&out, 1e-9 * lambda);
    welded.validate()?;
    Ok(welded)
}

/// Boundary loops made of end-truncation vertices, split by end:
/// `(around TC, around BC)`.
pub fn end_loops_count(mesh: &SurfaceMesh, data: &FieldData) -> (usize, usize) {
    let mut count: HashMap<(u32, u32), u32> = HashMap::new();
    for f in &mesh.faces {
        for k in 0..3 {
            let (a, b) = (f[k], f[(k + 1) % 3]);
            *count.entry((a.min(b), a.max(b))).or_insert(0) += 1;
        }
    }
    let mut adj: HashMap<u32, Vec<u32>> = HashMap::new();
    for (&(a, b), &c) in &count {
        let end = |v: u32| mesh.markers[v as usize] & marker::END != 0;
        if c == 1 && end(a) && end(b) {
            adj.entry(a).or_default().push(b);
            adj.entry(b).or_default().push(a);
        }
    }
    let mut keys: Vec<u32> = adj.keys().copied().collect();
    keys.sort_unstable();
    let mut seen = std::collections::HashSet::new();
    let (mut top, mut bottom) = (0, 0);
    let l = data.gamma.lattice();
    let pts = data.points();
    for start in keys {
        if !seen.insert(start) {
            continue;
        }
        let mut stack = vec![start];
        while let Some(v) = stack.pop() {
            for &w in &adj[&v] {
                if seen.insert(w) {
                    stack.push(w);
                }
            }
        }
        let z = mesh.provenance[start as usize];
        if l.torus_distance(z, pts.tc) < l.torus_distance(z, pts.bc) {
            top += 1;
        } else {
            bottom += 1;
        }
    }
    (top, bottom)
}
