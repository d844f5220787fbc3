use std::collections::HashMap;

use crate::exec::Execution;
use crate::field::mesh::{cross, dot, marker, norm, sub, SurfaceMesh};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Intersection {
    pub faces: (u32, u32),
    pub point: [f64; 3],
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct EmbeddingReport {
    pub triangles: usize,
    pub pairs_tested: usize,
    pub excluded_triangles: usize,
    pub intersections: Vec<Intersection>,
}

impl EmbeddingReport {
    pub fn is_embedded(&self) -> bool {
        self.intersections.is_empty()
    }
}

type Tri = [[f64; 3]; 3];

fn aabb(t: &Tri) -> ([f64; 3], [f64; 3]) {
    let mut lo = t[0];
    let mut hi = t[0];
    for p in &t[1..] {
        for k in 0..3 {
            lo[k] = lo[k].min(p[k]);
            hi[k] = hi[k].max(p[k]);
        }
    }
    (lo, hi)
}

/// Triangle–triangle intersection sweep over a uniform spatial hash.
/// Pairs sharing a vertex are skipped, as are triangles with a vertex
/// within `exclusion_radius` of an end-truncation vertex.
pub fn embedding_probe(mesh: &SurfaceMesh, exclusion_radius: f64, exec: Execution) -> EmbeddingReport {
    let tris: Vec<Tri> = (0..mesh.faces.len()).map(|f| mesh.triangle(f)).collect();
    let excluded = near_ends(mesh, exclusion_radius);
    let boxes: Vec<([f64; 3], [f64; 3])> = tris.iter().map(aabb).collect();
    let mut sizes: Vec<f64> = boxes
        .iter()
        .map(|(lo, hi)| (0..3).map(|k| hi[k] - lo[k]).fold(0.0, f64::max))
        .collect();
    sizes.sort_by(f64::total_cmp);
    let cell = sizes.get(sizes.len() * 9 / 10).copied().unwrap_or(1.0).max(1e-12);
    let key = |x: f64| (x / cell).floor() as i64;
    let mut grid: HashMap<[i64; 3], Vec<u32>> = HashMap::new();
    for (f, (lo, hi)) in boxes.iter().enumerate() {
        if excluded[f] {
            continue;
        }
        for i in key(lo[0])..=key(hi[0]) {
            for j in key(lo[1])..=key(hi[1]) {
                for k in key(lo[2])..=key(hi[2]) {
                    grid.entry([i, j, k]).or_default().push(f as u32);
                }
            }
        }
    }
    let mut cells: Vec<([i64; 3], Vec<u32>)> = grid.into_iter().collect();
    cells.sort_by(|a, b| a.0.cmp(&b.0));
    let scale = mesh.extent().max(1e-300);
    let results: Vec<(usize, Vec<Intersection>)> = exec.map(&cells, |(cell_key, list)| {
        let mut tested = 0;
        let mut hits = Vec::new();
        for (x, &a) in list.iter().enumerate() {
            for &b in &list[x + 1..] {
                let (fa, fb) = (mesh.faces[a as usize], mesh.faces[b as usize]);
                if fa.iter().any(|v| fb.contains(v)) {
                    continue;
                }
                let (la, ha) = boxes[a as usize];
                let (lb, hb) = boxes[b as usize];
                if (0..3).any(|k| ha[k] < lb[k] || hb[k] < la[k]) {
                    continue;
                }
                let owner = [key(la[0].max(lb[0])), key(la[1].max(lb[1])), key(la[2].max(lb[2]))];
                if &owner != cell_key {
                    continue;
                }
                tested += 1;
                let (ta, tb) = (&tris[a as usize], &tris[b as usize]);
                if triangles_intersect(ta, tb, 1e-12 * scale) {
                    let c = [0, 1, 2].map(|k| (ta[0][k] + ta[1][k] + ta[2][k]) / 3.0);
                    hits.push(Intersection { faces: (a.min(b), a.max(b)), point: c });
                }
            }
        }
        (tested, hits)
    });
    let mut report = EmbeddingReport {
        triangles: tris.len(),
        excluded_triangles: excluded.iter().filter(|&&e| e).count(),
        ..Default::default()
    };
    for (t, h) in results {
        report.pairs_tested += t;
        report.intersections.extend(h);
    }
    report.intersections.sort_by(|a, b| a.faces.cmp(&b.faces));
    report
}

fn near_ends(mesh: &SurfaceMesh, r: f64) -> Vec<bool> {
    let ends: Vec<[f64; 3]> = mesh.indices_with(marker::END).into_iter().map(|i| mesh.vertices[i]).collect();
    if r <= 0.0 || ends.is_empty() {
        return vec![false; mesh.faces.len()];
    }
    let key = |p: [f64; 3]| p.map(|x| (x / r).floor() as i64);
    let mut grid: HashMap<[i64; 3], Vec<[f64; 3]>> = HashMap::new();
    for p in ends {
        grid.entry(key(p)).or_default().push(p);
    }
    let near = |p: [f64; 3]| {
        let k = key(p);
        for dx in -1..=1 {
            for dy in -1..=1 {
                for dz in -1..=1 {
                    if let Some(list) = grid.get(&[k[0] + dx, k[1] + dy, k[2] + dz]) {
                        if list.iter().any(|&q| norm(sub(p, q)) < r) {
                            return true;
                        }
                    }
                }
            }
        }
        false
    };
    let vertex_near: Vec<bool> = mesh.vertices.iter().map(|&p| near(p)).collect();
    mesh.faces.iter().map(|f| f.iter().any(|&i| vertex_near[i as usize])).collect()
}

/// Checks that the projection along coordinate `axis` is injective: the
/// flattened mesh must have no overlapping non-adjacent triangles and no
/// folded faces. Returns `(overlaps, folded faces)`.
pub fn projection_overlaps(mesh: &SurfaceMesh, axis: usize, exec: Execution) -> (usize, usize) {
    let mut flat = mesh.clone();
    for v in &mut flat.vertices {
        v[axis] = 0.0;
    }
    flat.markers.iter_mut().for_each(|m| *m &= !marker::END);
    let signs: Vec<f64> = (0..flat.faces.len())
        .map(|f| {
            let [a, b, c] = mesh.triangle(f);
            cross(sub(b, a), sub(c, a))[axis]
        })
        .collect();
    let pos = signs.iter().filter(|&&s| s > 0.0).count();
    let folded = pos.min(signs.len() - pos);
    (embedding_probe(&flat, 0.0, exec).intersections.len(), folded)
}

/// Möller's interval test, with a 2-D fallback for coplanar triangles.
pub fn triangles_intersect(t1: &Tri, t2: &Tri, eps: f64) -> bool {
    let n2 = cross(sub(t2[1], t2[0]), sub(t2[2], t2[0]));
    let d2 = -dot(n2, t2[0]);
    let n2len = norm(n2);
    let mut dv = t1.map(|p| dot(n2, p) + d2);
    for d in &mut dv {
        if d.abs() <= eps * n2len {
            *d = 0.0;
        }
    }
    if (dv[0] > 0.0 && dv[1] > 0.0 && dv[2] > 0.0) || (dv[0] < 0.0 && dv[1] < 0.0 && dv[2] < 0.0) {
        return false;
    }
    let n1 = cross(sub(t1[1], t1[0]), sub(t1[2], t1[0]));
    let d1 = -dot(n1, t1[0]);
    let n1len = norm(n1);
    let mut du = t2.map(|p| dot(n1, p) + d1);
    for d in &mut du {
        if d.abs() <= eps * n1len {
            *d = 0.0;
        }
    }
    if (du[0] > 0.0 && du[1] > 0.0 && du[2] > 0.0) || (du[0] < 0.0 && du[1] < 0.0 && du[2] < 0.0) {
        return false;
    }
    if dv.iter().all(|&d| d == 0.0) {
        return coplanar_intersect(n1, t1, t2);
    }
    let dir = cross(n1, n2);
    let axis = (0..3).max_by(|&a, &b| dir[a].abs().total_cmp(&dir[b].abs())).unwrap_or(0);
    let p1 = t1.map(|p| p[axis]);
    let p2 = t2.map(|p| p[axis]);
    let (a0, a1) = interval(p1, dv);
    let (b0, b1) = interval(p2, du);
    !(a1 < b0 || b1 < a0)
}

fn interval(p: [f64; 3], d: [f64; 3]) -> (f64, f64) {
    let (i, j, k) = if d[0] * d[1] > 0.0 {
        (2, 0, 1)
    } else if d[0] * d[2] > 0.0 {
        (1, 0, 2)
    } else if d[1] * d[2] > 0.0 || d[0] != 0.0 {
        (0, 1, 2)
    } else if d[1] != 0.0 {
        (1, 0, 2)
    } else {
        (2, 0, 1)
    };
    let t0 = p[i] + (p[j] - p[i]) * d[i] / (d[i] - d[j]);
    let t1 = p[i] + (p[k] - p[i]) * d[i] / (d[i] - d[k]);
    if t0 <= t1 {
        (t0, t1)
    } else {
        (t1, t0)
    }
}

fn coplanar_intersect(n: [f64; 3], t1: &Tri, t2: &Tri) -> bool {
    let a = n.map(f64::abs);
    let (i0, i1) = if a[0] > a[1] && a[0] > a[2] {
        (1, 2)
    } else if a[1] > a[2] {
        (0, 2)
    } else {
        (0, 1)
    };
    let p = t1.map(|v| [v[i0], v[i1]]);
    let q = t2.map(|v| [v[i0], v[i1]]);
    for e in 0..3 {
        for f in 0..3 {
            if segments_cross(p[e], p[(e + 1) % 3], q[f], q[(f + 1) % 3]) {
                return true;
            }
        }
    }
    inside(p[0], &q) || inside(q[0], &p)
}

fn orient(a: [f64; 2], b: [f64; 2], c: [f64; 2]) -> f64 {
    (b[0] - a[0]) * (c[1] - a[1]) - (b[1] - a[1]) * (c[0] - a[0])
}

fn segments_cross(a: [f64; 2], b: [f64; 2], c: [f64; 2], d: [f64; 2]) -> bool {
    let (o1, o2) = (orient(a, b, c), orient(a, b, d));
    let (o3, o4) = (orient(c, d, a), orient(c, d, b));
    o1 * o2 <= 0.0 && o3 * o4 <= 0.0 && !(o1 == 0.0 && o2 == 0.0)
}

fn inside(p: [f64; 2], t: &[[f64; 2]; 3]) -> bool {
    let s = [orient(t[0], t[1], p), orient(t[1], t[2], p), orient(t[2], t[0], p)];
    s.iter().all(|&x| x >= 0.0) || s.iter().all(|&x| x <= 0.0)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn crossing_triangles() {
        let a = [[0.0, 0.0, 0.0], [1.0, 0.0, 0.0], [0.0, 1.0, 0.0]];
        let b = [[0.2, 0.2, -1.0], [0.2, 0.2, 1.0], [0.9, 0.9, 0.0]];
        assert!(triangles_intersect(&a, &b, 1e-14));
        let c = [[0.2, 0.2, 0.5], [0.8, 0.2, 0.5], [0.2, 0.8, 0.5]];
        assert!(!triangles_intersect(&a, &c, 1e-14));
        let d = [[2.0, 2.0, -1.0], [2.0, 2.0, 1.0], [3.0, 3.0, 0.0]];
        assert!(!triangles_intersect(&a, &d, 1e-14));
    }

    #[test]
    fn coplanar_overlap() {
        let a = [[0.0, 0.0, 0.0], [1.0, 0.0, 0.0], [0.0, 1.0, 0.0]];
        let b = [[0.2, 0.2, 0.0], [2.0, 0.2, 0.0], [0.2, 2.0, 0.0]];
        assert!(triangles_intersect(&a, &b, 1e-14));
        let c = [[2.0, 2.0, 0.0], [3.0, 2.0, 0.0], [2.0, 3.0, 0.0]];
        assert!(!triangles_intersect(&a, &c, 1e-14));
    }
}
