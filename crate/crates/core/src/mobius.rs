//! Möbius and anti-Möbius maps, torus involutions and the maps they induce
//! on the sphere through a torus function.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::cx::{chordal, is_infinite, INFINITY};
use crate::elliptic::TorusFunction;
use crate::error::{Error, Result};
use crate::lattice::{Lattice, TorusPoint};

/// `z ↦ (a·w + b)/(c·w + d)` with `w = z̄` when `conjugate_first`, else `w = z`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MobiusMap {
    pub a: Complex64,
    pub b: Complex64,
    pub c: Complex64,
    pub d: Complex64,
    pub conjugate_first: bool,
}

fn cz(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

impl MobiusMap {
    pub fn new(
        a: Complex64,
        b: Complex64,
        c: Complex64,
        d: Complex64,
        conjugate_first: bool,
    ) -> Result<Self> {
        let m = MobiusMap { a, b, c, d, conjugate_first };
        m.validate()?;
        Ok(m)
    }

    pub fn identity() -> Self {
        MobiusMap { a: cz(1.0, 0.0), b: cz(0.0, 0.0), c: cz(0.0, 0.0), d: cz(1.0, 0.0), conjugate_first: false }
    }

    /// `z ↦ −1/z`.
    pub fn negative_reciprocal() -> Self {
        MobiusMap { a: cz(0.0, 0.0), b: cz(-1.0, 0.0), c: cz(1.0, 0.0), d: cz(0.0, 0.0), conjugate_first: false }
    }

    /// `z ↦ z̄`.
    pub fn conjugation() -> Self {
        MobiusMap { conjugate_first: true, ..Self::identity() }
    }

    /// `z ↦ −z̄`.
    pub fn negative_conjugation() -> Self {
        MobiusMap { a: cz(-1.0, 0.0), ..Self::conjugation() }
    }

    /// `z ↦ 1/z̄`.
    pub fn inverse_conjugation() -> Self {
        MobiusMap { a: cz(0.0, 0.0), b: cz(1.0, 0.0), c: cz(1.0, 0.0), d: cz(0.0, 0.0), conjugate_first: true }
    }

    /// `z ↦ (t − z̄)/(1 + t·z̄)`.
    pub fn rectangular_j4(t: f64) -> Self {
        MobiusMap { a: cz(-1.0, 0.0), b: cz(t, 0.0), c: cz(t, 0.0), d: cz(1.0, 0.0), conjugate_first: true }
    }

    pub fn determinant(&self) -> Complex64 {
        self.a * self.d - self.b * self.c
    }

    pub fn validate(&self) -> Result<()> {
        let entries = [self.a, self.b, self.c, self.d];
        if entries.iter().any(|e| !e.is_finite()) {
            return Err(Error::InvalidMap("non-finite coefficient".into()));
        }
        let size: f64 = entries.iter().map(|e| e.norm()).sum();
        if self.determinant().norm() < 1e-12 * size * size || size == 0.0 {
            return Err(Error::InvalidMap("ad − bc vanishes".into()));
        }
        Ok(())
    }

    pub fn apply(&self, z: Complex64) -> Complex64 {
        let w = if self.conjugate_first { z.conj() } else { z };
        if is_infinite(w) {
            return if self.c.norm() == 0.0 { INFINITY } else { self.a / self.c };
        }
        let den = self.c * w + self.d;
        if den.norm() == 0.0 {
            return INFINITY;
        }
        (self.a * w + self.b) / den
    }

    /// Derivative `d/dw` of the fractional-linear part, at `w` (already
    /// conjugated for anti-holomorphic maps).
    pub fn derivative_linear(&self, w: Complex64) -> Complex64 {
        let den = self.c * w + self.d;
        self.determinant() / (den * den)
    }

    /// `self ∘ other`.
    pub fn compose(&self, other: &MobiusMap) -> Result<MobiusMap> {
        let o = if self.conjugate_first {
            MobiusMap { a: other.a.conj(), b: other.b.conj(), c: other.c.conj(), d: other.d.conj(), ..*other }
        } else {
            *other
        };
        let m = MobiusMap {
            a: self.a * o.a + self.b * o.c,
            b: self.a * o.b + self.b * o.d,
            c: self.c * o.a + self.d * o.c,
            d: self.c * o.b + self.d * o.d,
            conjugate_first: self.conjugate_first ^ other.conjugate_first,
        };
        m.validate()?;
        Ok(m)
    }

    pub fn inverse(&self) -> Result<MobiusMap> {
        self.validate()?;
        let (a, b, c, d) = (self.d, -self.b, -self.c, self.a);
        Ok(if self.conjugate_first {
            MobiusMap { a: a.conj(), b: b.conj(), c: c.conj(), d: d.conj(), conjugate_first: true }
        } else {
            MobiusMap { a, b, c, d, conjugate_first: false }
        })
    }

    /// Coefficients scaled so the largest-magnitude entry equals 1.
    pub fn normalized(&self) -> [Complex64; 4] {
        let e = [self.a, self.b, self.c, self.d];
        let k = largest(&e);
        e.map(|x| x / e[k])
    }

    /// Coefficient-wise distance after projective normalization. Both maps
    /// are divided by their entry at the position of `self`'s largest entry.
    pub fn coefficient_distance(&self, other: &MobiusMap) -> f64 {
        if self.conjugate_first != other.conjugate_first {
            return f64::INFINITY;
        }
        let e = [self.a, self.b, self.c, self.d];
        let f = [other.a, other.b, other.c, other.d];
        let k = largest(&e);
        if f[k].norm() == 0.0 {
            return f64::INFINITY;
        }
        (0..4).map(|i| (e[i] / e[k] - f[i] / f[k]).norm()).fold(0.0, f64::max)
    }

    /// Largest chordal distance between `self` and `other` over `points`.
    pub fn chordal_distance_on(&self, other: &MobiusMap, points: &[Complex64]) -> f64 {
        points
            .iter()
            .map(|&z| chordal(self.apply(z), other.apply(z)))
            .fold(0.0, f64::max)
    }

    /// Largest chordal distance of `m(m(z))` from `z` over `points`.
    pub fn involution_residual(&self, points: &[Complex64]) -> f64 {
        points
            .iter()
            .map(|&z| chordal(self.apply(self.apply(z)), z))
            .fold(0.0, f64::max)
    }

    /// The unique map sending `p[k] ↦ q[k]` for `k = 0, 1, 2`.
    pub fn from_three_points(p: [Complex64; 3], q: [Complex64; 3], conjugate_first: bool) -> Result<Self> {
        for pts in [&p, &q] {
            for i in 0..3 {
                for j in (i + 1)..3 {
                    if chordal(pts[i], pts[j]) < 1e-12 {
                        return Err(Error::InvalidInput("coincident points".into()));
                    }
                }
            }
        }
        let p = if conjugate_first { p.map(|z| if is_infinite(z) { z } else { z.conj() }) } else { p };
        let s = to_standard(p);
        let t = to_standard(q).inverse()?;
        let mut m = t.compose(&s)?;
        m.conjugate_first = conjugate_first;
        Ok(m)
    }
}

fn largest(e: &[Complex64; 4]) -> usize {
    let mut k = 0;
    for i in 1..4 {
        if e[i].norm() > e[k].norm() * (1.0 + 1e-9) {
            k = i;
        }
    }
    k
}

/// Holomorphic map sending `(p1, p2, p3) ↦ (0, ∞, 1)`.
fn to_standard(p: [Complex64; 3]) -> MobiusMap {
    let one = cz(1.0, 0.0);
    let zero = cz(0.0, 0.0);
    let [p1, p2, p3] = p;
    let (a, b, c, d) = if is_infinite(p1) {
        (zero, p3 - p2, one, -p2)
    } else if is_infinite(p2) {
        (one, -p1, zero, p3 - p1)
    } else if is_infinite(p3) {
        (one, -p1, one, -p2)
    } else {
        (p3 - p2, -p1 * (p3 - p2), p3 - p1, -p2 * (p3 - p1))
    };
    MobiusMap { a, b, c, d, conjugate_first: false }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum InvolutionKind {
    I1,
    I2,
    I3,
    I4,
    I5,
    I6,
    H,
    Neg,
}

impl InvolutionKind {
    pub const ALL: [InvolutionKind; 8] = [
        InvolutionKind::I1,
        InvolutionKind::I2,
        InvolutionKind::I3,
        InvolutionKind::I4,
        InvolutionKind::I5,
        InvolutionKind::I6,
        InvolutionKind::H,
        InvolutionKind::Neg,
    ];

    pub fn name(self) -> &'static str {
        match self {
            InvolutionKind::I1 => "I1",
            InvolutionKind::I2 => "I2",
            InvolutionKind::I3 => "I3",
            InvolutionKind::I4 => "I4",
            InvolutionKind::I5 => "I5",
            InvolutionKind::I6 => "I6",
            InvolutionKind::H => "H",
            InvolutionKind::Neg => "neg",
        }
    }
}

/// `z ↦ sign·z̄ + t` (reflections) or `z ↦ −z + t` (point involutions).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TorusInvolution {
    pub kind: InvolutionKind,
    pub conjugate: bool,
    pub sign: f64,
    pub t: Complex64,
}

/// A line `{point + s·direction : s ∈ ℝ}` of fixed points.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FixedLine {
    pub point: Complex64,
    pub direction: Complex64,
}

#[derive(Debug, Clone, PartialEq)]
pub enum FixedSet {
    Points(Vec<TorusPoint>),
    Lines(Vec<FixedLine>),
}

impl TorusInvolution {
    pub fn standard(kind: InvolutionKind, lattice: &Lattice) -> Self {
        let (w1, w2) = (lattice.w1, lattice.w2);
        let zero = cz(0.0, 0.0);
        let (conjugate, sign, t) = match kind {
            InvolutionKind::I1 => (true, 1.0, zero),
            InvolutionKind::I2 => (true, -1.0, zero),
            InvolutionKind::I3 => (true, 1.0, w2),
            InvolutionKind::I4 => (true, -1.0, w1),
            InvolutionKind::I5 => (true, 1.0, w1 + w2),
            InvolutionKind::I6 => (true, -1.0, w1 - w2),
            InvolutionKind::H => (false, -1.0, w1 + w2),
            InvolutionKind::Neg => (false, -1.0, zero),
        };
        TorusInvolution { kind, conjugate, sign, t }
    }

    pub fn apply(&self, z: Complex64) -> Complex64 {
        let w = if self.conjugate { z.conj() } else { z };
        self.sign * w + self.t
    }

    /// Whether the map descends to the torus and squares to the identity.
    pub fn is_valid_on(&self, lattice: &Lattice) -> bool {
        let (p1, p2) = lattice.periods();
        let tol = 1e-10 * lattice.scale();
        let descends = [p1, p2].iter().all(|&p| {
            let image = self.apply(p) - self.apply(cz(0.0, 0.0));
            lattice.distance_to_lattice(image) <= tol
        });
        let square = self.apply(self.apply(cz(0.0, 0.0)));
        descends && lattice.distance_to_lattice(square) <= tol
    }

    /// Largest torus distance between `I(I(z))` and `z` over `points`.
    pub fn square_residual(&self, lattice: &Lattice, points: &[Complex64]) -> f64 {
        points
            .iter()
            .map(|&z| lattice.torus_distance(self.apply(self.apply(z)), z))
            .fold(0.0, f64::max)
    }

    pub fn fixed_points(&self, lattice: &Lattice) -> FixedSet {
        let (w1, w2) = (lattice.w1, lattice.w2);
        if !self.conjugate {
            let half = 0.5 * self.t;
            let pts = [cz(0.0, 0.0), w1, w2, w1 + w2]
                .iter()
                .map(|&o| TorusPoint::new(half + o, *lattice))
                .collect();
            return FixedSet::Points(pts);
        }
        let direction = if self.sign > 0.0 { cz(1.0, 0.0) } else { cz(0.0, 1.0) };
        let tol = 1e-10 * lattice.scale();
        let (p1, p2) = lattice.periods();
        let mut lines: Vec<FixedLine> = Vec::new();
        const RANGE: i32 = 4;
        for m in -RANGE..=RANGE {
            for n in -RANGE..=RANGE {
                let lam = m as f64 * p1 + n as f64 * p2;
                let r = self.t - lam;
                let off_axis = (r / direction).re.abs();
                if off_axis > tol {
                    continue;
                }
                let point = 0.5 * r;
                let duplicate = lines.iter().any(|l| same_line(lattice, l, point, direction, tol));
                if !duplicate {
                    lines.push(FixedLine { point, direction });
                }
            }
        }
        for l in &mut lines {
            l.point = canonical_line_point(lattice, l.point, l.direction);
        }
        lines.sort_by(|a, b| a.point.im.total_cmp(&b.point.im).then(a.point.re.total_cmp(&b.point.re)));
        FixedSet::Lines(lines)
    }
}

fn same_line(lattice: &Lattice, l: &FixedLine, p: Complex64, d: Complex64, tol: f64) -> bool {
    let (p1, p2) = lattice.periods();
    for m in -8..=8 {
        for n in -8..=8 {
            let lam = m as f64 * p1 + n as f64 * p2;
            if ((l.point - p - lam) / d).im.abs() <= tol {
                return true;
            }
        }
    }
    false
}

/// Point of the line closest to the origin among its lattice translates.
fn canonical_line_point(lattice: &Lattice, p: Complex64, d: Complex64) -> Complex64 {
    let (p1, p2) = lattice.periods();
    let mut best = p;
    let mut best_off = f64::INFINITY;
    for m in -8..=8 {
        for n in -8..=8 {
            let q = p + m as f64 * p1 + n as f64 * p2;
            let off = (q / d).im;
            if off >= -1e-12 && off < best_off - 1e-12 {
                best_off = off;
                best = d * cz(0.0, off);
            }
        }
    }
    best
}

pub fn fixed_points(inv: &TorusInvolution, lattice: &Lattice) -> FixedSet {
    inv.fixed_points(lattice)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct InducedInvolution {
    pub map: MobiusMap,
    /// Largest chordal residual of `J∘f = f∘I` over the probes.
    pub probe_residual: f64,
    /// Largest chordal residual of `J∘J = id` over random sphere points.
    pub involution_residual: f64,
}

pub const INDUCED_TOL: f64 = 1e-8;

/// Points of the fundamental cell for probing induced maps.
pub fn probe_points(lattice: &Lattice, n: usize, seed: u64) -> Vec<Complex64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..n).map(|_| lattice.point(rng.gen(), rng.gen())).collect()
}

/// Random points of the sphere, biased to cover both hemispheres.
pub fn sphere_points(n: usize, seed: u64) -> Vec<Complex64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..n)
        .map(|_| {
            let r: f64 = (rng.gen::<f64>() * 8.0 - 4.0).exp();
            Complex64::from_polar(r, rng.gen::<f64>() * std::f64::consts::TAU)
        })
        .collect()
}

/// Fit and certify the map `J` with `J∘f = f∘I` on the probe set.
pub fn induced_involution<F: TorusFunction + ?Sized>(
    inv: &TorusInvolution,
    f: &F,
    probes: &[Complex64],
) -> Result<InducedInvolution> {
    if probes.len() < 3 {
        return Err(Error::InvalidInput("at least three probe points required".into()));
    }
    let pairs: Vec<(Complex64, Complex64)> =
        probes.iter().map(|&z| (f.value(z), f.value(inv.apply(z)))).collect();
    let mut best: Option<(f64, [usize; 3])> = None;
    let n = pairs.len();
    for i in 0..n {
        for j in (i + 1)..n {
            for k in (j + 1)..n {
                let idx = [i, j, k];
                let mut sep = f64::INFINITY;
                for (u, v) in [(i, j), (i, k), (j, k)] {
                    sep = sep
                        .min(chordal(pairs[u].0, pairs[v].0))
                        .min(chordal(pairs[u].1, pairs[v].1));
                }
                if best.map_or(true, |(s, _)| sep > s) {
                    best = Some((sep, idx));
                }
            }
        }
    }
    let (_, idx) = best.expect("at least one triple");
    let p = idx.map(|i| pairs[i].0);
    let q = idx.map(|i| pairs[i].1);
    let map = MobiusMap::from_three_points(p, q, inv.conjugate)?;
    let probe_residual = pairs
        .iter()
        .map(|&(w, iw)| chordal(map.apply(w), iw))
        .fold(0.0, f64::max);
    if !(probe_residual <= INDUCED_TOL) {
        return Err(Error::NoInducedInvolution { residual: probe_residual, tolerance: INDUCED_TOL });
    }
    let involution_residual = map.involution_residual(&sphere_points(100, 0x1A7E));
    if !(involution_residual <= INDUCED_TOL) {
        return Err(Error::NoInducedInvolution { residual: involution_residual, tolerance: INDUCED_TOL });
    }
    Ok(InducedInvolution { map, probe_residual, involution_residual })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cx::I;

    #[test]
    fn apply_examples() {
        let z = cz(0.3, -1.2);
        assert_eq!(MobiusMap::identity().apply(z), z);
        assert!((MobiusMap::negative_reciprocal().apply(I) - I).norm() < 1e-15);
        assert!(is_infinite(MobiusMap::negative_reciprocal().apply(cz(0.0, 0.0))));
        assert_eq!(MobiusMap::negative_reciprocal().apply(INFINITY), cz(0.0, 0.0));
        let t = 0.7f64;
        assert!((MobiusMap::rectangular_j4(t).apply(cz(0.0, 0.0)) - t).norm() < 1e-15);
    }

    #[test]
    fn degenerate_map_rejected() {
        let one = cz(1.0, 0.0);
        assert!(MobiusMap::new(one, one, one, one, false).is_err());
    }

    #[test]
    fn compose_and_inverse() {
        let m = MobiusMap::new(cz(1.0, 2.0), cz(0.5, 0.0), cz(-0.3, 0.1), cz(2.0, -1.0), true).unwrap();
        let n = MobiusMap::new(cz(0.2, 0.0), cz(1.0, 1.0), cz(1.0, 0.0), cz(0.0, 3.0), false).unwrap();
        for z in sphere_points(10, 3) {
            let lhs = m.compose(&n).unwrap().apply(z);
            assert!(chordal(lhs, m.apply(n.apply(z))) < 1e-12);
            let id = m.compose(&m.inverse().unwrap()).unwrap();
            assert!(chordal(id.apply(z), z) < 1e-12);
            let id = n.inverse().unwrap().compose(&n).unwrap();
            assert!(chordal(id.apply(z), z) < 1e-12);
        }
        assert!(!m.compose(&m).unwrap().conjugate_first);
        let j4 = MobiusMap::rectangular_j4(0.4);
        assert!(j4.involution_residual(&sphere_points(20, 4)) < 1e-12);
    }

    #[test]
    fn three_point_examples() {
        let zero = cz(0.0, 0.0);
        let m = MobiusMap::from_three_points([zero, INFINITY, I], [INFINITY, zero, I], false).unwrap();
        assert!(m.coefficient_distance(&MobiusMap::negative_reciprocal()) < 1e-14);
        let t = 1.3f64;
        let m = MobiusMap::from_three_points(
            [zero, INFINITY, cz(-1.0 / t, 0.0)],
            [cz(t, 0.0), cz(-1.0 / t, 0.0), INFINITY],
            true,
        )
        .unwrap();
        assert!(m.coefficient_distance(&MobiusMap::rectangular_j4(t)) < 1e-14);
        let one = cz(1.0, 0.0);
        let m = MobiusMap::from_three_points([zero, one, INFINITY], [zero, one, INFINITY], false).unwrap();
        assert!(m.coefficient_distance(&MobiusMap::identity()) < 1e-15);
        assert!(MobiusMap::from_three_points([zero, zero, one], [zero, one, I], false).is_err());
    }

    #[test]
    fn fixed_points_of_point_involutions() {
        let l = Lattice::square();
        match TorusInvolution::standard(InvolutionKind::Neg, &l).fixed_points(&l) {
            FixedSet::Points(p) => {
                let expect = [cz(0.0, 0.0), l.w1, l.w2, l.w1 + l.w2];
                for (a, b) in p.iter().zip(expect) {
                    assert!(l.equivalent(a.z, b));
                }
            }
            _ => panic!("expected points"),
        }
    }

    #[test]
    fn reflection_lines_on_rectangular_torus() {
        let l = Lattice::new(cz(1.0, 0.0), cz(0.0, 2.0)).unwrap();
        match TorusInvolution::standard(InvolutionKind::I1, &l).fixed_points(&l) {
            FixedSet::Lines(lines) => {
                assert_eq!(lines.len(), 2);
                assert!(lines[0].point.norm() < 1e-12);
                assert!((lines[1].point - l.w2).norm() < 1e-12);
            }
            _ => panic!("expected lines"),
        }
        let w1 = Complex64::from_polar(1.0, std::f64::consts::PI / 6.0);
        let rh = Lattice::new(w1, -w1.conj()).unwrap();
        match TorusInvolution::standard(InvolutionKind::I1, &rh).fixed_points(&rh) {
            FixedSet::Lines(lines) => assert_eq!(lines.len(), 1),
            _ => panic!("expected lines"),
        }
    }

    #[test]
    fn validity_by_shape() {
        let rect = Lattice::new(cz(1.0, 0.0), cz(0.0, 2.0)).unwrap();
        let w1 = Complex64::from_polar(1.0, std::f64::consts::PI / 6.0);
        let rh = Lattice::new(w1, -w1.conj()).unwrap();
        use InvolutionKind::*;
        for k in [I1, I2, I3, I4, H, Neg] {
            assert!(TorusInvolution::standard(k, &rect).is_valid_on(&rect), "{k:?}");
        }
        for k in [I1, I2, I5, I6, H, Neg] {
            assert!(TorusInvolution::standard(k, &rh).is_valid_on(&rh), "{k:?}");
        }
        assert!(!TorusInvolution::standard(I3, &rh).is_valid_on(&rh));
    }
}
