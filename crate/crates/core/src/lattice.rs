//! Lattices, torus points and shape classification.
//!
//! A [`Lattice`] stores the half-generators `w1`, `w2`; the period lattice is
//! `2w1·ℤ + 2w2·ℤ` and every evaluator built on it is periodic under `2w1`
//! and `2w2`.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

const SHAPE_TOL: f64 = 1e-9;
const EQUIV_TOL: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Lattice {
    pub w1: Complex64,
    pub w2: Complex64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum TorusShape {
    Square,
    Rectangular,
    Rhombic,
    Generic,
}

impl TorusShape {
    pub fn is_rectangular(self) -> bool {
        matches!(self, TorusShape::Square | TorusShape::Rectangular)
    }

    pub fn is_rhombic(self) -> bool {
        matches!(self, TorusShape::Square | TorusShape::Rhombic)
    }
}

/// Result of [`Lattice::classify`]. `normalizer` is the factor `a` of the
/// similarity `z ↦ a·z` that brings the lattice to its normal form
/// (`w1 > 0`, `w2 ∈ iℝ` for rectangular; `w2 = −conj(w1)` for rhombic).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Classification {
    pub shape: TorusShape,
    pub tau: Complex64,
    pub normalizer: Complex64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TorusPoint {
    pub z: Complex64,
    pub lattice: Lattice,
}

impl TorusPoint {
    pub fn new(z: Complex64, lattice: Lattice) -> Self {
        TorusPoint { z, lattice }
    }
}

impl Lattice {
    pub fn new(w1: Complex64, w2: Complex64) -> Result<Self> {
        let lattice = Lattice { w1, w2 };
        lattice.validate()?;
        Ok(lattice)
    }

    pub fn square() -> Self {
        Lattice { w1: Complex64::new(1.0, 0.0), w2: Complex64::new(0.0, 1.0) }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.w1.is_finite() && self.w2.is_finite()) {
            return Err(Error::InvalidLattice("generators must be finite".into()));
        }
        if self.w1.norm() == 0.0 || self.w2.norm() == 0.0 {
            return Err(Error::InvalidLattice("generators must be nonzero".into()));
        }
        let tau = self.w2 / self.w1;
        if tau.im.abs() <= 1e-12 * tau.norm() {
            return Err(Error::InvalidLattice(format!(
                "w1 = {}, w2 = {} are linearly dependent over the reals",
                self.w1, self.w2
            )));
        }
        Ok(())
    }

    pub fn periods(&self) -> (Complex64, Complex64) {
        (2.0 * self.w1, 2.0 * self.w2)
    }

    pub fn scale(&self) -> f64 {
        (2.0 * self.w1).norm().max((2.0 * self.w2).norm())
    }

    pub fn scaled(&self, a: Complex64) -> Lattice {
        Lattice { w1: a * self.w1, w2: a * self.w2 }
    }

    /// Point with lattice coordinates `(s, t)`, i.e. `s·2w1 + t·2w2`.
    pub fn point(&self, s: f64, t: f64) -> Complex64 {
        2.0 * (s * self.w1 + t * self.w2)
    }

    /// Real coordinates `(s, t)` with `z = s·2w1 + t·2w2`.
    pub fn coords(&self, z: Complex64) -> (f64, f64) {
        coords_in(2.0 * self.w1, 2.0 * self.w2, z)
    }

    /// Canonical representative in the half-open cell `[0,1)²` of lattice
    /// coordinates.
    pub fn reduce(&self, z: Complex64) -> Complex64 {
        let (s, t) = self.coords(z);
        self.point(frac(s), frac(t))
    }

    pub fn reduce_point(&self, z: Complex64) -> TorusPoint {
        TorusPoint::new(self.reduce(z), *self)
    }

    /// Representative in the centered cell `[-1/2,1/2)²`.
    pub fn reduce_centered(&self, z: Complex64) -> Complex64 {
        let (s, t) = self.coords(z);
        self.point(centered(s), centered(t))
    }

    /// Lagrange–Gauss reduced basis `(W1, W2)` of the period lattice, with
    /// `|W1| ≤ |W2|`, `|Re(W2/W1)| ≤ 1/2` and `Im(W2/W1) > 0`.
    pub fn reduced_basis(&self) -> (Complex64, Complex64) {
        let (mut a, mut b) = self.periods();
        for _ in 0..200 {
            if b.norm_sqr() < a.norm_sqr() {
                std::mem::swap(&mut a, &mut b);
            }
            let mu = (b / a).re.round();
            if mu == 0.0 {
                break;
            }
            b -= mu * a;
        }
        if (b / a).im < 0.0 {
            b = -b;
        }
        (a, b)
    }

    /// Distance from `z` to the nearest period.
    pub fn distance_to_lattice(&self, z: Complex64) -> f64 {
        let (a, b) = self.reduced_basis();
        let (s, t) = coords_in(a, b, z);
        let (s0, t0) = (s.round(), t.round());
        let mut best = f64::INFINITY;
        for i in -1..=1 {
            for j in -1..=1 {
                let w = (s0 + i as f64) * a + (t0 + j as f64) * b;
                best = best.min((z - w).norm());
            }
        }
        best
    }

    /// Distance between the classes of `z` and `zeta` on the torus.
    pub fn torus_distance(&self, z: Complex64, zeta: Complex64) -> f64 {
        self.distance_to_lattice(z - zeta)
    }

    pub fn equivalent(&self, z: Complex64, zeta: Complex64) -> bool {
        self.torus_distance(z, zeta) <= EQUIV_TOL * self.scale()
    }

    pub fn classify(&self) -> Classification {
        let tau = self.w2 / self.w1;
        let rectangular = tau.re.abs() <= SHAPE_TOL * tau.norm();
        let rhombic = (tau.norm() - 1.0).abs() <= SHAPE_TOL;
        let unit = |w: Complex64| Complex64::new(w.norm(), 0.0) / w;
        let (shape, normalizer) = match (rectangular, rhombic) {
            (true, true) => (TorusShape::Square, unit(self.w1)),
            (true, false) => (TorusShape::Rectangular, unit(self.w1)),
            (false, true) => {
                let phi = 0.5 * (std::f64::consts::PI - tau.arg());
                (TorusShape::Rhombic, unit(self.w1) * Complex64::from_polar(1.0, phi))
            }
            (false, false) => (TorusShape::Generic, unit(self.w1)),
        };
        Classification { shape, tau, normalizer }
    }
}

pub fn equivalent(z: Complex64, zeta: Complex64, lattice: &Lattice) -> bool {
    lattice.equivalent(z, zeta)
}

pub fn reduce(z: Complex64, lattice: &Lattice) -> Result<TorusPoint> {
    lattice.validate()?;
    Ok(lattice.reduce_point(z))
}

pub fn classify(lattice: &Lattice) -> Result<Classification> {
    lattice.validate()?;
    Ok(lattice.classify())
}

fn coords_in(a: Complex64, b: Complex64, z: Complex64) -> (f64, f64) {
    let det = a.re * b.im - a.im * b.re;
    let s = (z.re * b.im - z.im * b.re) / det;
    let t = (a.re * z.im - a.im * z.re) / det;
    (s, t)
}

fn frac(s: f64) -> f64 {
    let f = s - s.floor();
    if f >= 1.0 - 1e-13 || f < 1e-13 {
        0.0
    } else {
        f
    }
}

fn centered(s: f64) -> f64 {
    let f = frac(s + 0.5) - 0.5;
    if f.abs() < 1e-13 {
        0.0
    } else {
        f
    }
}
