use std::f64::consts::FRAC_PI_4;

use num_complex::Complex64;

use crate::cx::{cis, is_infinite, INFINITY};
use crate::elliptic::{count_degree, LatticeSumPolicy, SymmetricWp, TorusFunction};
use crate::error::{Error, Result};
use crate::exec::Execution;
use crate::gamma::GammaFn;
use crate::lattice::Lattice;
use crate::minrep::{Catenoid, WeierstrassData};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FieldConfig {
    pub c: f64,
    pub mesh_nu: usize,
    pub mesh_nv: usize,
    pub end_cutoff: f64,
    pub copies: (usize, usize),
    pub quad_tol: f64,
}

impl Default for FieldConfig {
    fn default() -> Self {
        FieldConfig { c: 1.0, mesh_nu: 64, mesh_nv: 64, end_cutoff: 50.0, copies: (1, 1), quad_tol: 1e-10 }
    }
}

impl FieldConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.c > 0.0 && self.c.is_finite()) {
            return Err(Error::InvalidParameter(format!("c = {} must be positive", self.c)));
        }
        if !(self.end_cutoff > 1.0 && self.end_cutoff.is_finite()) {
            return Err(Error::InvalidParameter(format!("end_cutoff = {} must exceed 1", self.end_cutoff)));
        }
        if self.mesh_nu < 8 || self.mesh_nv < 8 {
            return Err(Error::InvalidParameter("mesh resolution must be at least 8".into()));
        }
        if !(self.quad_tol > 0.0 && self.quad_tol.is_finite()) {
            return Err(Error::InvalidParameter("quad_tol must be positive".into()));
        }
        Ok(())
    }
}

/// Named points of the square torus with half-periods `w1 = s`, `w2 = is`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FieldPoints {
    /// Top end, `(w1+w2)/2`.
    pub tc: Complex64,
    /// Bottom end, `−(w1+w2)/2`.
    pub bc: Complex64,
    /// `(w1−w2)/2`, a pole of `γ`.
    pub a: Complex64,
    /// `(w1+3w2)/2`, the representative of `A` bounding the region `R`.
    pub a_prime: Complex64,
    /// `(w2−w1)/2`, the other pole of `γ`.
    pub b: Complex64,
    /// `w2`, where `γ = e^{−iπ/4}`.
    pub e: Complex64,
}

impl FieldPoints {
    pub fn of(lattice: &Lattice) -> Self {
        let (w1, w2) = (lattice.w1, lattice.w2);
        FieldPoints {
            tc: 0.5 * (w1 + w2),
            bc: -0.5 * (w1 + w2),
            a: 0.5 * (w1 - w2),
            a_prime: 0.5 * (w1 + 3.0 * w2),
            b: 0.5 * (w2 - w1),
            e: w2,
        }
    }
}

/// Weierstrass data `g = c·e^{iπ/4}·γ`, `dh = dγ/(γγ′) = dz/γ` on the
/// square torus scaled so that `(γ′/γ)² = γ² + γ⁻²`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FieldData {
    pub gamma: GammaFn,
    pub c: f64,
    ends: [Complex64; 2],
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SquareTorusReport {
    pub alpha: f64,
    /// Largest `|Re q|/|q|` of `q = (γ′/γ)²` along the diagonal.
    pub diagonal_real_part: f64,
    /// Smallest `Im q/|q|` along the diagonal.
    pub diagonal_min_imag: f64,
    /// Largest deviation of `arg γ` from `π/4` along the diagonal.
    pub diagonal_arg_error: f64,
}

const SQUARE_TOL: f64 = 1e-8;

/// Certify that `(γ′/γ)²` is in `iℝ₊` along the diagonal `0 → (w2−w1)/2`,
/// which holds only for `α = π/4`.
pub fn verify_square_torus(gamma: &GammaFn) -> Result<SquareTorusReport> {
    let l = gamma.lattice();
    let end = 0.5 * (l.w2 - l.w1);
    let mut report = SquareTorusReport {
        alpha: gamma.alpha,
        diagonal_real_part: 0.0,
        diagonal_min_imag: f64::INFINITY,
        diagonal_arg_error: 0.0,
    };
    for k in 1..64 {
        let z = end * (k as f64 / 64.0);
        let g = gamma.value(z);
        let q = gamma.derivative(z) / g;
        let q = q * q;
        report.diagonal_real_part = report.diagonal_real_part.max(q.re.abs() / q.norm());
        report.diagonal_min_imag = report.diagonal_min_imag.min(q.im / q.norm());
        report.diagonal_arg_error = report.diagonal_arg_error.max((g.arg() - FRAC_PI_4).abs());
    }
    let ok = report.diagonal_real_part <= SQUARE_TOL
        && report.diagonal_min_imag > 0.0
        && (gamma.alpha - FRAC_PI_4).abs() <= SQUARE_TOL;
    if ok {
        Ok(report)
    } else {
        Err(Error::NotSquare { alpha: gamma.alpha })
    }
}

pub fn build_field_data(config: &FieldConfig) -> Result<FieldData> {
    config.validate()?;
    let wp = SymmetricWp::build(Lattice::square(), LatticeSumPolicy::default())?;
    let gamma = GammaFn::build(wp)?;
    FieldData::new(gamma, config.c)
}

impl FieldData {
    /// Build from any `γ`; fails unless the torus is square. The lattice is
    /// rescaled to `c0 = 1` when needed.
    pub fn new(gamma: GammaFn, c: f64) -> Result<Self> {
        if !(c > 0.0 && c.is_finite()) {
            return Err(Error::InvalidParameter(format!("c = {c} must be positive")));
        }
        verify_square_torus(&gamma)
            .map_err(|e| Error::ConstructionPrecondition(format!("the torus must be square: {e}")))?;
        let gamma = if (gamma.measured_c0() - 1.0).norm() > 1e-8 {
            gamma.rescale_for_unit_c0()?
        } else {
            gamma
        };
        let p = FieldPoints::of(gamma.lattice());
        Ok(FieldData { gamma, c, ends: [p.tc, p.bc] })
    }

    pub fn points(&self) -> FieldPoints {
        FieldPoints::of(self.gamma.lattice())
    }

    pub fn scale(&self) -> f64 {
        self.gamma.lattice().w1.norm()
    }

    fn k(&self) -> Complex64 {
        self.c * cis(FRAC_PI_4)
    }

    pub fn gauss_fn(&self) -> GaussFn<'_> {
        GaussFn(self)
    }

    /// Counts `(zeros, poles)` of `dh` on the torus.
    pub fn dh_divisor(&self, exec: Execution) -> Result<(usize, usize)> {
        let zeros = count_degree(&Reciprocal(&self.gamma), Complex64::new(0.0, 0.0), 12, exec)?;
        let poles = count_degree(&self.gamma, Complex64::new(0.0, 0.0), 12, exec)?;
        Ok((zeros, poles))
    }
}

impl WeierstrassData for FieldData {
    fn g(&self, z: Complex64) -> Complex64 {
        let g = self.gamma.value(z);
        if is_infinite(g) {
            INFINITY
        } else {
            self.k() * g
        }
    }

    fn g_prime(&self, z: Complex64) -> Complex64 {
        let d = self.gamma.derivative(z);
        if is_infinite(d) {
            INFINITY
        } else {
            self.k() * d
        }
    }

    fn dh(&self, z: Complex64) -> Complex64 {
        self.gamma.reciprocal(z)
    }

    fn ends(&self) -> &[Complex64] {
        &self.ends
    }

    fn lattice(&self) -> Option<&Lattice> {
        Some(self.gamma.lattice())
    }

    fn g_dh(&self, _z: Complex64) -> Complex64 {
        self.k()
    }

    fn dh_over_g(&self, z: Complex64) -> Complex64 {
        let r = self.gamma.reciprocal(z);
        r * r / self.k()
    }

    fn log_dg_dh(&self, z: Complex64) -> Complex64 {
        -self.gamma.reciprocal_derivative(z)
    }

    fn spherical_derivative(&self, z: Complex64) -> f64 {
        let g = self.g(z);
        if is_infinite(g) || g.norm() > 1.0 {
            let h = self.gamma.reciprocal(z) / self.k();
            let dh = self.gamma.reciprocal_derivative(z) / self.k();
            dh.norm() / (1.0 + h.norm_sqr())
        } else {
            self.g_prime(z).norm() / (1.0 + g.norm_sqr())
        }
    }
}

/// The Gauss-map projection `g` as a torus function.
#[derive(Debug, Clone, Copy)]
pub struct GaussFn<'a>(pub &'a FieldData);

impl TorusFunction for GaussFn<'_> {
    fn value(&self, z: Complex64) -> Complex64 {
        self.0.g(z)
    }
    fn derivative(&self, z: Complex64) -> Complex64 {
        self.0.g_prime(z)
    }
    fn lattice(&self) -> &Lattice {
        self.0.gamma.lattice()
    }
}

struct Reciprocal<'a>(&'a GammaFn);

impl TorusFunction for Reciprocal<'_> {
    fn value(&self, z: Complex64) -> Complex64 {
        self.0.reciprocal(z)
    }
    fn derivative(&self, z: Complex64) -> Complex64 {
        self.0.reciprocal_derivative(z)
    }
    fn lattice(&self) -> &Lattice {
        self.0.lattice()
    }
}

/// The catenoid `g = z`, `dh = dz/z`.
pub fn catenoid_reference() -> Catenoid {
    Catenoid
}
