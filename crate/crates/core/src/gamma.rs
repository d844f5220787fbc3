//! `γ = Q∘℘` on rectangular tori, with `Q(z) = e^{iθ}(i − z)/(i + z)` and
//! `θ = π/2 − α`.

use std::f64::consts::FRAC_PI_2;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::cx::{cis, complex_median, is_infinite, INFINITY, I};
use crate::elliptic::{half_period_values, LatticeSumPolicy, SymmetricWp, TorusFunction};
use crate::error::{Error, Result};
use crate::lattice::Lattice;
use crate::mobius::MobiusMap;

const VALUE_TOL: f64 = 1e-8;
const C0_TOL: f64 = 1e-8;
const C0_SEED: u64 = 0xC0FFEE;

pub fn q_map(theta: f64) -> Result<MobiusMap> {
    if !(theta > 0.0 && theta < FRAC_PI_2) {
        return Err(Error::InvalidParameter(format!("theta = {theta} is outside (0, π/2)")));
    }
    let e = cis(theta);
    MobiusMap::new(-e, I * e, Complex64::new(1.0, 0.0), I, false)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GammaFn {
    pub wp: SymmetricWp,
    pub alpha: f64,
    pub theta: f64,
    pub q: MobiusMap,
    /// Translation between the `γ` chart and the `℘` chart of the `γ²`
    /// identity.
    pub chart_shift: Complex64,
    /// Constant `C` in `γ²(z)·(℘(z+s) − 1/℘(z+s) + tanθ − cotθ) = C`.
    pub c1: Complex64,
}

pub fn build_gamma(wp: SymmetricWp) -> Result<GammaFn> {
    GammaFn::build(wp)
}

impl GammaFn {
    pub fn build(wp: SymmetricWp) -> Result<Self> {
        let hp = half_period_values(&wp);
        let alpha = match hp.alpha {
            Some(a) if !hp.mirrored && a > 0.0 && a < FRAC_PI_2 => a,
            _ => {
                return Err(Error::UnsupportedShape(format!(
                    "γ needs a rectangular torus with ℘(w1) = tan α, α ∈ (0, π/2); got {:?}",
                    hp.shape
                )))
            }
        };
        let theta = FRAC_PI_2 - alpha;
        let q = q_map(theta)?;
        let mut g = GammaFn {
            wp,
            alpha,
            theta,
            q,
            chart_shift: Complex64::new(0.0, 0.0),
            c1: Complex64::new(0.0, 0.0),
        };
        g.certify_values()?;
        g.chart_shift = g.find_chart_shift()?;
        let z = 0.5 * wp.lattice.w1;
        let gz = g.value(z);
        g.c1 = gz * gz * g.identity_denominator(z);
        Ok(g)
    }

    pub fn lattice(&self) -> &Lattice {
        &self.wp.lattice
    }

    /// Special values `(label, point, expected γ)` fixed by the construction.
    pub fn special_values(&self) -> Vec<(&'static str, Complex64, Complex64)> {
        let (w1, w2) = (self.wp.lattice.w1, self.wp.lattice.w2);
        let e = cis(self.theta);
        vec![
            ("gamma(0)", Complex64::new(0.0, 0.0), e),
            ("gamma(w1+w2)", w1 + w2, -e),
            ("gamma((w1+w2)/2)", 0.5 * (w1 + w2), Complex64::new(0.0, 0.0)),
            ("gamma((w1-w2)/2)", 0.5 * (w1 - w2), INFINITY),
            ("gamma((w2-w1)/2)", 0.5 * (w2 - w1), INFINITY),
            ("gamma(w1)", w1, -e.conj()),
            ("gamma(w2)", w2, e.conj()),
            ("gamma(w1/2)", 0.5 * w1, I),
            ("gamma(w2/2)", 0.5 * w2, Complex64::new(1.0, 0.0)),
        ]
    }

    fn certify_values(&self) -> Result<()> {
        for (label, z, expect) in self.special_values() {
            let err = crate::cx::chordal(self.value(z), expect);
            if !(err <= VALUE_TOL) {
                return Err(Error::Inconsistency(format!(
                    "{label} = {} differs from {expect} (chordal {err:e})",
                    self.value(z)
                )));
            }
        }
        Ok(())
    }

    pub fn value(&self, z: Complex64) -> Complex64 {
        self.q.apply(self.wp.value(z))
    }

    /// `1/γ = e^{−iθ}(i + ℘)/(i − ℘)`, evaluated without forming `γ`.
    pub fn reciprocal(&self, z: Complex64) -> Complex64 {
        let w = self.wp.value(z);
        let e = cis(-self.theta);
        if is_infinite(w) {
            return -e;
        }
        let den = I - w;
        if den.norm() == 0.0 {
            return INFINITY;
        }
        e * (I + w) / den
    }

    /// `(1/γ)′ = 2i·e^{−iθ}℘′/(i − ℘)²`, regular at the poles of `γ`.
    pub fn reciprocal_derivative(&self, z: Complex64) -> Complex64 {
        let w = self.wp.value(z);
        if is_infinite(w) {
            return Complex64::new(0.0, 0.0);
        }
        let den = I - w;
        if den.norm() < 1e-14 {
            return INFINITY;
        }
        2.0 * I * cis(-self.theta) * self.wp.derivative(z) / (den * den)
    }

    pub fn derivative(&self, z: Complex64) -> Complex64 {
        let w = self.wp.value(z);
        if is_infinite(w) {
            return Complex64::new(0.0, 0.0);
        }
        let den = I + w;
        if den.norm() < 1e-14 {
            return INFINITY;
        }
        -2.0 * I * cis(self.theta) * self.wp.derivative(z) / (den * den)
    }

    /// `γ″`, used for the line-type and curvature formulas.
    pub fn second_derivative(&self, z: Complex64) -> Complex64 {
        let w = self.wp.value(z);
        if is_infinite(w) {
            return Complex64::new(0.0, 0.0);
        }
        let den = I + w;
        let dw = self.wp.derivative(z);
        let ddw = self.wp.second_derivative(z);
        let k = -2.0 * I * cis(self.theta);
        k * (ddw / (den * den) - 2.0 * dw * dw / (den * den * den))
    }

    /// Pointwise `(γ′/γ)² / (γ² + γ⁻² − 2cos2θ)`.
    pub fn c0_ratio(&self, z: Complex64) -> Complex64 {
        let g = self.value(z);
        let lhs = self.derivative(z) / g;
        lhs * lhs / (g * g + 1.0 / (g * g) - 2.0 * (2.0 * self.theta).cos())
    }

    /// Points of the cell with `|γ| ∈ (0.2, 5)`, away from branch values.
    pub fn regular_samples(&self, n: usize, seed: u64) -> Vec<Complex64> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let branch = [cis(self.theta), -cis(self.theta), cis(-self.theta), -cis(-self.theta)];
        let mut out = Vec::with_capacity(n);
        let mut guard = 0;
        while out.len() < n && guard < 200 * n {
            guard += 1;
            let z = self.wp.lattice.point(rng.gen(), rng.gen());
            let g = self.value(z);
            let m = g.norm();
            if m > 0.2 && m < 5.0 && branch.iter().all(|b| (g - b).norm() > 0.05) {
                out.push(z);
            }
        }
        out
    }

    /// Median of [`GammaFn::c0_ratio`] over 100 regular points.
    pub fn measured_c0(&self) -> Complex64 {
        let ratios: Vec<Complex64> =
            self.regular_samples(100, C0_SEED).iter().map(|&z| self.c0_ratio(z)).collect();
        complex_median(&ratios)
    }

    /// Residual of `(γ′/γ)² = c0(γ² + γ⁻² − 2cos2θ)` at `z`, divided by
    /// `1 + |γ′/γ|²`.
    pub fn algebraic_residual(&self, z: Complex64, c0: f64) -> f64 {
        let g = self.value(z);
        let lhs = self.derivative(z) / g;
        let lhs = lhs * lhs;
        let rhs = c0 * (g * g + 1.0 / (g * g) - 2.0 * (2.0 * self.theta).cos());
        (lhs - rhs).norm() / (1.0 + lhs.norm())
    }

    /// Scale the lattice by `sqrt(c0)` so the algebraic equation holds with
    /// `c0 = 1`.
    pub fn rescale_for_unit_c0(&self) -> Result<GammaFn> {
        let c0 = self.measured_c0();
        if !(c0.re > 0.0) || c0.im.abs() > C0_TOL * c0.norm() {
            return Err(Error::Inconsistency(format!("measured c0 = {c0} is not real positive")));
        }
        let s = c0.re.sqrt();
        let lattice = self.wp.lattice.scaled(Complex64::new(s, 0.0));
        let wp = SymmetricWp::build(lattice, self.wp.policy)?;
        let g = GammaFn::build(wp)?;
        let after = g.measured_c0();
        if (after - 1.0).norm() > C0_TOL {
            return Err(Error::Inconsistency(format!("c0 after rescale is {after}")));
        }
        Ok(g)
    }

    /// `℘(z+s) − 1/℘(z+s) + tanθ − cotθ` with `s` the chart shift.
    pub fn identity_denominator(&self, z: Complex64) -> Complex64 {
        let w = self.wp.value(z + self.chart_shift);
        if is_infinite(w) {
            return INFINITY;
        }
        w - 1.0 / w + self.theta.tan() - 1.0 / self.theta.tan()
    }

    /// `cot α + tan α`, the constant as read off at `℘ = tan(α/2)`.
    pub fn stated_c1(&self) -> f64 {
        1.0 / self.alpha.tan() + self.alpha.tan()
    }

    /// Relative residual of the `γ²` identity at `z`.
    pub fn gamma_sq_residual(&self, z: Complex64) -> f64 {
        let g = self.value(z);
        (g * g * self.identity_denominator(z) - self.c1).norm() / self.c1.norm()
    }

    /// Shift matching the zeros and poles of `γ²` with the poles and zeros
    /// of `1/(℘(z+s) − 1/℘(z+s) + tanθ − cotθ)`, among half-lattice points.
    fn find_chart_shift(&self) -> Result<Complex64> {
        let (w1, w2) = (self.wp.lattice.w1, self.wp.lattice.w2);
        let zero = 0.5 * (w1 + w2);
        let poles = [0.5 * (w1 - w2), 0.5 * (w2 - w1)];
        let den = |z: Complex64| {
            let w = self.wp.value(z);
            if is_infinite(w) {
                return INFINITY;
            }
            w - 1.0 / w + self.theta.tan() - 1.0 / self.theta.tan()
        };
        for k1 in 0..4 {
            for k2 in 0..4 {
                let s = 0.5 * (k1 as f64 * w1 + k2 as f64 * w2);
                let at_zero = den(zero + s);
                let zero_ok = is_infinite(at_zero) || at_zero.norm() > 1e8;
                let poles_ok = poles.iter().all(|&p| den(p + s).norm() < 1e-8);
                if zero_ok && poles_ok {
                    return Ok(s);
                }
            }
        }
        Err(Error::Inconsistency("no half-lattice shift matches the γ² zero and pole sets".into()))
    }

    pub fn gamma_sq_identity_residual(&self, samples: &[Complex64]) -> f64 {
        samples.iter().map(|&z| self.gamma_sq_residual(z)).fold(0.0, f64::max)
    }
}

/// Rectangular lattice `(1, i·k)` whose symmetric `℘` has `℘(w1) = tan α`,
/// found by bisection on `k`.
pub fn rectangular_lattice_for_alpha(alpha: f64, policy: LatticeSumPolicy) -> Result<Lattice> {
    if !(alpha > 0.05 && alpha < FRAC_PI_2 - 0.05) {
        return Err(Error::InvalidParameter(format!("alpha = {alpha} out of the supported range")));
    }
    let alpha_of = |k: f64| -> Result<f64> {
        let l = Lattice::new(Complex64::new(1.0, 0.0), Complex64::new(0.0, k))?;
        let wp = SymmetricWp::build(l, policy)?;
        Ok(wp.x.re.atan())
    };
    let (mut lo, mut hi) = (0.1f64, 10.0f64);
    for _ in 0..200 {
        let mid = (lo * hi).sqrt();
        if alpha_of(mid)? > alpha {
            lo = mid;
        } else {
            hi = mid;
        }
        if hi / lo - 1.0 < 1e-15 {
            break;
        }
    }
    Lattice::new(Complex64::new(1.0, 0.0), Complex64::new(0.0, (lo * hi).sqrt()))
}

impl TorusFunction for GammaFn {
    fn value(&self, z: Complex64) -> Complex64 {
        GammaFn::value(self, z)
    }
    fn derivative(&self, z: Complex64) -> Complex64 {
        GammaFn::derivative(self, z)
    }
    fn lattice(&self) -> &Lattice {
        &self.wp.lattice
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn square() -> GammaFn {
        GammaFn::build(SymmetricWp::build(Lattice::square(), LatticeSumPolicy::default()).unwrap()).unwrap()
    }

    #[test]
    fn q_examples() {
        let alpha = 0.6f64;
        let theta = FRAC_PI_2 - alpha;
        let q = q_map(theta).unwrap();
        assert!(q.apply(I).norm() < 1e-15);
        assert!(is_infinite(q.apply(-I)));
        assert!((q.apply(Complex64::new(0.0, 0.0)) - cis(theta)).norm() < 1e-15);
        assert!((q.apply(alpha.tan().into()) + cis(-theta)).norm() < 1e-14);
        assert!((q.apply((alpha / 2.0).tan().into()) - I).norm() < 1e-14);
        assert!(q_map(0.0).is_err());
        assert!(q_map(2.0).is_err());
    }

    #[test]
    fn square_theta_and_c0() {
        let g = square();
        assert!((g.theta - std::f64::consts::FRAC_PI_4).abs() < 1e-10);
        assert_eq!(g.alpha + g.theta, FRAC_PI_2);
        let c0 = g.measured_c0();
        assert!((c0 - Complex64::new(3.437_592_909_01, 0.0)).norm() < 1e-8, "{c0}");
    }

    #[test]
    fn rescale_is_idempotent() {
        let g = square().rescale_for_unit_c0().unwrap();
        assert!((g.measured_c0() - 1.0).norm() < 1e-8);
        let h = g.rescale_for_unit_c0().unwrap();
        assert!((h.wp.lattice.w1 - g.wp.lattice.w1).norm() < 1e-8);
    }

    #[test]
    fn gamma_sq_constant_sign() {
        let g = square();
        assert!((g.c1 + g.stated_c1()).norm() < 1e-8, "{}", g.c1);
        let a = g.alpha;
        let den = (a / 2.0).tan() - 1.0 / (a / 2.0).tan() + g.theta.tan() - 1.0 / g.theta.tan();
        assert!((g.stated_c1() / den + 1.0).abs() < 1e-12);
    }

    #[test]
    fn reciprocal_derivative_matches_differences() {
        let g = square();
        let z = Complex64::new(0.23, -0.61);
        let h = 1e-5;
        let fd = (g.reciprocal(z + h) - g.reciprocal(z - h)) / (2.0 * h);
        assert!((fd - g.reciprocal_derivative(z)).norm() < 1e-7 * (1.0 + fd.norm()));
        let fd = (g.value(z + h) - g.value(z - h)) / (2.0 * h);
        assert!((fd - g.derivative(z)).norm() < 1e-7 * (1.0 + fd.norm()));
    }

    #[test]
    fn lattice_for_alpha() {
        let a = std::f64::consts::PI / 3.0;
        let l = rectangular_lattice_for_alpha(a, LatticeSumPolicy::default()).unwrap();
        let g = GammaFn::build(SymmetricWp::build(l, LatticeSumPolicy::default()).unwrap()).unwrap();
        assert!((g.alpha - a).abs() < 1e-10);
    }

    #[test]
    fn non_rectangular_rejected() {
        let w1 = Complex64::from_polar(1.0, std::f64::consts::PI / 6.0);
        let l = Lattice::new(w1, -w1.conj()).unwrap();
        let wp = SymmetricWp::build(l, LatticeSumPolicy::default()).unwrap();
        assert!(matches!(GammaFn::build(wp), Err(Error::UnsupportedShape(_))));
    }
}
