use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::field::data::{FieldConfig, FieldData};
use crate::minrep::{integrate, period_vector, PathSpec, PeriodVector, WeierstrassData};
use crate::quadrature::{self, DEFAULT_MAX_INTERVALS};

/// Period vectors of small loops around the two ends.
pub fn end_period_closure(data: &FieldData, config: &FieldConfig) -> Result<[PeriodVector; 2]> {
    end_loops(data, config, 0.25)
}

/// As [`end_period_closure`] with loop radius `fraction·|w1|`.
pub fn end_loops(data: &FieldData, config: &FieldConfig, fraction: f64) -> Result<[PeriodVector; 2]> {
    let r = fraction * data.scale();
    let limit = 10.0 * config.quad_tol;
    let mut out = [PeriodVector { p: [0.0; 3], error: 0.0 }; 2];
    for (k, &end) in data.ends().iter().enumerate() {
        let v = period_vector(data, &PathSpec::circle(end, r), config.quad_tol)?;
        if !(v.norm() <= limit) {
            return Err(Error::PeriodProblemFailed(format!(
                "end loop around {end} has period {:?} (limit {limit:e})",
                v.p
            )));
        }
        out[k] = v;
    }
    Ok(out)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TranslationPeriods {
    pub lambda: f64,
    /// Period of the loop in the class of `2w1`.
    pub v1: PeriodVector,
    /// Period of the loop in the class of `2w2`.
    pub v2: PeriodVector,
}

const SYMMETRY_TOL: f64 = 1e-6;

/// `λ = |Re ∫_{A→0→B} φ₁|` and the two translation periods.
pub fn translation_periods(data: &FieldData, config: &FieldConfig) -> Result<TranslationPeriods> {
    let pts = data.points();
    let l = *data.gamma.lattice();
    let zero = Complex64::new(0.0, 0.0);
    let beta = integrate(data, &PathSpec::polyline(&[pts.a, zero, pts.b]), config.quad_tol)?;
    let lambda = beta.value[0].re.abs();
    let v1 = period_vector(data, &PathSpec::closed_polyline(&[zero, l.w1, 2.0 * l.w1]), config.quad_tol)?;
    let v2 = period_vector(data, &PathSpec::closed_polyline(&[zero, l.w2, 2.0 * l.w2]), config.quad_tol)?;
    let (n1, n2) = (v1.norm(), v2.norm());
    if (n1 - n2).abs() > SYMMETRY_TOL * n1.max(n2) {
        return Err(Error::SymmetryViolation(format!("translation periods differ: {n1} vs {n2}")));
    }
    Ok(TranslationPeriods { lambda, v1, v2 })
}

/// `Re ∫ φ` along the straight line `B → E → A′`.
pub fn b_to_a_integral(data: &FieldData, tol: f64) -> Result<[f64; 3]> {
    let pts = data.points();
    let q = integrate(data, &PathSpec::polyline(&[pts.b, pts.e, pts.a_prime]), tol)?;
    Ok(q.value.map(|v| v.re))
}

/// `∫₁^∞ (ct + (ct)⁻¹) dt / (t √(t⁴ − 1))`.
///
/// With `u = 1/t²`, then `u = sin φ` and `φ = ψ²`, the integral becomes
/// `∫₀^{√(π/2)} (c·sin(ψ²)^{−1/2} + sin(ψ²)^{1/2}/c)·ψ dψ`, whose integrand is
/// smooth on the closed interval.
pub fn period_integral_1d(c: f64, tol: f64) -> Result<f64> {
    let upper = std::f64::consts::FRAC_PI_2.sqrt();
    let q = quadrature::integrate(
        |psi: f64| {
            let s = (psi * psi).sin();
            [Complex64::new((c / s.sqrt() + s.sqrt() / c) * psi, 0.0)]
        },
        0.0,
        upper,
        tol,
        DEFAULT_MAX_INTERVALS,
    )?;
    Ok(q.value[0].re)
}
