//! Small helpers for working on the extended complex plane.
//!
//! Poles are carried as a complex value with an infinite real part. Every
//! evaluator in the crate returns [`INFINITY`] at its poles rather than a
//! large finite number, so callers can test with [`is_infinite`].

use num_complex::Complex64;

pub const INFINITY: Complex64 = Complex64::new(f64::INFINITY, 0.0);

pub const I: Complex64 = Complex64::new(0.0, 1.0);

#[inline]
pub fn is_infinite(z: Complex64) -> bool {
    z.re.is_infinite() || z.im.is_infinite()
}

#[inline]
pub fn cis(t: f64) -> Complex64 {
    Complex64::from_polar(1.0, t)
}

/// Chordal distance on the Riemann sphere, in [0, 2].
pub fn chordal(z: Complex64, w: Complex64) -> f64 {
    match (is_infinite(z), is_infinite(w)) {
        (true, true) => 0.0,
        (true, false) => 2.0 / (1.0 + w.norm_sqr()).sqrt(),
        (false, true) => 2.0 / (1.0 + z.norm_sqr()).sqrt(),
        (false, false) => {
            2.0 * (z - w).norm() / ((1.0 + z.norm_sqr()) * (1.0 + w.norm_sqr())).sqrt()
        }
    }
}

/// Median of the real and imaginary parts taken separately.
pub fn complex_median(values: &[Complex64]) -> Complex64 {
    let mut re: Vec<f64> = values.iter().map(|v| v.re).collect();
    let mut im: Vec<f64> = values.iter().map(|v| v.im).collect();
    Complex64::new(median(&mut re), median(&mut im))
}

pub fn median(values: &mut [f64]) -> f64 {
    assert!(!values.is_empty(), "median of an empty slice");
    values.sort_by(|a, b| a.total_cmp(b));
    let n = values.len();
    if n % 2 == 1 {
        values[n / 2]
    } else {
        0.5 * (values[n / 2 - 1] + values[n / 2])
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn chordal_handles_infinity() {
        assert_eq!(chordal(INFINITY, INFINITY), 0.0);
        assert!((chordal(Complex64::new(0.0, 0.0), INFINITY) - 2.0).abs() < 1e-15);
        assert!((chordal(I, -I) - 2.0).abs() < 1e-15);
    }

    #[test]
    fn median_even_and_odd() {
        assert_eq!(median(&mut [3.0, 1.0, 2.0]), 2.0);
        assert_eq!(median(&mut [4.0, 1.0, 2.0, 3.0]), 2.5);
    }
}
