//! Weierstrass representation of minimal surfaces: forms, path integrals,
//! periods, Gauss map, metric, curvature and line types.

use std::f64::consts::TAU;

use num_complex::Complex64;

use crate::cx::{is_infinite, I};
use crate::error::{Error, Result};
use crate::lattice::Lattice;
use crate::quadrature::{self, Quadrature, DEFAULT_MAX_INTERVALS};

/// Weierstrass data `(g, dh)` with `dh = dh(z)·dz` in a flat chart.
///
/// The product methods have defaults in terms of `g` and `dh`; data whose
/// `g` has poles at zeros of `dh` override them with regular expressions.
pub trait WeierstrassData: Sync {
    fn g(&self, z: Complex64) -> Complex64;
    fn g_prime(&self, z: Complex64) -> Complex64;
    fn dh(&self, z: Complex64) -> Complex64;
    /// Finite punctures, in the chart.
    fn ends(&self) -> &[Complex64];
    fn lattice(&self) -> Option<&Lattice>;

    fn g_dh(&self, z: Complex64) -> Complex64 {
        self.g(z) * self.dh(z)
    }

    fn dh_over_g(&self, z: Complex64) -> Complex64 {
        self.dh(z) / self.g(z)
    }

    /// `(g′/g)·dh`, the coefficient of the line-type quadratic form.
    fn log_dg_dh(&self, z: Complex64) -> Complex64 {
        self.g_prime(z) / self.g(z) * self.dh(z)
    }

    /// `|g′|/(1 + |g|²)`.
    fn spherical_derivative(&self, z: Complex64) -> f64 {
        let g = self.g(z);
        if g.norm() > 1.0 {
            let h = 1.0 / g;
            let dh = -self.g_prime(z) * h * h;
            dh.norm() / (1.0 + h.norm_sqr())
        } else {
            self.g_prime(z).norm() / (1.0 + g.norm_sqr())
        }
    }

    /// Smallest allowed distance between a path and an end.
    fn end_guard(&self) -> f64 {
        self.lattice().map_or(1e-3, |l| 1e-3 * (2.0 * l.w1).norm())
    }
}

/// `φ = ½(dh/g − g·dh, i(dh/g + g·dh), 2dh)`.
pub fn forms<D: WeierstrassData + ?Sized>(data: &D, z: Complex64) -> [Complex64; 3] {
    let p = data.g_dh(z);
    let q = data.dh_over_g(z);
    [0.5 * (q - p), 0.5 * I * (q + p), data.dh(z)]
}

/// `|φ₁² + φ₂² + φ₃²| / (|φ₁|² + |φ₂|² + |φ₃|²)`.
pub fn conformality_residual(phi: &[Complex64; 3]) -> f64 {
    let s = phi[0] * phi[0] + phi[1] * phi[1] + phi[2] * phi[2];
    let n: f64 = phi.iter().map(|p| p.norm_sqr()).sum();
    s.norm() / n
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Segment {
    Line { from: Complex64, to: Complex64 },
    Arc { center: Complex64, radius: f64, start: f64, sweep: f64 },
}

impl Segment {
    pub fn point(&self, t: f64) -> Complex64 {
        match *self {
            Segment::Line { from, to } => from + t * (to - from),
            Segment::Arc { center, radius, start, sweep } => {
                center + Complex64::from_polar(radius, start + t * sweep)
            }
        }
    }

    pub fn velocity(&self, t: f64) -> Complex64 {
        match *self {
            Segment::Line { from, to } => to - from,
            Segment::Arc { radius, start, sweep, .. } => {
                I * sweep * Complex64::from_polar(radius, start + t * sweep)
            }
        }
    }

    fn distance_to(&self, p: Complex64) -> f64 {
        match *self {
            Segment::Line { from, to } => {
                let d = to - from;
                let l2 = d.norm_sqr();
                let t = if l2 == 0.0 { 0.0 } else { ((p - from) * d.conj()).re / l2 };
                (p - self.point(t.clamp(0.0, 1.0))).norm()
            }
            Segment::Arc { .. } => (0..=512)
                .map(|k| (self.point(k as f64 / 512.0) - p).norm())
                .fold(f64::INFINITY, f64::min),
        }
    }
}

/// A piecewise path in the chart; waypoints act as the homotopy hint.
#[derive(Debug, Clone, PartialEq)]
pub struct PathSpec {
    pub segments: Vec<Segment>,
    pub closed: bool,
}

impl PathSpec {
    pub fn polyline(points: &[Complex64]) -> Self {
        let segments = points.windows(2).map(|w| Segment::Line { from: w[0], to: w[1] }).collect();
        PathSpec { segments, closed: false }
    }

    pub fn closed_polyline(points: &[Complex64]) -> Self {
        let mut p = PathSpec::polyline(points);
        p.closed = true;
        p
    }

    pub fn circle(center: Complex64, radius: f64) -> Self {
        PathSpec { segments: vec![Segment::Arc { center, radius, start: 0.0, sweep: TAU }], closed: true }
    }

    pub fn start(&self) -> Complex64 {
        self.segments.first().map_or(Complex64::new(0.0, 0.0), |s| s.point(0.0))
    }

    pub fn end(&self) -> Complex64 {
        self.segments.last().map_or(Complex64::new(0.0, 0.0), |s| s.point(1.0))
    }

    pub fn reversed(&self) -> Self {
        let segments = self
            .segments
            .iter()
            .rev()
            .map(|s| match *s {
                Segment::Line { from, to } => Segment::Line { from: to, to: from },
                Segment::Arc { center, radius, start, sweep } => {
                    Segment::Arc { center, radius, start: start + sweep, sweep: -sweep }
                }
            })
            .collect();
        PathSpec { segments, closed: self.closed }
    }

    /// `n` evenly spaced parameter samples over all segments, as
    /// `(z, dz/dt)` pairs, interior to each segment.
    pub fn samples(&self, n: usize) -> Vec<(Complex64, Complex64)> {
        let per = (n / self.segments.len().max(1)).max(1);
        let mut out = Vec::new();
        for s in &self.segments {
            for k in 0..per {
                let t = (k as f64 + 0.5) / per as f64;
                out.push((s.point(t), s.velocity(t)));
            }
        }
        out
    }
}

fn check_guard<D: WeierstrassData + ?Sized>(data: &D, path: &PathSpec) -> Result<()> {
    let minimum = data.end_guard();
    let translates: Vec<Complex64> = match data.lattice() {
        Some(l) => {
            let (p1, p2) = l.periods();
            let mut v = Vec::new();
            for m in -4..=4 {
                for n in -4..=4 {
                    v.push(m as f64 * p1 + n as f64 * p2);
                }
            }
            v
        }
        None => vec![Complex64::new(0.0, 0.0)],
    };
    for seg in &path.segments {
        for &e in data.ends() {
            for &lam in &translates {
                let distance = seg.distance_to(e + lam);
                if distance < minimum {
                    return Err(Error::PathTooClose { distance, minimum });
                }
            }
        }
    }
    Ok(())
}

/// `∫ φ` along `path`, with absolute error at most `tol` per component.
pub fn integrate<D: WeierstrassData + ?Sized>(data: &D, path: &PathSpec, tol: f64) -> Result<Quadrature<3>> {
    check_guard(data, path)?;
    let zero = Complex64::new(0.0, 0.0);
    let mut total = Quadrature { value: [zero; 3], error: 0.0, intervals: 0 };
    let share = tol / path.segments.len().max(1) as f64;
    for seg in &path.segments {
        let q = quadrature::integrate(
            |t| {
                let dz = seg.velocity(t);
                forms(data, seg.point(t)).map(|p| p * dz)
            },
            0.0,
            1.0,
            share,
            DEFAULT_MAX_INTERVALS,
        )?;
        for k in 0..3 {
            total.value[k] += q.value[k];
        }
        total.error += q.error;
        total.intervals += q.intervals;
    }
    Ok(total)
}

/// `X(p) = Re ∫ φ` from `base` through the `hint` waypoints to `p`.
pub fn surface_map<D: WeierstrassData + ?Sized>(
    data: &D,
    base: Complex64,
    p: Complex64,
    hint: &[Complex64],
    tol: f64,
) -> Result<[f64; 3]> {
    let mut pts = vec![base];
    pts.extend_from_slice(hint);
    pts.push(p);
    let q = integrate(data, &PathSpec::polyline(&pts), tol)?;
    Ok(q.value.map(|v| v.re))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PeriodVector {
    pub p: [f64; 3],
    pub error: f64,
}

impl PeriodVector {
    pub fn norm(&self) -> f64 {
        self.p.iter().map(|x| x * x).sum::<f64>().sqrt()
    }
}

pub fn period_vector<D: WeierstrassData + ?Sized>(data: &D, path: &PathSpec, tol: f64) -> Result<PeriodVector> {
    let (a, b) = (path.start(), path.end());
    let closes = match data.lattice() {
        Some(l) => l.equivalent(a, b) || (a - b).norm() <= 1e-12 * l.scale(),
        None => (a - b).norm() <= 1e-12 * (1.0 + a.norm()),
    };
    if !path.closed || !closes {
        return Err(Error::InvalidInput("period loop must be closed".into()));
    }
    let q = integrate(data, path, tol)?;
    Ok(PeriodVector { p: q.value.map(|v| v.re), error: q.error })
}

/// Unit normal from the stereographic projection `g`.
pub fn gauss_map_of(g: Complex64) -> [f64; 3] {
    if is_infinite(g) {
        return [0.0, 0.0, 1.0];
    }
    let n = g.norm_sqr();
    [2.0 * g.re / (n + 1.0), 2.0 * g.im / (n + 1.0), (n - 1.0) / (n + 1.0)]
}

pub fn gauss_map<D: WeierstrassData + ?Sized>(data: &D, z: Complex64) -> [f64; 3] {
    gauss_map_of(data.g(z))
}

/// Coefficient of `ds = ½(|g| + 1/|g|)|dh|`.
pub fn metric_ds<D: WeierstrassData + ?Sized>(data: &D, z: Complex64) -> f64 {
    0.5 * (data.g_dh(z).norm() + data.dh_over_g(z).norm())
}

/// `K·dA / (dx dy) = −4|g′|²/(1 + |g|²)²`.
pub fn curvature_density<D: WeierstrassData + ?Sized>(data: &D, z: Complex64) -> f64 {
    let s = data.spherical_derivative(z);
    -4.0 * s * s
}

/// Gaussian curvature `−(2/(|g| + 1/|g|))⁴ |(dg/g)/dh|²`.
pub fn curvature_k<D: WeierstrassData + ?Sized>(data: &D, z: Complex64) -> f64 {
    let l = metric_ds(data, z);
    curvature_density(data, z) / (l * l)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LineType {
    Asymptotic,
    Principal,
    Neither,
}

pub const LINE_TOL: f64 = 1e-8;

/// Classify `sigma` by the sign of `(dg/g)(σ′)·dh(σ′)`: real on principal
/// curves, imaginary on asymptotic ones.
pub fn line_type<D: WeierstrassData + ?Sized>(data: &D, sigma: &PathSpec, samples: usize) -> LineType {
    let mut real = true;
    let mut imag = true;
    let mut seen = 0;
    for (z, v) in sigma.samples(samples) {
        let p = data.log_dg_dh(z) * v * v;
        if !p.is_finite() || p.norm() < 1e-300 {
            continue;
        }
        seen += 1;
        real &= p.im.abs() <= LINE_TOL * p.norm();
        imag &= p.re.abs() <= LINE_TOL * p.norm();
    }
    match (seen > 0, real, imag) {
        (true, true, false) => LineType::Principal,
        (true, false, true) => LineType::Asymptotic,
        _ => LineType::Neither,
    }
}

/// Whether `g(σ)` stays on one meridian or on the equator and `dh(σ′)` is
/// consistently real or imaginary.
pub fn symmetry_line_check<D: WeierstrassData + ?Sized>(data: &D, sigma: &PathSpec, samples: usize) -> bool {
    let pts = sigma.samples(samples);
    let mut direction: Option<Complex64> = None;
    let mut meridian = true;
    let mut equator = true;
    let mut dh_real = true;
    let mut dh_imag = true;
    for &(z, v) in &pts {
        let g = data.g(z);
        if !is_infinite(g) && g.norm() > 1e-300 {
            equator &= (g.norm() - 1.0).abs() <= LINE_TOL;
            let u = g * g / g.norm_sqr();
            match direction {
                None => direction = Some(u),
                Some(d) => meridian &= (u - d).norm() <= LINE_TOL,
            }
        }
        let w = data.dh(z) * v;
        if w.norm() > 1e-300 && w.is_finite() {
            dh_real &= w.im.abs() <= LINE_TOL * w.norm();
            dh_imag &= w.re.abs() <= LINE_TOL * w.norm();
        }
    }
    (meridian || equator) && (dh_real || dh_imag)
}

pub fn jorge_meeks_degree(genus: i64, ends: i64) -> Result<i64> {
    if genus < 0 || ends < 1 {
        return Err(Error::InvalidInput(format!("genus {genus} and ends {ends} out of range")));
    }
    Ok(genus + ends - 1)
}

/// The catenoid: `g = z`, `dh = dz/z` on the punctured plane.
#[derive(Debug, Clone, Copy, Default)]
pub struct Catenoid;

const CATENOID_ENDS: [Complex64; 1] = [Complex64::new(0.0, 0.0)];

impl WeierstrassData for Catenoid {
    fn g(&self, z: Complex64) -> Complex64 {
        z
    }
    fn g_prime(&self, _z: Complex64) -> Complex64 {
        Complex64::new(1.0, 0.0)
    }
    fn dh(&self, z: Complex64) -> Complex64 {
        1.0 / z
    }
    fn ends(&self) -> &[Complex64] {
        &CATENOID_ENDS
    }
    fn lattice(&self) -> Option<&Lattice> {
        None
    }
    fn g_dh(&self, _z: Complex64) -> Complex64 {
        Complex64::new(1.0, 0.0)
    }
    fn dh_over_g(&self, z: Complex64) -> Complex64 {
        1.0 / (z * z)
    }
}

impl Catenoid {
    /// The classical closed form
    /// `(x/r² + x, y/r² + y, 2 ln r)` at `z = x + iy`.
    pub fn closed_form(z: Complex64) -> [f64; 3] {
        let r2 = z.norm_sqr();
        [z.re / r2 + z.re, z.im / r2 + z.im, r2.ln()]
    }

    /// Map from the integral of the `½`-normalized forms based at `z = 1` to
    /// the closed form: scale by 2, rotate by π about the vertical axis and
    /// add the closed-form value at 1.
    pub fn to_closed_form_frame(x: [f64; 3]) -> [f64; 3] {
        [-2.0 * x[0] + 2.0, -2.0 * x[1], 2.0 * x[2]]
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn catenoid_forms_at_one() {
        let phi = forms(&Catenoid, c(1.0, 0.0));
        assert!(phi[0].norm() < 1e-15);
        assert!((phi[1] - I).norm() < 1e-15);
        assert!((phi[2] - 1.0).norm() < 1e-15);
    }

    #[test]
    fn gauss_map_examples() {
        assert_eq!(gauss_map_of(c(0.0, 0.0)), [0.0, 0.0, -1.0]);
        assert_eq!(gauss_map_of(c(1.0, 0.0)), [1.0, 0.0, 0.0]);
        assert_eq!(gauss_map_of(c(0.0, 1.0)), [0.0, 1.0, 0.0]);
        assert_eq!(gauss_map_of(crate::cx::INFINITY), [0.0, 0.0, 1.0]);
    }

    #[test]
    fn catenoid_metric_on_unit_circle() {
        let z = Complex64::from_polar(1.0, 0.7);
        assert!((metric_ds(&Catenoid, z) - 1.0).abs() < 1e-15);
        assert!(curvature_k(&Catenoid, c(0.4, 1.3)) < 0.0);
    }

    #[test]
    fn catenoid_closed_form_along_radial_path() {
        let z = c(1.7, 0.9);
        let x = surface_map(&Catenoid, c(1.0, 0.0), z, &[c(1.7, 0.0)], 1e-12).unwrap();
        let y = Catenoid::to_closed_form_frame(x);
        let expect = Catenoid::closed_form(z);
        for k in 0..3 {
            assert!((y[k] - expect[k]).abs() < 1e-9);
        }
    }

    #[test]
    fn guard_and_orientation() {
        let p = PathSpec::polyline(&[c(-1.0, 1e-5), c(1.0, 1e-5)]);
        assert!(matches!(integrate(&Catenoid, &p, 1e-10), Err(Error::PathTooClose { .. })));
        let p = PathSpec::polyline(&[c(1.0, 0.0), c(0.0, 2.0), c(-1.0, 1.0)]);
        let f = integrate(&Catenoid, &p, 1e-12).unwrap().value;
        let b = integrate(&Catenoid, &p.reversed(), 1e-12).unwrap().value;
        for k in 0..3 {
            assert!((f[k] + b[k]).norm() < 1e-12);
        }
        let zero = integrate(&Catenoid, &PathSpec::polyline(&[c(1.0, 1.0), c(1.0, 1.0)]), 1e-12).unwrap();
        assert_eq!(zero.value, [c(0.0, 0.0); 3]);
    }

    #[test]
    fn catenoid_end_period_vanishes() {
        let v = period_vector(&Catenoid, &PathSpec::circle(c(0.0, 0.0), 0.5), 1e-12).unwrap();
        assert!(v.norm() < 1e-11);
    }

    #[test]
    fn catenoid_line_types() {
        let meridian = PathSpec::polyline(&[c(0.5, 0.0), c(3.0, 0.0)]);
        assert_eq!(line_type(&Catenoid, &meridian, 50), LineType::Principal);
        assert!(symmetry_line_check(&Catenoid, &meridian, 50));
        let generic = PathSpec::polyline(&[c(0.5, 0.2), c(1.0, 3.0)]);
        assert_eq!(line_type(&Catenoid, &generic, 50), LineType::Neither);
        assert!(!symmetry_line_check(&Catenoid, &generic, 50));
    }

    #[test]
    fn jorge_meeks() {
        assert_eq!(jorge_meeks_degree(1, 2).unwrap(), 2);
        assert_eq!(jorge_meeks_degree(0, 2).unwrap(), 1);
        assert_eq!(jorge_meeks_degree(0, 1).unwrap(), 0);
        assert!(jorge_meeks_degree(0, 0).is_err());
    }
}
