//! Classical `P`, the symmetric `℘` and their torus constants.
//!
//! `P` is summed row by row: for a reduced basis `(W1, W2)` with
//! `τ = W2/W1`, each row `{z − nW2 − mW1 : m ∈ ℤ}` collapses to
//! `(π/W1)² csc²(π(z − nW2)/W1)`, so only a handful of rows are needed.

use std::f64::consts::PI;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::cx::{complex_median, is_infinite, INFINITY, I};
use crate::error::{Error, Result};
use crate::exec::Execution;
use crate::lattice::{Lattice, TorusShape};

/// A meromorphic function on a torus together with its derivative.
pub trait TorusFunction: Sync {
    fn value(&self, z: Complex64) -> Complex64;
    fn derivative(&self, z: Complex64) -> Complex64;
    fn lattice(&self) -> &Lattice;
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LatticeSumPolicy {
    pub radius: u32,
    pub tail_tol: f64,
}

impl Default for LatticeSumPolicy {
    fn default() -> Self {
        LatticeSumPolicy { radius: 60, tail_tol: 1e-10 }
    }
}

impl LatticeSumPolicy {
    /// Upper bound on the rows beyond `radius`, for `z` in the centered cell.
    pub fn tail_estimate(&self, lattice: &Lattice) -> f64 {
        let (w1, w2) = lattice.reduced_basis();
        let tau = w2 / w1;
        let k = (PI / w1.norm()).powi(2);
        let mut tail = 0.0;
        for n in (self.radius as usize + 1)..(self.radius as usize + 200) {
            let h = PI * tau.im * (n as f64 - 0.5);
            let q = (-2.0 * h).exp();
            let term = 2.0 * k * 4.0 * q / (1.0 - q).powi(2);
            tail += term;
            if term < 1e-30 * tail.max(f64::MIN_POSITIVE) {
                break;
            }
        }
        tail
    }

    pub fn validate(&self, lattice: &Lattice) -> Result<()> {
        if self.radius < 4 {
            return Err(Error::InvalidPolicy(format!("radius {} < 4", self.radius)));
        }
        if !(self.tail_tol > 0.0 && self.tail_tol.is_finite()) {
            return Err(Error::InvalidPolicy("tail_tol must be positive".into()));
        }
        let tail = self.tail_estimate(lattice);
        if tail > self.tail_tol {
            return Err(Error::InvalidPolicy(format!(
                "estimated tail {tail:e} exceeds tail_tol {:e}",
                self.tail_tol
            )));
        }
        Ok(())
    }
}

/// The classical Weierstrass `P` of the lattice `2w1ℤ + 2w2ℤ`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ClassicalP {
    lattice: Lattice,
    policy: LatticeSumPolicy,
    w1: Complex64,
    w2: Complex64,
    tau: Complex64,
    k: Complex64,
    constant: Complex64,
}

struct RowSums {
    s0: Complex64,
    s1: Complex64,
    s2: Complex64,
}

impl ClassicalP {
    pub fn new(lattice: Lattice, policy: LatticeSumPolicy) -> Result<Self> {
        lattice.validate()?;
        policy.validate(&lattice)?;
        let (w1, w2) = lattice.reduced_basis();
        let tau = w2 / w1;
        let k = PI / w1;
        let mut constant = Complex64::new(1.0 / 3.0, 0.0);
        for n in 1..=policy.radius {
            let s = (PI * n as f64 * tau).sin();
            let term = 2.0 / (s * s);
            constant += term;
            if term.norm() < 1e-18 * constant.norm() {
                break;
            }
        }
        Ok(ClassicalP { lattice, policy, w1, w2, tau, k, constant })
    }

    pub fn lattice(&self) -> &Lattice {
        &self.lattice
    }

    pub fn policy(&self) -> &LatticeSumPolicy {
        &self.policy
    }

    fn center(&self, z: Complex64) -> Complex64 {
        let det = self.w1.re * self.w2.im - self.w1.im * self.w2.re;
        let s = (z.re * self.w2.im - z.im * self.w2.re) / det;
        let t = (self.w1.re * z.im - self.w1.im * z.re) / det;
        z - s.round() * self.w1 - t.round() * self.w2
    }

    fn rows(&self, z: Complex64) -> Option<RowSums> {
        let z = self.center(z);
        if z.norm() <= 1e-300 {
            return None;
        }
        let mut sums = RowSums { s0: 0.0.into(), s1: 0.0.into(), s2: 0.0.into() };
        let mut add = |x: Complex64| {
            let s = x.sin();
            let csc2 = 1.0 / (s * s);
            let cot = x.cos() / s;
            sums.s0 += csc2;
            sums.s1 += csc2 * cot;
            sums.s2 += csc2 * (2.0 * cot * cot + csc2);
            csc2.norm()
        };
        let u = z / self.w1;
        add(PI * u);
        for n in 1..=self.policy.radius as i64 {
            let shift = n as f64 * self.tau;
            let m = add(PI * (u - shift)) + add(PI * (u + shift));
            if m < 1e-18 {
                break;
            }
        }
        if sums.s0.is_finite() {
            Some(sums)
        } else {
            None
        }
    }

    pub fn value(&self, z: Complex64) -> Complex64 {
        match self.rows(z) {
            Some(r) => self.k * self.k * (r.s0 - self.constant),
            None => INFINITY,
        }
    }

    pub fn derivative(&self, z: Complex64) -> Complex64 {
        match self.rows(z) {
            Some(r) => -2.0 * self.k.powi(3) * r.s1,
            None => INFINITY,
        }
    }

    pub fn second_derivative(&self, z: Complex64) -> Complex64 {
        match self.rows(z) {
            Some(r) => 2.0 * self.k.powi(4) * r.s2,
            None => INFINITY,
        }
    }

    /// `(P, P′, P″)` from a single row sweep.
    pub fn jet(&self, z: Complex64) -> Option<(Complex64, Complex64, Complex64)> {
        self.rows(z).map(|r| {
            let k2 = self.k * self.k;
            (k2 * (r.s0 - self.constant), -2.0 * k2 * self.k * r.s1, 2.0 * k2 * k2 * r.s2)
        })
    }
}

impl TorusFunction for ClassicalP {
    fn value(&self, z: Complex64) -> Complex64 {
        ClassicalP::value(self, z)
    }
    fn derivative(&self, z: Complex64) -> Complex64 {
        ClassicalP::derivative(self, z)
    }
    fn lattice(&self) -> &Lattice {
        &self.lattice
    }
}

pub fn eval_p(z: Complex64, lattice: &Lattice, policy: &LatticeSumPolicy) -> Result<Complex64> {
    Ok(ClassicalP::new(*lattice, *policy)?.value(z))
}

pub fn eval_p_prime(z: Complex64, lattice: &Lattice, policy: &LatticeSumPolicy) -> Result<Complex64> {
    Ok(ClassicalP::new(*lattice, *policy)?.derivative(z))
}

/// The symmetric `℘ = a/(P − b)` normalized by `℘(0) = 0`,
/// `℘(w1+w2) = ∞`, `℘((w1+w2)/2) = i`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SymmetricWp {
    pub lattice: Lattice,
    pub a: Complex64,
    pub b: Complex64,
    pub x: Complex64,
    pub c: Complex64,
    pub policy: LatticeSumPolicy,
    p: ClassicalP,
}

const RATIO_SAMPLES: usize = 100;
const RATIO_DISPERSION: f64 = 1e-6;
const RATIO_SEED: u64 = 0x5EED_C0DE;

impl SymmetricWp {
    pub fn build(lattice: Lattice, policy: LatticeSumPolicy) -> Result<Self> {
        let p = ClassicalP::new(lattice, policy)?;
        let s = lattice.w1 + lattice.w2;
        let b = p.value(s);
        let gap = p.value(0.5 * s) - b;
        if gap.norm() < 1e-10 {
            return Err(Error::IllConditionedLattice { gap: gap.norm() });
        }
        let a = I * gap;
        let mut wp = SymmetricWp {
            lattice,
            a,
            b,
            x: Complex64::new(0.0, 0.0),
            c: Complex64::new(0.0, 0.0),
            policy,
            p,
        };
        wp.x = wp.value(lattice.w1);
        wp.c = compute_c(&wp)?;
        Ok(wp)
    }

    pub fn classical(&self) -> &ClassicalP {
        &self.p
    }

    pub fn value(&self, z: Complex64) -> Complex64 {
        let pz = self.p.value(z);
        if is_infinite(pz) {
            return Complex64::new(0.0, 0.0);
        }
        let d = pz - self.b;
        if d.norm() < 1e-12 * self.a.norm() {
            return INFINITY;
        }
        self.a / d
    }

    pub fn derivative(&self, z: Complex64) -> Complex64 {
        match self.p.jet(z) {
            None => Complex64::new(0.0, 0.0),
            Some((pz, dp, _)) => {
                let d = pz - self.b;
                if d.norm() < 1e-12 * self.a.norm() {
                    return INFINITY;
                }
                -self.a * dp / (d * d)
            }
        }
    }

    pub fn second_derivative(&self, z: Complex64) -> Complex64 {
        match self.p.jet(z) {
            None => 2.0 * self.a,
            Some((pz, dp, ddp)) => {
                let d = pz - self.b;
                if d.norm() < 1e-12 * self.a.norm() {
                    return INFINITY;
                }
                -self.a * (ddp / (d * d) - 2.0 * dp * dp / (d * d * d))
            }
        }
    }

    /// Pointwise value of `℘′² / [℘(℘ − x)(℘ + 1/x)]`.
    pub fn c_ratio(&self, z: Complex64) -> Complex64 {
        let w = self.value(z);
        let dw = self.derivative(z);
        dw * dw / (w * (w - self.x) * (w + 1.0 / self.x))
    }

    /// Normalized residual of `℘′² = c·℘(℘ − x)(℘ + 1/x)` at `z`.
    pub fn algebraic_residual(&self, z: Complex64) -> f64 {
        let w = self.value(z);
        let dw = self.derivative(z);
        let r = dw * dw - self.c * w * (w - self.x) * (w + 1.0 / self.x);
        r.norm() / (1.0 + dw.norm_sqr())
    }

    pub fn prime(&self) -> WpPrime<'_> {
        WpPrime(self)
    }
}

impl TorusFunction for SymmetricWp {
    fn value(&self, z: Complex64) -> Complex64 {
        SymmetricWp::value(self, z)
    }
    fn derivative(&self, z: Complex64) -> Complex64 {
        SymmetricWp::derivative(self, z)
    }
    fn lattice(&self) -> &Lattice {
        &self.lattice
    }
}

/// `℘′` viewed as a torus function in its own right.
#[derive(Debug, Clone, Copy)]
pub struct WpPrime<'a>(pub &'a SymmetricWp);

impl TorusFunction for WpPrime<'_> {
    fn value(&self, z: Complex64) -> Complex64 {
        self.0.derivative(z)
    }
    fn derivative(&self, z: Complex64) -> Complex64 {
        self.0.second_derivative(z)
    }
    fn lattice(&self) -> &Lattice {
        &self.0.lattice
    }
}

pub fn build_symmetric_wp(lattice: Lattice, policy: LatticeSumPolicy) -> Result<SymmetricWp> {
    SymmetricWp::build(lattice, policy)
}

pub fn eval_wp(wp: &SymmetricWp, z: Complex64) -> Complex64 {
    wp.value(z)
}

pub fn eval_wp_prime(wp: &SymmetricWp, z: Complex64) -> Complex64 {
    wp.derivative(z)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HalfPeriodValues {
    pub x: Complex64,
    pub wp_w2: Complex64,
    pub shape: TorusShape,
    /// `x = tan α` on rectangular tori.
    pub alpha: Option<f64>,
    /// `x = e^{±iρ}` on rhombic tori; `mirrored` marks the minus sign.
    pub rho: Option<f64>,
    pub mirrored: bool,
}

pub fn half_period_values(wp: &SymmetricWp) -> HalfPeriodValues {
    let shape = wp.lattice.classify().shape;
    let x = wp.x;
    let mut out = HalfPeriodValues {
        x,
        wp_w2: wp.value(wp.lattice.w2),
        shape,
        alpha: None,
        rho: None,
        mirrored: false,
    };
    if shape.is_rectangular() {
        let alpha = x.re.atan();
        out.mirrored = alpha < 0.0;
        out.alpha = Some(alpha.abs());
    }
    if shape.is_rhombic() {
        let rho = x.arg();
        out.mirrored |= rho < 0.0;
        out.rho = Some(rho.abs());
    }
    out
}

/// Sample points for the ratio estimate of `c`, away from poles and zeros.
fn ratio_samples(wp: &SymmetricWp, n: usize, seed: u64) -> Vec<Complex64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut pts = Vec::with_capacity(n);
    let mut guard = 0;
    while pts.len() < n && guard < 100 * n {
        guard += 1;
        let z = wp.lattice.point(rng.gen(), rng.gen());
        let w = wp.value(z);
        let m = w.norm();
        if m > 0.05 && m < 20.0 && (w - wp.x).norm() > 0.05 && (w + 1.0 / wp.x).norm() > 0.05 {
            pts.push(z);
        }
    }
    pts
}

/// Median of pointwise ratios `℘′²/[℘(℘ − x)(℘ + 1/x)]` over random points.
pub fn compute_c(wp: &SymmetricWp) -> Result<Complex64> {
    let pts = ratio_samples(wp, RATIO_SAMPLES, RATIO_SEED);
    if pts.len() < RATIO_SAMPLES {
        return Err(Error::IllConditionedLattice { gap: wp.a.norm() });
    }
    let ratios: Vec<Complex64> = pts.iter().map(|&z| wp.c_ratio(z)).collect();
    let med = complex_median(&ratios);
    let dispersion = ratios
        .iter()
        .map(|r| (r - med).norm() / med.norm())
        .fold(0.0, f64::max);
    if !(dispersion <= RATIO_DISPERSION) {
        return Err(Error::InconsistentEvaluator { dispersion, limit: RATIO_DISPERSION });
    }
    Ok(med)
}

/// Closed-form route `c = y²/((w1+w2)²(x − 1/x − 2i))`, with
/// `y = d/dt ℘(t(w1+w2))` at `t = 1/2` taken by central differences.
pub fn c_from_diagonal(wp: &SymmetricWp) -> Complex64 {
    let s = wp.lattice.w1 + wp.lattice.w2;
    let h = 1e-5;
    let y = (wp.value((0.5 + h) * s) - wp.value((0.5 - h) * s)) / (2.0 * h);
    y * y / (s * s * (wp.x - 1.0 / wp.x - 2.0 * I))
}

/// Number of preimages of `value` under `f` in one fundamental cell.
///
/// Newton's method is started from a `grid_n × grid_n` grid, converged roots
/// are reduced modulo the lattice and deduplicated.
pub fn count_degree<F: TorusFunction + ?Sized>(
    f: &F,
    value: Complex64,
    grid_n: usize,
    exec: Execution,
) -> Result<usize> {
    Ok(find_preimages(f, value, grid_n, exec)?.len())
}

pub fn find_preimages<F: TorusFunction + ?Sized>(
    f: &F,
    value: Complex64,
    grid_n: usize,
    exec: Execution,
) -> Result<Vec<Complex64>> {
    if grid_n < 2 {
        return Err(Error::InvalidInput("grid_n must be at least 2".into()));
    }
    let lattice = *f.lattice();
    let scale = lattice.scale();
    let cell = scale / grid_n as f64;
    let vscale = 1.0 + value.norm();
    let seeds: Vec<Complex64> = (0..grid_n * grid_n)
        .map(|k| {
            let (i, j) = (k / grid_n, k % grid_n);
            let s = (i as f64 + 0.5 + 0.0137) / grid_n as f64;
            let t = (j as f64 + 0.5 + 0.0291) / grid_n as f64;
            lattice.point(s, t)
        })
        .collect();
    let roots: Vec<Option<Complex64>> = exec.map(&seeds, |&z0| {
        let mut z = z0;
        for _ in 0..80 {
            let fz = f.value(z);
            let dz = f.derivative(z);
            if is_infinite(fz) || is_infinite(dz) || !fz.is_finite() || dz.norm() == 0.0 {
                return None;
            }
            let r = fz - value;
            let mut step = r / dz;
            if step.norm() > cell {
                step *= cell / step.norm();
            }
            z -= step;
            if r.norm() <= 1e-12 * vscale && step.norm() <= 1e-12 * scale {
                return Some(lattice.reduce(z));
            }
        }
        let r = f.value(z) - value;
        (r.norm() <= 1e-10 * vscale).then(|| lattice.reduce(z))
    });
    let mut found: Vec<Complex64> = Vec::new();
    for z in roots.into_iter().flatten() {
        if !found.iter().any(|&w| lattice.torus_distance(w, z) < 1e-7 * scale) {
            found.push(z);
        }
    }
    if found.is_empty() {
        return Err(Error::CountUnreliable(format!(
            "no Newton seed converged to a preimage of {value}"
        )));
    }
    for &z in &found {
        let d = f.derivative(z);
        if d.norm() < 1e-6 * vscale / scale {
            return Err(Error::CountUnreliable(format!(
                "preimage {z} is a critical point; {value} is a branch value"
            )));
        }
    }
    found.sort_by(|a, b| a.re.total_cmp(&b.re).then(a.im.total_cmp(&b.im)));
    Ok(found)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn p_frozen_square_value() {
        let p = ClassicalP::new(Lattice::square(), LatticeSumPolicy::default()).unwrap();
        let v = p.value(c(0.5, 0.0));
        assert!((v - c(4.149_541_711_424_986_5, 0.0)).norm() < 1e-12, "{v}");
    }

    #[test]
    fn p_pole_signal() {
        let p = ClassicalP::new(Lattice::square(), LatticeSumPolicy::default()).unwrap();
        assert!(is_infinite(p.value(c(2.0, 2.0))));
        assert!(is_infinite(p.derivative(c(0.0, 0.0))));
    }

    #[test]
    fn policy_validation() {
        let l = Lattice::square();
        assert!(LatticeSumPolicy { radius: 3, tail_tol: 1e-10 }.validate(&l).is_err());
        assert!(LatticeSumPolicy { radius: 4, tail_tol: 0.0 }.validate(&l).is_err());
        assert!(LatticeSumPolicy::default().validate(&l).is_ok());
    }

    #[test]
    fn normalization_triple() {
        let wp = SymmetricWp::build(Lattice::square(), LatticeSumPolicy::default()).unwrap();
        let s = wp.lattice.w1 + wp.lattice.w2;
        assert_eq!(wp.value(c(0.0, 0.0)), c(0.0, 0.0));
        assert!(is_infinite(wp.value(s)));
        assert!((wp.value(0.5 * s) - I).norm() < 1e-12);
    }

    #[test]
    fn square_constants() {
        let wp = SymmetricWp::build(Lattice::square(), LatticeSumPolicy::default()).unwrap();
        assert!((wp.x - 1.0).norm() < 1e-10);
        assert!((wp.c - c(-6.875_185_818_02, 0.0)).norm() < 1e-9);
        let alt = c_from_diagonal(&wp);
        assert!((alt - wp.c).norm() / wp.c.norm() < 1e-6);
    }

    #[test]
    fn second_derivative_matches_differences() {
        let wp = SymmetricWp::build(Lattice::square(), LatticeSumPolicy::default()).unwrap();
        let z = c(0.31, 0.42);
        let h = 1e-5;
        let fd = (wp.derivative(z + h) - wp.derivative(z - h)) / (2.0 * h);
        assert!((fd - wp.second_derivative(z)).norm() < 1e-6 * (1.0 + fd.norm()));
    }

    #[test]
    fn degree_of_wp_and_prime() {
        let wp = SymmetricWp::build(Lattice::square(), LatticeSumPolicy::default()).unwrap();
        let v = c(0.37, -0.81);
        assert_eq!(count_degree(&wp, v, 12, Execution::Sequential).unwrap(), 2);
        assert_eq!(count_degree(&wp.prime(), v, 16, Execution::Parallel).unwrap(), 3);
    }
}
