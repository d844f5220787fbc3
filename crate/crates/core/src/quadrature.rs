//! Globally adaptive 15-point Gauss–Kronrod quadrature for vector-valued
//! complex integrands on a real interval.

use std::cmp::Ordering;
use std::collections::BinaryHeap;

use num_complex::Complex64;

use crate::error::{Error, Result};

const XGK: [f64; 8] = [
    0.991455371120812639206854697526329,
    0.949107912342758524526189684047851,
    0.864864423359769072789712788640926,
    0.741531185599394439863864773280788,
    0.586087235467691130294144845693013,
    0.405845151377397166906606412076961,
    0.207784955007898467600689403773245,
    0.000000000000000000000000000000000,
];

const WGK: [f64; 8] = [
    0.022935322010529224963732008058970,
    0.063092092629978553290700663189204,
    0.104790010322250183839876322541518,
    0.140653259715525918745189590510238,
    0.169004726639267902826583426598550,
    0.190350578064785409913256402421014,
    0.204432940075298892414161999234649,
    0.209482141084727828012999174891714,
];

const WG: [f64; 4] = [
    0.129484966168869693270611432679082,
    0.279705391489276667901467771423780,
    0.381830050505118944950369775488975,
    0.417959183673469387755102040816327,
];

pub const DEFAULT_MAX_INTERVALS: usize = 4000;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Quadrature<const N: usize> {
    pub value: [Complex64; N],
    pub error: f64,
    pub intervals: usize,
}

#[derive(Debug, Clone, Copy)]
struct Piece<const N: usize> {
    a: f64,
    b: f64,
    value: [Complex64; N],
    error: f64,
    order: usize,
}

impl<const N: usize> PartialEq for Piece<N> {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}
impl<const N: usize> Eq for Piece<N> {}
impl<const N: usize> PartialOrd for Piece<N> {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl<const N: usize> Ord for Piece<N> {
    fn cmp(&self, other: &Self) -> Ordering {
        self.error.total_cmp(&other.error).then(other.order.cmp(&self.order))
    }
}

/// One Gauss–Kronrod step on `[a, b]`: the Kronrod estimate and the largest
/// component-wise Kronrod–Gauss difference.
pub fn gk15<const N: usize, F>(f: &F, a: f64, b: f64) -> ([Complex64; N], f64)
where
    F: Fn(f64) -> [Complex64; N],
{
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let zero = Complex64::new(0.0, 0.0);
    let mut kronrod = [zero; N];
    let mut gauss = [zero; N];
    let fc = f(center);
    for k in 0..N {
        kronrod[k] = fc[k] * WGK[7];
        gauss[k] = fc[k] * WG[3];
    }
    for j in 0..7 {
        let dx = half * XGK[j];
        let f1 = f(center - dx);
        let f2 = f(center + dx);
        for k in 0..N {
            let s = f1[k] + f2[k];
            kronrod[k] += s * WGK[j];
            if j % 2 == 1 {
                gauss[k] += s * WG[j / 2];
            }
        }
    }
    let mut err: f64 = 0.0;
    for k in 0..N {
        kronrod[k] *= half;
        gauss[k] *= half;
        err = err.max((kronrod[k] - gauss[k]).norm());
    }
    (kronrod, err)
}

/// Integrate `f` over `[a, b]` until the summed error estimate is at most
/// `tol`, bisecting the interval with the largest estimate first.
pub fn integrate<const N: usize, F>(f: F, a: f64, b: f64, tol: f64, max_intervals: usize) -> Result<Quadrature<N>>
where
    F: Fn(f64) -> [Complex64; N],
{
    let zero = Complex64::new(0.0, 0.0);
    if a == b {
        return Ok(Quadrature { value: [zero; N], error: 0.0, intervals: 0 });
    }
    let (value, error) = gk15(&f, a, b);
    let mut heap = BinaryHeap::new();
    heap.push(Piece { a, b, value, error, order: 0 });
    let mut total_err = error;
    let mut order = 1;
    while total_err > tol && heap.len() < max_intervals {
        let worst = heap.pop().expect("heap is never empty");
        let mid = 0.5 * (worst.a + worst.b);
        if mid <= worst.a.min(worst.b) || mid >= worst.a.max(worst.b) {
            heap.push(worst);
            break;
        }
        let (v1, e1) = gk15(&f, worst.a, mid);
        let (v2, e2) = gk15(&f, mid, worst.b);
        total_err += e1 + e2 - worst.error;
        heap.push(Piece { a: worst.a, b: mid, value: v1, error: e1, order });
        heap.push(Piece { a: mid, b: worst.b, value: v2, error: e2, order: order + 1 });
        order += 2;
    }
    let mut pieces = heap.into_vec();
    pieces.sort_by(|p, q| p.a.total_cmp(&q.a));
    let mut value = [zero; N];
    let mut error = 0.0;
    for p in &pieces {
        for k in 0..N {
            value[k] += p.value[k];
        }
        error += p.error;
    }
    if !value.iter().all(|v| v.is_finite()) {
        return Err(Error::ToleranceNotMet { achieved: f64::INFINITY, requested: tol });
    }
    if error > tol {
        return Err(Error::ToleranceNotMet { achieved: error, requested: tol });
    }
    Ok(Quadrature { value, error, intervals: pieces.len() })
}
