//! Adaptive Gauss–Kronrod (7/15) quadrature for scalar, complex and
//! vector-valued integrands.

use std::cmp::Ordering;
use std::collections::BinaryHeap;

use num_complex::Complex64;
use rayon::prelude::*;

use crate::error::{Error, Result};

const XGK: [f64; 8] = [
    0.991_455_371_120_812_6,
    0.949_107_912_342_758_5,
    0.864_864_423_359_769_1,
    0.741_531_185_599_394_4,
    0.586_087_235_467_691_1,
    0.405_845_151_377_397_2,
    0.207_784_955_007_898_5,
    0.0,
];

const WGK: [f64; 8] = [
    0.022_935_322_010_529_22,
    0.063_092_092_629_978_55,
    0.104_790_010_322_250_2,
    0.140_653_259_715_525_9,
    0.169_004_726_639_267_9,
    0.190_350_578_064_785_4,
    0.204_432_940_075_298_9,
    0.209_482_141_084_727_8,
];

/// Gauss weights for the Kronrod nodes with odd index (1, 3, 5, 7).
const WG: [f64; 4] = [
    0.129_484_966_168_869_7,
    0.279_705_391_489_276_7,
    0.381_830_050_505_118_9,
    0.417_959_183_673_469_4,
];

/// Values that can be integrated: a vector space with a sup-type norm.
pub trait QuadValue: Clone + Send + Sync {
    fn add_scaled(&mut self, other: &Self, factor: f64);
    fn scaled(&self, factor: f64) -> Self;
    fn norm(&self) -> f64;
    fn dist(&self, other: &Self) -> f64;
}

impl QuadValue for f64 {
    fn add_scaled(&mut self, other: &Self, factor: f64) {
        *self += other * factor;
    }
    fn scaled(&self, factor: f64) -> Self {
        self * factor
    }
    fn norm(&self) -> f64 {
        self.abs()
    }
    fn dist(&self, other: &Self) -> f64 {
        (self - other).abs()
    }
}

impl QuadValue for Complex64 {
    fn add_scaled(&mut self, other: &Self, factor: f64) {
        *self += other * factor;
    }
    fn scaled(&self, factor: f64) -> Self {
        self * factor
    }
    fn norm(&self) -> f64 {
        Complex64::norm(*self)
    }
    fn dist(&self, other: &Self) -> f64 {
        (self - other).norm()
    }
}

impl QuadValue for Vec<f64> {
    fn add_scaled(&mut self, other: &Self, factor: f64) {
        self.iter_mut()
            .zip(other)
            .for_each(|(a, b)| *a += b * factor);
    }
    fn scaled(&self, factor: f64) -> Self {
        self.iter().map(|a| a * factor).collect()
    }
    fn norm(&self) -> f64 {
        self.iter().fold(0.0, |m, a| m.max(a.abs()))
    }
    fn dist(&self, other: &Self) -> f64 {
        self.iter()
            .zip(other)
            .fold(0.0, |m, (a, b)| m.max((a - b).abs()))
    }
}

impl QuadValue for Vec<Complex64> {
    fn add_scaled(&mut self, other: &Self, factor: f64) {
        self.iter_mut()
            .zip(other)
            .for_each(|(a, b)| *a += b * factor);
    }
    fn scaled(&self, factor: f64) -> Self {
        self.iter().map(|a| a * factor).collect()
    }
    fn norm(&self) -> f64 {
        self.iter().fold(0.0, |m, a| m.max(a.norm()))
    }
    fn dist(&self, other: &Self) -> f64 {
        self.iter()
            .zip(other)
            .fold(0.0, |m, (a, b)| m.max((a - b).norm()))
    }
}

/// Tolerances and budget for [`integrate`].
#[derive(Debug, Clone, Copy)]
pub struct QuadOptions {
    pub abs_tol: f64,
    pub rel_tol: f64,
    pub max_intervals: usize,
    /// Evaluate the 15 nodes of each panel concurrently.
    pub parallel: bool,
}

impl Default for QuadOptions {
    fn default() -> Self {
        QuadOptions {
            abs_tol: 0.0,
            rel_tol: 1e-12,
            max_intervals: 2000,
            parallel: false,
        }
    }
}

impl QuadOptions {
    pub fn rel(rel_tol: f64) -> Self {
        QuadOptions {
            rel_tol,
            ..Self::default()
        }
    }

    pub fn with_abs(mut self, abs_tol: f64) -> Self {
        self.abs_tol = abs_tol;
        self
    }

    pub fn parallel(mut self) -> Self {
        self.parallel = true;
        self
    }

    pub fn max_intervals(mut self, n: usize) -> Self {
        self.max_intervals = n;
        self
    }
}

/// Result of an adaptive integration.
#[derive(Debug, Clone)]
pub struct QuadOutcome<T> {
    pub value: T,
    pub error: f64,
    pub intervals: usize,
    pub converged: bool,
}

impl<T> QuadOutcome<T> {
    /// The value, or a quadrature error carrying the achieved estimate.
    pub fn into_result(self, target: f64) -> Result<T> {
        if self.converged {
            Ok(self.value)
        } else {
            Err(Error::Quadrature {
                achieved: self.error,
                target,
            })
        }
    }
}

struct Panel<T> {
    a: f64,
    b: f64,
    value: T,
    error: f64,
}

impl<T> PartialEq for Panel<T> {
    fn eq(&self, other: &Self) -> bool {
        self.error == other.error
    }
}
impl<T> Eq for Panel<T> {}
impl<T> PartialOrd for Panel<T> {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl<T> Ord for Panel<T> {
    fn cmp(&self, other: &Self) -> Ordering {
        self.error.total_cmp(&other.error)
    }
}

fn nodes(a: f64, b: f64) -> [f64; 15] {
    let c = 0.5 * (a + b);
    let r = 0.5 * (b - a);
    let mut x = [0.0; 15];
    for i in 0..7 {
        x[2 * i] = c - r * XGK[i];
        x[2 * i + 1] = c + r * XGK[i];
    }
    x[14] = c;
    x
}

fn gk15<T, F>(f: &F, a: f64, b: f64, parallel: bool) -> (T, f64)
where
    T: QuadValue,
    F: Fn(f64) -> T + Sync,
{
    let x = nodes(a, b);
    let fx: Vec<T> = if parallel {
        x.par_iter().map(|&t| f(t)).collect()
    } else {
        x.iter().map(|&t| f(t)).collect()
    };
    let r = 0.5 * (b - a);
    let mut kron = fx[14].scaled(WGK[7]);
    let mut gauss = fx[14].scaled(WG[3]);
    for i in 0..7 {
        kron.add_scaled(&fx[2 * i], WGK[i]);
        kron.add_scaled(&fx[2 * i + 1], WGK[i]);
        if i % 2 == 1 {
            gauss.add_scaled(&fx[2 * i], WG[i / 2]);
            gauss.add_scaled(&fx[2 * i + 1], WG[i / 2]);
        }
    }
    let kron = kron.scaled(r);
    let gauss = gauss.scaled(r);
    let err = kron.dist(&gauss);
    (kron, err)
}

/// Adaptive integration of `f` over `[a, b]` by repeated bisection of the
/// panel with the largest Kronrod–Gauss discrepancy.
pub fn integrate<T, F>(f: F, a: f64, b: f64, opts: QuadOptions) -> QuadOutcome<T>
where
    T: QuadValue,
    F: Fn(f64) -> T + Sync,
{
    let (value, error) = gk15(&f, a, b, opts.parallel);
    let mut heap = BinaryHeap::new();
    heap.push(Panel {
        a,
        b,
        value: value.clone(),
        error,
    });
    let mut total = value;
    let mut total_err = error;
    loop {
        let tol = opts.abs_tol.max(opts.rel_tol * total.norm());
        if total_err <= tol || heap.len() >= opts.max_intervals {
            break;
        }
        let worst = heap.pop().expect("heap is never empty");
        let mid = 0.5 * (worst.a + worst.b);
        if mid <= worst.a || mid >= worst.b {
            heap.push(worst);
            break;
        }
        let (lv, le) = gk15(&f, worst.a, mid, opts.parallel);
        let (rv, re) = gk15(&f, mid, worst.b, opts.parallel);
        total.add_scaled(&worst.value, -1.0);
        total.add_scaled(&lv, 1.0);
        total.add_scaled(&rv, 1.0);
        total_err += le + re - worst.error;
        heap.push(Panel {
            a: worst.a,
            b: mid,
            value: lv,
            error: le,
        });
        heap.push(Panel {
            a: mid,
            b: worst.b,
            value: rv,
            error: re,
        });
    }
    // Re-sum in interval order so the result does not depend on heap history.
    let mut panels = heap.into_vec();
    panels.sort_by(|p, q| p.a.total_cmp(&q.a));
    let mut value = panels[0].value.clone();
    for p in &panels[1..] {
        value.add_scaled(&p.value, 1.0);
    }
    let error: f64 = panels.iter().map(|p| p.error).sum();
    let tol = opts.abs_tol.max(opts.rel_tol * value.norm());
    QuadOutcome {
        value,
        error,
        intervals: panels.len(),
        converged: error <= tol,
    }
}

/// Composite 15-point Kronrod rule on `panels` equal subintervals.
pub fn integrate_fixed<T, F>(f: F, a: f64, b: f64, panels: usize) -> T
where
    T: QuadValue,
    F: Fn(f64) -> T + Sync,
{
    let width = (b - a) / panels as f64;
    let mut acc: Option<T> = None;
    for i in 0..panels {
        let lo = a + i as f64 * width;
        let (v, _) = gk15(&f, lo, lo + width, false);
        match acc.as_mut() {
            Some(s) => s.add_scaled(&v, 1.0),
            None => acc = Some(v),
        }
    }
    acc.expect("at least one panel")
}

/// Integral over `[0, ∞)` via `x = t/(1−t)` on `[0, 1)`.
pub fn integrate_semi_infinite<T, F>(f: F, opts: QuadOptions) -> QuadOutcome<T>
where
    T: QuadValue,
    F: Fn(f64) -> T + Sync,
{
    integrate(
        |t: f64| {
            let one_minus = 1.0 - t;
            let x = t / one_minus;
            f(x).scaled(1.0 / (one_minus * one_minus))
        },
        0.0,
        1.0,
        opts,
    )
}
