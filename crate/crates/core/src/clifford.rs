//! Complexified Clifford algebra ℂ ⊗ Cl(n,n).
//!
//! Generators `e_1 … e_n` square to `-1`, generators `e_{n+1} … e_{2n}`
//! square to `+1`, and distinct generators anticommute. A basis blade is
//! encoded as a bitmask over the `2n` generators (bit `j-1` set iff `e_j`
//! is present); products are evaluated in canonical (ascending) order.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Largest supported `n`; keeps masks well inside `u32`.
pub const MAX_DIM: usize = 8;

const NORM_TOL: f64 = 1e-12;

/// Bitmask naming a basis blade `e_{j1} e_{j2} … e_{jr}` with `j1 < … < jr`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct BladeIndex(pub u32);

impl BladeIndex {
    pub const SCALAR: BladeIndex = BladeIndex(0);

    /// Blade of the single generator `e_j` (1-based).
    pub fn generator(j: usize) -> Self {
        assert!(j >= 1, "generators are 1-based");
        BladeIndex(1 << (j - 1))
    }

    pub fn grade(self) -> u32 {
        self.0.count_ones()
    }

    /// Generator indices (1-based, ascending).
    pub fn generators(self) -> impl Iterator<Item = usize> {
        let mask = self.0;
        (0..32).filter(move |b| mask & (1 << b) != 0).map(|b| b + 1)
    }

    pub fn is_valid(self, dim: usize) -> bool {
        (self.0 as u64) < (1u64 << (2 * dim))
    }
}

impl fmt::Display for BladeIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0 == 0 {
            return write!(f, "1");
        }
        let names: Vec<String> = self.generators().map(|j| format!("e{j}")).collect();
        write!(f, "{}", names.join(""))
    }
}

/// Sign picked up when the canonical product `e_A e_B` is reordered into
/// ascending generator order, before any squares are contracted.
fn reorder_sign(a: u32, b: u32) -> f64 {
    let mut a = a >> 1;
    let mut swaps = 0u32;
    while a != 0 {
        swaps += (a & b).count_ones();
        a >>= 1;
    }
    if swaps.is_multiple_of(2) {
        1.0
    } else {
        -1.0
    }
}

/// Product of two basis blades in Cl(n,n): returns `(sign, mask)`.
pub fn blade_product(dim: usize, a: BladeIndex, b: BladeIndex) -> (f64, BladeIndex) {
    let negative_mask = (1u32 << dim) - 1;
    let mut sign = reorder_sign(a.0, b.0);
    if (a.0 & b.0 & negative_mask).count_ones() % 2 == 1 {
        sign = -sign;
    }
    (sign, BladeIndex(a.0 ^ b.0))
}

/// Sign `s` with `(e_J)† = s · e_J`.
pub fn blade_dagger_sign(dim: usize, blade: BladeIndex) -> f64 {
    let negative_mask = (1u32 << dim) - 1;
    let r = blade.grade();
    let flips = (blade.0 & negative_mask).count_ones() + r * r.saturating_sub(1) / 2;
    if flips.is_multiple_of(2) {
        1.0
    } else {
        -1.0
    }
}

/// Element of ℂ ⊗ Cl(n,n) stored sparsely by blade.
///
/// A blade is absent from `coeffs` exactly when its coefficient is zero.
#[derive(Debug, Clone, PartialEq)]
pub struct Multivector {
    dim: usize,
    coeffs: BTreeMap<BladeIndex, Complex64>,
}

impl Multivector {
    pub fn zero(dim: usize) -> Self {
        assert!((1..=MAX_DIM).contains(&dim), "dimension {dim} unsupported");
        Multivector {
            dim,
            coeffs: BTreeMap::new(),
        }
    }

    pub fn scalar(dim: usize, value: Complex64) -> Self {
        Self::blade(dim, BladeIndex::SCALAR, value)
    }

    pub fn real(dim: usize, value: f64) -> Self {
        Self::scalar(dim, Complex64::new(value, 0.0))
    }

    pub fn one(dim: usize) -> Self {
        Self::real(dim, 1.0)
    }

    /// `value · e_j` for a single generator (1-based `j`).
    pub fn generator(dim: usize, j: usize, value: Complex64) -> Self {
        assert!(
            j >= 1 && j <= 2 * dim,
            "generator e{j} outside Cl({dim},{dim})"
        );
        Self::blade(dim, BladeIndex::generator(j), value)
    }

    pub fn blade(dim: usize, blade: BladeIndex, value: Complex64) -> Self {
        let mut m = Self::zero(dim);
        m.set(blade, value);
        m
    }

    /// Builds from `(mask, coefficient)` pairs, summing repeats.
    pub fn from_terms<I>(dim: usize, terms: I) -> Result<Self>
    where
        I: IntoIterator<Item = (BladeIndex, Complex64)>,
    {
        let mut m = Self::zero(dim);
        for (blade, c) in terms {
            if !blade.is_valid(dim) {
                return Err(Error::InvalidParameter(format!(
                    "blade mask {} outside Cl({dim},{dim})",
                    blade.0
                )));
            }
            m.add_term(blade, c);
        }
        Ok(m)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn get(&self, blade: BladeIndex) -> Complex64 {
        self.coeffs.get(&blade).copied().unwrap_or_default()
    }

    pub fn set(&mut self, blade: BladeIndex, value: Complex64) {
        debug_assert!(blade.is_valid(self.dim));
        if value == Complex64::default() {
            self.coeffs.remove(&blade);
        } else {
            self.coeffs.insert(blade, value);
        }
    }

    pub fn add_term(&mut self, blade: BladeIndex, value: Complex64) {
        let v = self.get(blade) + value;
        self.set(blade, v);
    }

    pub fn terms(&self) -> impl Iterator<Item = (BladeIndex, Complex64)> + '_ {
        self.coeffs.iter().map(|(b, c)| (*b, *c))
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn scalar_part(&self) -> Complex64 {
        self.get(BladeIndex::SCALAR)
    }

    /// True when every non-scalar coefficient is below `tol` in modulus.
    pub fn is_scalar(&self, tol: f64) -> bool {
        self.terms()
            .all(|(b, c)| b == BladeIndex::SCALAR || c.norm() <= tol)
    }

    pub fn scale(&self, factor: Complex64) -> Self {
        let mut out = Self::zero(self.dim);
        for (b, c) in self.terms() {
            out.set(b, c * factor);
        }
        out
    }

    pub fn scale_real(&self, factor: f64) -> Self {
        self.scale(Complex64::new(factor, 0.0))
    }

    /// Geometric product `self · other`.
    pub fn geometric_product(&self, other: &Multivector) -> Result<Multivector> {
        if self.dim != other.dim {
            return Err(Error::DimensionMismatch {
                left: self.dim,
                right: other.dim,
            });
        }
        let mut out = Multivector::zero(self.dim);
        for (a, ca) in self.terms() {
            for (b, cb) in other.terms() {
                let (sign, blade) = blade_product(self.dim, a, b);
                out.add_term(blade, ca * cb * sign);
            }
        }
        Ok(out)
    }

    /// Clifford conjugation `a ↦ a†`: reverses products, flips the sign of
    /// `e_1 … e_n`, keeps `e_{n+1} … e_{2n}` and conjugates coefficients.
    pub fn dagger(&self) -> Multivector {
        let mut out = Multivector::zero(self.dim);
        for (b, c) in self.terms() {
            out.set(b, c.conj() * blade_dagger_sign(self.dim, b));
        }
        out
    }

    /// `‖a‖ = √(scalar part of a†a)`.
    pub fn norm(&self) -> Result<f64> {
        let sq = self.dagger().geometric_product(self)?.scalar_part();
        let scale = self.norm_sqr_coeffs().max(1.0);
        if sq.im.abs() > NORM_TOL * scale || sq.re < -NORM_TOL * scale {
            return Err(Error::InternalInconsistency(format!(
                "scalar part of a†a is {sq}, expected a nonnegative real"
            )));
        }
        Ok(sq.re.max(0.0).sqrt())
    }

    /// Σ |a_J|², the Euclidean size of the coefficient vector.
    pub fn norm_sqr_coeffs(&self) -> f64 {
        self.coeffs.values().map(|c| c.norm_sqr()).sum()
    }

    /// Largest coefficient modulus.
    pub fn max_abs(&self) -> f64 {
        self.coeffs.values().map(|c| c.norm()).fold(0.0, f64::max)
    }

    /// Largest coefficient modulus of `self - other`.
    pub fn max_abs_diff(&self, other: &Multivector) -> f64 {
        let mut worst: f64 = 0.0;
        for (b, c) in self.terms() {
            worst = worst.max((c - other.get(b)).norm());
        }
        for (b, c) in other.terms() {
            if !self.coeffs.contains_key(&b) {
                worst = worst.max(c.norm());
            }
        }
        worst
    }

    /// Drops coefficients with modulus at or below `tol`.
    pub fn pruned(&self, tol: f64) -> Multivector {
        let mut out = Multivector::zero(self.dim);
        for (b, c) in self.terms() {
            if c.norm() > tol {
                out.set(b, c);
            }
        }
        out
    }
}

impl fmt::Display for Multivector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self
            .terms()
            .map(|(b, c)| format!("({}{:+}i){}", c.re, c.im, b))
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}

impl Add for &Multivector {
    type Output = Multivector;
    fn add(self, rhs: &Multivector) -> Multivector {
        assert_eq!(self.dim, rhs.dim, "multivector dimension mismatch");
        let mut out = self.clone();
        for (b, c) in rhs.terms() {
            out.add_term(b, c);
        }
        out
    }
}

impl AddAssign<&Multivector> for Multivector {
    fn add_assign(&mut self, rhs: &Multivector) {
        assert_eq!(self.dim, rhs.dim, "multivector dimension mismatch");
        for (b, c) in rhs.terms() {
            self.add_term(b, c);
        }
    }
}

impl Sub for &Multivector {
    type Output = Multivector;
    fn sub(self, rhs: &Multivector) -> Multivector {
        assert_eq!(self.dim, rhs.dim, "multivector dimension mismatch");
        let mut out = self.clone();
        for (b, c) in rhs.terms() {
            out.add_term(b, -c);
        }
        out
    }
}

impl Neg for &Multivector {
    type Output = Multivector;
    fn neg(self) -> Multivector {
        self.scale_real(-1.0)
    }
}

/// Panics on dimension mismatch; use [`Multivector::geometric_product`]
/// for the checked form.
impl Mul for &Multivector {
    type Output = Multivector;
    fn mul(self, rhs: &Multivector) -> Multivector {
        self.geometric_product(rhs)
            .expect("multivector dimension mismatch")
    }
}
