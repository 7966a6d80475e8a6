//! Periodic truncation of the lattice `hℤⁿ`, Clifford-valued fields on it,
//! the sesquilinear form and the discrete delta.

use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::clifford::{BladeIndex, Multivector};
use crate::error::{Error, Result};

/// Exact nonnegative rational `num/den` in lowest terms.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Rational {
    num: u32,
    den: u32,
}

fn gcd(mut a: u32, mut b: u32) -> u32 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

impl Rational {
    pub fn new(num: u32, den: u32) -> Result<Self> {
        if den == 0 {
            return Err(Error::Parse("zero denominator".into()));
        }
        let g = gcd(num, den).max(1);
        Ok(Rational {
            num: num / g,
            den: den / g,
        })
    }

    pub const ZERO: Rational = Rational { num: 0, den: 1 };
    pub const HALF: Rational = Rational { num: 1, den: 2 };

    pub fn num(self) -> u32 {
        self.num
    }

    pub fn den(self) -> u32 {
        self.den
    }

    pub fn to_f64(self) -> f64 {
        self.num as f64 / self.den as f64
    }
}

impl fmt::Display for Rational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.num, self.den)
    }
}

impl FromStr for Rational {
    type Err = Error;

    /// Accepts only the `r/s` form.
    fn from_str(s: &str) -> Result<Self> {
        let (r, d) = s
            .trim()
            .split_once('/')
            .ok_or_else(|| Error::Parse(format!("expected a rational r/s, got {s:?}")))?;
        let parse = |t: &str| {
            t.trim()
                .parse::<u32>()
                .map_err(|e| Error::Parse(format!("bad rational {s:?}: {e}")))
        };
        Rational::new(parse(r)?, parse(d)?)
    }
}

impl Serialize for Rational {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Rational {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// Geometry of the periodic lattice: `points` sites per axis, spacing `h`,
/// dimension `n`, and the fractional parameter `α` of the Dirac operator.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawGridSpec")]
pub struct GridSpec {
    n: usize,
    h: f64,
    alpha: Rational,
    points: usize,
}

#[derive(Deserialize)]
struct RawGridSpec {
    n: usize,
    h: f64,
    alpha: Rational,
    points: usize,
}

impl TryFrom<RawGridSpec> for GridSpec {
    type Error = Error;
    fn try_from(r: RawGridSpec) -> Result<Self> {
        GridSpec::new(r.n, r.h, r.alpha, r.points)
    }
}

impl GridSpec {
    pub fn new(n: usize, h: f64, alpha: Rational, points: usize) -> Result<Self> {
        if !(1..=3).contains(&n) {
            return Err(Error::InvalidGrid(format!("dimension {n} not in 1..=3")));
        }
        if !(h.is_finite() && h > 0.0) {
            return Err(Error::InvalidGrid(format!("spacing {h} must be positive")));
        }
        if 2 * alpha.num() > alpha.den() {
            return Err(Error::InvalidGrid(format!("alpha {alpha} exceeds 1/2")));
        }
        if points < 4 || !points.is_multiple_of(2) {
            return Err(Error::InvalidGrid(format!(
                "{points} points per axis; need an even number >= 4"
            )));
        }
        Ok(GridSpec {
            n,
            h,
            alpha,
            points,
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn h(&self) -> f64 {
        self.h
    }

    pub fn alpha(&self) -> Rational {
        self.alpha
    }

    pub fn points(&self) -> usize {
        self.points
    }

    /// Total number of sites `Nⁿ`.
    pub fn len(&self) -> usize {
        self.points.pow(self.n as u32)
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// Lattice cell volume `hⁿ`.
    pub fn cell_volume(&self) -> f64 {
        self.h.powi(self.n as i32)
    }

    /// Momentum-side quadrature weight `(2π/(Nh))ⁿ`.
    pub fn momentum_weight(&self) -> f64 {
        (2.0 * PI / (self.points as f64 * self.h)).powi(self.n as i32)
    }

    /// Same grid with a different `α`.
    pub fn with_alpha(&self, alpha: Rational) -> Result<Self> {
        GridSpec::new(self.n, self.h, alpha, self.points)
    }

    /// Multi-index of a linear position; the last axis varies fastest.
    pub fn multi_index(&self, mut lin: usize) -> Vec<usize> {
        let mut idx = vec![0; self.n];
        for slot in idx.iter_mut().rev() {
            *slot = lin % self.points;
            lin /= self.points;
        }
        idx
    }

    pub fn linear_index(&self, idx: &[usize]) -> usize {
        idx.iter().fold(0, |acc, &k| acc * self.points + k)
    }

    /// Linear index of `idx` displaced by `shift` along `axis`, periodically.
    pub fn shifted(&self, lin: usize, axis: usize, shift: isize) -> usize {
        let stride = self.points.pow((self.n - 1 - axis) as u32);
        let k = (lin / stride) % self.points;
        let nk = (k as isize + shift).rem_euclid(self.points as isize) as usize;
        lin - k * stride + nk * stride
    }

    /// Physical coordinates `x = k·h` of a site.
    pub fn site_point(&self, lin: usize) -> Vec<f64> {
        self.multi_index(lin)
            .into_iter()
            .map(|k| k as f64 * self.h)
            .collect()
    }

    /// Signed momentum integer for axis position `i`: `k = i − N/2 + 1`.
    pub fn momentum_k(&self, i: usize) -> i64 {
        i as i64 - (self.points / 2) as i64 + 1
    }

    /// Axis position of a signed momentum integer in `(−N/2, N/2]`.
    pub fn momentum_position(&self, k: i64) -> usize {
        (k + (self.points / 2) as i64 - 1) as usize
    }

    /// Signed momentum integers of a node.
    pub fn momentum_ks(&self, lin: usize) -> Vec<i64> {
        self.multi_index(lin)
            .into_iter()
            .map(|i| self.momentum_k(i))
            .collect()
    }

    /// Momentum node `ξ_k = 2πk/(Nh)`.
    pub fn momentum_point(&self, lin: usize) -> Vec<f64> {
        let scale = 2.0 * PI / (self.points as f64 * self.h);
        self.momentum_ks(lin)
            .into_iter()
            .map(|k| k as f64 * scale)
            .collect()
    }

    /// Linear index of the zero-momentum node.
    pub fn zero_mode(&self) -> usize {
        let pos = self.momentum_position(0);
        self.linear_index(&vec![pos; self.n])
    }
}

/// One multivector per lattice site.
#[derive(Debug, Clone, PartialEq)]
pub struct Field {
    spec: GridSpec,
    values: Vec<Multivector>,
}

impl Field {
    pub fn zeros(spec: GridSpec) -> Self {
        Field {
            spec,
            values: vec![Multivector::zero(spec.n()); spec.len()],
        }
    }

    pub fn from_values(spec: GridSpec, values: Vec<Multivector>) -> Result<Self> {
        if values.len() != spec.len() {
            return Err(Error::InvalidParameter(format!(
                "{} values for {} sites",
                values.len(),
                spec.len()
            )));
        }
        if let Some(bad) = values.iter().find(|v| v.dim() != spec.n()) {
            return Err(Error::DimensionMismatch {
                left: spec.n(),
                right: bad.dim(),
            });
        }
        Ok(Field { spec, values })
    }

    pub fn from_fn(spec: GridSpec, f: impl Fn(usize) -> Multivector) -> Self {
        let values = (0..spec.len()).map(f).collect();
        Field { spec, values }
    }

    /// Scalar field from per-site complex values.
    pub fn from_scalars(spec: GridSpec, values: &[Complex64]) -> Result<Self> {
        if values.len() != spec.len() {
            return Err(Error::InvalidParameter(format!(
                "{} values for {} sites",
                values.len(),
                spec.len()
            )));
        }
        Ok(Field::from_fn(spec, |i| {
            Multivector::scalar(spec.n(), values[i])
        }))
    }

    pub fn spec(&self) -> &GridSpec {
        &self.spec
    }

    pub fn values(&self) -> &[Multivector] {
        &self.values
    }

    pub fn into_values(self) -> Vec<Multivector> {
        self.values
    }

    pub fn get(&self, lin: usize) -> &Multivector {
        &self.values[lin]
    }

    pub fn set(&mut self, lin: usize, value: Multivector) {
        assert_eq!(value.dim(), self.spec.n());
        self.values[lin] = value;
    }

    pub fn map(&self, f: impl Fn(&Multivector) -> Multivector) -> Field {
        Field {
            spec: self.spec,
            values: self.values.iter().map(f).collect(),
        }
    }

    pub fn scale(&self, c: Complex64) -> Field {
        self.map(|v| v.scale(c))
    }

    pub fn scale_real(&self, c: f64) -> Field {
        self.map(|v| v.scale_real(c))
    }

    /// Left-multiplies every site value by `a`.
    pub fn left_mul(&self, a: &Multivector) -> Field {
        self.map(|v| a * v)
    }

    pub fn add(&self, other: &Field) -> Result<Field> {
        self.zip_with(other, |a, b| a + b)
    }

    pub fn sub(&self, other: &Field) -> Result<Field> {
        self.zip_with(other, |a, b| a - b)
    }

    fn zip_with(
        &self,
        other: &Field,
        f: impl Fn(&Multivector, &Multivector) -> Multivector,
    ) -> Result<Field> {
        ensure_same_spec(&self.spec, &other.spec)?;
        Ok(Field {
            spec: self.spec,
            values: self
                .values
                .iter()
                .zip(&other.values)
                .map(|(a, b)| f(a, b))
                .collect(),
        })
    }

    /// `self + c·other`.
    pub fn axpy(&self, c: Complex64, other: &Field) -> Result<Field> {
        self.zip_with(other, |a, b| a + &b.scale(c))
    }

    /// Largest coefficient modulus over all sites and blades.
    pub fn sup_norm(&self) -> f64 {
        self.values
            .iter()
            .map(Multivector::max_abs)
            .fold(0.0, f64::max)
    }

    /// Largest coefficient difference over all sites and blades.
    pub fn max_abs_diff(&self, other: &Field) -> Result<f64> {
        ensure_same_spec(&self.spec, &other.spec)?;
        Ok(self
            .values
            .iter()
            .zip(&other.values)
            .map(|(a, b)| a.max_abs_diff(b))
            .fold(0.0, f64::max))
    }

    /// Blades carrying a nonzero coefficient somewhere in the field.
    pub fn support(&self) -> Vec<BladeIndex> {
        let mut blades: Vec<BladeIndex> = self
            .values
            .iter()
            .flat_map(|v| v.terms().map(|(b, _)| b))
            .collect();
        blades.sort();
        blades.dedup();
        blades
    }

    /// Per-site coefficient of one blade.
    pub fn component(&self, blade: BladeIndex) -> Vec<Complex64> {
        self.values.iter().map(|v| v.get(blade)).collect()
    }

    /// Assembles a field from per-blade component arrays.
    pub fn from_components(spec: GridSpec, comps: &[(BladeIndex, Vec<Complex64>)]) -> Field {
        let mut values = vec![Multivector::zero(spec.n()); spec.len()];
        for (blade, data) in comps {
            for (v, c) in values.iter_mut().zip(data) {
                v.add_term(*blade, *c);
            }
        }
        Field { spec, values }
    }

    /// Drops coefficients at or below `tol`.
    pub fn pruned(&self, tol: f64) -> Field {
        self.map(|v| v.pruned(tol))
    }
}

pub(crate) fn ensure_same_spec(a: &GridSpec, b: &GridSpec) -> Result<()> {
    if a == b {
        Ok(())
    } else {
        Err(Error::SpecMismatch)
    }
}

/// Discrete delta: `1/hⁿ` on the scalar blade at the origin, zero elsewhere.
pub fn delta_h(spec: GridSpec) -> Field {
    let mut f = Field::zeros(spec);
    f.set(0, Multivector::real(spec.n(), 1.0 / spec.cell_volume()));
    f
}

/// `⟨f, g⟩ = Σ_x hⁿ f(x)† g(x)`.
pub fn sesquilinear(f: &Field, g: &Field) -> Result<Multivector> {
    ensure_same_spec(f.spec(), g.spec())?;
    let mut acc = Multivector::zero(f.spec().n());
    for (a, b) in f.values().iter().zip(g.values()) {
        acc += &a.dagger().geometric_product(b)?;
    }
    Ok(acc.scale_real(f.spec().cell_volume()))
}

/// Scalar part of the total mass `Σ_x hⁿ f(x)`.
pub fn normalization_check(f: &Field) -> f64 {
    let total: Complex64 = f.values().iter().map(Multivector::scalar_part).sum();
    total.re * f.spec().cell_volume()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rational_parsing() {
        let r: Rational = "2/8".parse().unwrap();
        assert_eq!((r.num(), r.den()), (1, 4));
        assert!("0.25".parse::<Rational>().is_err());
        assert!("1/0".parse::<Rational>().is_err());
        assert_eq!("0/3".parse::<Rational>().unwrap(), Rational::ZERO);
    }

    #[test]
    fn grid_validation() {
        assert!(GridSpec::new(0, 1.0, Rational::ZERO, 8).is_err());
        assert!(GridSpec::new(4, 1.0, Rational::ZERO, 8).is_err());
        assert!(GridSpec::new(1, -1.0, Rational::ZERO, 8).is_err());
        assert!(GridSpec::new(1, 1.0, "3/4".parse().unwrap(), 8).is_err());
        assert!(GridSpec::new(1, 1.0, Rational::ZERO, 7).is_err());
        assert!(GridSpec::new(1, 1.0, Rational::ZERO, 2).is_err());
        assert!(GridSpec::new(3, 0.5, Rational::HALF, 4).is_ok());
    }

    #[test]
    fn momentum_nodes_are_ascending_in_brillouin_zone() {
        let spec = GridSpec::new(1, 0.5, Rational::ZERO, 8).unwrap();
        let xs: Vec<f64> = (0..8).map(|i| spec.momentum_point(i)[0]).collect();
        assert!(xs.windows(2).all(|w| w[0] < w[1]));
        assert!(xs[0] > -PI / 0.5);
        assert!((xs[7] - PI / 0.5).abs() < 1e-12);
        assert_eq!(spec.momentum_ks(spec.zero_mode()), vec![0]);
    }

    #[test]
    fn index_roundtrip_and_shift() {
        let spec = GridSpec::new(3, 1.0, Rational::ZERO, 4).unwrap();
        for lin in 0..spec.len() {
            assert_eq!(spec.linear_index(&spec.multi_index(lin)), lin);
        }
        let lin = spec.linear_index(&[3, 0, 2]);
        assert_eq!(spec.shifted(lin, 0, 1), spec.linear_index(&[0, 0, 2]));
        assert_eq!(spec.shifted(lin, 2, -3), spec.linear_index(&[3, 0, 3]));
    }

    #[test]
    fn delta_values() {
        let spec = GridSpec::new(1, 0.5, Rational::ZERO, 8).unwrap();
        let d = delta_h(spec);
        assert_eq!(d.get(0).scalar_part().re, 2.0);
        assert!(d.values()[1..].iter().all(Multivector::is_zero));
        assert!((normalization_check(&d) - 1.0).abs() < 1e-15);
        assert!((normalization_check(&d.scale_real(2.0)) - 2.0).abs() < 1e-15);

        let spec2 = GridSpec::new(2, 1.0, Rational::ZERO, 4).unwrap();
        assert_eq!(delta_h(spec2).get(0).scalar_part().re, 1.0);
    }

    #[test]
    fn sesquilinear_examples() {
        let spec = GridSpec::new(2, 0.5, Rational::ZERO, 4).unwrap();
        let d = delta_h(spec);
        let s = sesquilinear(&d, &d).unwrap();
        assert!((s.scalar_part().re - 1.0 / spec.cell_volume()).abs() < 1e-12);

        let spec1 = GridSpec::new(1, 1.0, Rational::ZERO, 4).unwrap();
        let one = Complex64::new(1.0, 0.0);
        let mut f = Field::zeros(spec1);
        f.set(1, Multivector::generator(1, 1, one));
        let mut g = Field::zeros(spec1);
        g.set(1, Multivector::one(1));
        let expected = Multivector::generator(1, 1, -one);
        assert_eq!(sesquilinear(&f, &g).unwrap(), expected);
    }

    #[test]
    fn spec_mismatch_is_an_error() {
        let a = GridSpec::new(1, 1.0, Rational::ZERO, 4).unwrap();
        let b = GridSpec::new(1, 1.0, Rational::ZERO, 8).unwrap();
        assert_eq!(
            sesquilinear(&Field::zeros(a), &Field::zeros(b)),
            Err(Error::SpecMismatch)
        );
    }

    #[test]
    fn gridspec_json_roundtrip() {
        let spec = GridSpec::new(2, 0.25, "1/4".parse().unwrap(), 16).unwrap();
        let s = serde_json::to_string(&spec).unwrap();
        assert!(s.contains("\"1/4\""));
        let back: GridSpec = serde_json::from_str(&s).unwrap();
        assert_eq!(back, spec);
        let bad = s.replace("16", "15");
        assert!(serde_json::from_str::<GridSpec>(&bad).is_err());
    }
}
