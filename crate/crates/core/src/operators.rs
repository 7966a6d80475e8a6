//! Discrete Laplacian `Δ_h` and the fractional Dirac operator `D_{h,α}`.
//!
//! The Dirac operator is defined by its Fourier multiplier
//!
//! ```text
//! z_{h,α}(ξ) = Σ_j −i e_j [sin((1−α)hξ_j) + sin(αhξ_j)]/h
//!            + Σ_j e_{n+j} [cos(αhξ_j) − cos((1−α)hξ_j)]/h
//! ```
//!
//! which squares to `d_h(ξ)² = (4/h²) Σ_j sin²(hξ_j/2)`. Finite-difference
//! stencils are provided as an independent route; for `α = r/s` they run on
//! the grid refined by `s`, where the shifts `αh` and `(1−α)h` are whole steps.

use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

use num_complex::Complex64;
use rayon::prelude::*;

use crate::clifford::Multivector;
use crate::error::Result;
use crate::lattice::{Field, GridSpec};
use crate::spectral::{coarsen, dft_forward, dft_inverse, refine};

/// `d_h(ξ)²`.
pub fn d_squared(xi: &[f64], spec: &GridSpec) -> f64 {
    let h = spec.h();
    xi.iter().map(|&x| (h * x / 2.0).sin().powi(2)).sum::<f64>() * 4.0 / (h * h)
}

/// `z_{h,α}(ξ)` for a floating `α`.
pub fn z_multiplier_alpha(xi: &[f64], n: usize, h: f64, alpha: f64) -> Multivector {
    let mut z = Multivector::zero(n);
    for (j, &x) in xi.iter().enumerate() {
        let s = ((1.0 - alpha) * h * x).sin() + (alpha * h * x).sin();
        let c = (alpha * h * x).cos() - ((1.0 - alpha) * h * x).cos();
        z.add_term(
            crate::clifford::BladeIndex::generator(j + 1),
            Complex64::new(0.0, -s / h),
        );
        z.add_term(
            crate::clifford::BladeIndex::generator(n + j + 1),
            Complex64::new(c / h, 0.0),
        );
    }
    z
}

/// `z_{h,α}(ξ)` with the grid's own `α`.
pub fn z_multiplier(xi: &[f64], spec: &GridSpec) -> Multivector {
    z_multiplier_alpha(xi, spec.n(), spec.h(), spec.alpha().to_f64())
}

/// Multiplier tables `d²` and `z` at every momentum node of a grid.
#[derive(Debug, Clone)]
pub struct Multipliers {
    spec: GridSpec,
    d2: Vec<f64>,
    z: Vec<Multivector>,
}

type CacheKey = (usize, u64, u32, u32, usize);

fn cache() -> &'static Mutex<HashMap<CacheKey, Arc<Multipliers>>> {
    static CACHE: OnceLock<Mutex<HashMap<CacheKey, Arc<Multipliers>>>> = OnceLock::new();
    CACHE.get_or_init(|| Mutex::new(HashMap::new()))
}

impl Multipliers {
    pub fn new(spec: GridSpec) -> Self {
        let (d2, z) = (0..spec.len())
            .into_par_iter()
            .map(|i| {
                let xi = spec.momentum_point(i);
                (d_squared(&xi, &spec), z_multiplier(&xi, &spec))
            })
            .unzip();
        Multipliers { spec, d2, z }
    }

    /// Shared table for `spec`, built on first use.
    pub fn cached(spec: &GridSpec) -> Arc<Multipliers> {
        let key = (
            spec.n(),
            spec.h().to_bits(),
            spec.alpha().num(),
            spec.alpha().den(),
            spec.points(),
        );
        if let Some(m) = cache().lock().expect("multiplier cache poisoned").get(&key) {
            return Arc::clone(m);
        }
        let built = Arc::new(Multipliers::new(*spec));
        cache()
            .lock()
            .expect("multiplier cache poisoned")
            .entry(key)
            .or_insert(built)
            .clone()
    }

    pub fn spec(&self) -> &GridSpec {
        &self.spec
    }

    pub fn d2(&self) -> &[f64] {
        &self.d2
    }

    pub fn z(&self) -> &[Multivector] {
        &self.z
    }

    /// Largest coefficient deviation of `z(ξ)² − d(ξ)²` over all nodes.
    pub fn square_condition_deviation(&self) -> f64 {
        self.z
            .par_iter()
            .zip(&self.d2)
            .map(|(z, &d2)| (z * z).max_abs_diff(&Multivector::real(self.spec.n(), d2)))
            .reduce(|| 0.0, f64::max)
    }
}

/// Five-point (per axis) stencil `Σ_j [f(x+he_j) + f(x−he_j) − 2f(x)]/h²`.
pub fn laplacian_apply(f: &Field) -> Field {
    let spec = *f.spec();
    let inv_h2 = 1.0 / (spec.h() * spec.h());
    let values: Vec<Multivector> = (0..spec.len())
        .into_par_iter()
        .map(|x| {
            let centre = f.get(x);
            let mut acc = Multivector::zero(spec.n());
            for axis in 0..spec.n() {
                acc += f.get(spec.shifted(x, axis, 1));
                acc += f.get(spec.shifted(x, axis, -1));
                acc += &centre.scale_real(-2.0);
            }
            acc.scale_real(inv_h2)
        })
        .collect();
    Field::from_values(spec, values).expect("stencil preserves the grid")
}

/// `F⁻¹[−d²·Ff]`.
pub fn laplacian_apply_spectral(f: &Field) -> Field {
    let m = Multipliers::cached(f.spec());
    let spectrum = dft_forward(f).map_nodes(|i, v| v.scale_real(-m.d2()[i]));
    dft_inverse(&spectrum)
}

/// `D_{h,α} f = F⁻¹[z_{h,α}·Ff]`, multiplier on the left.
pub fn dirac_apply(f: &Field) -> Field {
    let m = Multipliers::cached(f.spec());
    let spectrum = dft_forward(f).map_nodes(|i, v| &m.z()[i] * v);
    dft_inverse(&spectrum)
}

/// Dirac–Kähler stencil with step `ε = steps·h`:
///
/// ```text
/// D_ε f  = Σ_j e_j (f(x+ε) − f(x−ε))/(2ε) + e_{n+j} (2f(x) − f(x+ε) − f(x−ε))/(2ε)
/// D_ε† f = Σ_j −e_j (f(x+ε) − f(x−ε))/(2ε) + e_{n+j} (2f(x) − f(x+ε) − f(x−ε))/(2ε)
/// ```
pub fn dirac_kahler_stencil(f: &Field, steps: usize, dagger: bool) -> Field {
    let spec = *f.spec();
    let n = spec.n();
    let eps = steps as f64 * spec.h();
    let odd_sign = if dagger { -1.0 } else { 1.0 };
    let values: Vec<Multivector> = (0..spec.len())
        .into_par_iter()
        .map(|x| {
            let centre = f.get(x);
            let mut acc = Multivector::zero(n);
            for axis in 0..n {
                let fp = f.get(spec.shifted(x, axis, steps as isize));
                let fm = f.get(spec.shifted(x, axis, -(steps as isize)));
                let central = (fp - fm).scale_real(odd_sign / (2.0 * eps));
                let second = (&(&centre.scale_real(2.0) - fp) - fm).scale_real(1.0 / (2.0 * eps));
                let ej = Multivector::generator(n, axis + 1, Complex64::new(1.0, 0.0));
                let enj = Multivector::generator(n, n + axis + 1, Complex64::new(1.0, 0.0));
                acc += &(&ej * &central);
                acc += &(&enj * &second);
            }
            acc
        })
        .collect();
    Field::from_values(spec, values).expect("stencil preserves the grid")
}

/// `D_{h,α} = (1−α)D_{(1−α)h} − αD†_{αh}` by finite differences on the grid
/// refined by the denominator of `α`, sampled back onto the original sites.
pub fn dirac_stencil_apply(f: &Field) -> Result<Field> {
    let alpha = f.spec().alpha();
    let (r, s) = (alpha.num() as usize, alpha.den() as usize);
    if r == 0 {
        return Ok(dirac_kahler_stencil(f, 1, false));
    }
    let fine = refine(f, s)?;
    let a = alpha.to_f64();
    let forward = dirac_kahler_stencil(&fine, s - r, false).scale_real(1.0 - a);
    let backward = dirac_kahler_stencil(&fine, r, true).scale_real(a);
    coarsen(&forward.sub(&backward)?, s)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::clifford::BladeIndex;
    use crate::lattice::{delta_h, Rational};
    use std::f64::consts::PI;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn d_squared_values() {
        let s1 = GridSpec::new(1, 1.0, Rational::ZERO, 8).unwrap();
        assert_eq!(d_squared(&[0.0], &s1), 0.0);
        assert!((d_squared(&[PI], &s1) - 4.0).abs() < 1e-14);
        let s2 = GridSpec::new(2, 1.0, Rational::ZERO, 8).unwrap();
        assert!((d_squared(&[PI, PI / 2.0], &s2) - 6.0).abs() < 1e-14);
    }

    #[test]
    fn z_values() {
        let half = GridSpec::new(1, 1.0, Rational::HALF, 8).unwrap();
        assert!(z_multiplier(&[0.0], &half).max_abs() == 0.0);
        let z = z_multiplier(&[PI], &half);
        assert!((z.get(BladeIndex(1)) - c(0.0, -2.0)).norm() < 1e-14);
        assert!(z.get(BladeIndex(2)).norm() < 1e-14);

        let zero = GridSpec::new(1, 1.0, Rational::ZERO, 8).unwrap();
        let z = z_multiplier(&[PI / 2.0], &zero);
        assert!((z.get(BladeIndex(1)) - c(0.0, -1.0)).norm() < 1e-14);
        assert!((z.get(BladeIndex(2)) - c(1.0, 0.0)).norm() < 1e-14);
    }

    #[test]
    fn laplacian_of_delta() {
        let spec = GridSpec::new(1, 1.0, Rational::ZERO, 4).unwrap();
        let out = laplacian_apply(&delta_h(spec));
        let got: Vec<f64> = out.values().iter().map(|v| v.scalar_part().re).collect();
        assert_eq!(got, vec![-2.0, 1.0, 0.0, 1.0]);
    }

    #[test]
    fn constant_fields_are_annihilated() {
        let spec = GridSpec::new(2, 0.5, "1/4".parse().unwrap(), 8).unwrap();
        let f = Field::from_fn(spec, |_| Multivector::generator(2, 3, c(1.5, -0.5)));
        assert!(laplacian_apply(&f).sup_norm() < 1e-13);
        assert!(dirac_apply(&f).sup_norm() < 1e-12);
    }

    #[test]
    fn cached_table_is_shared() {
        let spec = GridSpec::new(1, 1.0, Rational::HALF, 16).unwrap();
        let a = Multipliers::cached(&spec);
        let b = Multipliers::cached(&spec);
        assert!(Arc::ptr_eq(&a, &b));
        assert_eq!(a.d2()[spec.zero_mode()], 0.0);
    }
}
