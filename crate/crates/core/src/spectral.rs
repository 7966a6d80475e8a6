//! Discrete Fourier transform on the periodic lattice and the discrete
//! convolution calculus.
//!
//! Conventions, with `x = j·h` and `ξ_k = 2πk/(Nh)`:
//!
//! * forward: `(Ff)(ξ) = hⁿ (2π)^{−n/2} Σ_x f(x) e^{i x·ξ}`
//! * inverse: `f(x) = (2π)^{−n/2} w Σ_k F(ξ_k) e^{−i x·ξ_k}`, `w = (2π/(Nh))ⁿ`
//! * convolution: `(K ⋆ f)(x) = Σ_y hⁿ K(x−y) f(y)`, kernel on the left,
//!   so that `F(K ⋆ f) = (2π)^{n/2} FK · Ff`.

use std::f64::consts::PI;

use num_complex::Complex64;
use rayon::prelude::*;
use rustfft::{FftDirection, FftPlanner};

use crate::clifford::{BladeIndex, Multivector};
use crate::error::{Error, Result};
use crate::lattice::{ensure_same_spec, Field, GridSpec};

/// One multivector per momentum node, nodes in ascending `k` per axis.
#[derive(Debug, Clone, PartialEq)]
pub struct MomentumField {
    spec: GridSpec,
    values: Vec<Multivector>,
}

impl MomentumField {
    pub fn zeros(spec: GridSpec) -> Self {
        MomentumField {
            spec,
            values: vec![Multivector::zero(spec.n()); spec.len()],
        }
    }

    pub fn from_fn(spec: GridSpec, f: impl Fn(usize) -> Multivector + Sync + Send) -> Self {
        let values = (0..spec.len()).into_par_iter().map(f).collect();
        MomentumField { spec, values }
    }

    pub fn from_values(spec: GridSpec, values: Vec<Multivector>) -> Result<Self> {
        if values.len() != spec.len() {
            return Err(Error::InvalidParameter(format!(
                "{} values for {} momentum nodes",
                values.len(),
                spec.len()
            )));
        }
        Ok(MomentumField { spec, values })
    }

    pub fn spec(&self) -> &GridSpec {
        &self.spec
    }

    pub fn values(&self) -> &[Multivector] {
        &self.values
    }

    pub fn get(&self, lin: usize) -> &Multivector {
        &self.values[lin]
    }

    pub fn set(&mut self, lin: usize, value: Multivector) {
        self.values[lin] = value;
    }

    /// Applies `f(node, value)` at every node.
    pub fn map_nodes(&self, f: impl Fn(usize, &Multivector) -> Multivector + Sync + Send) -> Self {
        let values = self
            .values
            .par_iter()
            .enumerate()
            .map(|(i, v)| f(i, v))
            .collect();
        MomentumField {
            spec: self.spec,
            values,
        }
    }

    pub fn max_abs_diff(&self, other: &MomentumField) -> Result<f64> {
        ensure_same_spec(&self.spec, &other.spec)?;
        Ok(self
            .values
            .iter()
            .zip(&other.values)
            .map(|(a, b)| a.max_abs_diff(b))
            .fold(0.0, f64::max))
    }

    pub fn sup_norm(&self) -> f64 {
        self.values
            .iter()
            .map(Multivector::max_abs)
            .fold(0.0, f64::max)
    }

    fn support(&self) -> Vec<BladeIndex> {
        let mut blades: Vec<BladeIndex> = self
            .values
            .iter()
            .flat_map(|v| v.terms().map(|(b, _)| b))
            .collect();
        blades.sort();
        blades.dedup();
        blades
    }
}

/// Position on one axis of the FFT bin for signed momentum `k`.
fn bin_of_position(points: usize, pos: usize) -> usize {
    (pos + points / 2 + 1) % points
}

/// In-place n-dimensional FFT over a row-major `Nⁿ` array, with optional
/// reordering between FFT bins and ascending momentum positions.
fn fft_nd(data: &mut [Complex64], spec: &GridSpec, direction: FftDirection, to_momentum: bool) {
    let n = spec.n();
    let points = spec.points();
    let fft = FftPlanner::new().plan_fft(points, direction);
    let mut line = vec![Complex64::default(); points];
    let mut scratch = vec![Complex64::default(); fft.get_inplace_scratch_len()];
    for axis in 0..n {
        let stride = points.pow((n - 1 - axis) as u32);
        let block = stride * points;
        for start in (0..data.len()).filter(|i| i % block < stride) {
            if to_momentum {
                for (j, slot) in line.iter_mut().enumerate() {
                    *slot = data[start + j * stride];
                }
                fft.process_with_scratch(&mut line, &mut scratch);
                for pos in 0..points {
                    data[start + pos * stride] = line[bin_of_position(points, pos)];
                }
            } else {
                for pos in 0..points {
                    line[bin_of_position(points, pos)] = data[start + pos * stride];
                }
                fft.process_with_scratch(&mut line, &mut scratch);
                for (j, v) in line.iter().enumerate() {
                    data[start + j * stride] = *v;
                }
            }
        }
    }
}

fn assemble(spec: GridSpec, comps: Vec<(BladeIndex, Vec<Complex64>)>) -> Vec<Multivector> {
    let mut values = vec![Multivector::zero(spec.n()); spec.len()];
    for (blade, data) in comps {
        for (v, c) in values.iter_mut().zip(data) {
            v.add_term(blade, c);
        }
    }
    values
}

/// Forward transform, computed by FFT per blade component.
pub fn dft_forward(f: &Field) -> MomentumField {
    let spec = *f.spec();
    let scale = spec.cell_volume() * (2.0 * PI).powf(-(spec.n() as f64) / 2.0);
    let comps: Vec<(BladeIndex, Vec<Complex64>)> = f
        .support()
        .into_par_iter()
        .map(|blade| {
            let mut data = f.component(blade);
            fft_nd(&mut data, &spec, FftDirection::Inverse, true);
            data.iter_mut().for_each(|c| *c *= scale);
            (blade, data)
        })
        .collect();
    MomentumField {
        spec,
        values: assemble(spec, comps),
    }
}

/// Inverse transform, computed by FFT per blade component.
pub fn dft_inverse(big_f: &MomentumField) -> Field {
    let spec = *big_f.spec();
    let scale = spec.momentum_weight() * (2.0 * PI).powf(-(spec.n() as f64) / 2.0);
    let comps: Vec<(BladeIndex, Vec<Complex64>)> = big_f
        .support()
        .into_par_iter()
        .map(|blade| {
            let mut data: Vec<Complex64> = big_f.values.iter().map(|v| v.get(blade)).collect();
            fft_nd(&mut data, &spec, FftDirection::Forward, false);
            data.iter_mut().for_each(|c| *c *= scale);
            (blade, data)
        })
        .collect();
    Field::from_values(spec, assemble(spec, comps)).expect("transform preserves the grid")
}

fn phase(spec: &GridSpec, site: usize, node: usize) -> f64 {
    let n = spec.points() as i64;
    let j = spec.multi_index(site);
    let k = spec.momentum_ks(node);
    let dot: i64 = j
        .iter()
        .zip(&k)
        .map(|(&a, &b)| (a as i64 * b).rem_euclid(n))
        .sum();
    2.0 * PI * (dot.rem_euclid(n)) as f64 / n as f64
}

/// Forward transform by direct summation, `O(N^{2n})`; reference path.
pub fn dft_forward_direct(f: &Field) -> MomentumField {
    let spec = *f.spec();
    let scale = spec.cell_volume() * (2.0 * PI).powf(-(spec.n() as f64) / 2.0);
    MomentumField::from_fn(spec, |node| {
        let mut acc = Multivector::zero(spec.n());
        for (site, v) in f.values().iter().enumerate() {
            acc += &v.scale(Complex64::from_polar(scale, phase(&spec, site, node)));
        }
        acc
    })
}

/// Inverse transform by direct summation; reference path.
pub fn dft_inverse_direct(big_f: &MomentumField) -> Field {
    let spec = *big_f.spec();
    let scale = spec.momentum_weight() * (2.0 * PI).powf(-(spec.n() as f64) / 2.0);
    let values: Vec<Multivector> = (0..spec.len())
        .into_par_iter()
        .map(|site| {
            let mut acc = Multivector::zero(spec.n());
            for (node, v) in big_f.values().iter().enumerate() {
                acc += &v.scale(Complex64::from_polar(scale, -phase(&spec, site, node)));
            }
            acc
        })
        .collect();
    Field::from_values(spec, values).expect("transform preserves the grid")
}

/// Momentum-side form `Σ_k w F(ξ_k)† G(ξ_k)`.
pub fn momentum_sesquilinear(a: &MomentumField, b: &MomentumField) -> Result<Multivector> {
    ensure_same_spec(a.spec(), b.spec())?;
    let mut acc = Multivector::zero(a.spec().n());
    for (x, y) in a.values().iter().zip(b.values()) {
        acc += &x.dagger().geometric_product(y)?;
    }
    Ok(acc.scale_real(a.spec().momentum_weight()))
}

/// `(K ⋆ f)(x) = Σ_y hⁿ K(x−y) f(y)`, evaluated through the transform.
pub fn convolve(kernel: &Field, f: &Field) -> Result<Field> {
    ensure_same_spec(kernel.spec(), f.spec())?;
    let spec = *f.spec();
    let fk = dft_forward(kernel);
    let ff = dft_forward(f);
    let c = (2.0 * PI).powf(spec.n() as f64 / 2.0);
    let prod = ff.map_nodes(|i, v| (fk.get(i) * v).scale_real(c));
    Ok(dft_inverse(&prod))
}

/// Convolution by the double sum, `O(N^{2n})`; reference path.
pub fn convolve_direct(kernel: &Field, f: &Field) -> Result<Field> {
    ensure_same_spec(kernel.spec(), f.spec())?;
    let spec = *f.spec();
    let points = spec.points();
    let vol = spec.cell_volume();
    let values: Vec<Multivector> = (0..spec.len())
        .into_par_iter()
        .map(|x| {
            let xi = spec.multi_index(x);
            let mut acc = Multivector::zero(spec.n());
            for (y, fy) in f.values().iter().enumerate() {
                if fy.is_zero() {
                    continue;
                }
                let d: Vec<usize> = xi
                    .iter()
                    .zip(spec.multi_index(y))
                    .map(|(&a, b)| (a + points - b) % points)
                    .collect();
                acc += &(kernel.get(spec.linear_index(&d)) * fy);
            }
            acc.scale_real(vol)
        })
        .collect();
    Field::from_values(spec, values)
}

/// Band-limited interpolation onto the grid of spacing `h/s` with `N·s`
/// points per axis. Every original momentum node is also a node of the
/// refined grid, so the interpolant carries exactly the same spectrum.
pub fn refine(f: &Field, s: usize) -> Result<Field> {
    if s == 0 {
        return Err(Error::InvalidParameter(
            "refinement factor must be >= 1".into(),
        ));
    }
    let coarse = *f.spec();
    let fine = GridSpec::new(
        coarse.n(),
        coarse.h() / s as f64,
        coarse.alpha(),
        coarse.points() * s,
    )?;
    let spectrum = dft_forward(f);
    let mut padded = MomentumField::zeros(fine);
    for (node, v) in spectrum.values().iter().enumerate() {
        let pos: Vec<usize> = coarse
            .momentum_ks(node)
            .into_iter()
            .map(|k| fine.momentum_position(k))
            .collect();
        padded.set(fine.linear_index(&pos), v.clone());
    }
    Ok(dft_inverse(&padded))
}

/// Samples a refined field back onto the grid `s` times coarser.
pub fn coarsen(fine_field: &Field, s: usize) -> Result<Field> {
    let fine = *fine_field.spec();
    if s == 0 || !fine.points().is_multiple_of(s) || !(fine.points() / s).is_multiple_of(2) {
        return Err(Error::InvalidParameter(format!(
            "cannot coarsen {} points by {s}",
            fine.points()
        )));
    }
    let coarse = GridSpec::new(
        fine.n(),
        fine.h() * s as f64,
        fine.alpha(),
        fine.points() / s,
    )?;
    Ok(Field::from_fn(coarse, |lin| {
        let idx: Vec<usize> = coarse.multi_index(lin).into_iter().map(|k| k * s).collect();
        fine_field.get(fine.linear_index(&idx)).clone()
    }))
}
