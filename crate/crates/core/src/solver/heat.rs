//! Semi-discrete heat kernel `exp(τΔ_h) δ_h`.

use num_complex::Complex64;

use super::{check_time, ModelParams};
use crate::clifford::Multivector;
use crate::error::Result;
use crate::lattice::{delta_h, Field, GridSpec};
use crate::operators::Multipliers;
use crate::specfun::bessel_i_scaled_seq;
use crate::spectral::{dft_forward, dft_inverse};

/// `F⁻¹[e^{−τd²} F δ_h]`.
pub fn heat_kernel(spec: GridSpec, tau: f64) -> Result<Field> {
    check_time(tau)?;
    let m = Multipliers::cached(&spec);
    let spectrum =
        dft_forward(&delta_h(spec)).map_nodes(|i, v| v.scale_real((-tau * m.d2()[i]).exp()));
    Ok(dft_inverse(&spectrum))
}

/// Periodized `e^{−z} Σ_m I_{j+mN}(z)` for `j = 0, …, N−1`.
fn periodized_bessel(points: usize, z: f64) -> Vec<f64> {
    let images = 4 + (z / points as f64).ceil() as usize;
    let kmax = points * (images + 1);
    let seq = bessel_i_scaled_seq(kmax, z);
    (0..points)
        .map(|j| {
            let mut acc = 0.0;
            for m in -(images as i64)..=(images as i64) {
                let k = (j as i64 + m * points as i64).unsigned_abs() as usize;
                if k <= kmax {
                    acc += seq[k];
                }
            }
            acc
        })
        .collect()
}

/// `c · Π_j e^{−2τ/h²} I_{x_j/h}(2τ/h²)` with periodic images, the constant
/// `c` fixed by `Σ_x hⁿ K(x) = 1`.
pub fn heat_kernel_bessel(spec: GridSpec, tau: f64) -> Result<Field> {
    check_time(tau)?;
    let z = 2.0 * tau / (spec.h() * spec.h());
    let axis = periodized_bessel(spec.points(), z);
    let axis_mass: f64 = axis.iter().sum();
    let c = 1.0 / (spec.cell_volume() * axis_mass.powi(spec.n() as i32));
    Ok(Field::from_fn(spec, |lin| {
        let value: f64 = spec.multi_index(lin).iter().map(|&j| axis[j]).product();
        Multivector::scalar(spec.n(), Complex64::new(c * value, 0.0))
    }))
}

/// `N_H(·, t) = e^{nσ²t^{2H}/h²} · exp((σ²t^{2H}/2) Δ_h) δ_h`, i.e. the
/// unscaled periodized Bessel product.
pub fn n_kernel(spec: GridSpec, t: f64, params: &ModelParams) -> Result<Field> {
    check_time(t)?;
    let v = params.variance(t);
    let factor = (spec.n() as f64 * v / (spec.h() * spec.h())).exp();
    Ok(heat_kernel_bessel(spec, v / 2.0)?.scale_real(factor))
}
