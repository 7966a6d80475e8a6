//! Time-changed Dirac–Fokker–Planck evolution
//!
//! ```text
//! ∂_t Φ = iμ D_{h,α} Φ + σ² H t^{2H−1} Δ_h Φ
//! ```
//!
//! solved exactly in momentum space, with an explicit RK4 integrator as an
//! independent cross-check.

use num_complex::Complex64;

use super::{check_time, sinc_scaled, ModelParams};
use crate::clifford::{BladeIndex, Multivector};
use crate::error::{Error, Result};
use crate::lattice::{delta_h, Field, GridSpec};
use crate::operators::{dirac_apply, laplacian_apply, Multipliers};
use crate::spectral::{dft_forward, dft_inverse};

/// Largest tolerated `dt · ρ` for the RK4 stepper, `ρ` a spectral-radius
/// bound of the right-hand side.
const RK4_STABILITY: f64 = 2.5;
/// Start time of the stepper whenever `H ≠ 1/2`.
pub const ORACLE_T0: f64 = 1e-2;

/// `e^{−σ²t^{2H}d²/2} (cos(μt√d²) + sin(μt√d²)/√d² · i z)` at one node.
pub fn dfp_multiplier(z: &Multivector, d2: f64, t: f64, params: &ModelParams) -> Multivector {
    let d = d2.sqrt();
    let damping = (-params.variance(t) * d2 / 2.0).exp();
    let cos = (params.mu * t * d).cos();
    let sinc = sinc_scaled(params.mu * t, d);
    let mut m = z.scale(Complex64::new(0.0, sinc * damping));
    m.add_term(BladeIndex::SCALAR, Complex64::new(cos * damping, 0.0));
    m
}

/// `Φ(t) = F⁻¹[m(t)·FΦ₀]`.
pub fn dfp_evolve(phi0: &Field, t: f64, params: &ModelParams) -> Result<Field> {
    check_time(t)?;
    params.validate()?;
    if t == 0.0 {
        return Ok(phi0.clone());
    }
    let m = Multipliers::cached(phi0.spec());
    let spectrum =
        dft_forward(phi0).map_nodes(|i, v| &dfp_multiplier(&m.z()[i], m.d2()[i], t, params) * v);
    Ok(dft_inverse(&spectrum))
}

/// `F_H(·, t) = dfp_evolve(δ_h, t)`; `convolve(F_H, Φ₀)` reproduces the
/// evolution of `Φ₀`.
pub fn dfp_kernel(spec: GridSpec, t: f64, params: &ModelParams) -> Result<Field> {
    dfp_evolve(&delta_h(spec), t, params)
}

/// Result of the time-stepping oracle.
#[derive(Debug, Clone)]
pub struct OracleRun {
    pub field: Field,
    /// Time at which stepping started from the spectral solution.
    pub t0: f64,
    pub steps: usize,
    pub dt: f64,
}

fn rhs(f: &Field, t: f64, params: &ModelParams) -> Result<Field> {
    let drift = dirac_apply(f).scale(Complex64::new(0.0, params.mu));
    if params.sigma2 == 0.0 {
        return Ok(drift);
    }
    let coeff = params.sigma2 * params.hurst * t.powf(2.0 * params.hurst - 1.0);
    drift.axpy(Complex64::new(coeff, 0.0), &laplacian_apply(f))
}

/// Classical RK4 for `∂_tΦ = iμDΦ + σ²Ht^{2H−1}ΔΦ` on `[t₀, t]`.
///
/// For `H = 1/2` stepping starts at `t₀ = 0`; otherwise at `t₀ = 10⁻²` from
/// the spectral solution, since `t^{2H−1}` is singular (`H < 1/2`) or has
/// unbounded derivatives (`H > 1/2`) at the origin.
pub fn dfp_timestep_oracle(
    phi0: &Field,
    t: f64,
    params: &ModelParams,
    steps: usize,
) -> Result<OracleRun> {
    check_time(t)?;
    params.validate()?;
    if steps == 0 {
        return Err(Error::InvalidParameter("steps must be positive".into()));
    }
    let t0 = if params.hurst == 0.5 || params.sigma2 == 0.0 {
        0.0
    } else {
        ORACLE_T0.min(t)
    };
    let dt = (t - t0) / steps as f64;

    let spec = phi0.spec();
    let max_d2 = 4.0 * spec.n() as f64 / (spec.h() * spec.h());
    let exponent = 2.0 * params.hurst - 1.0;
    let coeff_bound = if params.sigma2 == 0.0 {
        0.0
    } else if exponent >= 0.0 {
        t.powf(exponent)
    } else {
        t0.powf(exponent)
    };
    let radius =
        params.mu.abs() * max_d2.sqrt() + params.sigma2 * params.hurst * coeff_bound * max_d2;
    let ratio = dt * radius;
    if ratio > RK4_STABILITY {
        return Err(Error::Unstable { steps, ratio });
    }

    let mut f = dfp_evolve(phi0, t0, params)?;
    let half = Complex64::new(dt / 2.0, 0.0);
    let full = Complex64::new(dt, 0.0);
    for step in 0..steps {
        let s = t0 + step as f64 * dt;
        let k1 = rhs(&f, s, params)?;
        let k2 = rhs(&f.axpy(half, &k1)?, s + dt / 2.0, params)?;
        let k3 = rhs(&f.axpy(half, &k2)?, s + dt / 2.0, params)?;
        let k4 = rhs(&f.axpy(full, &k3)?, s + dt, params)?;
        let incr = k1
            .add(&k2.scale_real(2.0))?
            .add(&k3.scale_real(2.0))?
            .add(&k4)?;
        f = f.axpy(Complex64::new(dt / 6.0, 0.0), &incr)?;
    }
    Ok(OracleRun {
        field: f,
        t0,
        steps,
        dt,
    })
}
