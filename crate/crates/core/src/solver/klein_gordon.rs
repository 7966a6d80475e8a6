//! Gaussian-damped Klein–Gordon ansatz
//!
//! ```text
//! Ψ(t|p) = e^{−pt²} (cos(μt√(−Δ_h)) Φ₀ + sinc(μt√(−Δ_h)) · iD_{h,α} Φ₀)
//! ```
//!
//! solving `∂²_tΨ + 4pt∂_tΨ + (2p + 4p²t²)Ψ = μ²Δ_hΨ` with `Ψ(0) = Φ₀` and
//! `∂_tΨ(0) = iμD_{h,α}Φ₀`.

use num_complex::Complex64;

use super::{check_time, sinc_scaled, ModelParams};
use crate::clifford::{BladeIndex, Multivector};
use crate::error::{Error, Result};
use crate::lattice::Field;
use crate::operators::{laplacian_apply, Multipliers};
use crate::spectral::{dft_forward, dft_inverse};

/// `e^{−pt²}(cos(μt√d²) + sin(μt√d²)/√d² · i z)` at one node.
pub fn kg_multiplier(z: &Multivector, d2: f64, t: f64, p: f64, mu: f64) -> Multivector {
    let d = d2.sqrt();
    let damping = (-p * t * t).exp();
    let mut m = z.scale(Complex64::new(0.0, damping * sinc_scaled(mu * t, d)));
    m.add_term(
        BladeIndex::SCALAR,
        Complex64::new(damping * (mu * t * d).cos(), 0.0),
    );
    m
}

fn check_p(p: f64) -> Result<()> {
    if p >= 0.0 && p.is_finite() {
        Ok(())
    } else {
        Err(Error::InvalidParameter(format!("p = {p} must be >= 0")))
    }
}

/// `Ψ(·, t | p)`.
pub fn klein_gordon_ansatz(phi0: &Field, t: f64, p: f64, params: &ModelParams) -> Result<Field> {
    check_time(t)?;
    check_p(p)?;
    params.validate()?;
    if t == 0.0 {
        return Ok(phi0.clone());
    }
    let m = Multipliers::cached(phi0.spec());
    let spectrum = dft_forward(phi0)
        .map_nodes(|i, v| &kg_multiplier(&m.z()[i], m.d2()[i], t, p, params.mu) * v);
    Ok(dft_inverse(&spectrum))
}

/// Sup norm of `∂²_tΨ + 4pt∂_tΨ + (2p + 4p²t²)Ψ − μ²Δ_hΨ` at time `t`, with
/// second-order central differences of step `dt` in time and the stencil
/// Laplacian in space.
pub fn kg_residual(phi0: &Field, t: f64, p: f64, params: &ModelParams, dt: f64) -> Result<f64> {
    if !(dt > 0.0 && t >= dt) {
        return Err(Error::InvalidParameter(format!(
            "need 0 < dt <= t, got dt = {dt}, t = {t}"
        )));
    }
    let minus = klein_gordon_ansatz(phi0, t - dt, p, params)?;
    let centre = klein_gordon_ansatz(phi0, t, p, params)?;
    let plus = klein_gordon_ansatz(phi0, t + dt, p, params)?;
    let second = plus
        .sub(&centre.scale_real(2.0))?
        .add(&minus)?
        .scale_real(1.0 / (dt * dt));
    let first = plus.sub(&minus)?.scale_real(1.0 / (2.0 * dt));
    let residual = second
        .axpy(Complex64::new(4.0 * p * t, 0.0), &first)?
        .axpy(Complex64::new(2.0 * p + 4.0 * p * p * t * t, 0.0), &centre)?
        .axpy(
            Complex64::new(-params.mu * params.mu, 0.0),
            &laplacian_apply(&centre),
        )?;
    Ok(residual.sup_norm())
}
