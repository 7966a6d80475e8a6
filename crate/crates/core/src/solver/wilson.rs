//! Diffusion coefficient matching a fractional-Brownian time change.

use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::specfun::gamma_real;

/// Both closed forms
/// `Γ(2−2H)/(πH(2H−1))·cos(π(H−1))` and `Γ(2−2H)/(πH(1−2H))·sin(π(1/2−H))`.
pub fn wilson_sigma_forms(hurst: f64) -> Result<(f64, f64)> {
    if !(hurst > 0.0 && hurst < 1.0) {
        return Err(Error::Domain {
            what: "Hurst exponent",
            detail: format!("{hurst} not in (0, 1)"),
        });
    }
    if hurst == 0.5 {
        return Err(Error::RemovableSingularity { limit: 1.0 });
    }
    let g = gamma_real(2.0 - 2.0 * hurst)?;
    let cos_form = g / (PI * hurst * (2.0 * hurst - 1.0)) * (PI * (hurst - 1.0)).cos();
    let sin_form = g / (PI * hurst * (1.0 - 2.0 * hurst)) * (PI * (0.5 - hurst)).sin();
    Ok((cos_form, sin_form))
}

/// `σ²(H)`; at `H = 1/2` the removable singularity is reported with its
/// limit `1`.
pub fn wilson_sigma(hurst: f64) -> Result<f64> {
    let (a, b) = wilson_sigma_forms(hurst)?;
    if (a - b).abs() > 1e-10 * a.abs().max(1.0) {
        return Err(Error::InternalInconsistency(format!(
            "closed forms disagree at H = {hurst}: {a} vs {b}"
        )));
    }
    Ok(a)
}
