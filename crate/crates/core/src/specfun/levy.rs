//! One-sided stable (Lévy) density `L_ν` with Laplace transform `e^{−s^ν}`.
//!
//! The series form is
//!
//! ```text
//! L_ν(u) = (1/u) Σ_{m≥1} (−u^{−ν})^m / (m! Γ(−νm)) = (1/u) ₀Ψ₁[(0, −ν); −u^{−ν}]
//! ```
//!
//! For small `u` the terms cancel catastrophically and the value is taken
//! from Zolotarev's integral representation instead.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::Serialize;

use super::quad::{integrate, QuadOptions};
use super::wright::{wright_psi, WrightParam, WrightSpec};
use crate::error::{Error, Result};

/// Largest tolerated `Σ|term| / |sum|` before switching to the integral.
const MAX_CANCELLATION: f64 = 1e4;

/// How a density value was obtained.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum LevyMethod {
    Series,
    Quadrature,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LevyValue {
    pub value: f64,
    pub method: LevyMethod,
    pub terms_used: usize,
}

fn check_nu(nu: f64) -> Result<()> {
    if nu > 0.0 && nu < 1.0 {
        Ok(())
    } else {
        Err(Error::Domain {
            what: "stable index",
            detail: format!("{nu} not in (0, 1)"),
        })
    }
}

/// Zolotarev's shape function
/// `a(φ) = (sin νφ / sin φ)^{1/(1−ν)} · sin((1−ν)φ) / sin νφ`.
fn zolotarev_a(nu: f64, phi: f64) -> f64 {
    (nu * phi).sin().powf(nu / (1.0 - nu)) * ((1.0 - nu) * phi).sin()
        / phi.sin().powf(1.0 / (1.0 - nu))
}

/// `L_ν(u)` by Zolotarev's integral over `φ ∈ (0, π)`.
pub fn levy_pdf_integral(nu: f64, u: f64) -> Result<f64> {
    check_nu(nu)?;
    if u.is_nan() || u <= 0.0 {
        return Err(Error::Domain {
            what: "Levy density argument",
            detail: format!("{u} must be positive"),
        });
    }
    let x = u.powf(-nu / (1.0 - nu));
    let integrand = |phi: f64| {
        let a = zolotarev_a(nu, phi);
        let e = x * a;
        if !a.is_finite() || e > 745.0 {
            0.0
        } else {
            a * (-e).exp()
        }
    };
    let out = integrate(
        integrand,
        0.0,
        PI,
        QuadOptions::rel(1e-13).max_intervals(4000),
    );
    let pref = nu / (1.0 - nu) * u.powf(-1.0 / (1.0 - nu)) / PI;
    Ok(pref * out.into_result(1e-13)?)
}

/// `L_ν(u)` by the Wright series, falling back to the integral when the
/// series loses more than four digits to cancellation.
pub fn levy_pdf(nu: f64, u: f64) -> Result<LevyValue> {
    check_nu(nu)?;
    if u.is_nan() || u <= 0.0 {
        return Err(Error::Domain {
            what: "Levy density argument",
            detail: format!("{u} must be positive"),
        });
    }
    let spec = WrightSpec::new(vec![], vec![WrightParam::real(0.0, -nu)]);
    let lambda = Complex64::new(-u.powf(-nu), 0.0);
    if let Ok(series) = wright_psi(&spec, lambda) {
        if series.cancellation() <= MAX_CANCELLATION && series.status.is_converged() {
            return Ok(LevyValue {
                value: series.value.re / u,
                method: LevyMethod::Series,
                terms_used: series.terms_used,
            });
        }
    }
    Ok(LevyValue {
        value: levy_pdf_integral(nu, u)?,
        method: LevyMethod::Quadrature,
        terms_used: 0,
    })
}

/// Smallest `ln u` at which `L_ν` exceeds the `e^{−745}` underflow level.
pub fn levy_log_support_start(nu: f64) -> f64 {
    let a0 = nu.powf(nu / (1.0 - nu)) * (1.0 - nu);
    // u^{−ν/(1−ν)} · a0 = 745
    -(1.0 - nu) / nu * (745.0 / a0).ln()
}
