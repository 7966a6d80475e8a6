//! The kernels `K_H^(β)`, `β ∈ {0, 1}`, their compact Wright form, the
//! auxiliary `W` field and the Mellin–Barnes representation in `t`.
//!
//! With `c = nσ²/h²` and `d² = d_h(ξ)²`,
//!
//! ```text
//! K^(0)(y, t) = F⁻¹[e^{−ct^{2H}} cos(μt√d²)](y)
//! K^(1)(y, t) = F⁻¹[e^{−ct^{2H}} sin(μt√d²)/√d²](y)
//!             = F⁻¹[√π (μ/2)^β t^β e^{−ct^{2H}} ₀Ψ₁[(β+1/2, 1); −μ²t²d²/4]](y)
//! ```
//!
//! and, termwise in the Wright series,
//!
//! ```text
//! M{K^(β)(y, ·)}(ω) = √π (μ/2)^β/(2H) c^{−(β+ω)/(2H)} W^(β)(y | ω)
//! W^(β)(y | ω) = F⁻¹[₁Ψ₁[((β+ω)/(2H), 1/H); (β+1/2, 1); −(μ²d²/4) c^{−1/H}]](y)
//! ```

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::{check_time, sinc_scaled, KernelTag, ModelParams};
use crate::clifford::Multivector;
use crate::error::{Error, Result};
use crate::lattice::{Field, GridSpec};
use crate::operators::{d_squared, Multipliers};
use crate::specfun::quad::{integrate, QuadOptions};
use crate::specfun::{mellin_numeric, wright_psi, WrightParam, WrightSpec};
use crate::spectral::{dft_inverse, MomentumField};

/// Below this `|f(t)|` the Wright factor is not evaluated in the Mellin
/// integrand.
const NEGLIGIBLE: f64 = 1e-280;
/// Contour tails, relative to the integrand at `Im ω = 0`, accepted as converged.
const TAIL_TOL: f64 = 1e-6;

fn rate(spec: &GridSpec, params: &ModelParams) -> f64 {
    spec.n() as f64 * params.sigma2 / (spec.h() * spec.h())
}

fn scalar(n: usize, v: Complex64) -> Multivector {
    Multivector::scalar(n, v)
}

/// `K^(β)(·, t)` from the trigonometric multipliers.
pub fn kernel_k_beta(
    spec: GridSpec,
    t: f64,
    params: &ModelParams,
    tag: KernelTag,
) -> Result<Field> {
    check_time(t)?;
    params.validate()?;
    let damping = (-rate(&spec, params) * t.powf(2.0 * params.hurst)).exp();
    let m = Multipliers::cached(&spec);
    let mt = params.mu * t;
    let spectrum = MomentumField::from_fn(spec, |i| {
        let d = m.d2()[i].sqrt();
        let v = match tag {
            KernelTag::Cosine => (mt * d).cos(),
            KernelTag::Sinc => sinc_scaled(mt, d),
        };
        scalar(spec.n(), Complex64::new(damping * v, 0.0))
    });
    Ok(dft_inverse(&spectrum))
}

fn zero_psi_one(beta: f64) -> WrightSpec {
    WrightSpec::new(vec![], vec![WrightParam::real(beta + 0.5, 1.0)])
}

/// `√π (μ/2)^β t^β ₀Ψ₁[(β+1/2, 1); −μ²t²d²/4]`.
fn compact_factor(beta: f64, mu: f64, t: f64, d2: f64) -> Result<f64> {
    let lambda = Complex64::new(-mu * mu * t * t * d2 / 4.0, 0.0);
    let series = wright_psi(&zero_psi_one(beta), lambda)?;
    Ok(PI.sqrt() * (mu / 2.0 * t).powf(beta) * series.value.re)
}

/// `K^(β)(·, t)` from the compact `₀Ψ₁` form.
pub fn kernel_k_beta_wright(
    spec: GridSpec,
    t: f64,
    params: &ModelParams,
    tag: KernelTag,
) -> Result<Field> {
    check_time(t)?;
    params.validate()?;
    let beta = tag.beta();
    let damping = (-rate(&spec, params) * t.powf(2.0 * params.hurst)).exp();
    let m = Multipliers::cached(&spec);
    let values = m
        .d2()
        .iter()
        .map(|&d2| {
            compact_factor(beta, params.mu, t, d2)
                .map(|v| scalar(spec.n(), Complex64::new(damping * v, 0.0)))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(dft_inverse(&MomentumField::from_values(spec, values)?))
}

fn check_hurst_range(spec: &GridSpec, params: &ModelParams) -> Result<()> {
    let alpha = spec.alpha().to_f64();
    if params.hurst >= alpha + 0.5 && params.hurst < 1.0 {
        Ok(())
    } else {
        Err(Error::Domain {
            what: "Hurst exponent",
            detail: format!(
                "H = {} outside [alpha + 1/2, 1) with alpha = {}",
                params.hurst,
                spec.alpha()
            ),
        })
    }
}

fn check_strip(omega: Complex64, beta: f64) -> Result<()> {
    if omega.re > -beta {
        Ok(())
    } else {
        Err(Error::Domain {
            what: "Mellin variable",
            detail: format!("Re omega = {} must exceed -beta = {}", omega.re, -beta),
        })
    }
}

fn positive_rate(spec: &GridSpec, params: &ModelParams) -> Result<f64> {
    let c = rate(spec, params);
    if c > 0.0 {
        Ok(c)
    } else {
        Err(Error::InvalidParameter(
            "Mellin representation needs sigma2 > 0".into(),
        ))
    }
}

/// `√π (μ/2)^β/(2H) · c^{−(β+ω)/(2H)}`.
fn mellin_prefactor(beta: f64, omega: Complex64, c: f64, params: &ModelParams) -> Complex64 {
    let h2 = 2.0 * params.hurst;
    PI.sqrt() * (params.mu / 2.0).powf(beta) / h2 * (-(beta + omega) / h2 * c.ln()).exp()
}

/// `₁Ψ₁[((β+ω)/(2H), 1/H); (β+1/2, 1); −(μ²d²/4) c^{−1/H}]`.
fn one_psi_one(
    beta: f64,
    omega: Complex64,
    d2: f64,
    c: f64,
    params: &ModelParams,
) -> Result<Complex64> {
    let h = params.hurst;
    let spec = WrightSpec::new(
        vec![WrightParam::new((beta + omega) / (2.0 * h), 1.0 / h)],
        vec![WrightParam::real(beta + 0.5, 1.0)],
    );
    let lambda = -params.mu * params.mu * d2 / 4.0 * c.powf(-1.0 / h);
    Ok(wright_psi(&spec, Complex64::new(lambda, 0.0))?.value)
}

/// Numerical `M{f·g}(ω)` and its `₁Ψ₁` closed form at the momentum point
/// `xi`, where `f = √π(μ/2)^β t^β e^{−ct^{2H}}` and
/// `g = ₀Ψ₁[(β+1/2, 1); −μ²t²d²/4]`.
pub fn mellin_fg_identity_check(
    spec: &GridSpec,
    omega: Complex64,
    xi: &[f64],
    params: &ModelParams,
    tag: KernelTag,
) -> Result<(Complex64, Complex64)> {
    params.validate()?;
    check_hurst_range(spec, params)?;
    let beta = tag.beta();
    check_strip(omega, beta)?;
    let c = positive_rate(spec, params)?;
    let d2 = d_squared(xi, spec);
    let two_h = 2.0 * params.hurst;

    let lhs = mellin_numeric(
        |t| {
            let damping = (-c * t.powf(two_h)).exp();
            if damping < NEGLIGIBLE {
                return 0.0;
            }
            compact_factor(beta, params.mu, t, d2).map_or(f64::NAN, |g| damping * g)
        },
        omega,
    )?
    .value;
    let rhs = mellin_prefactor(beta, omega, c, params) * one_psi_one(beta, omega, d2, c, params)?;
    Ok((lhs, rhs))
}

fn w_spectrum(
    spec: GridSpec,
    omega: Complex64,
    params: &ModelParams,
    beta: f64,
    c: f64,
) -> Result<MomentumField> {
    let m = Multipliers::cached(&spec);
    let values = m
        .d2()
        .iter()
        .map(|&d2| one_psi_one(beta, omega, d2, c, params).map(|v| scalar(spec.n(), v)))
        .collect::<Result<Vec<_>>>()?;
    MomentumField::from_values(spec, values)
}

/// `W^(β)(· | ω)`, the inverse transform of the `₁Ψ₁` multiplier.
pub fn w_kernel_field(
    spec: GridSpec,
    omega: Complex64,
    params: &ModelParams,
    tag: KernelTag,
) -> Result<Field> {
    params.validate()?;
    check_hurst_range(&spec, params)?;
    check_strip(omega, tag.beta())?;
    let c = positive_rate(&spec, params)?;
    Ok(dft_inverse(&w_spectrum(
        spec,
        omega,
        params,
        tag.beta(),
        c,
    )?))
}

/// Vertical integration line `Re ω = c`, truncated at `|Im ω| ≤ T`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Contour {
    pub c: f64,
    pub truncation: f64,
}

impl Contour {
    /// `c = H − β/2`, inside the strip `Re ω > −β`, with `T = 40`.
    pub fn default_for(hurst: f64, tag: KernelTag) -> Self {
        Contour {
            c: hurst - tag.beta() / 2.0,
            truncation: 40.0,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum ContourStatus {
    Ok,
    /// The integrand at `|Im ω| = T` is not negligible.
    TruncationWarning,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MellinBarnesValue {
    pub value: Complex64,
    /// `(|I(c+iT)| + |I(c−iT)|)/2π`, a scale for the neglected tails.
    pub tail_estimate: f64,
    pub quad_error: f64,
    pub status: ContourStatus,
}

/// Integrand `M{K(y, ·)}(ω)·t^{−ω}` at one point of the line.
pub fn mellin_barnes_integrand(
    spec: GridSpec,
    y: usize,
    t: f64,
    params: &ModelParams,
    tag: KernelTag,
    omega: Complex64,
) -> Result<Complex64> {
    let beta = tag.beta();
    let c = positive_rate(&spec, params)?;
    let w = dft_inverse(&w_spectrum(spec, omega, params, beta, c)?);
    let pref = mellin_prefactor(beta, omega, c, params);
    Ok(pref * w.get(y).scalar_part() * (-omega * t.ln()).exp())
}

/// `(1/2πi) ∫ M{K(y, ·)}(ω) t^{−ω} dω` along the truncated contour.
pub fn mellin_barnes_kernel(
    spec: GridSpec,
    y: usize,
    t: f64,
    params: &ModelParams,
    tag: KernelTag,
    contour: Contour,
) -> Result<MellinBarnesValue> {
    check_time(t)?;
    params.validate()?;
    check_hurst_range(&spec, params)?;
    if y >= spec.len() {
        return Err(Error::InvalidParameter(format!(
            "site {y} outside the grid"
        )));
    }
    check_strip(Complex64::new(contour.c, 0.0), tag.beta())?;
    if contour.truncation.is_nan() || contour.truncation <= 0.0 {
        return Err(Error::InvalidParameter(
            "contour truncation must be positive".into(),
        ));
    }
    if t == 0.0 {
        let value = kernel_k_beta(spec, 0.0, params, tag)?.get(y).scalar_part();
        return Ok(MellinBarnesValue {
            value,
            tail_estimate: 0.0,
            quad_error: 0.0,
            status: ContourStatus::Ok,
        });
    }
    let at =
        |tau: f64| mellin_barnes_integrand(spec, y, t, params, tag, Complex64::new(contour.c, tau));
    let out = integrate(
        |tau: f64| at(tau).unwrap_or(Complex64::new(f64::NAN, 0.0)),
        -contour.truncation,
        contour.truncation,
        QuadOptions::rel(1e-10)
            .with_abs(1e-14)
            .parallel()
            .max_intervals(2000),
    );
    if !out.value.norm().is_finite() {
        return Err(Error::InternalInconsistency(
            "non-finite Mellin-Barnes integrand".into(),
        ));
    }
    let value = out.value / (2.0 * PI);
    let tail_estimate =
        (at(contour.truncation)?.norm() + at(-contour.truncation)?.norm()) / (2.0 * PI);
    let centre = at(0.0)?.norm() / (2.0 * PI);
    let status = if tail_estimate <= TAIL_TOL * centre.max(value.norm()) {
        ContourStatus::Ok
    } else {
        ContourStatus::TruncationWarning
    };
    Ok(MellinBarnesValue {
        value,
        tail_estimate,
        quad_error: out.error / (2.0 * PI),
        status,
    })
}
