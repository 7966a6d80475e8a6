//! Numerical Mellin transform, its inversion, Mellin convolution and the
//! Mellin–Parseval relation.
//!
//! Integrals over `t ∈ (0, ∞)` are taken in the variable `x = ln t` on a
//! window `[a, b]` that is widened until the newly added pieces fall below
//! `1e−12` of the running total.

use std::f64::consts::PI;

use num_complex::Complex64;

use super::quad::{integrate, QuadOptions, QuadValue};
use crate::error::{Error, Result};

const CORE_HALF_WIDTH: f64 = 4.0;
const TAIL_REL: f64 = 1e-12;
const MAX_LOG_EXTENT: f64 = 700.0;

/// A numerically evaluated transform with its quadrature error estimate.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MellinValue {
    pub value: Complex64,
    pub error: f64,
}

fn checked<T: QuadValue>(v: T) -> Result<T> {
    if v.norm().is_finite() {
        Ok(v)
    } else {
        Err(Error::Domain {
            what: "Mellin integrand",
            detail: "non-finite value; the requested point is outside the fundamental strip".into(),
        })
    }
}

/// `∫_ℝ g(x) dx` with the window grown until both tails are negligible.
pub fn log_line_integral<T, G>(g: G, rel_tol: f64) -> Result<(T, f64)>
where
    T: QuadValue,
    G: Fn(f64) -> T + Sync,
{
    let opts = QuadOptions::rel(rel_tol).max_intervals(4000);
    let core = integrate(&g, -CORE_HALF_WIDTH, CORE_HALF_WIDTH, opts);
    let mut total = checked(core.value)?;
    let mut error = core.error;
    for direction in [1.0, -1.0] {
        let mut edge = CORE_HALF_WIDTH;
        let mut width = 2.0;
        let mut quiet = 0;
        while quiet < 2 {
            if edge >= MAX_LOG_EXTENT {
                return Err(Error::Domain {
                    what: "Mellin integral",
                    detail: format!(
                        "tail does not decay within |ln t| <= {MAX_LOG_EXTENT}; outside the fundamental strip"
                    ),
                });
            }
            let (lo, hi) = if direction > 0.0 {
                (edge, edge + width)
            } else {
                (-edge - width, -edge)
            };
            let piece = integrate(&g, lo, hi, opts);
            let value = checked(piece.value)?;
            let scale = total.norm().max(f64::MIN_POSITIVE);
            if value.norm() <= TAIL_REL * scale {
                quiet += 1;
            } else {
                quiet = 0;
            }
            total.add_scaled(&value, 1.0);
            error += piece.error;
            edge += width;
            width = (width * 1.5).min(40.0);
        }
    }
    Ok((total, error))
}

/// `M{f}(s) = ∫₀^∞ f(t) t^{s−1} dt`.
pub fn mellin_numeric<F>(f: F, s: Complex64) -> Result<MellinValue>
where
    F: Fn(f64) -> f64 + Sync,
{
    let (value, error) = log_line_integral(
        |x: f64| {
            let fx = f(x.exp());
            if fx == 0.0 {
                Complex64::default()
            } else {
                fx * (s * x).exp()
            }
        },
        1e-13,
    )?;
    Ok(MellinValue { value, error })
}

/// `(1/2π) ∫_{−T}^{T} F(c + iτ) t^{−c−iτ} dτ`, the truncated inversion
/// integral along `Re s = c`.
pub fn mellin_inverse<F>(big_f: F, c: f64, t: f64, truncation: f64) -> Complex64
where
    F: Fn(Complex64) -> Complex64 + Sync,
{
    let ln_t = t.ln();
    let out = integrate(
        |tau: f64| {
            let s = Complex64::new(c, tau);
            big_f(s) * (-s * ln_t).exp()
        },
        -truncation,
        truncation,
        QuadOptions::rel(1e-12).with_abs(1e-15).max_intervals(4000),
    );
    out.value / (2.0 * PI)
}

/// `(f ⋆_M g)(t) = ∫₀^∞ f(t/p) g(p) dp/p`.
pub fn mellin_convolve<F, G>(f: F, g: G, t: f64) -> Result<f64>
where
    F: Fn(f64) -> f64 + Sync,
    G: Fn(f64) -> f64 + Sync,
{
    let (value, _) = log_line_integral(
        |x: f64| {
            let gp = g(x.exp());
            if gp == 0.0 {
                0.0
            } else {
                f(t * (-x).exp()) * gp
            }
        },
        1e-13,
    )?;
    Ok(value)
}

/// Both sides of `M{fg}(ω) = (1/2πi) ∫ M{f}(ω − s) M{g}(s) ds`, the right
/// side along `Re s = c` truncated at `|Im s| ≤ T`.
pub fn mellin_parseval_check<F, G, MF, MG>(
    f: F,
    g: G,
    mf: MF,
    mg: MG,
    omega: Complex64,
    c: f64,
    truncation: f64,
) -> Result<(Complex64, Complex64)>
where
    F: Fn(f64) -> f64 + Sync,
    G: Fn(f64) -> f64 + Sync,
    MF: Fn(Complex64) -> Complex64 + Sync,
    MG: Fn(Complex64) -> Complex64 + Sync,
{
    let lhs = mellin_numeric(|t| f(t) * g(t), omega)?.value;
    let rhs = integrate(
        |tau: f64| {
            let s = Complex64::new(c, tau);
            mf(omega - s) * mg(s)
        },
        -truncation,
        truncation,
        QuadOptions::rel(1e-12).with_abs(1e-15).max_intervals(4000),
    )
    .value
        / (2.0 * PI);
    Ok((lhs, rhs))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gamma_at_one_half() {
        let v = mellin_numeric(|t| (-t).exp(), Complex64::new(0.5, 0.0)).unwrap();
        assert!((v.value - PI.sqrt()).norm() < 1e-12);
    }

    #[test]
    fn outside_strip_is_an_error() {
        // ∫ e^{−t} t^{−1.5} dt diverges at 0.
        assert!(mellin_numeric(|t| (-t).exp(), Complex64::new(-0.5, 0.0)).is_err());
    }
}
