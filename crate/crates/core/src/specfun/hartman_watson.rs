//! Unnormalized Hartman–Watson density
//!
//! ```text
//! θ_r(p) = r (2π³p)^{−1/2} ∫₀^∞ exp((π² − y²)/(2p)) e^{−r cosh y} sinh y sin(πy/p) dy
//! ```
//!
//! whose Laplace transform in `k²/2` is `I_k(r)`.
//!
//! The integrand is even, so `θ` is half the imaginary part of
//! `G = ∫_ℝ exp(−(y − iπ)²/(2p) − r cosh y) sinh y dy`. The integral is taken
//! along the shifted line `Im y = c` with `0 ≤ c < π/2`, choosing `c` to
//! minimize the peak modulus of the integrand; on the real line that peak is
//! `e^{π²/(2p)}` and the oscillation cancels it almost completely.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::Serialize;

use super::quad::{integrate, integrate_fixed, QuadOptions};
use crate::error::{Error, Result};

const SHIFT_CANDIDATES: usize = 50;
const MAX_SHIFT: f64 = 0.98 * PI / 2.0;
const PEAK_GRID: usize = 1000;
const PEAK_SPAN: f64 = 30.0;
const DYNAMIC_RANGE: f64 = 90.0;
/// Below this absolute noise level `θ` is resolved; smaller `p` is cut off.
const NOISE_FLOOR: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum ThetaStatus {
    Ok,
    /// Outside `r ∈ [0.5, 5]`, `p ∈ (0, 10]`; accuracy is not guaranteed.
    OutsideTameRange,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ThetaValue {
    pub value: f64,
    /// Roundoff estimate from the peak integrand modulus.
    pub noise: f64,
    pub status: ThetaStatus,
}

/// Log of the integrand modulus along `Im y = c` at `Re y = s`.
fn log_modulus(r: f64, p: f64, c: f64, s: f64) -> f64 {
    ((PI - c).powi(2) - s * s) / (2.0 * p) - r * s.cosh() * c.cos() + s.abs()
}

fn peak(r: f64, p: f64, c: f64) -> f64 {
    (0..=PEAK_GRID)
        .map(|i| log_modulus(r, p, c, PEAK_SPAN * i as f64 / PEAK_GRID as f64))
        .fold(f64::NEG_INFINITY, f64::max)
}

/// Shift `c` and its peak log-modulus.
fn best_shift(r: f64, p: f64) -> (f64, f64) {
    (0..SHIFT_CANDIDATES)
        .map(|i| {
            let c = MAX_SHIFT * i as f64 / (SHIFT_CANDIDATES - 1) as f64;
            (c, peak(r, p, c))
        })
        .min_by(|a, b| a.1.total_cmp(&b.1))
        .expect("candidate list is non-empty")
}

fn prefactor(r: f64, p: f64) -> f64 {
    r / (2.0 * PI.powi(3) * p).sqrt()
}

/// Roundoff estimate of `θ_r(p)` without evaluating it.
pub fn theta_noise(r: f64, p: f64) -> f64 {
    let (_, v) = best_shift(r, p);
    prefactor(r, p) * 1e-16 * v.exp()
}

/// `θ_r(p)` by contour-shifted quadrature.
pub fn hartman_watson_theta(r: f64, p: f64) -> Result<ThetaValue> {
    if !(r > 0.0 && p > 0.0 && r.is_finite() && p.is_finite()) {
        return Err(Error::Domain {
            what: "Hartman-Watson arguments",
            detail: format!("r = {r}, p = {p}; both must be positive"),
        });
    }
    let (c, v) = best_shift(r, p);
    let span = (0..=6000)
        .map(|i| 60.0 * i as f64 / 6000.0)
        .filter(|&s| log_modulus(r, p, c, s) > v - DYNAMIC_RANGE)
        .fold(0.0, f64::max)
        + 0.5;
    let width = (0.5 * p).min(0.05);
    let panels = ((2.0 * span / width).ceil() as usize).clamp(16, 40_000);
    let shift = Complex64::new(0.0, c);
    let i_pi = Complex64::new(0.0, PI);
    let g: Complex64 = integrate_fixed(
        |s: f64| {
            let y = s + shift;
            let d = y - i_pi;
            (-(d * d) / (2.0 * p) - r * y.cosh()).exp() * y.sinh()
        },
        -span,
        span,
        panels,
    );
    let pref = prefactor(r, p);
    let tame = (0.5..=5.0).contains(&r) && p <= 10.0;
    Ok(ThetaValue {
        value: pref * g.im / 2.0,
        noise: pref * 1e-16 * v.exp() * 2.0 * span,
        status: if tame {
            ThetaStatus::Ok
        } else {
            ThetaStatus::OutsideTameRange
        },
    })
}

/// Smallest `p` (on a geometric scan down from 1) at which the roundoff of
/// `θ_r(p)` stays below the noise floor.
pub fn resolution_floor(r: f64) -> f64 {
    let mut p: f64 = 1.0;
    while p > 1e-3 && theta_noise(r, p * 0.95) < NOISE_FLOOR {
        p *= 0.95;
    }
    p
}

/// `∫₀^∞ e^{−k²p/2} θ_r(p) dp` for each `k`, which reconstructs `I_k(r)`.
///
/// Below [`resolution_floor`] the density is negligible and is dropped;
/// `[1, ∞)` is mapped by `w = p^{−1/2}` to absorb the `p^{−3/2}` tail.
pub fn hartman_watson_laplace(r: f64, ks: &[f64], rel_tol: f64) -> Result<Vec<f64>> {
    let theta = |p: f64| {
        hartman_watson_theta(r, p)
            .map(|t| t.value)
            .unwrap_or(f64::NAN)
    };
    let weights = |p: f64, th: f64| -> Vec<f64> {
        ks.iter().map(|k| (-k * k * p / 2.0).exp() * th).collect()
    };
    let p0 = resolution_floor(r);
    let opts = QuadOptions::rel(rel_tol).parallel().max_intervals(400);
    let head = integrate(|p: f64| weights(p, theta(p)), p0, 1.0, opts);
    let tail = integrate(
        |w: f64| {
            let p = 1.0 / (w * w);
            weights(p, theta(p) * 2.0 / (w * w * w))
        },
        0.0,
        1.0,
        opts,
    );
    let total: Vec<f64> = head
        .value
        .iter()
        .zip(&tail.value)
        .map(|(a, b)| a + b)
        .collect();
    if total.iter().any(|v| !v.is_finite()) {
        return Err(Error::InternalInconsistency(
            "non-finite Hartman-Watson density value".into(),
        ));
    }
    if !(head.converged && tail.converged) {
        return Err(Error::Quadrature {
            achieved: head.error + tail.error,
            target: rel_tol,
        });
    }
    Ok(total)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn domain() {
        assert!(hartman_watson_theta(0.0, 1.0).is_err());
        assert!(hartman_watson_theta(1.0, -1.0).is_err());
        assert_eq!(
            hartman_watson_theta(1.0, 20.0).unwrap().status,
            ThetaStatus::OutsideTameRange
        );
    }

    #[test]
    fn shift_reduces_peak() {
        let (c, v) = best_shift(1.0, 0.1);
        assert!(c > 0.0);
        assert!(v < peak(1.0, 0.1, 0.0));
    }
}
