//! Generalized Wright series
//!
//! ```text
//! ₚΨ_q[(a_k, A_k); (b_l, B_l); λ] = Σ_m Π Γ(a_k + A_k m) / Π Γ(b_l + B_l m) · λ^m / m!
//! ```
//!
//! with the convergence classification of Kilbas and the Mittag-Leffler
//! function as a special case.

use num_complex::Complex64;
use serde::Serialize;

use super::gamma::{gamma, is_pole, ln_gamma, ln_gamma_real, recip_gamma};
use crate::error::{Error, Result};

const TAIL_RUN: usize = 25;
const TAIL_TOL: f64 = 1e-16;
const MAX_TERMS: usize = 100_000;

/// Parameters `(a, A)` of one Gamma factor `Γ(a + A m)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WrightParam {
    pub a: Complex64,
    pub scale: f64,
}

impl WrightParam {
    pub fn new(a: impl Into<Complex64>, scale: f64) -> Self {
        WrightParam { a: a.into(), scale }
    }

    pub fn real(a: f64, scale: f64) -> Self {
        Self::new(Complex64::new(a, 0.0), scale)
    }
}

/// Upper (numerator) and lower (denominator) parameter lists.
#[derive(Debug, Clone, PartialEq)]
pub struct WrightSpec {
    pub upper: Vec<WrightParam>,
    pub lower: Vec<WrightParam>,
}

/// Convergence region of a Wright series.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum ConvergenceClass {
    /// `Δ > −1`: converges for every `λ`.
    Entire,
    /// `Δ = −1`: converges for `|λ| < ρ`, and on `|λ| = ρ` when `Re κ > 1/2`.
    Disc,
    /// `Δ < −1`: converges only at `λ = 0`.
    Origin,
}

/// Kilbas quantities of a [`WrightSpec`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Classification {
    pub delta: f64,
    pub rho: f64,
    pub kappa: Complex64,
    pub class: ConvergenceClass,
}

/// Whether the truncation rule was met.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum SeriesStatus {
    Converged,
    TermLimit,
}

impl SeriesStatus {
    pub fn is_converged(self) -> bool {
        self == SeriesStatus::Converged
    }
}

/// A summed series with its diagnostics.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SeriesValue {
    pub value: Complex64,
    pub terms_used: usize,
    pub status: SeriesStatus,
    /// `Σ |term|`, the scale against which cancellation is measured.
    pub abs_sum: f64,
}

impl SeriesValue {
    /// Estimated digits lost to cancellation, `Σ|term| / |sum|`.
    pub fn cancellation(&self) -> f64 {
        if self.value.norm() == 0.0 {
            if self.abs_sum == 0.0 {
                1.0
            } else {
                f64::INFINITY
            }
        } else {
            self.abs_sum / self.value.norm()
        }
    }
}

impl WrightSpec {
    pub fn new(upper: Vec<WrightParam>, lower: Vec<WrightParam>) -> Self {
        WrightSpec { upper, lower }
    }

    pub fn classify(&self) -> Classification {
        let delta = self.lower.iter().map(|p| p.scale).sum::<f64>()
            - self.upper.iter().map(|p| p.scale).sum::<f64>();
        let ln_rho = self
            .lower
            .iter()
            .map(|p| p.scale * p.scale.abs().ln())
            .sum::<f64>()
            - self
                .upper
                .iter()
                .map(|p| p.scale * p.scale.abs().ln())
                .sum::<f64>();
        let (p, q) = (self.upper.len() as f64, self.lower.len() as f64);
        let kappa = self.lower.iter().map(|w| w.a).sum::<Complex64>()
            - self.upper.iter().map(|w| w.a).sum::<Complex64>()
            + (p - q) / 2.0;
        let class = if delta > -1.0 + 1e-12 {
            ConvergenceClass::Entire
        } else if delta >= -1.0 - 1e-12 {
            ConvergenceClass::Disc
        } else {
            ConvergenceClass::Origin
        };
        Classification {
            delta,
            rho: ln_rho.exp(),
            kappa,
            class,
        }
    }

    /// Whether the series converges at `λ`.
    pub fn converges_at(&self, lambda: Complex64) -> bool {
        let c = self.classify();
        let r = lambda.norm();
        match c.class {
            ConvergenceClass::Entire => true,
            ConvergenceClass::Disc => {
                let edge = (r - c.rho).abs() <= 1e-12 * c.rho.max(1.0);
                if edge {
                    c.kappa.re > 0.5
                } else {
                    r < c.rho
                }
            }
            ConvergenceClass::Origin => r == 0.0,
        }
    }

    fn integer_scales(&self) -> bool {
        self.upper
            .iter()
            .chain(&self.lower)
            .all(|p| p.scale >= 1.0 && p.scale == p.scale.round() && p.scale <= 64.0)
    }

    fn lower_hits_pole(&self) -> bool {
        self.lower
            .iter()
            .any(|p| p.a.im == 0.0 && p.a.re <= 0.0 && p.a.re == p.a.re.round())
    }
}

/// Neumaier-compensated complex accumulator.
#[derive(Default)]
struct CompensatedSum {
    sum: Complex64,
    comp: Complex64,
}

impl CompensatedSum {
    fn add(&mut self, x: Complex64) {
        let add_part = |s: &mut f64, c: &mut f64, v: f64| {
            let t = *s + v;
            if s.abs() >= v.abs() {
                *c += (*s - t) + v;
            } else {
                *c += (v - t) + *s;
            }
            *s = t;
        };
        add_part(&mut self.sum.re, &mut self.comp.re, x.re);
        add_part(&mut self.sum.im, &mut self.comp.im, x.im);
    }

    fn value(&self) -> Complex64 {
        self.sum + self.comp
    }
}

fn sum_terms(mut next_term: impl FnMut(usize) -> Result<Complex64>) -> Result<SeriesValue> {
    let mut acc = CompensatedSum::default();
    let mut max_partial: f64 = 0.0;
    let mut abs_sum = 0.0;
    let mut run = 0;
    for m in 0..MAX_TERMS {
        let term = next_term(m)?;
        acc.add(term);
        abs_sum += term.norm();
        let partial = acc.value().norm();
        max_partial = max_partial.max(partial);
        if term.norm() <= TAIL_TOL * max_partial || term == Complex64::default() {
            run += 1;
            if run >= TAIL_RUN {
                return Ok(SeriesValue {
                    value: acc.value(),
                    terms_used: m + 1,
                    status: SeriesStatus::Converged,
                    abs_sum,
                });
            }
        } else {
            run = 0;
        }
    }
    Ok(SeriesValue {
        value: acc.value(),
        terms_used: MAX_TERMS,
        status: SeriesStatus::TermLimit,
        abs_sum,
    })
}

/// Evaluates `ₚΨ_q[spec; λ]`.
///
/// Integer scale factors use the exact Pochhammer ratio between successive
/// terms; other parameter sets evaluate each term through `ln Γ`, with
/// `1/Γ` making denominator poles exact zeros.
pub fn wright_psi(spec: &WrightSpec, lambda: Complex64) -> Result<SeriesValue> {
    if !spec.converges_at(lambda) {
        let c = spec.classify();
        return Err(Error::Divergent {
            delta: c.delta,
            rho: c.rho,
            kappa_re: c.kappa.re,
            abs_lambda: lambda.norm(),
        });
    }
    for p in &spec.upper {
        if p.scale > 0.0 && is_pole(p.a) {
            return Err(Error::Pole(p.a.re));
        }
    }
    if spec.integer_scales() && !spec.lower_hits_pole() {
        wright_by_recurrence(spec, lambda)
    } else {
        wright_by_terms(spec, lambda)
    }
}

fn wright_by_recurrence(spec: &WrightSpec, lambda: Complex64) -> Result<SeriesValue> {
    let mut term = Complex64::new(1.0, 0.0);
    for p in &spec.upper {
        term *= gamma(p.a)?;
    }
    for p in &spec.lower {
        term *= recip_gamma(p.a);
    }
    sum_terms(|m| {
        if m > 0 {
            let prev = (m - 1) as f64;
            let mut ratio = lambda / m as f64;
            for p in &spec.upper {
                let base = p.a + p.scale * prev;
                for j in 0..p.scale as usize {
                    ratio *= base + j as f64;
                }
            }
            for p in &spec.lower {
                let base = p.a + p.scale * prev;
                for j in 0..p.scale as usize {
                    ratio /= base + j as f64;
                }
            }
            term *= ratio;
        }
        Ok(term)
    })
}

fn wright_by_terms(spec: &WrightSpec, lambda: Complex64) -> Result<SeriesValue> {
    let ln_lambda = if lambda == Complex64::default() {
        None
    } else {
        Some(lambda.ln())
    };
    sum_terms(|m| {
        let mf = m as f64;
        let mut ln_term = Complex64::new(-ln_gamma_real(mf + 1.0), 0.0);
        match ln_lambda {
            Some(l) => ln_term += l * mf,
            None if m > 0 => return Ok(Complex64::default()),
            None => {}
        }
        for p in &spec.upper {
            ln_term += ln_gamma(p.a + p.scale * mf)?;
        }
        for p in &spec.lower {
            let arg = p.a + p.scale * mf;
            if is_pole(arg) {
                return Ok(Complex64::default());
            }
            ln_term -= ln_gamma(arg)?;
        }
        if !ln_term.re.is_finite() {
            return Ok(Complex64::default());
        }
        Ok(ln_term.exp())
    })
}

/// `E_{ρ,β}(λ) = ₁Ψ₁[(1,1); (β,ρ); λ]`.
pub fn mittag_leffler(rho: f64, beta: f64, lambda: Complex64) -> Result<SeriesValue> {
    if rho.is_nan() || rho <= 0.0 {
        return Err(Error::Domain {
            what: "Mittag-Leffler rho",
            detail: format!("{rho} must be positive"),
        });
    }
    let spec = WrightSpec::new(
        vec![WrightParam::real(1.0, 1.0)],
        vec![WrightParam::real(beta, rho)],
    );
    wright_psi(&spec, lambda)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::{E, PI};

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    #[test]
    fn exponential_case() {
        let spec = WrightSpec::new(
            vec![WrightParam::real(1.0, 1.0)],
            vec![WrightParam::real(1.0, 1.0)],
        );
        let v = wright_psi(&spec, c(2.0)).unwrap();
        assert!((v.value - E * E).norm() < 1e-13);
        assert_eq!(v.status, SeriesStatus::Converged);
    }

    #[test]
    fn mittag_leffler_values() {
        assert!((mittag_leffler(1.0, 1.0, c(1.0)).unwrap().value - E).norm() < 1e-14);
        let v = mittag_leffler(0.8, 1.7, c(0.0)).unwrap().value;
        assert!((v - recip_gamma(c(1.7))).norm() < 1e-15);
        assert!(mittag_leffler(0.0, 1.0, c(1.0)).is_err());
    }

    #[test]
    fn divergent_request_is_rejected() {
        // Δ = −1, ρ = 1
        let spec = WrightSpec::new(vec![WrightParam::real(1.0, 1.0)], vec![]);
        assert!(wright_psi(&spec, c(0.5)).is_ok());
        match wright_psi(&spec, c(2.0)) {
            Err(Error::Divergent { delta, rho, .. }) => {
                assert!((delta + 1.0).abs() < 1e-15);
                assert!((rho - 1.0).abs() < 1e-15);
            }
            other => panic!("expected divergence, got {other:?}"),
        }
    }

    #[test]
    fn numerator_pole_is_an_error() {
        let spec = WrightSpec::new(vec![WrightParam::real(-2.0, 1.0)], vec![]);
        assert!(matches!(wright_psi(&spec, c(0.1)), Err(Error::Pole(_))));
    }

    #[test]
    fn both_strategies_agree() {
        let spec = WrightSpec::new(vec![], vec![WrightParam::real(1.5, 1.0)]);
        let lam = Complex64::new(-3.0, 1.0);
        let a = wright_by_recurrence(&spec, lam).unwrap().value;
        let b = wright_by_terms(&spec, lam).unwrap().value;
        assert!((a - b).norm() < 1e-13 * a.norm().max(1.0));
        let cos = (PI.sqrt()
            * wright_by_terms(
                &WrightSpec::new(vec![], vec![WrightParam::real(0.5, 1.0)]),
                c(-PI * PI / 4.0),
            )
            .unwrap()
            .value)
            .re;
        assert!((cos + 1.0).abs() < 1e-12);
    }
}
