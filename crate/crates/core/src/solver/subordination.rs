//! Lévy subordination of the time-changed evolution by the Klein–Gordon
//! family:
//!
//! ```text
//! e^{−c t^{2H}} Ψ(·, t | 0) = ∫₀^∞ Ψ(·, t | p) c^{−1/H} L_H(p c^{−1/H}) dp
//! ```
//!
//! with `c = nσ²/h²` sitewise, and `c = σ²d²(ξ)/2` mode by mode in momentum
//! space. The substitution `p = c^{1/H} q` brings the density to unit
//! scale; the `q` integral is taken in `ln q`.

use num_complex::Complex64;
use rayon::prelude::*;

use super::klein_gordon::{kg_multiplier, klein_gordon_ansatz};
use super::{check_time, ModelParams};
use crate::clifford::{BladeIndex, Multivector};
use crate::error::{Error, Result};
use crate::lattice::Field;
use crate::operators::Multipliers;
use crate::specfun::levy::levy_log_support_start;
use crate::specfun::levy_pdf;
use crate::specfun::quad::{integrate, QuadOptions};
use crate::spectral::{dft_forward, MomentumField};

const QUAD_REL: f64 = 1e-10;
/// Neglected fraction of the `q` integral at the upper cut.
const TAIL: f64 = 1e-8;

/// Both sides of the subordination identity on the lattice.
#[derive(Debug, Clone)]
pub struct Subordination {
    pub lhs: Field,
    pub rhs: Field,
    /// `‖lhs − rhs‖∞ / ‖lhs‖∞`.
    pub rel_error: f64,
}

/// Both sides of the identity at every momentum node.
#[derive(Debug, Clone)]
pub struct ModewiseSubordination {
    pub lhs: MomentumField,
    pub rhs: MomentumField,
    pub rel_error: f64,
}

/// Upper end of the `ln q` window: the damping `e^{−sq}` or the density's
/// `q^{−H}` tail mass drops below [`TAIL`], whichever comes first.
fn log_window(hurst: f64, s: f64) -> (f64, f64) {
    let lo = levy_log_support_start(hurst);
    let mass_cut = -TAIL.ln() / hurst + 2.0;
    let hi = if s > 0.0 {
        (-TAIL.ln() / s).ln().min(mass_cut)
    } else {
        mass_cut
    };
    (lo, hi.max(lo + 1.0))
}

/// `L_H(q)·q` at `q = e^x`, NaN on evaluation failure.
fn levy_weight(hurst: f64, x: f64) -> f64 {
    let q = x.exp();
    levy_pdf(hurst, q).map(|v| v.value * q).unwrap_or(f64::NAN)
}

fn flatten(field: &Field, blades: &[BladeIndex]) -> Vec<Complex64> {
    blades.iter().flat_map(|&b| field.component(b)).collect()
}

fn relative_error(diff: f64, scale: f64) -> f64 {
    if scale == 0.0 {
        diff
    } else {
        diff / scale
    }
}

fn check_rate(c: f64) -> Result<()> {
    if c > 0.0 && c.is_finite() {
        Ok(())
    } else {
        Err(Error::InvalidParameter(format!(
            "subordination rate c = {c} must be positive; sigma2 = 0 is the c -> 0 limit"
        )))
    }
}

/// Sitewise identity with `c = nσ²/h²`, quadrature calling
/// [`klein_gordon_ansatz`] and [`levy_pdf`].
pub fn levy_subordination_check(
    phi0: &Field,
    t: f64,
    params: &ModelParams,
) -> Result<Subordination> {
    check_time(t)?;
    params.validate()?;
    let spec = *phi0.spec();
    let hurst = params.hurst;
    let c = spec.n() as f64 * params.sigma2 / (spec.h() * spec.h());
    check_rate(c)?;
    let psi0 = klein_gordon_ansatz(phi0, t, 0.0, params)?;
    let lhs = psi0.scale_real((-c * t.powf(2.0 * hurst)).exp());

    let blades = psi0.support();
    let scale = c.powf(1.0 / hurst);
    let (lo, hi) = log_window(hurst, scale * t * t);
    let integrand = |x: f64| -> Vec<Complex64> {
        let w = levy_weight(hurst, x);
        if w == 0.0 {
            return vec![Complex64::default(); blades.len() * spec.len()];
        }
        match klein_gordon_ansatz(phi0, t, scale * x.exp(), params) {
            Ok(psi) => flatten(&psi, &blades).into_iter().map(|v| v * w).collect(),
            Err(_) => vec![Complex64::new(f64::NAN, 0.0); blades.len() * spec.len()],
        }
    };
    let out = integrate(
        integrand,
        lo,
        hi,
        QuadOptions::rel(QUAD_REL)
            .with_abs(1e-14)
            .parallel()
            .max_intervals(2000),
    );
    if out.value.iter().any(|v| !v.norm().is_finite()) {
        return Err(Error::InternalInconsistency(
            "non-finite subordination integrand".into(),
        ));
    }
    if !out.converged {
        return Err(Error::Quadrature {
            achieved: out.error,
            target: QUAD_REL,
        });
    }
    let comps: Vec<(BladeIndex, Vec<Complex64>)> = blades
        .iter()
        .zip(out.value.chunks(spec.len()))
        .map(|(&b, chunk)| (b, chunk.to_vec()))
        .collect();
    let rhs = Field::from_components(spec, &comps);
    let rel_error = relative_error(lhs.max_abs_diff(&rhs)?, lhs.sup_norm());
    Ok(Subordination {
        lhs,
        rhs,
        rel_error,
    })
}

fn dense(m: &Multivector, len: usize) -> Vec<Complex64> {
    let mut out = vec![Complex64::default(); len];
    for (b, v) in m.terms() {
        out[b.0 as usize] = v;
    }
    out
}

/// Momentum-space identity with `c_ξ = σ²d²(ξ)/2` at each node.
pub fn levy_subordination_modewise(
    phi0: &Field,
    t: f64,
    params: &ModelParams,
) -> Result<ModewiseSubordination> {
    check_time(t)?;
    params.validate()?;
    let spec = *phi0.spec();
    let n = spec.n();
    let hurst = params.hurst;
    let m = Multipliers::cached(&spec);
    let spectrum = dft_forward(phi0);
    let dim = 1usize << (2 * n);

    let nodes: Vec<Result<(Multivector, Multivector)>> = (0..spec.len())
        .into_par_iter()
        .map(|i| {
            let (z, d2) = (&m.z()[i], m.d2()[i]);
            let v = spectrum.get(i);
            let psi0 = &kg_multiplier(z, d2, t, 0.0, params.mu) * v;
            let c = params.sigma2 * d2 / 2.0;
            let lhs = psi0.scale_real((-c * t.powf(2.0 * hurst)).exp());
            if c == 0.0 {
                return Ok((lhs, psi0));
            }
            let scale = c.powf(1.0 / hurst);
            let (lo, hi) = log_window(hurst, scale * t * t);
            let out = integrate(
                |x: f64| {
                    let w = levy_weight(hurst, x);
                    if w == 0.0 {
                        return vec![Complex64::default(); dim];
                    }
                    let p = scale * x.exp();
                    let psi = &kg_multiplier(z, d2, t, p, params.mu) * v;
                    dense(&psi, dim)
                        .into_iter()
                        .map(|c| c * w)
                        .collect::<Vec<_>>()
                },
                lo,
                hi,
                QuadOptions::rel(QUAD_REL)
                    .with_abs(1e-14)
                    .max_intervals(2000),
            );
            if out.value.iter().any(|v| !v.norm().is_finite()) {
                return Err(Error::InternalInconsistency(
                    "non-finite subordination integrand".into(),
                ));
            }
            if !out.converged {
                return Err(Error::Quadrature {
                    achieved: out.error,
                    target: QUAD_REL,
                });
            }
            let terms = out
                .value
                .iter()
                .enumerate()
                .map(|(b, &v)| (BladeIndex(b as u32), v));
            Ok((lhs, Multivector::from_terms(n, terms)?))
        })
        .collect();
    let mut lhs = Vec::with_capacity(spec.len());
    let mut rhs = Vec::with_capacity(spec.len());
    for node in nodes {
        let (l, r) = node?;
        lhs.push(l);
        rhs.push(r);
    }
    let lhs = MomentumField::from_values(spec, lhs)?;
    let rhs = MomentumField::from_values(spec, rhs)?;
    let rel_error = relative_error(lhs.max_abs_diff(&rhs)?, lhs.sup_norm());
    Ok(ModewiseSubordination {
        lhs,
        rhs,
        rel_error,
    })
}
