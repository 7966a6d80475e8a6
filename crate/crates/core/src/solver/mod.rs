//! Evolution machinery: the semi-discrete heat kernel, the time-changed
//! Dirac–Fokker–Planck solver and its time-stepping cross-check, the
//! Klein–Gordon ansatz, Lévy subordination, the `K`/`W` kernels and their
//! Mellin–Barnes representation, and the Wilson diffusion coefficient.

pub mod dfp;
pub mod heat;
pub mod kernels;
pub mod klein_gordon;
pub mod subordination;
pub mod wilson;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub use dfp::{dfp_evolve, dfp_kernel, dfp_multiplier, dfp_timestep_oracle, OracleRun};
pub use heat::{heat_kernel, heat_kernel_bessel, n_kernel};
pub use kernels::{
    kernel_k_beta, kernel_k_beta_wright, mellin_barnes_integrand, mellin_barnes_kernel,
    mellin_fg_identity_check, w_kernel_field, Contour, ContourStatus, MellinBarnesValue,
};
pub use klein_gordon::{kg_multiplier, kg_residual, klein_gordon_ansatz};
pub use subordination::{
    levy_subordination_check, levy_subordination_modewise, ModewiseSubordination, Subordination,
};
pub use wilson::{wilson_sigma, wilson_sigma_forms};

/// Scalars of the evolution equations.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ModelParams {
    /// Drift `μ`.
    pub mu: f64,
    /// Diffusion `σ² ≥ 0`.
    pub sigma2: f64,
    /// Hurst exponent `H ∈ (0, 1)`.
    pub hurst: f64,
    /// Gaussian damping `p ≥ 0` of the Klein–Gordon ansatz.
    #[serde(default)]
    pub p: f64,
}

impl ModelParams {
    pub fn new(mu: f64, sigma2: f64, hurst: f64, p: f64) -> Result<Self> {
        let params = ModelParams {
            mu,
            sigma2,
            hurst,
            p,
        };
        params.validate()?;
        Ok(params)
    }

    pub fn validate(&self) -> Result<()> {
        if !self.mu.is_finite() {
            return Err(Error::InvalidParameter(format!("mu = {}", self.mu)));
        }
        if !(self.sigma2 >= 0.0 && self.sigma2.is_finite()) {
            return Err(Error::InvalidParameter(format!(
                "sigma2 = {} must be >= 0",
                self.sigma2
            )));
        }
        if !(self.hurst > 0.0 && self.hurst < 1.0) {
            return Err(Error::InvalidParameter(format!(
                "hurst = {} not in (0, 1)",
                self.hurst
            )));
        }
        if !(self.p >= 0.0 && self.p.is_finite()) {
            return Err(Error::InvalidParameter(format!(
                "p = {} must be >= 0",
                self.p
            )));
        }
        Ok(())
    }

    /// `σ² t^{2H}`, the time-changed variance.
    pub fn variance(&self, t: f64) -> f64 {
        self.sigma2 * t.powf(2.0 * self.hurst)
    }
}

/// Selects the cosine (`β = 0`) or sinc (`β = 1`) kernel.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum KernelTag {
    Cosine,
    Sinc,
}

impl KernelTag {
    pub fn from_beta(beta: u8) -> Result<Self> {
        match beta {
            0 => Ok(KernelTag::Cosine),
            1 => Ok(KernelTag::Sinc),
            other => Err(Error::InvalidParameter(format!(
                "beta = {other} not in {{0, 1}}"
            ))),
        }
    }

    pub fn beta(self) -> f64 {
        match self {
            KernelTag::Cosine => 0.0,
            KernelTag::Sinc => 1.0,
        }
    }
}

/// `sin(a·s)/s` extended by `a` at `s = 0`.
pub(crate) fn sinc_scaled(a: f64, s: f64) -> f64 {
    if s == 0.0 {
        a
    } else {
        (a * s).sin() / s
    }
}

fn check_time(t: f64) -> Result<()> {
    if t >= 0.0 && t.is_finite() {
        Ok(())
    } else {
        Err(Error::InvalidParameter(format!("t = {t} must be >= 0")))
    }
}
