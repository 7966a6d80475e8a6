//! Special functions: Gamma, scaled Bessel `I_k`, generalized Wright series,
//! Mittag-Leffler, the one-sided Lévy density, the Hartman–Watson density and
//! numerical Mellin transforms, plus the quadrature they share.

pub mod bessel;
pub mod gamma;
pub mod hartman_watson;
pub mod levy;
pub mod mellin;
pub mod quad;
pub mod wright;

pub use bessel::{bessel_i0_scaled, bessel_i_scaled, bessel_i_scaled_seq};
pub use gamma::{gamma, gamma_real, ln_gamma, recip_gamma, recip_gamma_real};
pub use hartman_watson::{hartman_watson_laplace, hartman_watson_theta, ThetaStatus, ThetaValue};
pub use levy::{levy_pdf, levy_pdf_integral, LevyMethod, LevyValue};
pub use mellin::{
    mellin_convolve, mellin_inverse, mellin_numeric, mellin_parseval_check, MellinValue,
};
pub use wright::{
    mittag_leffler, wright_psi, Classification, ConvergenceClass, SeriesStatus, SeriesValue,
    WrightParam, WrightSpec,
};
