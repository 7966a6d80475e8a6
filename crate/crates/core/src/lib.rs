//! Time-changed Dirac–Fokker–Planck evolution on periodic lattices.
//!
//! Fields take values in the complexified Clifford algebra ℂ ⊗ Cl(n,n)
//! ([`clifford`]) and live on a periodic truncation of `hℤⁿ` ([`lattice`]).
//! Operators act through Fourier multipliers ([`spectral`], [`operators`]);
//! [`solver`] assembles the evolution kernels and [`specfun`] supplies the
//! Gamma, Bessel, Wright, Lévy, Hartman–Watson and Mellin machinery.

pub mod clifford;
pub mod error;
pub mod io;
pub mod lattice;
pub mod operators;
pub mod solver;
pub mod specfun;
pub mod spectral;

pub use clifford::{BladeIndex, Multivector};
pub use error::{Error, Result};
pub use lattice::{delta_h, normalization_check, sesquilinear, Field, GridSpec, Rational};
pub use spectral::{convolve, dft_forward, dft_inverse, MomentumField};
