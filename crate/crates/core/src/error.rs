use thiserror::Error;

/// Errors raised by the lattice, spectral and special-function routines.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("multivector dimension mismatch: {left} vs {right}")]
    DimensionMismatch { left: usize, right: usize },

    #[error("grid specifications differ")]
    SpecMismatch,

    #[error("invalid grid: {0}")]
    InvalidGrid(String),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("internal inconsistency: {0}")]
    InternalInconsistency(String),

    #[error("gamma function pole at {0}")]
    Pole(f64),

    #[error(
        "series diverges for |lambda| = {abs_lambda}: delta = {delta}, rho = {rho}, re(kappa) = {kappa_re}"
    )]
    Divergent {
        delta: f64,
        rho: f64,
        kappa_re: f64,
        abs_lambda: f64,
    },

    #[error("{what} is outside the admissible range: {detail}")]
    Domain { what: &'static str, detail: String },

    #[error("removable singularity at H = 1/2; the limit value is {limit}")]
    RemovableSingularity { limit: f64 },

    #[error("time stepping unstable: {steps} steps give dt * spectral radius = {ratio:.3}")]
    Unstable { steps: usize, ratio: f64 },

    #[error(
        "quadrature did not converge: achieved error estimate {achieved:e} (target {target:e})"
    )]
    Quadrature { achieved: f64, target: f64 },

    #[error("parse error: {0}")]
    Parse(String),

    #[error("io error: {0}")]
    Io(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}
