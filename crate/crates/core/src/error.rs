use thiserror::Error;

/// Errors raised by the physics and numerics layers.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    /// An argument lies outside the domain where the quantity is defined.
    #[error("domain error: {0}")]
    Domain(String),

    /// A simple pole was hit exactly (e.g. a lossless plasmon resonance).
    #[error("pole condition: {0}")]
    Pole(String),

    /// A tabulated quantity was queried outside its grid.
    #[error("frequency {omega:e} rad/s outside tabulated range [{min:e}, {max:e}]")]
    Tabulation { omega: f64, min: f64, max: f64 },

    /// Malformed or physically inconsistent input data.
    #[error("invalid data: {0}")]
    Data(String),

    /// Quadrature or series failed to reach the requested tolerance.
    #[error("tolerance not reached in {context}: estimate {estimate:e}, error {error:e} after {evaluations} evaluations")]
    Tolerance {
        context: String,
        estimate: f64,
        error: f64,
        evaluations: usize,
    },

    /// The requested operation is not available for this configuration.
    #[error("unsupported: {0}")]
    Unsupported(String),
}

pub type Result<T> = std::result::Result<T, Error>;
