use thiserror::Error;

/// Errors raised by the special-function, channel and link layers.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("gamma function pole at x = {0}")]
    Pole(f64),

    #[error("invalid parameter: {0}")]
    Parameter(String),

    #[error("argument outside domain: {0}")]
    Domain(String),

    #[error("series did not converge within {terms} terms")]
    NonConvergence { terms: usize },

    #[error("degenerate Meijer-G parameters: {0}")]
    Degenerate(String),

    #[error("no vertical contour separates the pole families (left edge {left}, right edge {right})")]
    ContourPlacement { left: f64, right: f64 },

    #[error("quadrature did not converge: {0}")]
    Quadrature(String),

    #[error("{what} = {value} is outside its admissible range")]
    OutOfRange { what: &'static str, value: f64 },
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

pub(crate) fn param<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Parameter(msg.into()))
}
