use thiserror::Error;

/// Errors raised by the numerical routines and the experiment driver.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid couplings: {0}")]
    InvalidCouplings(String),

    #[error("root {re:+.3e}{im:+.3e}i lies on the unit circle away from z = 1")]
    RootClassification { re: f64, im: f64 },

    #[error("square-root coefficient {index} has imaginary residue {residue:.3e}")]
    NonRealCoefficient { index: usize, residue: f64 },

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("chain length {n} must be odd and larger than {min}")]
    InvalidLength { n: usize, min: usize },

    #[error("degenerate family infeasible: {0}")]
    InfeasibleFamily(String),

    #[error("no degenerate stationary point found: {0}")]
    NotFound(String),

    #[error("quadrature needs {panels} panels, cap is {cap}")]
    QuadratureNonConvergence { panels: usize, cap: usize },

    #[error("argument {0} outside the supported domain")]
    Domain(f64),

    #[error("parametrix regime error: {0}")]
    Regime(String),

    #[error("invalid charge index {index} for N = {n}")]
    Index { index: usize, n: usize },

    #[error("need at least 3 time samples, got {0}")]
    InsufficientSamples(usize),

    #[error("{0}")]
    Range(String),

    #[error("trajectory blew up at t = {time} (max |q| = {max_q:.3e})")]
    BlowUp { time: f64, max_q: f64 },

    #[error("{aborted} of {replicas} replicas aborted")]
    TooManyAborted { aborted: usize, replicas: usize },

    #[error("grid mismatch: {0}")]
    GridMismatch(String),

    #[error("config error in `{field}`: {message}")]
    Config { field: String, message: String },

    #[error("io error: {0}")]
    Io(String),
}

impl Error {
    pub(crate) fn config(field: impl Into<String>, message: impl Into<String>) -> Self {
        Error::Config {
            field: field.into(),
            message: message.into(),
        }
    }

    /// True for failures that come from the numerics rather than the input.
    pub fn is_numerical(&self) -> bool {
        matches!(
            self,
            Error::QuadratureNonConvergence { .. }
                | Error::BlowUp { .. }
                | Error::TooManyAborted { .. }
                | Error::RootClassification { .. }
                | Error::NonRealCoefficient { .. }
                | Error::NotFound(_)
                | Error::Regime(_)
        )
    }
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
