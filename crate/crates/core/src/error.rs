use thiserror::Error;

/// Errors raised by the toolkit.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("value {value} is outside the domain {domain}")]
    Domain { value: f64, domain: &'static str },

    #[error("sample is empty")]
    EmptySample,

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("step {step} exceeds the {available} simple spacings available")]
    StepTooLarge { step: usize, available: usize },

    #[error("disjoint {step}-step spacings require the step to divide {n_effective}")]
    NonDividingStep { step: usize, n_effective: usize },

    #[error("cannot parse {what} spec `{spec}`: {reason}")]
    Spec {
        what: &'static str,
        spec: String,
        reason: String,
    },

    #[error("quadrature did not converge: estimate {value}, error {error}")]
    Quadrature { value: f64, error: f64 },

    #[error("degenerate null variance for h = {0}")]
    DegenerateVariance(String),

    #[error("zero efficacy in the denominator")]
    ZeroEfficacy,

    #[error("{0}")]
    Unsupported(String),

    #[error("io error: {0}")]
    Io(String),

    #[error("malformed input: {0}")]
    Input(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Input(e.to_string())
    }
}

pub(crate) fn check_unit(x: f64) -> Result<()> {
    if (0.0..=1.0).contains(&x) {
        Ok(())
    } else {
        Err(Error::Domain {
            value: x,
            domain: "[0, 1]",
        })
    }
}
