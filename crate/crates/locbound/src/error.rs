use std::fmt;

/// Errors produced by geometry, bound, and estimator computations.
#[derive(Debug, Clone, PartialEq)]
pub enum Error {
    /// A parameter violates its documented range.
    InvalidParameter(String),
    /// Sensor/transmitter geometry admits no well-defined measurement model.
    DegenerateGeometry(String),
    /// Shadowing covariance has no Cholesky factor even after jitter.
    CovarianceNotPsd(String),
    /// Shadowing covariance cannot be solved against.
    CovarianceNotInvertible(String),
    /// An array orientation error of magnitude >= pi/2 makes the DoA variance infinite.
    BroadsideSingularity { orientation_error: f64 },
    /// Gauss-Hermite quadrature did not converge under node doubling.
    QuadratureFailed(String),
    /// A special-function series did not converge.
    SpecialFunctionFailure(String),
    /// Fisher information is singular or too ill-conditioned to invert.
    UnlocalizableConfiguration { condition_number: f64 },
    /// Bearing lines do not intersect in a numerically usable way.
    UnlocalizableBearingGeometry { condition_number: f64 },
    /// A config or scenario file failed to parse.
    Parse { line: usize, message: String },
    /// File input/output failure.
    Io(String),
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::InvalidParameter(msg) => write!(f, "invalid parameter: {msg}"),
            Error::DegenerateGeometry(msg) => write!(f, "degenerate geometry: {msg}"),
            Error::CovarianceNotPsd(msg) => write!(f, "covariance not PSD: {msg}"),
            Error::CovarianceNotInvertible(msg) => {
                write!(f, "covariance not invertible: {msg}")
            }
            Error::BroadsideSingularity { orientation_error } => write!(
                f,
                "broadside singularity: orientation error {orientation_error:.6} rad has \
                 magnitude >= pi/2"
            ),
            Error::QuadratureFailed(msg) => write!(f, "quadrature failed: {msg}"),
            Error::SpecialFunctionFailure(msg) => {
                write!(f, "special function failure: {msg}")
            }
            Error::UnlocalizableConfiguration { condition_number } => write!(
                f,
                "unlocalizable configuration: condition number {condition_number:.3e} \
                 exceeds 1e12"
            ),
            Error::UnlocalizableBearingGeometry { condition_number } => write!(
                f,
                "unlocalizable bearing geometry: normal equations condition number \
                 {condition_number:.3e}"
            ),
            Error::Parse { line, message } => write!(f, "parse error (line {line}): {message}"),
            Error::Io(msg) => write!(f, "io error: {msg}"),
        }
    }
}

impl std::error::Error for Error {}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
