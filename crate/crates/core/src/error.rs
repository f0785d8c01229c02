use thiserror::Error;

/// Errors raised by the numerical pipeline.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    /// An argument lies outside the mathematical domain of an operation.
    #[error("domain error: {0}")]
    Domain(String),

    /// A configuration parameter (order, grid size, ...) is out of range.
    #[error("configuration error: {0}")]
    Config(String),

    /// Input data contains non-finite or otherwise invalid values.
    #[error("data error: {0}")]
    Data(String),

    #[error("capacity error: dimension {n} exceeds the limit {limit} for {what}")]
    Capacity { what: &'static str, n: usize, limit: usize },

    /// An iterative solver hit its iteration cap.
    #[error("convergence error: {message} (best residuals {residuals:?})")]
    Convergence { message: String, residuals: Vec<f64> },

    /// A symmetric factorization met a (numerically) zero pivot.
    #[error("pivot error at step {index}: pivot {pivot:e}; perturb the shift and retry")]
    Pivot { index: usize, pivot: f64 },

    /// A spectrum does not contain every eigenvalue the caller needs.
    #[error("completeness error: {0}")]
    Completeness(String),

    /// No tabulated constant covers the requested `(gamma, d)`.
    #[error("no tabulated bound for gamma = {gamma}, d = {d}: {reason}")]
    NoBound { gamma: f64, d: usize, reason: String },

    /// A counting function is still positive at the end of the integration range.
    #[error("tail error: counting function is {count} at tau_max = {tau_max}")]
    Tail { count: usize, tau_max: f64 },

    /// A checker refuses an input for which the inequality has no finite constant.
    #[error("refused: {0}")]
    Refused(String),

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
