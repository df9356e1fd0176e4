use thiserror::Error;

/// Errors produced by the toolkit.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    /// An argument lies outside the domain an operation is defined on.
    #[error("domain error: {0}")]
    Domain(String),

    /// The requested coding is not realised by any parameter in (0, 1/m].
    #[error("no root: {0}")]
    NoRoot(String),

    /// Two brackets could not be separated within the refinement cap.
    #[error("precision exhausted after {steps} refinement steps")]
    PrecisionExhausted { steps: usize },

    /// A gap of the thick subset `E_k` could not be separated at `level`.
    #[error("precision exhausted after {steps} refinement steps at k = {k}, level {level}")]
    PrecisionExhaustedAt { k: usize, level: usize, steps: usize },

    /// The point lies outside the convex hull of the attractor.
    #[error("hull violation: {0}")]
    HullViolation(String),

    /// The word is not admissible for the given point.
    #[error("word {0} is not admissible")]
    NotAdmissible(String),

    /// No cover interval meets the requested window.
    #[error("window does not meet the cover")]
    EmptyWindow,

    /// Input text could not be parsed.
    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
