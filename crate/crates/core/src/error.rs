use thiserror::Error;

use crate::dsl::ParseDiagnostic;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// A measure description violates one of its structural invariants.
    #[error("invalid measure: {0}")]
    InvalidSpec(String),

    #[error("{0}")]
    Parse(ParseDiagnostic),

    /// An argument is outside the domain of the operation.
    #[error("invalid input: {0}")]
    InvalidInput(String),

    /// The continuous-measure fast path was requested for a measure that
    /// may carry atoms.
    #[error("continuity certificate missing: {0}")]
    Certificate(String),

    /// A ball measure used for a dimension fit is indistinguishable from zero.
    #[error("degenerate signal at radius {radius}: ball measure {value} does not exceed its tolerance {tolerance}")]
    DegenerateSignal { radius: f64, value: f64, tolerance: f64 },

    /// The exact oracle has no closed form for this measure.
    #[error("oracle unsupported: {0}")]
    Unsupported(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
