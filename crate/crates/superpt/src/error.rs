//! Error and diagnostic types shared across the crate.

use std::fmt;

/// A single invariant violation found by structural validation.
///
/// Violations are data, not failures: `validate` collects all of them so a
/// caller (or the CLI) can report the complete list at once.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Violation {
    /// Which piece of data is at fault, e.g. `"a0"` or `"higher[1]"`.
    pub location: String,
    /// Human-readable description of the broken invariant.
    pub message: String,
}

impl Violation {
    pub fn new(location: impl Into<String>, message: impl Into<String>) -> Self {
        Self {
            location: location.into(),
            message: message.into(),
        }
    }
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {}", self.location, self.message)
    }
}

#[derive(Debug, Clone, thiserror::Error)]
pub enum Error {
    #[error("generator count mismatch: {0} vs {1}")]
    GeneratorMismatch(usize, usize),
    #[error("generator index {index} out of range for {n_gen} generators")]
    GeneratorOutOfRange { index: usize, n_gen: usize },
    #[error("monomial indices must be strictly increasing and in range")]
    NonCanonicalMonomial,
    #[error("at most 64 generators are supported, requested {0}")]
    TooManyGenerators(usize),
    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),
    #[error("parity violation: {0}")]
    ParityViolation(String),
    #[error("point {0:?} lies outside the chart domain")]
    OutOfDomain(Vec<f64>),
    #[error("operation requires a polynomial trajectory, got sampled data")]
    SampledTrajectory,
    #[error("time {0} is outside the trajectory domain")]
    OutOfRange(f64),
    #[error("insufficient Grassmann generators: need {needed}, have {available}")]
    InsufficientGenerators { needed: usize, available: usize },
    #[error("step size must be positive and finite, got {0}")]
    InvalidStep(f64),
    #[error("degenerate integration interval [{0}, {1}]")]
    DegenerateInterval(f64, f64),
    #[error("cannot glue transports: {0}")]
    GlueMismatch(String),
    #[error("time {0} does not lie on the sample grid")]
    OffGrid(f64),
    #[error("nilpotent part of the time argument must square to zero")]
    NilpotentOrder,
    #[error("matrix body is singular")]
    SingularBody,
    #[error("invalid superconnection: {}", format_violations(.0))]
    InvalidSuperconnection(Vec<Violation>),
    #[error("non-finite value produced during integration")]
    NonFinite,
}

fn format_violations(violations: &[Violation]) -> String {
    violations
        .iter()
        .map(|v| v.to_string())
        .collect::<Vec<_>>()
        .join("; ")
}

pub type Result<T> = std::result::Result<T, Error>;
