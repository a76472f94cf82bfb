use thiserror::Error;

/// Every failure mode surfaced by the library.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    /// Malformed input: unknown ids, out-of-range indices, infeasible matchings where a
    /// feasible one is required, malformed guesses.
    #[error("rejected input: {0}")]
    RejectedInput(String),
    /// The instance shape does not fit the requested solver (ties, bounded quotas, ...).
    #[error("wrong variant: {0}")]
    WrongVariant(String),
    /// The solver does not cover this parameter range (e.g. lower quotas of three or more).
    #[error("not applicable: {0}")]
    NotApplicable(String),
    #[error("enumeration overflow: more than {0} matchings")]
    EnumerationOverflow(usize),
    #[error("solver budget exceeded after {0} search nodes")]
    SolverBudget(u64),
    #[error("internal invariant violated: {0}")]
    InternalInvariant(String),
    #[error("parse error at line {line}, column {column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },
    /// The document parsed but the instance breaks the model invariants.
    #[error("invalid instance: {}", .0.join("; "))]
    Invalid(Vec<String>),
}

pub type Result<T> = std::result::Result<T, Error>;
