use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    /// Input outside the mathematical domain of the operation.
    #[error("domain error: {0}")]
    Domain(String),

    /// Evaluation at a pole of Γ, ψ or a polygamma function.
    #[error("pole at nonpositive integer {0}")]
    Pole(i64),

    #[error("series division by a series with zero constant term")]
    ZeroConstantTerm,

    #[error("composition requires an inner series with zero constant term")]
    NonzeroConstantTerm,

    /// The recurrence cannot determine the term following index `n`.
    #[error("leading recurrence coefficient vanishes at n = {0}")]
    LeadingCoefficientVanishes(i64),

    #[error("insufficient series order: need more than {needed}, have {have}")]
    InsufficientOrder { needed: usize, have: usize },

    #[error("precision failure: {0}")]
    Precision(String),

    /// Two routes that must agree exactly did not.
    #[error("methods disagree: {0}")]
    Disagreement(String),

    #[error("degenerate input: {0}")]
    Degenerate(String),
}

impl Error {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }

    pub(crate) fn precision(msg: impl Into<String>) -> Self {
        Error::Precision(msg.into())
    }
}
