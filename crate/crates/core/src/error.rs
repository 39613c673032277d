use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    /// A radicand could not be decomposed within the configured factoring budget.
    #[error("instance too large: {0}")]
    InstanceTooLarge(String),

    /// The sum-distribution dynamic program would need more states than allowed.
    #[error("budget exceeded: {states} DP states exceed the cap of {budget}")]
    BudgetExceeded { states: usize, budget: usize },

    #[error("too many attributes for outcome enumeration: {0} (max {max})", max = crate::distmodel::MAX_ENUMERATED_ATTRIBUTES)]
    TooManyAttributes(usize),

    #[error("too many items for outcome enumeration: {0} (max {max})", max = crate::unitdemand::MAX_ITEMS)]
    TooManyItems(usize),

    #[error("search space too large: {0} price vectors (max {max})", max = crate::unitdemand::MAX_SEARCH)]
    SearchTooLarge(u128),

    #[error("invalid instance: {0}")]
    InvalidInstance(String),

    #[error("equality instance")]
    EqualityInstance,

    #[error("decode error: {0}")]
    DecodeError(String),

    /// A property established by a reduction's correctness argument failed
    /// to hold on a concrete instance.
    #[error("proof violation: {0}")]
    ProofViolation(String),

    #[error("parse error: {0}")]
    Parse(String),
}

impl Error {
    /// Process exit status for the command-line front end.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::InvalidInstance(_) | Error::EqualityInstance | Error::Parse(_) => 1,
            Error::InstanceTooLarge(_)
            | Error::BudgetExceeded { .. }
            | Error::TooManyAttributes(_)
            | Error::TooManyItems(_)
            | Error::SearchTooLarge(_) => 2,
            Error::DecodeError(_) | Error::ProofViolation(_) => 3,
        }
    }
}
