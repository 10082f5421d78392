use thiserror::Error;

/// Errors raised by the library. Infinite norms are values, not errors.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("functions live on different measure spaces (total masses {left} and {right})")]
    SpaceMismatch { left: String, right: String },

    #[error("indeterminate form in integral")]
    IndeterminateForm,

    #[error("tail value would become negative ({0})")]
    NegativeTail(String),

    #[error("partition map assigns {got} pieces but the function has {expected}")]
    PartitionMismatch { expected: usize, got: usize },

    #[error("block {0} has infinite mass")]
    InfiniteBlock(usize),

    #[error("weight is not integrable")]
    WeightNotIntegrable,

    #[error("weight must be strictly positive almost everywhere")]
    NonPositiveWeight,

    #[error("function takes negative values")]
    NegativeValues,

    #[error("function has a positive tail on infinite mass")]
    TailPresent,

    #[error("norm is infinite")]
    NormInfinite,

    #[error("operation requires a Banach norm, got quasi-norm {0}")]
    QuasiNormSpec(String),

    #[error("modulus of concavity must be >= 1, got {0}")]
    InvalidConstant(String),

    #[error("exponent {0} is outside the admissible range")]
    InvalidExponent(String),

    #[error("sequence is not a non-decreasing nonnegative chain dominated by the limit (index {0})")]
    NotAChain(usize),

    #[error("sequence does not converge pointwise to the limit")]
    NoConvergence,

    #[error("set is not a member of the algebra")]
    NotAMember,

    #[error("ground set of size {0} exceeds the supported maximum of {max}", max = crate::stone::MAX_GROUND)]
    GroundTooLarge(usize),

    #[error("comparison could not be decided at the maximum precision")]
    Undecided,
}

pub type Result<T> = std::result::Result<T, Error>;
