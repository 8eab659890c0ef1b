use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("{0} is not a prime")]
    NotPrime(u64),

    #[error("a group descriptor needs at least one cyclic factor")]
    EmptyExponents,

    #[error("cyclic factor exponents must be at least 1")]
    NonPositiveExponent,

    #[error("{what} exceeds the configured bound ({actual} > {limit})")]
    BoundExceeded {
        what: &'static str,
        limit: u128,
        actual: u128,
    },

    #[error("the trivial group has no proper subgroups")]
    TrivialGroup,

    #[error("element set is not a subgroup of the ambient group")]
    NotASubgroup,

    #[error("operands are defined over different groups")]
    DomainMismatch,

    #[error("homomorphism is not surjective onto (Z/{0})^2")]
    NotSurjective(u64),

    #[error("invalid surjection matrix: {0}")]
    InvalidSurjection(String),

    #[error("cyclotomic levels differ ({0} vs {1}); raise one explicitly")]
    LevelMismatch(u64, u64),

    #[error("vector has length {actual}, expected {expected}")]
    DimensionMismatch { expected: usize, actual: usize },

    #[error("precondition violated: {0}")]
    Precondition(String),
}
