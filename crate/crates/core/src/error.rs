use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("invalid field parameters: {0}")]
    InvalidParameters(String),
    #[error("enumeration of {needed} items exceeds the budget of {budget}")]
    BudgetExceeded { needed: u128, budget: u128 },
    #[error("the discrete logarithm of zero is undefined")]
    LogOfZero,
    #[error("cannot normalize the zero vector")]
    ZeroVector,
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("matrix is singular")]
    Singular,
    #[error("point map is not injective on points")]
    NotInjective,
    #[error("center and axis intersect")]
    CenterMeetsAxis,
    #[error("center and axis do not span the ambient space")]
    CenterAxisNotSpanning,
    #[error("a projected point lies in the center")]
    PointInCenter,
    #[error("projection of a point is not a single point")]
    DegenerateProjection,
    #[error("not a permutation of 0..{0}")]
    InvalidPermutation(usize),
    #[error("inconsistent witness: {0}")]
    InconsistentWitness(String),
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("internal consistency check failed: {0}")]
    Consistency(String),
}

pub type Result<T> = std::result::Result<T, Error>;
