use thiserror::Error;

/// Errors surfaced by the exact kernel.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CoreError {
    #[error("division by zero polynomial")]
    DivisionByZero,
    #[error("polynomial is not monic")]
    NotMonic,
    #[error("interval endpoint is a root of the polynomial")]
    EndpointIsRoot,
    #[error("empty interval: lower bound must be below upper bound")]
    EmptyInterval,
    #[error("degree {degree} exceeds the configured cap {cap}")]
    DegreeCap { degree: usize, cap: usize },
    #[error("{0} is not a prime power")]
    NotPrimePower(String),
    #[error("{0} is not prime")]
    NotPrime(String),
    #[error("polynomial has odd degree where even degree is required")]
    OddDegree,
    #[error("functional equation violated at coefficient pair ({low}, {high})")]
    FunctionalEquation { low: usize, high: usize },
    #[error("polynomial is not a Weil polynomial for the given prime power")]
    NotWeil,
    #[error("polynomial is reducible where an irreducible class is required")]
    Reducible,
    #[error("classes belong to different prime powers")]
    MixedPrimePowers,
    #[error("duplicate class in set")]
    DuplicateClass,
    #[error("empty class set where at least one class is required")]
    EmptySet,
    #[error("class set has odd degree: a rational class is missing its mirror")]
    OddDegreeSet,
    #[error(
        "rational class has no standalone symmetric polynomial; only the paired product is defined"
    )]
    RationalClassAlone,
    #[error("operation requires every class to be non-real; a real class is present")]
    RealClassPresent,
    #[error("operation requires a rational class; {0} is not a square")]
    QNotSquare(String),
    #[error("class set is not a subset of the order's class set")]
    NotSubset,
    #[error("matrix dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("matrix is singular where an invertible matrix is required")]
    SingularMatrix,
    #[error("expected a square matrix")]
    NotSquareMatrix,
    #[error("Frobenius matrix is not semisimple: minimal polynomial has a repeated factor")]
    NotSemisimple,
    #[error("q * F^(-1) is not an integer matrix")]
    NonIntegralVerschiebung,
    #[error("pair supports or prime powers do not match: {0}")]
    PairMismatch(String),
    #[error("pair support is not contained in the order's class set")]
    SupportNotInOrder,
    #[error("restricted validation rejects real eigenvalue classes")]
    RealClassRestricted,
    #[error("invalid input: {0}")]
    Invalid(String),
}

pub type Result<T> = std::result::Result<T, CoreError>;
