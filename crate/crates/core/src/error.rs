use thiserror::Error;

/// Errors raised by field construction, arithmetic and verification.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("malformed record: {0}")]
    Malformed(String),

    #[error("polynomial is not monic: leading coefficient {0}")]
    NotMonic(String),

    #[error("polynomial is not squarefree")]
    NotSquarefree,

    #[error("polynomial has a rational root {0} and cannot define a field")]
    Reducible(String),

    #[error("signature ({r1}, {r2}) does not match the roots: {real} real roots found")]
    SignatureMismatch { r1: usize, r2: usize, real: usize },

    #[error("integral basis is singular or inconsistent: {0}")]
    BadIntegralBasis(String),

    #[error("discriminant {claimed} disagrees with the integral basis value {computed}")]
    DiscriminantMismatch { claimed: String, computed: String },

    #[error("root finder did not converge within {0} iterations")]
    NoConvergence(usize),

    #[error("root clusters cannot be separated at {0} bits")]
    UnresolvedRoots(usize),

    #[error("zero element has no height")]
    ZeroElement,

    #[error("vector has no nonzero entry")]
    ZeroVector,

    #[error("vector length {got} does not match field degree {expected}")]
    LengthMismatch { expected: usize, got: usize },

    #[error("vector entries are linearly dependent over the rationals")]
    DependentEntries,

    #[error("internal inconsistency: {0}")]
    Inconsistent(String),

    #[error("division by an interval containing zero")]
    DivisionByZero,

    #[error("logarithm of a non-positive interval")]
    LogDomain,

    #[error("rational element: minimal polynomial has degree 1")]
    RationalElement,

    #[error("invalid unit data: {0}")]
    BadUnit(String),

    #[error("log-embedding matrix is singular: units are not independent")]
    SingularRegulator,

    #[error("invalid extension data: {0}")]
    BadExtension(String),

    #[error("relative unit rank is zero: no relative regulator")]
    ZeroRelativeRank,

    #[error("expected {expected} units, got {got}")]
    UnitCount { expected: usize, got: usize },

    #[error("subfield lattice: {0}")]
    Lattice(String),

    #[error("node {0} is not in the lattice")]
    UnknownNode(String),

    #[error("not a directed path: {0}")]
    NotAPath(String),

    #[error("theorem not applicable: {0}")]
    Inapplicable(String),

    #[error("unknown field label {0}")]
    UnknownLabel(String),

    #[error("{0}")]
    Io(String),

    #[error("invalid record {label}: {violations:?}")]
    Invalid { label: String, violations: Vec<String> },
}

pub type Result<T> = std::result::Result<T, Error>;
