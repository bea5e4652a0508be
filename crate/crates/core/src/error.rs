use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("coefficient ring mismatch: {left} vs {right}")]
    RingMismatch { left: String, right: String },

    #[error("inner series must have zero constant term (found {0})")]
    NonzeroConstant(String),

    #[error("constant term {0} is not a unit")]
    NotAUnit(String),

    #[error("value {value} is not representable in {ring}")]
    NotRepresentable { value: String, ring: String },

    #[error("operation requires a Q-algebra, got {0}")]
    NotQAlgebra(String),

    #[error("linear coefficient must be 1, found {0}")]
    BadLinearCoefficient(String),

    #[error("invalid ring: {0}")]
    InvalidRing(String),

    #[error("cannot parse rational from {0:?}")]
    ParseRational(String),

    #[error("unsupported Eisenstein weight {0} (expected 2, 4 or 6)")]
    UnsupportedWeight(i64),

    #[error("tau must lie in the upper half-plane (Im tau = {0})")]
    NotUpperHalfPlane(String),

    #[error("{exponent} is not a root of the indicial polynomial")]
    NotIndicialRoot { exponent: String },

    #[error("exponent sum {found} differs from the forced value {expected}")]
    ExponentSum { found: String, expected: String },

    #[error("invalid differential equation: {0}")]
    InvalidMlde(String),

    #[error("gram matrix is not positive definite")]
    NotPositiveDefinite,

    #[error("gram matrix is malformed: {0}")]
    BadGram(String),

    #[error("lattice has odd norms; theta series has half-integral exponents (norm {0})")]
    OddLattice(i64),

    #[error("enumeration budget exceeded: {0}")]
    BudgetExceeded(String),

    #[error("invalid finite ring: {0}")]
    InvalidFiniteRing(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}
