use thiserror::Error;

use crate::field::Field;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("division by zero")]
    DivisionByZero,
    #[error("field mismatch: {left} vs {right}")]
    FieldMismatch { left: Field, right: Field },
    #[error("characteristic {0} is not allowed (need p >= 5)")]
    BadFieldChar(u64),
    #[error("{0} is not a prime")]
    NotPrime(u64),
    #[error("matrix is singular")]
    Singular,
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("invalid algebra: {0}")]
    InvalidAlgebra(String),
    #[error("module axiom fails; cocycle condition requires a left module")]
    ModuleAxiomFailed,
    #[error("sub-basis does not span a subalgebra")]
    NotASubalgebra,
    #[error("projection is not idempotent onto the sub-basis span")]
    NotIdempotent,
    #[error("algebra does not satisfy the Malcev identity")]
    NotMalcev,
    #[error("factor algebra {0} is not Malcev")]
    FactorNotMalcev(&'static str),
    #[error("λ violates T6: {0}")]
    LambdaInvalid(String),
    #[error("resource limit: {0}")]
    ResourceLimit(String),
    #[error("field {0} not allowed here: {1}")]
    FieldNotAllowed(Field, String),
}
