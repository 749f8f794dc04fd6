//! Exact linear algebra over finite fields.

pub mod dense;
pub mod field;
pub mod sparse;
pub mod subspace;

pub use dense::{MatF, Rref};
pub use field::{Elem, Field};
pub use sparse::{Elimination, LinMap, SpEchelon, SpMat, SpVec};
pub use subspace::{combinations, gaussian_binomial, QuotientData, Subspace};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum LinAlgError {
    #[error("{0} is not a prime power")]
    NotPrimePower(u32),
    #[error("field size {0} exceeds the supported bound 256")]
    FieldTooLarge(u32),
    #[error("dimension mismatch in {op}: {left:?} vs {right:?}")]
    DimensionMismatch { op: &'static str, left: (usize, usize), right: (usize, usize) },
    #[error("matrix is singular")]
    Singular,
}
