//! Linear representations of finite categories, the functor-expression semantics,
//! difference functors and exponential-functor identities.

mod eval;
mod exponential;
mod expr;
mod nat;
mod poly;
mod rep;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::fincat::CatError;

pub use eval::{div_power, evaluate, evaluate_as, ext_power, sym_power, tensor_power, MatrixFunctor};
pub use exponential::{convolution_check, exponential_check, ConvolutionReport, ExpFamily, ExponentialReport};
pub use expr::{ExprKind, FunctorExpr};
pub use nat::NatTrans;
pub use poly::{difference, poly_degree, PolyDegree};
pub use rep::{hom_dim, LinRep, RepRecord};

#[cfg(test)]
mod tests;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Variance {
    Covariant,
    Contravariant,
}

impl Variance {
    pub fn flip(self) -> Variance {
        match self {
            Variance::Covariant => Variance::Contravariant,
            Variance::Contravariant => Variance::Covariant,
        }
    }

    /// Variance of a composite `outer ∘ inner`.
    pub fn compose(self, inner: Variance) -> Variance {
        if self == inner {
            Variance::Covariant
        } else {
            Variance::Contravariant
        }
    }
}

#[derive(Debug, Error)]
pub enum FunRepError {
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error("at {path}: {msg}")]
    Kind { path: String, msg: String },
    #[error("variance mismatch: {0}")]
    Variance(String),
    #[error("representations live on different categories")]
    CategoryMismatch,
    #[error("truncation too small: {0}")]
    CapTooSmall(String),
    #[error("not a functor: {0}")]
    NotFunctorial(String),
    #[error("shape mismatch: {0}")]
    Shape(String),
    #[error(transparent)]
    Cat(#[from] CatError),
}
