//! Möbius functions of finite posets, idempotent families in monoid algebras,
//! the Pirashvili equivalence between Γ- and Ω-modules, and the Morita
//! decomposition of span categories.

mod algebra;
mod burnside;
mod pirashvili;
mod poset;

use thiserror::Error;

use crate::fincat::CatError;
use crate::funrep::FunRepError;
use crate::spans::SpanError;

pub use algebra::{gamma_idempotents, span_idempotents, stanley_idempotents, AlgebraElement, IdempotentFamily, Subobject, SubobjectFamily};
pub use burnside::{act_on_element, burnside_xi, verify_morita_gamma, verify_morita_spans, MoritaBlock, MoritaReport};
pub use pirashvili::{i_shriek, pirashvili_cr, round_trip};
pub use poset::Poset;


#[derive(Debug, Error)]
pub enum MobiusError {
    #[error("{0}")]
    Invalid(String),
    #[error("check failed: {0}")]
    Check(String),
    #[error(transparent)]
    Cat(#[from] CatError),
    #[error(transparent)]
    Span(#[from] SpanError),
    #[error(transparent)]
    Rep(#[from] FunRepError),
}
