//! Functor homology over finite categories: coends, projective resolutions, Tor and
//! its bar-complex oracle, Kan extensions, Ω_X, Hochschild homology and the operators
//! on functors of subspace pairs.

mod bar;
mod cache;
mod complex;
mod free;
mod grassmann;
mod hochschild;
mod kan;
mod resolve;

use thiserror::Error;

use crate::fincat::CatError;
use crate::funrep::FunRepError;

pub use bar::{bar_tor_oracle, DEFAULT_BAR_MORPHISM_CAP};
pub use cache::{tor_across_caps, ResolutionCache, TorRecord};
pub use complex::{rank_of, ChainComplex, HomologyDims};
pub use free::FreeModule;
pub use grassmann::{GrassmannFamily, GrassmannOp};
pub use hochschild::{enveloping_cat, external_tensor, hochschild, hom_bifunctor, hom_bimodule};
pub use kan::{kan_extension, underlying_set_functor, CategoryOfElements, KanExtension};
pub use resolve::{
    category_homology, pair_complex, presented, resolve, tensor_over_cat, tor, tor_with, Resolution, ResolveOptions, Side,
    SweepOrder, TensorProduct, TorResult,
};

#[derive(Debug, Error)]
pub enum HomAlgError {
    #[error("representations live on different categories")]
    CategoryMismatch,
    #[error("{0}")]
    Invalid(String),
    #[error("resource cap exceeded after a resolution of length {achieved}")]
    ResourceCap { achieved: usize, partial: Box<Resolution> },
    #[error(transparent)]
    Rep(#[from] FunRepError),
    #[error(transparent)]
    Cat(#[from] CatError),
}

#[cfg(test)]
mod tests;
