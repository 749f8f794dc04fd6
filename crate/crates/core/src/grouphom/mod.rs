//! Finite classical and symmetric groups as matrix groups, twisted group
//! homology through the bar complex, coinvariants, stabilizers and scans in `n`.

mod group;
mod homology;
mod module;
mod scan;
mod stabilizer;

use thiserror::Error;

use crate::funrep::FunRepError;
use crate::homalg::HomAlgError;

pub use group::{build_group, standard_generators, FiniteGroup, GroupKind, DEFAULT_ENUMERATION_CAP};
pub use homology::{abelianization_rank, coinvariants, group_homology, HomologyOptions};
pub use module::GModule;
pub use scan::{coinvariants_of, stable_scan, ScanOptions, ScanReport, ScanRow};
pub use stabilizer::{cat_stabilizer, stabilizer, CatStabilizer, StabilizerData};


#[derive(Debug, Error)]
pub enum GroupError {
    #[error("cap exceeded: {0}")]
    Cap(String),
    #[error("{0} is known through generators only")]
    NotEnumerated(String),
    #[error("{0}")]
    Invalid(String),
    #[error(transparent)]
    Rep(#[from] FunRepError),
    #[error(transparent)]
    HomAlg(#[from] HomAlgError),
}
