//! Both sides of the stable comparison at desk scale, and the auxiliary
//! vanishing and comparison experiments.

use serde::Serialize;
use thiserror::Error;

use crate::fincat::{CatError, DEFAULT_MORPHISM_CAP};
use crate::funrep::FunRepError;
use crate::grouphom::{GroupError, ScanOptions};
use crate::homalg::{HomAlgError, ResolveOptions};
use crate::mobius::MobiusError;

mod experiments;
mod summary;
mod theorem;

#[cfg(test)]
mod tests;

pub use experiments::{
    betley_symmetric, djament_comparison, gl_vanishing, pairs_off_zero, reduced_linearization, stabilizer_constancy, suslin_comparison,
    BetleyReport, ConstancyReport, DjamentReport, GlReport, SuslinReport,
};
pub use summary::{render_summary, SummaryRow};
pub(crate) use theorem::{contravariant, covariant};
pub use theorem::{form_module, main_theorem_degree0, main_theorem_lowdeg, Degree0Report, LowDegReport};

#[derive(Debug, Error)]
pub enum ComparisonError {
    #[error("invalid comparison: {0}")]
    Invalid(String),
    #[error(transparent)]
    Group(#[from] GroupError),
    #[error(transparent)]
    HomAlg(#[from] HomAlgError),
    #[error(transparent)]
    Rep(#[from] FunRepError),
    #[error(transparent)]
    Cat(#[from] CatError),
    #[error(transparent)]
    Mobius(#[from] MobiusError),
}

/// `Inconclusive` whenever a side has not stabilized.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Agree,
    Disagree,
    Inconclusive,
}

impl Status {
    /// Compare two values, each present only once its side has stabilized.
    pub fn of(a: Option<usize>, b: Option<usize>) -> Status {
        match (a, b) {
            (Some(x), Some(y)) if x == y => Status::Agree,
            (Some(_), Some(_)) => Status::Disagree,
            _ => Status::Inconclusive,
        }
    }
    pub fn of_vec(a: Option<&[usize]>, b: Option<&[usize]>) -> Status {
        match (a, b) {
            (Some(x), Some(y)) if x == y => Status::Agree,
            (Some(_), Some(_)) => Status::Disagree,
            _ => Status::Inconclusive,
        }
    }
    /// Agree only if all agree; Disagree if any disagrees.
    pub fn all(items: impl IntoIterator<Item = Status>) -> Status {
        items.into_iter().fold(Status::Agree, |acc, s| match (acc, s) {
            (Status::Disagree, _) | (_, Status::Disagree) => Status::Disagree,
            (Status::Inconclusive, _) | (_, Status::Inconclusive) => Status::Inconclusive,
            _ => Status::Agree,
        })
    }
}

#[derive(Clone, Debug)]
pub struct ComparisonOptions {
    /// Rank bound of the group-side scans.
    pub n_max: usize,
    /// Increasing dimension caps of the functor side.
    pub caps: Vec<usize>,
    pub scan: ScanOptions,
    pub resolve: ResolveOptions,
    pub morphism_cap: usize,
}

impl Default for ComparisonOptions {
    fn default() -> Self {
        ComparisonOptions { n_max: 3, caps: vec![1, 2, 3], scan: ScanOptions::default(), resolve: ResolveOptions::default(), morphism_cap: DEFAULT_MORPHISM_CAP }
    }
}

fn check_caps(caps: &[usize]) -> Result<(), ComparisonError> {
    if caps.is_empty() || caps.windows(2).any(|w| w[0] >= w[1]) {
        return Err(ComparisonError::Invalid(format!("caps must be nonempty and increasing, got {caps:?}")));
    }
    Ok(())
}
