use rayon::prelude::*;
use serde::Serialize;

use crate::exactla::{Field, LinMap, SpMat};

/// A bounded chain complex of finite-dimensional spaces; `diffs[n] : C_n → C_{n−1}`
/// for `n ≥ 1` (`diffs[0]` is the zero map to the zero space).
#[derive(Clone, Debug)]
pub struct ChainComplex {
    pub field: Field,
    pub dims: Vec<usize>,
    pub diffs: Vec<LinMap>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct HomologyDims {
    pub dims: Vec<usize>,
    pub ranks: Vec<usize>,
}

pub fn rank_of(m: &LinMap) -> usize {
    if m.cols.iter().all(|c| c.is_zero()) {
        return 0;
    }
    // rank of the matrix equals rank of its transpose; rows here are the images
    let mut s = SpMat::new(m.field, m.rows);
    for c in &m.cols {
        if !c.is_zero() {
            s.push_row(c.clone());
        }
    }
    s.rank()
}

impl ChainComplex {
    pub fn new(field: Field, dims: Vec<usize>, diffs_from_one: Vec<LinMap>) -> ChainComplex {
        let mut diffs = vec![LinMap::zero(field, 0, dims.first().copied().unwrap_or(0))];
        diffs.extend(diffs_from_one);
        assert_eq!(diffs.len(), dims.len(), "one differential per degree");
        for (n, d) in diffs.iter().enumerate().skip(1) {
            assert_eq!((d.rows, d.ncols()), (dims[n - 1], dims[n]), "differential {n} has the wrong shape");
        }
        ChainComplex { field, dims, diffs }
    }

    pub fn len(&self) -> usize {
        self.dims.len()
    }
    pub fn is_empty(&self) -> bool {
        self.dims.is_empty()
    }

    pub fn d_squared_is_zero(&self) -> bool {
        (2..self.len()).all(|n| self.diffs[n - 1].compose(&self.diffs[n]).cols.iter().all(|c| c.is_zero()))
    }

    /// Homology in degrees `0..len−1`; the top degree is omitted because no incoming
    /// differential is known.
    pub fn homology(&self) -> HomologyDims {
        let ranks: Vec<usize> = self.diffs.par_iter().map(rank_of).collect();
        let dims = (0..self.len().saturating_sub(1)).map(|n| self.dims[n] - ranks[n] - ranks[n + 1]).collect();
        HomologyDims { dims, ranks }
    }
}
