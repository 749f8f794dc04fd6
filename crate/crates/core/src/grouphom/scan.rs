use rayon::prelude::*;
use serde::Serialize;

use super::group::{build_group, FiniteGroup, GroupKind, DEFAULT_ENUMERATION_CAP};
use super::homology::{coinvariants, group_homology, HomologyOptions};
use super::module::GModule;
use super::GroupError;
use crate::exactla::Field;
use crate::funrep::FunctorExpr;

#[derive(Clone, Copy, Debug)]
pub struct ScanOptions {
    pub enumeration_cap: u64,
    pub homology: HomologyOptions,
}

impl Default for ScanOptions {
    fn default() -> Self {
        ScanOptions { enumeration_cap: DEFAULT_ENUMERATION_CAP, homology: HomologyOptions::default() }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ScanRow {
    pub n: usize,
    pub degree: usize,
    pub dim: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub skipped: Option<String>,
    /// `2·degree + d + 6` for `F` of formal degree `d`.
    pub charney_bound: Option<usize>,
}

#[derive(Clone, Debug, Serialize)]
pub struct ScanReport {
    pub kind: GroupKind,
    pub field: u32,
    pub expr: String,
    pub degree: usize,
    pub rows: Vec<ScanRow>,
    /// The last two computed rows agree. Dimensions only: the stabilization maps themselves are not compared.
    pub plateau: bool,
}

impl ScanReport {
    pub fn dims(&self) -> Vec<Option<usize>> {
        self.rows.iter().map(|r| r.dim).collect()
    }
    /// The last computed dimension, when the plateau flag is set.
    pub fn plateau_value(&self) -> Option<usize> {
        if self.plateau {
            self.rows.iter().rev().find_map(|r| r.dim)
        } else {
            None
        }
    }
}

/// Degree-0 homology from the generators only, no enumeration.
pub fn coinvariants_of(kind: GroupKind, n: usize, field: Field, expr: &FunctorExpr) -> Result<usize, GroupError> {
    let handle = FiniteGroup::generators_only(kind, n, field);
    let m = GModule::from_functor(&handle, expr)?;
    Ok(coinvariants(m.generator_actions(), m.dim()))
}

fn scan_row(kind: GroupKind, field: Field, expr: &FunctorExpr, degree: usize, n: usize, opts: &ScanOptions) -> Result<ScanRow, GroupError> {
    let charney_bound = expr.formal_degree().map(|d| 2 * degree + d + 6);
    let mut row = ScanRow { n, degree, dim: None, skipped: None, charney_bound };
    if degree == 0 {
        row.dim = Some(coinvariants_of(kind, n, field, expr)?);
        return Ok(row);
    }
    let computed = build_group(kind, n, field, opts.enumeration_cap).and_then(|g| {
        if !g.is_enumerated() {
            return Err(GroupError::Cap(format!("{} exceeds the enumeration cap {}", g.label(), opts.enumeration_cap)));
        }
        let m = GModule::from_functor(&g, expr)?;
        Ok(group_homology(&g, &m, degree, &opts.homology)?[degree])
    });
    match computed {
        Ok(d) => row.dim = Some(d),
        Err(GroupError::Cap(msg)) => row.skipped = Some(msg),
        Err(e) => return Err(e),
    }
    Ok(row)
}

/// `dim H_degree(G(n); F(A^{⊕n}))` for `n = 1..=n_max`.
pub fn stable_scan(kind: GroupKind, field: Field, expr: &FunctorExpr, degree: usize, n_max: usize, opts: &ScanOptions) -> Result<ScanReport, GroupError> {
    let rows = (1..=n_max)
        .into_par_iter()
        .map(|n| scan_row(kind, field, expr, degree, n, opts))
        .collect::<Result<Vec<_>, _>>()?;
    let computed: Vec<usize> = rows.iter().filter_map(|r| r.dim).collect();
    let plateau = computed.len() >= 2 && computed[computed.len() - 1] == computed[computed.len() - 2] && rows.last().is_some_and(|r| r.dim.is_some());
    Ok(ScanReport { kind, field: field.q(), expr: expr.to_string(), degree, rows, plateau })
}
