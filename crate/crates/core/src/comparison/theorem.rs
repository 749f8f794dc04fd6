use serde::Serialize;

use super::{check_caps, ComparisonError, ComparisonOptions, Status};
use crate::exactla::Field;
use crate::fincat::{build_vect_cat, FinCat, VectClass};
use crate::funrep::{evaluate, evaluate_as, FunctorExpr, LinRep, Variance};
use crate::grouphom::{stable_scan, GroupKind, ScanReport};
use crate::homalg::{tensor_over_cat, tor_across_caps, ResolutionCache, Side, TorRecord};
use crate::predict::{char2_values, characteristic, stable_dim, Char2Target, SeriesId};

/// The contravariant side attached to a family of forms: `k[S²]^∨` for quadratic
/// forms, `k[Λ²]^∨` for alternating ones.
pub fn form_module(kind: GroupKind) -> Result<FunctorExpr, ComparisonError> {
    match kind {
        GroupKind::O => Ok(FunctorExpr::LinSym2.dual()),
        GroupKind::Sp => Ok(FunctorExpr::LinAlt2.dual()),
        _ => Err(ComparisonError::Invalid(format!("{} is not a group of isometries of hyperbolic forms", kind.name()))),
    }
}

pub(crate) fn covariant(expr: &FunctorExpr, cat: &FinCat, field: Field) -> Result<LinRep, ComparisonError> {
    match expr.kind()?.variance {
        Some(Variance::Contravariant) => Err(ComparisonError::Invalid(format!("{expr} is contravariant"))),
        Some(Variance::Covariant) => Ok(evaluate(expr, cat, field)?),
        None => Ok(evaluate_as(expr, cat, field, Variance::Covariant)?),
    }
}

pub(crate) fn contravariant(expr: &FunctorExpr, cat: &FinCat, field: Field) -> Result<LinRep, ComparisonError> {
    match expr.kind()?.variance {
        Some(Variance::Covariant) => Err(ComparisonError::Invalid(format!("{expr} is covariant"))),
        Some(Variance::Contravariant) => Ok(evaluate(expr, cat, field)?),
        None => Ok(evaluate_as(expr, cat, field, Variance::Contravariant)?),
    }
}

fn last_stable(records: &[TorRecord]) -> Option<&[usize]> {
    records.last().filter(|r| r.stable).map(|r| r.dims.as_slice())
}

#[derive(Clone, Debug, Serialize)]
pub struct Degree0Report {
    pub kind: GroupKind,
    pub field: u32,
    pub expr: String,
    pub group_side: ScanReport,
    pub functor_side: Vec<TorRecord>,
    pub group_value: Option<usize>,
    pub functor_value: Option<usize>,
    pub status: Status,
}

/// `H_0(G_n; F(k^{2n}))` for `n ≤ n_max` against `G ⊗_{E^f} F` over `E^f` truncated at each cap.
pub fn main_theorem_degree0(field: Field, kind: GroupKind, expr: &FunctorExpr, opts: &ComparisonOptions) -> Result<Degree0Report, ComparisonError> {
    check_caps(&opts.caps)?;
    let form = form_module(kind)?;
    let group_side = stable_scan(kind, field, expr, 0, opts.n_max, &opts.scan)?;
    let mut functor_side: Vec<TorRecord> = Vec::new();
    for &cap in &opts.caps {
        let cat = build_vect_cat(field, cap, VectClass::All, opts.morphism_cap)?;
        let g = contravariant(&form, &cat, field)?;
        let f = covariant(expr, &cat, field)?;
        let dim = tensor_over_cat(&g, &f)?.dim;
        let stable = functor_side.last().is_some_and(|p| p.dims[0] == dim);
        functor_side.push(TorRecord { computation: format!("{form} (x)_E {expr}"), cap, degrees: vec![0], dims: vec![dim], stable });
    }
    let group_value = group_side.plateau_value();
    let functor_value = last_stable(&functor_side).map(|d| d[0]);
    Ok(Degree0Report {
        kind,
        field: field.q(),
        expr: expr.to_string(),
        group_side,
        functor_side,
        group_value,
        functor_value,
        status: Status::of(group_value, functor_value),
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct LowDegReport {
    pub kind: GroupKind,
    pub field: u32,
    pub expr: String,
    pub max_degree: usize,
    pub functor_side: Vec<TorRecord>,
    /// Closed-form stable values, where known.
    pub predicted: Option<Vec<usize>>,
    pub source: Option<String>,
    pub status: Status,
}

/// Closed forms for `Tor_i(G, F)`, `i ≤ max_degree`: the homology series in odd
/// characteristic for `F ∈ {Id, Γ^j, Λ^j, Const}`, and the characteristic-2 values for `F = Id` over `F_2`.
fn predicted(field: Field, kind: GroupKind, expr: &FunctorExpr, max_degree: usize) -> Option<(Vec<usize>, String)> {
    let q = field.q() as u64;
    let p = characteristic(q).ok()?;
    if p == 2 {
        if q != 2 || *expr != FunctorExpr::Id {
            return None;
        }
        let target = match kind {
            GroupKind::O => Char2Target::ExtIdIGamma2,
            _ => Char2Target::ExtIdILambda2,
        };
        return Some(((0..=max_degree).map(|i| char2_values(target, i)).collect(), format!("char2 {target}")));
    }
    let (od, oa, sd, sa) = (SeriesId::ODivHomology, SeriesId::OAlt, SeriesId::SpDivHomology, SeriesId::SpAlt);
    let (series, j, scale) = match (kind, expr) {
        (GroupKind::O, FunctorExpr::Id | FunctorExpr::Div(_)) => (od, expr_degree(expr), 1),
        (GroupKind::Sp, FunctorExpr::Id | FunctorExpr::Div(_)) => (sd, expr_degree(expr), 1),
        // as graded spaces the symmetric cogebra on the Λ-generators has the dimensions of Γ(V_Λ)
        (GroupKind::O, FunctorExpr::Ext(j)) => (oa, *j, 1),
        (GroupKind::Sp, FunctorExpr::Ext(j)) => (sa, *j, 1),
        (_, FunctorExpr::Const(c)) => (od, 0, *c),
        _ => return None,
    };
    let dims = (0..=max_degree).map(|i| stable_dim(series, q, i, j).ok().map(|d| d * scale)).collect::<Option<Vec<_>>>()?;
    Some((dims, format!("series {series} at internal degree {j}")))
}

fn expr_degree(e: &FunctorExpr) -> usize {
    match e {
        FunctorExpr::Div(j) => *j,
        _ => 1,
    }
}

/// `Tor_i^{E^f}(G, F)` for `i ≤ max_degree` at each cap, against the closed forms when available.
pub fn main_theorem_lowdeg(
    field: Field,
    kind: GroupKind,
    expr: &FunctorExpr,
    max_degree: usize,
    opts: &ComparisonOptions,
) -> Result<LowDegReport, ComparisonError> {
    check_caps(&opts.caps)?;
    if max_degree > 2 {
        return Err(ComparisonError::Invalid(format!("degree {max_degree} is beyond the low-degree range 0..2")));
    }
    let form = form_module(kind)?;
    let cache = ResolutionCache::new();
    let functor_side = tor_across_caps(&format!("Tor({form}, {expr})"), &opts.caps, max_degree, Side::Right, &opts.resolve, &cache, |cap| {
        let cat = build_vect_cat(field, cap, VectClass::All, opts.morphism_cap)?;
        let g = contravariant(&form, &cat, field).map_err(into_homalg)?;
        let f = covariant(expr, &cat, field).map_err(into_homalg)?;
        Ok((g, f))
    })?;
    let pred = predicted(field, kind, expr, max_degree);
    let status = match &pred {
        Some((dims, _)) => Status::of_vec(last_stable(&functor_side), Some(dims)),
        None => Status::Inconclusive,
    };
    let (predicted, source) = pred.map_or((None, None), |(d, s)| (Some(d), Some(s)));
    Ok(LowDegReport { kind, field: field.q(), expr: expr.to_string(), max_degree, functor_side, predicted, source, status })
}

pub(crate) fn into_homalg(e: ComparisonError) -> crate::homalg::HomAlgError {
    match e {
        ComparisonError::HomAlg(h) => h,
        ComparisonError::Rep(r) => r.into(),
        ComparisonError::Cat(c) => c.into(),
        other => crate::homalg::HomAlgError::Invalid(other.to_string()),
    }
}
