use serde::Serialize;

use super::theorem::{contravariant, covariant, into_homalg};
use super::{check_caps, ComparisonError, ComparisonOptions, Status};
use crate::exactla::{Field, LinMap, MatF};
use crate::fincat::{build_set_cat, build_vect_cat, FinCat, MorId, ObjData, ObjId, SetKind, Stabilization, VectClass};
use crate::funrep::{FunctorExpr, LinRep, MatrixFunctor, Variance};
use crate::grouphom::{build_group, cat_stabilizer, group_homology, stable_scan, FiniteGroup, GModule, GroupKind, ScanReport};
use crate::homalg::{tor_across_caps, GrassmannFamily, ResolutionCache, Side, TorRecord};
use crate::mobius::pirashvili_cr;

fn last_stable(records: &[TorRecord]) -> Option<&[usize]> {
    records.last().filter(|r| r.stable).map(|r| r.dims.as_slice())
}

#[derive(Clone, Debug, Serialize)]
pub struct SuslinReport {
    pub field: u32,
    pub contra: String,
    pub expr: String,
    pub injections: Vec<TorRecord>,
    pub all_maps: Vec<TorRecord>,
    /// Equal dimensions at each cap, regardless of stability.
    pub agree_at: Vec<bool>,
    pub status: Status,
}

/// `Tor^{E^f_inj}` against `Tor^{E^f}` of `(A, F)`, both evaluated on each category
/// at each cap. Matrix expressions restrict; `Proj(c)` is the projective of the category at hand.
pub fn suslin_comparison(
    field: Field,
    a: &FunctorExpr,
    f: &FunctorExpr,
    max_degree: usize,
    opts: &ComparisonOptions,
) -> Result<SuslinReport, ComparisonError> {
    check_caps(&opts.caps)?;
    let run = |class: VectClass, cache: &ResolutionCache| {
        tor_across_caps(&format!("Tor^{class:?}({a}, {f})"), &opts.caps, max_degree, Side::Right, &opts.resolve, cache, |cap| {
            let cat = build_vect_cat(field, cap, class, opts.morphism_cap)?;
            Ok((contravariant(a, &cat, field).map_err(into_homalg)?, covariant(f, &cat, field).map_err(into_homalg)?))
        })
    };
    let injections = run(VectClass::Inj, &ResolutionCache::new())?;
    let all_maps = run(VectClass::All, &ResolutionCache::new())?;
    let status = Status::of_vec(last_stable(&injections), last_stable(&all_maps));
    let agree_at = injections.iter().zip(&all_maps).map(|(x, y)| x.dims == y.dims).collect();
    Ok(SuslinReport { field: field.q(), contra: a.to_string(), expr: f.to_string(), injections, all_maps, agree_at, status })
}

/// The contravariant module on subspace pairs equal to `k` where `W ≠ 0` and to
/// zero where `W = 0`; `λ` of it vanishes.
pub fn pairs_off_zero(family: &GrassmannFamily) -> LinRep {
    let pairs = family.pairs().clone();
    let k = family.field();
    let dims: Vec<usize> = pairs.objects().iter().map(|o| usize::from(matches!(&o.data, ObjData::Pair(w) if w.dim() > 0))).collect();
    let d2 = dims.clone();
    LinRep::from_fn(pairs.clone(), k, Variance::Contravariant, dims, move |m| {
        let (s, t) = (d2[pairs.src(m)], d2[pairs.tgt(m)]);
        if s == 1 && t == 1 {
            LinMap::identity(k, 1)
        } else {
            LinMap::zero(k, s, t)
        }
    })
    .with_label("k[W != 0]")
}

#[derive(Clone, Debug, Serialize)]
pub struct DjamentReport {
    pub field: u32,
    pub module: String,
    pub expr: String,
    pub lambda_vanishes: bool,
    pub lambda_side: Vec<TorRecord>,
    pub omega_side: Vec<TorRecord>,
    pub status: Status,
}

/// `Tor^{E^f}(λX, F)` against `Tor^{E^f}(ωX, F)` at each cap; `x(family)` builds `X`
/// on the subspace pairs of that cap.
pub fn djament_comparison(
    field: Field,
    x: impl Fn(&GrassmannFamily) -> Result<LinRep, ComparisonError>,
    f: &FunctorExpr,
    max_degree: usize,
    opts: &ComparisonOptions,
) -> Result<DjamentReport, ComparisonError> {
    check_caps(&opts.caps)?;
    let families: Vec<GrassmannFamily> =
        opts.caps.iter().map(|&c| GrassmannFamily::new(field, c, opts.morphism_cap)).collect::<Result<_, _>>()?;
    let modules: Vec<LinRep> = families.iter().map(&x).collect::<Result<_, _>>()?;
    let lambda_vanishes = families.iter().zip(&modules).all(|(g, m)| g.lambda(m).is_ok_and(|l| l.is_zero()));
    let at = |cap: usize| opts.caps.iter().position(|&c| c == cap).expect("cap from the list");
    let run = |name: &str, side: &dyn Fn(&GrassmannFamily, &LinRep) -> Result<LinRep, crate::homalg::HomAlgError>| {
        tor_across_caps(&format!("Tor({name}, {f})"), &opts.caps, max_degree, Side::Right, &opts.resolve, &ResolutionCache::new(), |cap| {
            let i = at(cap);
            let g = side(&families[i], &modules[i])?;
            Ok((g, covariant(f, families[i].all(), field).map_err(into_homalg)?))
        })
    };
    let lambda_side = run("lambda X", &|g, m| g.lambda(m))?;
    let omega_side = run("omega X", &|g, m| g.omega(m))?;
    let status = Status::of_vec(last_stable(&lambda_side), last_stable(&omega_side));
    Ok(DjamentReport {
        field: field.q(),
        module: modules.first().and_then(|m| m.label().map(str::to_string)).unwrap_or_else(|| "X".into()),
        expr: f.to_string(),
        lambda_vanishes,
        lambda_side,
        omega_side,
        status,
    })
}

/// `F(n_+) = k^n`, the base point going to zero.
pub fn reduced_linearization(gamma: &FinCat, field: Field) -> LinRep {
    let g2 = gamma.clone();
    let dims = gamma.objects().iter().map(|o| o.size).collect();
    LinRep::from_fn(gamma.clone(), field, Variance::Covariant, dims, move |m| {
        let f = g2.set_map(m).expect("pointed map");
        let rows = g2.object(g2.tgt(m)).size;
        let cols = f[1..].iter().map(|&y| if y == 0 { crate::exactla::SpVec::new() } else { crate::exactla::SpVec::unit(y as u32 - 1) }).collect();
        LinMap { field, rows, cols }
    })
    .with_label("k[-]/k[*]")
}

/// Permutation of a permutation matrix: column `x` has its entry in row `σ(x)`.
fn permutation(p: &MatF) -> Vec<u8> {
    (0..p.cols()).map(|x| p.col(x).iter().position(|&e| e != 0).expect("permutation matrix") as u8).collect()
}

/// `M(n)` as a module over the symmetric group through the automorphisms `key(σ)`.
fn sym_module(group: &FiniteGroup, rep: &LinRep, obj: ObjId, key: impl Fn(&[u8]) -> Vec<u8>) -> Result<GModule, ComparisonError> {
    let cat = rep.cat();
    let gens = group
        .generators()
        .iter()
        .map(|p| {
            let m = cat.find(obj, obj, &key(&permutation(p))).ok_or_else(|| ComparisonError::Invalid("automorphism missing".into()))?;
            Ok(rep.action(m).clone())
        })
        .collect::<Result<Vec<_>, ComparisonError>>()?;
    Ok(GModule::from_generators(group, gens)?)
}

/// `H_0, H_1` of `𝔖_n` acting on `M(n)`; `𝔖_0` and `𝔖_1` are trivial.
fn sym_homology(field: Field, rep: &LinRep, n: usize, key: impl Fn(&[u8]) -> Vec<u8>, opts: &ComparisonOptions) -> Result<[usize; 2], ComparisonError> {
    if n <= 1 {
        return Ok([rep.dim(n), 0]);
    }
    let g = build_group(GroupKind::Sym, n, field, opts.scan.enumeration_cap)?;
    let m = sym_module(&g, rep, n, key)?;
    let h = group_homology(&g, &m, 1, &opts.scan.homology)?;
    Ok([h[0], h[1]])
}

fn pointed_key(sigma: &[u8]) -> Vec<u8> {
    std::iter::once(0).chain(sigma.iter().map(|&x| x + 1)).collect()
}

#[derive(Clone, Debug, Serialize)]
pub struct BetleyReport {
    pub field: u32,
    pub module: String,
    pub nmax: usize,
    /// `[dim H_0, dim H_1]` of `𝔖_m` on `F(m_+)`, `m = 1..=nmax`.
    pub group_side: Vec<[usize; 2]>,
    pub group_plateau: [Option<usize>; 2],
    pub cross_effect_dims: Vec<usize>,
    /// `H_1(𝔖_m; k)` for `m = 1..=nmax` and its plateau.
    pub h1_trivial: ScanReport,
    pub cross_effect_side: [Option<usize>; 2],
    pub status: [Status; 2],
}

/// `H_n(𝔖_∞; F)` against `⊕_i H_n(𝔖_∞ × 𝔖_i; cr_i F)` for `n ≤ 1`, by Künneth with
/// `H_0(𝔖_∞) = k` and the computed plateau of `H_1(𝔖_m; k)`.
pub fn betley_symmetric(f: &LinRep, nmax: usize, opts: &ComparisonOptions) -> Result<BetleyReport, ComparisonError> {
    let field = f.field();
    let gamma = f.cat();
    if gamma.num_objects() <= nmax {
        return Err(ComparisonError::Invalid(format!("F is truncated below {nmax}")));
    }
    let omega = build_set_cat(nmax, SetKind::Surjections)?;
    let cr = pirashvili_cr(f, &omega)?;
    let group_side = (1..=nmax).map(|m| sym_homology(field, f, m, pointed_key, opts)).collect::<Result<Vec<_>, _>>()?;
    let plateau = |d: usize| {
        let n = group_side.len();
        (n >= 2 && group_side[n - 1][d] == group_side[n - 2][d]).then(|| group_side[n - 1][d])
    };
    let group_plateau = [plateau(0), plateau(1)];
    let h1_trivial = stable_scan(GroupKind::Sym, field, &FunctorExpr::Const(1), 1, nmax, &opts.scan)?;
    let cr_homology = (0..=nmax).map(|i| sym_homology(field, &cr, i, |s| s.to_vec(), opts)).collect::<Result<Vec<_>, _>>()?;
    // cr_i F is zero beyond the degree of F; without a zero top arity the sum may be truncated
    let complete = cr.dim(nmax) == 0;
    let h0: usize = cr_homology.iter().map(|h| h[0]).sum();
    let cross_effect_side = [
        complete.then_some(h0),
        h1_trivial.plateau_value().filter(|_| complete).map(|h1| h1 * h0 + cr_homology.iter().map(|h| h[1]).sum::<usize>()),
    ];
    let status = [Status::of(group_plateau[0], cross_effect_side[0]), Status::of(group_plateau[1], cross_effect_side[1])];
    Ok(BetleyReport {
        field: field.q(),
        module: f.label().unwrap_or("F").to_string(),
        nmax,
        group_side,
        group_plateau,
        cross_effect_dims: cr.dims().to_vec(),
        h1_trivial,
        cross_effect_side,
        status,
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct GlReport {
    pub scan: ScanReport,
    /// `F(0) = 0`, the hypothesis of the vanishing.
    pub reduced: bool,
    pub status: Status,
}

/// Coinvariants of `GL_n` on `F(k^n)` for `n ≤ n_max`. For reduced `F` the plateau
/// should be zero; otherwise the row is a control and its status compares to nothing.
pub fn gl_vanishing(field: Field, expr: &FunctorExpr, n_max: usize, opts: &ComparisonOptions) -> Result<GlReport, ComparisonError> {
    let reduced = MatrixFunctor::new(expr)?.dim(field, 0) == 0;
    let scan = stable_scan(GroupKind::GL, field, expr, 0, n_max, &opts.scan)?;
    let status = if reduced { Status::of(scan.plateau_value(), Some(0)) } else { Status::Inconclusive };
    Ok(GlReport { scan, reduced, status })
}

#[derive(Clone, Debug, Serialize)]
pub struct ConstancyReport {
    pub j: usize,
    /// `(c, i, u, [dim H_q(St(c, j); k)])` over all `u : c → S(i)`, `i ≤ j`.
    pub rows: Vec<(ObjId, usize, MorId, Vec<usize>)>,
    /// `H_0` takes one value over all rows.
    pub h0_constant: bool,
}

/// Trivial-coefficient homology of the stabilizers `St(c, j)` in degrees `≤ degree`.
/// Matrix categories keep their own field; finite-set categories use permutation matrices over `field`.
pub fn stabilizer_constancy(cat: &FinCat, s: &Stabilization, j: usize, degree: usize, field: Field, opts: &ComparisonOptions) -> Result<ConstancyReport, ComparisonError> {
    let mut rows = Vec::new();
    for i in 0..=j.min(s.len().saturating_sub(1)) {
        for c in 0..cat.num_objects() {
            for u in cat.hom(c, s.objects[i]) {
                let st = cat_stabilizer(cat, s, u, i, j)?;
                let mats: Vec<MatF> = st
                    .automorphisms
                    .iter()
                    .map(|&g| match (cat.matrix(g), cat.set_map(g)) {
                        (Some(m), _) => Ok(m),
                        (None, Some(map)) => Ok(permutation_matrix(field, map, matches!(cat.object(st.object).data, ObjData::Set { pointed: true }))),
                        _ => Err(ComparisonError::Invalid("automorphisms are neither matrices nor set maps".into())),
                    })
                    .collect::<Result<_, _>>()?;
                let degree_n = mats.first().map_or(0, MatF::rows);
                let k = cat.field().unwrap_or(field);
                let group = FiniteGroup::from_elements("St(c, j)", k, degree_n, &mats)?;
                let m = GModule::trivial(&group, 1);
                rows.push((c, i, u, group_homology(&group, &m, degree, &opts.scan.homology)?));
            }
        }
    }
    let h0_constant = rows.windows(2).all(|w| w[0].3[0] == w[1].3[0]);
    Ok(ConstancyReport { j, rows, h0_constant })
}

/// Pointed maps carry the base point at position 0.
fn permutation_matrix(field: Field, map: &[u8], pointed: bool) -> MatF {
    let sigma: Vec<usize> = if pointed { map[1..].iter().map(|&y| y as usize - 1).collect() } else { map.iter().map(|&y| y as usize).collect() };
    let n = sigma.len();
    let cols: Vec<Vec<crate::exactla::Elem>> = sigma.iter().map(|&y| (0..n).map(|r| u8::from(r == y) as crate::exactla::Elem).collect()).collect();
    MatF::from_cols(field, n, &cols)
}
