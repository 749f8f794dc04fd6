use std::sync::Arc;

use rustc_hash::FxHashMap;
use serde::Serialize;

use super::algebra::{gamma_idempotents, span_idempotents, AlgebraElement, Subobject, SubobjectFamily};
use super::MobiusError;
use crate::exactla::{Field, LinMap, MatF, SpEchelon, Subspace};
use crate::fincat::{build_set_cat, FinCat, ObjData, SetKind};
use crate::funrep::{LinRep, Variance};
use crate::spans::{build_span_cat, decode_span};

fn subobjects(span_cat: &FinCat, a: usize) -> Vec<Subobject> {
    let size = span_cat.object(a).size;
    match span_cat.field() {
        Some(k) => Subspace::enumerate_all(k, size).into_iter().map(Subobject::Subspace).collect(),
        None => (0..1u32 << size).map(Subobject::Subset).collect(),
    }
}

fn subobject_key(s: &Subobject) -> Vec<u8> {
    match s {
        Subobject::Subset(m) => m.to_le_bytes().to_vec(),
        Subobject::Subspace(u) => u.key(),
    }
}

/// `ξ(M)(i) = ⊕_{j ⊆ i} M(j)`: a span `t = [i ⊇ U → i']` sends the block `j`
/// to the block `t̃(j)` through `M(t̃|_j)` when `j ⊆ U`, and to zero otherwise.
/// `M` is covariant on the groupoid of `C`, whose objects are indexed by size.
pub fn burnside_xi(m: &LinRep, span_cat: &FinCat) -> Result<LinRep, MobiusError> {
    let iso = m.cat().clone();
    if m.variance() != Variance::Covariant {
        return Err(MobiusError::Invalid("ξ takes a covariant module on the groupoid".into()));
    }
    let max = span_cat.objects().iter().map(|o| o.size).max().unwrap_or(0);
    if iso.num_objects() <= max || iso.field() != span_cat.field() {
        return Err(MobiusError::Invalid("the groupoid does not cover the sub-objects of the span category".into()));
    }
    let k = m.field();
    let subs: Arc<Vec<Vec<Subobject>>> = Arc::new((0..span_cat.num_objects()).map(|a| subobjects(span_cat, a)).collect());
    let index: Arc<Vec<FxHashMap<Vec<u8>, usize>>> =
        Arc::new(subs.iter().map(|l| l.iter().enumerate().map(|(i, s)| (subobject_key(s), i)).collect()).collect());
    let offsets: Arc<Vec<Vec<usize>>> = Arc::new(
        subs.iter()
            .map(|l| {
                let mut o = vec![0];
                for s in l {
                    o.push(o.last().unwrap() + m.dim(s.size()));
                }
                o
            })
            .collect(),
    );
    let dims = offsets.iter().map(|o| *o.last().unwrap()).collect();
    let (m2, sc) = (m.clone(), span_cat.clone());
    let rep = LinRep::from_fn(span_cat.clone(), k, Variance::Covariant, dims, move |t| {
        let (a, b) = (sc.src(t), sc.tgt(t));
        let mut cols = Vec::with_capacity(*offsets[a].last().unwrap());
        for j in &subs[a] {
            let width = m2.dim(j.size());
            // (target block, groupoid key) when j lies in the coimage
            let routed: Option<(usize, Vec<u8>)> = match j {
                Subobject::Subspace(js) => {
                    let span = decode_span(&sc, t).expect("linear span");
                    span.coimage.contains_subspace(js).then(|| {
                        let images: Vec<Vec<u8>> = (0..js.dim())
                            .map(|r| span.map.mul_vec(&span.coimage.coordinates(js.basis().row(r)).expect("inside the coimage")))
                            .collect();
                        let jt = Subspace::from_vectors(k, span.target_dim, &images);
                        let g = MatF::from_cols(k, js.dim(), &images.iter().map(|w| jt.coordinates(w).expect("spans")).collect::<Vec<_>>());
                        (index[b][&jt.key()], g.data().to_vec())
                    })
                }
                Subobject::Subset(mask) => {
                    let key = sc.key(t);
                    let pts: Vec<usize> = (0..key.len()).filter(|&x| mask >> x & 1 == 1).collect();
                    pts.iter().all(|&x| key[x] != 0).then(|| {
                        let mut image: Vec<u8> = pts.iter().map(|&x| key[x] - 1).collect();
                        image.sort_unstable();
                        let tmask = image.iter().fold(0u32, |acc, &y| acc | 1 << y);
                        let bij = pts.iter().map(|&x| image.binary_search(&(key[x] - 1)).unwrap() as u8).collect();
                        (tmask as usize, bij)
                    })
                }
            };
            match routed {
                None => cols.extend(std::iter::repeat_n(crate::exactla::SpVec::new(), width)),
                Some((jt, gkey)) => {
                    let d = j.size();
                    let g = iso.find(d, d, &gkey).expect("groupoid contains the restricted isomorphism");
                    let r0 = offsets[b][jt] as u32;
                    cols.extend(m2.action(g).cols.iter().map(|c| c.remap(k, |r| r + r0)));
                }
            }
        }
        LinMap { field: k, rows: *offsets[b].last().unwrap(), cols }
    });
    Ok(rep.with_label(format!("xi({})", m.label().unwrap_or("M"))))
}

/// `ξ(M)` applied to an element of the span algebra.
pub fn act_on_element(rep: &LinRep, cat: &FinCat, x: &AlgebraElement) -> LinMap {
    let start = cat.hom(x.src, x.tgt).start;
    let k = rep.field();
    x.terms.entries().iter().fold(LinMap::zero(k, rep.dim(x.tgt), rep.dim(x.src)), |acc, &(i, c)| {
        let a = rep.action(start + i as usize);
        LinMap { field: k, rows: acc.rows, cols: acc.cols.iter().zip(&a.cols).map(|(u, v)| u.axpy(k, c, v)).collect() }
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct MoritaBlock {
    pub c: usize,
    pub d: usize,
    pub a: usize,
    pub b: usize,
    pub dim: usize,
    pub expected: usize,
}

#[derive(Clone, Debug, Serialize)]
pub struct MoritaReport {
    pub case: String,
    pub field: u32,
    pub blocks_checked: usize,
    pub families_checked: usize,
    pub failures: Vec<MoritaBlock>,
    /// Per hom-space, the block dimensions add up to `|Hom(c, d)|`.
    pub totals_match: bool,
}

impl MoritaReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty() && self.totals_match
    }
}

/// `dim f_b k[Hom(c, d)] f_a` for all sub-object pairs.
fn morita_blocks(
    cat: &FinCat,
    fams: &[SubobjectFamily],
    field: Field,
    expected: impl Fn(&Subobject, &Subobject) -> usize,
) -> (Vec<MoritaBlock>, usize, bool) {
    let mut failures = Vec::new();
    let mut checked = 0;
    let mut totals = true;
    for c in 0..cat.num_objects() {
        for d in 0..cat.num_objects() {
            let hom = cat.hom(c, d);
            let mut total = 0;
            for (a, fa) in fams[c].family.elements.iter().enumerate() {
                // a basis of k[Hom(c, d)] f_a
                let mut right = SpEchelon::new(field, hom.len());
                for t in hom.clone() {
                    right.insert(&AlgebraElement::basis(cat, t).after(cat, field, fa).terms);
                }
                for (b, fb) in fams[d].family.elements.iter().enumerate() {
                    let mut span = SpEchelon::new(field, hom.len());
                    for v in right.basis() {
                        let x = AlgebraElement { src: c, tgt: d, terms: v.clone() };
                        span.insert(&fb.after(cat, field, &x).terms);
                    }
                    let dim = span.rank();
                    let exp = expected(&fams[c].subobjects[a], &fams[d].subobjects[b]);
                    checked += 1;
                    total += dim;
                    if dim != exp {
                        failures.push(MoritaBlock { c, d, a, b, dim, expected: exp });
                    }
                }
            }
            totals &= total == hom.len();
        }
    }
    (failures, checked, totals)
}

fn surjection_count(a: usize, b: usize) -> usize {
    // inclusion–exclusion over the missed points
    let choose = |n: usize, r: usize| (0..r).fold(1i64, |acc, i| acc * (n - i) as i64 / (i + 1) as i64);
    let s: i64 = (0..=b).map(|i| (if i % 2 == 0 { 1 } else { -1 }) * choose(b, i) * ((b - i) as i64).pow(a as u32)).sum();
    s as usize
}

/// Γ (pointed sets of size ≤ `nmax`): `dim f_B k[Hom(c_+, d_+)] f_A = |Surj(A, B)|`.
pub fn verify_morita_gamma(nmax: usize, field: Field) -> Result<MoritaReport, MobiusError> {
    let gamma = build_set_cat(nmax, SetKind::Pointed)?;
    let fams: Vec<SubobjectFamily> = (0..=nmax).map(|n| gamma_idempotents(&gamma, n, field)).collect::<Result<_, _>>()?;
    for f in &fams {
        f.family.check(&gamma)?;
    }
    let (failures, blocks_checked, totals_match) = morita_blocks(&gamma, &fams, field, |a, b| surjection_count(a.size(), b.size()));
    Ok(MoritaReport { case: format!("Gamma(n <= {nmax})"), field: field.q(), blocks_checked, families_checked: fams.len(), failures, totals_match })
}

/// `Sp(C)` for a mono-category `C`: `dim f_b k[Hom(c, d)] f_a = |Iso_C(a, b)|`.
pub fn verify_morita_spans(base: &FinCat, field: Field) -> Result<MoritaReport, MobiusError> {
    let span_cat = build_span_cat(base)?;
    let fams: Vec<SubobjectFamily> =
        (0..span_cat.num_objects()).map(|a| span_idempotents(&span_cat, a, field)).collect::<Result<_, _>>()?;
    for f in &fams {
        f.family.check(&span_cat)?;
    }
    let iso_count = |a: usize, b: usize| -> usize {
        if a != b {
            return 0;
        }
        match span_cat.field() {
            Some(k) => (0..a).map(|i| k.q().pow(a as u32) as usize - k.q().pow(i as u32) as usize).product(),
            None => (1..=a).product(),
        }
    };
    let (failures, blocks_checked, totals_match) = morita_blocks(&span_cat, &fams, field, |a, b| iso_count(a.size(), b.size()));
    let kind = match span_cat.object(0).data {
        ObjData::Vect => "linear",
        _ => "sets",
    };
    Ok(MoritaReport {
        case: format!("Sp({kind}, {})", base.description()),
        field: field.q(),
        blocks_checked,
        families_checked: fams.len(),
        failures,
        totals_match,
    })
}
