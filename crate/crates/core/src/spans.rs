//! Span categories of mono-categories and the radical functor from quadratic
//! (or symplectic) spaces to spans of finite-dimensional vector spaces.

use serde::Serialize;
use thiserror::Error;

use crate::exactla::{gaussian_binomial, Elem, Field, MatF, Subspace};
use crate::fincat::{
    decode_linear_span, linear_span_key, CatError, CatParts, FinCat, MorId, ObjData, ObjId, Object, QuadSpace, Rule,
};

#[derive(Debug, Error)]
pub enum SpanError {
    #[error("category is not a mono-category with pullbacks")]
    NotMonoCategory,
    #[error("no listed object represents the pullback")]
    MissingPullback,
    #[error("morphisms do not share a target")]
    NotCospan,
    #[error(transparent)]
    Cat(#[from] CatError),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Pullback {
    pub object: ObjId,
    pub left: MorId,
    pub right: MorId,
}

enum MonoKind {
    Linear(Field),
    Sets,
}

fn mono_kind(cat: &FinCat) -> Result<MonoKind, SpanError> {
    if !cat.has_mono_pullbacks() || cat.is_opposite() {
        return Err(SpanError::NotMonoCategory);
    }
    match (cat.rule(), cat.objects().first().map(|o| &o.data)) {
        (Rule::Linear(k), Some(ObjData::Vect)) => Ok(MonoKind::Linear(*k)),
        (Rule::SetMaps, Some(ObjData::Set { pointed: false })) => Ok(MonoKind::Sets),
        _ => Err(SpanError::NotMonoCategory),
    }
}

/// Pullback of `f : A → C` and `g : B → C`.
pub fn pullback(cat: &FinCat, f: MorId, g: MorId) -> Result<Pullback, SpanError> {
    if cat.tgt(f) != cat.tgt(g) {
        return Err(SpanError::NotCospan);
    }
    let (a, b) = (cat.src(f), cat.src(g));
    match mono_kind(cat)? {
        MonoKind::Linear(k) => {
            let (mf, mg) = (cat.matrix(f).unwrap(), cat.matrix(g).unwrap());
            let w = Subspace::column_space(&mf).intersection(&Subspace::column_space(&mg)).expect("same target");
            let obj = cat.find_object(&Object::vect(w.dim())).ok_or(SpanError::MissingPullback)?;
            let legs = |m: &MatF| {
                let cols: Vec<Vec<Elem>> = (0..w.dim()).map(|r| m.solve(w.basis().row(r)).expect("w ⊆ im m")).collect();
                MatF::from_cols(k, m.cols(), &cols)
            };
            let left = cat.find(obj, a, legs(&mf).data()).ok_or(SpanError::MissingPullback)?;
            let right = cat.find(obj, b, legs(&mg).data()).ok_or(SpanError::MissingPullback)?;
            Ok(Pullback { object: obj, left, right })
        }
        MonoKind::Sets => {
            let (kf, kg) = (cat.key(f), cat.key(g));
            let common: Vec<u8> =
                (0..cat.object(cat.tgt(f)).size as u8).filter(|x| kf.contains(x) && kg.contains(x)).collect();
            let obj = cat.find_object(&Object::set(common.len(), false)).ok_or(SpanError::MissingPullback)?;
            let leg = |k: &[u8]| -> Vec<u8> {
                common.iter().map(|x| k.iter().position(|y| y == x).unwrap() as u8).collect()
            };
            let left = cat.find(obj, a, &leg(kf)).ok_or(SpanError::MissingPullback)?;
            let right = cat.find(obj, b, &leg(kg)).ok_or(SpanError::MissingPullback)?;
            Ok(Pullback { object: obj, left, right })
        }
    }
}

/// Exhaustive universal-property check within the category.
pub fn verify_pullback(cat: &FinCat, f: MorId, g: MorId, p: &Pullback) -> bool {
    if cat.compose(f, p.left) != cat.compose(g, p.right) {
        return false;
    }
    let (a, b) = (cat.src(f), cat.src(g));
    for x in 0..cat.num_objects() {
        for u in cat.hom(x, a) {
            for v in cat.hom(x, b) {
                if cat.compose(f, u) != cat.compose(g, v) {
                    continue;
                }
                let n = cat
                    .hom(x, p.object)
                    .filter(|&h| cat.compose(p.left, h) == u && cat.compose(p.right, h) == v)
                    .count();
                if n != 1 {
                    return false;
                }
            }
        }
    }
    true
}

/// A span `src ⊇ U → tgt` in canonical form: echelon basis of the coimage and the
/// injective map on its echelon coordinates.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct SpanMorphism {
    pub source_dim: usize,
    pub target_dim: usize,
    pub coimage: Subspace,
    pub map: MatF,
}

impl SpanMorphism {
    pub fn key(&self) -> Vec<u8> {
        linear_span_key(&self.coimage, &self.map)
    }

    /// `[V ⊇ U = U]`, the idempotent attached to a sub-object.
    pub fn restriction(u: &Subspace) -> SpanMorphism {
        SpanMorphism {
            source_dim: u.ambient(),
            target_dim: u.ambient(),
            coimage: u.clone(),
            map: u.inclusion(),
        }
    }
}

/// Sp(C) for C a mono-category with pullbacks (injective linear maps or injections of
/// finite sets).
pub fn build_span_cat(cat: &FinCat) -> Result<FinCat, SpanError> {
    let kind = mono_kind(cat)?;
    let n = cat.num_objects();
    let mut keys = Vec::with_capacity(n * n);
    let identity_keys: Vec<Vec<u8>>;
    let rule;
    match kind {
        MonoKind::Linear(k) => {
            let subs: Vec<Vec<Subspace>> = (0..n).map(|a| Subspace::enumerate_all(k, cat.object(a).size)).collect();
            for a in 0..n {
                for b in 0..n {
                    let mut list = Vec::new();
                    for u in &subs[a] {
                        let Some(uo) = cat.find_object(&Object::vect(u.dim())) else { continue };
                        for t in cat.hom(uo, b) {
                            let map = cat.matrix(t).unwrap();
                            list.push(linear_span_key(u, &map));
                        }
                    }
                    keys.push(list);
                }
            }
            identity_keys = (0..n)
                .map(|a| {
                    let d = cat.object(a).size;
                    linear_span_key(&Subspace::full(k, d), &MatF::identity(k, d))
                })
                .collect();
            rule = Rule::SpansLinear(k);
        }
        MonoKind::Sets => {
            for a in 0..n {
                for b in 0..n {
                    let (sa, sb) = (cat.object(a).size, cat.object(b).size);
                    keys.push(partial_injections(sa, sb));
                }
            }
            identity_keys = (0..n).map(|a| (1..=cat.object(a).size as u8).collect()).collect();
            rule = Rule::SpansSets;
        }
    }
    Ok(FinCat::assemble(CatParts {
        desc: format!("span({})", cat.description()),
        field: cat.field(),
        objects: cat.objects().to_vec(),
        rule,
        keys,
        identity_keys,
        generators: None,
        mono_pullbacks: false,
    })?)
}

/// Keys `x ↦ 0` (outside the coimage) or `1 + image`, images distinct, in lex order.
fn partial_injections(a: usize, b: usize) -> Vec<Vec<u8>> {
    let mut out = Vec::new();
    let mut cur = vec![0u8; a];
    fn rec(i: usize, b: usize, cur: &mut Vec<u8>, out: &mut Vec<Vec<u8>>) {
        if i == cur.len() {
            out.push(cur.clone());
            return;
        }
        for v in 0..=b as u8 {
            if v != 0 && cur[..i].contains(&v) {
                continue;
            }
            cur[i] = v;
            rec(i + 1, b, cur, out);
        }
    }
    rec(0, b, &mut cur, &mut out);
    out
}

pub fn decode_span(span_cat: &FinCat, m: MorId) -> Option<SpanMorphism> {
    let Rule::SpansLinear(k) = span_cat.rule() else { return None };
    let (a, b) = (span_cat.object(span_cat.src(m)).size, span_cat.object(span_cat.tgt(m)).size);
    let s = decode_linear_span(*k, a, b, span_cat.key(m));
    Some(SpanMorphism { source_dim: a, target_dim: b, coimage: s.coimage, map: s.map })
}

/// Closed count `Σ_U |Mono(U, B)|` over sub-objects `U` of `A`.
pub fn span_hom_count(field: Option<Field>, a: usize, b: usize) -> u128 {
    match field {
        Some(k) => {
            let q = k.q() as u128;
            (0..=a.min(b))
                .map(|d| {
                    let subs = gaussian_binomial(q as u64, a as u32, d as u32) as u128;
                    let inj: u128 = (0..d).map(|i| q.pow(b as u32) - q.pow(i as u32)).product();
                    subs * inj
                })
                .sum()
        }
        None => (0..=a.min(b))
            .map(|d| {
                let choose: u128 = (0..d).map(|i| (a - i) as u128).product::<u128>() / (1..=d as u128).product::<u128>();
                let inj: u128 = (0..d).map(|i| (b - i) as u128).product();
                choose * inj
            })
            .sum(),
    }
}

fn form_of(qcat: &FinCat, a: ObjId) -> &QuadSpace {
    match &qcat.object(a).data {
        ObjData::Form(s) => s,
        _ => panic!("object {a} is not a quadratic or symplectic space"),
    }
}

/// The span `Rad(D) ⊇ f⁻¹(Rad D') → Rad(D')` for an isometric injection `f : D → D'`,
/// in echelon coordinates of the radicals.
pub fn psi_tilde_matrix(src: &QuadSpace, tgt: &QuadSpace, f: &MatF) -> SpanMorphism {
    let k = src.field();
    let (r1, r2) = (src.radical(), tgt.radical());
    let m = f.mul_unchecked(&r1.inclusion());
    let u = Subspace::preimage(&m, &r2).expect("shapes agree");
    let cols: Vec<Vec<Elem>> = (0..u.dim())
        .map(|i| {
            let y = m.mul_vec(u.basis().row(i));
            r2.coordinates(&y).expect("the coimage maps into the radical")
        })
        .collect();
    SpanMorphism { source_dim: r1.dim(), target_dim: r2.dim(), coimage: u, map: MatF::from_cols(k, r2.dim(), &cols) }
}

pub fn psi_tilde(qcat: &FinCat, f: MorId) -> SpanMorphism {
    let (s, t) = (form_of(qcat, qcat.src(f)), form_of(qcat, qcat.tgt(f)));
    psi_tilde_matrix(s, t, &qcat.matrix(f).expect("linear category"))
}

#[derive(Clone, Debug, Default, Serialize)]
pub struct PsiReport {
    pub composable_pairs: u64,
    pub functoriality_failures: u64,
    pub radical_dims_covered: Vec<usize>,
    pub essential_surjectivity: bool,
    pub spans_checked: u64,
    pub fullness_failures: u64,
    pub homsets_checked: u64,
    pub faithfulness_failures: u64,
    pub witnesses: Vec<String>,
}

impl PsiReport {
    pub fn passed(&self) -> bool {
        self.functoriality_failures == 0
            && self.essential_surjectivity
            && self.fullness_failures == 0
            && self.faithfulness_failures == 0
    }
}

/// Which parts of the radical-functor verification to run.
#[derive(Clone, Copy, Debug)]
pub struct PsiChecks {
    pub functoriality: bool,
    pub essential_surjectivity: bool,
    pub fullness: bool,
    pub faithfulness: bool,
}

impl PsiChecks {
    pub const ALL: PsiChecks = PsiChecks { functoriality: true, essential_surjectivity: true, fullness: true, faithfulness: true };
}

/// Verifies the radical functor from `qcat` into `span_cat = Sp(E^f_inj)`.
pub fn verify_psi(qcat: &FinCat, span_cat: &FinCat, checks: PsiChecks) -> Result<PsiReport, SpanError> {
    let mut rep = PsiReport::default();
    let obj_of = |d: usize| span_cat.find_object(&Object::vect(d));
    let mut psi = Vec::with_capacity(qcat.num_morphisms());
    for f in qcat.morphisms() {
        let s = psi_tilde(qcat, f);
        let (a, b) = (obj_of(s.source_dim), obj_of(s.target_dim));
        let id = a.zip(b).and_then(|(a, b)| span_cat.find(a, b, &s.key()));
        psi.push(id.ok_or(SpanError::MissingPullback)?);
    }
    if checks.functoriality {
        for g in qcat.morphisms() {
            let b = qcat.src(g);
            for a in 0..qcat.num_objects() {
                for f in qcat.hom(a, b) {
                    rep.composable_pairs += 1;
                    if span_cat.compose(psi[g], psi[f]) != psi[qcat.compose(g, f)] {
                        rep.functoriality_failures += 1;
                        if rep.witnesses.len() < 8 {
                            rep.witnesses.push(format!("functoriality fails at ({g}, {f})"));
                        }
                    }
                }
            }
        }
    }
    if checks.essential_surjectivity {
        // every vector space with the zero form is its own radical
        for a in 0..qcat.num_objects() {
            let s = form_of(qcat, a);
            if s.coeffs().iter().all(|&c| c == 0) {
                rep.radical_dims_covered.push(s.dim());
            }
        }
        rep.radical_dims_covered.sort_unstable();
        rep.radical_dims_covered.dedup();
        rep.essential_surjectivity = (0..span_cat.num_objects())
            .all(|o| rep.radical_dims_covered.contains(&span_cat.object(o).size));
    }
    if checks.fullness {
        for v in 0..qcat.num_objects() {
            for w in 0..qcat.num_objects() {
                let (sv, sw) = (form_of(qcat, v), form_of(qcat, w));
                let (Some(a), Some(b)) = (obj_of(sv.radical().dim()), obj_of(sw.radical().dim())) else { continue };
                for t in span_cat.hom(a, b) {
                    rep.spans_checked += 1;
                    let span = decode_span(span_cat, t).unwrap();
                    let (target, k) = fullness_witness(sv, sw, &span);
                    let ok = sv.is_isometry(&k, &target) && k.is_injective() && psi_tilde_matrix(sv, &target, &k) == span;
                    if !ok {
                        rep.fullness_failures += 1;
                        if rep.witnesses.len() < 8 {
                            rep.witnesses.push(format!("no preimage found for span {t} from object {v} to {w}"));
                        }
                    }
                }
            }
        }
    }
    if checks.faithfulness {
        for v in 0..qcat.num_objects() {
            for w in 0..qcat.num_objects() {
                let hom = qcat.hom(v, w);
                if hom.is_empty() {
                    continue;
                }
                rep.homsets_checked += 1;
                if !faithfulness_classes_agree(qcat, v, w, &psi) {
                    rep.faithfulness_failures += 1;
                    if rep.witnesses.len() < 8 {
                        rep.witnesses.push(format!("span fibers differ from automorphism orbits on hom({v}, {w})"));
                    }
                }
            }
        }
    }
    Ok(rep)
}

/// An isometric injection `V → W ⊥ C ⊥ L` whose radical span is `span`: identity on a
/// complement `C` of `Rad V`, `β` on the coimage and a totally isotropic embedding of a
/// complement of the coimage into a hyperbolic `L`.
pub fn fullness_witness(v: &QuadSpace, w: &QuadSpace, span: &SpanMorphism) -> (QuadSpace, MatF) {
    let k = v.field();
    let rad_v = v.radical();
    let rad_w = w.radical();
    let x = &span.coimage;
    // complement X' of X inside Rad V (Rad-coordinates), and complement C of Rad V in V
    let xq = x.quotient_basis();
    let x_comp = xq.section.clone();
    let cq = rad_v.quotient_basis();
    let c_basis = cq.section.clone();
    let c_form = v.pullback(&c_basis);
    let l = QuadSpace::hyperbolic_power(k, v.kind(), x_comp.cols());
    let target = w.orthogonal_sum(&c_form).orthogonal_sum(&l);
    let (nw, nc) = (w.dim(), c_form.dim());
    // basis of V: Rad-basis (in order) then C; express images, then change basis back
    let rad_inc = rad_v.inclusion();
    let mut images: Vec<Vec<Elem>> = Vec::new();
    let mut sources: Vec<Vec<Elem>> = Vec::new();
    for i in 0..x.dim() {
        let coords = x.basis().row(i).to_vec();
        sources.push(rad_inc.mul_vec(&coords));
        let y = rad_w.inclusion().mul_vec(&span.map.col(i));
        let mut img = y;
        img.resize(target.dim(), 0);
        images.push(img);
    }
    for j in 0..x_comp.cols() {
        sources.push(rad_inc.mul_vec(&x_comp.col(j)));
        let mut img = vec![0; target.dim()];
        img[nw + nc + 2 * j] = 1;
        images.push(img);
    }
    for j in 0..nc {
        sources.push(c_basis.col(j));
        let mut img = vec![0; target.dim()];
        img[nw + j] = 1;
        images.push(img);
    }
    let s = MatF::from_cols(k, v.dim(), &sources);
    let t = MatF::from_cols(k, target.dim(), &images);
    let kmat = t.mul_unchecked(&s.inverse().expect("adapted basis"));
    (target, kmat)
}

/// Automorphisms of `w` that fix `Rad(w)` pointwise act on `hom(v, w)` by
/// postcomposition; their orbits must be exactly the fibers of the radical functor.
fn faithfulness_classes_agree(qcat: &FinCat, v: ObjId, w: ObjId, psi: &[MorId]) -> bool {
    let sw = form_of(qcat, w);
    let rad = sw.radical();
    let fixing: Vec<MorId> = qcat
        .hom(w, w)
        .filter(|&l| {
            let m = qcat.matrix(l).unwrap();
            (0..rad.dim()).all(|i| m.mul_vec(rad.basis().row(i)) == rad.basis().row(i))
        })
        .collect();
    let hom = qcat.hom(v, w);
    let base = hom.start;
    let mut orbit_of = vec![usize::MAX; hom.len()];
    let mut next = 0;
    for f in hom.clone() {
        if orbit_of[f - base] != usize::MAX {
            continue;
        }
        for &l in &fixing {
            orbit_of[qcat.compose(l, f) - base] = next;
        }
        next += 1;
    }
    // same orbit ⇔ same span
    let mut rep_span = vec![None; next];
    let mut seen: rustc_hash::FxHashMap<MorId, usize> = Default::default();
    for f in hom {
        let o = orbit_of[f - base];
        match rep_span[o] {
            None => rep_span[o] = Some(psi[f]),
            Some(s) if s != psi[f] => return false,
            _ => {}
        }
        if let Some(&o2) = seen.get(&psi[f]) {
            if o2 != o {
                return false;
            }
        } else {
            seen.insert(psi[f], o);
        }
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fincat::{build_quad_cat, build_set_cat, build_vect_cat, FormKind, SetKind, VectClass, DEFAULT_MORPHISM_CAP};

    fn inj(q: u32, d: usize) -> FinCat {
        build_vect_cat(Field::of(q), d, VectClass::Inj, DEFAULT_MORPHISM_CAP).unwrap()
    }

    #[test]
    fn linear_pullbacks() {
        let c = inj(2, 2);
        let lines: Vec<MorId> = c.hom(1, 2).collect();
        let p = pullback(&c, lines[0], lines[1]).unwrap();
        assert_eq!(c.object(p.object).size, 0);
        assert!(verify_pullback(&c, lines[0], lines[1], &p));
        let p = pullback(&c, lines[0], lines[0]).unwrap();
        assert_eq!(p.object, 1);
        assert!(verify_pullback(&c, lines[0], lines[0], &p));
    }

    #[test]
    fn set_pullbacks() {
        let c = build_set_cat(2, SetKind::Injections).unwrap();
        let f = c.find(1, 2, &[0]).unwrap();
        let g = c.find(1, 2, &[1]).unwrap();
        let p = pullback(&c, f, g).unwrap();
        assert_eq!(p.object, 0);
        assert!(verify_pullback(&c, f, g, &p));
    }

    #[test]
    fn span_hom_counts() {
        let sp = build_span_cat(&inj(2, 2)).unwrap();
        assert_eq!(sp.hom(1, 1).len(), 2);
        for b in 0..3 {
            assert_eq!(sp.hom(0, b).len(), 1);
        }
        assert_eq!(sp.hom(2, 1).len(), 4);
        for a in 0..3 {
            for b in 0..3 {
                assert_eq!(sp.hom(a, b).len() as u128, span_hom_count(Some(Field::of(2)), a, b));
            }
        }
        sp.validate(1 << 22).unwrap();
        let theta = build_span_cat(&build_set_cat(3, SetKind::Injections).unwrap()).unwrap();
        for a in 0..4 {
            for b in 0..4 {
                assert_eq!(theta.hom(a, b).len() as u128, span_hom_count(None, a, b));
            }
        }
        theta.validate(1 << 22).unwrap();
    }

    #[test]
    fn psi_on_simple_morphisms() {
        let k = Field::of(3);
        let h = QuadSpace::hyperbolic(k, FormKind::Quadratic);
        let z1 = QuadSpace::zero(k, FormKind::Quadratic, 1);
        let big = z1.orthogonal_sum(&h);
        let inc = MatF::from_cols(k, 3, &[vec![1, 0, 0]]);
        let s = psi_tilde_matrix(&z1, &big, &inc);
        assert_eq!((s.source_dim, s.target_dim), (1, 1));
        assert_eq!(s.coimage, Subspace::full(k, 1));
        assert_eq!(s.map, MatF::identity(k, 1));
        let id = psi_tilde_matrix(&h, &h, &MatF::identity(k, 2));
        assert_eq!((id.source_dim, id.coimage.dim()), (0, 0));
    }

    #[test]
    fn psi_verification_small() {
        let k = Field::of(3);
        let q = build_quad_cat(k, 1, true, DEFAULT_MORPHISM_CAP).unwrap();
        let sp = build_span_cat(&inj(3, 1)).unwrap();
        let rep = verify_psi(&q, &sp, PsiChecks::ALL).unwrap();
        assert!(rep.passed(), "{rep:?}");
        assert!(rep.composable_pairs > 0);
    }

    #[test]
    fn psi_verification_dim_two() {
        let k = Field::of(3);
        let sp = build_span_cat(&inj(3, 2)).unwrap();
        for q in [
            build_quad_cat(k, 2, true, DEFAULT_MORPHISM_CAP).unwrap(),
            crate::fincat::build_alt_cat(k, 2, true, DEFAULT_MORPHISM_CAP).unwrap(),
        ] {
            let rep = verify_psi(&q, &sp, PsiChecks::ALL).unwrap();
            assert!(rep.passed(), "{rep:?}");
            assert_eq!(rep.radical_dims_covered, vec![0, 1, 2]);
        }
    }
}
