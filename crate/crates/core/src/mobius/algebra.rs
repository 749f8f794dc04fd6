use rustc_hash::FxHashMap;

use super::poset::Poset;
use super::MobiusError;
use crate::exactla::{Elem, Field, SpVec, Subspace};
use crate::fincat::{FinCat, MorId, ObjId};
use crate::spans::SpanMorphism;

/// A formal sum of morphisms `src → tgt`, indexed by position in the hom-set.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AlgebraElement {
    pub src: ObjId,
    pub tgt: ObjId,
    pub terms: SpVec,
}

impl AlgebraElement {
    pub fn basis(cat: &FinCat, m: MorId) -> AlgebraElement {
        AlgebraElement { src: cat.src(m), tgt: cat.tgt(m), terms: SpVec::unit(cat.local_index(m) as u32) }
    }
    pub fn identity(cat: &FinCat, a: ObjId) -> AlgebraElement {
        AlgebraElement::basis(cat, cat.identity(a))
    }
    pub fn zero(src: ObjId, tgt: ObjId) -> AlgebraElement {
        AlgebraElement { src, tgt, terms: SpVec::new() }
    }
    pub fn is_zero(&self) -> bool {
        self.terms.is_zero()
    }

    pub fn axpy(&self, field: Field, c: Elem, other: &AlgebraElement) -> AlgebraElement {
        assert_eq!((self.src, self.tgt), (other.src, other.tgt), "sum of elements of different hom-spaces");
        AlgebraElement { src: self.src, tgt: self.tgt, terms: self.terms.axpy(field, c, &other.terms) }
    }

    /// `self ∘ inner`.
    pub fn after(&self, cat: &FinCat, field: Field, inner: &AlgebraElement) -> AlgebraElement {
        assert_eq!(inner.tgt, self.src, "composition of non-composable elements");
        let (g0, f0) = (cat.hom(self.src, self.tgt).start, cat.hom(inner.src, inner.tgt).start);
        let mut acc: FxHashMap<u32, Elem> = FxHashMap::default();
        for &(g, x) in self.terms.entries() {
            for &(f, y) in inner.terms.entries() {
                let h = cat.local_index(cat.compose(g0 + g as usize, f0 + f as usize)) as u32;
                let e = acc.entry(h).or_insert(0);
                *e = field.mul_add(*e, x, y);
            }
        }
        AlgebraElement { src: inner.src, tgt: self.tgt, terms: SpVec::from_pairs(field, acc.into_iter().filter(|e| e.1 != 0).collect()) }
    }
}

/// Elements `f_α` of `k[End(object)]`.
#[derive(Clone, Debug)]
pub struct IdempotentFamily {
    pub object: ObjId,
    pub field: Field,
    pub elements: Vec<AlgebraElement>,
}

impl IdempotentFamily {
    /// `f_α f_β = δ_{αβ} f_α` and `Σ f_α = 1`, exactly.
    pub fn check(&self, cat: &FinCat) -> Result<(), MobiusError> {
        let k = self.field;
        for (a, fa) in self.elements.iter().enumerate() {
            for (b, fb) in self.elements.iter().enumerate() {
                let p = fa.after(cat, k, fb);
                let expected = if a == b { fa.clone() } else { AlgebraElement::zero(self.object, self.object) };
                if p != expected {
                    return Err(MobiusError::Check(format!("f_{a} f_{b} is not {}", if a == b { "f_a" } else { "0" })));
                }
            }
        }
        let total = self.elements.iter().fold(AlgebraElement::zero(self.object, self.object), |acc, f| acc.axpy(k, 1, f));
        if total != AlgebraElement::identity(cat, self.object) {
            return Err(MobiusError::Check("the family does not sum to the identity".into()));
        }
        Ok(())
    }
}

/// `f_α = Σ_{β ≤ α} μ(β, α) e_β`, after checking `e_α e_β = e_{α∧β}` and `e_top = 1`.
pub fn stanley_idempotents(cat: &FinCat, object: ObjId, poset: &Poset, e: &[MorId], field: Field) -> Result<IdempotentFamily, MobiusError> {
    let n = poset.len();
    if e.len() != n {
        return Err(MobiusError::Invalid(format!("{} monoid elements for a poset of size {n}", e.len())));
    }
    if !poset.has_meets() {
        return Err(MobiusError::Invalid("the poset lacks meets".into()));
    }
    for &m in e {
        if cat.src(m) != object || cat.tgt(m) != object {
            return Err(MobiusError::Invalid(format!("morphism {m} is not an endomorphism of {object}")));
        }
    }
    for a in 0..n {
        for b in 0..n {
            let meet = poset.meet(a, b).expect("meets exist");
            if cat.compose(e[a], e[b]) != e[meet] {
                return Err(MobiusError::Invalid(format!("e_{a} e_{b} ≠ e_(meet {meet})")));
            }
        }
    }
    match poset.top() {
        Some(t) if e[t] == cat.identity(object) => {}
        _ => return Err(MobiusError::Invalid("the top element must map to the identity".into())),
    }
    let mu = poset.mobius();
    let elements = (0..n)
        .map(|a| {
            (0..n).filter(|&b| poset.leq(b, a)).fold(AlgebraElement::zero(object, object), |acc, b| {
                acc.axpy(field, field.from_int(mu[b][a]), &AlgebraElement::basis(cat, e[b]))
            })
        })
        .collect();
    Ok(IdempotentFamily { object, field, elements })
}

/// A sub-object of an object of Γ, Θ or `E^f_inj`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Subobject {
    /// Bitmask over the non-base points (bit `x` is the point `x + 1` in Γ).
    Subset(u32),
    Subspace(Subspace),
}

impl Subobject {
    pub fn size(&self) -> usize {
        match self {
            Subobject::Subset(m) => m.count_ones() as usize,
            Subobject::Subspace(s) => s.dim(),
        }
    }
}

/// The sub-object lattice of one object with its idempotents.
#[derive(Clone, Debug)]
pub struct SubobjectFamily {
    pub subobjects: Vec<Subobject>,
    pub poset: Poset,
    /// `e_α`.
    pub generators: Vec<MorId>,
    pub family: IdempotentFamily,
}

/// In `End_Γ(n_+)`, `e_A` fixes `A ∪ {*}` and sends the rest to `*`.
pub fn gamma_idempotents(gamma: &FinCat, n: usize, field: Field) -> Result<SubobjectFamily, MobiusError> {
    let poset = Poset::boolean(n);
    let generators: Vec<MorId> = (0..1u32 << n)
        .map(|a| {
            let key: Vec<u8> = std::iter::once(0).chain((0..n).map(|x| if a >> x & 1 == 1 { x as u8 + 1 } else { 0 })).collect();
            gamma.find(n, n, &key).ok_or_else(|| MobiusError::Invalid(format!("category has no collapse map for {a:b}")))
        })
        .collect::<Result<_, _>>()?;
    let family = stanley_idempotents(gamma, n, &poset, &generators, field)?;
    Ok(SubobjectFamily { subobjects: (0..1u32 << n).map(Subobject::Subset).collect(), poset, generators, family })
}

/// In `End_{Sp(C)}(a)`, `e_U = [a ⊇ U = U ⊆ a]`; linear or set spans.
pub fn span_idempotents(span_cat: &FinCat, a: ObjId, field: Field) -> Result<SubobjectFamily, MobiusError> {
    let size = span_cat.object(a).size;
    let (poset, subobjects, keys): (Poset, Vec<Subobject>, Vec<Vec<u8>>) = match span_cat.field() {
        Some(k) => {
            let (poset, subs) = Poset::subspaces(k, size);
            let keys = subs.iter().map(|u| SpanMorphism::restriction(u).key()).collect();
            (poset, subs.into_iter().map(Subobject::Subspace).collect(), keys)
        }
        None => {
            let keys = (0..1u32 << size)
                .map(|m| (0..size).map(|x| if m >> x & 1 == 1 { x as u8 + 1 } else { 0 }).collect())
                .collect();
            (Poset::boolean(size), (0..1u32 << size).map(Subobject::Subset).collect(), keys)
        }
    };
    let generators: Vec<MorId> = keys
        .iter()
        .map(|key| span_cat.find(a, a, key).ok_or_else(|| MobiusError::Invalid("restriction span missing".into())))
        .collect::<Result<_, _>>()?;
    let family = stanley_idempotents(span_cat, a, &poset, &generators, field)?;
    Ok(SubobjectFamily { subobjects, poset, generators, family })
}
