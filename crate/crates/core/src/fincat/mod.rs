//! Finite categories with explicit hom-sets, truncated models of the categories of
//! vector spaces, quadratic and symplectic spaces, finite sets and pairs `(V, W)`.

mod axioms;
mod builders;
mod functor;
mod quad;

pub use axioms::{check_axioms, Axiom, AxiomOutcome, AxiomReport, Stabilization};
pub use builders::{
    build_alt_cat, build_form_cat_on, build_grassmann_cat, build_quad_cat, build_set_cat, build_vect_cat,
    elements_cat, monoid_cat, poset_cat, product_cat, skeleton_forms, table_cat, SetKind, SetRep, VectClass,
};
pub use functor::MonFunctor;
pub use quad::{determinant, FormKind, QuadSpace};

use std::collections::VecDeque;
use std::fmt;
use std::ops::Range;
use std::sync::{Arc, OnceLock};

use rustc_hash::FxHashMap;
use sha2::{Digest, Sha256};
use thiserror::Error;

use crate::exactla::{Elem, Field, MatF, Subspace};

pub type ObjId = usize;
pub type MorId = usize;

/// Morphism-count threshold above which builders refuse to enumerate.
pub const DEFAULT_MORPHISM_CAP: usize = 4_000_000;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CatError {
    #[error("enumeration cap exceeded: {what} needs {count} > {cap}")]
    CapExceeded { what: String, count: u128, cap: usize },
    #[error("morphisms {g} and {f} are not composable")]
    NotComposable { g: MorId, f: MorId },
    #[error("composite of {g} and {f} is not a listed morphism")]
    NotClosed { g: MorId, f: MorId },
    #[error("invalid category data: {0}")]
    Invalid(String),
    #[error("functor check failed: {0}")]
    Functor(String),
    #[error("category has no pullbacks of monomorphisms")]
    NoPullbacks,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum ObjData {
    Vect,
    Form(QuadSpace),
    Set { pointed: bool },
    Pair(Subspace),
    Abstract,
    Tuple(ObjId, ObjId),
    Element { base: ObjId, x: u32 },
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Object {
    /// Dimension of the underlying vector space, or number of non-basepoint elements.
    pub size: usize,
    pub data: ObjData,
}

impl Object {
    pub fn vect(n: usize) -> Object {
        Object { size: n, data: ObjData::Vect }
    }
    pub fn set(n: usize, pointed: bool) -> Object {
        Object { size: n, data: ObjData::Set { pointed } }
    }
    pub fn form(s: QuadSpace) -> Object {
        Object { size: s.dim(), data: ObjData::Form(s) }
    }

    pub fn key(&self) -> Vec<u8> {
        let mut k = Vec::with_capacity(8);
        match &self.data {
            ObjData::Vect => k.extend([0, self.size as u8]),
            ObjData::Form(s) => {
                k.push(1);
                k.extend(s.key());
            }
            ObjData::Set { pointed } => k.extend([2, *pointed as u8, self.size as u8]),
            ObjData::Pair(w) => {
                k.extend([3, self.size as u8]);
                k.extend(w.key());
            }
            ObjData::Abstract => k.push(4),
            ObjData::Tuple(a, b) => {
                k.push(5);
                k.extend((*a as u32).to_le_bytes());
                k.extend((*b as u32).to_le_bytes());
            }
            ObjData::Element { base, x } => {
                k.push(6);
                k.extend((*base as u32).to_le_bytes());
                k.extend(x.to_le_bytes());
            }
        }
        k
    }

    /// Number of points of the underlying set (one more than `size` for pointed sets).
    pub fn points(&self) -> usize {
        match self.data {
            ObjData::Set { pointed: true } => self.size + 1,
            _ => self.size,
        }
    }
}

/// Set-valued composition data for categories given by an explicit table.
#[derive(Clone, Debug)]
pub struct CompTable {
    n: usize,
    table: Vec<u32>,
}

impl CompTable {
    pub const NONE: u32 = u32::MAX;

    pub fn new(n: usize, table: Vec<u32>) -> CompTable {
        assert_eq!(table.len(), n * n);
        CompTable { n, table }
    }

    fn get(&self, g: MorId, f: MorId) -> Option<MorId> {
        match self.table[g * self.n + f] {
            CompTable::NONE => None,
            h => Some(h as MorId),
        }
    }
}

#[derive(Clone, Debug)]
pub(crate) enum Rule {
    /// Key: matrix entries, row-major, `dim(tgt) × dim(src)`.
    Linear(Field),
    /// Key: image of each point; for pointed sets point 0 is the basepoint.
    SetMaps,
    /// Key: `[dim U] ++ rref(U) ++ t̄` with `U ⊆ src` and `t̄ : U → tgt` injective.
    SpansLinear(Field),
    /// Key: per source element 0 (outside the coimage) or 1 + image.
    SpansSets,
    Table(CompTable),
    /// Key: two little-endian u32 morphism ids.
    Product(FinCat, FinCat),
    /// Key: the base morphism id as little-endian u32.
    Elements(FinCat),
}

#[derive(Clone, Debug)]
enum HomIndex {
    /// Hom-set is the full matrix space, ordered by base-q value of the entries.
    Lex { q: u32 },
    Keys(FxHashMap<Box<[u8]>, u32>),
    Product { len2: u32 },
}

#[derive(Clone, Debug)]
struct HomSet {
    start: u32,
    len: u32,
    index: HomIndex,
}

struct CatInner {
    desc: String,
    field: Option<Field>,
    objects: Vec<Object>,
    obj_index: FxHashMap<Vec<u8>, ObjId>,
    src: Vec<u32>,
    tgt: Vec<u32>,
    key_off: Vec<u32>,
    key_data: Vec<u8>,
    homs: Vec<HomSet>,
    ident: Vec<u32>,
    rule: Rule,
    preset_gens: Option<Vec<MorId>>,
    gens: OnceLock<Vec<MorId>>,
    mono_pullbacks: bool,
    hash: OnceLock<[u8; 32]>,
}

/// An immutable finite category. Cloning is cheap; the opposite category is a view
/// sharing the same morphism ids.
#[derive(Clone)]
pub struct FinCat {
    inner: Arc<CatInner>,
    op: bool,
}

impl fmt::Debug for FinCat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "FinCat({}{}, {} objects, {} morphisms)",
            self.inner.desc,
            if self.op { ", op" } else { "" },
            self.num_objects(),
            self.num_morphisms()
        )
    }
}

impl PartialEq for FinCat {
    fn eq(&self, other: &FinCat) -> bool {
        self.op == other.op && (Arc::ptr_eq(&self.inner, &other.inner) || self.content_hash() == other.content_hash())
    }
}

/// Raw material for a category: objects, composition rule and per-pair key lists.
pub(crate) struct CatParts {
    pub desc: String,
    pub field: Option<Field>,
    pub objects: Vec<Object>,
    pub rule: Rule,
    /// `keys[a * n + b]` lists the morphisms `a → b`, in the order they receive ids.
    pub keys: Vec<Vec<Vec<u8>>>,
    pub identity_keys: Vec<Vec<u8>>,
    pub generators: Option<Vec<(ObjId, ObjId, Vec<u8>)>>,
    pub mono_pullbacks: bool,
}

impl FinCat {
    pub(crate) fn assemble(parts: CatParts) -> Result<FinCat, CatError> {
        let n = parts.objects.len();
        if parts.keys.len() != n * n || parts.identity_keys.len() != n {
            return Err(CatError::Invalid("key table has the wrong shape".into()));
        }
        let total: usize = parts.keys.iter().map(Vec::len).sum();
        if total > u32::MAX as usize {
            return Err(CatError::CapExceeded { what: "morphisms".into(), count: total as u128, cap: u32::MAX as usize });
        }
        let mut src = Vec::with_capacity(total);
        let mut tgt = Vec::with_capacity(total);
        let mut key_off = Vec::with_capacity(total + 1);
        let mut key_data = Vec::new();
        let mut homs = Vec::with_capacity(n * n);
        key_off.push(0u32);
        for (pair, list) in parts.keys.into_iter().enumerate() {
            let (a, b) = (pair / n, pair % n);
            let start = src.len() as u32;
            let index = match &parts.rule {
                Rule::Linear(k) if is_full_lex(*k, &parts.objects[a], &parts.objects[b], &list) => {
                    HomIndex::Lex { q: k.q() }
                }
                Rule::Product(_, c2) => {
                    let (ObjData::Tuple(_, b1), ObjData::Tuple(_, b2)) = (&parts.objects[a].data, &parts.objects[b].data)
                    else {
                        return Err(CatError::Invalid("product objects must be tuples".into()));
                    };
                    HomIndex::Product { len2: c2.hom(*b1, *b2).len() as u32 }
                }
                _ => {
                    let mut map = FxHashMap::default();
                    for (i, k) in list.iter().enumerate() {
                        if map.insert(k.clone().into_boxed_slice(), i as u32).is_some() {
                            return Err(CatError::Invalid(format!("duplicate morphism key in hom({a}, {b})")));
                        }
                    }
                    HomIndex::Keys(map)
                }
            };
            let len = list.len() as u32;
            for k in list {
                key_data.extend_from_slice(&k);
                key_off.push(key_data.len() as u32);
                src.push(a as u32);
                tgt.push(b as u32);
            }
            homs.push(HomSet { start, len, index });
        }
        let mut obj_index = FxHashMap::default();
        for (i, o) in parts.objects.iter().enumerate() {
            obj_index.insert(o.key(), i);
        }
        let mut inner = CatInner {
            desc: parts.desc,
            field: parts.field,
            objects: parts.objects,
            obj_index,
            src,
            tgt,
            key_off,
            key_data,
            homs,
            ident: Vec::new(),
            rule: parts.rule,
            preset_gens: None,
            gens: OnceLock::new(),
            mono_pullbacks: parts.mono_pullbacks,
            hash: OnceLock::new(),
        };
        let mut ident = Vec::with_capacity(n);
        for (a, k) in parts.identity_keys.iter().enumerate() {
            let id = inner
                .find(a, a, k)
                .ok_or_else(|| CatError::Invalid(format!("identity of object {a} missing")))?;
            ident.push(id as u32);
        }
        inner.ident = ident;
        if let Some(g) = parts.generators {
            let mut ids = Vec::with_capacity(g.len());
            for (a, b, k) in g {
                ids.push(inner.find(a, b, &k).ok_or_else(|| CatError::Invalid("generator not listed".into()))?);
            }
            ids.sort_unstable();
            ids.dedup();
            inner.preset_gens = Some(ids);
        }
        Ok(FinCat { inner: Arc::new(inner), op: false })
    }

    pub fn description(&self) -> &str {
        &self.inner.desc
    }
    pub fn field(&self) -> Option<Field> {
        self.inner.field
    }
    pub fn is_opposite(&self) -> bool {
        self.op
    }
    pub fn opposite(&self) -> FinCat {
        FinCat { inner: self.inner.clone(), op: !self.op }
    }
    /// The underlying category with the opposite flag cleared.
    pub fn base(&self) -> FinCat {
        FinCat { inner: self.inner.clone(), op: false }
    }
    pub fn has_mono_pullbacks(&self) -> bool {
        self.inner.mono_pullbacks
    }
    pub(crate) fn rule(&self) -> &Rule {
        &self.inner.rule
    }

    pub fn num_objects(&self) -> usize {
        self.inner.objects.len()
    }
    pub fn num_morphisms(&self) -> usize {
        self.inner.src.len()
    }
    pub fn objects(&self) -> &[Object] {
        &self.inner.objects
    }
    pub fn object(&self, a: ObjId) -> &Object {
        &self.inner.objects[a]
    }
    pub fn find_object(&self, o: &Object) -> Option<ObjId> {
        self.inner.obj_index.get(&o.key()).copied()
    }

    pub fn src(&self, m: MorId) -> ObjId {
        if self.op {
            self.inner.tgt[m] as ObjId
        } else {
            self.inner.src[m] as ObjId
        }
    }
    pub fn tgt(&self, m: MorId) -> ObjId {
        if self.op {
            self.inner.src[m] as ObjId
        } else {
            self.inner.tgt[m] as ObjId
        }
    }

    pub fn hom(&self, a: ObjId, b: ObjId) -> Range<MorId> {
        let (a, b) = if self.op { (b, a) } else { (a, b) };
        self.inner.hom_range(a, b)
    }

    /// Position of `m` within its hom-set.
    pub fn local_index(&self, m: MorId) -> usize {
        let i = &self.inner;
        m - i.homs[i.src[m] as usize * i.objects.len() + i.tgt[m] as usize].start as usize
    }

    pub fn identity(&self, a: ObjId) -> MorId {
        self.inner.ident[a] as MorId
    }
    pub fn is_identity(&self, m: MorId) -> bool {
        let s = self.inner.src[m] as usize;
        self.inner.ident[s] as usize == m
    }
    pub fn key(&self, m: MorId) -> &[u8] {
        self.inner.key(m)
    }

    pub fn find(&self, a: ObjId, b: ObjId, key: &[u8]) -> Option<MorId> {
        if self.op {
            self.inner.find(b, a, key)
        } else {
            self.inner.find(a, b, key)
        }
    }

    /// `g ∘ f`; panics on non-composable input or on a composite missing from the
    /// category. Built categories are closed, so this only fires on misuse.
    pub fn compose(&self, g: MorId, f: MorId) -> MorId {
        match self.try_compose(g, f) {
            Ok(h) => h,
            Err(e) => panic!("{e}"),
        }
    }

    pub fn try_compose(&self, g: MorId, f: MorId) -> Result<MorId, CatError> {
        if self.tgt(f) != self.src(g) {
            return Err(CatError::NotComposable { g, f });
        }
        let r = if self.op { self.inner.compose(f, g) } else { self.inner.compose(g, f) };
        r.ok_or(CatError::NotClosed { g, f })
    }

    /// Matrix of a morphism of a linear category (in the underlying orientation).
    pub fn matrix(&self, m: MorId) -> Option<MatF> {
        let Rule::Linear(k) = self.inner.rule else { return None };
        let i = &self.inner;
        let rows = i.objects[i.tgt[m] as usize].size;
        let cols = i.objects[i.src[m] as usize].size;
        Some(MatF::from_data(k, rows, cols, i.key(m).to_vec()))
    }

    /// Point map of a morphism between finite sets (underlying orientation).
    pub fn set_map(&self, m: MorId) -> Option<&[u8]> {
        match self.inner.rule {
            Rule::SetMaps => Some(self.inner.key(m)),
            _ => None,
        }
    }

    /// Base morphism of a category of elements or the pair of a product morphism.
    pub fn decode_ids(&self, m: MorId) -> Vec<MorId> {
        self.key(m).chunks_exact(4).map(|c| u32::from_le_bytes(c.try_into().unwrap()) as MorId).collect()
    }

    pub fn morphisms(&self) -> Range<MorId> {
        0..self.num_morphisms()
    }

    /// A generating set: every morphism is a composite of these and identities.
    pub fn generators(&self) -> &[MorId] {
        self.inner.gens.get_or_init(|| match &self.inner.preset_gens {
            Some(g) => g.clone(),
            None => self.greedy_generators(),
        })
    }

    fn greedy_generators(&self) -> Vec<MorId> {
        let n = self.num_morphisms();
        let mut reached = vec![false; n];
        for a in 0..self.num_objects() {
            reached[self.identity(a)] = true;
        }
        let mut gens: Vec<MorId> = Vec::new();
        let mut into: Vec<Vec<MorId>> = vec![Vec::new(); self.num_objects()];
        let mut from: Vec<Vec<MorId>> = vec![Vec::new(); self.num_objects()];
        let base = self.base();
        for m in 0..n {
            if reached[m] {
                continue;
            }
            gens.push(m);
            from[base.src(m)].push(m);
            into[base.tgt(m)].push(m);
            reached[m] = true;
            let mut queue = VecDeque::from([m]);
            while let Some(x) = queue.pop_front() {
                for &h in &from[base.tgt(x)] {
                    let y = base.compose(h, x);
                    if !reached[y] {
                        reached[y] = true;
                        queue.push_back(y);
                    }
                }
                for &h in &into[base.src(x)] {
                    let y = base.compose(x, h);
                    if !reached[y] {
                        reached[y] = true;
                        queue.push_back(y);
                    }
                }
            }
        }
        gens
    }

    /// Number of morphisms generated by `gens` (identities included).
    pub fn closure_size(&self, gens: &[MorId]) -> usize {
        let base = self.base();
        let mut reached = vec![false; self.num_morphisms()];
        let mut queue = VecDeque::new();
        for a in 0..self.num_objects() {
            reached[base.identity(a)] = true;
            queue.push_back(base.identity(a));
        }
        let mut from: Vec<Vec<MorId>> = vec![Vec::new(); self.num_objects()];
        for &g in gens {
            from[base.src(g)].push(g);
        }
        while let Some(x) = queue.pop_front() {
            for &h in &from[base.tgt(x)] {
                let y = base.compose(h, x);
                if !reached[y] {
                    reached[y] = true;
                    queue.push_back(y);
                }
            }
        }
        reached.iter().filter(|&&r| r).count()
    }

    /// Exhaustive identity, closure and associativity checks, falling back to a
    /// deterministic sample of triples above `bound`.
    pub fn validate(&self, bound: usize) -> Result<ValidationReport, CatError> {
        let base = self.base();
        for m in self.morphisms() {
            let (a, b) = (base.src(m), base.tgt(m));
            if base.try_compose(m, base.identity(a))? != m || base.try_compose(base.identity(b), m)? != m {
                return Err(CatError::Invalid(format!("identity law fails at morphism {m}")));
            }
        }
        let n = self.num_objects();
        let into: Vec<usize> = (0..n).map(|b| (0..n).map(|a| base.hom(a, b).len()).sum()).collect();
        let out: Vec<usize> = (0..n).map(|a| (0..n).map(|b| base.hom(a, b).len()).sum()).collect();
        let triples: u128 = (0..n)
            .flat_map(|b| (0..n).map(move |c| (b, c)))
            .map(|(b, c)| into[b] as u128 * base.hom(b, c).len() as u128 * out[c] as u128)
            .sum();
        let exhaustive = triples <= bound as u128;
        let mut checked = 0u64;
        let check = |f: MorId, g: MorId, h: MorId| -> Result<(), CatError> {
            let l = base.try_compose(h, base.try_compose(g, f)?)?;
            let r = base.try_compose(base.try_compose(h, g)?, f)?;
            if l != r {
                return Err(CatError::Invalid(format!("associativity fails at ({h}, {g}, {f})")));
            }
            Ok(())
        };
        if exhaustive {
            for g in self.morphisms() {
                let (b, c) = (base.src(g), base.tgt(g));
                for a in 0..n {
                    for f in base.hom(a, b) {
                        for d in 0..n {
                            for h in base.hom(c, d) {
                                check(f, g, h)?;
                                checked += 1;
                            }
                        }
                    }
                }
            }
        } else {
            // deterministic LCG sample of composable triples
            let mut state: u64 = 0x9e37_79b9_7f4a_7c15;
            let mut next = |m: usize| {
                state = state.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
                ((state >> 33) as usize) % m
            };
            let target = bound.max(1);
            let mut attempts = 0;
            while (checked as usize) < target && attempts < 20 * target {
                attempts += 1;
                let g = next(self.num_morphisms());
                let (b, c) = (base.src(g), base.tgt(g));
                let a = next(n);
                let d = next(n);
                let (rf, rh) = (base.hom(a, b), base.hom(c, d));
                if rf.is_empty() || rh.is_empty() {
                    continue;
                }
                let f = rf.start + next(rf.len());
                let h = rh.start + next(rh.len());
                check(f, g, h)?;
                checked += 1;
            }
        }
        Ok(ValidationReport { morphisms: self.num_morphisms(), triples_checked: checked, exhaustive })
    }

    /// Full subcategory on `objs` (in the given order) with its inclusion functor.
    pub fn full_subcategory(&self, objs: &[ObjId]) -> Result<(FinCat, MonFunctor), CatError> {
        let base = self.base();
        let n = objs.len();
        let mut keys: Vec<Vec<Vec<u8>>> = Vec::with_capacity(n * n);
        let mut mor_map: Vec<MorId> = Vec::new();
        for &a in objs {
            for &b in objs {
                let r = base.hom(a, b);
                mor_map.extend(r.clone());
                keys.push(r.map(|m| base.key(m).to_vec()).collect());
            }
        }
        let rule = match &self.inner.rule {
            Rule::Table(_) => {
                let mut pos = FxHashMap::default();
                for (i, &m) in mor_map.iter().enumerate() {
                    pos.insert(m, i as u32);
                }
                let mut table = vec![CompTable::NONE; mor_map.len() * mor_map.len()];
                for (i, &g) in mor_map.iter().enumerate() {
                    for (j, &f) in mor_map.iter().enumerate() {
                        if base.tgt(f) == base.src(g) {
                            table[i * mor_map.len() + j] = pos[&base.compose(g, f)];
                        }
                    }
                }
                // table keys are positions in the new category
                let mut c = 0u32;
                for list in keys.iter_mut() {
                    for k in list.iter_mut() {
                        *k = c.to_le_bytes().to_vec();
                        c += 1;
                    }
                }
                Rule::Table(CompTable::new(mor_map.len(), table))
            }
            Rule::Product(..) | Rule::Elements(_) => {
                return Err(CatError::Invalid("full subcategories of derived categories are not supported".into()))
            }
            r => r.clone(),
        };
        let identity_keys = match rule {
            Rule::Table(_) => objs
                .iter()
                .map(|&a| (mor_map.iter().position(|&m| m == base.identity(a)).unwrap() as u32).to_le_bytes().to_vec())
                .collect(),
            _ => objs.iter().map(|&a| base.key(base.identity(a)).to_vec()).collect(),
        };
        let sub = FinCat::assemble(CatParts {
            desc: format!("{}|full{:?}", self.inner.desc, objs),
            field: self.inner.field,
            objects: objs.iter().map(|&a| base.object(a).clone()).collect(),
            rule,
            keys,
            identity_keys,
            generators: None,
            mono_pullbacks: self.inner.mono_pullbacks,
        })?;
        let sub = if self.op { sub.opposite() } else { sub };
        let inc = MonFunctor::new_unchecked(sub.clone(), self.clone(), objs.to_vec(), mor_map);
        Ok((sub, inc))
    }

    /// SHA-256 over the objects, keys and incidence data.
    pub fn content_hash(&self) -> [u8; 32] {
        *self.inner.hash.get_or_init(|| {
            let i = &self.inner;
            let mut h = Sha256::new();
            h.update(i.desc.as_bytes());
            h.update((i.objects.len() as u64).to_le_bytes());
            for o in &i.objects {
                let k = o.key();
                h.update((k.len() as u32).to_le_bytes());
                h.update(&k);
            }
            for s in &i.src {
                h.update(s.to_le_bytes());
            }
            for t in &i.tgt {
                h.update(t.to_le_bytes());
            }
            h.update(&i.key_data);
            h.finalize().into()
        })
    }

    /// Direct sum of two objects when both sides and the result are in range.
    pub fn object_sum(&self, a: ObjId, b: ObjId) -> Option<ObjId> {
        let (oa, ob) = (self.object(a), self.object(b));
        let o = match (&oa.data, &ob.data) {
            (ObjData::Vect, ObjData::Vect) => Object::vect(oa.size + ob.size),
            (ObjData::Form(s), ObjData::Form(t)) => Object::form(s.orthogonal_sum(t)),
            (ObjData::Set { pointed: p }, ObjData::Set { pointed: r }) if p == r => Object::set(oa.size + ob.size, *p),
            _ => return None,
        };
        self.find_object(&o)
    }

    /// `f ⊕ g` for linear or set-map categories.
    pub fn morphism_sum(&self, f: MorId, g: MorId) -> Option<MorId> {
        let base = self.base();
        let a = self.object_sum(base.src(f), base.src(g))?;
        let b = self.object_sum(base.tgt(f), base.tgt(g))?;
        let key = match &self.inner.rule {
            Rule::Linear(_) => base.matrix(f)?.direct_sum(&base.matrix(g)?).data().to_vec(),
            Rule::SetMaps => {
                let pointed = matches!(base.object(a).data, ObjData::Set { pointed: true });
                let off_s = base.object(base.tgt(f)).points() as u8;
                let mut k = base.key(f).to_vec();
                let shift = if pointed { off_s - 1 } else { off_s };
                let gk = base.key(g);
                let skip = pointed as usize;
                k.extend(gk[skip..].iter().map(|&x| if pointed && x == 0 { 0 } else { x + shift }));
                k
            }
            _ => return None,
        };
        base.find(a, b, &key)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ValidationReport {
    pub morphisms: usize,
    pub triples_checked: u64,
    pub exhaustive: bool,
}

fn is_full_lex(k: Field, a: &Object, b: &Object, list: &[Vec<u8>]) -> bool {
    let entries = a.size * b.size;
    let full = (k.q() as u128).checked_pow(entries as u32).unwrap_or(u128::MAX);
    full == list.len() as u128
}

impl CatInner {
    fn hom_range(&self, a: ObjId, b: ObjId) -> Range<MorId> {
        let h = &self.homs[a * self.objects.len() + b];
        h.start as usize..(h.start + h.len) as usize
    }

    fn key(&self, m: MorId) -> &[u8] {
        &self.key_data[self.key_off[m] as usize..self.key_off[m + 1] as usize]
    }

    fn find(&self, a: ObjId, b: ObjId, key: &[u8]) -> Option<MorId> {
        let h = &self.homs[a * self.objects.len() + b];
        let local = match &h.index {
            HomIndex::Lex { q } => {
                let q = *q as u64;
                let mut idx = 0u64;
                for &e in key {
                    if e as u64 >= q {
                        return None;
                    }
                    idx = idx * q + e as u64;
                }
                if key.len() != self.objects[a].size * self.objects[b].size {
                    return None;
                }
                idx as u32
            }
            HomIndex::Keys(map) => *map.get(key)?,
            HomIndex::Product { len2 } => {
                let Rule::Product(c1, c2) = &self.rule else { unreachable!() };
                let (f, g) = split_pair(key)?;
                (c1.local_index(f) as u32) * len2 + c2.local_index(g) as u32
            }
        };
        (local < h.len).then_some((h.start + local) as MorId)
    }

    fn compose(&self, g: MorId, f: MorId) -> Option<MorId> {
        let a = self.src[f] as usize;
        let b = self.tgt[f] as usize;
        let c = self.tgt[g] as usize;
        match &self.rule {
            Rule::Linear(k) => {
                let (na, nb, nc) = (self.objects[a].size, self.objects[b].size, self.objects[c].size);
                let (kf, kg) = (self.key(f), self.key(g));
                let h = &self.homs[a * self.objects.len() + c];
                if let HomIndex::Lex { q } = h.index {
                    let q = q as u64;
                    let mut idx = 0u64;
                    for i in 0..nc {
                        for j in 0..na {
                            let mut s: Elem = 0;
                            for l in 0..nb {
                                s = k.mul_add(s, kg[i * nb + l], kf[l * na + j]);
                            }
                            idx = idx * q + s as u64;
                        }
                    }
                    return Some(h.start as usize + idx as usize);
                }
                let mut key = vec![0u8; nc * na];
                for i in 0..nc {
                    for j in 0..na {
                        let mut s: Elem = 0;
                        for l in 0..nb {
                            s = k.mul_add(s, kg[i * nb + l], kf[l * na + j]);
                        }
                        key[i * na + j] = s;
                    }
                }
                self.find(a, c, &key)
            }
            Rule::SetMaps => {
                let (kf, kg) = (self.key(f), self.key(g));
                let key: Vec<u8> = kf.iter().map(|&x| kg[x as usize]).collect();
                self.find(a, c, &key)
            }
            Rule::SpansSets => {
                let (kf, kg) = (self.key(f), self.key(g));
                let key: Vec<u8> = kf.iter().map(|&x| if x == 0 { 0 } else { kg[x as usize - 1] }).collect();
                self.find(a, c, &key)
            }
            Rule::SpansLinear(k) => {
                let key = compose_linear_spans(
                    *k,
                    self.objects[a].size,
                    self.objects[b].size,
                    self.objects[c].size,
                    self.key(g),
                    self.key(f),
                );
                self.find(a, c, &key)
            }
            Rule::Table(t) => {
                let gi = u32::from_le_bytes(self.key(g).try_into().ok()?) as usize;
                let fi = u32::from_le_bytes(self.key(f).try_into().ok()?) as usize;
                t.get(gi, fi)
            }
            Rule::Product(c1, c2) => {
                let (f1, f2) = split_pair(self.key(f))?;
                let (g1, g2) = split_pair(self.key(g))?;
                let h1 = c1.try_compose(g1, f1).ok()?;
                let h2 = c2.try_compose(g2, f2).ok()?;
                let HomIndex::Product { len2 } = self.homs[a * self.objects.len() + c].index else { unreachable!() };
                let local = c1.local_index(h1) as u32 * len2 + c2.local_index(h2) as u32;
                Some((self.homs[a * self.objects.len() + c].start + local) as MorId)
            }
            Rule::Elements(base) => {
                let fb = u32::from_le_bytes(self.key(f).try_into().ok()?) as MorId;
                let gb = u32::from_le_bytes(self.key(g).try_into().ok()?) as MorId;
                let hb = base.try_compose(gb, fb).ok()?;
                self.find(a, c, &(hb as u32).to_le_bytes())
            }
        }
    }
}

fn split_pair(key: &[u8]) -> Option<(MorId, MorId)> {
    if key.len() != 8 {
        return None;
    }
    let f = u32::from_le_bytes(key[..4].try_into().ok()?) as MorId;
    let g = u32::from_le_bytes(key[4..].try_into().ok()?) as MorId;
    Some((f, g))
}

/// Decoded linear span `src ⊇ U → tgt`.
pub(crate) struct LinSpan {
    pub coimage: Subspace,
    /// `dim tgt × dim U`, acting on coordinates relative to the echelon basis of `U`.
    pub map: MatF,
}

pub(crate) fn linear_span_key(coimage: &Subspace, map: &MatF) -> Vec<u8> {
    let mut k = vec![coimage.dim() as u8];
    k.extend_from_slice(coimage.basis().data());
    k.extend_from_slice(map.data());
    k
}

pub(crate) fn decode_linear_span(k: Field, n_src: usize, n_tgt: usize, key: &[u8]) -> LinSpan {
    let d = key[0] as usize;
    let basis = MatF::from_data(k, d, n_src, key[1..1 + d * n_src].to_vec());
    let map = MatF::from_data(k, n_tgt, d, key[1 + d * n_src..].to_vec());
    LinSpan { coimage: Subspace::from_rows(basis), map }
}

fn compose_linear_spans(k: Field, na: usize, nb: usize, nc: usize, kg: &[u8], kf: &[u8]) -> Vec<u8> {
    let s1 = decode_linear_span(k, na, nb, kf);
    let s2 = decode_linear_span(k, nb, nc, kg);
    // coordinates in U1 whose image lies in U2
    let pre = Subspace::preimage(&s1.map, &s2.coimage).expect("span shapes agree");
    // composite coimage inside A
    let inc1 = s1.coimage.inclusion();
    let u = Subspace::from_rows(pre.basis().mul_unchecked(&inc1.transpose()));
    let mut cols = Vec::with_capacity(u.dim());
    for r in 0..u.dim() {
        let x = u.basis().row(r);
        let c1 = s1.coimage.coordinates(x).expect("coimage contains its basis");
        let y = s1.map.mul_vec(&c1);
        let c2 = s2.coimage.coordinates(&y).expect("preimage lands in coimage");
        cols.push(s2.map.mul_vec(&c2));
    }
    let map = MatF::from_cols(k, nc, &cols);
    linear_span_key(&u, &map)
}
