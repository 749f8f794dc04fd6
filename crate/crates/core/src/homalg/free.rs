use std::sync::{Arc, OnceLock};

use crate::exactla::{Elem, Field, LinMap, SpVec};
use crate::fincat::{FinCat, MorId, ObjId};
use crate::funrep::{LinRep, Variance};

/// A covariant module on which morphisms act on sparse vectors.
pub(crate) trait Module: Sync {
    fn dim(&self, x: ObjId) -> usize;
    /// Image of `v ∈ M(src m)` in `M(tgt m)`.
    fn transport(&self, v: &SpVec, m: MorId) -> SpVec;
}

impl Module for LinRep {
    fn dim(&self, x: ObjId) -> usize {
        LinRep::dim(self, x)
    }
    fn transport(&self, v: &SpVec, m: MorId) -> SpVec {
        debug_assert_eq!(self.variance(), Variance::Covariant);
        self.action(m).apply(v)
    }
}

/// `⊕_g P_{c_g}` with `P_c = k[Hom(c, −)]`. The basis of the value at `x` is the pairs
/// `(g, m)` with `m ∈ Hom(c_g, x)`, ordered by `g` and then by hom-set position.
#[derive(Clone)]
pub struct FreeModule {
    cat: FinCat,
    field: Field,
    gens: Arc<Vec<ObjId>>,
    offsets: Arc<Vec<OnceLock<Vec<usize>>>>,
}

impl std::fmt::Debug for FreeModule {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("FreeModule").field("gens", &self.gens).finish()
    }
}

impl FreeModule {
    pub fn new(cat: &FinCat, field: Field, gens: Vec<ObjId>) -> FreeModule {
        let offsets = Arc::new((0..cat.num_objects()).map(|_| OnceLock::new()).collect());
        FreeModule { cat: cat.clone(), field, gens: Arc::new(gens), offsets }
    }

    pub fn cat(&self) -> &FinCat {
        &self.cat
    }
    pub fn gens(&self) -> &[ObjId] {
        &self.gens
    }
    pub fn num_gens(&self) -> usize {
        self.gens.len()
    }

    /// Multiplicity of `P_c` for each object `c`.
    pub fn multiplicities(&self) -> Vec<usize> {
        let mut m = vec![0; self.cat.num_objects()];
        for &g in self.gens.iter() {
            m[g] += 1;
        }
        m
    }

    pub fn offsets(&self, x: ObjId) -> &[usize] {
        self.offsets[x].get_or_init(|| {
            let mut o = Vec::with_capacity(self.gens.len() + 1);
            let mut acc = 0;
            o.push(0);
            for &c in self.gens.iter() {
                acc += self.cat.hom(c, x).len();
                o.push(acc);
            }
            o
        })
    }

    /// `(generator, morphism)` behind a basis index at `x`.
    pub fn locate(&self, x: ObjId, idx: usize) -> (usize, MorId) {
        let o = self.offsets(x);
        let g = o.partition_point(|&s| s <= idx) - 1;
        (g, self.cat.hom(self.gens[g], x).start + idx - o[g])
    }

    pub fn index(&self, x: ObjId, g: usize, m: MorId) -> u32 {
        (self.offsets(x)[g] + self.cat.local_index(m)) as u32
    }

    /// The generator `g` at its own object, i.e. `(g, id)`.
    pub fn generator(&self, g: usize) -> SpVec {
        let c = self.gens[g];
        SpVec::unit(self.index(c, g, self.cat.identity(c)))
    }

    pub fn as_rep(&self) -> LinRep {
        let me = self.clone();
        let dims = (0..self.cat.num_objects()).map(|x| Module::dim(self, x)).collect();
        LinRep::from_fn(self.cat.clone(), self.field, Variance::Covariant, dims, move |m| {
            let (a, b) = (me.cat.src(m), me.cat.tgt(m));
            let cols = (0..Module::dim(&me, a)).map(|i| SpVec::unit(me.transport_index(a, i, m))).collect();
            LinMap { field: me.field, rows: Module::dim(&me, b), cols }
        })
    }

    fn transport_index(&self, x: ObjId, i: usize, m: MorId) -> u32 {
        let (g, h) = self.locate(x, i);
        self.index(self.cat.tgt(m), g, self.cat.compose(m, h))
    }
}

impl Module for FreeModule {
    fn dim(&self, x: ObjId) -> usize {
        *self.offsets(x).last().unwrap()
    }

    fn transport(&self, v: &SpVec, m: MorId) -> SpVec {
        let x = self.cat.src(m);
        // composition is injective on no hom-set in general, so merge collisions
        let pairs: Vec<(u32, Elem)> = v.entries().iter().map(|&(i, c)| (self.transport_index(x, i as usize, m), c)).collect();
        SpVec::from_pairs(self.field, pairs)
    }
}

/// Matrix of a map out of a free module at object `x`, given generator images.
pub(crate) fn evaluate_map(src: &FreeModule, images: &[SpVec], target: &dyn Module, x: ObjId) -> LinMap {
    let cols = (0..Module::dim(src, x))
        .map(|i| {
            let (g, m) = src.locate(x, i);
            target.transport(&images[g], m)
        })
        .collect();
    LinMap { field: src.field, rows: target.dim(x), cols }
}
