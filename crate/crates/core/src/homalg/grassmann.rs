use std::str::FromStr;

use rustc_hash::FxHashMap;

use super::HomAlgError;
use crate::exactla::{Elem, Field, LinMap, MatF, QuotientData, SpVec, Subspace};
use crate::fincat::{build_grassmann_cat, build_vect_cat, FinCat, MonFunctor, MorId, ObjId, VectClass};
use crate::funrep::{LinRep, NatTrans, Variance};

/// The operators relating modules over vector spaces, injections, surjections and
/// subspace pairs.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum GrassmannOp {
    /// `(V, W) ↦ V`
    Iota,
    /// `(V, W) ↦ W`, from surjections
    Rho,
    /// `(V, W) ↦ V/W`
    Kappa,
    /// `V ↦ (V, 0)`
    Lambda,
    /// `⊕_{W ⊆ V} X(V, W)`
    Omega,
    /// `⊕_{W ⊆ V} X(V/W)`, from injections
    VarPi,
    /// restriction to injections
    Delta,
}

impl FromStr for GrassmannOp {
    type Err = HomAlgError;

    fn from_str(s: &str) -> Result<GrassmannOp, HomAlgError> {
        Ok(match s {
            "iota" | "ι" => GrassmannOp::Iota,
            "rho" | "ρ" => GrassmannOp::Rho,
            "kappa" | "κ" => GrassmannOp::Kappa,
            "lambda" | "λ" => GrassmannOp::Lambda,
            "omega" | "ω" => GrassmannOp::Omega,
            "varpi" | "ϖ" => GrassmannOp::VarPi,
            "delta" | "δ" => GrassmannOp::Delta,
            _ => return Err(HomAlgError::Invalid(format!("unknown operator {s:?}"))),
        })
    }
}

/// The four categories of a fixed field and dimension bound, with the functors
/// between them. The block sums ω and ϖ take contravariant modules; the
/// precompositions accept either variance.
#[derive(Clone, Debug)]
pub struct GrassmannFamily {
    field: Field,
    dmax: usize,
    all: FinCat,
    inj: FinCat,
    surj: FinCat,
    pairs: FinCat,
    subspaces: Vec<Vec<Subspace>>,
    index: Vec<FxHashMap<Vec<u8>, usize>>,
    first_pair: Vec<ObjId>,
    quotients: Vec<QuotientData>,
}

impl GrassmannFamily {
    pub fn new(field: Field, dmax: usize, cap: usize) -> Result<GrassmannFamily, HomAlgError> {
        let all = build_vect_cat(field, dmax, VectClass::All, cap)?;
        let inj = build_vect_cat(field, dmax, VectClass::Inj, cap)?;
        let surj = build_vect_cat(field, dmax, VectClass::Surj, cap)?;
        let pairs = build_grassmann_cat(field, dmax, cap)?;
        debug_assert!((0..=dmax).all(|n| all.object(n).size == n && inj.object(n).size == n));
        let subspaces: Vec<Vec<Subspace>> = (0..=dmax).map(|n| Subspace::enumerate_all(field, n)).collect();
        let index = subspaces.iter().map(|ws| ws.iter().enumerate().map(|(i, w)| (w.key(), i)).collect()).collect();
        let mut first_pair = Vec::with_capacity(dmax + 1);
        let mut acc = 0;
        for ws in &subspaces {
            first_pair.push(acc);
            acc += ws.len();
        }
        let quotients = subspaces.iter().flatten().map(Subspace::quotient_basis).collect();
        Ok(GrassmannFamily { field, dmax, all, inj, surj, pairs, subspaces, index, first_pair, quotients })
    }

    pub fn field(&self) -> Field {
        self.field
    }
    pub fn dmax(&self) -> usize {
        self.dmax
    }
    /// All linear maps.
    pub fn all(&self) -> &FinCat {
        &self.all
    }
    pub fn injections(&self) -> &FinCat {
        &self.inj
    }
    pub fn surjections(&self) -> &FinCat {
        &self.surj
    }
    /// Pairs `(V, W ⊆ V)` with maps satisfying `f(W) = W'`.
    pub fn pairs(&self) -> &FinCat {
        &self.pairs
    }

    /// Object of the pair category for `W ⊆ k^n`.
    pub fn pair_object(&self, n: usize, w: &Subspace) -> ObjId {
        self.first_pair[n] + self.index[n][&w.key()]
    }

    fn pair_parts(&self, a: ObjId) -> (usize, &Subspace) {
        let n = self.first_pair.partition_point(|&f| f <= a) - 1;
        (n, &self.subspaces[n][a - self.first_pair[n]])
    }

    fn mat(&self, c: &FinCat, m: MorId) -> MatF {
        c.matrix(m).expect("linear category")
    }

    fn find(c: &FinCat, a: ObjId, b: ObjId, m: &MatF) -> MorId {
        c.find(a, b, m.data()).expect("category is closed under the induced map")
    }

    /// `(V, W) ↦ V`.
    pub fn to_ambient(&self) -> MonFunctor {
        let obj = (0..self.pairs.num_objects()).map(|a| self.pair_parts(a).0).collect();
        let mor = |m| Some(Self::find(&self.all, self.pair_parts(self.pairs.src(m)).0, self.pair_parts(self.pairs.tgt(m)).0, &self.mat(&self.pairs, m)));
        MonFunctor::from_fn(self.pairs.clone(), self.all.clone(), obj, mor).expect("forgetful functor")
    }

    /// `(V, W) ↦ W` with `f ↦ f|_W`, in the row bases of the subspaces.
    pub fn to_subspace(&self) -> MonFunctor {
        let obj = (0..self.pairs.num_objects()).map(|a| self.pair_parts(a).1.dim()).collect();
        let mor = |m| {
            let (w, w2) = (self.pair_parts(self.pairs.src(m)).1, self.pair_parts(self.pairs.tgt(m)).1);
            let f = self.mat(&self.pairs, m);
            let cols: Vec<Vec<Elem>> =
                (0..w.dim()).map(|i| w2.coordinates(&f.mul_vec(w.basis().row(i))).expect("f(W) = W'")).collect();
            Some(Self::find(&self.surj, w.dim(), w2.dim(), &MatF::from_cols(self.field, w2.dim(), &cols)))
        };
        MonFunctor::from_fn(self.pairs.clone(), self.surj.clone(), obj, mor).expect("restriction functor")
    }

    /// `(V, W) ↦ V/W` with the induced map on quotients.
    pub fn to_quotient(&self) -> MonFunctor {
        let obj = (0..self.pairs.num_objects()).map(|a| {
            let (n, w) = self.pair_parts(a);
            n - w.dim()
        });
        let mor = |m| {
            let (s, t) = (self.pairs.src(m), self.pairs.tgt(m));
            let f = self.induced_on_quotients(&self.quotients[s], &self.quotients[t], &self.mat(&self.pairs, m));
            Some(Self::find(&self.all, f.cols(), f.rows(), &f))
        };
        MonFunctor::from_fn(self.pairs.clone(), self.all.clone(), obj.collect(), mor).expect("quotient functor")
    }

    /// `V ↦ (V, 0)`.
    pub fn zero_pairs(&self) -> MonFunctor {
        let obj = (0..=self.dmax).map(|n| self.pair_object(n, &Subspace::zero(self.field, n))).collect::<Vec<_>>();
        let mor = |m| Some(Self::find(&self.pairs, obj[self.all.src(m)], obj[self.all.tgt(m)], &self.mat(&self.all, m)));
        MonFunctor::from_fn(self.all.clone(), self.pairs.clone(), obj.clone(), mor).expect("zero-pair functor")
    }

    pub fn inj_inclusion(&self) -> MonFunctor {
        MonFunctor::inclusion(&self.inj, &self.all).expect("injections are linear maps")
    }

    fn induced_on_quotients(&self, src: &QuotientData, tgt: &QuotientData, f: &MatF) -> MatF {
        tgt.projection.mul_unchecked(&f.mul_unchecked(&src.section))
    }

    fn expect_on(&self, rep: &LinRep, cat: &FinCat, what: &str) -> Result<(), HomAlgError> {
        if rep.cat().content_hash() != cat.content_hash() || rep.cat().is_opposite() {
            return Err(HomAlgError::Invalid(format!("operand must be a representation of {what}")));
        }
        Ok(())
    }

    fn expect_module(&self, rep: &LinRep, cat: &FinCat, what: &str) -> Result<(), HomAlgError> {
        self.expect_on(rep, cat, what)?;
        if rep.variance() != Variance::Contravariant {
            return Err(HomAlgError::Invalid("operand must be contravariant".into()));
        }
        Ok(())
    }

    pub fn apply(&self, op: GrassmannOp, rep: &LinRep) -> Result<LinRep, HomAlgError> {
        match op {
            GrassmannOp::Iota => self.iota(rep),
            GrassmannOp::Rho => self.rho(rep),
            GrassmannOp::Kappa => self.kappa(rep),
            GrassmannOp::Lambda => self.lambda(rep),
            GrassmannOp::Omega => self.omega(rep),
            GrassmannOp::VarPi => self.varpi(rep),
            GrassmannOp::Delta => self.delta(rep),
        }
    }

    pub fn iota(&self, f: &LinRep) -> Result<LinRep, HomAlgError> {
        self.expect_on(f, &self.all, "all linear maps")?;
        Ok(f.restrict(&self.to_ambient())?)
    }

    pub fn rho(&self, x: &LinRep) -> Result<LinRep, HomAlgError> {
        self.expect_on(x, &self.surj, "surjections")?;
        Ok(x.restrict(&self.to_subspace())?)
    }

    pub fn kappa(&self, a: &LinRep) -> Result<LinRep, HomAlgError> {
        self.expect_on(a, &self.all, "all linear maps")?;
        Ok(a.restrict(&self.to_quotient())?)
    }

    pub fn lambda(&self, x: &LinRep) -> Result<LinRep, HomAlgError> {
        self.expect_on(x, &self.pairs, "subspace pairs")?;
        Ok(x.restrict(&self.zero_pairs())?)
    }

    pub fn delta(&self, a: &LinRep) -> Result<LinRep, HomAlgError> {
        self.expect_on(a, &self.all, "all linear maps")?;
        Ok(a.restrict(&self.inj_inclusion())?)
    }

    /// Offsets of the subspace blocks of `k^n`, given the size of each block.
    fn offsets(&self, n: usize, size: impl Fn(usize) -> usize) -> Vec<usize> {
        let mut off = Vec::with_capacity(self.subspaces[n].len() + 1);
        let mut acc = 0;
        off.push(0);
        for i in 0..self.subspaces[n].len() {
            acc += size(i);
            off.push(acc);
        }
        off
    }

    /// Block sums over subspaces: `block(f, i)` names, for the block `i` of the
    /// source object, the target block and the map between them.
    fn block_rep(
        &self,
        size: impl Fn(usize, usize) -> usize,
        block: impl Fn(MorId, usize) -> Vec<(usize, LinMap)> + Send + Sync + 'static,
    ) -> LinRep {
        let offs: Vec<Vec<usize>> = (0..=self.dmax).map(|n| self.offsets(n, |i| size(n, i))).collect();
        let dims = offs.iter().map(|o| *o.last().unwrap()).collect();
        let (all, field) = (self.all.clone(), self.field);
        LinRep::from_fn(self.all.clone(), field, Variance::Contravariant, dims, move |m| {
            // contravariant: the map runs from the target object to the source object
            let (n, n2) = (all.src(m), all.tgt(m));
            let mut cols: Vec<Vec<(u32, Elem)>> = vec![Vec::new(); offs[n2][offs[n2].len() - 1]];
            for (i2, (i, map)) in (0..offs[n2].len() - 1).flat_map(|i2| block(m, i2).into_iter().map(move |b| (i2, b))) {
                let (r0, c0) = (offs[n][i] as u32, offs[n2][i2]);
                for (j, col) in map.cols.iter().enumerate() {
                    cols[c0 + j].extend(col.entries().iter().map(|&(r, x)| (r0 + r, x)));
                }
            }
            LinMap { field, rows: offs[n][offs[n].len() - 1], cols: cols.into_iter().map(|c| SpVec::from_pairs(field, c)).collect() }
        })
    }

    /// `ω(X)(V) = ⊕_{W ⊆ V} X(V, W)`; the block `X(V', W') → X(V, W)` is `X(f)`
    /// when `f(W) = W'`.
    pub fn omega(&self, x: &LinRep) -> Result<LinRep, HomAlgError> {
        self.expect_module(x, &self.pairs, "subspace pairs")?;
        let me = self.clone();
        let xs = x.clone();
        let first = self.first_pair.clone();
        let size = |n: usize, i: usize| x.dim(self.first_pair[n] + i);
        let rep = self.block_rep(size, move |m, i2| {
            let (n, n2) = (me.all.src(m), me.all.tgt(m));
            let f = me.mat(&me.all, m);
            let target = first[n2] + i2;
            me.subspaces[n]
                .iter()
                .enumerate()
                .filter(|(_, w)| me.pair_object(n2, &w.image(&f).expect("shapes agree")) == target)
                .map(|(i, _)| {
                    let g = Self::find(&me.pairs, first[n] + i, target, &f);
                    (i, xs.action(g).clone())
                })
                .collect()
        });
        Ok(rep.with_label(format!("omega({})", x.label().unwrap_or("X"))))
    }

    /// `ϖ(X)(V) = ⊕_{W ⊆ V} X(V/W)`; the block `X(V'/W') → X(V/W)` is induced by
    /// `V/W ↪ V'/W'` when `f⁻¹(W') = W`.
    pub fn varpi(&self, x: &LinRep) -> Result<LinRep, HomAlgError> {
        self.expect_module(x, &self.inj, "injections")?;
        let me = self.clone();
        let xs = x.clone();
        let size = |n: usize, i: usize| x.dim(n - self.subspaces[n][i].dim());
        let rep = self.block_rep(size, move |m, i2| {
            let (n, n2) = (me.all.src(m), me.all.tgt(m));
            let f = me.mat(&me.all, m);
            let w2 = &me.subspaces[n2][i2];
            let w = Subspace::preimage(&f, w2).expect("shapes agree");
            let i = me.index[n][&w.key()];
            let q = &me.quotients[me.first_pair[n] + i];
            let q2 = &me.quotients[me.first_pair[n2] + i2];
            let fbar = me.induced_on_quotients(q, q2, &f);
            let g = Self::find(&me.inj, fbar.cols(), fbar.rows(), &fbar);
            vec![(i, xs.action(g).clone())]
        });
        Ok(rep.with_label(format!("varpi({})", x.label().unwrap_or("X"))))
    }

    /// The block `W = 0` of `ω(X)(V)` as a family `X(V, 0) ⇄ ω(X)(V)`: the
    /// projection onto it is natural, the inclusion generally is not (the zero
    /// block of `V'` also feeds every `W ⊆ ker f`).
    fn zero_block(&self, x: &LinRep, n: usize) -> (usize, usize) {
        let zero = self.index[n][&Subspace::zero(self.field, n).key()];
        let off = (0..zero).map(|i| x.dim(self.first_pair[n] + i)).sum();
        (off, x.dim(self.first_pair[n] + zero))
    }

    /// The projection `ω(X) ↠ λ(X)` onto the block `W = 0`.
    pub fn omega_onto_lambda(&self, x: &LinRep) -> Result<NatTrans, HomAlgError> {
        let (o, l) = (self.omega(x)?, self.lambda(x)?);
        let k = self.field;
        let components = (0..=self.dmax)
            .map(|n| {
                let (off, len) = self.zero_block(x, n);
                let cols = (0..o.dim(n))
                    .map(|j| if (off..off + len).contains(&j) { SpVec::unit((j - off) as u32) } else { SpVec::new() })
                    .collect();
                LinMap { field: k, rows: len, cols }
            })
            .collect();
        Ok(NatTrans::new(o, l, components)?)
    }

    /// The inclusion `λ(X) → ω(X)` as the block `W = 0`, as a family of maps;
    /// see [`GrassmannFamily::omega_onto_lambda`] for the natural direction.
    pub fn lambda_into_omega(&self, x: &LinRep) -> Result<NatTrans, HomAlgError> {
        let (l, o) = (self.lambda(x)?, self.omega(x)?);
        let k = self.field;
        let components = (0..=self.dmax)
            .map(|n| {
                let (off, len) = self.zero_block(x, n);
                LinMap { field: k, rows: o.dim(n), cols: (0..len).map(|j| SpVec::unit((off + j) as u32)).collect() }
            })
            .collect();
        Ok(NatTrans::new(l, o, components)?)
    }

    /// The triangular isomorphism `ϖδ(A) → ωκ(A)`: the block `A(V/W') → A(V/W)`
    /// is `A` of the projection `V/W ↠ V/W'` whenever `W ⊆ W'`.
    pub fn quotient_exchange(&self, a: &LinRep) -> Result<NatTrans, HomAlgError> {
        let src = self.varpi(&self.delta(a)?)?;
        let tgt = self.omega(&self.kappa(a)?)?;
        let k = self.field;
        let mut components = Vec::with_capacity(self.dmax + 1);
        for n in 0..=self.dmax {
            let ws = &self.subspaces[n];
            let offs = self.offsets(n, |i| a.dim(n - ws[i].dim()));
            let mut cols: Vec<Vec<(u32, Elem)>> = vec![Vec::new(); src.dim(n)];
            for (i2, w2) in ws.iter().enumerate() {
                for (i, w) in ws.iter().enumerate() {
                    if !w2.contains_subspace(w) {
                        continue;
                    }
                    let q = &self.quotients[self.first_pair[n] + i];
                    let q2 = &self.quotients[self.first_pair[n] + i2];
                    let p = q2.projection.mul_unchecked(&q.section);
                    let block = a.action(Self::find(&self.all, p.cols(), p.rows(), &p));
                    for (j, col) in block.cols.iter().enumerate() {
                        cols[offs[i2] + j].extend(col.entries().iter().map(|&(r, x)| (offs[i] as u32 + r, x)));
                    }
                }
            }
            components.push(LinMap { field: k, rows: tgt.dim(n), cols: cols.into_iter().map(|c| SpVec::from_pairs(k, c)).collect() });
        }
        Ok(NatTrans::new(src, tgt, components)?)
    }
}
