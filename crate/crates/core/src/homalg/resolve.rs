use rayon::prelude::*;
use serde::Serialize;

use super::complex::ChainComplex;
use super::free::{evaluate_map, FreeModule, Module};
use super::HomAlgError;
use crate::exactla::{Elem, Field, LinMap, SpEchelon, SpMat, SpVec};
use crate::fincat::{FinCat, MorId, ObjId};
use crate::funrep::{LinRep, Variance};

/// Order in which objects are swept when choosing generators.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SweepOrder {
    Ascending,
    Descending,
    Custom(Vec<ObjId>),
}

impl SweepOrder {
    fn objects(&self, n: usize) -> Vec<ObjId> {
        match self {
            SweepOrder::Ascending => (0..n).collect(),
            SweepOrder::Descending => (0..n).rev().collect(),
            SweepOrder::Custom(v) => v.clone(),
        }
    }
}

#[derive(Clone, Debug)]
pub struct ResolveOptions {
    pub order: SweepOrder,
    /// Bound on `Σ_x dim T_n(x)` for any single term.
    pub max_term_dim: usize,
}

impl Default for ResolveOptions {
    fn default() -> ResolveOptions {
        ResolveOptions { order: SweepOrder::Ascending, max_term_dim: 50_000_000 }
    }
}

/// A resolution `⋯ → T_1 → T_0 → F` by sums of standard projectives.
#[derive(Clone, Debug)]
pub struct Resolution {
    cat: FinCat,
    field: Field,
    terms: Vec<FreeModule>,
    /// `images[n][g]`: image of generator `g` of `T_n`, in `T_{n−1}(c_g)` (or `F(c_g)`
    /// for `n = 0`).
    images: Vec<Vec<SpVec>>,
    /// A kernel vanished, so every later term is zero.
    finite: bool,
    target: LinRep,
}

impl Resolution {
    pub fn cat(&self) -> &FinCat {
        &self.cat
    }
    pub fn field(&self) -> Field {
        self.field
    }
    /// Number of computed terms minus one.
    pub fn length(&self) -> usize {
        self.terms.len() - 1
    }
    pub fn is_finite(&self) -> bool {
        self.finite
    }
    pub fn term(&self, n: usize) -> Option<&FreeModule> {
        self.terms.get(n)
    }
    pub fn images(&self, n: usize) -> &[SpVec] {
        &self.images[n]
    }
    pub fn target(&self) -> &LinRep {
        &self.target
    }

    /// Multiplicity of each `P_c` in each term.
    pub fn multiplicities(&self) -> Vec<Vec<usize>> {
        self.terms.iter().map(|t| t.multiplicities()).collect()
    }

    /// `d_n` at object `x`, `T_n(x) → T_{n−1}(x)`; for `n = 0` the augmentation.
    pub fn differential_at(&self, n: usize, x: ObjId) -> LinMap {
        if n == 0 {
            evaluate_map(&self.terms[0], &self.images[0], &self.target, x)
        } else {
            evaluate_map(&self.terms[n], &self.images[n], &self.terms[n - 1], x)
        }
    }

    /// Exactness of the realized complex at every object, including surjectivity of the
    /// augmentation, in degrees below the top one.
    pub fn verify_exact(&self) -> bool {
        let cat = &self.cat;
        (0..cat.num_objects()).into_par_iter().all(|x| {
            let maps: Vec<LinMap> = (0..=self.length()).map(|n| self.differential_at(n, x)).collect();
            let ranks: Vec<usize> = maps.iter().map(super::complex::rank_of).collect();
            if ranks[0] != self.target.dim(x) {
                return false;
            }
            (0..self.length()).all(|n| Module::dim(&self.terms[n], x) - ranks[n] == ranks[n + 1])
                && (1..maps.len()).all(|n| maps[n - 1].compose(&maps[n]).cols.iter().all(|c| c.is_zero()))
        })
    }
}

/// Kernel of a map at one object, in free-coordinate form: vector `s` has a 1 at its
/// own free column and otherwise only pivot entries.
struct Kernel {
    slot: Vec<u32>,
    basis: Vec<SpVec>,
}

impl Kernel {
    fn full(dim: usize) -> Kernel {
        Kernel { slot: (0..dim as u32).collect(), basis: (0..dim as u32).map(SpVec::unit).collect() }
    }

    fn of(map: &LinMap) -> Kernel {
        let n = map.ncols();
        let rows = map.transpose();
        let mut m = SpMat::new(map.field, n);
        for r in rows.cols {
            if !r.is_zero() {
                m.push_row(r);
            }
        }
        let kv = m.eliminate().kernel_vectors();
        let mut slot = vec![u32::MAX; n];
        let mut basis = Vec::with_capacity(kv.len());
        for (s, (j, v)) in kv.into_iter().enumerate() {
            slot[j as usize] = s as u32;
            basis.push(v);
        }
        Kernel { slot, basis }
    }

    fn dim(&self) -> usize {
        self.basis.len()
    }

    fn project(&self, v: &SpVec) -> SpVec {
        let e: Vec<(u32, Elem)> =
            v.entries().iter().filter_map(|&(i, x)| (self.slot[i as usize] != u32::MAX).then(|| (self.slot[i as usize], x))).collect();
        let mut e = e;
        e.sort_unstable_by_key(|p| p.0);
        SpVec::from_sorted(e)
    }
}

/// Chooses generators at objects in sweep order so that the submodule they generate
/// fills the kernels. Closure runs over the category's generating morphisms.
fn cover(cat: &FinCat, field: Field, ambient: &dyn Module, kernels: &[Kernel], order: &[ObjId]) -> Vec<(ObjId, SpVec)> {
    let mut out_gens: Vec<Vec<MorId>> = vec![Vec::new(); cat.num_objects()];
    for &g in cat.generators() {
        if !cat.is_identity(g) {
            out_gens[cat.src(g)].push(g);
        }
    }
    let mut ech: Vec<SpEchelon> = kernels.iter().map(|k| SpEchelon::new(field, k.dim())).collect();
    let mut chosen = Vec::new();
    for &x in order {
        let target = kernels[x].dim();
        for s in 0..target {
            if ech[x].rank() == target {
                break;
            }
            if ech[x].contains(&SpVec::unit(s as u32)) {
                continue;
            }
            let v = kernels[x].basis[s].clone();
            chosen.push((x, v.clone()));
            ech[x].insert(&SpVec::unit(s as u32));
            let mut queue = vec![(x, v)];
            while let Some((y, w)) = queue.pop() {
                for &g in &out_gens[y] {
                    let z = cat.tgt(g);
                    if ech[z].is_full() {
                        continue;
                    }
                    let u = ambient.transport(&w, g);
                    if u.is_zero() {
                        continue;
                    }
                    if ech[z].insert(&kernels[z].project(&u)).is_some() {
                        queue.push((z, u));
                    }
                }
            }
        }
    }
    chosen
}

/// Resolves `F` to `length` (terms `T_0..T_length`). Contravariant representations are
/// resolved as covariant ones on the opposite category.
pub fn resolve(f: &LinRep, length: usize, opts: &ResolveOptions) -> Result<Resolution, HomAlgError> {
    let f = if f.variance() == Variance::Contravariant { f.on_opposite() } else { f.clone() };
    let cat = f.cat().clone();
    let field = f.field();
    let order = opts.order.objects(cat.num_objects());
    let mut sorted = order.clone();
    sorted.sort_unstable();
    if sorted != (0..cat.num_objects()).collect::<Vec<_>>() {
        return Err(HomAlgError::Invalid("sweep order must list every object once".into()));
    }
    let mut res = Resolution { cat: cat.clone(), field, terms: Vec::new(), images: Vec::new(), finite: false, target: f.clone() };
    for n in 0..=length {
        let kernels: Vec<Kernel> = if n == 0 {
            (0..cat.num_objects()).map(|x| Kernel::full(f.dim(x))).collect()
        } else {
            let total: usize = (0..cat.num_objects()).map(|x| Module::dim(&res.terms[n - 1], x)).sum();
            if total > opts.max_term_dim {
                return Err(HomAlgError::ResourceCap { achieved: n - 1, partial: Box::new(res) });
            }
            (0..cat.num_objects()).into_par_iter().map(|x| Kernel::of(&res.differential_at(n - 1, x))).collect()
        };
        let gens = if n == 0 {
            cover(&cat, field, &f, &kernels, &order)
        } else {
            cover(&cat, field, &res.terms[n - 1].clone(), &kernels, &order)
        };
        let term = FreeModule::new(&cat, field, gens.iter().map(|g| g.0).collect());
        res.images.push(gens.into_iter().map(|g| g.1).collect());
        res.terms.push(term);
        if res.terms[n].num_gens() == 0 {
            res.finite = true;
            break;
        }
    }
    Ok(res)
}

/// `X ⊗_C T_•` for `X` contravariant on the resolution's category: degree `n` is
/// `⊕_g X(c_g)`, degrees `0..=top` (zero beyond a finite resolution).
pub fn pair_complex(x: &LinRep, res: &Resolution, top: usize) -> Result<ChainComplex, HomAlgError> {
    if x.variance() != Variance::Contravariant {
        return Err(HomAlgError::Invalid("the paired representation must be contravariant".into()));
    }
    if x.cat().content_hash() != res.cat.content_hash() || x.cat().is_opposite() != res.cat.is_opposite() {
        return Err(HomAlgError::CategoryMismatch);
    }
    if top > res.length() && !res.finite {
        return Err(HomAlgError::Invalid(format!("resolution has length {}, need {top}", res.length())));
    }
    let k = res.field;
    let empty = FreeModule::new(&res.cat, k, Vec::new());
    let term = |n: usize| res.terms.get(n).unwrap_or(&empty);
    let offsets = |t: &FreeModule| {
        let mut o = vec![0usize];
        for &c in t.gens() {
            o.push(o.last().unwrap() + x.dim(c));
        }
        o
    };
    let dims: Vec<usize> = (0..=top).map(|n| *offsets(term(n)).last().unwrap()).collect();
    let mut diffs = Vec::new();
    for n in 1..=top {
        let (t, prev) = (term(n), term(n - 1));
        let prev_off = offsets(prev);
        let cols: Vec<SpVec> = (0..t.num_gens())
            .into_par_iter()
            .flat_map_iter(|g| {
                let c = t.gens()[g];
                let img = &res.images[n][g];
                let terms: Vec<(usize, MorId, Elem)> = img
                    .entries()
                    .iter()
                    .map(|&(i, coef)| {
                        let (h, m) = prev.locate(c, i as usize);
                        (h, m, coef)
                    })
                    .collect();
                let prev_off = &prev_off;
                (0..x.dim(c)).map(move |j| {
                    let mut pairs = Vec::new();
                    for &(h, m, coef) in &terms {
                        for &(r, y) in x.action(m).cols[j].entries() {
                            pairs.push((prev_off[h] as u32 + r, k.mul(coef, y)));
                        }
                    }
                    SpVec::from_pairs(k, pairs)
                })
            })
            .collect();
        diffs.push(LinMap { field: k, rows: dims[n - 1], cols });
    }
    Ok(ChainComplex::new(k, dims, diffs))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Side {
    /// Resolve the contravariant argument.
    Left,
    /// Resolve the covariant argument.
    Right,
}

#[derive(Clone, Debug, Serialize)]
pub struct TorResult {
    pub dims: Vec<usize>,
    /// Multiplicity of each standard projective in each term used.
    pub multiplicities: Vec<Vec<usize>>,
}

fn check_pair(g: &LinRep, f: &LinRep) -> Result<(), HomAlgError> {
    if g.variance() != Variance::Contravariant || f.variance() != Variance::Covariant {
        return Err(HomAlgError::Invalid("Tor takes a contravariant and a covariant representation".into()));
    }
    if g.cat().content_hash() != f.cat().content_hash() || g.cat().is_opposite() != f.cat().is_opposite() {
        return Err(HomAlgError::CategoryMismatch);
    }
    Ok(())
}

/// `Tor^C_i(G, F)` for `i ≤ max_degree`.
pub fn tor(g: &LinRep, f: &LinRep, max_degree: usize, side: Side, opts: &ResolveOptions) -> Result<TorResult, HomAlgError> {
    check_pair(g, f)?;
    let (resolved, other) = match side {
        Side::Right => (f.clone(), g.clone()),
        Side::Left => (g.on_opposite(), f.on_opposite()),
    };
    let res = resolve(&resolved, max_degree + 1, opts)?;
    tor_with(&other, &res, max_degree)
}

/// Tor from an existing resolution; `other` is contravariant on the resolution's category.
pub fn tor_with(other: &LinRep, res: &Resolution, max_degree: usize) -> Result<TorResult, HomAlgError> {
    let cx = pair_complex(other, res, max_degree + 1)?;
    let h = cx.homology();
    Ok(TorResult { dims: h.dims, multiplicities: res.multiplicities() })
}

/// `H_*(C; F) = Tor^C_*(k, F)`.
pub fn category_homology(f: &LinRep, max_degree: usize, opts: &ResolveOptions) -> Result<TorResult, HomAlgError> {
    let k = LinRep::constant(f.cat(), f.field(), Variance::Contravariant, 1);
    tor(&k, f, max_degree, Side::Right, opts)
}

#[derive(Clone, Debug, Serialize)]
pub struct TensorProduct {
    pub dim: usize,
    /// `(object, index in G, index in F)` of basis representatives.
    pub basis: Vec<(ObjId, usize, usize)>,
}

/// `G ⊗_C F` as the cokernel of the relations `G(f)x ⊗ y − x ⊗ F(f)y` over generating
/// morphisms `f`.
pub fn tensor_over_cat(g: &LinRep, f: &LinRep) -> Result<TensorProduct, HomAlgError> {
    check_pair(g, f)?;
    let c = g.cat();
    let k = g.field();
    let mut off = vec![0usize];
    for a in 0..c.num_objects() {
        off.push(off[a] + g.dim(a) * f.dim(a));
    }
    let idx = |a: ObjId, p: u32, q: u32| (off[a] + p as usize * f.dim(a) + q as usize) as u32;
    let mut rel = SpMat::new(k, off[c.num_objects()]);
    for &m in c.generators() {
        let (i, j) = (c.src(m), c.tgt(m));
        let (gm, fm) = (g.action(m), f.action(m));
        for p in 0..g.dim(j) {
            for q in 0..f.dim(i) {
                let mut pairs: Vec<(u32, Elem)> = gm.cols[p].entries().iter().map(|&(r, x)| (idx(i, r, q as u32), x)).collect();
                pairs.extend(fm.cols[q].entries().iter().map(|&(r, y)| (idx(j, p as u32, r), k.neg(y))));
                let v = SpVec::from_pairs(k, pairs);
                if !v.is_zero() {
                    rel.push_row(v);
                }
            }
        }
    }
    let e = rel.eliminate();
    let basis = e
        .free_columns()
        .into_iter()
        .map(|col| {
            let a = off.partition_point(|&s| s <= col as usize) - 1;
            let local = col as usize - off[a];
            (a, local / f.dim(a), local % f.dim(a))
        })
        .collect::<Vec<_>>();
    Ok(TensorProduct { dim: basis.len(), basis })
}

/// Cokernel of `⊕_r P_{c_r} → ⊕_g P_{d_g}`, relation `r` being an element of
/// `(⊕_g P_{d_g})(c_r)`: a finitely presented covariant functor with explicit quotient
/// bases.
pub fn presented(cat: &FinCat, field: Field, gens: Vec<ObjId>, relations: &[(ObjId, SpVec)]) -> LinRep {
    let free = FreeModule::new(cat, field, gens);
    let rel_mod = FreeModule::new(cat, field, relations.iter().map(|r| r.0).collect());
    let images: Vec<SpVec> = relations.iter().map(|r| r.1.clone()).collect();
    let quotients: Vec<(crate::exactla::Elimination, Vec<u32>)> = (0..cat.num_objects())
        .into_par_iter()
        .map(|x| {
            let m = evaluate_map(&rel_mod, &images, &free, x);
            let mut s = SpMat::new(field, Module::dim(&free, x));
            for c in m.cols {
                if !c.is_zero() {
                    s.push_row(c);
                }
            }
            let e = s.eliminate();
            let free_cols = e.free_columns();
            (e, free_cols)
        })
        .collect();
    let dims = quotients.iter().map(|q| q.1.len()).collect();
    let (fm, q) = (free.clone(), std::sync::Arc::new(quotients));
    LinRep::from_fn(cat.clone(), field, Variance::Covariant, dims, move |m| {
        let (a, b) = (fm.cat().src(m), fm.cat().tgt(m));
        let (_, src_free) = &q[a];
        let (elim, dst_free) = &q[b];
        let mut slot = rustc_hash::FxHashMap::default();
        for (s, &c) in dst_free.iter().enumerate() {
            slot.insert(c, s as u32);
        }
        let cols = src_free
            .iter()
            .map(|&c| {
                let v = fm.transport(&SpVec::unit(c), m);
                // reduce modulo the relation rows: pivot entries are rewritten in terms of free columns
                let mut acc: Vec<(u32, Elem)> = Vec::new();
                for &(i, x) in v.entries() {
                    if let Some(&s) = slot.get(&i) {
                        acc.push((s, x));
                    }
                }
                let mut out = SpVec::from_pairs(field, acc);
                for (pc, row) in &elim.pivots {
                    let x = v.get(*pc);
                    if x == 0 {
                        continue;
                    }
                    // e_pc ≡ −Σ_{j free} row[j] e_j
                    let pairs: Vec<(u32, Elem)> =
                        row.entries().iter().filter(|e| e.0 != *pc).map(|&(j, y)| (slot[&j], field.neg(y))).collect();
                    out = out.axpy(field, x, &SpVec::from_pairs(field, pairs));
                }
                out
            })
            .collect();
        LinMap { field, rows: dst_free.len(), cols }
    })
}
