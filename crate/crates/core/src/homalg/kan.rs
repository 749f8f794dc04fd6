use super::free::FreeModule;
use super::resolve::{presented, resolve, tor_with, ResolveOptions};
use super::HomAlgError;
use crate::exactla::{Elem, LinMap, SpVec};
use crate::fincat::{elements_cat, CatError, FinCat, MonFunctor, ObjId, SetRep};
use crate::funrep::{LinRep, Variance};

#[derive(Clone, Debug)]
pub struct KanExtension {
    /// `Q_!(F)` as a contravariant representation of the target category.
    pub degree0: LinRep,
    /// `dims[i][a] = dim L_iQ_!(F)(a)`.
    pub dims: Vec<Vec<usize>>,
}

/// Left Kan extension of a contravariant `F` along `Q : D → C`, with its left
/// derived functors `L_iQ_!(F)(a) = Tor^D_i(F, Q*P_a)` up to `derived_degree`.
pub fn kan_extension(q: &MonFunctor, f: &LinRep, derived_degree: usize, opts: &ResolveOptions) -> Result<KanExtension, HomAlgError> {
    let (d, c) = (q.source(), q.target());
    if f.variance() != Variance::Contravariant {
        return Err(HomAlgError::Invalid("Kan extension takes a contravariant module".into()));
    }
    if f.cat().content_hash() != d.content_hash() || f.cat().is_opposite() != d.is_opposite() {
        return Err(HomAlgError::CategoryMismatch);
    }
    let k = f.field();
    let res = resolve(f, derived_degree + 1, opts)?;
    let mut dims = vec![vec![0; c.num_objects()]; derived_degree + 1];
    for a in 0..c.num_objects() {
        let pa = LinRep::projective(c, k, a).restrict(q)?.on_opposite();
        for (i, v) in tor_with(&pa, &res, derived_degree)?.dims.into_iter().enumerate() {
            dims[i][a] = v;
        }
    }
    // Q_! sends P^{D^op}_b to P^{C^op}_{Q b}; push the presentation T_1 → T_0 forward
    let (c_op, q_op) = (c.opposite(), q.opposite());
    let t0 = res.term(0).expect("a resolution has a degree-0 term");
    let gens: Vec<ObjId> = t0.gens().iter().map(|&b| q.on_object(b)).collect();
    let target_free = FreeModule::new(&c_op, k, gens.clone());
    let relations: Vec<(ObjId, SpVec)> = match res.term(1) {
        Some(t1) => t1
            .gens()
            .iter()
            .zip(res.images(1))
            .map(|(&r, img)| {
                let qr = q.on_object(r);
                let pairs: Vec<(u32, Elem)> = img
                    .entries()
                    .iter()
                    .map(|&(i, x)| {
                        let (g, m) = t0.locate(r, i as usize);
                        (target_free.index(qr, g, q_op.on_morphism(m)), x)
                    })
                    .collect();
                (qr, SpVec::from_pairs(k, pairs))
            })
            .collect(),
        None => Vec::new(),
    };
    let degree0 = presented(&c_op, k, gens, &relations).on_opposite();
    Ok(KanExtension { degree0, dims })
}

/// The category of elements `C_X` of a contravariant set functor, with its
/// forgetful functor to `C`.
#[derive(Clone, Debug)]
pub struct CategoryOfElements {
    cat: FinCat,
    set: SetRep,
    first: Vec<ObjId>,
    forgetful: MonFunctor,
}

impl CategoryOfElements {
    pub fn new(set: SetRep) -> Result<CategoryOfElements, HomAlgError> {
        if !set.contravariant {
            return Err(HomAlgError::Invalid("Ω_X needs a contravariant set functor".into()));
        }
        set.validate()?;
        let cat = elements_cat(&set)?;
        let base = set.cat.clone();
        let mut first = Vec::with_capacity(base.num_objects());
        let mut acc = 0;
        for &s in &set.sizes {
            first.push(acc);
            acc += s;
        }
        let obj = (0..base.num_objects()).flat_map(|i| std::iter::repeat_n(i, set.sizes[i])).collect();
        let cat2 = cat.clone();
        let forgetful = MonFunctor::from_fn(cat.clone(), base, obj, |m| Some(cat2.decode_ids(m)[0]))?;
        Ok(CategoryOfElements { cat, set, first, forgetful })
    }

    pub fn cat(&self) -> &FinCat {
        &self.cat
    }
    pub fn base(&self) -> &FinCat {
        &self.set.cat
    }
    pub fn forgetful(&self) -> &MonFunctor {
        &self.forgetful
    }
    /// The object `(i, x)`.
    pub fn object(&self, i: ObjId, x: usize) -> ObjId {
        self.first[i] + x
    }

    /// `Ω_X(F)(i) = ⊕_{x ∈ X(i)} F(i, x)`; for `f : i → j` the block
    /// `F(j, y) → F(i, x)` is `F(f)` when `X(f)(y) = x`.
    pub fn omega(&self, f: &LinRep) -> Result<LinRep, HomAlgError> {
        if f.variance() != Variance::Contravariant {
            return Err(HomAlgError::Invalid("Ω_X takes a contravariant module".into()));
        }
        if f.cat().content_hash() != self.cat.content_hash() || f.cat().is_opposite() {
            return Err(HomAlgError::CategoryMismatch);
        }
        let base = self.base().clone();
        let offsets: Vec<Vec<usize>> = (0..base.num_objects())
            .map(|i| {
                let mut o = vec![0];
                for x in 0..self.set.sizes[i] {
                    o.push(o[x] + f.dim(self.object(i, x)));
                }
                o
            })
            .collect();
        let dims = offsets.iter().map(|o| *o.last().unwrap()).collect();
        let (me, f2, field) = (self.clone(), f.clone(), f.field());
        let rep = LinRep::from_fn(base.clone(), field, Variance::Contravariant, dims, move |m| {
            let (i, j) = (base.src(m), base.tgt(m));
            let key = (m as u32).to_le_bytes();
            let mut cols = Vec::with_capacity(offsets[j].last().copied().unwrap_or(0));
            for y in 0..me.set.sizes[j] {
                let x = me.set.maps[m][y] as usize;
                let lifted = me.cat.find(me.object(i, x), me.object(j, y), &key).expect("element morphism exists");
                let r0 = offsets[i][x] as u32;
                cols.extend(
                    f2.action(lifted).cols.iter().map(|c| SpVec::from_sorted(c.entries().iter().map(|&(r, v)| (r0 + r, v)).collect())),
                );
            }
            LinMap { field, rows: *offsets[i].last().unwrap(), cols }
        });
        Ok(rep.with_label(format!("Omega({})", f.label().unwrap_or("F"))))
    }
}

/// The set functor behind a linearized one, when every morphism sends basis
/// vectors to basis vectors.
pub fn underlying_set_functor(rep: &LinRep) -> Result<SetRep, HomAlgError> {
    let c = rep.cat();
    let maps = c
        .morphisms()
        .map(|m| {
            rep.action(m)
                .cols
                .iter()
                .map(|col| match col.entries() {
                    [(i, 1)] => Ok(*i),
                    _ => Err(HomAlgError::Cat(CatError::Functor(format!("morphism {m} does not act by a map of basis vectors")))),
                })
                .collect::<Result<Vec<u32>, _>>()
        })
        .collect::<Result<Vec<_>, _>>()?;
    Ok(SetRep { cat: c.clone(), contravariant: rep.variance() == Variance::Contravariant, sizes: rep.dims().to_vec(), maps })
}
