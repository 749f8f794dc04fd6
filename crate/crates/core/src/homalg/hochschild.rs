use super::resolve::{tor, ResolveOptions, Side, TorResult};
use super::HomAlgError;
use crate::exactla::{Field, LinMap, SpVec};
use crate::fincat::{product_cat, FinCat};
use crate::funrep::{LinRep, Variance};

/// `C^op × C`, the base of bifunctors.
pub fn enveloping_cat(c: &FinCat) -> Result<FinCat, HomAlgError> {
    Ok(product_cat(&c.opposite(), c)?)
}

/// `(i, j) ↦ k[Hom_C(j, i)]`, contravariant on `C^op × C`: for `(f, g)` with
/// `f : i' → i` and `g : j → j'` in `C`, `h ↦ f ∘ h ∘ g`.
pub fn hom_bimodule(c: &FinCat, env: &FinCat, field: Field) -> LinRep {
    let n = c.num_objects();
    let dims = (0..env.num_objects()).map(|s| c.hom(s % n, s / n).len()).collect();
    let (c2, e2) = (c.clone(), env.clone());
    LinRep::from_fn(env.clone(), field, Variance::Contravariant, dims, move |m| {
        let ids = e2.decode_ids(m);
        let (f, g) = (ids[0], ids[1]);
        let (s2, s) = (e2.tgt(m), e2.src(m));
        let hom = c2.hom(s2 % n, s2 / n);
        let cols = hom.map(|h| SpVec::unit(c2.local_index(c2.compose(f, c2.compose(h, g))) as u32)).collect();
        LinMap { field, rows: c2.hom(s % n, s / n).len(), cols }
    })
    .with_label("k[Hom]")
}

/// `(i, j) ↦ k[Hom_C(i, j)]`, covariant on `C^op × C`.
pub fn hom_bifunctor(c: &FinCat, env: &FinCat, field: Field) -> LinRep {
    let n = c.num_objects();
    let dims = (0..env.num_objects()).map(|s| c.hom(s / n, s % n).len()).collect();
    let (c2, e2) = (c.clone(), env.clone());
    LinRep::from_fn(env.clone(), field, Variance::Covariant, dims, move |m| {
        let ids = e2.decode_ids(m);
        let (f, g) = (ids[0], ids[1]);
        let (s, t) = (e2.src(m), e2.tgt(m));
        let cols = c2.hom(s / n, s % n).map(|h| SpVec::unit(c2.local_index(c2.compose(g, c2.compose(h, f))) as u32)).collect();
        LinMap { field, rows: c2.hom(t / n, t % n).len(), cols }
    })
    .with_label("k[Hom]")
}

/// `F ⊠ G : (i, j) ↦ F(i) ⊗ G(j)` on `C^op × C`, from `F` contravariant and `G`
/// covariant on `C`.
pub fn external_tensor(f: &LinRep, g: &LinRep, env: &FinCat) -> Result<LinRep, HomAlgError> {
    if f.variance() != Variance::Contravariant || g.variance() != Variance::Covariant {
        return Err(HomAlgError::Invalid("F ⊠ G takes a contravariant F and a covariant G".into()));
    }
    if f.cat().content_hash() != g.cat().content_hash() || env.content_hash() != enveloping_cat(g.cat())?.content_hash() {
        return Err(HomAlgError::CategoryMismatch);
    }
    let n = g.cat().num_objects();
    let dims = (0..env.num_objects()).map(|s| f.dim(s / n) * g.dim(s % n)).collect();
    let (f2, g2, e2) = (f.clone(), g.clone(), env.clone());
    let rep = LinRep::from_fn(env.clone(), f.field(), Variance::Covariant, dims, move |m| {
        let ids = e2.decode_ids(m);
        f2.action(ids[0]).kron(g2.action(ids[1]))
    });
    Ok(rep)
}

/// `HH_*(C; B) = Tor^{C^op × C}_*(k[Hom_{C^op}(−, −)], B)`, `B` covariant on
/// [`enveloping_cat`]`(C)`.
pub fn hochschild(c: &FinCat, b: &LinRep, max_degree: usize, opts: &ResolveOptions) -> Result<TorResult, HomAlgError> {
    let env = b.cat().clone();
    if env.content_hash() != enveloping_cat(c)?.content_hash() {
        return Err(HomAlgError::CategoryMismatch);
    }
    tor(&hom_bimodule(c, &env, b.field()), b, max_degree, Side::Right, opts)
}
