use std::sync::Arc;

use super::MobiusError;
use crate::exactla::{Elem, LinMap, MatF, SpEchelon, SpVec, Subspace};
use crate::fincat::FinCat;
use crate::funrep::{LinRep, NatTrans, Variance};

fn expect_sets(cat: &FinCat, pointed: bool, what: &str) -> Result<(), MobiusError> {
    let ok = cat.field().is_none() && !cat.is_opposite() && cat.objects().iter().enumerate().all(|(i, o)| o.size == i && o.points() == i + pointed as usize);
    if ok {
        Ok(())
    } else {
        Err(MobiusError::Invalid(format!("{what} must be the skeleton of finite {}sets of sizes 0..n", if pointed { "pointed " } else { "" })))
    }
}

/// Cokernel data at one object: `F(E_+) / Σ_e im F(i_e)` with a section onto
/// the complement `∩_e ker F(r_e)`.
#[derive(Clone, Debug)]
struct CrossEffectAt {
    images: SpEchelon,
    free: Vec<u32>,
    /// Columns: the complement vectors lifting each cokernel basis vector.
    section: Vec<SpVec>,
}

impl CrossEffectAt {
    fn project(&self, v: &SpVec) -> SpVec {
        let r = self.images.reduce(v);
        SpVec::from_sorted(
            self.free
                .iter()
                .enumerate()
                .filter_map(|(j, &c)| {
                    let x = r.get(c);
                    (x != 0).then_some((j as u32, x))
                })
                .collect(),
        )
    }
}

/// `i_e : (E∖e)_+ → E_+` and `r_e : E_+ → (E∖e)_+` in the skeleton, for `E = n`.
fn inclusion_key(n: usize, e: usize) -> Vec<u8> {
    std::iter::once(0).chain((1..n).map(|x| if x <= e { x as u8 } else { x as u8 + 1 })).collect()
}
fn retraction_key(n: usize, e: usize) -> Vec<u8> {
    std::iter::once(0)
        .chain((1..=n).map(|x| match x.cmp(&(e + 1)) {
            std::cmp::Ordering::Less => x as u8,
            std::cmp::Ordering::Equal => 0,
            std::cmp::Ordering::Greater => x as u8 - 1,
        }))
        .collect()
}

fn cross_effect_at(f: &LinRep, n: usize) -> Result<CrossEffectAt, MobiusError> {
    let gamma = f.cat();
    let k = f.field();
    let dim = f.dim(n);
    let mut images = SpEchelon::new(k, dim);
    let mut stacked: Vec<Vec<Elem>> = Vec::new();
    for e in 0..n {
        let i_e = gamma.find(n - 1, n, &inclusion_key(n, e)).expect("inclusion exists");
        for c in &f.action(i_e).cols {
            images.insert(c);
        }
        let r_e = gamma.find(n, n - 1, &retraction_key(n, e)).expect("retraction exists");
        let dense = f.action(r_e).to_dense();
        stacked.extend((0..dense.rows()).map(|r| dense.row(r).to_vec()));
    }
    let free: Vec<u32> = (0..dim as u32).filter(|&c| !images.has_lead(c)).collect();
    let complement = if stacked.is_empty() { Subspace::full(k, dim) } else { Subspace::kernel(&MatF::from_rows(k, dim, &stacked)) };
    let proto = CrossEffectAt { images, free, section: Vec::new() };
    let basis: Vec<SpVec> = (0..complement.dim()).map(|r| SpVec::from_dense(complement.basis().row(r))).collect();
    // π restricted to the complement is invertible; its inverse gives the section
    let q = proto.free.len();
    if basis.len() != q {
        return Err(MobiusError::Check(format!("cross effect at {n}: complement of dim {} vs cokernel of dim {q}", basis.len())));
    }
    let phi = MatF::from_cols(k, q, &basis.iter().map(|b| proto.project(b).to_dense(q)).collect::<Vec<_>>());
    let inv = phi.inverse().map_err(|_| MobiusError::Check(format!("cross effect at {n}: complement does not map onto the cokernel")))?;
    let section = (0..q)
        .map(|j| {
            let coeffs = inv.col(j);
            basis.iter().zip(coeffs).fold(SpVec::new(), |acc, (b, c)| acc.axpy(k, c, b))
        })
        .collect();
    Ok(CrossEffectAt { section, ..proto })
}

/// `cr(F)(E) = Coker(⊕_{e ∈ E} F((E∖e)_+) → F(E_+))` as a representation of Ω.
/// A surjection `σ` acts through `F(σ_+)` on the complement `∩_e ker F(r_e)`,
/// which the projection identifies with the cokernel.
pub fn pirashvili_cr(f: &LinRep, omega: &FinCat) -> Result<LinRep, MobiusError> {
    let gamma = f.cat();
    expect_sets(gamma, true, "the source category")?;
    expect_sets(omega, false, "Ω")?;
    if f.variance() != Variance::Covariant {
        return Err(MobiusError::Invalid("cr takes a covariant Γ-module".into()));
    }
    if omega.num_objects() > gamma.num_objects() {
        return Err(MobiusError::Invalid("Ω is larger than the truncation of Γ".into()));
    }
    let data: Vec<CrossEffectAt> = (0..omega.num_objects()).map(|n| cross_effect_at(f, n)).collect::<Result<_, _>>()?;
    let dims = data.iter().map(|d| d.free.len()).collect();
    let (f2, g2, o2, data) = (f.clone(), gamma.clone(), omega.clone(), Arc::new(data));
    let k = f.field();
    let rep = LinRep::from_fn(omega.clone(), k, Variance::Covariant, dims, move |m| {
        let (a, b) = (o2.src(m), o2.tgt(m));
        let key: Vec<u8> = std::iter::once(0).chain(o2.set_map(m).expect("set map").iter().map(|&x| x + 1)).collect();
        let plus = g2.find(a, b, &key).expect("pointed extension exists");
        let act = f2.action(plus);
        let cols = data[a].section.iter().map(|s| data[b].project(&act.apply(s))).collect();
        LinMap { field: k, rows: data[b].free.len(), cols }
    });
    Ok(rep.with_label(format!("cr({})", f.label().unwrap_or("F"))))
}

/// Block offsets of `i_!(X)(n_+) = ⊕_{E' ⊆ {1..n}} X(E')`, by bitmask.
fn shriek_offsets(x: &LinRep, n: usize) -> Vec<usize> {
    let mut o = vec![0];
    for mask in 0..1u32 << n {
        o.push(o[mask as usize] + x.dim(mask.count_ones() as usize));
    }
    o
}

/// `i_!(X)(E_+) = ⊕_{E' ⊆ E} X(E')`; a pointed map sends the block `E'` to the
/// block `f(E')` through `X(f|E')` when `f(E')` avoids the base point, and to zero otherwise.
pub fn i_shriek(x: &LinRep, gamma: &FinCat) -> Result<LinRep, MobiusError> {
    let omega = x.cat();
    expect_sets(gamma, true, "Γ")?;
    expect_sets(omega, false, "the source category")?;
    if x.variance() != Variance::Covariant {
        return Err(MobiusError::Invalid("i_! takes a covariant Ω-module".into()));
    }
    if gamma.num_objects() > omega.num_objects() {
        return Err(MobiusError::Invalid("Γ is larger than the truncation of Ω".into()));
    }
    let offsets: Arc<Vec<Vec<usize>>> = Arc::new((0..gamma.num_objects()).map(|n| shriek_offsets(x, n)).collect());
    let dims = offsets.iter().map(|o| *o.last().unwrap()).collect();
    let (x2, g2, o2, k) = (x.clone(), gamma.clone(), omega.clone(), x.field());
    let rep = LinRep::from_fn(gamma.clone(), k, Variance::Covariant, dims, move |m| {
        let (a, b) = (g2.src(m), g2.tgt(m));
        let f = g2.set_map(m).expect("pointed map");
        let mut cols = Vec::with_capacity(*offsets[a].last().unwrap());
        for mask in 0..1u32 << a {
            let pts: Vec<usize> = (0..a).filter(|&i| mask >> i & 1 == 1).collect();
            let width = x2.dim(pts.len());
            if pts.iter().any(|&i| f[i + 1] == 0) {
                cols.extend(std::iter::repeat_n(SpVec::new(), width));
                continue;
            }
            let mut image: Vec<u8> = pts.iter().map(|&i| f[i + 1] - 1).collect();
            image.sort_unstable();
            image.dedup();
            let target_mask = image.iter().fold(0u32, |acc, &y| acc | 1 << y);
            let key: Vec<u8> = pts.iter().map(|&i| image.binary_search(&(f[i + 1] - 1)).unwrap() as u8).collect();
            let s = o2.find(pts.len(), image.len(), &key).expect("surjection onto the image");
            let r0 = offsets[b][target_mask as usize] as u32;
            cols.extend(x2.action(s).cols.iter().map(|c| c.remap(k, |r| r + r0)));
        }
        LinMap { field: k, rows: *offsets[b].last().unwrap(), cols }
    });
    Ok(rep.with_label(format!("i!({})", x.label().unwrap_or("X"))))
}

/// The natural isomorphism `X → cr(i_!(X))`: include `X(E)` as the top block, then project.
pub fn round_trip(x: &LinRep, gamma: &FinCat) -> Result<NatTrans, MobiusError> {
    let shriek = i_shriek(x, gamma)?;
    let cr = pirashvili_cr(&shriek, x.cat())?;
    let k = x.field();
    let components = (0..x.cat().num_objects())
        .map(|n| {
            let data = cross_effect_at(&shriek, n)?;
            let top = shriek_offsets(x, n)[(1usize << n) - 1] as u32;
            let cols = (0..x.dim(n) as u32).map(|j| data.project(&SpVec::unit(top + j))).collect();
            Ok(LinMap { field: k, rows: data.free.len(), cols })
        })
        .collect::<Result<Vec<_>, MobiusError>>()?;
    let eta = NatTrans::new(x.clone(), cr, components)?;
    eta.check_natural()?;
    if !eta.is_iso() {
        return Err(MobiusError::Check("X → cr(i_! X) is not invertible".into()));
    }
    Ok(eta)
}
