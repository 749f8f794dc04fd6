use serde::Serialize;

use super::{FunRepError, LinRep, Variance};
use crate::exactla::{LinMap, MatF, SpVec, Subspace};
use crate::fincat::{MorId, ObjData, Object};

/// `ΔF(V) = ker(F(V ⊕ k) → F(V))`, on the full subcategory of objects `V` for which
/// `V ⊕ k` is still in range.
pub fn difference(rep: &LinRep) -> Result<LinRep, FunRepError> {
    let cat = rep.cat();
    let k = rep.field();
    if cat.is_opposite() || cat.field() != Some(k) || cat.objects().iter().any(|o| !matches!(o.data, ObjData::Vect)) {
        return Err(FunRepError::Unsupported("difference needs a category of vector spaces".into()));
    }
    let line = cat.find_object(&Object::vect(1)).ok_or_else(|| FunRepError::CapTooSmall("no line".into()))?;
    let contra = rep.variance() == Variance::Contravariant;
    let mut keep = Vec::new();
    let mut kernels = vec![None; cat.num_objects()];
    for a in 0..cat.num_objects() {
        let Some(a1) = cat.object_sum(a, line) else { continue };
        let v = cat.object(a).size;
        let split = if contra {
            cat.find(a, a1, MatF::identity(k, v).vstack(&MatF::zeros(k, 1, v)).data())
        } else {
            cat.find(a1, a, MatF::identity(k, v).hstack(&MatF::zeros(k, v, 1)).data())
        };
        let Some(split) = split else { continue };
        kernels[a] = Some(Subspace::kernel(&rep.action(split).to_dense()));
        keep.push(a);
    }
    if keep.is_empty() {
        return Err(FunRepError::CapTooSmall("no object V with V ⊕ k in range".into()));
    }
    let (sub, inc) = cat.full_subcategory(&keep)?;
    let mut lifted: Vec<MorId> = Vec::with_capacity(sub.num_morphisms());
    for m in sub.morphisms() {
        let orig = inc.on_morphism(m);
        let m1 = cat
            .morphism_sum(orig, cat.identity(line))
            .ok_or_else(|| FunRepError::CapTooSmall(format!("f ⊕ id missing for morphism {orig}")))?;
        lifted.push(m1);
    }
    let dims = keep.iter().map(|&a| kernels[a].as_ref().unwrap().dim()).collect();
    let (r, inc2) = (rep.clone(), inc.clone());
    let out = LinRep::from_fn(sub, k, rep.variance(), dims, move |m| {
        let orig = inc2.on_morphism(m);
        let (s, t) = (r.domain(orig), r.codomain(orig));
        let (ks, kt) = (kernels[s].as_ref().unwrap(), kernels[t].as_ref().unwrap());
        let mat = r.action(lifted[m]).to_dense();
        let cols = (0..ks.dim())
            .map(|i| {
                let y = mat.mul_vec(ks.basis().row(i));
                SpVec::from_dense(&kt.coordinates(&y).expect("difference functor is natural"))
            })
            .collect();
        LinMap { field: k, rows: kt.dim(), cols }
    });
    Ok(match rep.label() {
        Some(l) => out.with_label(format!("Delta({l})")),
        None => out,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case", tag = "kind", content = "value")]
pub enum PolyDegree {
    /// The zero functor.
    Zero,
    Degree(usize),
    NotPolynomialWithinCap { cap: usize },
}

/// Degree `d` such that `Δ^{d+1}F` vanishes on the truncated range and `Δ^d F` does
/// not. `Δ` of a split epimorphism's kernel has dimension `dim F(V⊕k) − dim F(V)`, so
/// only the dimension sequence by `dim V` is needed.
pub fn poly_degree(rep: &LinRep) -> Result<PolyDegree, FunRepError> {
    let cat = rep.cat();
    let mut by_dim: Vec<Option<i128>> = Vec::new();
    for a in 0..cat.num_objects() {
        let o = cat.object(a);
        if !matches!(o.data, ObjData::Vect) {
            return Err(FunRepError::Unsupported("poly_degree needs a category of vector spaces".into()));
        }
        if by_dim.len() <= o.size {
            by_dim.resize(o.size + 1, None);
        }
        by_dim[o.size] = Some(rep.dim(a) as i128);
    }
    let dims: Vec<i128> = by_dim
        .into_iter()
        .collect::<Option<_>>()
        .ok_or_else(|| FunRepError::Unsupported("dimensions must run through 0..=cap".into()))?;
    let cap = dims.len() - 1;
    let mut cur = dims;
    for n in 0..=cap {
        if cur.iter().all(|&d| d == 0) {
            return Ok(if n == 0 { PolyDegree::Zero } else { PolyDegree::Degree(n - 1) });
        }
        cur = cur.windows(2).map(|w| w[1] - w[0]).collect();
    }
    Ok(PolyDegree::NotPolynomialWithinCap { cap })
}
