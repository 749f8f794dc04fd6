use rustc_hash::FxHashMap;

use super::complex::ChainComplex;
use super::HomAlgError;
use crate::exactla::{Elem, LinMap, SpVec};
use crate::fincat::MorId;
use crate::funrep::{LinRep, Variance};

pub const DEFAULT_BAR_MORPHISM_CAP: usize = 64;

/// Tor through the normalized two-sided bar complex: degree `n` is spanned by
/// `x ⊗ (f_n, …, f_1) ⊗ y` over chains of non-identity morphisms
/// `a_0 → ⋯ → a_n`, `x ∈ G(a_n)`, `y ∈ F(a_0)`.
pub fn bar_tor_oracle(g: &LinRep, f: &LinRep, max_degree: usize, morphism_cap: usize) -> Result<Vec<usize>, HomAlgError> {
    if g.variance() != Variance::Contravariant || f.variance() != Variance::Covariant {
        return Err(HomAlgError::Invalid("Tor takes a contravariant and a covariant representation".into()));
    }
    let c = g.cat();
    if c.content_hash() != f.cat().content_hash() || c.is_opposite() != f.cat().is_opposite() {
        return Err(HomAlgError::CategoryMismatch);
    }
    if c.num_morphisms() > morphism_cap {
        return Err(HomAlgError::Invalid(format!("{} morphisms exceed the bar-complex cap {morphism_cap}", c.num_morphisms())));
    }
    let k = g.field();
    let top = max_degree + 1;
    // chains[n]: sequences [f_1, …, f_n]; degree 0 holds the objects
    let mut chains: Vec<Vec<Vec<MorId>>> = vec![(0..c.num_objects()).map(|a| vec![a]).collect()];
    let non_id: Vec<MorId> = c.morphisms().filter(|&m| !c.is_identity(m)).collect();
    for n in 1..=top {
        let mut next = Vec::new();
        if n == 1 {
            next = non_id.iter().map(|&m| vec![m]).collect();
        } else {
            for ch in &chains[n - 1] {
                let end = c.tgt(*ch.last().unwrap());
                for &m in &non_id {
                    if c.src(m) == end {
                        let mut e = ch.clone();
                        e.push(m);
                        next.push(e);
                    }
                }
            }
        }
        chains.push(next);
    }
    let ends = |n: usize, ch: &[MorId]| if n == 0 { (ch[0], ch[0]) } else { (c.src(ch[0]), c.tgt(ch[n - 1])) };
    let mut offsets: Vec<Vec<usize>> = Vec::new();
    let mut index: Vec<FxHashMap<Vec<MorId>, usize>> = Vec::new();
    for (n, list) in chains.iter().enumerate() {
        let mut o = vec![0usize];
        let mut idx = FxHashMap::default();
        for (i, ch) in list.iter().enumerate() {
            let (a0, an) = ends(n, ch);
            o.push(o[i] + g.dim(an) * f.dim(a0));
            idx.insert(ch.clone(), i);
        }
        offsets.push(o);
        index.push(idx);
    }
    let dims: Vec<usize> = offsets.iter().map(|o| *o.last().unwrap()).collect();
    let mut diffs = Vec::new();
    for n in 1..=top {
        let mut cols = Vec::with_capacity(dims[n]);
        for ch in &chains[n] {
            let (a0, an) = ends(n, ch);
            let a1 = c.tgt(ch[0]);
            for p in 0..g.dim(an) {
                for q in 0..f.dim(a0) {
                    let mut pairs: Vec<(u32, Elem)> = Vec::new();
                    let mut put = |face: Vec<MorId>, sign: bool, ys: &[(u32, Elem)], xs: &[(u32, Elem)], fa0: usize| {
                        let Some(&i) = index[n - 1].get(&face) else { return };
                        let base = offsets[n - 1][i];
                        for &(xp, xc) in xs {
                            for &(yq, yc) in ys {
                                let v = k.mul(xc, yc);
                                pairs.push((base as u32 + xp * fa0 as u32 + yq, if sign { k.neg(v) } else { v }));
                            }
                        }
                    };
                    let unit_x = [(p as u32, 1u8)];
                    let unit_y = [(q as u32, 1u8)];
                    // d_0: push y forward along f_1
                    let face0 = if n == 1 { vec![a1] } else { ch[1..].to_vec() };
                    let fy = f.action(ch[0]).cols[q].entries().to_vec();
                    put(face0, false, &fy, &unit_x, f.dim(a1));
                    // inner faces compose neighbours; identities are degenerate
                    for i in 1..n {
                        let comp = c.compose(ch[i], ch[i - 1]);
                        if c.is_identity(comp) {
                            continue;
                        }
                        let mut face = ch[..i - 1].to_vec();
                        face.push(comp);
                        face.extend_from_slice(&ch[i + 1..]);
                        put(face, i % 2 == 1, &unit_y, &unit_x, f.dim(a0));
                    }
                    // d_n: pull x back along f_n
                    let face_n = if n == 1 { vec![a0] } else { ch[..n - 1].to_vec() };
                    let gx = g.action(ch[n - 1]).cols[p].entries().to_vec();
                    put(face_n, n % 2 == 1, &unit_y, &gx, f.dim(a0));
                    cols.push(SpVec::from_pairs(k, pairs));
                }
            }
        }
        diffs.push(LinMap { field: k, rows: dims[n - 1], cols });
    }
    let cx = ChainComplex::new(k, dims, diffs);
    debug_assert!(cx.d_squared_is_zero());
    Ok(cx.homology().dims)
}
