use rayon::prelude::*;
use rustc_hash::FxHashSet;

use super::group::FiniteGroup;
use super::module::GModule;
use super::GroupError;
use crate::exactla::{Elem, LinMap, SpMat, SpVec};
use crate::homalg::ChainComplex;

#[derive(Clone, Copy, Debug)]
pub struct HomologyOptions {
    /// Bound on the dimension of the largest bar-complex term.
    pub cell_cap: usize,
    /// Degrees above 2 are only computed for groups of at most this order.
    pub high_degree_order: usize,
}

impl Default for HomologyOptions {
    fn default() -> Self {
        HomologyOptions { cell_cap: 5_000_000, high_degree_order: 2000 }
    }
}

/// `dim M_G = dim M − rank span{g·v − v}` over the given generator matrices.
pub fn coinvariants(generators: &[LinMap], dim: usize) -> usize {
    let Some(first) = generators.first() else { return dim };
    let k = first.field;
    let mut span = SpMat::new(k, dim);
    for a in generators {
        for (j, col) in a.cols.iter().enumerate() {
            let v = col.axpy(k, k.neg(1), &SpVec::unit(j as u32));
            if !v.is_zero() {
                span.push_row(v);
            }
        }
    }
    dim - span.rank()
}

/// `H_i(G; M)` for `i ≤ max_degree` from the normalized bar complex
/// `C_n = k[(G∖1)^n] ⊗ M` with
/// `d([g_1|…|g_n] ⊗ m) = [g_2|…|g_n] ⊗ g_1^{-1}m + Σ (−1)^i […|g_i g_{i+1}|…] ⊗ m + (−1)^n [g_1|…|g_{n−1}] ⊗ m`.
pub fn group_homology(group: &FiniteGroup, m: &GModule, max_degree: usize, opts: &HomologyOptions) -> Result<Vec<usize>, GroupError> {
    if m.field() != group.field() {
        return Err(GroupError::Invalid("module and group use different fields".into()));
    }
    if max_degree > 2 && group.len() > opts.high_degree_order {
        return Err(GroupError::Cap(format!(
            "degree {max_degree} needs |G| ≤ {}, {} has {} elements",
            opts.high_degree_order,
            group.label(),
            group.len()
        )));
    }
    let acts = m.element_actions(group)?;
    let (n, d) = (group.len(), m.dim());
    let b = n - 1;
    let top = max_degree + 1;
    let mut dims = Vec::with_capacity(top + 1);
    for deg in 0..=top {
        let cells = (b as u128).pow(deg as u32) * d as u128;
        if cells > opts.cell_cap as u128 {
            return Err(GroupError::Cap(format!("bar complex term {deg} has {cells} cells, cap {}", opts.cell_cap)));
        }
        dims.push(cells as usize);
    }
    let k = group.field();
    // chains of non-identity elements, `a_1` the most significant digit; element index = digit + 1
    let decode = |mut c: usize, len: usize| -> Vec<u32> {
        let mut t = vec![0u32; len];
        for i in (0..len).rev() {
            t[i] = (c % b) as u32 + 1;
            c /= b;
        }
        t
    };
    let encode = |t: &[u32]| t.iter().fold(0usize, |acc, &g| acc * b + (g as usize - 1));
    let inverse_acts: Vec<&LinMap> = (0..n as u32).map(|g| &acts[group.inverse(g) as usize]).collect();
    let diffs: Vec<LinMap> = (1..=top)
        .into_par_iter()
        .map(|deg| {
            let chains = b.pow(deg as u32);
            let mut cols = Vec::with_capacity(chains * d);
            let odd = |i: usize| i % 2 == 1;
            for c in 0..chains {
                let t = decode(c, deg);
                let mut faces: Vec<(usize, bool)> = Vec::with_capacity(deg);
                for i in 1..deg {
                    let p = group.mul(t[i - 1], t[i]);
                    if p != group.identity() {
                        let mut f = t[..i - 1].to_vec();
                        f.push(p);
                        f.extend_from_slice(&t[i + 1..]);
                        faces.push((encode(&f), odd(i)));
                    }
                }
                faces.push((encode(&t[..deg - 1]), odd(deg)));
                let first = encode(&t[1..]);
                let g1inv = inverse_acts[t[0] as usize];
                for j in 0..d {
                    let mut pairs: Vec<(u32, Elem)> =
                        g1inv.cols[j].entries().iter().map(|&(r, x)| ((first * d) as u32 + r, x)).collect();
                    for &(f, neg) in &faces {
                        pairs.push(((f * d + j) as u32, if neg { k.neg(1) } else { 1 }));
                    }
                    cols.push(SpVec::from_pairs(k, pairs));
                }
            }
            LinMap { field: k, rows: b.pow(deg as u32 - 1) * d, cols }
        })
        .collect();
    Ok(ChainComplex::new(k, dims, diffs).homology().dims)
}

/// `r` with `G/⟨[G,G], G^p⟩ ≅ (Z/p)^r`, i.e. `dim G^{ab} ⊗ F_p`, from the
/// multiplication table alone.
pub fn abelianization_rank(group: &FiniteGroup) -> Result<usize, GroupError> {
    let n = group.len() as u32;
    if n == 0 {
        return Err(GroupError::NotEnumerated(group.label().to_string()));
    }
    let p = group.field().p();
    let mut gens: FxHashSet<u32> = FxHashSet::default();
    for x in 0..n {
        let mut pw = x;
        for _ in 1..p {
            pw = group.mul(pw, x);
        }
        gens.insert(pw);
        for y in 0..n {
            let c = group.mul(group.mul(x, y), group.mul(group.inverse(x), group.inverse(y)));
            gens.insert(c);
        }
    }
    gens.remove(&group.identity());
    let gens: Vec<u32> = gens.into_iter().collect();
    let mut seen = vec![false; n as usize];
    seen[group.identity() as usize] = true;
    let mut queue = vec![group.identity()];
    let mut head = 0;
    while head < queue.len() {
        let x = queue[head];
        head += 1;
        for &s in &gens {
            let y = group.mul(s, x);
            if !seen[y as usize] {
                seen[y as usize] = true;
                queue.push(y);
            }
        }
    }
    let mut quotient = n as usize / queue.len();
    let mut r = 0;
    while quotient > 1 {
        if quotient % p as usize != 0 {
            return Err(GroupError::Invalid("quotient by commutators and p-th powers is not a p-group".into()));
        }
        quotient /= p as usize;
        r += 1;
    }
    Ok(r)
}
