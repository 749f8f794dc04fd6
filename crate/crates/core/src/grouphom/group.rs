use std::fmt;
use std::str::FromStr;
use std::sync::OnceLock;

use rustc_hash::FxHashMap;
use serde::Serialize;

use super::GroupError;
use crate::exactla::{Elem, Field, MatF};

pub const DEFAULT_ENUMERATION_CAP: u64 = 10_000_000;
/// Largest order for which the full multiplication table is stored.
const TABLE_LIMIT: usize = 4096;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum GroupKind {
    GL,
    /// `O_{n,n}`, the isometries of `H^{⊥n}` for the form `Σ x_i y_i`.
    O,
    Sp,
    Sym,
}

impl GroupKind {
    /// Size of the matrices: `A^{⊕n}` is `k^n` for GL and Sym, `k^{2n}` otherwise.
    pub fn degree(self, n: usize) -> usize {
        match self {
            GroupKind::GL | GroupKind::Sym => n,
            GroupKind::O | GroupKind::Sp => 2 * n,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            GroupKind::GL => "GL",
            GroupKind::O => "O",
            GroupKind::Sp => "Sp",
            GroupKind::Sym => "Sym",
        }
    }

    /// The group order, `None` on overflow.
    pub fn order(self, n: usize, q: u64) -> Option<u128> {
        let q = q as u128;
        let pow = |e: usize| q.checked_pow(e as u32);
        let mut acc: u128 = 1;
        match self {
            GroupKind::GL => {
                let qn = pow(n)?;
                for i in 0..n {
                    acc = acc.checked_mul(qn - pow(i)?)?;
                }
            }
            GroupKind::Sp => {
                acc = pow(n * n)?;
                for i in 1..=n {
                    acc = acc.checked_mul(pow(2 * i)? - 1)?;
                }
            }
            GroupKind::O => {
                if n == 0 {
                    return Some(1);
                }
                acc = 2u128.checked_mul(pow(n * (n - 1))?)?.checked_mul(pow(n)? - 1)?;
                for i in 1..n {
                    acc = acc.checked_mul(pow(2 * i)? - 1)?;
                }
            }
            GroupKind::Sym => {
                for i in 2..=n as u128 {
                    acc = acc.checked_mul(i)?;
                }
            }
        }
        Some(acc)
    }
}

impl fmt::Display for GroupKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for GroupKind {
    type Err = GroupError;
    fn from_str(s: &str) -> Result<GroupKind, GroupError> {
        Ok(match s {
            "GL" | "gl" => GroupKind::GL,
            "O" | "o" => GroupKind::O,
            "Sp" | "sp" => GroupKind::Sp,
            "Sym" | "sym" | "S" => GroupKind::Sym,
            _ => return Err(GroupError::Invalid(format!("unknown group kind {s:?}"))),
        })
    }
}

#[derive(Debug)]
struct Enumeration {
    elements: Vec<MatF>,
    index: FxHashMap<Vec<Elem>, u32>,
    /// `elements[i] = generators[parent[i].1] · elements[parent[i].0]`.
    parent: Vec<(u32, u32)>,
    inverse: Vec<u32>,
    table: OnceLock<Vec<u32>>,
}

/// A finite group of invertible matrices, either fully enumerated or known
/// through generators only.
#[derive(Debug)]
pub struct FiniteGroup {
    label: String,
    field: Field,
    degree: usize,
    generators: Vec<MatF>,
    order: Option<u128>,
    enumeration: Option<Enumeration>,
}

pub fn build_group(kind: GroupKind, n: usize, field: Field, cap: u64) -> Result<FiniteGroup, GroupError> {
    let generators = standard_generators(kind, n, field);
    let order = kind.order(n, field.q() as u64);
    let label = format!("{kind}_{}(F_{})", if kind == GroupKind::O { format!("{n},{n}") } else { kind.degree(n).to_string() }, field.q());
    let mut g = FiniteGroup { label, field, degree: kind.degree(n), generators, order, enumeration: None };
    if order.is_some_and(|o| o <= cap as u128) {
        g.enumerate(cap)?;
        if g.enumeration.as_ref().map(|e| e.elements.len() as u128) != order {
            return Err(GroupError::Invalid(format!("generators of {} close to {} elements, expected {order:?}", g.label, g.len())));
        }
    }
    Ok(g)
}

impl FiniteGroup {
    /// A handle carrying the standard generators and no element list.
    pub fn generators_only(kind: GroupKind, n: usize, field: Field) -> FiniteGroup {
        let label = format!("{kind}({n}, F_{})", field.q());
        let order = kind.order(n, field.q() as u64);
        FiniteGroup { label, field, degree: kind.degree(n), generators: standard_generators(kind, n, field), order, enumeration: None }
    }

    /// The group generated by `generators`, enumerated up to `cap` elements.
    pub fn generated(label: &str, field: Field, degree: usize, generators: Vec<MatF>, cap: u64) -> Result<FiniteGroup, GroupError> {
        for g in &generators {
            if g.rows() != degree || g.cols() != degree || !g.is_invertible() {
                return Err(GroupError::Invalid(format!("generator {g:?} is not invertible of size {degree}")));
            }
        }
        let mut g = FiniteGroup { label: label.to_string(), field, degree, generators, order: None, enumeration: None };
        g.enumerate(cap)?;
        g.order = Some(g.len() as u128);
        Ok(g)
    }

    /// A subgroup given by its element list, with a greedy generating subset.
    pub fn from_elements(label: &str, field: Field, degree: usize, elements: &[MatF]) -> Result<FiniteGroup, GroupError> {
        let mut gens: Vec<MatF> = Vec::new();
        let mut seen: FxHashMap<Vec<Elem>, ()> = FxHashMap::default();
        seen.insert(MatF::identity(field, degree).data().to_vec(), ());
        for e in elements {
            if seen.contains_key(e.data()) {
                continue;
            }
            gens.push(e.clone());
            let h = FiniteGroup::generated(label, field, degree, gens.clone(), elements.len() as u64 + 1)?;
            seen = h.enumeration.unwrap().index.into_keys().map(|k| (k, ())).collect();
        }
        let g = FiniteGroup::generated(label, field, degree, gens, elements.len() as u64 + 1)?;
        if g.len() != elements.len() {
            return Err(GroupError::Invalid(format!("{} elements do not form a group", elements.len())));
        }
        Ok(g)
    }

    fn enumerate(&mut self, cap: u64) -> Result<(), GroupError> {
        let id = MatF::identity(self.field, self.degree);
        let mut elements = vec![id.clone()];
        let mut index = FxHashMap::default();
        index.insert(id.data().to_vec(), 0u32);
        let mut parent = vec![(0, u32::MAX)];
        let mut head = 0;
        while head < elements.len() {
            for (s, gen) in self.generators.iter().enumerate() {
                let y = gen.mul_unchecked(&elements[head]);
                if !index.contains_key(y.data()) {
                    if elements.len() as u64 >= cap {
                        return Err(GroupError::Cap(format!("{} has more than {cap} elements", self.label)));
                    }
                    index.insert(y.data().to_vec(), elements.len() as u32);
                    elements.push(y);
                    parent.push((head as u32, s as u32));
                }
            }
            head += 1;
        }
        let inverse = elements
            .iter()
            .map(|x| index[x.inverse().expect("group elements are invertible").data()])
            .collect();
        self.enumeration = Some(Enumeration { elements, index, parent, inverse, table: OnceLock::new() });
        Ok(())
    }

    pub fn label(&self) -> &str {
        &self.label
    }
    pub fn field(&self) -> Field {
        self.field
    }
    /// Size of the matrices.
    pub fn degree(&self) -> usize {
        self.degree
    }
    pub fn generators(&self) -> &[MatF] {
        &self.generators
    }
    /// The order, known from a formula or from the enumeration.
    pub fn order(&self) -> Option<u128> {
        self.order
    }
    pub fn is_enumerated(&self) -> bool {
        self.enumeration.is_some()
    }

    fn enumerated(&self) -> Result<&Enumeration, GroupError> {
        self.enumeration.as_ref().ok_or_else(|| GroupError::NotEnumerated(self.label.clone()))
    }

    /// Number of enumerated elements (0 in generator-only mode).
    pub fn len(&self) -> usize {
        self.enumeration.as_ref().map_or(0, |e| e.elements.len())
    }
    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn elements(&self) -> Result<&[MatF], GroupError> {
        Ok(&self.enumerated()?.elements)
    }
    pub fn element(&self, i: u32) -> &MatF {
        &self.enumeration.as_ref().expect("enumerated group").elements[i as usize]
    }
    pub fn index_of(&self, m: &MatF) -> Option<u32> {
        self.enumeration.as_ref()?.index.get(m.data()).copied()
    }
    /// Index of the identity.
    pub fn identity(&self) -> u32 {
        0
    }
    pub fn inverse(&self, i: u32) -> u32 {
        self.enumeration.as_ref().expect("enumerated group").inverse[i as usize]
    }
    /// `(j, s)` with `element(i) = generator s · element(j)`; `None` for the identity.
    pub fn parent(&self, i: u32) -> Option<(u32, usize)> {
        let (j, s) = self.enumeration.as_ref().expect("enumerated group").parent[i as usize];
        (s != u32::MAX).then_some((j, s as usize))
    }

    /// Index of `element(a) · element(b)`.
    pub fn mul(&self, a: u32, b: u32) -> u32 {
        let e = self.enumeration.as_ref().expect("enumerated group");
        let n = e.elements.len();
        if n <= TABLE_LIMIT {
            let t = e.table.get_or_init(|| {
                let mut t = Vec::with_capacity(n * n);
                for x in &e.elements {
                    for y in &e.elements {
                        t.push(e.index[x.mul_unchecked(y).data()]);
                    }
                }
                t
            });
            return t[a as usize * n + b as usize];
        }
        e.index[e.elements[a as usize].mul_unchecked(&e.elements[b as usize]).data()]
    }

    /// Closure of the generators reproduces the element list, every element has
    /// its inverse, and the list is closed under products (sampled beyond the
    /// table limit).
    pub fn check_closure(&self) -> Result<(), GroupError> {
        let e = self.enumerated()?;
        for (i, x) in e.elements.iter().enumerate() {
            if let Some((j, s)) = self.parent(i as u32) {
                if &self.generators[s].mul_unchecked(&e.elements[j as usize]) != x {
                    return Err(GroupError::Invalid(format!("element {i} does not match its word")));
                }
            }
            for g in &self.generators {
                if !e.index.contains_key(g.mul_unchecked(x).data()) {
                    return Err(GroupError::Invalid(format!("element {i} times a generator leaves the list")));
                }
            }
            if !e.elements[e.inverse[i] as usize].mul_unchecked(x).data().eq(MatF::identity(self.field, self.degree).data()) {
                return Err(GroupError::Invalid(format!("bad inverse at {i}")));
            }
        }
        Ok(())
    }
}

fn elementary(field: Field, n: usize, i: usize, j: usize, a: Elem) -> MatF {
    let mut m = MatF::identity(field, n);
    m[(i, j)] = a;
    m
}

fn gl_generators(field: Field, n: usize) -> Vec<MatF> {
    let mut gens = Vec::new();
    if n == 0 {
        return gens;
    }
    for i in 0..n {
        for j in 0..n {
            if i != j {
                gens.extend(field.prime_basis().into_iter().map(|a| elementary(field, n, i, j, a)));
            }
        }
    }
    if field.q() > 2 {
        let mut d = MatF::identity(field, n);
        d[(0, 0)] = field.primitive();
        gens.push(d);
    }
    gens
}

/// `A ⊕ A^{-T}` on `k^n ⊕ k^n`.
fn levi(a: &MatF) -> MatF {
    a.direct_sum(&a.inverse().expect("invertible").transpose())
}

/// `[[I, S], [0, I]]`.
fn unipotent(field: Field, s: &MatF) -> MatF {
    let n = s.rows();
    let mut m = MatF::identity(field, 2 * n);
    for i in 0..n {
        for j in 0..n {
            m[(i, n + j)] = s[(i, j)];
        }
    }
    m
}

fn swap_first_pair(field: Field, n: usize) -> MatF {
    let mut m = MatF::identity(field, 2 * n);
    m[(0, 0)] = 0;
    m[(n, n)] = 0;
    m[(0, n)] = 1;
    m[(n, 0)] = 1;
    m
}

/// `x ↦ x + a ω(x, v) v` for `ω(x, x') = Σ x_i y'_i − y_i x'_i`.
fn symplectic_transvection(field: Field, n: usize, v: &[Elem], a: Elem) -> MatF {
    let mut m = MatF::identity(field, 2 * n);
    // column c of ω(e_c, v): for c < n it is v_{n+c}, for c ≥ n it is −v_{c−n}
    for c in 0..2 * n {
        let w = if c < n { v[n + c] } else { field.neg(v[c - n]) };
        let w = field.mul(a, w);
        for r in 0..2 * n {
            m[(r, c)] = field.add(m[(r, c)], field.mul(w, v[r]));
        }
    }
    m
}

pub fn standard_generators(kind: GroupKind, n: usize, field: Field) -> Vec<MatF> {
    match kind {
        GroupKind::GL => gl_generators(field, n),
        GroupKind::Sym => {
            if n < 2 {
                return Vec::new();
            }
            let perm = |p: &dyn Fn(usize) -> usize| {
                let mut m = MatF::zeros(field, n, n);
                for x in 0..n {
                    m[(p(x), x)] = 1;
                }
                m
            };
            let mut gens = vec![perm(&|x| match x {
                0 => 1,
                1 => 0,
                x => x,
            })];
            if n > 2 {
                gens.push(perm(&|x| (x + 1) % n));
            }
            gens
        }
        GroupKind::O => {
            if n == 0 {
                return Vec::new();
            }
            let mut gens: Vec<MatF> = gl_generators(field, n).iter().map(levi).collect();
            for i in 0..n {
                for j in i + 1..n {
                    for a in field.prime_basis() {
                        let mut s = MatF::zeros(field, n, n);
                        s[(i, j)] = a;
                        s[(j, i)] = field.neg(a);
                        gens.push(unipotent(field, &s));
                    }
                }
            }
            gens.push(swap_first_pair(field, n));
            gens
        }
        GroupKind::Sp => {
            if n == 0 {
                return Vec::new();
            }
            let mut gens: Vec<MatF> = gl_generators(field, n).iter().map(levi).collect();
            for i in 0..n {
                for off in [0, n] {
                    let mut v = vec![0; 2 * n];
                    v[i + off] = 1;
                    gens.extend(field.prime_basis().into_iter().map(|a| symplectic_transvection(field, n, &v, a)));
                }
            }
            gens
        }
    }
}
