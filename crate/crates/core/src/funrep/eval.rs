//! Evaluation of functor expressions: a matrix-level layer for functors defined on all
//! linear maps, and a category-level layer for projectives and their combinations.

use std::sync::{Arc, Mutex, OnceLock};

use rustc_hash::FxHashMap;

use super::expr::FunctorExpr;
use super::rep::LinRep;
use super::{FunRepError, Variance};
use crate::exactla::{Elem, Field, LinMap, MatF, SpVec, Subspace};
use crate::fincat::{determinant, FinCat};

/// Sorted index tuples of a fixed length with a reverse lookup.
pub(crate) struct Tuples {
    pub list: Vec<Vec<u8>>,
    index: FxHashMap<Vec<u8>, u32>,
}

impl Tuples {
    pub fn index(&self, t: &[u8]) -> u32 {
        self.index[t]
    }
    pub fn len(&self) -> usize {
        self.list.len()
    }
}

/// Weakly (`strict = false`) or strictly increasing tuples of length `n` from `0..v`,
/// in lex order.
pub(crate) fn tuples(v: usize, n: usize, strict: bool) -> Arc<Tuples> {
    static CACHE: OnceLock<Mutex<FxHashMap<(usize, usize, bool), Arc<Tuples>>>> = OnceLock::new();
    let cache = CACHE.get_or_init(Default::default);
    if let Some(t) = cache.lock().unwrap().get(&(v, n, strict)) {
        return t.clone();
    }
    let mut list = Vec::new();
    let mut cur = Vec::with_capacity(n);
    fn rec(v: usize, n: usize, strict: bool, cur: &mut Vec<u8>, out: &mut Vec<Vec<u8>>) {
        if cur.len() == n {
            out.push(cur.clone());
            return;
        }
        let lo = match cur.last() {
            None => 0,
            Some(&x) => x as usize + strict as usize,
        };
        for i in lo..v {
            cur.push(i as u8);
            rec(v, n, strict, cur, out);
            cur.pop();
        }
    }
    rec(v, n, strict, &mut cur, &mut list);
    let index = list.iter().enumerate().map(|(i, t)| (t.clone(), i as u32)).collect();
    let t = Arc::new(Tuples { list, index });
    cache.lock().unwrap().insert((v, n, strict), t.clone());
    t
}

pub(crate) fn binomial(n: usize, k: usize) -> usize {
    if k > n {
        return 0;
    }
    (0..k).fold(1usize, |acc, i| acc * (n - i) / (i + 1))
}

/// Lex index of a vector of field elements, first coordinate most significant.
pub(crate) fn vector_index(q: usize, v: &[Elem]) -> usize {
    v.iter().fold(0, |acc, &x| acc * q + x as usize)
}

pub(crate) fn vector_from_index(q: usize, len: usize, mut idx: usize) -> Vec<Elem> {
    let mut v = vec![0; len];
    for x in v.iter_mut().rev() {
        *x = (idx % q) as Elem;
        idx /= q;
    }
    v
}

/// `S^n(A)` on sorted-monomial bases; `A` is `w × v`.
pub fn sym_power(a: &MatF, n: usize) -> LinMap {
    let k = a.field();
    let (w, v) = (a.rows(), a.cols());
    let src = tuples(v, n, false);
    let dst = tuples(w, n, false);
    let cols = src
        .list
        .iter()
        .map(|mono| {
            let mut poly: FxHashMap<Vec<u8>, Elem> = FxHashMap::default();
            poly.insert(Vec::new(), 1);
            for &i in mono {
                let mut next: FxHashMap<Vec<u8>, Elem> = FxHashMap::default();
                for (m, c) in &poly {
                    for r in 0..w {
                        let x = a[(r, i as usize)];
                        if x == 0 {
                            continue;
                        }
                        let mut m2 = m.clone();
                        let pos = m2.partition_point(|&y| y <= r as u8);
                        m2.insert(pos, r as u8);
                        let e = next.entry(m2).or_insert(0);
                        *e = k.mul_add(*e, *c, x);
                    }
                }
                poly = next;
            }
            SpVec::from_pairs(k, poly.into_iter().map(|(m, c)| (dst.index(&m), c)).collect())
        })
        .collect();
    LinMap { field: k, rows: dst.len(), cols }
}

/// `Λ^n(A)` on increasing-tuple bases, entries are the `n × n` minors.
pub fn ext_power(a: &MatF, n: usize) -> LinMap {
    let k = a.field();
    let (w, v) = (a.rows(), a.cols());
    let src = tuples(v, n, true);
    let dst = tuples(w, n, true);
    let cols = src
        .list
        .iter()
        .map(|cols_i| {
            let ci: Vec<usize> = cols_i.iter().map(|&x| x as usize).collect();
            let sub = a.select_cols(&ci);
            let pairs = dst
                .list
                .iter()
                .enumerate()
                .filter_map(|(j, rows_j)| {
                    let rj: Vec<usize> = rows_j.iter().map(|&x| x as usize).collect();
                    let d = determinant(&sub.select_rows(&rj));
                    (d != 0).then_some((j as u32, d))
                })
                .collect();
            SpVec::from_sorted(pairs)
        })
        .collect();
    LinMap { field: k, rows: dst.len(), cols }
}

pub fn tensor_power(a: &MatF, n: usize) -> LinMap {
    let base = LinMap::from_dense(a);
    (0..n).fold(LinMap::identity(a.field(), 1), |acc, _| acc.kron(&base))
}

/// `Γ^n(A) = S^n(Aᵀ)ᵀ`, on the basis dual to the monomials.
pub fn div_power(a: &MatF, n: usize) -> LinMap {
    sym_power(&a.transpose(), n).transpose()
}

/// Linearization `[x] ↦ [M x]` of a linear map `M` between coordinate spaces.
pub(crate) fn linearize(k: Field, m: &MatF) -> LinMap {
    let q = k.size();
    let (rows, cols) = (m.rows(), m.cols());
    let n_src = q.pow(cols as u32);
    let n_dst = q.pow(rows as u32);
    let cols = (0..n_src)
        .map(|i| {
            let x = vector_from_index(q, cols, i);
            SpVec::unit(vector_index(q, &m.mul_vec(&x)) as u32)
        })
        .collect();
    LinMap { field: k, rows: n_dst, cols }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub(crate) enum Linearized {
    Sym2,
    Alt2,
}

/// A functor defined on every linear map over the field.
pub(crate) enum MatNode {
    Id,
    Const(usize),
    Sym(usize),
    Ext(usize),
    Div(usize),
    TensorPower(usize),
    Lin(Linearized),
    Pbar,
    Dual(Box<MatNode>),
    Tensor(Box<MatNode>, Box<MatNode>),
    Sum(Box<MatNode>, Box<MatNode>),
    Compose(Box<MatNode>, Box<MatNode>),
    Delta(Box<MatNode>, Mutex<FxHashMap<usize, Arc<Subspace>>>),
}

impl MatNode {
    pub fn compile(e: &FunctorExpr) -> Result<MatNode, FunRepError> {
        use FunctorExpr as E;
        let b = |x: &FunctorExpr| MatNode::compile(x).map(Box::new);
        Ok(match e {
            E::Id => MatNode::Id,
            E::Const(n) => MatNode::Const(*n),
            E::Sym(n) => MatNode::Sym(*n),
            E::Ext(n) => MatNode::Ext(*n),
            E::Div(n) => MatNode::Div(*n),
            E::TensorPower(n) => MatNode::TensorPower(*n),
            E::LinSym2 => MatNode::Lin(Linearized::Sym2),
            E::LinAlt2 => MatNode::Lin(Linearized::Alt2),
            E::Pbar => MatNode::Pbar,
            E::Dual(x) => MatNode::Dual(b(x)?),
            E::Tensor(x, y) => MatNode::Tensor(b(x)?, b(y)?),
            E::DirectSum(x, y) => MatNode::Sum(b(x)?, b(y)?),
            E::Compose(x, y) => MatNode::Compose(b(x)?, b(y)?),
            E::Delta(x) => MatNode::Delta(b(x)?, Mutex::new(FxHashMap::default())),
            E::Proj(_) => return Err(FunRepError::Unsupported("Proj is category-level".into())),
            E::InjCogen => return Err(FunRepError::Unsupported("I is a formal symbol without a finite model".into())),
        })
    }

    pub fn variance(&self) -> Option<Variance> {
        match self {
            MatNode::Const(_) => None,
            MatNode::Pbar => Some(Variance::Contravariant),
            MatNode::Dual(x) => x.variance().map(Variance::flip),
            MatNode::Tensor(a, b) | MatNode::Sum(a, b) => a.variance().or(b.variance()),
            MatNode::Compose(a, b) => match (a.variance(), b.variance()) {
                (Some(x), Some(y)) => Some(x.compose(y)),
                _ => None,
            },
            MatNode::Delta(x, _) => x.variance(),
            _ => Some(Variance::Covariant),
        }
    }

    pub fn dim(&self, k: Field, v: usize) -> usize {
        let q = k.size();
        match self {
            MatNode::Id => v,
            MatNode::Const(n) => *n,
            MatNode::Sym(0) | MatNode::Div(0) => 1,
            MatNode::Sym(n) | MatNode::Div(n) => binomial(v + n - 1, *n),
            MatNode::Ext(n) => binomial(v, *n),
            MatNode::TensorPower(n) => v.pow(*n as u32),
            MatNode::Lin(Linearized::Sym2) => q.pow(binomial(v + 1, 2) as u32),
            MatNode::Lin(Linearized::Alt2) => q.pow(binomial(v, 2) as u32),
            MatNode::Pbar => q.pow(v as u32) - 1,
            MatNode::Dual(x) => x.dim(k, v),
            MatNode::Tensor(a, b) => a.dim(k, v) * b.dim(k, v),
            MatNode::Sum(a, b) => a.dim(k, v) + b.dim(k, v),
            MatNode::Compose(a, b) => a.dim(k, b.dim(k, v)),
            MatNode::Delta(x, _) => x.dim(k, v + 1) - x.dim(k, v),
        }
    }

    /// Image of `A : V → W` (a `w × v` matrix), in the functor's own direction.
    pub fn apply(&self, a: &MatF) -> LinMap {
        let k = a.field();
        match self {
            MatNode::Id => LinMap::from_dense(a),
            MatNode::Const(n) => LinMap::identity(k, *n),
            MatNode::Sym(n) => sym_power(a, *n),
            MatNode::Ext(n) => ext_power(a, *n),
            MatNode::Div(n) => div_power(a, *n),
            MatNode::TensorPower(n) => tensor_power(a, *n),
            MatNode::Lin(Linearized::Sym2) => linearize(k, &sym_power(a, 2).to_dense()),
            MatNode::Lin(Linearized::Alt2) => linearize(k, &ext_power(a, 2).to_dense()),
            MatNode::Pbar => {
                let q = k.size();
                let (w, v) = (a.rows(), a.cols());
                let cols = (1..q.pow(w as u32))
                    .map(|i| {
                        let phi = vector_from_index(q, w, i);
                        let row = MatF::from_rows(k, w, &[phi]).mul_unchecked(a);
                        match vector_index(q, row.row(0)) {
                            0 => SpVec::new(),
                            j => SpVec::unit(j as u32 - 1),
                        }
                    })
                    .collect();
                LinMap { field: k, rows: q.pow(v as u32) - 1, cols }
            }
            MatNode::Dual(x) => x.apply(&a.transpose()),
            MatNode::Tensor(x, y) => x.apply(a).kron(&y.apply(a)),
            MatNode::Sum(x, y) => x.apply(a).direct_sum(&y.apply(a)),
            MatNode::Compose(outer, inner) => outer.apply(&inner.apply(a).to_dense()),
            MatNode::Delta(x, cache) => {
                let (w, v) = (a.rows(), a.cols());
                let contra = x.variance() == Some(Variance::Contravariant);
                let (ks, kd) = if contra {
                    (self.delta_kernel(x, cache, k, w), self.delta_kernel(x, cache, k, v))
                } else {
                    (self.delta_kernel(x, cache, k, v), self.delta_kernel(x, cache, k, w))
                };
                let m = x.apply(&a.direct_sum(&MatF::identity(k, 1))).to_dense();
                let cols = (0..ks.dim())
                    .map(|i| {
                        let y = m.mul_vec(ks.basis().row(i));
                        SpVec::from_dense(&kd.coordinates(&y).expect("difference functor is natural"))
                    })
                    .collect();
                LinMap { field: k, rows: kd.dim(), cols }
            }
        }
    }

    /// `ker(F(V ⊕ k) → F(V))` along the split projection (or inclusion, for
    /// contravariant `F`).
    fn delta_kernel(
        &self,
        x: &MatNode,
        cache: &Mutex<FxHashMap<usize, Arc<Subspace>>>,
        k: Field,
        v: usize,
    ) -> Arc<Subspace> {
        if let Some(s) = cache.lock().unwrap().get(&v) {
            return s.clone();
        }
        let split = if x.variance() == Some(Variance::Contravariant) {
            MatF::identity(k, v).vstack(&MatF::zeros(k, 1, v))
        } else {
            MatF::identity(k, v).hstack(&MatF::zeros(k, v, 1))
        };
        let s = Arc::new(Subspace::kernel(&x.apply(&split).to_dense()));
        cache.lock().unwrap().insert(v, s.clone());
        s
    }
}

/// A compiled matrix-level expression, applied to individual matrices.
pub struct MatrixFunctor(MatNode);

impl MatrixFunctor {
    pub fn new(expr: &FunctorExpr) -> Result<MatrixFunctor, FunRepError> {
        if !expr.kind()?.matrix {
            return Err(FunRepError::Unsupported(format!("{expr} is not defined on matrices")));
        }
        Ok(MatrixFunctor(MatNode::compile(expr)?))
    }

    /// `None` for constant-like expressions.
    pub fn variance(&self) -> Option<Variance> {
        self.0.variance()
    }

    pub fn dim(&self, field: Field, v: usize) -> usize {
        self.0.dim(field, v)
    }

    /// `F(A)` in the functor's own direction: `F(V) → F(W)` for `A : V → W`
    /// when covariant, `F(W) → F(V)` when contravariant.
    pub fn apply(&self, a: &MatF) -> LinMap {
        self.0.apply(a)
    }
}

/// Evaluates an expression on a category at its natural variance (covariant when the
/// expression is constant-like). On an opposite view, linear-map expressions keep
/// their meaning on the underlying category, so their variance flips.
pub fn evaluate(expr: &FunctorExpr, cat: &FinCat, field: Field) -> Result<LinRep, FunRepError> {
    let kind = expr.kind()?;
    let v = kind.variance.unwrap_or(Variance::Covariant);
    let v = if cat.is_opposite() && kind.matrix { v.flip() } else { v };
    evaluate_as(expr, cat, field, v)
}

pub fn evaluate_as(expr: &FunctorExpr, cat: &FinCat, field: Field, variance: Variance) -> Result<LinRep, FunRepError> {
    let kind = expr.kind()?;
    // on an opposite view, matrix-level variance is relative to the underlying category
    let relative = if cat.is_opposite() && kind.matrix { variance.flip() } else { variance };
    if let Some(v) = kind.variance {
        if v != relative {
            return Err(FunRepError::Variance(format!("{expr} is {v:?}, requested {variance:?}")));
        }
    }
    if expr.mentions_formal() {
        return Err(FunRepError::Unsupported("I is a formal symbol without a finite model".into()));
    }
    if cat.is_opposite() && kind.matrix {
        return Ok(evaluate_as(expr, &cat.base(), field, variance.flip())?.on_opposite());
    }
    Ok(build(expr, cat, field, variance)?.with_label(expr.to_string()))
}

fn build(expr: &FunctorExpr, cat: &FinCat, field: Field, variance: Variance) -> Result<LinRep, FunRepError> {
    use FunctorExpr as E;
    if let E::Const(n) = expr {
        return Ok(LinRep::constant(cat, field, variance, *n));
    }
    let kind = expr.kind()?;
    if kind.matrix {
        let node = Arc::new(MatNode::compile(expr)?);
        if cat.field() != Some(field) || cat.matrix(0).is_none() && cat.num_morphisms() > 0 {
            return Err(FunRepError::Unsupported(format!("{expr} needs a linear category over F_{}", field.q())));
        }
        let dims = cat.objects().iter().map(|o| node.dim(field, o.size)).collect();
        let cat2 = cat.clone();
        return Ok(LinRep::from_fn(cat.clone(), field, variance, dims, move |m| node.apply(&cat2.matrix(m).unwrap())));
    }
    match expr {
        E::Proj(c) => {
            if *c >= cat.num_objects() {
                return Err(FunRepError::Unsupported(format!("object {c} is outside the category")));
            }
            Ok(LinRep::projective(cat, field, *c))
        }
        E::Tensor(a, b) => build(a, cat, field, variance)?.tensor(&build(b, cat, field, variance)?),
        E::DirectSum(a, b) => build(a, cat, field, variance)?.direct_sum(&build(b, cat, field, variance)?),
        E::Compose(outer, inner) => {
            let node = Arc::new(MatNode::compile(outer)?);
            let inner_var = match node.variance() {
                Some(Variance::Contravariant) => variance.flip(),
                _ => variance,
            };
            let rep = build(inner, cat, field, inner_var)?;
            let dims = rep.dims().iter().map(|&d| node.dim(field, d)).collect();
            let r2 = rep.clone();
            Ok(LinRep::from_fn(cat.clone(), field, variance, dims, move |m| node.apply(&r2.action(m).to_dense())))
        }
        _ => Err(FunRepError::Unsupported(format!("cannot evaluate {expr}"))),
    }
}
