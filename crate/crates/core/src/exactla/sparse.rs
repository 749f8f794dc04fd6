//! Sparse vectors and matrices, Markowitz-ordered Gauss-Jordan elimination and an
//! incremental echelon basis used for span membership tests.

use std::cmp::Reverse;
use std::collections::BinaryHeap;

use super::dense::MatF;
use super::field::{Elem, Field};

/// Sparse vector: strictly increasing indices, no stored zeros.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct SpVec {
    entries: Vec<(u32, Elem)>,
}

impl SpVec {
    pub fn new() -> SpVec {
        SpVec { entries: Vec::new() }
    }

    /// From unsorted `(index, value)` pairs; duplicates are summed.
    pub fn from_pairs(field: Field, mut pairs: Vec<(u32, Elem)>) -> SpVec {
        pairs.sort_unstable_by_key(|p| p.0);
        let mut entries: Vec<(u32, Elem)> = Vec::with_capacity(pairs.len());
        for (i, v) in pairs {
            match entries.last_mut() {
                Some(last) if last.0 == i => last.1 = field.add(last.1, v),
                _ => entries.push((i, v)),
            }
        }
        entries.retain(|e| e.1 != 0);
        SpVec { entries }
    }

    /// From already sorted, zero-free entries.
    pub fn from_sorted(entries: Vec<(u32, Elem)>) -> SpVec {
        debug_assert!(entries.windows(2).all(|w| w[0].0 < w[1].0));
        debug_assert!(entries.iter().all(|e| e.1 != 0));
        SpVec { entries }
    }

    pub fn unit(i: u32) -> SpVec {
        SpVec { entries: vec![(i, 1)] }
    }

    pub fn from_dense(v: &[Elem]) -> SpVec {
        SpVec {
            entries: v.iter().enumerate().filter(|(_, &x)| x != 0).map(|(i, &x)| (i as u32, x)).collect(),
        }
    }

    pub fn to_dense(&self, n: usize) -> Vec<Elem> {
        let mut v = vec![0; n];
        for &(i, x) in &self.entries {
            v[i as usize] = x;
        }
        v
    }

    pub fn entries(&self) -> &[(u32, Elem)] {
        &self.entries
    }
    pub fn into_entries(self) -> Vec<(u32, Elem)> {
        self.entries
    }
    pub fn nnz(&self) -> usize {
        self.entries.len()
    }
    pub fn is_zero(&self) -> bool {
        self.entries.is_empty()
    }
    pub fn leading(&self) -> Option<(u32, Elem)> {
        self.entries.first().copied()
    }

    pub fn get(&self, i: u32) -> Elem {
        match self.entries.binary_search_by_key(&i, |e| e.0) {
            Ok(p) => self.entries[p].1,
            Err(_) => 0,
        }
    }

    pub fn scale(&self, field: Field, c: Elem) -> SpVec {
        if c == 0 {
            return SpVec::new();
        }
        SpVec { entries: self.entries.iter().map(|&(i, x)| (i, field.mul(c, x))).collect() }
    }

    /// `self + c * other`.
    pub fn axpy(&self, field: Field, c: Elem, other: &SpVec) -> SpVec {
        if c == 0 {
            return self.clone();
        }
        let (a, b) = (&self.entries, &other.entries);
        let mut out = Vec::with_capacity(a.len() + b.len());
        let (mut i, mut j) = (0, 0);
        while i < a.len() || j < b.len() {
            if j == b.len() || (i < a.len() && a[i].0 < b[j].0) {
                out.push(a[i]);
                i += 1;
            } else if i == a.len() || b[j].0 < a[i].0 {
                out.push((b[j].0, field.mul(c, b[j].1)));
                j += 1;
            } else {
                let s = field.mul_add(a[i].1, c, b[j].1);
                if s != 0 {
                    out.push((a[i].0, s));
                }
                i += 1;
                j += 1;
            }
        }
        SpVec { entries: out }
    }

    /// Reindexes every entry through `map`; duplicate targets are summed.
    pub fn remap(&self, field: Field, map: impl Fn(u32) -> u32) -> SpVec {
        SpVec::from_pairs(field, self.entries.iter().map(|&(i, x)| (map(i), x)).collect())
    }

    pub fn dot(&self, field: Field, other: &SpVec) -> Elem {
        let (a, b) = (&self.entries, &other.entries);
        let (mut i, mut j, mut acc) = (0, 0, 0u8);
        while i < a.len() && j < b.len() {
            match a[i].0.cmp(&b[j].0) {
                std::cmp::Ordering::Less => i += 1,
                std::cmp::Ordering::Greater => j += 1,
                std::cmp::Ordering::Equal => {
                    acc = field.mul_add(acc, a[i].1, b[j].1);
                    i += 1;
                    j += 1;
                }
            }
        }
        acc
    }
}

/// Row-major sparse matrix.
#[derive(Clone, Debug)]
pub struct SpMat {
    pub field: Field,
    pub ncols: usize,
    pub rows: Vec<SpVec>,
}

impl SpMat {
    pub fn new(field: Field, ncols: usize) -> SpMat {
        SpMat { field, ncols, rows: Vec::new() }
    }

    pub fn from_dense(m: &MatF) -> SpMat {
        SpMat {
            field: m.field(),
            ncols: m.cols(),
            rows: (0..m.rows()).map(|r| SpVec::from_dense(m.row(r))).collect(),
        }
    }

    pub fn to_dense(&self) -> MatF {
        let rows: Vec<Vec<Elem>> = self.rows.iter().map(|r| r.to_dense(self.ncols)).collect();
        MatF::from_rows(self.field, self.ncols, &rows)
    }

    pub fn nrows(&self) -> usize {
        self.rows.len()
    }

    pub fn push_row(&mut self, r: SpVec) {
        debug_assert!(r.entries().last().is_none_or(|e| (e.0 as usize) < self.ncols));
        self.rows.push(r);
    }

    /// Builds the row-major form of a matrix given by its columns.
    pub fn from_columns(field: Field, nrows: usize, cols: &[SpVec]) -> SpMat {
        let mut buckets: Vec<Vec<(u32, Elem)>> = vec![Vec::new(); nrows];
        for (j, c) in cols.iter().enumerate() {
            for &(i, x) in c.entries() {
                buckets[i as usize].push((j as u32, x));
            }
        }
        SpMat { field, ncols: cols.len(), rows: buckets.into_iter().map(SpVec::from_sorted).collect() }
    }

    pub fn mul_vec(&self, v: &SpVec) -> SpVec {
        let k = self.field;
        SpVec::from_sorted(
            self.rows
                .iter()
                .enumerate()
                .filter_map(|(i, r)| {
                    let d = r.dot(k, v);
                    (d != 0).then_some((i as u32, d))
                })
                .collect(),
        )
    }

    pub fn eliminate(&self) -> Elimination {
        Elimination::run(self)
    }

    pub fn rank(&self) -> usize {
        self.eliminate().rank()
    }
}

/// Outcome of Gauss-Jordan elimination. Each pivot row has coefficient 1 at its pivot
/// column and that column is zero in every other retained row.
#[derive(Clone, Debug)]
pub struct Elimination {
    pub field: Field,
    pub ncols: usize,
    /// `(pivot column, reduced row)` in the order the pivots were chosen.
    pub pivots: Vec<(u32, SpVec)>,
    is_pivot: Vec<bool>,
}

impl Elimination {
    /// Markowitz-style ordering: repeatedly take the sparsest remaining row (lowest index
    /// on ties) and inside it the column with the fewest occurrences (lowest index on ties).
    fn run(m: &SpMat) -> Elimination {
        let k = m.field;
        let mut rows: Vec<SpVec> = m.rows.clone();
        let mut col_occ: Vec<Vec<u32>> = vec![Vec::new(); m.ncols];
        for (i, r) in rows.iter().enumerate() {
            for &(c, _) in r.entries() {
                col_occ[c as usize].push(i as u32);
            }
        }
        let mut done = vec![false; rows.len()];
        let mut heap: BinaryHeap<Reverse<(usize, u32)>> =
            rows.iter().enumerate().filter(|(_, r)| !r.is_zero()).map(|(i, r)| Reverse((r.nnz(), i as u32))).collect();
        let mut is_pivot = vec![false; m.ncols];
        let mut order: Vec<(u32, u32)> = Vec::new();
        while let Some(Reverse((nnz, ri))) = heap.pop() {
            let r = ri as usize;
            if done[r] || rows[r].nnz() != nnz || nnz == 0 {
                continue;
            }
            let (pc, pv) = *rows[r]
                .entries()
                .iter()
                .min_by_key(|(c, _)| (col_occ[*c as usize].len(), *c))
                .expect("nonempty row");
            let inv = k.inv(pv).expect("nonzero pivot");
            rows[r] = rows[r].scale(k, inv);
            done[r] = true;
            is_pivot[pc as usize] = true;
            order.push((pc, ri));
            let occ = std::mem::take(&mut col_occ[pc as usize]);
            let pivot_row = rows[r].clone();
            for &oi in &occ {
                let o = oi as usize;
                if o == r {
                    continue;
                }
                let f = rows[o].get(pc);
                if f == 0 {
                    continue;
                }
                let before = rows[o].nnz();
                rows[o] = rows[o].axpy(k, k.neg(f), &pivot_row);
                for &(c, _) in pivot_row.entries() {
                    if c != pc {
                        col_occ[c as usize].push(oi);
                    }
                }
                if !done[o] && rows[o].nnz() != before && !rows[o].is_zero() {
                    heap.push(Reverse((rows[o].nnz(), oi)));
                }
            }
            col_occ[pc as usize] = vec![ri];
            // lazy compaction of occurrence lists that grew large
            for &(c, _) in pivot_row.entries() {
                let list = &mut col_occ[c as usize];
                if list.len() >= 64 && list.len().is_power_of_two() {
                    list.sort_unstable();
                    list.dedup();
                }
            }
        }
        let pivots = order.into_iter().map(|(c, r)| (c, std::mem::take(&mut rows[r as usize]))).collect();
        Elimination { field: k, ncols: m.ncols, pivots, is_pivot }
    }

    pub fn rank(&self) -> usize {
        self.pivots.len()
    }

    pub fn is_pivot(&self, c: usize) -> bool {
        self.is_pivot[c]
    }

    pub fn free_columns(&self) -> Vec<u32> {
        (0..self.ncols as u32).filter(|&c| !self.is_pivot[c as usize]).collect()
    }

    /// One kernel vector per free column `j`: `e_j - sum_r row_r[j] e_{pivot(r)}`.
    pub fn kernel_vectors(&self) -> Vec<(u32, SpVec)> {
        let k = self.field;
        let free = self.free_columns();
        let mut slot = vec![u32::MAX; self.ncols];
        for (s, &j) in free.iter().enumerate() {
            slot[j as usize] = s as u32;
        }
        let mut acc: Vec<Vec<(u32, Elem)>> = free.iter().map(|&j| vec![(j, 1)]).collect();
        for (pc, row) in &self.pivots {
            for &(j, x) in row.entries() {
                if *pc != j {
                    let s = slot[j as usize];
                    debug_assert!(s != u32::MAX, "reduced rows only touch free columns");
                    acc[s as usize].push((*pc, k.neg(x)));
                }
            }
        }
        free.into_iter().zip(acc).map(|(j, v)| (j, SpVec::from_pairs(k, v))).collect()
    }
}

/// Incrementally built basis in semi-echelon form: each stored vector has leading
/// coefficient 1 at an index owned by no other stored vector.
#[derive(Clone, Debug)]
pub struct SpEchelon {
    field: Field,
    dim: usize,
    owner: Vec<u32>,
    basis: Vec<SpVec>,
}

impl SpEchelon {
    pub fn new(field: Field, dim: usize) -> SpEchelon {
        SpEchelon { field, dim, owner: vec![u32::MAX; dim], basis: Vec::new() }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }
    pub fn rank(&self) -> usize {
        self.basis.len()
    }
    pub fn basis(&self) -> &[SpVec] {
        &self.basis
    }
    pub fn is_full(&self) -> bool {
        self.basis.len() == self.dim
    }
    pub fn leads(&self) -> impl Iterator<Item = u32> + '_ {
        self.basis.iter().map(|b| b.leading().expect("stored vectors are nonzero").0)
    }
    pub fn has_lead(&self, i: u32) -> bool {
        self.owner[i as usize] != u32::MAX
    }

    /// Residue of `v` after subtracting basis multiples at every owned index.
    pub fn reduce(&self, v: &SpVec) -> SpVec {
        let k = self.field;
        let mut acc: Vec<Elem> = Vec::new();
        let mut touched: BinaryHeap<Reverse<u32>> = BinaryHeap::new();
        let mut dense = false;
        if v.nnz() * 8 > self.dim || self.basis.len() * 4 > self.dim {
            dense = true;
            acc = vec![0; self.dim];
        }
        if dense {
            for &(i, x) in v.entries() {
                acc[i as usize] = x;
            }
            for i in 0..self.dim {
                let x = acc[i];
                if x == 0 {
                    continue;
                }
                let o = self.owner[i];
                if o == u32::MAX {
                    continue;
                }
                let f = k.neg(x);
                for &(j, y) in self.basis[o as usize].entries() {
                    acc[j as usize] = k.mul_add(acc[j as usize], f, y);
                }
            }
            return SpVec::from_dense(&acc);
        }
        let mut map: rustc_hash::FxHashMap<u32, Elem> = rustc_hash::FxHashMap::default();
        for &(i, x) in v.entries() {
            map.insert(i, x);
            if self.owner[i as usize] != u32::MAX {
                touched.push(Reverse(i));
            }
        }
        while let Some(Reverse(i)) = touched.pop() {
            let x = map.get(&i).copied().unwrap_or(0);
            if x == 0 {
                continue;
            }
            let o = self.owner[i as usize];
            let f = k.neg(x);
            for &(j, y) in self.basis[o as usize].entries() {
                let e = map.entry(j).or_insert(0);
                let before = *e;
                *e = k.mul_add(*e, f, y);
                if before == 0 && *e != 0 && j != i && self.owner[j as usize] != u32::MAX {
                    touched.push(Reverse(j));
                }
            }
        }
        SpVec::from_pairs(k, map.into_iter().filter(|e| e.1 != 0).collect())
    }

    pub fn contains(&self, v: &SpVec) -> bool {
        self.reduce(v).is_zero()
    }

    /// Adds `v` to the span; returns the new leading index if the rank grew.
    pub fn insert(&mut self, v: &SpVec) -> Option<u32> {
        let r = self.reduce(v);
        let (lead, x) = r.leading()?;
        let inv = self.field.inv(x).expect("nonzero");
        self.owner[lead as usize] = self.basis.len() as u32;
        self.basis.push(r.scale(self.field, inv));
        Some(lead)
    }
}

/// Linear map stored by the images of the source basis vectors (column-sparse).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LinMap {
    pub field: Field,
    /// Dimension of the target space.
    pub rows: usize,
    /// `cols[j]` is the image of the `j`-th source basis vector.
    pub cols: Vec<SpVec>,
}

impl LinMap {
    pub fn zero(field: Field, rows: usize, cols: usize) -> LinMap {
        LinMap { field, rows, cols: vec![SpVec::new(); cols] }
    }

    pub fn identity(field: Field, n: usize) -> LinMap {
        LinMap { field, rows: n, cols: (0..n as u32).map(SpVec::unit).collect() }
    }

    pub fn ncols(&self) -> usize {
        self.cols.len()
    }

    pub fn from_dense(m: &MatF) -> LinMap {
        LinMap { field: m.field(), rows: m.rows(), cols: (0..m.cols()).map(|c| SpVec::from_dense(&m.col(c))).collect() }
    }

    pub fn to_dense(&self) -> MatF {
        let cols: Vec<Vec<Elem>> = self.cols.iter().map(|c| c.to_dense(self.rows)).collect();
        MatF::from_cols(self.field, self.rows, &cols)
    }

    /// Image of a sparse vector.
    pub fn apply(&self, v: &SpVec) -> SpVec {
        let k = self.field;
        match v.nnz() {
            0 => SpVec::new(),
            1 => {
                let (j, x) = v.entries()[0];
                self.cols[j as usize].scale(k, x)
            }
            _ => {
                let mut pairs = Vec::new();
                for &(j, x) in v.entries() {
                    for &(i, y) in self.cols[j as usize].entries() {
                        pairs.push((i, k.mul(x, y)));
                    }
                }
                SpVec::from_pairs(k, pairs)
            }
        }
    }

    /// `self ∘ other`.
    pub fn compose(&self, other: &LinMap) -> LinMap {
        assert_eq!(other.rows, self.ncols(), "composition shape mismatch");
        LinMap { field: self.field, rows: self.rows, cols: other.cols.iter().map(|c| self.apply(c)).collect() }
    }

    pub fn is_identity(&self) -> bool {
        self.rows == self.ncols() && self.cols.iter().enumerate().all(|(j, c)| c.entries() == [(j as u32, 1)])
    }

    pub fn transpose(&self) -> LinMap {
        let mut buckets: Vec<Vec<(u32, Elem)>> = vec![Vec::new(); self.rows];
        for (j, c) in self.cols.iter().enumerate() {
            for &(i, x) in c.entries() {
                buckets[i as usize].push((j as u32, x));
            }
        }
        LinMap { field: self.field, rows: self.ncols(), cols: buckets.into_iter().map(SpVec::from_sorted).collect() }
    }

    pub fn direct_sum(&self, other: &LinMap) -> LinMap {
        let off = self.rows as u32;
        let mut cols = self.cols.clone();
        cols.extend(other.cols.iter().map(|c| SpVec::from_sorted(c.entries().iter().map(|&(i, x)| (i + off, x)).collect())));
        LinMap { field: self.field, rows: self.rows + other.rows, cols }
    }

    /// Kronecker product; basis index `(i, j)` becomes `i * other_dim + j`.
    pub fn kron(&self, other: &LinMap) -> LinMap {
        let k = self.field;
        let r2 = other.rows as u32;
        let mut cols = Vec::with_capacity(self.ncols() * other.ncols());
        for a in &self.cols {
            for b in &other.cols {
                let mut e = Vec::with_capacity(a.nnz() * b.nnz());
                for &(i, x) in a.entries() {
                    for &(j, y) in b.entries() {
                        e.push((i * r2 + j, k.mul(x, y)));
                    }
                }
                cols.push(SpVec::from_sorted(e));
            }
        }
        LinMap { field: k, rows: self.rows * other.rows, cols }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactla::Subspace;

    struct Lcg(u64);
    impl Lcg {
        fn next(&mut self, n: u32) -> u32 {
            self.0 = self.0.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            ((self.0 >> 33) % n as u64) as u32
        }
    }

    fn random_sparse(k: Field, rng: &mut Lcg, rows: usize, cols: usize, density: u32) -> MatF {
        let mut m = MatF::zeros(k, rows, cols);
        for r in 0..rows {
            for c in 0..cols {
                if rng.next(100) < density {
                    m[(r, c)] = rng.next(k.q()) as u8;
                }
            }
        }
        m
    }

    #[test]
    fn sparse_and_dense_agree() {
        for q in [2, 3, 4, 5] {
            let k = Field::of(q);
            let mut rng = Lcg(q as u64 * 31 + 1);
            for t in 0..100 {
                let (r, c) = (1 + rng.next(12) as usize, 1 + rng.next(12) as usize);
                let m = random_sparse(k, &mut rng, r, c, 10 + (t % 5) * 15);
                let sp = SpMat::from_dense(&m);
                let el = sp.eliminate();
                assert_eq!(el.rank(), m.rank());
                let kv = el.kernel_vectors();
                assert_eq!(kv.len(), c - m.rank());
                for (_, v) in &kv {
                    assert!(sp.mul_vec(v).is_zero());
                }
                let dense_ker = Subspace::from_rows(m.kernel_rows());
                let sparse_ker =
                    Subspace::from_vectors(k, c, kv.iter().map(|(_, v)| v.to_dense(c)).collect::<Vec<_>>().as_slice());
                assert_eq!(dense_ker, sparse_ker);
            }
        }
    }

    #[test]
    fn echelon_insertion_tracks_rank() {
        let k = Field::of(3);
        let mut rng = Lcg(5);
        for _ in 0..50 {
            let m = random_sparse(k, &mut rng, 8, 10, 30);
            let mut ech = SpEchelon::new(k, 10);
            for r in 0..m.rows() {
                ech.insert(&SpVec::from_dense(m.row(r)));
            }
            assert_eq!(ech.rank(), m.rank());
            for r in 0..m.rows() {
                assert!(ech.contains(&SpVec::from_dense(m.row(r))));
            }
        }
    }

    #[test]
    fn axpy_cancels() {
        let k = Field::of(5);
        let a = SpVec::from_dense(&[1, 0, 2, 3]);
        let z = a.axpy(k, 4, &a);
        assert!(z.is_zero());
    }
}
