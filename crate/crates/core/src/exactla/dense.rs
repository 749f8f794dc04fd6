//! Dense matrices over a finite field. A `rows x cols` matrix acts on column vectors,
//! so it represents a linear map `F^cols -> F^rows`.

use std::fmt;

use super::field::{Elem, Field};
use super::LinAlgError;

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct MatF {
    field: Field,
    rows: usize,
    cols: usize,
    data: Vec<Elem>,
}

impl fmt::Debug for MatF {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?} {}x{} [", self.field, self.rows, self.cols)?;
        for r in 0..self.rows {
            if r > 0 {
                write!(f, "; ")?;
            }
            for c in 0..self.cols {
                if c > 0 {
                    write!(f, " ")?;
                }
                write!(f, "{}", self[(r, c)])?;
            }
        }
        write!(f, "]")
    }
}

impl std::ops::Index<(usize, usize)> for MatF {
    type Output = Elem;
    #[inline]
    fn index(&self, (r, c): (usize, usize)) -> &Elem {
        &self.data[r * self.cols + c]
    }
}

impl std::ops::IndexMut<(usize, usize)> for MatF {
    #[inline]
    fn index_mut(&mut self, (r, c): (usize, usize)) -> &mut Elem {
        &mut self.data[r * self.cols + c]
    }
}

/// Result of a reduced row-echelon computation.
#[derive(Clone, Debug)]
pub struct Rref {
    pub matrix: MatF,
    pub pivots: Vec<usize>,
}

impl MatF {
    pub fn zeros(field: Field, rows: usize, cols: usize) -> MatF {
        MatF { field, rows, cols, data: vec![0; rows * cols] }
    }

    pub fn identity(field: Field, n: usize) -> MatF {
        let mut m = MatF::zeros(field, n, n);
        for i in 0..n {
            m[(i, i)] = 1;
        }
        m
    }

    /// Builds a matrix from row-major entries; entries are reduced into the field.
    pub fn from_data(field: Field, rows: usize, cols: usize, data: Vec<Elem>) -> MatF {
        assert_eq!(data.len(), rows * cols, "entry count does not match shape");
        debug_assert!(data.iter().all(|&x| (x as u32) < field.q()));
        MatF { field, rows, cols, data }
    }

    pub fn from_rows(field: Field, cols: usize, rows: &[Vec<Elem>]) -> MatF {
        let mut data = Vec::with_capacity(rows.len() * cols);
        for r in rows {
            assert_eq!(r.len(), cols);
            data.extend_from_slice(r);
        }
        MatF { field, rows: rows.len(), cols, data }
    }

    pub fn from_cols(field: Field, rows: usize, cols: &[Vec<Elem>]) -> MatF {
        let mut m = MatF::zeros(field, rows, cols.len());
        for (j, c) in cols.iter().enumerate() {
            assert_eq!(c.len(), rows);
            for (i, &x) in c.iter().enumerate() {
                m[(i, j)] = x;
            }
        }
        m
    }

    pub fn field(&self) -> Field {
        self.field
    }
    pub fn rows(&self) -> usize {
        self.rows
    }
    pub fn cols(&self) -> usize {
        self.cols
    }
    pub fn data(&self) -> &[Elem] {
        &self.data
    }
    pub fn row(&self, r: usize) -> &[Elem] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }
    pub fn col(&self, c: usize) -> Vec<Elem> {
        (0..self.rows).map(|r| self[(r, c)]).collect()
    }
    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|&x| x == 0)
    }
    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn transpose(&self) -> MatF {
        let mut t = MatF::zeros(self.field, self.cols, self.rows);
        for r in 0..self.rows {
            for c in 0..self.cols {
                t[(c, r)] = self[(r, c)];
            }
        }
        t
    }

    pub fn mul(&self, other: &MatF) -> Result<MatF, LinAlgError> {
        if self.cols != other.rows {
            return Err(LinAlgError::DimensionMismatch {
                op: "mul",
                left: (self.rows, self.cols),
                right: (other.rows, other.cols),
            });
        }
        Ok(self.mul_unchecked(other))
    }

    /// Product without the shape check (callers guarantee compatibility).
    pub fn mul_unchecked(&self, other: &MatF) -> MatF {
        let k = self.field;
        let mut out = MatF::zeros(k, self.rows, other.cols);
        for i in 0..self.rows {
            for l in 0..self.cols {
                let a = self[(i, l)];
                if a == 0 {
                    continue;
                }
                let orow = other.row(l);
                let base = i * other.cols;
                for (j, &b) in orow.iter().enumerate() {
                    if b != 0 {
                        out.data[base + j] = k.mul_add(out.data[base + j], a, b);
                    }
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[Elem]) -> Vec<Elem> {
        assert_eq!(v.len(), self.cols);
        let k = self.field;
        (0..self.rows)
            .map(|i| {
                self.row(i)
                    .iter()
                    .zip(v)
                    .fold(0, |acc, (&a, &b)| if a == 0 || b == 0 { acc } else { k.mul_add(acc, a, b) })
            })
            .collect()
    }

    pub fn add(&self, other: &MatF) -> Result<MatF, LinAlgError> {
        if (self.rows, self.cols) != (other.rows, other.cols) {
            return Err(LinAlgError::DimensionMismatch {
                op: "add",
                left: (self.rows, self.cols),
                right: (other.rows, other.cols),
            });
        }
        let k = self.field;
        let data = self.data.iter().zip(&other.data).map(|(&a, &b)| k.add(a, b)).collect();
        Ok(MatF { field: k, rows: self.rows, cols: self.cols, data })
    }

    pub fn scale(&self, c: Elem) -> MatF {
        let k = self.field;
        MatF { field: k, rows: self.rows, cols: self.cols, data: self.data.iter().map(|&a| k.mul(c, a)).collect() }
    }

    /// Block diagonal sum `self ⊕ other`.
    pub fn direct_sum(&self, other: &MatF) -> MatF {
        let mut m = MatF::zeros(self.field, self.rows + other.rows, self.cols + other.cols);
        for r in 0..self.rows {
            for c in 0..self.cols {
                m[(r, c)] = self[(r, c)];
            }
        }
        for r in 0..other.rows {
            for c in 0..other.cols {
                m[(self.rows + r, self.cols + c)] = other[(r, c)];
            }
        }
        m
    }

    /// Kronecker product, row index `(i, k)` maps to `i * other.rows + k`.
    pub fn kron(&self, other: &MatF) -> MatF {
        let k = self.field;
        let mut m = MatF::zeros(k, self.rows * other.rows, self.cols * other.cols);
        for i in 0..self.rows {
            for j in 0..self.cols {
                let a = self[(i, j)];
                if a == 0 {
                    continue;
                }
                for r in 0..other.rows {
                    for c in 0..other.cols {
                        m[(i * other.rows + r, j * other.cols + c)] = k.mul(a, other[(r, c)]);
                    }
                }
            }
        }
        m
    }

    pub fn vstack(&self, other: &MatF) -> MatF {
        assert_eq!(self.cols, other.cols);
        let mut data = self.data.clone();
        data.extend_from_slice(&other.data);
        MatF { field: self.field, rows: self.rows + other.rows, cols: self.cols, data }
    }

    pub fn hstack(&self, other: &MatF) -> MatF {
        assert_eq!(self.rows, other.rows);
        let mut m = MatF::zeros(self.field, self.rows, self.cols + other.cols);
        for r in 0..self.rows {
            for c in 0..self.cols {
                m[(r, c)] = self[(r, c)];
            }
            for c in 0..other.cols {
                m[(r, self.cols + c)] = other[(r, c)];
            }
        }
        m
    }

    pub fn select_rows(&self, idx: &[usize]) -> MatF {
        let mut data = Vec::with_capacity(idx.len() * self.cols);
        for &i in idx {
            data.extend_from_slice(self.row(i));
        }
        MatF { field: self.field, rows: idx.len(), cols: self.cols, data }
    }

    pub fn select_cols(&self, idx: &[usize]) -> MatF {
        let mut m = MatF::zeros(self.field, self.rows, idx.len());
        for r in 0..self.rows {
            for (j, &c) in idx.iter().enumerate() {
                m[(r, j)] = self[(r, c)];
            }
        }
        m
    }

    /// Reduced row-echelon form. Pivots are chosen at the lowest remaining row index in
    /// each column, scanning columns left to right.
    pub fn rref(&self) -> Rref {
        let k = self.field;
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..m.cols {
            if r == m.rows {
                break;
            }
            let Some(pr) = (r..m.rows).find(|&i| m[(i, c)] != 0) else { continue };
            if pr != r {
                for j in 0..m.cols {
                    m.data.swap(pr * m.cols + j, r * m.cols + j);
                }
            }
            let inv = k.inv(m[(r, c)]).expect("pivot is nonzero");
            for j in c..m.cols {
                m[(r, j)] = k.mul(inv, m[(r, j)]);
            }
            for i in 0..m.rows {
                if i == r {
                    continue;
                }
                let f = m[(i, c)];
                if f == 0 {
                    continue;
                }
                let nf = k.neg(f);
                for j in c..m.cols {
                    let b = m[(r, j)];
                    if b != 0 {
                        m[(i, j)] = k.mul_add(m[(i, j)], nf, b);
                    }
                }
            }
            pivots.push(c);
            r += 1;
        }
        let rank = pivots.len();
        m.data.truncate(rank * m.cols);
        m.rows = rank;
        Rref { matrix: m, pivots }
    }

    pub fn rank(&self) -> usize {
        self.rref().pivots.len()
    }

    /// Basis of `{x : A x = 0}` as the rows of a reduced echelon matrix.
    pub fn kernel_rows(&self) -> MatF {
        let Rref { matrix, pivots } = self.rref();
        let n = self.cols;
        let k = self.field;
        let free: Vec<usize> = (0..n).filter(|c| !pivots.contains(c)).collect();
        let mut rows = Vec::with_capacity(free.len());
        for &f in &free {
            let mut v = vec![0; n];
            v[f] = 1;
            for (i, &pc) in pivots.iter().enumerate() {
                v[pc] = k.neg(matrix[(i, f)]);
            }
            rows.push(v);
        }
        MatF::from_rows(k, n, &rows).rref().matrix
    }

    pub fn is_injective(&self) -> bool {
        self.rank() == self.cols
    }
    pub fn is_surjective(&self) -> bool {
        self.rank() == self.rows
    }
    pub fn is_invertible(&self) -> bool {
        self.is_square() && self.rank() == self.rows
    }

    pub fn inverse(&self) -> Result<MatF, LinAlgError> {
        if !self.is_invertible() {
            return Err(LinAlgError::Singular);
        }
        let n = self.rows;
        let aug = self.hstack(&MatF::identity(self.field, n)).rref().matrix;
        Ok(aug.select_cols(&(n..2 * n).collect::<Vec<_>>()))
    }

    /// Some `x` with `A x = b`, or `None` if `b` is not in the column space.
    pub fn solve(&self, b: &[Elem]) -> Option<Vec<Elem>> {
        assert_eq!(b.len(), self.rows);
        let k = self.field;
        let bcol = MatF::from_cols(k, self.rows, &[b.to_vec()]);
        let Rref { matrix, pivots } = self.hstack(&bcol).rref();
        if pivots.last() == Some(&self.cols) {
            return None;
        }
        let mut x = vec![0; self.cols];
        for (i, &pc) in pivots.iter().enumerate() {
            x[pc] = matrix[(i, self.cols)];
        }
        Some(x)
    }

    /// Entries reinterpreted as a base-q integer, most significant entry first.
    pub fn lex_index(&self) -> u64 {
        let q = self.field.q() as u64;
        self.data.iter().fold(0u64, |acc, &x| acc * q + x as u64)
    }

    pub fn from_lex_index(field: Field, rows: usize, cols: usize, mut idx: u64) -> MatF {
        let q = field.q() as u64;
        let mut data = vec![0u8; rows * cols];
        for slot in data.iter_mut().rev() {
            *slot = (idx % q) as u8;
            idx /= q;
        }
        MatF { field, rows, cols, data }
    }

    /// All `rows x cols` matrices in lexicographic order of their entries.
    pub fn enumerate(field: Field, rows: usize, cols: usize) -> impl Iterator<Item = MatF> {
        let total = (field.q() as u64).pow((rows * cols) as u32);
        (0..total).map(move |i| MatF::from_lex_index(field, rows, cols, i))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn naive_rank(m: &MatF) -> usize {
        // column-pivoting elimination written independently of `rref`
        let k = m.field();
        let mut rows: Vec<Vec<Elem>> = (0..m.rows()).map(|r| m.row(r).to_vec()).collect();
        let mut rank = 0;
        for c in 0..m.cols() {
            let Some(p) = (rank..rows.len()).find(|&r| rows[r][c] != 0) else { continue };
            rows.swap(rank, p);
            let piv = rows[rank].clone();
            let inv = k.inv(piv[c]).unwrap();
            for r in rank + 1..rows.len() {
                let f = k.mul(rows[r][c], inv);
                for j in 0..m.cols() {
                    rows[r][j] = k.sub(rows[r][j], k.mul(f, piv[j]));
                }
            }
            rank += 1;
        }
        rank
    }

    struct Lcg(u64);
    impl Lcg {
        fn next(&mut self, n: u32) -> u8 {
            self.0 = self.0.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            ((self.0 >> 33) % n as u64) as u8
        }
    }

    #[test]
    fn identity_and_zero_rank() {
        assert_eq!(MatF::identity(Field::of(2), 4).rank(), 4);
        assert_eq!(MatF::zeros(Field::of(3), 3, 5).rank(), 0);
    }

    #[test]
    fn rank_matches_naive_oracle() {
        let k = Field::of(3);
        let mut rng = Lcg(7);
        for _ in 0..200 {
            let data = (0..36).map(|_| rng.next(3)).collect();
            let m = MatF::from_data(k, 6, 6, data);
            assert_eq!(m.rank(), naive_rank(&m));
            assert_eq!(m.rank(), m.transpose().rank());
        }
    }

    #[test]
    fn kernel_small_cases() {
        let k2 = Field::of(2);
        assert_eq!(MatF::identity(k2, 3).kernel_rows().rows(), 0);
        assert_eq!(MatF::zeros(k2, 2, 3).kernel_rows(), MatF::identity(k2, 3));
        let a = MatF::from_rows(k2, 2, &[vec![1, 1]]);
        let ker = a.kernel_rows();
        // enumerate all 4 vectors of F_2^2
        let sols: Vec<Vec<u8>> = (0..4u8)
            .map(|i| vec![i >> 1, i & 1])
            .filter(|v| a.mul_vec(v) == vec![0])
            .filter(|v| v.iter().any(|&x| x != 0))
            .collect();
        assert_eq!(sols, vec![vec![1, 1]]);
        assert_eq!(ker.row(0), &[1, 1]);
    }

    #[test]
    fn inverse_and_solve() {
        let k = Field::of(5);
        let a = MatF::from_rows(k, 2, &[vec![1, 2], vec![3, 4]]);
        let inv = a.inverse().unwrap();
        assert_eq!(a.mul(&inv).unwrap(), MatF::identity(k, 2));
        let x = a.solve(&[1, 0]).unwrap();
        assert_eq!(a.mul_vec(&x), vec![1, 0]);
        let s = MatF::from_rows(k, 2, &[vec![1, 2], vec![2, 4]]);
        assert!(s.inverse().is_err());
        assert!(s.solve(&[1, 0]).is_none());
    }

    #[test]
    fn lex_roundtrip_over_extension() {
        let k = Field::of(4);
        for (i, m) in MatF::enumerate(k, 2, 1).enumerate() {
            assert_eq!(m.lex_index(), i as u64);
        }
    }

    #[test]
    fn kron_is_multiplicative() {
        let k = Field::of(3);
        let a = MatF::from_rows(k, 2, &[vec![1, 2], vec![0, 1]]);
        let b = MatF::from_rows(k, 2, &[vec![2, 1], vec![1, 1]]);
        let lhs = a.kron(&b).mul(&b.kron(&a)).unwrap();
        let rhs = a.mul(&b).unwrap().kron(&b.mul(&a).unwrap());
        assert_eq!(lhs, rhs);
    }
}
