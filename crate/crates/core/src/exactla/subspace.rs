//! Subspaces of F_q^n stored by their reduced row-echelon basis, which is unique per
//! subspace, so equality and hashing are structural.

use super::dense::MatF;
use super::field::{Elem, Field};
use super::LinAlgError;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Subspace {
    basis: MatF,
    pivots: Vec<usize>,
}

/// Section basis and projection for a quotient `V/W`.
#[derive(Clone, Debug)]
pub struct QuotientData {
    /// Columns are the standard vectors `e_j` for non-pivot `j`, a section of `V -> V/W`.
    pub section: MatF,
    /// `(n - dim W) x n` matrix sending `x` to its class coordinates.
    pub projection: MatF,
}

impl Subspace {
    pub fn zero(field: Field, n: usize) -> Subspace {
        Subspace { basis: MatF::zeros(field, 0, n), pivots: Vec::new() }
    }

    pub fn full(field: Field, n: usize) -> Subspace {
        Subspace { basis: MatF::identity(field, n), pivots: (0..n).collect() }
    }

    /// Row space of `m`.
    pub fn from_rows(m: MatF) -> Subspace {
        let r = m.rref();
        Subspace { basis: r.matrix, pivots: r.pivots }
    }

    pub fn from_vectors(field: Field, n: usize, vs: &[Vec<Elem>]) -> Subspace {
        Subspace::from_rows(MatF::from_rows(field, n, vs))
    }

    /// Column space of `m`.
    pub fn column_space(m: &MatF) -> Subspace {
        Subspace::from_rows(m.transpose())
    }

    /// `{x : A x = 0}`.
    pub fn kernel(a: &MatF) -> Subspace {
        Subspace::from_rows(a.kernel_rows())
    }

    pub fn field(&self) -> Field {
        self.basis.field()
    }
    pub fn ambient(&self) -> usize {
        self.basis.cols()
    }
    pub fn dim(&self) -> usize {
        self.basis.rows()
    }
    pub fn is_zero(&self) -> bool {
        self.dim() == 0
    }
    pub fn is_full(&self) -> bool {
        self.dim() == self.ambient()
    }
    /// Echelon basis as rows.
    pub fn basis(&self) -> &MatF {
        &self.basis
    }
    /// Echelon basis as the columns of an `n x dim` inclusion matrix.
    pub fn inclusion(&self) -> MatF {
        self.basis.transpose()
    }
    pub fn pivots(&self) -> &[usize] {
        &self.pivots
    }

    fn check(&self, other: &Subspace, op: &'static str) -> Result<(), LinAlgError> {
        if self.ambient() != other.ambient() {
            return Err(LinAlgError::DimensionMismatch {
                op,
                left: (self.dim(), self.ambient()),
                right: (other.dim(), other.ambient()),
            });
        }
        Ok(())
    }

    pub fn contains(&self, v: &[Elem]) -> bool {
        self.coordinates(v).is_some()
    }

    pub fn contains_subspace(&self, other: &Subspace) -> bool {
        (0..other.dim()).all(|r| self.contains(other.basis.row(r)))
    }

    /// Coordinates of `v` in the echelon basis, if `v` lies in the subspace.
    pub fn coordinates(&self, v: &[Elem]) -> Option<Vec<Elem>> {
        let k = self.field();
        let mut rest = v.to_vec();
        let mut coords = Vec::with_capacity(self.dim());
        for (i, &pc) in self.pivots.iter().enumerate() {
            let c = rest[pc];
            coords.push(c);
            if c != 0 {
                let nc = k.neg(c);
                for (j, &b) in self.basis.row(i).iter().enumerate() {
                    if b != 0 {
                        rest[j] = k.mul_add(rest[j], nc, b);
                    }
                }
            }
        }
        rest.iter().all(|&x| x == 0).then_some(coords)
    }

    pub fn sum(&self, other: &Subspace) -> Result<Subspace, LinAlgError> {
        self.check(other, "sum")?;
        Ok(Subspace::from_rows(self.basis.vstack(&other.basis)))
    }

    /// Equations cutting out the subspace: rows of a matrix `E` with `ker E = self`.
    pub fn annihilator(&self) -> MatF {
        self.basis.kernel_rows()
    }

    pub fn intersection(&self, other: &Subspace) -> Result<Subspace, LinAlgError> {
        self.check(other, "intersection")?;
        if self.dim() == 0 || other.dim() == 0 {
            return Ok(Subspace::zero(self.field(), self.ambient()));
        }
        let eq = other.annihilator();
        // x = B^T c with E B^T c = 0
        let c = Subspace::kernel(&eq.mul_unchecked(&self.inclusion()));
        Ok(Subspace::from_rows(c.basis.mul_unchecked(&self.basis)))
    }

    /// `{x : f x ∈ target}` for `f : F^n -> F^m`.
    pub fn preimage(f: &MatF, target: &Subspace) -> Result<Subspace, LinAlgError> {
        if f.rows() != target.ambient() {
            return Err(LinAlgError::DimensionMismatch {
                op: "preimage",
                left: (f.rows(), f.cols()),
                right: (target.dim(), target.ambient()),
            });
        }
        let eq = target.annihilator();
        Ok(Subspace::kernel(&eq.mul_unchecked(f)))
    }

    /// `f(self)` for `f : F^n -> F^m`.
    pub fn image(&self, f: &MatF) -> Result<Subspace, LinAlgError> {
        if f.cols() != self.ambient() {
            return Err(LinAlgError::DimensionMismatch {
                op: "image",
                left: (f.rows(), f.cols()),
                right: (self.dim(), self.ambient()),
            });
        }
        Ok(Subspace::column_space(&f.mul_unchecked(&self.inclusion())))
    }

    pub fn quotient_basis(&self) -> QuotientData {
        let k = self.field();
        let n = self.ambient();
        let free: Vec<usize> = (0..n).filter(|c| !self.pivots.contains(c)).collect();
        let mut section = MatF::zeros(k, n, free.len());
        for (j, &c) in free.iter().enumerate() {
            section[(c, j)] = 1;
        }
        // x ↦ residue of x modulo the echelon rows, read at the free columns
        let mut projection = MatF::zeros(k, free.len(), n);
        for x in 0..n {
            let mut e = vec![0; n];
            e[x] = 1;
            for (i, &pc) in self.pivots.iter().enumerate() {
                let c = e[pc];
                if c != 0 {
                    let nc = k.neg(c);
                    for (j, &b) in self.basis.row(i).iter().enumerate() {
                        e[j] = k.mul_add(e[j], nc, b);
                    }
                }
            }
            for (r, &fc) in free.iter().enumerate() {
                projection[(r, x)] = e[fc];
            }
        }
        QuotientData { section, projection }
    }

    /// All subspaces of F_q^n, by dimension then lexicographically by echelon entries.
    pub fn enumerate_all(field: Field, n: usize) -> Vec<Subspace> {
        (0..=n).flat_map(|d| Subspace::enumerate_dim(field, n, d)).collect()
    }

    /// All `d`-dimensional subspaces of F_q^n in a fixed order.
    pub fn enumerate_dim(field: Field, n: usize, d: usize) -> Vec<Subspace> {
        let mut out = Vec::new();
        let q = field.q() as u64;
        for piv in combinations(n, d) {
            // free slots: row i, columns c > piv[i] that are not pivots
            let slots: Vec<(usize, usize)> = (0..d)
                .flat_map(|i| ((piv[i] + 1)..n).filter(|c| !piv.contains(c)).map(move |c| (i, c)))
                .collect();
            let total = q.pow(slots.len() as u32);
            for code in 0..total {
                let mut m = MatF::zeros(field, d, n);
                for (i, &p) in piv.iter().enumerate() {
                    m[(i, p)] = 1;
                }
                let mut c = code;
                for &(i, col) in slots.iter().rev() {
                    m[(i, col)] = (c % q) as u8;
                    c /= q;
                }
                out.push(Subspace { basis: m, pivots: piv.clone() });
            }
        }
        out
    }

    /// Bytes identifying the subspace (echelon entries, row-major).
    pub fn key(&self) -> Vec<u8> {
        let mut k = vec![self.dim() as u8];
        k.extend_from_slice(self.basis.data());
        k
    }
}

/// Increasing `d`-subsets of `0..n` in lexicographic order.
pub fn combinations(n: usize, d: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = Vec::with_capacity(d);
    fn rec(start: usize, n: usize, d: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == d {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            if n - i < d - cur.len() {
                break;
            }
            cur.push(i);
            rec(i + 1, n, d, cur, out);
            cur.pop();
        }
    }
    rec(0, n, d, &mut cur, &mut out);
    out
}

/// Number of `d`-dimensional subspaces of F_q^n.
pub fn gaussian_binomial(q: u64, n: u32, d: u32) -> u64 {
    if d > n {
        return 0;
    }
    let mut num = 1u128;
    let mut den = 1u128;
    for i in 0..d {
        num *= (q as u128).pow(n - i) - 1;
        den *= (q as u128).pow(i + 1) - 1;
    }
    (num / den) as u64
}

#[cfg(test)]
mod tests {
    use super::*;

    fn all_vectors(k: Field, n: usize) -> Vec<Vec<u8>> {
        let q = k.q() as usize;
        (0..q.pow(n as u32))
            .map(|mut c| {
                let mut v = vec![0u8; n];
                for s in v.iter_mut().rev() {
                    *s = (c % q) as u8;
                    c /= q;
                }
                v
            })
            .collect()
    }

    fn members(s: &Subspace) -> Vec<Vec<u8>> {
        all_vectors(s.field(), s.ambient()).into_iter().filter(|v| s.contains(v)).collect()
    }

    #[test]
    fn counts_match_gaussian_binomials() {
        for (q, n) in [(2u32, 3usize), (3, 2), (2, 4), (4, 2)] {
            let k = Field::of(q);
            for d in 0..=n {
                assert_eq!(Subspace::enumerate_dim(k, n, d).len() as u64, gaussian_binomial(q as u64, n as u32, d as u32));
            }
        }
    }

    #[test]
    fn canonical_encoding() {
        let k = Field::of(3);
        let a = Subspace::from_vectors(k, 3, &[vec![1, 2, 0], vec![0, 1, 1]]);
        let b = Subspace::from_vectors(k, 3, &[vec![1, 0, 1], vec![1, 1, 2]]);
        assert_eq!(members(&a).len(), 9);
        assert_eq!(a == b, members(&a) == members(&b));
    }

    #[test]
    fn intersections_of_planes_in_f2_cubed() {
        let k = Field::of(2);
        let planes = Subspace::enumerate_dim(k, 3, 2);
        assert_eq!(planes.len(), 7);
        let mut pairs = 0;
        let all = Subspace::enumerate_all(k, 3);
        for a in &all {
            for b in &all {
                let i = a.intersection(b).unwrap();
                let expect: Vec<Vec<u8>> = members(a).into_iter().filter(|v| b.contains(v)).collect();
                assert_eq!(members(&i), expect);
                if a.dim() == 2 && b.dim() == 2 && a != b {
                    assert_eq!(i.dim(), 1);
                    pairs += 1;
                }
            }
        }
        assert_eq!(pairs, 42);
        // unordered distinct pairs among all subspaces of F_2^3 of dimension two
        assert_eq!(pairs / 2, 21);
    }

    #[test]
    fn preimage_image_quotient() {
        let k = Field::of(3);
        let f = MatF::from_rows(k, 3, &[vec![1, 0, 2], vec![0, 1, 1]]);
        let w = Subspace::from_vectors(k, 2, &[vec![1, 1]]);
        let pre = Subspace::preimage(&f, &w).unwrap();
        let expect: Vec<Vec<u8>> = all_vectors(k, 3).into_iter().filter(|x| w.contains(&f.mul_vec(x))).collect();
        assert_eq!(members(&pre), expect);
        assert_eq!(Subspace::preimage(&MatF::identity(k, 2), &w).unwrap(), w);
        let im = pre.image(&f).unwrap();
        assert!(w.contains_subspace(&im));
        let qd = w.quotient_basis();
        assert_eq!(qd.projection.mul(&qd.section).unwrap(), MatF::identity(k, 1));
        for r in 0..w.dim() {
            assert!(qd.projection.mul_vec(w.basis().row(r)).iter().all(|&x| x == 0));
        }
        assert_eq!(pre.intersection(&pre).unwrap(), pre);
    }
}
