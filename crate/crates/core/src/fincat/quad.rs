//! Quadratic and alternating spaces over finite fields.

use crate::exactla::{Elem, Field, MatF, Subspace};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum FormKind {
    /// `q(x) = Σ_{i≤j} c_ij x_i x_j`.
    Quadratic,
    /// Alternating bilinear form given by its Gram matrix.
    Alternating,
}

/// `F_q^n` with a quadratic form or an alternating bilinear form.
///
/// Quadratic forms are stored as the upper-triangular coefficient table in row-major
/// order `(1,1), (1,2), .., (1,n), (2,2), ..`; alternating forms as the strictly upper
/// Gram entries in the same order.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct QuadSpace {
    field: Field,
    kind: FormKind,
    dim: usize,
    coeffs: Vec<Elem>,
    polar: MatF,
}

fn tri_len(n: usize, kind: FormKind) -> usize {
    match kind {
        FormKind::Quadratic => n * (n + 1) / 2,
        FormKind::Alternating => n * n.saturating_sub(1) / 2,
    }
}

fn tri_pairs(n: usize, kind: FormKind) -> Vec<(usize, usize)> {
    let strict = kind == FormKind::Alternating;
    (0..n).flat_map(|i| ((if strict { i + 1 } else { i })..n).map(move |j| (i, j))).collect()
}

impl QuadSpace {
    pub fn new(field: Field, kind: FormKind, dim: usize, coeffs: Vec<Elem>) -> QuadSpace {
        assert_eq!(coeffs.len(), tri_len(dim, kind), "coefficient table has the wrong length");
        let mut polar = MatF::zeros(field, dim, dim);
        for (&(i, j), &c) in tri_pairs(dim, kind).iter().zip(&coeffs) {
            match kind {
                FormKind::Quadratic if i == j => polar[(i, i)] = field.add(c, c),
                FormKind::Quadratic => {
                    polar[(i, j)] = c;
                    polar[(j, i)] = c;
                }
                FormKind::Alternating => {
                    polar[(i, j)] = c;
                    polar[(j, i)] = field.neg(c);
                }
            }
        }
        QuadSpace { field, kind, dim, coeffs, polar }
    }

    pub fn zero(field: Field, kind: FormKind, dim: usize) -> QuadSpace {
        QuadSpace::new(field, kind, dim, vec![0; tri_len(dim, kind)])
    }

    /// The hyperbolic plane: `(x, y) ↦ xy`, or `((x,y),(x',y')) ↦ xy' - yx'`.
    pub fn hyperbolic(field: Field, kind: FormKind) -> QuadSpace {
        match kind {
            FormKind::Quadratic => QuadSpace::new(field, kind, 2, vec![0, 1, 0]),
            FormKind::Alternating => QuadSpace::new(field, kind, 2, vec![1]),
        }
    }

    /// One-dimensional quadratic form `x ↦ a x²`.
    pub fn diagonal(field: Field, entries: &[Elem]) -> QuadSpace {
        let n = entries.len();
        let mut c = Vec::with_capacity(tri_len(n, FormKind::Quadratic));
        for i in 0..n {
            for j in i..n {
                c.push(if i == j { entries[i] } else { 0 });
            }
        }
        QuadSpace::new(field, FormKind::Quadratic, n, c)
    }

    /// Orthogonal power of the hyperbolic plane.
    pub fn hyperbolic_power(field: Field, kind: FormKind, n: usize) -> QuadSpace {
        let h = QuadSpace::hyperbolic(field, kind);
        (0..n).fold(QuadSpace::zero(field, kind, 0), |acc, _| acc.orthogonal_sum(&h))
    }

    /// All forms of the given kind on F_q^n, in lexicographic order of coefficients.
    pub fn enumerate(field: Field, kind: FormKind, n: usize) -> Vec<QuadSpace> {
        let len = tri_len(n, kind);
        let q = field.q() as u64;
        (0..q.pow(len as u32))
            .map(|mut code| {
                let mut c = vec![0u8; len];
                for s in c.iter_mut().rev() {
                    *s = (code % q) as u8;
                    code /= q;
                }
                QuadSpace::new(field, kind, n, c)
            })
            .collect()
    }

    pub fn field(&self) -> Field {
        self.field
    }
    pub fn kind(&self) -> FormKind {
        self.kind
    }
    pub fn dim(&self) -> usize {
        self.dim
    }
    pub fn coeffs(&self) -> &[Elem] {
        &self.coeffs
    }
    /// Gram matrix of the polar (or alternating) bilinear form.
    pub fn polar(&self) -> &MatF {
        &self.polar
    }

    /// `q(x)`; identically zero for alternating spaces.
    pub fn value(&self, x: &[Elem]) -> Elem {
        if self.kind == FormKind::Alternating {
            return 0;
        }
        let k = self.field;
        tri_pairs(self.dim, self.kind)
            .iter()
            .zip(&self.coeffs)
            .fold(0, |acc, (&(i, j), &c)| if c == 0 { acc } else { k.add(acc, k.mul(c, k.mul(x[i], x[j]))) })
    }

    pub fn bilinear(&self, x: &[Elem], y: &[Elem]) -> Elem {
        let k = self.field;
        let by = self.polar.mul_vec(y);
        x.iter().zip(&by).fold(0, |acc, (&a, &b)| k.add(acc, k.mul(a, b)))
    }

    /// `{x : b(x, ·) = 0 and q(x) = 0}`.
    pub fn radical(&self) -> Subspace {
        let k = self.field;
        let kerb = Subspace::kernel(&self.polar);
        if self.kind == FormKind::Alternating || k.p() != 2 || kerb.is_zero() {
            return kerb;
        }
        // on ker b the form is Frobenius-semilinear: q(Σ c_i v_i) = (Σ c_i √q(v_i))²
        let half = (k.q() / 2) as u64;
        let roots: Vec<Elem> = (0..kerb.dim()).map(|i| k.pow(self.value(kerb.basis().row(i)), half)).collect();
        let functional = MatF::from_rows(k, kerb.dim(), &[roots]);
        let coeffs = Subspace::kernel(&functional);
        Subspace::from_rows(coeffs.basis().mul_unchecked(kerb.basis()))
    }

    pub fn is_nondegenerate(&self) -> bool {
        self.radical().is_zero()
    }

    /// Whether the columns of `f` (an injective map into `target`) preserve the form.
    pub fn is_isometry(&self, f: &MatF, target: &QuadSpace) -> bool {
        if f.cols() != self.dim || f.rows() != target.dim || self.kind != target.kind {
            return false;
        }
        let cols: Vec<Vec<Elem>> = (0..self.dim).map(|j| f.col(j)).collect();
        for i in 0..self.dim {
            if target.value(&cols[i]) != self.value(&unit(self.dim, i)) {
                return false;
            }
            for j in i + 1..self.dim {
                if target.bilinear(&cols[i], &cols[j]) != self.polar[(i, j)] {
                    return false;
                }
            }
        }
        true
    }

    pub fn orthogonal_sum(&self, other: &QuadSpace) -> QuadSpace {
        assert_eq!(self.kind, other.kind);
        let n = self.dim + other.dim;
        let get = |s: &QuadSpace, i: usize, j: usize| -> Elem {
            let pairs = tri_pairs(s.dim, s.kind);
            pairs.iter().position(|&p| p == (i, j)).map(|p| s.coeffs[p]).unwrap_or(0)
        };
        let coeffs = tri_pairs(n, self.kind)
            .into_iter()
            .map(|(i, j)| {
                if j < self.dim {
                    get(self, i, j)
                } else if i >= self.dim {
                    get(other, i - self.dim, j - self.dim)
                } else {
                    0
                }
            })
            .collect();
        QuadSpace::new(self.field, self.kind, n, coeffs)
    }

    /// Pullback of the form along `f : F^m -> F^n`.
    pub fn pullback(&self, f: &MatF) -> QuadSpace {
        let m = f.cols();
        let cols: Vec<Vec<Elem>> = (0..m).map(|j| f.col(j)).collect();
        let coeffs = tri_pairs(m, self.kind)
            .into_iter()
            .map(|(i, j)| match self.kind {
                FormKind::Quadratic if i == j => self.value(&cols[i]),
                _ => self.bilinear(&cols[i], &cols[j]),
            })
            .collect();
        QuadSpace::new(self.field, self.kind, m, coeffs)
    }

    /// Square class of the discriminant of a complement of the radical (odd characteristic).
    /// Together with dimension and radical dimension this classifies forms up to isometry.
    pub fn invariants(&self) -> (usize, usize, bool) {
        let k = self.field;
        let rad = self.radical();
        let qd = rad.quotient_basis();
        let complement = self.pullback(&qd.section);
        let det = determinant(complement.polar());
        let square = det == 0 || k.pow(det, ((k.q() - 1) / 2) as u64) == 1;
        (self.dim, rad.dim(), square)
    }

    pub fn key(&self) -> Vec<u8> {
        let mut key = vec![self.kind as u8, self.dim as u8];
        key.extend_from_slice(&self.coeffs);
        key
    }
}

fn unit(n: usize, i: usize) -> Vec<Elem> {
    let mut v = vec![0; n];
    v[i] = 1;
    v
}

/// Determinant by elimination.
pub fn determinant(m: &MatF) -> Elem {
    assert!(m.is_square());
    let k = m.field();
    let n = m.rows();
    let mut a = m.clone();
    let mut det = 1u8;
    for c in 0..n {
        let Some(p) = (c..n).find(|&r| a[(r, c)] != 0) else { return 0 };
        if p != c {
            for j in 0..n {
                let t = a[(p, j)];
                a[(p, j)] = a[(c, j)];
                a[(c, j)] = t;
            }
            det = k.neg(det);
        }
        det = k.mul(det, a[(c, c)]);
        let inv = k.inv(a[(c, c)]).unwrap();
        for r in c + 1..n {
            let f = k.mul(a[(r, c)], inv);
            if f == 0 {
                continue;
            }
            for j in c..n {
                a[(r, j)] = k.sub(a[(r, j)], k.mul(f, a[(c, j)]));
            }
        }
    }
    det
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn polar_is_symmetric_and_alternating_in_char_two() {
        for q in [2u32, 3, 4] {
            let k = Field::of(q);
            for s in QuadSpace::enumerate(k, FormKind::Quadratic, 2) {
                assert_eq!(s.polar().transpose(), *s.polar());
                if k.p() == 2 {
                    assert!((0..2).all(|i| s.polar()[(i, i)] == 0));
                }
            }
        }
    }

    #[test]
    fn polar_identity_holds() {
        let k = Field::of(3);
        for s in QuadSpace::enumerate(k, FormKind::Quadratic, 2) {
            for a in 0..9u8 {
                for b in 0..9u8 {
                    let x = [a / 3, a % 3];
                    let y = [b / 3, b % 3];
                    let xy = [k.add(x[0], y[0]), k.add(x[1], y[1])];
                    let lhs = k.sub(k.sub(s.value(&xy), s.value(&x)), s.value(&y));
                    assert_eq!(lhs, s.bilinear(&x, &y));
                }
            }
        }
    }

    #[test]
    fn radical_in_characteristic_two() {
        let k = Field::of(2);
        // x² has zero polar form but no nonzero isotropic vector
        let s = QuadSpace::diagonal(k, &[1]);
        assert!(s.polar().is_zero());
        assert!(s.radical().is_zero());
        let z = QuadSpace::zero(k, FormKind::Quadratic, 2);
        assert_eq!(z.radical().dim(), 2);
        // x² + y² on F_2²: radical is the line x = y
        let d = QuadSpace::diagonal(k, &[1, 1]);
        assert_eq!(d.radical(), Subspace::from_vectors(k, 2, &[vec![1, 1]]));
        assert!(QuadSpace::hyperbolic(k, FormKind::Quadratic).is_nondegenerate());
    }

    #[test]
    fn hyperbolic_forms() {
        let k = Field::of(3);
        let h = QuadSpace::hyperbolic(k, FormKind::Quadratic);
        assert_eq!(h.value(&[2, 2]), 1);
        let w = QuadSpace::hyperbolic(k, FormKind::Alternating);
        assert_eq!(w.bilinear(&[1, 0], &[0, 1]), 1);
        assert_eq!(w.bilinear(&[0, 1], &[1, 0]), 2);
        let h2 = QuadSpace::hyperbolic_power(k, FormKind::Quadratic, 2);
        assert_eq!(h2.dim(), 4);
        assert!(h2.is_nondegenerate());
    }

    #[test]
    fn invariants_separate_classes_f3_dim2() {
        let k = Field::of(3);
        let classes: std::collections::HashSet<_> =
            QuadSpace::enumerate(k, FormKind::Quadratic, 2).iter().map(|s| s.invariants()).collect();
        // rad 2; rad 1 with two square classes; nondegenerate with two classes
        assert_eq!(classes.len(), 5);
    }
}
