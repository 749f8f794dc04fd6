use super::MobiusError;
use crate::exactla::{Field, Subspace};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Poset {
    leq: Vec<Vec<bool>>,
    meet: Option<Vec<Vec<usize>>>,
    /// A linear extension: `x < y` implies `x` comes first.
    order: Vec<usize>,
}

impl Poset {
    pub fn new(leq: Vec<Vec<bool>>) -> Result<Poset, MobiusError> {
        let n = leq.len();
        if leq.iter().any(|r| r.len() != n) {
            return Err(MobiusError::Invalid("order relation is not square".into()));
        }
        for x in 0..n {
            if !leq[x][x] {
                return Err(MobiusError::Invalid(format!("{x} ≤ {x} fails")));
            }
            for y in 0..n {
                if x != y && leq[x][y] && leq[y][x] {
                    return Err(MobiusError::Invalid(format!("{x} and {y} violate antisymmetry")));
                }
                for z in 0..n {
                    if leq[x][y] && leq[y][z] && !leq[x][z] {
                        return Err(MobiusError::Invalid(format!("{x} ≤ {y} ≤ {z} violates transitivity")));
                    }
                }
            }
        }
        let mut order: Vec<usize> = (0..n).collect();
        order.sort_by_key(|&y| (0..n).filter(|&x| leq[x][y]).count());
        let meet = (0..n)
            .map(|x| {
                (0..n)
                    .map(|y| {
                        let lower: Vec<usize> = (0..n).filter(|&z| leq[z][x] && leq[z][y]).collect();
                        lower.iter().copied().find(|&m| lower.iter().all(|&z| leq[z][m]))
                    })
                    .collect::<Option<Vec<usize>>>()
            })
            .collect::<Option<Vec<_>>>();
        Ok(Poset { leq, meet, order })
    }

    pub fn len(&self) -> usize {
        self.leq.len()
    }
    pub fn is_empty(&self) -> bool {
        self.leq.is_empty()
    }
    pub fn leq(&self, x: usize, y: usize) -> bool {
        self.leq[x][y]
    }
    /// The greatest lower bound, when every pair has one.
    pub fn meet(&self, x: usize, y: usize) -> Option<usize> {
        self.meet.as_ref().map(|m| m[x][y])
    }
    pub fn has_meets(&self) -> bool {
        self.meet.is_some()
    }
    pub fn top(&self) -> Option<usize> {
        (0..self.len()).find(|&t| (0..self.len()).all(|x| self.leq[x][t]))
    }

    /// Subsets of `{0..n−1}` under inclusion, indexed by bitmask.
    pub fn boolean(n: usize) -> Poset {
        let size = 1usize << n;
        Poset::new((0..size).map(|a| (0..size).map(|b| a & !b == 0).collect()).collect()).expect("inclusion is an order")
    }

    /// Subspaces of `F_q^n` under inclusion, in [`Subspace::enumerate_all`] order.
    pub fn subspaces(field: Field, n: usize) -> (Poset, Vec<Subspace>) {
        let subs = Subspace::enumerate_all(field, n);
        let leq = subs.iter().map(|a| subs.iter().map(|b| b.contains_subspace(a)).collect()).collect();
        (Poset::new(leq).expect("inclusion is an order"), subs)
    }

    /// `μ(x, x) = 1`, `Σ_{x ≤ z ≤ y} μ(x, z) = 0` for `x < y`, zero when `x ≰ y`.
    pub fn mobius(&self) -> Vec<Vec<i64>> {
        let n = self.len();
        let mut mu = vec![vec![0i64; n]; n];
        for x in 0..n {
            for &y in &self.order {
                if x == y {
                    mu[x][y] = 1;
                } else if self.leq[x][y] {
                    mu[x][y] = -(0..n).filter(|&z| z != y && self.leq[x][z] && self.leq[z][y]).map(|z| mu[x][z]).sum::<i64>();
                }
            }
        }
        mu
    }
}
