use serde::Serialize;

use super::eval::{binomial, tuples};
use super::{div_power, ext_power, sym_power};
use crate::exactla::{Field, LinMap, MatF, SpVec};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum ExpFamily {
    Sym,
    Ext,
    Div,
}

impl ExpFamily {
    pub fn parse(s: &str) -> Option<ExpFamily> {
        match s {
            "S" | "sym" => Some(ExpFamily::Sym),
            "L" | "ext" | "lambda" => Some(ExpFamily::Ext),
            "G" | "div" | "gamma" => Some(ExpFamily::Div),
            _ => None,
        }
    }

    pub fn power(self, a: &MatF, n: usize) -> LinMap {
        match self {
            ExpFamily::Sym => sym_power(a, n),
            ExpFamily::Ext => ext_power(a, n),
            ExpFamily::Div => div_power(a, n),
        }
    }

    fn strict(self) -> bool {
        self == ExpFamily::Ext
    }

    pub fn dim(self, v: usize, n: usize) -> usize {
        tuples(v, n, self.strict()).len()
    }
}

/// `Φ : ⊕_{i+j=n} E^i(U) ⊗ E^j(V) → E^n(U ⊕ V)`, blocks ordered by `i`, and inside a
/// block the tensor index `a · dim E^j(V) + b`. Monomial bases make it a permutation.
fn splitting(k: Field, family: ExpFamily, u: usize, v: usize, n: usize) -> LinMap {
    let strict = family.strict();
    let target = tuples(u + v, n, strict);
    let mut cols = Vec::new();
    for i in 0..=n {
        let (ta, tb) = (tuples(u, i, strict), tuples(v, n - i, strict));
        for a in &ta.list {
            for b in &tb.list {
                let mut t = a.clone();
                t.extend(b.iter().map(|&x| x + u as u8));
                cols.push(SpVec::unit(target.index(&t)));
            }
        }
    }
    LinMap { field: k, rows: target.len(), cols }
}

fn block_sum(family: ExpFamily, f: &MatF, g: &MatF, n: usize) -> LinMap {
    let k = f.field();
    let mut acc = LinMap::zero(k, 0, 0);
    for i in 0..=n {
        acc = acc.direct_sum(&family.power(f, i).kron(&family.power(g, n - i)));
    }
    acc
}

#[derive(Clone, Debug, Default, Serialize)]
pub struct ExponentialReport {
    pub pairs: u64,
    pub naturality_squares: u64,
    pub failures: u64,
    pub unit_ok: bool,
    pub dims_ok: bool,
    pub tensor_dims_ok: bool,
    pub witnesses: Vec<String>,
}

impl ExponentialReport {
    pub fn passed(&self) -> bool {
        self.failures == 0 && self.unit_ok && self.dims_ok && self.tensor_dims_ok
    }
}

/// Checks `E(U ⊕ V) ≅ E(U) ⊗ E(V)` in degrees `≤ degmax` for all `dim U + dim V ≤ dmax`:
/// the monomial splitting is invertible and natural for every `f ⊕ id` and `id ⊕ g`
/// with `f`, `g` ranging over all matrices in range.
pub fn exponential_check(family: ExpFamily, field: Field, dmax: usize, degmax: usize) -> ExponentialReport {
    let k = field;
    let mut rep = ExponentialReport {
        unit_ok: (0..=degmax).all(|n| family.dim(0, n) == (n == 0) as usize),
        dims_ok: true,
        tensor_dims_ok: true,
        ..Default::default()
    };
    let square = |rep: &mut ExponentialReport, f: &MatF, g: &MatF, n: usize, what: &str| {
        let (u, v, u2, v2) = (f.cols(), g.cols(), f.rows(), g.rows());
        let phi = splitting(k, family, u, v, n);
        let phi2 = splitting(k, family, u2, v2, n);
        let lhs = family.power(&f.direct_sum(g), n).compose(&phi);
        let rhs = phi2.compose(&block_sum(family, f, g, n));
        rep.naturality_squares += 1;
        if lhs != rhs {
            rep.failures += 1;
            if rep.witnesses.len() < 8 {
                rep.witnesses.push(format!("{what}: degree {n}, shapes {u}->{u2}, {v}->{v2}"));
            }
        }
    };
    for u in 0..=dmax {
        for v in 0..=dmax - u {
            rep.pairs += 1;
            for n in 0..=degmax {
                let split_dim: usize = (0..=n).map(|i| family.dim(u, i) * family.dim(v, n - i)).sum();
                let phi = splitting(k, family, u, v, n);
                let bijective = phi.ncols() == phi.rows && {
                    let mut hit = vec![false; phi.rows];
                    phi.cols.iter().all(|c| !std::mem::replace(&mut hit[c.entries()[0].0 as usize], true))
                };
                if split_dim != family.dim(u + v, n) || !bijective {
                    rep.dims_ok = false;
                }
                let tdim: usize = (0..=n).map(|i| binomial(n, i) * u.pow(i as u32) * v.pow((n - i) as u32)).sum();
                if tdim != (u + v).pow(n as u32) {
                    rep.tensor_dims_ok = false;
                }
                let idv = MatF::identity(k, v);
                let idu = MatF::identity(k, u);
                for u2 in 0..=dmax - v {
                    for f in MatF::enumerate(k, u2, u) {
                        square(&mut rep, &f, &idv, n, "naturality in U");
                    }
                }
                for v2 in 0..=dmax - u {
                    for g in MatF::enumerate(k, v2, v) {
                        square(&mut rep, &idu, &g, n, "naturality in V");
                    }
                }
            }
        }
    }
    rep
}

#[derive(Clone, Debug, Default, Serialize)]
pub struct ConvolutionReport {
    pub degrees_checked: usize,
    pub failures: Vec<usize>,
}

impl ConvolutionReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

/// `E^n(f + g) = μ ∘ (⊕ E^i f ⊗ E^{n−i} g) ∘ Δ` where the comultiplication is
/// `Φ⁻¹ ∘ E(diagonal)` and the multiplication `E(sum) ∘ Φ`.
pub fn convolution_check(family: ExpFamily, f: &MatF, g: &MatF, degmax: usize) -> ConvolutionReport {
    assert_eq!((f.rows(), f.cols()), (g.rows(), g.cols()), "f and g must have the same shape");
    let k = f.field();
    let (w, v) = (f.rows(), f.cols());
    let diag = MatF::identity(k, v).vstack(&MatF::identity(k, v));
    let fold = MatF::identity(k, w).hstack(&MatF::identity(k, w));
    let sum = f.add(g).expect("same shape");
    let mut rep = ConvolutionReport::default();
    for n in 0..=degmax {
        let phi_v = splitting(k, family, v, v, n);
        let phi_w = splitting(k, family, w, w, n);
        let comult = phi_v.transpose().compose(&family.power(&diag, n));
        let mult = family.power(&fold, n).compose(&phi_w);
        let conv = mult.compose(&block_sum(family, f, g, n)).compose(&comult);
        rep.degrees_checked += 1;
        if conv != family.power(&sum, n) {
            rep.failures.push(n);
        }
    }
    rep
}
