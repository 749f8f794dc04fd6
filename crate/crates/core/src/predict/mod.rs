//! Closed-form stable dimensions in odd characteristic, and the special values in
//! characteristic 2.

use std::fmt;
use std::str::FromStr;

use serde::Serialize;
use thiserror::Error;

#[cfg(test)]
mod tests;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum PredictError {
    #[error("q = {0} is not a prime power")]
    NotPrimePower(u64),
    #[error("characteristic 2: use char2_values")]
    Characteristic2,
    #[error("unknown series {0:?}")]
    UnknownSeries(String),
    #[error("unknown characteristic-2 target {0:?}")]
    UnknownTarget(String),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum AlgebraKind {
    Symmetric,
    DividedPower,
}

/// Free graded-commutative algebra on bigraded generators `(cohomological, internal)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BigradedSeries {
    pub generators: Vec<(usize, usize)>,
    pub kind: AlgebraKind,
    pub p: u64,
}

impl BigradedSeries {
    /// Dimension in bidegree `(i, j)`. Generators must have positive internal degree
    /// and cover every bidegree up to `(i, j)`.
    ///
    /// Odd generators are exterior in both kinds. An even generator `x` is polynomial
    /// in `S`, and in `Γ` splits as `⊗_k k[γ_{p^k}(x)]/(γ_{p^k}(x)^p)`.
    pub fn coefficient(&self, i: usize, j: usize) -> usize {
        // (degree, internal, max multiplicity; None = unbounded)
        let mut factors: Vec<(usize, usize, Option<usize>)> = Vec::new();
        for &(a, b) in &self.generators {
            assert!(b > 0, "generator of internal degree 0");
            if a > i || b > j {
                continue;
            }
            if a % 2 == 1 {
                factors.push((a, b, Some(1)));
                continue;
            }
            match self.kind {
                AlgebraKind::Symmetric => factors.push((a, b, None)),
                AlgebraKind::DividedPower => {
                    let mut pk = 1usize;
                    while pk * b <= j && pk * a <= i {
                        factors.push((pk * a, pk * b, Some(self.p as usize - 1)));
                        pk *= self.p as usize;
                    }
                }
            }
        }
        // dp[x][y]: monomials of bidegree (x, y)
        let mut dp = vec![vec![0usize; j + 1]; i + 1];
        dp[0][0] = 1;
        for (a, b, mult) in factors {
            let mut next = dp.clone();
            for x in 0..=i {
                for y in 0..=j {
                    if dp[x][y] == 0 {
                        continue;
                    }
                    let mut e = 1;
                    while x + e * a <= i && y + e * b <= j && mult.is_none_or(|m| e <= m) {
                        next[x + e * a][y + e * b] += dp[x][y];
                        e += 1;
                    }
                }
            }
            dp = next;
        }
        dp[i][j]
    }
}

/// The stable (co)homology series of orthogonal and symplectic groups with
/// coefficients in `S^j`, `Λ^j` or `Γ^j`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum SeriesId {
    /// `H^*(O; S^•) = S(V_S)`
    OSym,
    /// `H^*(O; Λ^•) = Γ(V_Λ)`
    OAlt,
    /// `H^*(Sp; S^•) = S(W_S)`
    SpSym,
    /// `H^*(Sp; Λ^•) = Γ(W_Λ)`
    SpAlt,
    /// `H_*(O; Γ^•) = Γ(V_Γ)`
    ODivHomology,
    /// `H_*(Sp; Γ^•) = Γ(W_Γ)`
    SpDivHomology,
}

impl SeriesId {
    pub const ALL: [SeriesId; 6] =
        [SeriesId::OSym, SeriesId::OAlt, SeriesId::SpSym, SeriesId::SpAlt, SeriesId::ODivHomology, SeriesId::SpDivHomology];

    /// Generators `(2q^s m, q^s + 1)` or `(2q^s m + q^s − 1, q^s + 1)`, and whether `s = 0` is allowed.
    fn shape(self) -> (bool, bool, AlgebraKind) {
        use AlgebraKind::*;
        // (shifted degrees, s = 0 allowed, kind)
        match self {
            SeriesId::OSym => (false, true, Symmetric),
            SeriesId::OAlt => (true, false, DividedPower),
            SeriesId::SpSym => (false, false, Symmetric),
            SeriesId::SpAlt => (true, true, DividedPower),
            SeriesId::ODivHomology => (false, true, DividedPower),
            SeriesId::SpDivHomology => (false, false, DividedPower),
        }
    }

    /// Generators up to bidegree `(i, j)`.
    pub fn series(self, q: u64, i: usize, j: usize) -> Result<BigradedSeries, PredictError> {
        let p = characteristic(q)?;
        if p == 2 {
            return Err(PredictError::Characteristic2);
        }
        let (shifted, s0, kind) = self.shape();
        let mut generators = Vec::new();
        let mut qs = 1usize;
        let mut s = 0;
        while qs + 1 <= j {
            if s > 0 || s0 {
                let base = if shifted { qs - 1 } else { 0 };
                let mut m = 0;
                while base + 2 * qs * m <= i {
                    generators.push((base + 2 * qs * m, qs + 1));
                    m += 1;
                }
            }
            qs *= q as usize;
            s += 1;
        }
        Ok(BigradedSeries { generators, kind, p })
    }
}

impl fmt::Display for SeriesId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            SeriesId::OSym => "O/S",
            SeriesId::OAlt => "O/L",
            SeriesId::SpSym => "Sp/S",
            SeriesId::SpAlt => "Sp/L",
            SeriesId::ODivHomology => "O/G-homology",
            SeriesId::SpDivHomology => "Sp/G-homology",
        })
    }
}

impl FromStr for SeriesId {
    type Err = PredictError;
    fn from_str(s: &str) -> Result<SeriesId, PredictError> {
        Ok(match s {
            "O/S" => SeriesId::OSym,
            "O/L" | "O/Λ" => SeriesId::OAlt,
            "Sp/S" => SeriesId::SpSym,
            "Sp/L" | "Sp/Λ" => SeriesId::SpAlt,
            "O/G-homology" | "O/Γ-homology" => SeriesId::ODivHomology,
            "Sp/G-homology" | "Sp/Γ-homology" => SeriesId::SpDivHomology,
            _ => return Err(PredictError::UnknownSeries(s.into())),
        })
    }
}

/// The prime `p` with `q = p^d`.
pub fn characteristic(q: u64) -> Result<u64, PredictError> {
    if q < 2 {
        return Err(PredictError::NotPrimePower(q));
    }
    let p = (2..=q).find(|d| q % d == 0).expect("q ≥ 2 has a prime factor");
    let mut r = q;
    while r % p == 0 {
        r /= p;
    }
    if r == 1 {
        Ok(p)
    } else {
        Err(PredictError::NotPrimePower(q))
    }
}

/// Stable dimension in cohomological degree `i` and internal degree `j`, for odd `q`.
pub fn stable_dim(series: SeriesId, q: u64, i: usize, j: usize) -> Result<usize, PredictError> {
    Ok(series.series(q, i, j)?.coefficient(i, j))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum Char2Target {
    /// `Ext^i(Id, I∘Γ²)` over `F_2`
    ExtIdIGamma2,
    /// `Ext^i(Id, I∘Λ²)` over `F_2`
    ExtIdILambda2,
    /// stable `H_i(O_{n,n}(F_2); F_2^{2n})`
    OrthogonalStandard,
    /// stable `H_i(Sp_{2n}(F_2); F_2^{2n})`
    SymplecticStandard,
}

impl FromStr for Char2Target {
    type Err = PredictError;
    fn from_str(s: &str) -> Result<Char2Target, PredictError> {
        Ok(match s {
            "ext-gamma2" => Char2Target::ExtIdIGamma2,
            "ext-lambda2" => Char2Target::ExtIdILambda2,
            "O-std" => Char2Target::OrthogonalStandard,
            "Sp-std" => Char2Target::SymplecticStandard,
            _ => return Err(PredictError::UnknownTarget(s.into())),
        })
    }
}

impl fmt::Display for Char2Target {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Char2Target::ExtIdIGamma2 => "ext-gamma2",
            Char2Target::ExtIdILambda2 => "ext-lambda2",
            Char2Target::OrthogonalStandard => "O-std",
            Char2Target::SymplecticStandard => "Sp-std",
        })
    }
}

pub fn char2_values(target: Char2Target, i: usize) -> usize {
    match target {
        Char2Target::ExtIdIGamma2 => usize::from(i >= 2),
        Char2Target::ExtIdILambda2 => usize::from(i >= 1),
        Char2Target::OrthogonalStandard => if i >= 2 { i - 1 } else { 0 },
        Char2Target::SymplecticStandard => usize::from(i >= 1),
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TableEntry {
    pub i: usize,
    pub j: usize,
    pub dim: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Table {
    pub series: String,
    pub q: u64,
    pub entries: Vec<TableEntry>,
}

impl Table {
    pub fn to_csv(&self) -> String {
        let mut out = String::from("series,q,i,j,dim\n");
        for e in &self.entries {
            out.push_str(&format!("{},{},{},{},{}\n", self.series, self.q, e.i, e.j, e.dim));
        }
        out
    }
}

/// `stable_dim` over `is × js`.
pub fn table(series: SeriesId, q: u64, is: std::ops::RangeInclusive<usize>, js: std::ops::RangeInclusive<usize>) -> Result<Table, PredictError> {
    let mut entries = Vec::new();
    for i in is {
        for j in js.clone() {
            entries.push(TableEntry { i, j, dim: stable_dim(series, q, i, j)? });
        }
    }
    Ok(Table { series: series.to_string(), q, entries })
}
