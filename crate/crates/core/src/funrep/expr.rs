use std::fmt;

use super::{FunRepError, Variance};

/// Functor expressions over vector-space categories.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum FunctorExpr {
    Id,
    Const(usize),
    /// Symmetric power `S^n`.
    Sym(usize),
    /// Exterior power `Λ^n`.
    Ext(usize),
    /// Divided power `Γ^n`.
    Div(usize),
    /// Tensor power `T^n`.
    TensorPower(usize),
    /// `V ↦ k[S²(V)]`, the linearized symmetric square.
    LinSym2,
    /// `V ↦ k[Λ²(V)]`.
    LinAlt2,
    /// Precomposition with `V ↦ V*`.
    Dual(Box<FunctorExpr>),
    /// Standard projective `k[Hom(c, −)]` at an object id.
    Proj(usize),
    /// Augmentation kernel of `k[Hom(−, k)]`, i.e. `V ↦ ker(k[V*] → k)`.
    Pbar,
    /// `V ↦ k^{V*}`. Formal only: no finite model is evaluated.
    InjCogen,
    Tensor(Box<FunctorExpr>, Box<FunctorExpr>),
    DirectSum(Box<FunctorExpr>, Box<FunctorExpr>),
    /// `Compose(outer, inner)` is `outer ∘ inner`.
    Compose(Box<FunctorExpr>, Box<FunctorExpr>),
    Delta(Box<FunctorExpr>),
}

/// How an expression may be evaluated.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ExprKind {
    /// `None` for constant-like expressions that can be read either way.
    pub variance: Option<Variance>,
    /// Expressible as a functor on matrices, independently of a category.
    pub matrix: bool,
}

impl FunctorExpr {
    pub fn dual(self) -> FunctorExpr {
        FunctorExpr::Dual(Box::new(self))
    }
    pub fn tensor(self, other: FunctorExpr) -> FunctorExpr {
        FunctorExpr::Tensor(Box::new(self), Box::new(other))
    }
    pub fn sum(self, other: FunctorExpr) -> FunctorExpr {
        FunctorExpr::DirectSum(Box::new(self), Box::new(other))
    }
    pub fn after(self, inner: FunctorExpr) -> FunctorExpr {
        FunctorExpr::Compose(Box::new(self), Box::new(inner))
    }
    pub fn delta(self) -> FunctorExpr {
        FunctorExpr::Delta(Box::new(self))
    }

    /// Variance and evaluability, with errors naming the offending node path.
    /// Degree of polynomiality read off the syntax tree; `None` for the
    /// non-polynomial atoms (linearizations, `P̄`, projectives, `I`).
    pub fn formal_degree(&self) -> Option<usize> {
        use FunctorExpr::*;
        match self {
            Id => Some(1),
            Const(_) => Some(0),
            Sym(n) | Ext(n) | Div(n) | TensorPower(n) => Some(*n),
            LinSym2 | LinAlt2 | Proj(_) | Pbar | InjCogen => None,
            Dual(x) => x.formal_degree(),
            Tensor(a, b) => Some(a.formal_degree()? + b.formal_degree()?),
            DirectSum(a, b) => Some(a.formal_degree()?.max(b.formal_degree()?)),
            Compose(a, b) => Some(a.formal_degree()? * b.formal_degree()?),
            Delta(x) => Some(x.formal_degree()?.saturating_sub(1)),
        }
    }

    pub fn kind(&self) -> Result<ExprKind, FunRepError> {
        self.kind_at("expr")
    }

    fn kind_at(&self, path: &str) -> Result<ExprKind, FunRepError> {
        use FunctorExpr::*;
        let co = Some(Variance::Covariant);
        let err = |msg: &str| FunRepError::Kind { path: path.to_string(), msg: msg.to_string() };
        Ok(match self {
            Id | Sym(_) | Ext(_) | Div(_) | TensorPower(_) | LinSym2 | LinAlt2 => ExprKind { variance: co, matrix: true },
            Const(_) => ExprKind { variance: None, matrix: true },
            Proj(_) => ExprKind { variance: co, matrix: false },
            Pbar => ExprKind { variance: Some(Variance::Contravariant), matrix: true },
            InjCogen => ExprKind { variance: co, matrix: false },
            Dual(x) => {
                let k = x.kind_at(&format!("{path}.dual"))?;
                if !k.matrix {
                    return Err(err("duality needs an expression defined on all linear maps"));
                }
                ExprKind { variance: k.variance.map(Variance::flip), matrix: true }
            }
            Tensor(a, b) | DirectSum(a, b) => {
                let (ka, kb) = (a.kind_at(&format!("{path}.left"))?, b.kind_at(&format!("{path}.right"))?);
                let variance = match (ka.variance, kb.variance) {
                    (Some(x), Some(y)) if x != y => return Err(err("operands have different variance")),
                    (x, y) => x.or(y),
                };
                ExprKind { variance, matrix: ka.matrix && kb.matrix }
            }
            Compose(outer, inner) => {
                let ko = outer.kind_at(&format!("{path}.outer"))?;
                let ki = inner.kind_at(&format!("{path}.inner"))?;
                if !ko.matrix {
                    return Err(err("outer functor must be defined on all linear maps"));
                }
                let variance = match (ko.variance, ki.variance) {
                    (Some(x), Some(y)) => Some(x.compose(y)),
                    _ => None,
                };
                ExprKind { variance, matrix: ki.matrix }
            }
            Delta(x) => {
                let k = x.kind_at(&format!("{path}.delta"))?;
                if !k.matrix {
                    return Err(err("difference of a category-level expression; use difference() on the representation"));
                }
                k
            }
        })
    }

    pub fn mentions_formal(&self) -> bool {
        use FunctorExpr::*;
        match self {
            InjCogen => true,
            Dual(x) | Delta(x) => x.mentions_formal(),
            Tensor(a, b) | DirectSum(a, b) | Compose(a, b) => a.mentions_formal() || b.mentions_formal(),
            _ => false,
        }
    }
}

fn fmt_atom(e: &FunctorExpr, f: &mut fmt::Formatter<'_>) -> fmt::Result {
    match e {
        FunctorExpr::Tensor(..) | FunctorExpr::DirectSum(..) | FunctorExpr::Compose(..) => write!(f, "({e})"),
        _ => write!(f, "{e}"),
    }
}

fn paren_if(e: &FunctorExpr, wrap: bool, f: &mut fmt::Formatter<'_>) -> fmt::Result {
    if wrap {
        write!(f, "({e})")
    } else {
        write!(f, "{e}")
    }
}

/// Canonical surface syntax, accepted back by the parser.
impl fmt::Display for FunctorExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        use FunctorExpr::*;
        match self {
            Id => write!(f, "Id"),
            Const(n) => write!(f, "Const({n})"),
            Sym(n) => write!(f, "S^{n}"),
            Ext(n) => write!(f, "L^{n}"),
            Div(n) => write!(f, "G^{n}"),
            TensorPower(n) => write!(f, "T^{n}"),
            LinSym2 => write!(f, "K[q2]"),
            LinAlt2 => write!(f, "K[alt2]"),
            Proj(c) => write!(f, "Proj({c})"),
            Pbar => write!(f, "Pbar"),
            InjCogen => write!(f, "I"),
            Dual(x) => {
                fmt_atom(x, f)?;
                write!(f, "^v")
            }
            Delta(x) => write!(f, "Delta({x})"),
            DirectSum(a, b) => {
                write!(f, "{a} (+) ")?;
                paren_if(b, matches!(**b, DirectSum(..)), f)
            }
            Tensor(a, b) => {
                paren_if(a, matches!(**a, DirectSum(..)), f)?;
                write!(f, " (x) ")?;
                paren_if(b, matches!(**b, DirectSum(..) | Tensor(..)), f)
            }
            Compose(a, b) => {
                fmt_atom(a, f)?;
                write!(f, " o ")?;
                fmt_atom(b, f)
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use FunctorExpr::*;

    #[test]
    fn kinds() {
        assert_eq!(LinSym2.dual().kind().unwrap().variance, Some(Variance::Contravariant));
        assert_eq!(Const(1).tensor(Pbar).kind().unwrap().variance, Some(Variance::Contravariant));
        let bad = LinSym2.dual().tensor(Id);
        match bad.kind() {
            Err(FunRepError::Kind { path, .. }) => assert_eq!(path, "expr"),
            other => panic!("{other:?}"),
        }
        assert!(Proj(1).dual().kind().is_err());
        assert!(!Sym(2).after(Proj(0)).kind().unwrap().matrix);
    }

    #[test]
    fn display() {
        let e = Div(3).sum(Ext(2)).delta();
        assert_eq!(e.to_string(), "Delta(G^3 (+) L^2)");
        assert_eq!(LinSym2.dual().tensor(Id).to_string(), "K[q2]^v (x) Id");
        assert_eq!(Sym(2).sum(Id).tensor(Id).to_string(), "(S^2 (+) Id) (x) Id");
    }
}
