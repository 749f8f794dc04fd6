use super::{FunRepError, LinRep};
use crate::exactla::{LinMap, SpMat};
use crate::fincat::MorId;

/// A family of linear maps `η_a : S(a) → T(a)` between representations of the
/// same variance on the same category.
#[derive(Clone, Debug)]
pub struct NatTrans {
    source: LinRep,
    target: LinRep,
    components: Vec<LinMap>,
}

impl NatTrans {
    /// Checks shapes only; call [`NatTrans::check_natural`] for the squares.
    pub fn new(source: LinRep, target: LinRep, components: Vec<LinMap>) -> Result<NatTrans, FunRepError> {
        if source.cat().content_hash() != target.cat().content_hash() || source.cat().is_opposite() != target.cat().is_opposite() {
            return Err(FunRepError::CategoryMismatch);
        }
        if source.variance() != target.variance() {
            return Err(FunRepError::Variance("source and target have different variance".into()));
        }
        if components.len() != source.cat().num_objects() {
            return Err(FunRepError::Shape("one component per object expected".into()));
        }
        for (a, c) in components.iter().enumerate() {
            if c.ncols() != source.dim(a) || c.rows != target.dim(a) {
                return Err(FunRepError::Shape(format!("component at object {a} has the wrong shape")));
            }
        }
        Ok(NatTrans { source, target, components })
    }

    pub fn identity(rep: &LinRep) -> NatTrans {
        let components = (0..rep.cat().num_objects()).map(|a| LinMap::identity(rep.field(), rep.dim(a))).collect();
        NatTrans { source: rep.clone(), target: rep.clone(), components }
    }

    pub fn source(&self) -> &LinRep {
        &self.source
    }
    pub fn target(&self) -> &LinRep {
        &self.target
    }
    pub fn component(&self, a: usize) -> &LinMap {
        &self.components[a]
    }

    /// First generator whose naturality square fails, if any.
    pub fn first_failure(&self) -> Option<MorId> {
        let (s, t) = (&self.source, &self.target);
        s.cat().generators().iter().copied().find(|&m| {
            let (d, c) = (s.domain(m), s.codomain(m));
            self.components[c].compose(s.action(m)) != t.action(m).compose(&self.components[d])
        })
    }

    pub fn check_natural(&self) -> Result<(), FunRepError> {
        match self.first_failure() {
            None => Ok(()),
            Some(m) => Err(FunRepError::NotFunctorial(format!("naturality fails at morphism {m}"))),
        }
    }

    pub fn is_iso(&self) -> bool {
        self.components.iter().all(|c| c.rows == c.ncols() && SpMat::from_columns(c.field, c.rows, &c.cols).rank() == c.rows)
    }

    /// `other ∘ self`.
    pub fn then(&self, other: &NatTrans) -> Result<NatTrans, FunRepError> {
        let components = self.components.iter().zip(&other.components).map(|(a, b)| b.compose(a)).collect();
        NatTrans::new(self.source.clone(), other.target.clone(), components)
    }
}
