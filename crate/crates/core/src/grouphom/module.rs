use std::sync::Arc;

use rayon::prelude::*;

use super::group::FiniteGroup;
use super::GroupError;
use crate::exactla::{Field, LinMap, MatF};
use crate::funrep::{FunctorExpr, MatrixFunctor, Variance};

type MatrixAction = Arc<dyn Fn(&MatF) -> LinMap + Send + Sync>;

/// A left `k[G]`-module: one matrix per generator, extended to all elements on
/// demand.
#[derive(Clone)]
pub struct GModule {
    field: Field,
    dim: usize,
    generators: Vec<LinMap>,
    on_matrix: Option<MatrixAction>,
    label: String,
}

impl std::fmt::Debug for GModule {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "GModule({}, dim {})", self.label, self.dim)
    }
}

impl GModule {
    pub fn trivial(group: &FiniteGroup, dim: usize) -> GModule {
        let k = group.field();
        GModule {
            field: k,
            dim,
            generators: vec![LinMap::identity(k, dim); group.generators().len()],
            on_matrix: Some(Arc::new(move |_| LinMap::identity(k, dim))),
            label: format!("k^{dim}"),
        }
    }

    /// `F(A^{⊕n})` with `g` acting by `F(g)`, or by `F(g^{-1})` for contravariant `F`.
    pub fn from_functor(group: &FiniteGroup, expr: &FunctorExpr) -> Result<GModule, GroupError> {
        let f = Arc::new(MatrixFunctor::new(expr)?);
        let k = group.field();
        let dim = f.dim(k, group.degree());
        let contra = f.variance() == Some(Variance::Contravariant);
        let f2 = f.clone();
        let act: MatrixAction = Arc::new(move |g: &MatF| {
            if contra {
                f2.apply(&g.inverse().expect("group elements are invertible"))
            } else {
                f2.apply(g)
            }
        });
        let generators = group.generators().iter().map(|g| act(g)).collect();
        Ok(GModule { field: k, dim, generators, on_matrix: Some(act), label: expr.to_string() })
    }

    /// A module given by generator matrices only; element actions come from words.
    pub fn from_generators(group: &FiniteGroup, generators: Vec<LinMap>) -> Result<GModule, GroupError> {
        if generators.len() != group.generators().len() {
            return Err(GroupError::Invalid(format!("{} generator matrices for {} generators", generators.len(), group.generators().len())));
        }
        let dim = generators.first().map_or(0, |g| g.rows);
        if generators.iter().any(|g| g.rows != dim || g.ncols() != dim || g.field != group.field()) {
            return Err(GroupError::Invalid("generator matrices must be square of one size over the group's field".into()));
        }
        Ok(GModule { field: group.field(), dim, generators, on_matrix: None, label: "M".into() })
    }

    pub fn with_label(mut self, label: impl Into<String>) -> GModule {
        self.label = label.into();
        self
    }
    pub fn label(&self) -> &str {
        &self.label
    }
    pub fn field(&self) -> Field {
        self.field
    }
    pub fn dim(&self) -> usize {
        self.dim
    }
    pub fn generator_actions(&self) -> &[LinMap] {
        &self.generators
    }

    /// The action of every element, in the group's element order.
    pub fn element_actions(&self, group: &FiniteGroup) -> Result<Vec<LinMap>, GroupError> {
        let elements = group.elements()?;
        if let Some(act) = &self.on_matrix {
            return Ok(elements.par_iter().map(|g| act(g)).collect());
        }
        let mut out: Vec<LinMap> = Vec::with_capacity(elements.len());
        for i in 0..elements.len() as u32 {
            out.push(match group.parent(i) {
                None => LinMap::identity(self.field, self.dim),
                Some((j, s)) => self.generators[s].compose(&out[j as usize]),
            });
        }
        Ok(out)
    }

    /// The words defining the element actions respect every relation: for each
    /// element `x` and generator `s`, `act(s·x) = act(s) act(x)`, and the identity
    /// acts trivially.
    pub fn check_relations(&self, group: &FiniteGroup) -> Result<(), GroupError> {
        let acts = self.element_actions(group)?;
        if !acts[group.identity() as usize].is_identity() {
            return Err(GroupError::Invalid("the identity acts non-trivially".into()));
        }
        let elements = group.elements()?;
        for (i, x) in elements.iter().enumerate() {
            for (s, g) in group.generators().iter().enumerate() {
                let y = group.index_of(&g.mul_unchecked(x)).expect("closed under generators");
                if self.generators[s].compose(&acts[i]) != acts[y as usize] {
                    return Err(GroupError::Invalid(format!("relation fails at generator {s}, element {i}")));
                }
            }
        }
        Ok(())
    }

    /// `M^c`: the module with `g` acting as `c g c^{-1}` acts on `M`.
    pub fn conjugated(&self, group: &FiniteGroup, c: u32) -> Result<GModule, GroupError> {
        let acts = Arc::new(self.element_actions(group)?);
        let ci = group.inverse(c);
        let generators = group
            .generators()
            .iter()
            .map(|g| {
                let gi = group.index_of(g).expect("generators are elements");
                acts[group.mul(group.mul(c, gi), ci) as usize].clone()
            })
            .collect();
        let mut m = GModule::from_generators(group, generators)?;
        m.label = format!("{}^c", self.label);
        Ok(m)
    }
}
