use super::group::FiniteGroup;
use super::GroupError;
use crate::exactla::MatF;
use crate::fincat::{FinCat, MorId, ObjId, Stabilization};

/// A subgroup of an enumerated group fixing a morphism.
#[derive(Debug)]
pub struct StabilizerData {
    pub ambient: String,
    /// The fixed morphism, as a matrix into the space the group acts on.
    pub fixed: MatF,
    pub subgroup: FiniteGroup,
}

impl StabilizerData {
    pub fn order(&self) -> usize {
        self.subgroup.len()
    }
}

/// The elements `g` with `g ∘ u = u`.
pub fn stabilizer(group: &FiniteGroup, u: &MatF) -> Result<StabilizerData, GroupError> {
    if u.rows() != group.degree() {
        return Err(GroupError::Invalid(format!("a {}-row matrix is not a map into k^{}", u.rows(), group.degree())));
    }
    let fixing: Vec<MatF> = group.elements()?.iter().filter(|g| &g.mul_unchecked(u) == u).cloned().collect();
    let label = format!("St({}x{}) in {}", u.rows(), u.cols(), group.label());
    let subgroup = FiniteGroup::from_elements(&label, group.field(), group.degree(), &fixing)?;
    Ok(StabilizerData { ambient: group.label().to_string(), fixed: u.clone(), subgroup })
}

/// `St(c, j)` inside `Aut_C(S(j))`: automorphisms fixing `S(i ≤ j) ∘ u` for
/// `u : c → S(i)`.
#[derive(Clone, Debug)]
pub struct CatStabilizer {
    pub object: ObjId,
    pub composite: MorId,
    pub automorphisms: Vec<MorId>,
}

pub fn cat_stabilizer(cat: &FinCat, s: &Stabilization, u: MorId, i: usize, j: usize) -> Result<CatStabilizer, GroupError> {
    if i > j || j >= s.len() {
        return Err(GroupError::Invalid(format!("need i ≤ j < {}, got i = {i}, j = {j}", s.len())));
    }
    if cat.tgt(u) != s.objects[i] {
        return Err(GroupError::Invalid(format!("morphism {u} does not land in S({i})")));
    }
    let object = s.objects[j];
    let composite = cat.compose(s.transition(cat, i, j), u);
    let automorphisms = cat
        .hom(object, object)
        .filter(|&g| cat.hom(object, object).any(|h| cat.compose(h, g) == cat.identity(object)))
        .filter(|&g| cat.compose(g, composite) == composite)
        .collect();
    Ok(CatStabilizer { object, composite, automorphisms })
}

impl CatStabilizer {
    pub fn order(&self) -> usize {
        self.automorphisms.len()
    }

    /// The stabilizer as a matrix group, for categories whose morphisms are matrices.
    pub fn to_group(&self, cat: &FinCat) -> Result<FiniteGroup, GroupError> {
        let field = cat.field().ok_or_else(|| GroupError::Invalid("category has no base field".into()))?;
        let mats: Vec<MatF> = self
            .automorphisms
            .iter()
            .map(|&g| cat.matrix(g).ok_or_else(|| GroupError::Invalid("morphisms are not matrices".into())))
            .collect::<Result<_, _>>()?;
        let degree = mats.first().map_or(0, |m| m.rows());
        FiniteGroup::from_elements(&format!("St in Aut({})", self.object), field, degree, &mats)
    }
}
