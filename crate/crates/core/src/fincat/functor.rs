use super::{CatError, FinCat, MorId, ObjId};

/// A functor between finite categories, given by explicit object and morphism maps.
#[derive(Clone, Debug)]
pub struct MonFunctor {
    source: FinCat,
    target: FinCat,
    obj_map: Vec<ObjId>,
    mor_map: Vec<MorId>,
}

impl MonFunctor {
    pub fn new(source: FinCat, target: FinCat, obj_map: Vec<ObjId>, mor_map: Vec<MorId>) -> Result<MonFunctor, CatError> {
        let f = MonFunctor::new_unchecked(source, target, obj_map, mor_map);
        f.validate()?;
        Ok(f)
    }

    pub(crate) fn new_unchecked(source: FinCat, target: FinCat, obj_map: Vec<ObjId>, mor_map: Vec<MorId>) -> MonFunctor {
        MonFunctor { source, target, obj_map, mor_map }
    }

    /// Builds the morphism map from a per-morphism rule.
    pub fn from_fn(
        source: FinCat,
        target: FinCat,
        obj_map: Vec<ObjId>,
        mut mor: impl FnMut(MorId) -> Option<MorId>,
    ) -> Result<MonFunctor, CatError> {
        let mut mor_map = Vec::with_capacity(source.num_morphisms());
        for m in source.morphisms() {
            mor_map.push(mor(m).ok_or_else(|| CatError::Functor(format!("morphism {m} has no image")))?);
        }
        MonFunctor::new(source, target, obj_map, mor_map)
    }

    pub fn identity(c: &FinCat) -> MonFunctor {
        MonFunctor::new_unchecked(c.clone(), c.clone(), (0..c.num_objects()).collect(), c.morphisms().collect())
    }

    pub fn source(&self) -> &FinCat {
        &self.source
    }
    pub fn target(&self) -> &FinCat {
        &self.target
    }
    pub fn on_object(&self, a: ObjId) -> ObjId {
        self.obj_map[a]
    }
    pub fn on_morphism(&self, m: MorId) -> MorId {
        self.mor_map[m]
    }
    pub fn obj_map(&self) -> &[ObjId] {
        &self.obj_map
    }
    pub fn mor_map(&self) -> &[MorId] {
        &self.mor_map
    }

    /// Identities, endpoints, and `F(g∘m) = F(g)∘F(m)` for every generator `g` and
    /// every `m`, which by induction covers all composable pairs.
    pub fn validate(&self) -> Result<(), CatError> {
        let (s, t) = (&self.source, &self.target);
        if self.obj_map.len() != s.num_objects() || self.mor_map.len() != s.num_morphisms() {
            return Err(CatError::Functor("maps have the wrong length".into()));
        }
        for a in 0..s.num_objects() {
            if self.mor_map[s.identity(a)] != t.identity(self.obj_map[a]) {
                return Err(CatError::Functor(format!("identity of object {a} is not preserved")));
            }
        }
        for m in s.morphisms() {
            let fm = self.mor_map[m];
            if t.src(fm) != self.obj_map[s.src(m)] || t.tgt(fm) != self.obj_map[s.tgt(m)] {
                return Err(CatError::Functor(format!("endpoints of morphism {m} are not preserved")));
            }
        }
        let mut from: Vec<Vec<MorId>> = vec![Vec::new(); s.num_objects()];
        for &g in s.generators() {
            from[s.src(g)].push(g);
        }
        for m in s.morphisms() {
            for &g in &from[s.tgt(m)] {
                let lhs = self.mor_map[s.compose(g, m)];
                let rhs = t.compose(self.mor_map[g], self.mor_map[m]);
                if lhs != rhs {
                    return Err(CatError::Functor(format!("composition fails at ({g}, {m})")));
                }
            }
        }
        Ok(())
    }

    pub fn compose(&self, other: &MonFunctor) -> MonFunctor {
        // self ∘ other
        MonFunctor::new_unchecked(
            other.source.clone(),
            self.target.clone(),
            other.obj_map.iter().map(|&a| self.obj_map[a]).collect(),
            other.mor_map.iter().map(|&m| self.mor_map[m]).collect(),
        )
    }

    pub fn opposite(&self) -> MonFunctor {
        MonFunctor::new_unchecked(self.source.opposite(), self.target.opposite(), self.obj_map.clone(), self.mor_map.clone())
    }

    /// Inclusion of a category whose objects and morphism keys form a subset of the
    /// target's (matching by object payload and morphism key).
    pub fn inclusion(source: &FinCat, target: &FinCat) -> Result<MonFunctor, CatError> {
        let obj_map = (0..source.num_objects())
            .map(|a| {
                target
                    .find_object(source.object(a))
                    .ok_or_else(|| CatError::Functor(format!("object {a} missing from target")))
            })
            .collect::<Result<Vec<_>, _>>()?;
        let om = obj_map.clone();
        MonFunctor::from_fn(source.clone(), target.clone(), obj_map, |m| {
            target.find(om[source.src(m)], om[source.tgt(m)], source.key(m))
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactla::Field;
    use crate::fincat::{build_vect_cat, VectClass, DEFAULT_MORPHISM_CAP};

    #[test]
    fn injections_include_into_all_maps() {
        let k = Field::of(3);
        let inj = build_vect_cat(k, 2, VectClass::Inj, DEFAULT_MORPHISM_CAP).unwrap();
        let all = build_vect_cat(k, 2, VectClass::All, DEFAULT_MORPHISM_CAP).unwrap();
        let f = MonFunctor::inclusion(&inj, &all).unwrap();
        assert_eq!(f.on_object(2), 2);
        let id = MonFunctor::identity(&all);
        id.validate().unwrap();
        assert_eq!(id.compose(&f).mor_map(), f.mor_map());
    }

    #[test]
    fn broken_functor_is_rejected() {
        let k = Field::of(2);
        let all = build_vect_cat(k, 1, VectClass::All, DEFAULT_MORPHISM_CAP).unwrap();
        // send every endomorphism of F_2 to the zero map
        let zero = all.find(1, 1, &[0]).unwrap();
        let bad = all.morphisms().map(|m| if all.src(m) == 1 && all.tgt(m) == 1 { zero } else { m }).collect();
        let r = MonFunctor::new(all.clone(), all.clone(), vec![0, 1], bad);
        assert!(r.is_err());
    }
}
