//! Stabilization axioms for a category with a chosen sequence `S(0) → S(1) → ..`.

use serde::Serialize;

use super::{CatError, FinCat, MorId, ObjId};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum Axiom {
    C,
    W,
    WPrime,
    G,
    S,
    CPrime,
}

impl Axiom {
    pub const ALL: [Axiom; 6] = [Axiom::C, Axiom::W, Axiom::WPrime, Axiom::G, Axiom::S, Axiom::CPrime];

    pub fn parse(s: &str) -> Option<Axiom> {
        Some(match s {
            "C" => Axiom::C,
            "W" => Axiom::W,
            "W'" | "Wp" => Axiom::WPrime,
            "G" => Axiom::G,
            "S" => Axiom::S,
            "C'" | "Cp" => Axiom::CPrime,
            _ => return None,
        })
    }

    pub fn name(self) -> &'static str {
        match self {
            Axiom::C => "C",
            Axiom::W => "W",
            Axiom::WPrime => "W'",
            Axiom::G => "G",
            Axiom::S => "S",
            Axiom::CPrime => "C'",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum AxiomOutcome {
    Pass,
    Fail,
    /// No witness within the truncation; the axiom may still hold in the full category.
    Inconclusive,
}

#[derive(Clone, Debug, Serialize)]
pub struct AxiomReport {
    pub axiom: &'static str,
    pub outcome: AxiomOutcome,
    pub cases_checked: usize,
    pub witness: Option<String>,
}

/// The sequence `S(i)` with steps `S(i) → S(i+1)`, with `S(i) = A^{⊕i}` in practice.
#[derive(Clone, Debug)]
pub struct Stabilization {
    pub objects: Vec<ObjId>,
    pub steps: Vec<MorId>,
}

impl Stabilization {
    /// `S(i) = A^{⊕i}` with steps `id ⊕ (0 → A)`, as far as the truncation allows.
    /// Requires an initial unit object.
    pub fn by_sum(cat: &FinCat, unit: ObjId, a: ObjId) -> Result<Stabilization, CatError> {
        let to_a = cat.hom(unit, a);
        if to_a.len() != 1 {
            return Err(CatError::Invalid("unit object is not initial".into()));
        }
        let zero = to_a.start;
        let mut objects = vec![unit];
        let mut steps = Vec::new();
        while let Some(next) = cat.object_sum(*objects.last().unwrap(), a) {
            let cur = *objects.last().unwrap();
            let step = cat
                .morphism_sum(cat.identity(cur), zero)
                .ok_or_else(|| CatError::Invalid("stabilization step is missing".into()))?;
            objects.push(next);
            steps.push(step);
        }
        Ok(Stabilization { objects, steps })
    }

    pub fn len(&self) -> usize {
        self.objects.len()
    }
    pub fn is_empty(&self) -> bool {
        self.objects.is_empty()
    }

    /// `S(i ≤ j)`.
    pub fn transition(&self, cat: &FinCat, i: usize, j: usize) -> MorId {
        (i..j).fold(cat.identity(self.objects[i]), |acc, k| cat.compose(self.steps[k], acc))
    }
}

fn aut(cat: &FinCat, a: ObjId) -> Vec<MorId> {
    cat.hom(a, a).filter(|&m| is_iso(cat, m)).collect()
}

fn is_iso(cat: &FinCat, m: MorId) -> bool {
    let (a, b) = (cat.src(m), cat.tgt(m));
    cat.hom(b, a).any(|n| cat.compose(n, m) == cat.identity(a) && cat.compose(m, n) == cat.identity(b))
}

fn isomorphic(cat: &FinCat, a: ObjId, b: ObjId) -> bool {
    cat.hom(a, b).any(|m| is_iso(cat, m))
}

fn orbit(cat: &FinCat, group: &[MorId], u: MorId) -> Vec<MorId> {
    let mut o: Vec<MorId> = group.iter().map(|&g| cat.compose(g, u)).collect();
    o.sort_unstable();
    o.dedup();
    o
}

fn stabilizer(cat: &FinCat, group: &[MorId], f: MorId) -> Vec<MorId> {
    group.iter().copied().filter(|&g| cat.compose(g, f) == f).collect()
}

pub fn check_axioms(cat: &FinCat, s: &Stabilization, axioms: &[Axiom]) -> Vec<AxiomReport> {
    let groups: Vec<Vec<MorId>> = s.objects.iter().map(|&o| aut(cat, o)).collect();
    axioms.iter().map(|&ax| check_one(cat, s, &groups, ax)).collect()
}

fn report(axiom: Axiom, outcome: AxiomOutcome, cases: usize, witness: Option<String>) -> AxiomReport {
    AxiomReport { axiom: axiom.name(), outcome, cases_checked: cases, witness }
}

fn check_one(cat: &FinCat, s: &Stabilization, groups: &[Vec<MorId>], ax: Axiom) -> AxiomReport {
    let n = s.len();
    match ax {
        Axiom::C => {
            let missing: Vec<ObjId> = (0..cat.num_objects())
                .filter(|&c| !s.objects.iter().any(|&si| !cat.hom(c, si).is_empty()))
                .collect();
            if missing.is_empty() {
                report(ax, AxiomOutcome::Pass, cat.num_objects(), None)
            } else {
                let w = format!("objects without a map to S(i), i < {n}: {missing:?}");
                report(ax, AxiomOutcome::Inconclusive, cat.num_objects(), Some(w))
            }
        }
        Axiom::WPrime => {
            let mut cases = 0;
            for c in 0..cat.num_objects() {
                for i in 0..n {
                    let hom = cat.hom(c, s.objects[i]);
                    if hom.is_empty() {
                        continue;
                    }
                    cases += 1;
                    let o = orbit(cat, &groups[i], hom.start);
                    if o.len() != hom.len() {
                        let other = hom.clone().find(|m| o.binary_search(m).is_err()).unwrap();
                        let w = format!("object {c}, i = {i}: morphisms {} and {other} lie in different orbits", hom.start);
                        return report(ax, AxiomOutcome::Fail, cases, Some(w));
                    }
                }
            }
            report(ax, AxiomOutcome::Pass, cases, None)
        }
        Axiom::W => {
            let mut cases = 0;
            for c in 0..cat.num_objects() {
                for i in 0..n {
                    let hom = cat.hom(c, s.objects[i]);
                    let Some(u) = hom.clone().next() else { continue };
                    for v in hom {
                        cases += 1;
                        let ok = (i..n).any(|j| {
                            let t = s.transition(cat, i, j);
                            let (tu, tv) = (cat.compose(t, u), cat.compose(t, v));
                            groups[j].iter().any(|&g| cat.compose(g, tu) == tv)
                        });
                        if !ok {
                            let w = format!("object {c}, i = {i}: {u} and {v} not identified below S({})", n - 1);
                            return report(ax, AxiomOutcome::Inconclusive, cases, Some(w));
                        }
                    }
                }
            }
            report(ax, AxiomOutcome::Pass, cases, None)
        }
        Axiom::G => {
            let mut cases = 0;
            for i in 0..n.saturating_sub(1) {
                let step = s.steps[i];
                for &g in &groups[i] {
                    cases += 1;
                    let Some(gs) = cat.morphism_sum(g, cat.identity(s.objects[1])) else {
                        let w = format!("g ⊕ id is missing for g = {g} ∈ Aut S({i})");
                        return report(ax, AxiomOutcome::Inconclusive, cases, Some(w));
                    };
                    if cat.compose(step, g) != cat.compose(gs, step) {
                        let w = format!("S({i} ≤ {}) is not equivariant for g = {g}", i + 1);
                        return report(ax, AxiomOutcome::Fail, cases, Some(w));
                    }
                }
            }
            report(ax, AxiomOutcome::Pass, cases, None)
        }
        Axiom::S => {
            let mut cases = 0;
            for f in cat.morphisms() {
                let c = cat.tgt(f);
                for i in 0..n {
                    let Some(ic) = cat.object_sum(s.objects[i], c) else { continue };
                    let Some(sf) = cat.morphism_sum(cat.identity(s.objects[i]), f) else { continue };
                    cases += 1;
                    let st1 = stabilizer(cat, &aut(cat, c), f);
                    let st2 = stabilizer(cat, &aut(cat, ic), sf);
                    let mut image: Vec<MorId> =
                        st1.iter().filter_map(|&u| cat.morphism_sum(cat.identity(s.objects[i]), u)).collect();
                    image.sort_unstable();
                    image.dedup();
                    if image.len() != st1.len() || st1.len() != st2.len() {
                        let w = format!(
                            "f = {f}: {} -> {c}, i = {i}: stabilizer of order {} maps to one of order {}",
                            cat.src(f),
                            st1.len(),
                            st2.len()
                        );
                        return report(ax, AxiomOutcome::Fail, cases, Some(w));
                    }
                }
            }
            report(ax, AxiomOutcome::Pass, cases, None)
        }
        Axiom::CPrime => {
            let mut missing = Vec::new();
            for c in 0..cat.num_objects() {
                let found = (0..cat.num_objects()).any(|b| {
                    cat.object_sum(b, c).is_some_and(|bc| s.objects.iter().any(|&si| isomorphic(cat, bc, si)))
                });
                if !found {
                    missing.push(c);
                }
            }
            if missing.is_empty() {
                report(ax, AxiomOutcome::Pass, cat.num_objects(), None)
            } else {
                let w = format!("no complement to some S(i) within the truncation for objects {missing:?}");
                report(ax, AxiomOutcome::Inconclusive, cat.num_objects(), Some(w))
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactla::Field;
    use crate::fincat::{build_form_cat_on, build_set_cat, build_vect_cat, skeleton_forms, FormKind, QuadSpace, SetKind, VectClass};
    use crate::fincat::{Object, DEFAULT_MORPHISM_CAP};

    fn outcome(r: &[AxiomReport], a: Axiom) -> AxiomOutcome {
        r.iter().find(|x| x.axiom == a.name()).unwrap().outcome
    }

    #[test]
    fn witt_transitivity_for_hyperbolic_powers() {
        let k = Field::of(3);
        // the anisotropic 4-dimensional class does not embed in H ⊥ H, so stop at 3
        let mut forms = skeleton_forms(k, FormKind::Quadratic, 3, false);
        forms.push(QuadSpace::hyperbolic_power(k, FormKind::Quadratic, 2));
        let cat = build_form_cat_on(k, forms, DEFAULT_MORPHISM_CAP).unwrap();
        let h = cat.find_object(&Object::form(QuadSpace::hyperbolic(k, FormKind::Quadratic))).unwrap();
        let s = Stabilization::by_sum(&cat, 0, h).unwrap();
        assert_eq!(s.len(), 3);
        let r = check_axioms(&cat, &s, &[Axiom::WPrime, Axiom::C, Axiom::G]);
        assert_eq!(outcome(&r, Axiom::WPrime), AxiomOutcome::Pass);
        assert_eq!(outcome(&r, Axiom::C), AxiomOutcome::Pass);
        assert_eq!(outcome(&r, Axiom::G), AxiomOutcome::Pass);
    }

    #[test]
    fn split_injections_fail_cancellation() {
        let cat = build_vect_cat(Field::of(2), 3, VectClass::Inj, DEFAULT_MORPHISM_CAP).unwrap();
        let s = Stabilization::by_sum(&cat, 0, 1).unwrap();
        let r = check_axioms(&cat, &s, &[Axiom::S, Axiom::W, Axiom::CPrime]);
        assert_eq!(outcome(&r, Axiom::S), AxiomOutcome::Fail);
        assert!(r[0].witness.as_ref().unwrap().contains("order 1 maps to one of order 2"));
        assert_eq!(outcome(&r, Axiom::W), AxiomOutcome::Pass);
        assert_eq!(outcome(&r, Axiom::CPrime), AxiomOutcome::Pass);
    }

    #[test]
    fn injections_of_finite_sets() {
        let cat = build_set_cat(4, SetKind::Injections).unwrap();
        let s = Stabilization::by_sum(&cat, 0, 1).unwrap();
        let r = check_axioms(&cat, &s, &Axiom::ALL);
        for a in Axiom::ALL {
            assert_eq!(outcome(&r, a), AxiomOutcome::Pass, "{a:?}");
        }
    }
}
