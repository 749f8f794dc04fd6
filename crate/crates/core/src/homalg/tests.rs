use super::*;
use crate::exactla::{Field, LinMap, MatF, SpVec};
use crate::fincat::{build_set_cat, build_vect_cat, monoid_cat, poset_cat, FinCat, SetKind, VectClass, DEFAULT_MORPHISM_CAP};
use crate::funrep::{evaluate, evaluate_as, FunctorExpr, LinRep, Variance};

fn cyclic(n: usize) -> FinCat {
    monoid_cat(&format!("Z/{n}"), n, 0, |g, f| (g + f) % n).unwrap()
}

fn rep_from(cat: &FinCat, k: Field, v: Variance, mats: Vec<MatF>) -> LinRep {
    let dims = vec![mats[0].rows()];
    LinRep::from_maps(cat.clone(), k, v, dims, mats.iter().map(LinMap::from_dense).collect()).unwrap()
}

fn opts() -> ResolveOptions {
    ResolveOptions::default()
}

#[test]
fn coend_examples() {
    let k = Field::of(2);
    let c = build_set_cat(2, SetKind::Injections).unwrap();
    let g = LinRep::projective_contra(&c, k, 2).tensor(&LinRep::constant(&c, k, Variance::Contravariant, 1)).unwrap();
    for a in 0..3 {
        let p = LinRep::projective(&c, k, a);
        assert_eq!(tensor_over_cat(&g, &p).unwrap().dim, g.dim(a));
    }
    // the empty set is initial in Θ
    let one_c = LinRep::constant(&c, k, Variance::Contravariant, 1);
    let one = LinRep::constant(&c, k, Variance::Covariant, 1);
    assert_eq!(tensor_over_cat(&one_c, &one).unwrap().dim, 1);
    // coinvariants of the regular representation of Z/2
    let z2 = cyclic(2);
    let swap = MatF::from_rows(k, 2, &[vec![0, 1], vec![1, 0]]);
    let reg = rep_from(&z2, k, Variance::Covariant, vec![MatF::identity(k, 2), swap]);
    let triv = LinRep::constant(&z2, k, Variance::Contravariant, 1);
    assert_eq!(tensor_over_cat(&triv, &reg).unwrap().dim, 1);
}

#[test]
fn projectives_resolve_in_length_zero() {
    let k = Field::of(3);
    let c = build_vect_cat(k, 2, VectClass::Inj, DEFAULT_MORPHISM_CAP).unwrap();
    let p = LinRep::projective(&c, k, 1);
    let r = resolve(&p, 3, &opts()).unwrap();
    assert!(r.is_finite());
    assert_eq!(r.multiplicities()[0], vec![0, 1, 0]);
    assert_eq!(r.length(), 1);
    let g = evaluate_as(&FunctorExpr::Const(1), &c, k, Variance::Contravariant).unwrap();
    assert_eq!(tor(&g, &p, 3, Side::Right, &opts()).unwrap().dims, vec![1, 0, 0, 0]);
}

#[test]
fn cyclic_group_homology() {
    let k = Field::of(2);
    let z2 = cyclic(2);
    let one = LinRep::constant(&z2, k, Variance::Covariant, 1);
    let r = resolve(&one, 5, &opts()).unwrap();
    assert!(r.multiplicities().iter().all(|m| m == &vec![1]));
    assert!(r.verify_exact());
    assert_eq!(category_homology(&one, 4, &opts()).unwrap().dims, vec![1; 5]);
    let k3 = Field::of(3);
    let one3 = LinRep::constant(&z2, k3, Variance::Covariant, 1);
    assert_eq!(category_homology(&one3, 3, &opts()).unwrap().dims, vec![1, 0, 0, 0]);
}

#[test]
fn identity_functor_is_generated_by_the_line() {
    let k = Field::of(2);
    let c = build_vect_cat(k, 2, VectClass::Inj, DEFAULT_MORPHISM_CAP).unwrap();
    let id = evaluate(&FunctorExpr::Id, &c, k).unwrap();
    let r = resolve(&id, 0, &opts()).unwrap();
    assert_eq!(r.multiplicities()[0], vec![0, 1, 0]);
    assert!(r.verify_exact());
}

#[test]
fn scalars_kill_coinvariants_of_identity() {
    let k = Field::of(3);
    let c = build_vect_cat(k, 2, VectClass::All, DEFAULT_MORPHISM_CAP).unwrap();
    let id = evaluate(&FunctorExpr::Id, &c, k).unwrap();
    let one = LinRep::constant(&c, k, Variance::Contravariant, 1);
    assert_eq!(tor(&one, &id, 0, Side::Right, &opts()).unwrap().dims, vec![0]);
    assert_eq!(tensor_over_cat(&one, &id).unwrap().dim, 0);
}

#[test]
fn resolution_and_bar_agree() {
    let k = Field::of(2);
    let leq: Vec<Vec<bool>> = (0..3).map(|i| (0..3).map(|j| i == j || (i == 0)).collect()).collect();
    let cats = vec![cyclic(2), cyclic(3), poset_cat(&leq).unwrap(), build_set_cat(2, SetKind::Injections).unwrap()];
    for c in cats {
        for kq in [2, 3] {
            let k = Field::of(kq);
            let g = LinRep::constant(&c, k, Variance::Contravariant, 1);
            let f = LinRep::projective(&c, k, 0).direct_sum(&LinRep::constant(&c, k, Variance::Covariant, 1)).unwrap();
            let a = tor(&g, &f, 3, Side::Right, &opts()).unwrap().dims;
            let b = tor(&g, &f, 3, Side::Left, &opts()).unwrap().dims;
            let o = bar_tor_oracle(&g, &f, 3, 64).unwrap();
            assert_eq!(a, o, "{} over F_{kq}", c.description());
            assert_eq!(b, o, "{} over F_{kq}", c.description());
        }
    }
    let _ = k;
}

#[test]
fn presentations_and_sweep_order() {
    let k = Field::of(2);
    let c = build_set_cat(3, SetKind::Injections).unwrap();
    // P_1 modulo the difference of the two points of P_1(2)
    let rel = SpVec::from_pairs(k, vec![(0, 1), (1, 1)]);
    let f = presented(&c, k, vec![1], &[(2, rel)]);
    f.validate().unwrap();
    assert_eq!(f.dims(), &[0, 1, 1, 1]);
    let g = LinRep::constant(&c, k, Variance::Contravariant, 1);
    let asc = tor(&g, &f, 2, Side::Right, &opts()).unwrap().dims;
    let desc = tor(&g, &f, 2, Side::Right, &ResolveOptions { order: SweepOrder::Descending, ..opts() }).unwrap().dims;
    assert_eq!(asc, desc);
    let r = resolve(&f, 3, &opts()).unwrap();
    assert!(r.verify_exact());
}

mod grassmann_ops {
    use super::*;
    use crate::funrep::NatTrans;

    fn family(q: u32) -> GrassmannFamily {
        GrassmannFamily::new(Field::of(q), 2, DEFAULT_MORPHISM_CAP).unwrap()
    }

    fn contravariant_samples(g: &GrassmannFamily) -> Vec<LinRep> {
        let k = g.field();
        vec![
            evaluate(&FunctorExpr::LinSym2.dual(), g.all(), k).unwrap(),
            evaluate(&FunctorExpr::Pbar, g.all(), k).unwrap(),
            evaluate(&FunctorExpr::Sym(2).dual(), g.all(), k).unwrap(),
            LinRep::projective_contra(g.all(), k, 1),
        ]
    }

    #[test]
    fn operators_are_functors() {
        for q in [2, 3] {
            let g = family(q);
            for a in contravariant_samples(&g) {
                for op in [GrassmannOp::Iota, GrassmannOp::Kappa, GrassmannOp::Delta] {
                    g.apply(op, &a).unwrap().validate().unwrap();
                }
                let x = g.kappa(&a).unwrap().tensor(&g.iota(&a).unwrap()).unwrap();
                g.omega(&x).unwrap().validate().unwrap();
                g.lambda(&x).unwrap().validate().unwrap();
                g.varpi(&g.delta(&a).unwrap()).unwrap().validate().unwrap();
            }
            let pb = evaluate(&FunctorExpr::Pbar, g.surjections(), g.field()).unwrap();
            g.rho(&pb).unwrap().validate().unwrap();
        }
    }

    #[test]
    fn lambda_kappa_is_the_identity() {
        let g = family(3);
        for a in contravariant_samples(&g) {
            let back = g.lambda(&g.kappa(&a).unwrap()).unwrap();
            assert_eq!(back.dims(), a.dims());
            assert!(g.all().morphisms().all(|m| back.action(m) == a.action(m)));
        }
    }

    #[test]
    fn omega_absorbs_iota() {
        let g = family(2);
        let k = g.field();
        let pb = evaluate(&FunctorExpr::Pbar, g.surjections(), k).unwrap();
        let x = g.rho(&pb).unwrap().direct_sum(&LinRep::projective_contra(g.pairs(), k, 3)).unwrap();
        for f in contravariant_samples(&g) {
            let lhs = g.omega(&x.tensor(&g.iota(&f).unwrap()).unwrap()).unwrap();
            let rhs = g.omega(&x).unwrap().tensor(&f).unwrap();
            let comps = (0..=2).map(|n| LinMap::identity(k, lhs.dim(n))).collect();
            let iso = NatTrans::new(lhs, rhs, comps).unwrap();
            iso.check_natural().unwrap();
        }
    }

    #[test]
    fn zero_block_projection_is_natural() {
        let g = family(3);
        for a in contravariant_samples(&g) {
            let x = g.kappa(&a).unwrap();
            let p = g.omega_onto_lambda(&x).unwrap();
            p.check_natural().unwrap();
            let i = g.lambda_into_omega(&x).unwrap();
            assert!(i.then(&p).unwrap().component(2).is_identity());
        }
        // the zero block of k^1 reaches the line of k^2 along a map killing it
        let x = g.kappa(&LinRep::projective_contra(g.all(), g.field(), 0)).unwrap();
        assert!(g.lambda_into_omega(&x).unwrap().first_failure().is_some());
    }

    #[test]
    fn quotient_exchange_is_a_natural_isomorphism() {
        for q in [2, 3] {
            let g = family(q);
            for a in contravariant_samples(&g) {
                let t = g.quotient_exchange(&a).unwrap();
                assert!(t.is_iso());
                t.check_natural().unwrap();
            }
        }
    }

    #[test]
    fn varpi_transfers_tor_from_injections() {
        let g = family(2);
        let k = g.field();
        let x = evaluate(&FunctorExpr::Pbar, g.injections(), k).unwrap();
        for f in [FunctorExpr::Id, FunctorExpr::Sym(2)] {
            let f = evaluate(&f, g.all(), k).unwrap();
            let lhs = tor(&x, &g.delta(&f).unwrap(), 2, Side::Right, &opts()).unwrap().dims;
            let rhs = tor(&g.varpi(&x).unwrap(), &f, 2, Side::Right, &opts()).unwrap().dims;
            assert_eq!(lhs, rhs);
        }
    }
}

fn symmetric_group(n: usize) -> FinCat {
    let mut perms: Vec<Vec<usize>> = vec![(0..n).collect()];
    // all permutations in lexicographic order
    let mut p: Vec<usize> = (0..n).collect();
    loop {
        let Some(i) = (0..n.saturating_sub(1)).rev().find(|&i| p[i] < p[i + 1]) else { break };
        let j = (i + 1..n).rev().find(|&j| p[j] > p[i]).unwrap();
        p.swap(i, j);
        p[i + 1..].reverse();
        perms.push(p.clone());
    }
    let index = |q: &Vec<usize>| perms.iter().position(|r| r == q).unwrap();
    let unit = index(&(0..n).collect());
    monoid_cat(&format!("S{n}"), perms.len(), unit, |g, f| index(&(0..n).map(|x| perms[g][perms[f][x]]).collect()))
        .unwrap()
}

mod kan_and_elements {
    use super::*;
    use crate::fincat::MonFunctor;

    #[test]
    fn identity_extension_and_projectives() {
        let k = Field::of(3);
        let all = build_vect_cat(k, 2, VectClass::All, DEFAULT_MORPHISM_CAP).unwrap();
        let inj = build_vect_cat(k, 2, VectClass::Inj, DEFAULT_MORPHISM_CAP).unwrap();
        let pb = evaluate(&FunctorExpr::Pbar, &all, k).unwrap();
        let e = kan_extension(&MonFunctor::identity(&all), &pb, 1, &opts()).unwrap();
        assert_eq!(e.degree0.dims(), pb.dims());
        assert_eq!(e.dims[1], vec![0, 0, 0]);
        e.degree0.validate().unwrap();
        let q = MonFunctor::inclusion(&inj, &all).unwrap();
        for b in 0..3 {
            let e = kan_extension(&q, &LinRep::projective_contra(&inj, k, b), 2, &opts()).unwrap();
            assert_eq!(e.degree0.dims(), LinRep::projective_contra(&all, k, b).dims());
            assert_eq!(e.dims[0], e.degree0.dims());
            assert!(e.dims[1..].iter().flatten().all(|&d| d == 0));
        }
    }

    #[test]
    fn extension_is_left_adjoint_to_restriction() {
        let k = Field::of(2);
        let all = build_vect_cat(k, 2, VectClass::All, DEFAULT_MORPHISM_CAP).unwrap();
        let inj = build_vect_cat(k, 2, VectClass::Inj, DEFAULT_MORPHISM_CAP).unwrap();
        let q = MonFunctor::inclusion(&inj, &all).unwrap();
        for f in [FunctorExpr::Pbar, FunctorExpr::LinSym2.dual(), FunctorExpr::Ext(2).dual()] {
            let f = evaluate(&f, &inj, k).unwrap();
            let e = kan_extension(&q, &f, 0, &opts()).unwrap();
            e.degree0.validate().unwrap();
            for g in [FunctorExpr::Id, FunctorExpr::Sym(2), FunctorExpr::Const(1)] {
                let g = evaluate(&g, &all, k).unwrap();
                let lhs = tensor_over_cat(&f, &g.restrict(&q).unwrap()).unwrap().dim;
                assert_eq!(lhs, tensor_over_cat(&e.degree0, &g).unwrap().dim);
            }
        }
    }

    fn forms_on_injections(q: u32) -> CategoryOfElements {
        let k = Field::of(q);
        let inj = build_vect_cat(k, 2, VectClass::Inj, DEFAULT_MORPHISM_CAP).unwrap();
        let lin = evaluate(&FunctorExpr::LinSym2.dual(), &inj, k).unwrap();
        CategoryOfElements::new(underlying_set_functor(&lin).unwrap()).unwrap()
    }

    #[test]
    fn omega_counts_quadratic_forms() {
        let k = Field::of(3);
        let cx = forms_on_injections(3);
        let one = LinRep::constant(cx.cat(), k, Variance::Contravariant, 1);
        let om = cx.omega(&one).unwrap();
        om.validate().unwrap();
        assert_eq!(om.dims(), &[1, 3, 27]);
    }

    #[test]
    fn singleton_elements_reindex() {
        let k = Field::of(2);
        let c = build_set_cat(2, SetKind::Injections).unwrap();
        let pt = underlying_set_functor(&LinRep::constant(&c, k, Variance::Contravariant, 1)).unwrap();
        let cx = CategoryOfElements::new(pt).unwrap();
        let f = LinRep::projective_contra(cx.cat(), k, 2).direct_sum(&LinRep::constant(cx.cat(), k, Variance::Contravariant, 2)).unwrap();
        let om = cx.omega(&f).unwrap();
        assert_eq!(om.dims(), f.dims());
        assert!(c.morphisms().all(|m| om.action(m) == f.action(m)));
    }

    #[test]
    fn omega_transfers_tor_and_matches_kan_extension() {
        let k = Field::of(3);
        let cx = forms_on_injections(3);
        let u = cx.forgetful();
        let samples = vec![
            LinRep::constant(cx.cat(), k, Variance::Contravariant, 1),
            LinRep::projective_contra(cx.cat(), k, cx.object(1, 1)),
            evaluate(&FunctorExpr::Pbar, cx.base(), k).unwrap().restrict(u).unwrap(),
        ];
        for f in samples {
            let om = cx.omega(&f).unwrap();
            assert_eq!(kan_extension(u, &f, 0, &opts()).unwrap().dims[0], om.dims());
            for g in [FunctorExpr::Id, FunctorExpr::Sym(2)] {
                let g = evaluate(&g, cx.base(), k).unwrap();
                let lhs = tor(&f, &g.restrict(u).unwrap(), 2, Side::Right, &opts()).unwrap().dims;
                assert_eq!(lhs, tor(&om, &g, 2, Side::Right, &opts()).unwrap().dims);
            }
        }
    }
}

mod hochschild_homology {
    use super::*;

    #[test]
    fn external_tensor_gives_tor() {
        let k = Field::of(2);
        let c = build_set_cat(2, SetKind::Injections).unwrap();
        let env = enveloping_cat(&c).unwrap();
        let fs = [LinRep::constant(&c, k, Variance::Contravariant, 1), LinRep::projective_contra(&c, k, 1)];
        let gs = [LinRep::projective(&c, k, 1), LinRep::constant(&c, k, Variance::Covariant, 1)];
        for f in &fs {
            for g in &gs {
                let b = external_tensor(f, g, &env).unwrap();
                b.validate().unwrap();
                let hh = hochschild(&c, &b, 2, &opts()).unwrap().dims;
                assert_eq!(hh, tor(f, g, 2, Side::Right, &opts()).unwrap().dims);
            }
        }
        let zero = LinRep::zero(&env, k, Variance::Covariant);
        assert_eq!(hochschild(&c, &zero, 2, &opts()).unwrap().dims, vec![0, 0, 0]);
    }

    #[test]
    fn group_algebra_counts_conjugacy_classes() {
        for (c, classes) in [(cyclic(3), 3), (symmetric_group(3), 3), (cyclic(4), 4)] {
            for q in [2, 3] {
                let k = Field::of(q);
                let env = enveloping_cat(&c).unwrap();
                let b = hom_bifunctor(&c, &env, k);
                b.validate().unwrap();
                hom_bimodule(&c, &env, k).validate().unwrap();
                assert_eq!(hochschild(&c, &b, 0, &opts()).unwrap().dims[0], classes);
                let m = hom_bimodule(&c, &env, k);
                assert_eq!(tensor_over_cat(&m, &b).unwrap().dim, classes);
            }
        }
    }
}

#[test]
fn cache_reuses_resolutions_and_flags_plateaus() {
    let k = Field::of(2);
    let cache = ResolutionCache::new();
    let c = build_vect_cat(k, 2, VectClass::All, DEFAULT_MORPHISM_CAP).unwrap();
    let id = evaluate(&FunctorExpr::Id, &c, k).unwrap();
    let a = cache.resolve(&id, 2, &opts()).unwrap();
    let b = cache.resolve(&id, 2, &opts()).unwrap();
    assert!(std::sync::Arc::ptr_eq(&a, &b));
    assert_eq!(cache.len(), 1);
    let recs = tor_across_caps("k[S2]^v vs Id", &[2, 3, 4], 2, Side::Right, &opts(), &cache, |d| {
        let c = build_vect_cat(k, d, VectClass::All, DEFAULT_MORPHISM_CAP)?;
        Ok((evaluate(&FunctorExpr::LinSym2.dual(), &c, k)?, evaluate(&FunctorExpr::Id, &c, k)?))
    })
    .unwrap();
    assert_eq!(recs.iter().map(|r| r.stable).collect::<Vec<_>>(), vec![false, false, true]);
    assert_eq!(recs[2].dims, vec![0, 0, 1]);
}

#[test]
fn pbar_twist_is_the_difference_functor_in_degree_zero() {
    use crate::funrep::difference;
    // F ⊗ P̄ is paired with G over dims ≤ 3, F with ΔG over dims ≤ 2
    for q in [2, 3] {
        let k = Field::of(q);
        let top = build_vect_cat(k, 3, VectClass::All, DEFAULT_MORPHISM_CAP).unwrap();
        let pbar = evaluate(&FunctorExpr::Pbar, &top, k).unwrap();
        for g in [FunctorExpr::Id, FunctorExpr::Sym(2), FunctorExpr::Ext(2), FunctorExpr::Div(2)] {
            let gt = evaluate(&g, &top, k).unwrap();
            let dg = difference(&gt).unwrap();
            for f in [FunctorExpr::Const(1), FunctorExpr::LinSym2.dual(), FunctorExpr::Id.dual()] {
                let lhs = tensor_over_cat(&evaluate_as(&f, &top, k, Variance::Contravariant).unwrap().tensor(&pbar).unwrap(), &gt);
                let fl = evaluate_as(&f, dg.cat(), k, Variance::Contravariant).unwrap();
                assert_eq!(lhs.unwrap().dim, tensor_over_cat(&fl, &dg).unwrap().dim, "{f} and {g} over F_{q}");
            }
        }
    }
}
