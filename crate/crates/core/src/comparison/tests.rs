use proptest::prelude::*;

use super::*;
use crate::exactla::Field;
use crate::fincat::{build_set_cat, build_vect_cat, SetKind, Stabilization, VectClass, DEFAULT_MORPHISM_CAP};
use crate::funrep::{FunctorExpr, LinRep, Variance};
use crate::grouphom::GroupKind;

use FunctorExpr::*;

fn caps(c: &[usize]) -> ComparisonOptions {
    ComparisonOptions { caps: c.to_vec(), ..Default::default() }
}

#[test]
fn degree_zero_sides_agree() {
    let k = Field::of(3);
    let id = main_theorem_degree0(k, GroupKind::O, &Id, &caps(&[1, 2])).unwrap();
    assert_eq!((id.group_value, id.functor_value), (Some(0), Some(0)));
    assert_eq!(id.status, Status::Agree);
    for kind in [GroupKind::O, GroupKind::Sp] {
        let c = main_theorem_degree0(k, kind, &Const(1), &caps(&[1, 2])).unwrap();
        assert_eq!((c.group_value, c.functor_value), (Some(1), Some(1)));
    }
    let g2 = main_theorem_degree0(k, GroupKind::O, &Div(2), &caps(&[1, 2, 3])).unwrap();
    assert_eq!(g2.status, Status::Agree);
    assert_eq!(g2.group_value, Some(1));
    let l2 = main_theorem_degree0(k, GroupKind::Sp, &Ext(2), &caps(&[1, 2, 3])).unwrap();
    assert_eq!((l2.group_value, l2.functor_value), (Some(1), Some(1)));
    // a single cap never counts as stable
    assert_eq!(main_theorem_degree0(k, GroupKind::O, &Id, &caps(&[2])).unwrap().status, Status::Inconclusive);
    assert!(main_theorem_degree0(k, GroupKind::GL, &Id, &caps(&[1, 2])).is_err());
    assert!(main_theorem_degree0(k, GroupKind::O, &Id, &caps(&[2, 1])).is_err());
}

#[test]
fn characteristic_two_functor_side() {
    let r = main_theorem_lowdeg(Field::of(2), GroupKind::O, &Id, 2, &caps(&[2, 3, 4])).unwrap();
    let dims: Vec<Vec<usize>> = r.functor_side.iter().map(|t| t.dims.clone()).collect();
    assert_eq!(dims, [vec![0, 1, 2], vec![0, 0, 1], vec![0, 0, 1]]);
    assert_eq!(r.predicted.as_deref(), Some(&[0, 0, 1][..]));
    assert_eq!(r.status, Status::Agree);
    assert!(main_theorem_lowdeg(Field::of(2), GroupKind::O, &Id, 3, &caps(&[2, 3])).is_err());
}

#[test]
fn low_degrees_in_odd_characteristic() {
    let k = Field::of(3);
    let c = main_theorem_lowdeg(k, GroupKind::O, &Const(1), 1, &caps(&[1, 2])).unwrap();
    assert_eq!(c.functor_side.last().unwrap().dims, [1, 0]);
    assert_eq!(c.status, Status::Agree);
    let d0 = main_theorem_degree0(k, GroupKind::Sp, &Ext(2), &caps(&[1, 2])).unwrap();
    let l = main_theorem_lowdeg(k, GroupKind::Sp, &Ext(2), 0, &caps(&[1, 2])).unwrap();
    assert_eq!(l.functor_side.iter().map(|t| t.dims[0]).collect::<Vec<_>>(), d0.functor_side.iter().map(|t| t.dims[0]).collect::<Vec<_>>());
    // no closed form for S^j
    assert_eq!(main_theorem_lowdeg(k, GroupKind::O, &Sym(2), 0, &caps(&[1, 2])).unwrap().status, Status::Inconclusive);
}

#[test]
fn injections_against_all_maps() {
    let k = Field::of(2);
    let c = suslin_comparison(k, &Const(1), &Const(1), 2, &caps(&[1, 2, 3])).unwrap();
    assert!(c.injections.iter().chain(&c.all_maps).all(|t| t.dims == [1, 0, 0]));
    assert_eq!(c.status, Status::Agree);
    // the injection side carries a class in degree 2 at caps 2 and 3 that the next cap kills
    let id = suslin_comparison(k, &Const(1), &Id, 2, &caps(&[1, 2, 3, 4])).unwrap();
    let inj: Vec<Vec<usize>> = id.injections.iter().map(|t| t.dims.clone()).collect();
    assert_eq!(inj, [vec![1, 0, 0], vec![0, 0, 1], vec![0, 0, 1], vec![0, 0, 0]]);
    assert!(id.all_maps.iter().all(|t| t.dims == [0, 0, 0]));
    assert_eq!(id.agree_at, [false, false, false, true]);
    assert_eq!(id.status, Status::Inconclusive);
    let low = suslin_comparison(k, &Const(1), &Id, 1, &caps(&[2, 3])).unwrap();
    assert_eq!(low.status, Status::Agree);
    // projectives of each category: concentrated in degree 0, with value A(c)
    let p = suslin_comparison(k, &Sym(2).dual(), &Proj(2), 2, &caps(&[2, 3])).unwrap();
    for t in p.injections.iter().chain(&p.all_maps) {
        assert_eq!(t.dims, [3, 0, 0]);
    }
}

#[test]
fn subspace_pairs_and_vanishing() {
    let k = Field::of(2);
    let zero = djament_comparison(k, |g| Ok(LinRep::zero(g.pairs(), k, Variance::Contravariant)), &Id, 1, &caps(&[1, 2])).unwrap();
    assert!(zero.lambda_side.iter().chain(&zero.omega_side).all(|t| t.dims == [0, 0]));
    let r = djament_comparison(k, |g| Ok(pairs_off_zero(g)), &Id, 1, &caps(&[1, 2, 3])).unwrap();
    assert!(r.lambda_vanishes);
    assert_eq!(r.omega_side.iter().map(|t| t.dims[0]).collect::<Vec<_>>(), [1, 0, 0]);
    assert_eq!(r.status, Status::Agree);
    let c = djament_comparison(k, |g| Ok(pairs_off_zero(g)), &Const(1), 1, &caps(&[1, 2])).unwrap();
    assert!(c.omega_side.iter().all(|t| t.dims == [0, 0]));
}

#[test]
fn symmetric_groups_and_cross_effects() {
    let gamma = build_set_cat(5, SetKind::Pointed).unwrap();
    let opts = ComparisonOptions::default();
    let k2 = Field::of(2);
    let c = betley_symmetric(&LinRep::constant(&gamma, k2, Variance::Covariant, 1), 5, &opts).unwrap();
    assert_eq!(c.group_plateau, [Some(1), Some(1)]);
    assert_eq!(c.cross_effect_side, [Some(1), Some(1)]);
    assert_eq!(c.status, [Status::Agree; 2]);
    assert_eq!(c.h1_trivial.plateau_value(), Some(1));
    for q in [2, 3] {
        let k = Field::of(q);
        let r = betley_symmetric(&reduced_linearization(&gamma, k), 5, &opts).unwrap();
        assert_eq!(r.cross_effect_dims, [0, 1, 0, 0, 0, 0]);
        assert_eq!(r.group_plateau[0], Some(1));
        assert_eq!(r.status, [Status::Agree; 2]);
    }
    // the truncation of Γ must reach nmax
    let small = build_set_cat(3, SetKind::Pointed).unwrap();
    assert!(betley_symmetric(&LinRep::constant(&small, k2, Variance::Covariant, 1), 5, &opts).is_err());
}

#[test]
fn general_linear_coinvariants_vanish() {
    let opts = ComparisonOptions::default();
    for q in [2, 3] {
        let k = Field::of(q);
        for e in [Id, Sym(2)] {
            let r = gl_vanishing(k, &e, 4, &opts).unwrap();
            assert!(r.reduced);
            assert_eq!(r.scan.plateau_value(), Some(0), "{e} over F_{q}");
            assert_eq!(r.status, Status::Agree);
        }
        let c = gl_vanishing(k, &Const(1), 3, &opts).unwrap();
        assert!(!c.reduced);
        assert_eq!(c.scan.plateau_value(), Some(1));
        assert_eq!(c.status, Status::Inconclusive);
    }
    let id2 = gl_vanishing(Field::of(2), &Id, 3, &opts).unwrap();
    assert_eq!(id2.scan.dims(), [Some(1), Some(0), Some(0)]);
}

#[test]
fn stabilizers_have_connected_homology() {
    let opts = ComparisonOptions::default();
    let theta = build_set_cat(3, SetKind::Injections).unwrap();
    let s = Stabilization::by_sum(&theta, 0, 1).unwrap();
    let r = stabilizer_constancy(&theta, &s, 3, 1, Field::of(2), &opts).unwrap();
    assert!(r.h0_constant);
    // St(c, 3) ≅ 𝔖_{3 − |c|}: H_1 over F_2 is nonzero only when two points are free
    for (c, _, _, dims) in &r.rows {
        assert_eq!(dims[1], usize::from(theta.object(*c).size <= 1), "c = {c}");
    }
    let inj = build_vect_cat(Field::of(2), 2, VectClass::Inj, DEFAULT_MORPHISM_CAP).unwrap();
    let s = Stabilization::by_sum(&inj, 0, 1).unwrap();
    assert!(stabilizer_constancy(&inj, &s, 2, 0, Field::of(2), &opts).unwrap().h0_constant);
}

#[test]
fn summary_table() {
    let rows = vec![
        SummaryRow { label: "a".into(), left: "0".into(), right: "0".into(), status: Status::Agree },
        SummaryRow { label: "longer".into(), left: "12".into(), right: "-".into(), status: Status::Inconclusive },
    ];
    assert_eq!(render_summary(&rows), "row     left  right  status\na          0      0  agree\nlonger    12      -  inconclusive\n");
    assert_eq!(Status::all([Status::Agree, Status::Inconclusive]), Status::Inconclusive);
    assert_eq!(Status::all([Status::Inconclusive, Status::Disagree]), Status::Disagree);
    assert_eq!(Status::all([]), Status::Agree);
}

fn small_expr() -> impl Strategy<Value = FunctorExpr> {
    prop::sample::select(vec![Id, Sym(2), Ext(2), Div(2), Const(1), Id.sum(Id), Id.tensor(Id), Const(2).sum(Sym(2))])
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn tensor_and_resolution_agree_in_degree_zero(e in small_expr(), sp in any::<bool>(), q in prop::sample::select(vec![2u32, 3])) {
        let kind = if sp { GroupKind::Sp } else { GroupKind::O };
        let k = Field::of(q);
        let a = main_theorem_degree0(k, kind, &e, &caps(&[1, 2])).unwrap();
        let b = main_theorem_lowdeg(k, kind, &e, 0, &caps(&[1, 2])).unwrap();
        let da: Vec<usize> = a.functor_side.iter().map(|t| t.dims[0]).collect();
        let db: Vec<usize> = b.functor_side.iter().map(|t| t.dims[0]).collect();
        prop_assert_eq!(da, db);
    }
}
