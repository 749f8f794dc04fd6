use super::*;
use crate::exactla::{Field, LinMap, MatF};
use crate::fincat::{build_set_cat, build_vect_cat, SetKind, VectClass, DEFAULT_MORPHISM_CAP};
use FunctorExpr::*;

fn all(q: u32, d: usize) -> crate::fincat::FinCat {
    build_vect_cat(Field::of(q), d, VectClass::All, DEFAULT_MORPHISM_CAP).unwrap()
}

#[test]
fn basic_dimensions() {
    let c = all(3, 2);
    let k = Field::of(3);
    assert_eq!(evaluate(&Sym(2), &c, k).unwrap().dim(2), 3);
    assert_eq!(evaluate(&Ext(2), &c, k).unwrap().dims(), &[0, 0, 1]);
    assert_eq!(evaluate(&TensorPower(3), &c, k).unwrap().dim(2), 8);
    let c2 = all(2, 2);
    let q2 = evaluate(&LinSym2.dual(), &c2, Field::of(2)).unwrap();
    assert_eq!(q2.variance(), Variance::Contravariant);
    assert_eq!(q2.dim(2), 8);
    assert_eq!(evaluate(&Pbar, &c2, Field::of(2)).unwrap().dims(), &[0, 1, 3]);
}

#[test]
fn tensor_square_of_swap_permutes_tuples() {
    let k = Field::of(2);
    let swap = MatF::from_rows(k, 2, &[vec![0, 1], vec![1, 0]]);
    let t = tensor_power(&swap, 2).to_dense();
    // (i, j) ↦ (1-i, 1-j) on indices 2i + j
    let expect = MatF::from_cols(k, 4, &[vec![0, 0, 0, 1], vec![0, 0, 1, 0], vec![0, 1, 0, 0], vec![1, 0, 0, 0]]);
    assert_eq!(t, expect);
}

#[test]
fn evaluated_functors_are_functorial() {
    let k = Field::of(3);
    let c = all(3, 2);
    for e in [Id, Sym(2), Ext(2), Div(2), TensorPower(2), Sym(2).dual(), LinSym2.dual(), Pbar, Sym(2).delta(), Ext(2).after(Sym(2))] {
        evaluate(&e, &c, k).unwrap().validate().unwrap_or_else(|err| panic!("{e}: {err}"));
    }
    let k2 = Field::of(2);
    let c2 = all(2, 2);
    for e in [LinSym2, LinAlt2.dual(), Div(3), Sym(3).sum(Const(2)), Id.tensor(Sym(2)), Pbar.delta()] {
        evaluate(&e, &c2, k2).unwrap().validate().unwrap_or_else(|err| panic!("{e}: {err}"));
    }
}

#[test]
fn duality_is_transposition() {
    let k = Field::of(3);
    let c = all(3, 2);
    let s = evaluate(&Sym(2), &c, k).unwrap();
    let ds = evaluate(&Sym(2).dual(), &c, k).unwrap();
    let g = evaluate(&Div(2), &c, k).unwrap();
    for m in c.morphisms() {
        let a = c.matrix(m).unwrap();
        assert_eq!(*ds.action(m), sym_power(&a.transpose(), 2));
        // Γ² is the pointwise dual of S² ∘ (−)*
        assert_eq!(*g.action(m), ds.action(m).transpose());
    }
    let _ = s;
}

#[test]
fn difference_functor() {
    let k = Field::of(3);
    let c = all(3, 3);
    let id = evaluate(&Id, &c, k).unwrap();
    let d = difference(&id).unwrap();
    assert_eq!(d.dims(), &[1, 1, 1]);
    d.validate().unwrap();
    assert!(difference(&evaluate(&Const(2), &c, k).unwrap()).unwrap().is_zero());
    let ds = difference(&evaluate(&Sym(2), &c, k).unwrap()).unwrap();
    assert_eq!(ds.dims(), &[1, 2, 3]);
    ds.validate().unwrap();
    // the matrix-level Delta agrees in dimension
    assert_eq!(evaluate(&Sym(2).delta(), &c, k).unwrap().dims(), &[1, 2, 3, 4]);
    let dp = difference(&evaluate(&Pbar, &c, k).unwrap()).unwrap();
    assert_eq!(dp.dims(), &[2, 6, 18]);
    dp.validate().unwrap();
}

#[test]
fn polynomial_degrees() {
    let k = Field::of(2);
    let c = all(2, 4);
    let deg = |e: FunctorExpr| poly_degree(&evaluate(&e, &c, k).unwrap()).unwrap();
    assert_eq!(deg(Id), PolyDegree::Degree(1));
    assert_eq!(deg(Sym(3)), PolyDegree::Degree(3));
    assert_eq!(deg(Const(1)), PolyDegree::Degree(0));
    assert_eq!(deg(Const(0)), PolyDegree::Zero);
    assert_eq!(deg(Ext(2).tensor(Id)), PolyDegree::Degree(3));
    assert_eq!(deg(LinSym2), PolyDegree::NotPolynomialWithinCap { cap: 4 });
}

#[test]
fn projective_yoneda() {
    let k = Field::of(2);
    let c = all(2, 2);
    let s2 = evaluate(&Sym(2), &c, k).unwrap();
    for a in 0..3 {
        let p = LinRep::projective(&c, k, a);
        p.validate().unwrap();
        assert_eq!(hom_dim(&p, &s2).unwrap(), s2.dim(a));
    }
    let theta = build_set_cat(3, SetKind::Injections).unwrap();
    let p1 = LinRep::projective(&theta, k, 1);
    let p2 = LinRep::projective(&theta, k, 2);
    assert_eq!(hom_dim(&p1, &p2).unwrap(), p2.dim(1));
    let q = LinRep::projective_contra(&theta, k, 2);
    q.validate().unwrap();
}

#[test]
fn proj_on_sets_and_kind_errors() {
    let k = Field::of(3);
    let theta = build_set_cat(3, SetKind::Injections).unwrap();
    let r = evaluate(&Proj(1).tensor(Const(2)), &theta, k).unwrap();
    assert_eq!(r.dims(), &[0, 2, 4, 6]);
    r.validate().unwrap();
    assert!(evaluate(&Sym(2), &theta, k).is_err());
    assert!(evaluate(&InjCogen, &all(3, 1), k).is_err());
    assert!(evaluate_as(&Pbar, &all(3, 1), k, Variance::Covariant).is_err());
}

#[test]
fn restriction_and_opposite() {
    let k = Field::of(2);
    let c = all(2, 2);
    let s2 = evaluate(&Sym(2), &c, k).unwrap();
    let (sub, inc) = c.full_subcategory(&[0, 2]).unwrap();
    let r = s2.restrict(&inc).unwrap();
    assert_eq!(r.dims(), &[0, 3]);
    r.validate().unwrap();
    assert_eq!(sub.num_objects(), 2);
    let op = evaluate(&Sym(2), &c.opposite(), k).unwrap();
    assert_eq!(op.variance(), Variance::Contravariant);
    op.validate().unwrap();
    let op = evaluate(&Pbar, &c.opposite(), k).unwrap();
    assert_eq!(op.variance(), Variance::Covariant);
    op.validate().unwrap();
}

#[test]
fn exponential_small() {
    for fam in [ExpFamily::Sym, ExpFamily::Ext, ExpFamily::Div] {
        let r = exponential_check(fam, Field::of(2), 2, 2);
        assert!(r.passed(), "{fam:?}: {r:?}");
        assert!(r.naturality_squares > 0);
    }
}

#[test]
fn convolution_examples() {
    let k = Field::of(3);
    let id = MatF::identity(k, 1);
    assert!(convolution_check(ExpFamily::Sym, &id, &id, 3).passed());
    let z = MatF::zeros(k, 2, 2);
    let f = MatF::from_rows(k, 2, &[vec![1, 2], vec![0, 1]]);
    for fam in [ExpFamily::Sym, ExpFamily::Ext, ExpFamily::Div] {
        assert!(convolution_check(fam, &f, &z, 3).passed());
    }
    // S^n(2·id) = 2^n on F_3
    assert_eq!(sym_power(&id.scale(2), 3), LinMap { field: k, rows: 1, cols: vec![crate::exactla::SpVec::unit(0).scale(k, 2)] });
}

#[test]
fn expression_display_round_trip_shape() {
    assert_eq!(LinSym2.dual().to_string(), "K[q2]^v");
    assert_eq!(Sym(2).after(Id.sum(Id)).to_string(), "S^2 o (Id (+) Id)");
}
