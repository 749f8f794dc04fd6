use proptest::prelude::*;

use super::*;

/// Monomials in the generators by direct recursion on exponent vectors, with the
/// divided-power rule applied as `γ_e(x) ≠ 0` for every `e` (dimension-wise the
/// same as a polynomial generator) and odd generators exterior.
fn brute(gens: &[(usize, usize)], i: usize, j: usize) -> usize {
    fn go(gens: &[(usize, usize)], i: usize, j: usize) -> usize {
        match gens.split_first() {
            None => usize::from(i == 0 && j == 0),
            Some((&(a, b), rest)) => {
                let top = if a % 2 == 1 { 1 } else { usize::MAX };
                let mut total = 0;
                let mut e = 0;
                while e <= top && e * a <= i && e * b <= j {
                    total += go(rest, i - e * a, j - e * b);
                    e += 1;
                }
                total
            }
        }
    }
    go(gens, i, j)
}

#[test]
fn headline_values() {
    assert_eq!(stable_dim(SeriesId::OSym, 3, 0, 2), Ok(1));
    assert_eq!(stable_dim(SeriesId::OSym, 3, 1, 2), Ok(0));
    assert_eq!(stable_dim(SeriesId::SpSym, 3, 0, 2), Ok(0));
    for i in 0..=10 {
        let d = stable_dim(SeriesId::OSym, 3, i, 2).unwrap();
        assert_eq!(d > 0, i % 2 == 0, "degree {i}");
    }
    assert_eq!(stable_dim(SeriesId::OSym, 3, 0, 1), Ok(0));
    assert_eq!(stable_dim(SeriesId::OSym, 3, 0, 0), Ok(1));
    // internal degree 4: products of two (2m, 2) and the s = 1 generators (6m, 4)
    assert_eq!(stable_dim(SeriesId::OSym, 3, 0, 4), Ok(2));
    assert_eq!(stable_dim(SeriesId::OSym, 3, 4, 4), Ok(2));
    assert_eq!(stable_dim(SeriesId::OAlt, 3, 2, 4), Ok(1));
    assert_eq!(stable_dim(SeriesId::OAlt, 3, 0, 2), Ok(0));
    assert_eq!(stable_dim(SeriesId::SpAlt, 3, 0, 2), Ok(1));
}

#[test]
fn characteristic_dispatch() {
    assert_eq!(stable_dim(SeriesId::OSym, 2, 0, 2), Err(PredictError::Characteristic2));
    assert_eq!(stable_dim(SeriesId::OSym, 4, 0, 2), Err(PredictError::Characteristic2));
    assert_eq!(stable_dim(SeriesId::OSym, 6, 0, 2), Err(PredictError::NotPrimePower(6)));
    assert_eq!(characteristic(9), Ok(3));
    assert_eq!(characteristic(25), Ok(5));
}

#[test]
fn characteristic_two_rows() {
    let rows = |t| (0..6).map(|i| char2_values(t, i)).collect::<Vec<_>>();
    assert_eq!(rows(Char2Target::ExtIdIGamma2), [0, 0, 1, 1, 1, 1]);
    assert_eq!(rows(Char2Target::ExtIdILambda2), [0, 1, 1, 1, 1, 1]);
    assert_eq!(rows(Char2Target::OrthogonalStandard), [0, 0, 1, 2, 3, 4]);
    assert_eq!(rows(Char2Target::SymplecticStandard), [0, 1, 1, 1, 1, 1]);
}

#[test]
fn generators_have_even_degree_in_odd_characteristic() {
    for s in SeriesId::ALL {
        for q in [3, 5, 9] {
            assert!(s.series(q, 40, 30).unwrap().generators.iter().all(|&(a, _)| a % 2 == 0));
        }
    }
}

#[test]
fn csv_table() {
    let t = table(SeriesId::OSym, 3, 0..=2, 2..=2).unwrap();
    assert_eq!(t.to_csv(), "series,q,i,j,dim\nO/S,3,0,2,1\nO/S,3,1,2,0\nO/S,3,2,2,1\n");
}

proptest! {
    #[test]
    fn coefficients_match_direct_enumeration(
        which in 0usize..6, q in prop::sample::select(vec![3u64, 5, 9]), i in 0usize..14, j in 0usize..12,
    ) {
        let s = SeriesId::ALL[which].series(q, i, j).unwrap();
        prop_assert_eq!(s.coefficient(i, j), brute(&s.generators, i, j));
    }

    #[test]
    fn truncated_factorization_has_polynomial_dimensions(
        gens in prop::collection::vec((0usize..4, 1usize..4), 1..4), i in 0usize..10, j in 0usize..10, p in prop::sample::select(vec![3u64, 5]),
    ) {
        let gens: Vec<(usize, usize)> = gens.into_iter().map(|(a, b)| (2 * a, b)).collect();
        let div = BigradedSeries { generators: gens.clone(), kind: AlgebraKind::DividedPower, p };
        let sym = BigradedSeries { generators: gens, kind: AlgebraKind::Symmetric, p };
        prop_assert_eq!(div.coefficient(i, j), sym.coefficient(i, j));
    }
}
