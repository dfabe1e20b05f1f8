mod common;

use center_algebra::lie::{
    abel_gen_count, bch, dynkin_is_lie, expand_bracket, free_lie_dim, is_group_like,
    is_lie_element, is_lyndon, lucas, lyndon_basis, mobius, shuffle_product,
};
use center_algebra::linalg::series_rank;
use center_algebra::word::enumerate_words;
use center_algebra::{Error, FreeSeries, LieSeries, Scalar, Word};
use common::{random_lie, rng, w};
use num_traits::One;

#[test]
fn mobius_values() {
    let expected = [1, -1, -1, 0, -1, 1, -1, 0, 0, 1, -1, 0];
    for (k, &m) in expected.iter().enumerate() {
        assert_eq!(mobius(k as u64 + 1).unwrap(), m, "mu({})", k + 1);
    }
    assert!(mobius(0).is_err());
}

#[test]
fn small_dimensions() {
    let dims: Vec<u64> = (1..=6).map(|n| free_lie_dim(n).unwrap()).collect();
    assert_eq!(dims, vec![1, 1, 2, 3, 6, 9]);
    let counts: Vec<u64> = (5..=8).map(|n| abel_gen_count(n).unwrap()).collect();
    assert_eq!(counts, vec![1, 1, 3, 4]);
    assert_eq!(lucas(1), 1);
    assert_eq!(lucas(2), 3);
    assert_eq!(lucas(5), 11);
}

#[test]
fn lyndon_words_are_lyndon() {
    for n in 1..=9 {
        for u in lyndon_basis(u32::MAX, n) {
            assert!(is_lyndon(u.letters()));
            assert_eq!(u.weight(), n);
        }
    }
    assert!(is_lyndon(&[1, 2]));
    assert!(!is_lyndon(&[2, 1]));
    assert!(!is_lyndon(&[1, 1]));
}

#[test]
fn right_nested_brackets_span_free_lie_slices() {
    for n in 1..=8usize {
        let expanded: Vec<FreeSeries> = enumerate_words(n)
            .iter()
            .map(|u| expand_bracket(u).unwrap())
            .collect();
        assert_eq!(series_rank(&expanded) as u64, free_lie_dim(n as u64).unwrap(), "weight {n}");
    }
}

#[test]
fn shuffle_counts_are_binomial() {
    let u = w(&[1, 2]);
    let v = w(&[3, 1]);
    let total: u64 = shuffle_product(&u, &v).values().sum();
    assert_eq!(total, 6);
    let aa = shuffle_product(&w(&[1]), &w(&[1]));
    assert_eq!(aa.get(&w(&[1, 1])), Some(&2));
    let long = shuffle_product(&w(&[1, 2, 3]), &w(&[4, 5]));
    assert_eq!(long.values().sum::<u64>(), 10);
    assert_eq!(long.len(), 10);
}

#[test]
fn exponentials_of_lie_elements_are_group_like() {
    let mut r = rng(11);
    for _ in 0..15 {
        let h = random_lie(&mut r, 6, 3);
        assert!(is_lie_element(h.body()).unwrap());
        assert!(dynkin_is_lie(h.body()));
        let g = h.exp();
        assert!(is_group_like(&g).unwrap());
        assert_eq!(g.log().unwrap(), *h.body());
    }
}

#[test]
fn planted_counterexamples_are_rejected() {
    let not_group = &FreeSeries::one(4) + &FreeSeries::letter(4, 1);
    assert!(!is_group_like(&not_group).unwrap());
    let x1 = FreeSeries::letter(4, 1);
    let x2 = FreeSeries::letter(4, 2);
    let not_lie = &x1 * &x2;
    assert!(!is_lie_element(&not_lie).unwrap());
    assert!(matches!(LieSeries::try_new(not_lie), Err(Error::NotLie)));
    assert!(is_lie_element(&x1.commutator(&x2)).unwrap());
}

#[test]
fn bch_matches_log_of_product() {
    let mut r = rng(12);
    for _ in 0..10 {
        let a = random_lie(&mut r, 6, 3);
        let b = random_lie(&mut r, 6, 3);
        let z = bch(&a, &b).unwrap();
        let direct = (&a.exp() * &b.exp()).log().unwrap();
        assert_eq!(*z.body(), direct);
        assert!(is_lie_element(z.body()).unwrap());
    }
}

#[test]
fn bch_is_associative() {
    let mut r = rng(13);
    for _ in 0..5 {
        let a = random_lie(&mut r, 6, 2);
        let b = random_lie(&mut r, 6, 2);
        let c = random_lie(&mut r, 6, 2);
        let left = bch(&bch(&a, &b).unwrap(), &c).unwrap();
        let right = bch(&a, &bch(&b, &c).unwrap()).unwrap();
        assert_eq!(left, right);
    }
}

#[test]
fn bch_low_order_terms() {
    let x = LieSeries::linear(3, [(1, Scalar::one())]);
    let y = LieSeries::linear(3, [(2, Scalar::one())]);
    let z = bch(&x, &y).unwrap();
    assert_eq!(z.body().coeff(&w(&[1])), Scalar::one());
    assert_eq!(z.body().coeff(&w(&[2])), Scalar::one());
    assert_eq!(z.body().coeff(&w(&[1, 2])), Scalar::ratio(1, 2));
    assert_eq!(z.body().coeff(&w(&[2, 1])), Scalar::ratio(-1, 2));
}

#[test]
fn single_letter_bracket_is_the_letter() {
    assert_eq!(expand_bracket(&Word::letter(4)).unwrap(), FreeSeries::letter(4, 4));
    assert!(expand_bracket(&Word::empty()).is_err());
}
