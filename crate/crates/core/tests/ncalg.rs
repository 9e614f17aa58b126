mod common;

use std::collections::BTreeMap;

use fresco_core::ncalg::{normal_order, Letter};
use fresco_core::rational::{int, rat};
use fresco_core::{NcElement, NcSeriesElement, Rational, TruncatedSeries};
use num_traits::{One, Zero};
use proptest::prelude::*;

/// Rewrites a linear combination of words with `ba -> ab - bb` at the
/// chosen occurrence until every word is sorted.
fn swap_oracle(word: &[bool], pick_last: bool) -> BTreeMap<(u32, i32), Rational> {
    let mut pending: BTreeMap<Vec<bool>, Rational> = BTreeMap::new();
    pending.insert(word.to_vec(), Rational::one());
    let mut done: BTreeMap<(u32, i32), Rational> = BTreeMap::new();
    while let Some((w, c)) = pending.pop_first() {
        // true is b, false is a
        let hits: Vec<usize> = (0..w.len().saturating_sub(1)).filter(|&i| w[i] && !w[i + 1]).collect();
        let Some(&i) = (if pick_last { hits.last() } else { hits.first() }) else {
            let a = w.iter().filter(|x| !**x).count() as u32;
            let b = w.len() as i32 - a as i32;
            *done.entry((a, b)).or_insert_with(Rational::zero) += c;
            continue;
        };
        let mut ab = w.clone();
        ab[i] = false;
        ab[i + 1] = true;
        let mut bb = w.clone();
        bb[i + 1] = true;
        *pending.entry(ab).or_insert_with(Rational::zero) += c.clone();
        *pending.entry(bb).or_insert_with(Rational::zero) -= c;
    }
    done.retain(|_, c| !c.is_zero());
    done
}

fn as_map(e: &NcElement) -> BTreeMap<(u32, i32), Rational> {
    e.terms().map(|(i, j, c)| ((i, j), c.clone())).collect()
}

fn letters(word: &[bool]) -> Vec<Letter> {
    word.iter().map(|&b| if b { Letter::B } else { Letter::A }).collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn normal_order_is_confluent(word in prop::collection::vec(any::<bool>(), 0..=10)) {
        let closed = normal_order(&letters(&word), false).unwrap();
        prop_assert_eq!(&as_map(&closed), &swap_oracle(&word, false));
        prop_assert_eq!(&as_map(&closed), &swap_oracle(&word, true));
    }

    #[test]
    fn multiplication_is_associative(
        x in prop::collection::vec(any::<bool>(), 0..=5),
        y in prop::collection::vec(any::<bool>(), 0..=5),
        z in prop::collection::vec(any::<bool>(), 0..=5),
    ) {
        let (x, y, z) = (
            normal_order(&letters(&x), false).unwrap(),
            normal_order(&letters(&y), false).unwrap(),
            normal_order(&letters(&z), false).unwrap(),
        );
        let left = x.mul(&y).unwrap().mul(&z).unwrap();
        let right = x.mul(&y.mul(&z).unwrap()).unwrap();
        prop_assert_eq!(left, right);
    }

    #[test]
    fn commutator_with_polynomial(s in common::rationals(20, 5, 1..=6)) {
        let sb = NcElement::b_polynomial(&s);
        let a = NcElement::a();
        let lhs = a.mul(&sb).unwrap().sub(&sb.mul(&a).unwrap());
        // b^2 S'(b)
        let rhs = NcElement::from_terms(
            s.iter().enumerate().skip(1).map(|(n, c)| ((0, n as i32 + 1), c * int(n as i64))),
        );
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn series_inverse_is_inverse(
        tail in common::rationals(20, 7, 0..=6),
        c0 in (1i64..=9, 1i64..=9),
        prec in 1usize..=12,
    ) {
        let mut coeffs = vec![rat(c0.0, c0.1)];
        coeffs.extend(tail);
        let s = TruncatedSeries::new(coeffs, prec).unwrap();
        let inv = s.inverse().unwrap();
        prop_assert_eq!(s.mul(&inv), TruncatedSeries::one(prec));
    }

    #[test]
    fn truncated_product_precision(
        x in common::rationals(5, 3, 1..=6),
        y in common::rationals(5, 3, 1..=6),
        px in 1usize..=10,
        py in 1usize..=10,
    ) {
        let sx = TruncatedSeries::new(x, px).unwrap();
        let sy = TruncatedSeries::new(y, py).unwrap();
        let expected = (px + sy.valuation()).min(py + sx.valuation());
        let p = sx.mul(&sy);
        prop_assert_eq!(p.precision(), expected);
        prop_assert!(p.coeffs().len() <= expected);
    }

    #[test]
    fn series_elements_agree_with_exact(
        x in prop::collection::vec(any::<bool>(), 0..=6),
        y in prop::collection::vec(any::<bool>(), 0..=6),
    ) {
        let (x, y) = (normal_order(&letters(&x), false).unwrap(), normal_order(&letters(&y), false).unwrap());
        let prec = 16;
        let sx = NcSeriesElement::from_element(&x, prec).unwrap();
        let sy = NcSeriesElement::from_element(&y, prec).unwrap();
        let exact = NcSeriesElement::from_element(&x.mul(&y).unwrap(), prec).unwrap();
        prop_assert_eq!(sx.mul(&sy).truncate(prec), exact);
    }
}

#[test]
fn laurent_commutation() {
    for m in -8i32..=8 {
        let bm = NcElement::monomial(Rational::one(), 0, m).into_laurent();
        let a = NcElement::a().into_laurent();
        let lhs = a.mul(&bm).unwrap().sub(&bm.mul(&a).unwrap());
        assert_eq!(lhs, NcElement::monomial(int(m as i64), 0, m + 1).into_laurent(), "m = {m}");
    }
}

#[test]
fn laurent_window_is_enforced() {
    let word = vec![Letter::BInv; 70];
    assert!(normal_order(&word, true).is_err());
    assert!(normal_order(&[Letter::BInv], false).is_err());
}
