#![allow(dead_code)]

use fresco_core::rational::rat;
use fresco_core::Rational;
use proptest::prelude::*;

/// Rationals `n/d` with `|n| <= num` and `1 <= d <= den`.
pub fn rational(num: i64, den: i64) -> impl Strategy<Value = Rational> {
    (-num..=num, 1..=den).prop_map(|(n, d)| rat(n, d))
}

pub fn rationals(num: i64, den: i64, len: std::ops::RangeInclusive<usize>) -> impl Strategy<Value = Vec<Rational>> {
    prop::collection::vec(rational(num, den), len)
}
