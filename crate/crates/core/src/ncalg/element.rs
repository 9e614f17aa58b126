use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::rational::{binomial, int, rising_factorial, Rational};

/// Default bound on `|b_exp|` for elements of `A[b^-1]`.
pub const DEFAULT_LAURENT_WINDOW: u32 = 64;

/// A letter of a word in the generators, or a scalar.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Letter {
    A,
    B,
    BInv,
    Scalar(Rational),
}

/// A normal-ordered element `Σ c·a^i·b^j` of `A` or `A[b^-1]`.
///
/// Keys are `(a_exp, b_exp)`; zero coefficients are never stored. Negative
/// `b_exp` only occur when the element is flagged Laurent.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct NcElement {
    terms: BTreeMap<(u32, i32), Rational>,
    laurent: bool,
}

impl NcElement {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::scalar(Rational::one())
    }

    pub fn scalar(c: Rational) -> Self {
        Self::monomial(c, 0, 0)
    }

    pub fn a() -> Self {
        Self::monomial(Rational::one(), 1, 0)
    }

    pub fn b() -> Self {
        Self::monomial(Rational::one(), 0, 1)
    }

    /// `b^-1`, an element of the Laurent extension.
    pub fn b_inv() -> Self {
        Self::monomial(Rational::one(), 0, -1)
    }

    /// `c·a^i·b^j`; flagged Laurent when `j < 0`.
    pub fn monomial(c: Rational, a_exp: u32, b_exp: i32) -> Self {
        let mut e = NcElement { terms: BTreeMap::new(), laurent: b_exp < 0 };
        e.add_term(a_exp, b_exp, c);
        e
    }

    /// `a − λ·b`.
    pub fn linear(lambda: &Rational) -> Self {
        let mut e = Self::a();
        e.add_term(0, 1, -lambda.clone());
        e
    }

    /// `Σ c_i b^i`.
    pub fn b_polynomial(coeffs: &[Rational]) -> Self {
        let mut e = Self::zero();
        for (i, c) in coeffs.iter().enumerate() {
            e.add_term(0, i as i32, c.clone());
        }
        e
    }

    pub fn from_terms(terms: impl IntoIterator<Item = ((u32, i32), Rational)>) -> Self {
        let mut e = Self::zero();
        for ((i, j), c) in terms {
            e.add_term(i, j, c);
        }
        e
    }

    /// Marks the element as living in `A[b^-1]`.
    pub fn into_laurent(mut self) -> Self {
        self.laurent = true;
        self
    }

    pub(crate) fn add_term(&mut self, a_exp: u32, b_exp: i32, c: Rational) {
        if c.is_zero() {
            return;
        }
        if b_exp < 0 {
            self.laurent = true;
        }
        let key = (a_exp, b_exp);
        let slot = self.terms.entry(key).or_insert_with(Rational::zero);
        *slot += c;
        if slot.is_zero() {
            self.terms.remove(&key);
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_laurent(&self) -> bool {
        self.laurent
    }

    pub fn coeff(&self, a_exp: u32, b_exp: i32) -> Rational {
        self.terms.get(&(a_exp, b_exp)).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn terms(&self) -> impl Iterator<Item = (u32, i32, &Rational)> {
        self.terms.iter().map(|(&(i, j), c)| (i, j, c))
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn max_a_exp(&self) -> Option<u32> {
        self.terms.keys().map(|&(i, _)| i).max()
    }

    /// The total degree `a_exp + b_exp` when every term shares it.
    pub fn homogeneous_degree(&self) -> Option<i64> {
        let mut degs = self.terms.keys().map(|&(i, j)| i as i64 + j as i64);
        let d = degs.next()?;
        degs.all(|e| e == d).then_some(d)
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        out.laurent |= other.laurent;
        for (&(i, j), c) in &other.terms {
            out.add_term(i, j, c.clone());
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Self {
        self.scale(&-Rational::one())
    }

    pub fn scale(&self, c: &Rational) -> Self {
        if c.is_zero() {
            return NcElement { terms: BTreeMap::new(), laurent: self.laurent };
        }
        NcElement {
            terms: self.terms.iter().map(|(k, v)| (*k, v * c)).collect(),
            laurent: self.laurent,
        }
    }

    /// Product in the default Laurent window.
    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.mul_in_window(other, DEFAULT_LAURENT_WINDOW)
    }

    /// Product; for Laurent results every `|b_exp|` must stay within `window`.
    pub fn mul_in_window(&self, other: &Self, window: u32) -> Result<Self> {
        let laurent = self.laurent || other.laurent;
        let mut out = NcElement { terms: BTreeMap::new(), laurent };
        for (&(i, j), x) in &self.terms {
            for (&(k, l), y) in &other.terms {
                let xy = x * y;
                for (ai, bj, c) in monomial_product(i, j, k, l) {
                    if laurent && bj.unsigned_abs() > window {
                        return Err(Error::LaurentWindowExceeded {
                            exponent: bj as i64,
                            window,
                        });
                    }
                    out.add_term(ai, bj, Rational::from_integer(c) * &xy);
                }
            }
        }
        Ok(out)
    }

    /// `self^n` by repeated multiplication.
    pub fn pow(&self, n: u32) -> Result<Self> {
        let mut acc = if self.laurent { Self::one().into_laurent() } else { Self::one() };
        for _ in 0..n {
            acc = acc.mul(self)?;
        }
        Ok(acc)
    }
}

/// `a^i b^j · a^k b^l` in normal order.
///
/// Uses the closed form `b^j a^k = Σ_r (−1)^r C(k,r) j(j+1)…(j+r−1) a^{k−r} b^{j+r}`,
/// which follows from `b^q·a = a·b^q − q·b^{q+1}` and holds for every integer `j`.
pub fn monomial_product(i: u32, j: i32, k: u32, l: i32) -> Vec<(u32, i32, BigInt)> {
    (0..=k)
        .filter_map(|r| {
            let mut c = binomial(k, r) * rising_factorial(j as i64, r);
            if c.is_zero() {
                return None;
            }
            if r % 2 == 1 {
                c = -c;
            }
            Some((i + k - r, j + r as i32 + l, c))
        })
        .collect()
}

/// Normal form of a word in `a`, `b`, `b^-1` and scalars.
pub fn normal_order(word: &[Letter], laurent: bool) -> Result<NcElement> {
    normal_order_in_window(word, laurent, DEFAULT_LAURENT_WINDOW)
}

pub fn normal_order_in_window(word: &[Letter], laurent: bool, window: u32) -> Result<NcElement> {
    if !laurent && word.contains(&Letter::BInv) {
        return Err(Error::LaurentNotAllowed);
    }
    let mut acc = if laurent { NcElement::one().into_laurent() } else { NcElement::one() };
    for letter in word {
        let next = match letter {
            Letter::A => NcElement::a(),
            Letter::B => NcElement::b(),
            Letter::BInv => NcElement::b_inv(),
            Letter::Scalar(c) => NcElement::scalar(c.clone()),
        };
        acc = acc.mul_in_window(&next, window)?;
    }
    Ok(acc)
}

fn write_monomial(f: &mut fmt::Formatter<'_>, i: u32, j: i32) -> fmt::Result {
    let mut parts = Vec::new();
    match i {
        0 => {}
        1 => parts.push("a".to_string()),
        _ => parts.push(format!("a^{i}")),
    }
    match j {
        0 => {}
        1 => parts.push("b".to_string()),
        _ => parts.push(format!("b^{j}")),
    }
    write!(f, "{}", parts.join("*"))
}

/// Terms by descending `a_exp`, then ascending `b_exp`, e.g.
/// `a^2 - 3*a*b + 4*b^2`. The output re-parses to the same element.
impl fmt::Display for NcElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let mut keys: Vec<_> = self.terms.keys().copied().collect();
        keys.sort_by(|x, y| y.0.cmp(&x.0).then(x.1.cmp(&y.1)));
        for (n, key) in keys.iter().enumerate() {
            let c = &self.terms[key];
            let mag = c.abs();
            if n == 0 {
                if c.is_negative() {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if c.is_negative() { '-' } else { '+' })?;
            }
            let (i, j) = *key;
            if i == 0 && j == 0 {
                write!(f, "{mag}")?;
            } else if mag.is_one() {
                write_monomial(f, i, j)?;
            } else {
                write!(f, "{mag}*")?;
                write_monomial(f, i, j)?;
            }
        }
        Ok(())
    }
}

/// `[a, S(b)] = b²·S′(b)` for a polynomial `S` given by its coefficients.
pub fn commutator_with_a(s: &[Rational]) -> Result<NcElement> {
    let sb = NcElement::b_polynomial(s);
    Ok(NcElement::a().mul(&sb)?.sub(&sb.mul(&NcElement::a())?))
}

/// `m·b^{m+1}`, the expected value of `a·b^m − b^m·a`.
pub fn expected_commutator_b_power(m: i32) -> NcElement {
    NcElement::monomial(int(m as i64), 0, m + 1)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::rat;
    use Letter::*;

    #[test]
    fn single_swap() {
        let e = normal_order(&[B, A], false).unwrap();
        assert_eq!(e.to_string(), "a*b - b^2");
    }

    #[test]
    fn b_times_a_squared() {
        let e = normal_order(&[B, A, A], false).unwrap();
        assert_eq!(e.to_string(), "a^2*b - 2*a*b^2 + 2*b^3");
    }

    #[test]
    fn a_times_b_inverse() {
        // a·b^-1 = b^-1·a − 1; in a-left order b^-1·a = a·b^-1 + 1.
        let ab = normal_order(&[A, BInv], true).unwrap();
        assert_eq!(ab.to_string(), "a*b^-1");
        let ba = normal_order(&[BInv, A], true).unwrap();
        assert_eq!(ba.to_string(), "a*b^-1 + 1");
        let rhs = ba.sub(&NcElement::one());
        assert_eq!(rhs, ab);
        // oracle: (b^-1·a − 1)·b == a
        let back = rhs.mul(&NcElement::b()).unwrap();
        assert_eq!(back.terms().collect::<Vec<_>>(), vec![(1, 0, &int(1))]);
    }

    #[test]
    fn empty_word_is_one() {
        assert_eq!(normal_order(&[], false).unwrap(), NcElement::one());
    }

    #[test]
    fn laurent_letter_rejected_outside_laurent_mode() {
        assert_eq!(normal_order(&[A, BInv], false), Err(Error::LaurentNotAllowed));
    }

    #[test]
    fn window_is_enforced() {
        let err = normal_order_in_window(&[BInv, BInv, BInv], true, 2).unwrap_err();
        assert_eq!(err, Error::LaurentWindowExceeded { exponent: -3, window: 2 });
    }

    #[test]
    fn multiply_examples() {
        let x = NcElement::linear(&int(2));
        let y = NcElement::linear(&int(1));
        assert_eq!(x.mul(&y).unwrap().to_string(), "a^2 - 3*a*b + 4*b^2");
        assert_eq!(x.mul(&NcElement::one()).unwrap(), x);
        let unit = NcElement::b().mul(&NcElement::b_inv()).unwrap();
        assert_eq!(unit.terms().collect::<Vec<_>>(), vec![(0, 0, &int(1))]);
    }

    #[test]
    fn commutator_with_polynomial() {
        let s = vec![int(1), rat(1, 2), int(-3)];
        // b^2 S' = b^2 (1/2 - 6b)
        let expected = NcElement::b_polynomial(&[int(0), int(0), rat(1, 2), int(-6)]);
        assert_eq!(commutator_with_a(&s).unwrap(), expected);
    }

    #[test]
    fn laurent_commutator_range() {
        for m in -8..=8 {
            let bm = NcElement::monomial(int(1), 0, m).into_laurent();
            let lhs = NcElement::a().mul(&bm).unwrap().sub(&bm.mul(&NcElement::a()).unwrap());
            let want = expected_commutator_b_power(m);
            assert_eq!(
                lhs.terms().collect::<Vec<_>>(),
                want.terms().collect::<Vec<_>>(),
                "m = {m}"
            );
        }
    }

    #[test]
    fn rendering_rationals_and_signs() {
        let e = NcElement::from_terms([((1, 0), rat(-1, 2)), ((0, 0), int(-1)), ((0, 2), int(1))]);
        assert_eq!(e.to_string(), "-1/2*a - 1 + b^2");
        assert_eq!(NcElement::zero().to_string(), "0");
    }
}
