use std::fmt;

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::rational::{int, Rational};

/// A power series in `b` known modulo `b^precision`.
///
/// Only indices below the precision are stored, trailing zeros are trimmed.
/// A series whose stored coefficients are all zero is "zero up to
/// `b^precision`", which is different from an exact zero: its valuation is
/// reported as the precision.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct TruncatedSeries {
    coeffs: Vec<Rational>,
    precision: usize,
}

impl TruncatedSeries {
    /// Builds a series from coefficients of `b^0, b^1, ...`; entries at or
    /// beyond `precision` are dropped.
    pub fn new(mut coeffs: Vec<Rational>, precision: usize) -> Result<Self> {
        if precision == 0 {
            return Err(Error::InvalidInput("series precision must be >= 1".into()));
        }
        coeffs.truncate(precision);
        let mut s = TruncatedSeries { coeffs, precision };
        s.trim();
        Ok(s)
    }

    pub(crate) fn from_parts(mut coeffs: Vec<Rational>, precision: usize) -> Self {
        coeffs.truncate(precision);
        let mut s = TruncatedSeries { coeffs, precision };
        s.trim();
        s
    }

    pub fn zero(precision: usize) -> Self {
        TruncatedSeries { coeffs: Vec::new(), precision }
    }

    pub fn constant(c: Rational, precision: usize) -> Self {
        Self::from_parts(vec![c], precision)
    }

    pub fn one(precision: usize) -> Self {
        Self::constant(Rational::one(), precision)
    }

    /// `c * b^n`.
    pub fn monomial(c: Rational, n: usize, precision: usize) -> Self {
        let mut coeffs = vec![Rational::zero(); n];
        coeffs.push(c);
        Self::from_parts(coeffs, precision)
    }

    fn trim(&mut self) {
        while self.coeffs.last().is_some_and(|c| c.is_zero()) {
            self.coeffs.pop();
        }
    }

    pub fn precision(&self) -> usize {
        self.precision
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> Rational {
        self.coeffs.get(i).cloned().unwrap_or_else(Rational::zero)
    }

    /// Zero up to the known precision.
    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Index of the first nonzero coefficient, or the precision when none is
    /// known to be nonzero.
    pub fn valuation(&self) -> usize {
        self.coeffs
            .iter()
            .position(|c| !c.is_zero())
            .unwrap_or(self.precision)
    }

    /// Lowers the precision; a request above the current one is ignored.
    pub fn truncate(&self, precision: usize) -> Self {
        Self::from_parts(self.coeffs.clone(), precision.min(self.precision))
    }

    pub fn add(&self, other: &Self) -> Self {
        let precision = self.precision.min(other.precision);
        let n = self.coeffs.len().max(other.coeffs.len()).min(precision);
        let coeffs = (0..n).map(|i| self.coeff(i) + other.coeff(i)).collect();
        Self::from_parts(coeffs, precision)
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Self {
        TruncatedSeries {
            coeffs: self.coeffs.iter().map(|c| -c).collect(),
            precision: self.precision,
        }
    }

    pub fn scale(&self, c: &Rational) -> Self {
        if c.is_zero() {
            return Self::zero(self.precision);
        }
        TruncatedSeries {
            coeffs: self.coeffs.iter().map(|x| x * c).collect(),
            precision: self.precision,
        }
    }

    /// Product with precision `min(p1 + v2, p2 + v1)`.
    pub fn mul(&self, other: &Self) -> Self {
        let precision = (self.precision + other.valuation())
            .min(other.precision + self.valuation());
        let mut coeffs = vec![Rational::zero(); precision.min(self.coeffs.len() + other.coeffs.len())];
        for (i, x) in self.coeffs.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (j, y) in other.coeffs.iter().enumerate() {
                if i + j >= coeffs.len() {
                    break;
                }
                coeffs[i + j] += x * y;
            }
        }
        Self::from_parts(coeffs, precision)
    }

    /// Multiplication by `b^n`.
    pub fn shift(&self, n: usize) -> Self {
        let mut coeffs = vec![Rational::zero(); n];
        coeffs.extend(self.coeffs.iter().cloned());
        Self::from_parts(coeffs, self.precision + n)
    }

    /// The derivation `S ↦ b²·S'(b)`, i.e. the commutator `a·S − S·a`.
    pub fn b2_derivative(&self) -> Self {
        let mut coeffs = vec![Rational::zero(); self.coeffs.len() + 1];
        for (n, c) in self.coeffs.iter().enumerate().skip(1) {
            coeffs[n + 1] = c * int(n as i64);
        }
        Self::from_parts(coeffs, self.precision + 1)
    }

    /// Multiplicative inverse modulo `b^precision`.
    pub fn inverse(&self) -> Result<Self> {
        let c0 = self.coeff(0);
        if c0.is_zero() {
            return Err(Error::NotAUnit);
        }
        let inv0 = c0.recip();
        let n = self.precision;
        let mut out: Vec<Rational> = Vec::with_capacity(n);
        out.push(inv0.clone());
        for k in 1..n {
            let mut acc = Rational::zero();
            for j in 1..=k.min(self.coeffs.len().saturating_sub(1)) {
                acc += &self.coeffs[j] * &out[k - j];
            }
            out.push(-acc * &inv0);
        }
        Ok(Self::from_parts(out, n))
    }
}

impl fmt::Display for TruncatedSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let neg = c < &Rational::zero();
            let mag = if neg { -c } else { c.clone() };
            if first {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if neg { '-' } else { '+' })?;
            }
            first = false;
            match (i, mag.is_one()) {
                (0, _) => write!(f, "{mag}")?,
                (_, true) => write_b(f, i)?,
                (_, false) => {
                    write!(f, "{mag}*")?;
                    write_b(f, i)?
                }
            }
        }
        if first {
            write!(f, "0")?;
        }
        write!(f, " + O(b^{})", self.precision)
    }
}

fn write_b(f: &mut fmt::Formatter<'_>, i: usize) -> fmt::Result {
    if i == 1 {
        write!(f, "b")
    } else {
        write!(f, "b^{i}")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::rat;

    fn ints(v: &[i64]) -> Vec<Rational> {
        v.iter().map(|&x| int(x)).collect()
    }

    #[test]
    fn geometric_series_inverse() {
        let s = TruncatedSeries::new(ints(&[1, -1]), 4).unwrap();
        assert_eq!(s.inverse().unwrap().coeffs(), ints(&[1, 1, 1, 1]).as_slice());
    }

    #[test]
    fn inverse_of_one_and_constant() {
        let one = TruncatedSeries::one(5);
        assert_eq!(one.inverse().unwrap(), one);
        let two = TruncatedSeries::constant(int(2), 3);
        assert_eq!(two.inverse().unwrap().coeffs(), &[rat(1, 2)]);
    }

    #[test]
    fn non_unit_rejected() {
        let s = TruncatedSeries::new(ints(&[0, 1]), 4).unwrap();
        assert_eq!(s.inverse(), Err(Error::NotAUnit));
    }

    #[test]
    fn product_precision_uses_valuations() {
        // b^2 + O(b^5) times b + O(b^4): error terms b^2*O(b^4), b*O(b^5)
        let x = TruncatedSeries::monomial(int(1), 2, 5);
        let y = TruncatedSeries::monomial(int(1), 1, 4);
        let p = x.mul(&y);
        assert_eq!(p.precision(), 6);
        assert_eq!(p.valuation(), 3);
    }

    #[test]
    fn zero_carries_precision() {
        let z = TruncatedSeries::zero(7);
        assert!(z.is_zero());
        assert_eq!(z.valuation(), 7);
        let x = TruncatedSeries::new(ints(&[1, 2, 3]), 3).unwrap();
        assert_eq!(z.mul(&x).precision(), 7);
    }

    #[test]
    fn b2_derivative_matches_commutator_rule() {
        // S = 1 + 2b + 3b^2 -> b^2 S' = 2b^2 + 6b^3
        let s = TruncatedSeries::new(ints(&[1, 2, 3]), 10).unwrap();
        assert_eq!(s.b2_derivative().coeffs(), ints(&[0, 0, 2, 6]).as_slice());
    }

    #[test]
    fn display() {
        let s = TruncatedSeries::new(vec![int(1), rat(-1, 2), int(0), int(3)], 5).unwrap();
        assert_eq!(s.to_string(), "1 - 1/2*b + 3*b^3 + O(b^5)");
    }
}
