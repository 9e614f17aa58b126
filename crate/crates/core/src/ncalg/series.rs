use std::collections::BTreeMap;
use std::fmt;

use num_traits::Zero;

use super::element::NcElement;
use super::truncated::TruncatedSeries;
use crate::error::{Error, Result};
use crate::rational::{binomial, Rational};

/// An element `Σ a^i·T_i(b)` of the b-completion, known modulo `b^precision`.
///
/// Columns are keyed by the a-exponent and all share the element's
/// precision; a missing column is zero up to that precision. Since
/// `b^O·a = (a − O·b)·b^O`, the ideal generated by `b^O` is two-sided and
/// truncation is compatible with multiplication.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NcSeriesElement {
    columns: BTreeMap<u32, TruncatedSeries>,
    precision: usize,
}

/// `D^r(S)` for `r = 0..=n`, where `D(S) = b²·S′`.
fn derivation_powers(s: &TruncatedSeries, n: u32) -> Vec<TruncatedSeries> {
    let mut out = Vec::with_capacity(n as usize + 1);
    out.push(s.clone());
    for r in 0..n as usize {
        let next = out[r].b2_derivative();
        out.push(next);
    }
    out
}

/// `S(b)·a^k = Σ_r C(k,r)(−1)^r a^{k−r}·D^r(S)` (result keyed by a-exponent, a-left).
pub(crate) fn series_times_a_pow(s: &TruncatedSeries, k: u32) -> Vec<(u32, TruncatedSeries)> {
    derivation_powers(s, k)
        .into_iter()
        .enumerate()
        .filter(|(_, d)| !d.is_zero())
        .map(|(r, d)| {
            let mut c = Rational::from_integer(binomial(k, r as u32));
            if r % 2 == 1 {
                c = -c;
            }
            (k - r as u32, d.scale(&c))
        })
        .collect()
}

/// `a^k·S(b) = Σ_r C(k,r)·D^r(S)·a^{k−r}` (result keyed by a-exponent, b-left).
pub(crate) fn a_pow_times_series(k: u32, s: &TruncatedSeries) -> Vec<(u32, TruncatedSeries)> {
    derivation_powers(s, k)
        .into_iter()
        .enumerate()
        .filter(|(_, d)| !d.is_zero())
        .map(|(r, d)| (k - r as u32, d.scale(&Rational::from_integer(binomial(k, r as u32)))))
        .collect()
}

fn accumulate(map: &mut BTreeMap<u32, TruncatedSeries>, key: u32, s: TruncatedSeries) {
    match map.remove(&key) {
        Some(prev) => {
            map.insert(key, prev.add(&s));
        }
        None => {
            map.insert(key, s);
        }
    }
}

impl NcSeriesElement {
    pub fn zero(precision: usize) -> Self {
        NcSeriesElement { columns: BTreeMap::new(), precision }
    }

    pub fn one(precision: usize) -> Self {
        Self::from_series(TruncatedSeries::one(precision))
    }

    /// A series in `b` alone.
    pub fn from_series(s: TruncatedSeries) -> Self {
        let precision = s.precision();
        Self::from_columns([(0, s)], precision)
    }

    /// Truncates a polynomial element of `A` to the given precision.
    pub fn from_element(e: &NcElement, precision: usize) -> Result<Self> {
        if e.is_laurent() {
            return Err(Error::LaurentNotAllowed);
        }
        if precision == 0 {
            return Err(Error::InvalidInput("precision must be >= 1".into()));
        }
        let mut cols: BTreeMap<u32, Vec<Rational>> = BTreeMap::new();
        for (i, j, c) in e.terms() {
            let j = j as usize;
            if j >= precision {
                continue;
            }
            let col = cols.entry(i).or_default();
            if col.len() <= j {
                col.resize(j + 1, Rational::zero());
            }
            col[j] = c.clone();
        }
        Ok(Self::from_columns(
            cols.into_iter()
                .map(|(i, v)| (i, TruncatedSeries::from_parts(v, precision))),
            precision,
        ))
    }

    /// Builds from a-left columns, truncating every column to `precision`.
    pub fn from_columns(
        columns: impl IntoIterator<Item = (u32, TruncatedSeries)>,
        precision: usize,
    ) -> Self {
        let mut map = BTreeMap::new();
        for (i, s) in columns {
            accumulate(&mut map, i, s);
        }
        let columns = map
            .into_iter()
            .map(|(i, s)| (i, s.truncate(precision)))
            .filter(|(_, s)| !s.is_zero())
            .collect();
        NcSeriesElement { columns, precision }
    }

    pub fn precision(&self) -> usize {
        self.precision
    }

    pub fn columns(&self) -> impl Iterator<Item = (u32, &TruncatedSeries)> {
        self.columns.iter().map(|(&i, s)| (i, s))
    }

    pub fn column(&self, a_exp: u32) -> TruncatedSeries {
        self.columns
            .get(&a_exp)
            .cloned()
            .unwrap_or_else(|| TruncatedSeries::zero(self.precision))
    }

    pub fn max_a_exp(&self) -> Option<u32> {
        self.columns.keys().next_back().copied()
    }

    pub fn is_zero(&self) -> bool {
        self.columns.is_empty()
    }

    /// Smallest b-valuation over all columns; the precision when zero.
    pub fn valuation(&self) -> usize {
        self.columns
            .values()
            .map(TruncatedSeries::valuation)
            .min()
            .unwrap_or(self.precision)
    }

    pub fn truncate(&self, precision: usize) -> Self {
        Self::from_columns(self.columns.clone(), precision.min(self.precision))
    }

    pub fn add(&self, other: &Self) -> Self {
        let precision = self.precision.min(other.precision);
        Self::from_columns(
            self.columns.iter().chain(other.columns.iter()).map(|(&i, s)| (i, s.clone())),
            precision,
        )
    }

    pub fn neg(&self) -> Self {
        NcSeriesElement {
            columns: self.columns.iter().map(|(&i, s)| (i, s.neg())).collect(),
            precision: self.precision,
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn scale(&self, c: &Rational) -> Self {
        Self::from_columns(self.columns.iter().map(|(&i, s)| (i, s.scale(c))), self.precision)
    }

    /// Product, with precision `min(p1 + v2, p2 + v1)`.
    pub fn mul(&self, other: &Self) -> Self {
        let precision = (self.precision + other.valuation())
            .min(other.precision + self.valuation());
        let mut out: BTreeMap<u32, TruncatedSeries> = BTreeMap::new();
        for (&i, s) in &self.columns {
            for (&k, t) in &other.columns {
                for (m, d) in series_times_a_pow(s, k) {
                    accumulate(&mut out, i + m, d.mul(t));
                }
            }
        }
        Self::from_columns(out, precision)
    }

    /// Drops the precision information.
    pub fn to_element(&self) -> NcElement {
        let mut e = NcElement::zero();
        for (&i, s) in &self.columns {
            for (j, c) in s.coeffs().iter().enumerate() {
                e.add_term(i, j as i32, c.clone());
            }
        }
        e
    }

    /// The `b`-left form `Σ U_j(b)·a^j` of the same element.
    pub fn to_b_left(&self) -> BTreeMap<u32, TruncatedSeries> {
        let mut out = BTreeMap::new();
        for (&i, s) in &self.columns {
            for (m, d) in a_pow_times_series(i, s) {
                accumulate(&mut out, m, d);
            }
        }
        out.into_iter()
            .map(|(m, s)| (m, s.truncate(self.precision)))
            .filter(|(_, s)| !s.is_zero())
            .collect()
    }

    /// Inverse of [`to_b_left`](Self::to_b_left).
    pub fn from_b_left(
        columns: impl IntoIterator<Item = (u32, TruncatedSeries)>,
        precision: usize,
    ) -> Self {
        let mut out = BTreeMap::new();
        for (j, t) in columns {
            for (m, d) in series_times_a_pow(&t, j) {
                accumulate(&mut out, m, d);
            }
        }
        Self::from_columns(out, precision)
    }

    /// The lowest total-degree homogeneous component and its degree.
    ///
    /// Unknown terms live in `b^O·Ã` and have total degree at least `O`, so
    /// the component is certified only when its degree is below `O`.
    pub fn initial_form(&self) -> Result<(NcElement, u32)> {
        let degree = self
            .columns
            .iter()
            .map(|(&i, s)| i as usize + s.valuation())
            .min()
            .ok_or(Error::ZeroElement)?;
        if degree >= self.precision {
            return Err(Error::PrecisionTooLow {
                degree: degree as u32,
                precision: self.precision,
            });
        }
        let mut e = NcElement::zero();
        for (&i, s) in &self.columns {
            if i as usize > degree {
                continue;
            }
            let j = degree - i as usize;
            e.add_term(i, j as i32, s.coeff(j));
        }
        Ok((e, degree as u32))
    }
}

impl fmt::Display for NcSeriesElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} + O(b^{})", self.to_element(), self.precision)
    }
}

/// `initial_form` as a free function.
pub fn initial_form(x: &NcSeriesElement) -> Result<(NcElement, u32)> {
    x.initial_form()
}
