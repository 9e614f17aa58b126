use std::collections::BTreeMap;

use num_traits::One;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::ncalg::{a_pow_times_series, NcElement, NcSeriesElement, TruncatedSeries};
use crate::poly::Poly;
use crate::rational::{RatList, Rational};

/// A fresco given by its generator
/// `Π = (a − λ₁b)·S₁^{-1}·(a − λ₂b)…S_{k−1}^{-1}·(a − λ_k b)`.
///
/// The unit series `S_j` are polynomials in `b` with constant term one.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "PresentationJson", into = "PresentationJson")]
pub struct FrescoPresentation {
    lambdas: Vec<Rational>,
    series: Vec<Poly>,
}

#[derive(Serialize, Deserialize)]
struct PresentationJson {
    #[serde(with = "crate::rational::serde_vec")]
    lambdas: Vec<Rational>,
    #[serde(default)]
    series: Vec<RatList>,
}

impl TryFrom<PresentationJson> for FrescoPresentation {
    type Error = Error;

    fn try_from(j: PresentationJson) -> Result<Self> {
        Self::new(j.lambdas, j.series.into_iter().map(|s| Poly::new(s.0)).collect())
    }
}

impl From<FrescoPresentation> for PresentationJson {
    fn from(p: FrescoPresentation) -> Self {
        PresentationJson {
            lambdas: p.lambdas,
            series: p
                .series
                .iter()
                .map(|s| RatList(if s.is_zero() { vec![] } else { s.coeffs().to_vec() }))
                .collect(),
        }
    }
}

impl FrescoPresentation {
    pub fn new(lambdas: Vec<Rational>, series: Vec<Poly>) -> Result<Self> {
        if lambdas.is_empty() {
            return Err(Error::InvalidInput("a presentation needs at least one factor".into()));
        }
        if series.len() + 1 != lambdas.len() {
            return Err(Error::InvalidInput(format!(
                "{} factors need {} series, got {}",
                lambdas.len(),
                lambdas.len() - 1,
                series.len()
            )));
        }
        if let Some(j) = series.iter().position(|s| !s.coeff(0).is_one()) {
            return Err(Error::InvalidInput(format!("series {} does not start with 1", j + 1)));
        }
        Ok(FrescoPresentation { lambdas, series })
    }

    /// All series equal to one.
    pub fn with_trivial_series(lambdas: Vec<Rational>) -> Result<Self> {
        let n = lambdas.len().saturating_sub(1);
        Self::new(lambdas, vec![Poly::one(); n])
    }

    pub fn rank(&self) -> usize {
        self.lambdas.len()
    }

    pub fn lambdas(&self) -> &[Rational] {
        &self.lambdas
    }

    pub fn series(&self) -> &[Poly] {
        &self.series
    }
}

fn poly_series(p: &Poly, precision: usize) -> TruncatedSeries {
    TruncatedSeries::new(p.coeffs().to_vec(), precision).expect("precision checked by caller")
}

fn check_precision(precision: usize) -> Result<()> {
    if precision == 0 {
        return Err(Error::InvalidInput("precision must be >= 1".into()));
    }
    Ok(())
}

/// `Π` expanded in normal order modulo `b^precision`.
pub fn expand_presentation(p: &FrescoPresentation, precision: usize) -> Result<NcSeriesElement> {
    check_precision(precision)?;
    let mut acc = NcSeriesElement::from_element(&NcElement::linear(&p.lambdas[0]), precision)?;
    for (s, l) in p.series.iter().zip(&p.lambdas[1..]) {
        let inv = poly_series(s, precision).inverse()?;
        acc = acc.mul(&NcSeriesElement::from_series(inv));
        acc = acc.mul(&NcSeriesElement::from_element(&NcElement::linear(l), precision)?);
    }
    Ok(acc.truncate(precision))
}

/// A class of `Ã/Ã·Π` in canonical form.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QuotientClass {
    coords: Vec<TruncatedSeries>,
    precision: usize,
}

impl QuotientClass {
    /// Coordinates `T_j` with the class equal to `Σ_j T_j(b)·a^j`, i.e. the
    /// coefficients on the module basis `(e, a·e, …, a^{k−1}·e)`.
    pub fn coords(&self) -> &[TruncatedSeries] {
        &self.coords
    }

    pub fn precision(&self) -> usize {
        self.precision
    }

    /// The same class written with a-powers on the left, `Σ_j a^j·T'_j(b)`.
    pub fn a_left(&self) -> Vec<TruncatedSeries> {
        let e = NcSeriesElement::from_b_left(
            self.coords.iter().cloned().enumerate().map(|(j, t)| (j as u32, t)),
            self.precision,
        );
        (0..self.coords.len() as u32).map(|j| e.column(j)).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(|c| c.is_zero())
    }
}

fn accumulate(map: &mut BTreeMap<u32, TruncatedSeries>, key: u32, s: TruncatedSeries) {
    let next = match map.remove(&key) {
        Some(prev) => prev.add(&s),
        None => s,
    };
    map.insert(key, next);
}

/// The normalized generator `a^k + Σ_{j<k} W_j(b)·a^j` of the left ideal `Ã·Π`.
fn normalized_generator(pi: &NcSeriesElement, k: u32) -> Result<Vec<TruncatedSeries>> {
    let bl = pi.to_b_left();
    let top = bl
        .get(&k)
        .cloned()
        .unwrap_or_else(|| TruncatedSeries::zero(pi.precision()));
    let inv = top.inverse()?;
    Ok((0..k)
        .map(|j| match bl.get(&j) {
            Some(v) => inv.mul(v).truncate(pi.precision()),
            None => TruncatedSeries::zero(pi.precision()),
        })
        .collect())
}

fn reduce_with(
    x: &NcSeriesElement,
    tail: &[TruncatedSeries],
    precision: usize,
) -> Result<QuotientClass> {
    if x.precision() < precision {
        return Err(Error::PrecisionExhausted(format!(
            "element known to b^{} but b^{precision} was requested",
            x.precision()
        )));
    }
    let k = tail.len() as u32;
    let mut rest = x.truncate(precision).to_b_left();
    while let Some((&m, _)) = rest.last_key_value() {
        if m < k {
            break;
        }
        let u = rest.remove(&m).expect("key present");
        // u·a^{m−k}·(a^k + Σ W_j a^j); the a^m term cancels exactly
        for (j, w) in tail.iter().enumerate() {
            if w.is_zero() {
                continue;
            }
            for (e, d) in a_pow_times_series(m - k, w) {
                accumulate(&mut rest, e + j as u32, u.mul(&d).neg());
            }
        }
    }
    let coords: Vec<TruncatedSeries> = (0..k)
        .map(|j| {
            rest.get(&j)
                .cloned()
                .unwrap_or_else(|| TruncatedSeries::zero(precision))
        })
        .collect();
    if let Some(c) = coords.iter().find(|c| c.precision() < precision) {
        return Err(Error::PrecisionExhausted(format!(
            "reduction certified only to b^{}",
            c.precision()
        )));
    }
    Ok(QuotientClass {
        coords: coords.into_iter().map(|c| c.truncate(precision)).collect(),
        precision,
    })
}

/// The class of `x` in `Ã/Ã·Π`.
pub fn reduce_mod_pi(
    x: &NcSeriesElement,
    p: &FrescoPresentation,
    precision: usize,
) -> Result<QuotientClass> {
    let pi = expand_presentation(p, precision)?;
    let tail = normalized_generator(&pi, p.rank() as u32)?;
    reduce_with(x, &tail, precision)
}

/// A free `C[[b]]`-module of finite rank with the action of `a` given by a
/// matrix: `a·(Σ g_j e_j) = Σ_j g_j·(M e_j) + Σ_j b²g_j′·e_j`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "AbJson", into = "AbJson")]
pub struct AbModulePresentation {
    a_matrix: Vec<Vec<TruncatedSeries>>,
    precision: usize,
    basis_note: String,
}

#[derive(Serialize, Deserialize)]
struct AbJson {
    rank: usize,
    precision: usize,
    a_matrix: Vec<Vec<RatList>>,
    #[serde(default, skip_serializing_if = "String::is_empty")]
    basis_note: String,
}

impl TryFrom<AbJson> for AbModulePresentation {
    type Error = Error;

    fn try_from(j: AbJson) -> Result<Self> {
        if j.a_matrix.len() != j.rank {
            return Err(Error::InvalidInput(format!(
                "rank {} but {} matrix rows",
                j.rank,
                j.a_matrix.len()
            )));
        }
        check_precision(j.precision)?;
        let rows = j
            .a_matrix
            .into_iter()
            .map(|row| {
                row.into_iter()
                    .map(|c| TruncatedSeries::new(c.0, j.precision))
                    .collect::<Result<Vec<_>>>()
            })
            .collect::<Result<Vec<_>>>()?;
        let mut m = Self::new(rows, j.precision)?;
        m.basis_note = j.basis_note;
        Ok(m)
    }
}

impl From<AbModulePresentation> for AbJson {
    fn from(m: AbModulePresentation) -> Self {
        AbJson {
            rank: m.rank(),
            precision: m.precision,
            a_matrix: m
                .a_matrix
                .iter()
                .map(|row| row.iter().map(|s| RatList(s.coeffs().to_vec())).collect())
                .collect(),
            basis_note: m.basis_note,
        }
    }
}

impl AbModulePresentation {
    /// `rows[i][j]` is the coefficient of `e_i` in `a·e_j`.
    pub fn new(rows: Vec<Vec<TruncatedSeries>>, precision: usize) -> Result<Self> {
        check_precision(precision)?;
        let r = rows.len();
        if r == 0 {
            return Err(Error::InvalidInput("rank must be at least 1".into()));
        }
        if rows.iter().any(|row| row.len() != r) {
            return Err(Error::InvalidInput("a_matrix must be square".into()));
        }
        if rows.iter().flatten().any(|s| s.precision() < precision) {
            return Err(Error::PrecisionExhausted(
                "matrix entry known below the stated precision".into(),
            ));
        }
        let a_matrix = rows
            .into_iter()
            .map(|row| row.into_iter().map(|s| s.truncate(precision)).collect())
            .collect();
        Ok(AbModulePresentation { a_matrix, precision, basis_note: String::new() })
    }

    pub fn rank(&self) -> usize {
        self.a_matrix.len()
    }

    pub fn precision(&self) -> usize {
        self.precision
    }

    pub fn a_matrix(&self) -> &[Vec<TruncatedSeries>] {
        &self.a_matrix
    }

    pub fn entry(&self, i: usize, j: usize) -> &TruncatedSeries {
        &self.a_matrix[i][j]
    }

    pub fn basis_note(&self) -> &str {
        &self.basis_note
    }

    pub fn with_basis_note(mut self, note: impl Into<String>) -> Self {
        self.basis_note = note.into();
        self
    }
}

/// The a-action on `Ã/Ã·Π` in the basis `(e, a·e, …, a^{k−1}·e)`.
pub fn a_matrix_from_presentation(
    p: &FrescoPresentation,
    precision: usize,
) -> Result<AbModulePresentation> {
    let k = p.rank();
    let pi = expand_presentation(p, precision)?;
    let tail = normalized_generator(&pi, k as u32)?;
    let ak = NcSeriesElement::from_element(
        &NcElement::monomial(Rational::one(), k as u32, 0),
        precision,
    )?;
    let last = reduce_with(&ak, &tail, precision)?;
    let mut rows = vec![vec![TruncatedSeries::zero(precision); k]; k];
    for j in 0..k - 1 {
        rows[j + 1][j] = TruncatedSeries::one(precision);
    }
    for (i, c) in last.coords.into_iter().enumerate() {
        rows[i][k - 1] = c;
    }
    Ok(AbModulePresentation::new(rows, precision)?
        .with_basis_note("e, a.e, ..., a^(k-1).e for the class e of 1 in A/A.Pi"))
}
