use std::fmt;

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::ncalg::NcElement;
use crate::poly::Poly;
use crate::rational::{int, Rational};

/// A homogeneous element `Σ_j c_j·a^{k−j}·b^j` of total degree `k`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct HomogeneousElement {
    coeffs: Vec<Rational>,
}

impl HomogeneousElement {
    /// `coeffs[j]` multiplies `a^{k−j} b^j` where `k = coeffs.len() − 1`.
    pub fn new(coeffs: Vec<Rational>) -> Result<Self> {
        if coeffs.is_empty() {
            return Err(Error::InvalidInput("homogeneous element needs at least one coefficient".into()));
        }
        Ok(HomogeneousElement { coeffs })
    }

    pub fn one() -> Self {
        HomogeneousElement { coeffs: vec![Rational::one()] }
    }

    /// Reads a nonzero element of `A` all of whose terms share one total degree.
    pub fn from_element(e: &NcElement) -> Result<Self> {
        if e.is_zero() {
            return Err(Error::ZeroElement);
        }
        let degree = e.homogeneous_degree().ok_or(Error::NotHomogeneous)?;
        if degree < 0 || e.terms().any(|(_, j, _)| j < 0) {
            return Err(Error::NotHomogeneous);
        }
        let k = degree as u32;
        let coeffs = (0..=k).map(|j| e.coeff(k - j, j as i32)).collect();
        Ok(HomogeneousElement { coeffs })
    }

    pub fn degree(&self) -> u32 {
        (self.coeffs.len() - 1) as u32
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    /// Leading coefficient (of `a^k`) equals one.
    pub fn is_monic(&self) -> bool {
        self.coeffs[0].is_one()
    }

    pub fn to_element(&self) -> NcElement {
        let k = self.degree();
        NcElement::from_terms(
            self.coeffs
                .iter()
                .enumerate()
                .map(|(j, c)| ((k - j as u32, j as i32), c.clone())),
        )
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        Self::from_element(&self.to_element().mul(&other.to_element())?)
    }
}

impl fmt::Display for HomogeneousElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_element())
    }
}

/// A monic polynomial `B(x)` tied to a Bernstein element by
/// `(−b)^k·B(−b^{-1}·a) = P`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub struct BernsteinPoly(Poly);

impl BernsteinPoly {
    pub fn new(p: Poly) -> Result<Self> {
        if !p.is_monic() {
            return Err(Error::NotMonic);
        }
        Ok(BernsteinPoly(p))
    }

    pub fn from_roots<'a>(roots: impl IntoIterator<Item = &'a Rational>) -> Self {
        BernsteinPoly(Poly::from_roots(roots))
    }

    pub fn degree(&self) -> u32 {
        self.0.degree().unwrap_or(0) as u32
    }

    pub fn poly(&self) -> &Poly {
        &self.0
    }

    pub fn into_poly(self) -> Poly {
        self.0
    }

    pub fn mul(&self, other: &Self) -> Self {
        BernsteinPoly(self.0.mul(&other.0))
    }

    /// `B(x + c)`.
    pub fn shift(&self, c: &Rational) -> Self {
        BernsteinPoly(self.0.shift(c))
    }

    /// Rational roots with multiplicity, ascending.
    pub fn rational_roots(&self) -> Vec<Rational> {
        self.0.rational_roots().0
    }

    /// Text in the variable `var`, factored when every root is rational.
    pub fn render(&self, var: &str) -> String {
        self.0.render(var)
    }
}

impl fmt::Display for BernsteinPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.render("x"))
    }
}

impl std::str::FromStr for BernsteinPoly {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Self::new(s.parse()?)
    }
}

impl TryFrom<String> for BernsteinPoly {
    type Error = Error;

    fn try_from(s: String) -> Result<Self> {
        s.parse()
    }
}

impl From<BernsteinPoly> for String {
    fn from(b: BernsteinPoly) -> String {
        b.to_string()
    }
}

/// `(a − λ₁b)(a − λ₂b)…(a − λ_k b)`, multiplied left to right.
pub fn bernstein_element(lambdas: &[Rational]) -> HomogeneousElement {
    let mut acc = NcElement::one();
    for l in lambdas {
        acc = acc
            .mul(&NcElement::linear(l))
            .expect("polynomial products never leave the Laurent window");
    }
    HomogeneousElement::from_element(&acc).expect("product of linear factors is homogeneous")
}

/// The elements `E_j = (−b)^k·(−b^{-1}a)^j` for `j = 0..=k`.
///
/// Since `a·b^{-m} = b^{-m}·(a − m·b)`, each one is the polynomial
/// `(−1)^{k+j}·b^{k−j}·(a − (j−1)b)…(a − b)·a`.
fn basis_elements(k: u32) -> Vec<NcElement> {
    let mut out = Vec::with_capacity(k as usize + 1);
    let mut prod = NcElement::one();
    for j in 0..=k {
        if j > 0 {
            prod = NcElement::linear(&int(j as i64 - 1))
                .mul(&prod)
                .expect("polynomial product");
        }
        let mut e = NcElement::monomial(Rational::one(), 0, (k - j) as i32)
            .mul(&prod)
            .expect("polynomial product");
        if (k + j) % 2 == 1 {
            e = e.neg();
        }
        out.push(e);
    }
    out
}

/// The Bernstein polynomial of a monic homogeneous element.
///
/// `E_j` has a-degree `j` with top term `(−1)^{k+j}·a^j·b^{k−j}`, so the
/// coefficients of `B` come out one at a time from the top a-degree down.
pub fn element_to_bpoly(p: &HomogeneousElement) -> Result<BernsteinPoly> {
    if !p.is_monic() {
        return Err(Error::NotMonic);
    }
    let k = p.degree();
    let basis = basis_elements(k);
    let mut rest = p.to_element();
    let mut coeffs = vec![Rational::zero(); k as usize + 1];
    for j in (0..=k).rev() {
        let mut c = rest.coeff(j, (k - j) as i32);
        if (k + j) % 2 == 1 {
            c = -c;
        }
        if !c.is_zero() {
            rest = rest.sub(&basis[j as usize].scale(&c));
        }
        coeffs[j as usize] = c;
    }
    debug_assert!(rest.is_zero());
    BernsteinPoly::new(Poly::new(coeffs))
}

/// Inverse of [`element_to_bpoly`]: `(−b)^k·B(−b^{-1}a)` for `k = deg B`.
pub fn bpoly_to_element(b: &BernsteinPoly, k: u32) -> Result<HomogeneousElement> {
    if b.degree() != k {
        return Err(Error::InvalidInput(format!(
            "polynomial of degree {} does not match rank {k}",
            b.degree()
        )));
    }
    let basis = basis_elements(k);
    let mut acc = NcElement::zero();
    for (j, c) in b.poly().coeffs().iter().enumerate() {
        acc = acc.add(&basis[j].scale(c));
    }
    HomogeneousElement::from_element(&acc)
}

/// Roots `−(λ_j + j − k)` of the Bernstein polynomial of
/// `(a − λ₁b)…(a − λ_k b)`, with `j` counted from the left.
pub fn roots_from_factors(lambdas: &[Rational]) -> Vec<Rational> {
    let k = lambdas.len() as i64;
    lambdas
        .iter()
        .enumerate()
        .map(|(idx, l)| -(l + int(idx as i64 + 1 - k)))
        .collect()
}

/// The monic `W` with `Q = W·P`.
///
/// Long division from the top a-degree: at step `i` the coefficient of
/// `a^{q−i}·b^i` in the running remainder fixes `w_i`.
pub fn divide_right(q: &HomogeneousElement, p: &HomogeneousElement) -> Result<HomogeneousElement> {
    if !q.is_monic() || !p.is_monic() {
        return Err(Error::NotMonic);
    }
    let (qd, pd) = (q.degree(), p.degree());
    if qd < pd {
        return Err(Error::InvalidInput(format!(
            "dividend degree {qd} is below divisor degree {pd}"
        )));
    }
    let m = qd - pd;
    let pe = p.to_element();
    let mut rest = q.to_element();
    let mut w = Vec::with_capacity(m as usize + 1);
    for i in 0..=m {
        let c = rest.coeff(qd - i, i as i32);
        if !c.is_zero() {
            let step = NcElement::monomial(c.clone(), m - i, i as i32).mul(&pe)?;
            rest = rest.sub(&step);
        }
        w.push(c);
    }
    if !rest.is_zero() {
        return Err(Error::NotDivisible { remainder: rest.to_string() });
    }
    HomogeneousElement::new(w)
}

/// The polynomial `C` with `B_Q = C·B_P` when `Q = W·P`, `deg Q = q`, `deg P = k`.
///
/// From `Q = W·(−b)^k·B_P(u) = (−b)^k·(b^{-k}·W·b^k)·B_P(u)` with
/// `u = −b^{-1}a`, `C` is the Bernstein polynomial of `b^{-k}·W·b^k`.
pub fn cofactor_poly(w: &HomogeneousElement, q: u32, k: u32) -> Result<BernsteinPoly> {
    if !w.is_monic() {
        return Err(Error::NotMonic);
    }
    if q < k || w.degree() != q - k {
        return Err(Error::InvalidInput(format!(
            "cofactor of degree {} does not match {q} - {k}",
            w.degree()
        )));
    }
    let window = q + k + 1;
    let left = NcElement::monomial(Rational::one(), 0, -(k as i32));
    let right = NcElement::monomial(Rational::one(), 0, k as i32).into_laurent();
    let conj = left
        .mul_in_window(&w.to_element().into_laurent(), window)?
        .mul_in_window(&right, window)?;
    element_to_bpoly(&HomogeneousElement::from_element(&conj)?)
}

/// Bernstein polynomial of an extension `0 → F → G → H → 0`, computed from
/// `P_G = P_F·P_H`.
pub fn exact_sequence_bpoly(
    bf: &BernsteinPoly,
    bh: &BernsteinPoly,
    rank_h: u32,
) -> Result<BernsteinPoly> {
    if bh.degree() != rank_h {
        return Err(Error::InvalidInput(format!(
            "B_H has degree {} but rank {rank_h} was given",
            bh.degree()
        )));
    }
    let pf = bpoly_to_element(bf, bf.degree())?;
    let ph = bpoly_to_element(bh, rank_h)?;
    element_to_bpoly(&pf.mul(&ph)?)
}

/// The closed form `B_F(x − rk H)·B_H(x)` of [`exact_sequence_bpoly`].
pub fn exact_sequence_closed_form(bf: &BernsteinPoly, bh: &BernsteinPoly) -> BernsteinPoly {
    bf.shift(&int(-(bh.degree() as i64))).mul(bh)
}
