//! Dense univariate polynomials over the rationals.
//!
//! Besides ring arithmetic this module provides exact rational-root
//! extraction: denominators are cleared, the square-free part is made monic
//! over the integers by `y = L·x`, and integer roots are located by Sturm
//! sequences evaluated at half-integers. No floating point is involved.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::rational::{lcm_of_denominators, parse_rational, Rational};

/// Coefficients from degree 0 upward, with no trailing zeros.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct Poly {
    coeffs: Vec<Rational>,
}

impl Poly {
    pub fn new(mut coeffs: Vec<Rational>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        Poly { coeffs }
    }

    pub fn zero() -> Self {
        Poly { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        Self::constant(Rational::one())
    }

    pub fn constant(c: Rational) -> Self {
        Self::new(vec![c])
    }

    /// `x`.
    pub fn x() -> Self {
        Self::new(vec![Rational::zero(), Rational::one()])
    }

    /// `x + c`.
    pub fn linear(c: Rational) -> Self {
        Self::new(vec![c, Rational::one()])
    }

    /// `∏ (x − r)`.
    pub fn from_roots<'a>(roots: impl IntoIterator<Item = &'a Rational>) -> Self {
        roots
            .into_iter()
            .fold(Self::one(), |acc, r| acc.mul(&Self::linear(-r.clone())))
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> Rational {
        self.coeffs.get(i).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn leading(&self) -> Rational {
        self.coeffs.last().cloned().unwrap_or_else(Rational::zero)
    }

    pub fn is_monic(&self) -> bool {
        self.coeffs.last().is_some_and(|c| c.is_one())
    }

    pub fn monic(&self) -> Self {
        if self.is_zero() {
            return self.clone();
        }
        self.scale(&self.leading().recip())
    }

    pub fn add(&self, other: &Self) -> Self {
        let n = self.coeffs.len().max(other.coeffs.len());
        Self::new((0..n).map(|i| self.coeff(i) + other.coeff(i)).collect())
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Self {
        Poly { coeffs: self.coeffs.iter().map(|c| -c).collect() }
    }

    pub fn scale(&self, c: &Rational) -> Self {
        Self::new(self.coeffs.iter().map(|x| x * c).collect())
    }

    pub fn mul(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return Self::zero();
        }
        let mut out = vec![Rational::zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, x) in self.coeffs.iter().enumerate() {
            for (j, y) in other.coeffs.iter().enumerate() {
                out[i + j] += x * y;
            }
        }
        Self::new(out)
    }

    pub fn pow(&self, n: u32) -> Self {
        (0..n).fold(Self::one(), |acc, _| acc.mul(self))
    }

    pub fn eval(&self, x: &Rational) -> Rational {
        self.coeffs
            .iter()
            .rev()
            .fold(Rational::zero(), |acc, c| acc * x + c)
    }

    /// Euclidean division; panics on a zero divisor.
    pub fn div_rem(&self, divisor: &Self) -> (Self, Self) {
        assert!(!divisor.is_zero(), "division by the zero polynomial");
        let dd = divisor.coeffs.len() - 1;
        let lead_inv = divisor.leading().recip();
        let mut rem = self.coeffs.clone();
        if rem.len() <= dd {
            return (Self::zero(), self.clone());
        }
        let mut quot = vec![Rational::zero(); rem.len() - dd];
        for k in (0..quot.len()).rev() {
            let c = &rem[k + dd] * &lead_inv;
            if !c.is_zero() {
                for (j, d) in divisor.coeffs.iter().enumerate() {
                    rem[k + j] -= &c * d;
                }
            }
            quot[k] = c;
        }
        rem.truncate(dd);
        (Self::new(quot), Self::new(rem))
    }

    pub fn divides(&self, other: &Self) -> bool {
        !self.is_zero() && other.div_rem(self).1.is_zero()
    }

    pub fn derivative(&self) -> Self {
        Self::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, c)| c * Rational::from_integer(BigInt::from(i)))
                .collect(),
        )
    }

    /// Monic greatest common divisor (zero only when both inputs are zero).
    pub fn gcd(&self, other: &Self) -> Self {
        let (mut a, mut b) = (self.clone(), other.clone());
        while !b.is_zero() {
            let r = a.div_rem(&b).1;
            a = b;
            b = r;
        }
        a.monic()
    }

    /// `p(x + c)`.
    pub fn shift(&self, c: &Rational) -> Self {
        let step = Self::linear(c.clone());
        self.coeffs
            .iter()
            .rev()
            .fold(Self::zero(), |acc, k| acc.mul(&step).add(&Self::constant(k.clone())))
    }

    /// Rational roots with multiplicity (ascending) and the cofactor that has
    /// no rational root.
    pub fn rational_roots(&self) -> (Vec<Rational>, Poly) {
        let mut rest = self.clone();
        let mut roots = Vec::new();
        if self.degree().unwrap_or(0) == 0 {
            return (roots, rest);
        }
        while rest.coeff(0).is_zero() && rest.degree().unwrap_or(0) > 0 {
            roots.push(Rational::zero());
            rest = Self::new(rest.coeffs[1..].to_vec());
        }
        if rest.degree().unwrap_or(0) > 0 {
            let square_free = rest.div_rem(&rest.gcd(&rest.derivative())).0;
            for r in distinct_rational_roots(&square_free) {
                let factor = Self::linear(-r.clone());
                loop {
                    let (q, rem) = rest.div_rem(&factor);
                    if !rem.is_zero() {
                        break;
                    }
                    roots.push(r.clone());
                    rest = q;
                }
            }
        }
        roots.sort();
        (roots, rest)
    }

    /// Expanded text in the variable `var`, highest degree first.
    pub fn expanded(&self, var: &str) -> String {
        if self.is_zero() {
            return "0".into();
        }
        let mut out = String::new();
        for (n, (i, c)) in self
            .coeffs
            .iter()
            .enumerate()
            .rev()
            .filter(|(_, c)| !c.is_zero())
            .enumerate()
        {
            let mag = c.abs();
            if n == 0 {
                if c.is_negative() {
                    out.push('-');
                }
            } else {
                out.push_str(if c.is_negative() { " - " } else { " + " });
            }
            let mono = match i {
                0 => String::new(),
                1 => var.to_string(),
                _ => format!("{var}^{i}"),
            };
            if i == 0 {
                out.push_str(&mag.to_string());
            } else if mag.is_one() {
                out.push_str(&mono);
            } else {
                out.push_str(&format!("{mag}*{mono}"));
            }
        }
        out
    }

    /// Factored text when every root is rational, expanded text otherwise.
    pub fn render(&self, var: &str) -> String {
        let (roots, rest) = self.rational_roots();
        if roots.is_empty() || rest.degree() != Some(0) {
            return self.expanded(var);
        }
        let mut parts = Vec::new();
        let lead = rest.leading();
        if !lead.is_one() {
            parts.push(lead.to_string());
        }
        // descending roots: x + 7/10 before x + 4/5
        let mut i = roots.len();
        while i > 0 {
            let r = &roots[i - 1];
            let mut j = i - 1;
            while j > 0 && &roots[j - 1] == r {
                j -= 1;
            }
            let mult = i - j;
            let base = if r.is_zero() {
                var.to_string()
            } else if r.is_negative() {
                format!("({var} + {})", -r)
            } else {
                format!("({var} - {r})")
            };
            parts.push(if mult > 1 { format!("{base}^{mult}") } else { base });
            i = j;
        }
        parts.join("*")
    }
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.expanded("x"))
    }
}

/// Integer polynomial as a list of coefficients, degree 0 first.
type IntPoly = Vec<BigInt>;

/// Positive multiple of `p` with coprime integer coefficients.
fn primitive_integer(p: &Poly) -> IntPoly {
    let l = lcm_of_denominators(p.coeffs());
    let ints: Vec<BigInt> = p
        .coeffs()
        .iter()
        .map(|c| (c * Rational::from_integer(l.clone())).to_integer())
        .collect();
    let g = ints.iter().fold(BigInt::zero(), |acc, c| acc.gcd(c));
    if g.is_zero() {
        return ints;
    }
    ints.into_iter().map(|c| c / &g).collect()
}

/// Sign of `q^d · p(num/q)` with `q > 0`, i.e. the sign of `p(num/q)`.
fn sign_at(p: &IntPoly, num: &BigInt, den: &BigInt) -> i8 {
    let d = p.len().saturating_sub(1);
    let mut acc = BigInt::zero();
    let mut num_pow = BigInt::one();
    let mut den_pows = vec![BigInt::one(); d + 1];
    for i in 1..=d {
        den_pows[i] = &den_pows[i - 1] * den;
    }
    for (i, c) in p.iter().enumerate() {
        acc += c * &num_pow * &den_pows[d - i];
        num_pow *= num;
    }
    match acc.sign() {
        num_bigint::Sign::Minus => -1,
        num_bigint::Sign::NoSign => 0,
        num_bigint::Sign::Plus => 1,
    }
}

fn sign_variations(chain: &[IntPoly], num: &BigInt, den: &BigInt) -> usize {
    let mut last = 0i8;
    let mut count = 0;
    for p in chain {
        let s = sign_at(p, num, den);
        if s != 0 {
            if last != 0 && s != last {
                count += 1;
            }
            last = s;
        }
    }
    count
}

fn sturm_chain(p: &Poly) -> Vec<IntPoly> {
    let mut chain = vec![p.clone(), p.derivative()];
    loop {
        let n = chain.len();
        let r = chain[n - 2].div_rem(&chain[n - 1]).1;
        if r.is_zero() {
            break;
        }
        chain.push(r.neg());
    }
    chain.iter().map(primitive_integer).collect()
}

/// Distinct rational roots of a square-free polynomial with nonzero constant term.
fn distinct_rational_roots(p: &Poly) -> Vec<Rational> {
    let s = primitive_integer(p);
    let n = s.len() - 1;
    if n == 0 {
        return Vec::new();
    }
    let lead = s[n].clone();
    // R(y) = L^{n-1}·S(y/L) is monic with integer coefficients; rational
    // roots x of S correspond to integer roots y = L·x of R.
    let mut r = vec![BigInt::zero(); n + 1];
    let mut lp = BigInt::one();
    for i in (0..n).rev() {
        r[i] = &s[i] * &lp;
        lp *= &lead;
    }
    r[n] = BigInt::one();
    let r_poly = Poly::new(r.iter().map(|c| Rational::from_integer(c.clone())).collect());
    let chain = sturm_chain(&r_poly);
    let bound = r[..n].iter().map(|c| c.abs()).max().unwrap_or_default() + BigInt::one();

    // Endpoints are half-integers h/2 with h odd.
    let two = BigInt::from(2);
    let mut found = Vec::new();
    let edge: BigInt = &bound * 2 + 1;
    let mut stack = vec![(-edge.clone(), edge)];
    while let Some((lo, hi)) = stack.pop() {
        let count = sign_variations(&chain, &lo, &two) as i64
            - sign_variations(&chain, &hi, &two) as i64;
        if count <= 0 {
            continue;
        }
        if &hi - &lo == two {
            let m = (&lo + 1) / 2;
            if sign_at(&r, &m, &BigInt::one()) == 0 {
                found.push(Rational::new(m, lead.clone()));
            }
            continue;
        }
        // split at an odd midpoint
        let mut mid: BigInt = (&lo + &hi) / 2;
        if mid.is_even() {
            mid += 1;
        }
        if mid >= hi {
            mid -= 2;
        }
        stack.push((lo, mid.clone()));
        stack.push((mid, hi));
    }
    found
}

/// Parser for polynomial text such as `(ξ + 7/10)(ξ + 4/5)^2*(x - 1)`.
///
/// Accepts `x`, `ξ`, `xi` or `\xi` as the variable; `*`, `.` or
/// juxtaposition as multiplication; `^n` or `^{n}` for powers.
impl FromStr for Poly {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let mut p = PolyParser { chars: s.chars().collect(), pos: 0 };
        let out = p.expr()?;
        p.skip_ws();
        if p.pos != p.chars.len() {
            return Err(p.error("end of input"));
        }
        Ok(out)
    }
}

struct PolyParser {
    chars: Vec<char>,
    pos: usize,
}

impl PolyParser {
    fn error(&self, expected: &str) -> Error {
        Error::Parse(format!("polynomial: expected {expected} at offset {}", self.pos))
    }

    fn skip_ws(&mut self) {
        while self.chars.get(self.pos).is_some_and(|c| c.is_whitespace()) {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<char> {
        self.skip_ws();
        self.chars.get(self.pos).copied()
    }

    fn eat(&mut self, c: char) -> bool {
        if self.peek() == Some(c) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expr(&mut self) -> Result<Poly> {
        let mut acc = if self.eat('-') {
            self.term()?.neg()
        } else {
            self.eat('+');
            self.term()?
        };
        loop {
            if self.eat('+') {
                acc = acc.add(&self.term()?);
            } else if self.eat('-') {
                acc = acc.sub(&self.term()?);
            } else {
                return Ok(acc);
            }
        }
    }

    fn term(&mut self) -> Result<Poly> {
        let mut acc = self.factor()?;
        loop {
            match self.peek() {
                Some('*') | Some('.') => {
                    self.pos += 1;
                    acc = acc.mul(&self.factor()?);
                }
                Some('(') | Some('x') | Some('ξ') | Some('\\') => {
                    acc = acc.mul(&self.factor()?);
                }
                _ => return Ok(acc),
            }
        }
    }

    fn factor(&mut self) -> Result<Poly> {
        let base = self.primary()?;
        if self.eat('^') {
            let braced = self.eat('{');
            let n = self.uint()?;
            if braced && !self.eat('}') {
                return Err(self.error("'}'"));
            }
            return Ok(base.pow(n));
        }
        Ok(base)
    }

    fn uint(&mut self) -> Result<u32> {
        self.skip_ws();
        let start = self.pos;
        while self.chars.get(self.pos).is_some_and(|c| c.is_ascii_digit()) {
            self.pos += 1;
        }
        let digits: String = self.chars[start..self.pos].iter().collect();
        digits.parse().map_err(|_| {
            self.pos = start;
            self.error("exponent")
        })
    }

    fn primary(&mut self) -> Result<Poly> {
        match self.peek() {
            Some('(') => {
                self.pos += 1;
                let e = self.expr()?;
                if !self.eat(')') {
                    return Err(self.error("')'"));
                }
                Ok(e)
            }
            Some('ξ') | Some('x') => {
                let c = self.chars[self.pos];
                self.pos += 1;
                if c == 'x' && self.chars.get(self.pos) == Some(&'i') {
                    self.pos += 1;
                }
                Ok(Poly::x())
            }
            Some('\\') => {
                let rest: String = self.chars[self.pos..].iter().take(3).collect();
                if rest == "\\xi" {
                    self.pos += 3;
                    Ok(Poly::x())
                } else {
                    Err(self.error("variable"))
                }
            }
            Some(c) if c.is_ascii_digit() => {
                let start = self.pos;
                while self
                    .chars
                    .get(self.pos)
                    .is_some_and(|c| c.is_ascii_digit() || *c == '/')
                {
                    self.pos += 1;
                }
                let text: String = self.chars[start..self.pos].iter().collect();
                parse_rational(&text).map(Poly::constant).map_err(|_| {
                    self.pos = start;
                    self.error("rational literal")
                })
            }
            _ => Err(self.error("number, variable or '('")),
        }
    }
}

/// Parses a polynomial, reporting errors as [`Error::Parse`].
pub fn parse_poly(text: &str) -> Result<Poly> {
    text.parse()
}
