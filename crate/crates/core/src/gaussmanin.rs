//! The one-step Gauss–Manin recurrence for `f = Σ c_i·m_i + λ·m`, where the
//! `n + 1` monomials `m_i` in `n + 1` variables have an invertible exponent
//! matrix and `m` is the distinguished monomial.
//!
//! For a monomial form `ω = x^β·dx` the weights `u⁽ⁱ⁾` express each `m_i`
//! through the Euler-type fields `x_j∂_j f`, which yields
//! `(a − σ(k)·b)[m^k ω] = c·[m^{k+1} ω]` with `σ` affine in `k`. Once
//! `m^N` is a product of the other monomials the chain closes, and the
//! product of the `N` factors is the initial form of a candidate annihilator.
//! Its Bernstein polynomial bounds the true one in the divisibility order.

use std::fmt::Write as _;

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::fresco::{bernstein_element, element_to_bpoly, roots_from_factors, BernsteinPoly, HomogeneousElement};
use crate::rational::{lcm_of_denominators, Rational};

/// Default largest closure degree `N` searched.
pub const DEFAULT_CLOSURE_BOUND: u32 = 256;

/// Warning attached to divisors with a root `≥ 0`.
pub const NON_NEGATIVE_ROOT: &str = "NonNegativeRoot";

/// Exponent data of `f` and of the form `x^β·dx`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "InputJson", into = "InputJson")]
pub struct MonomialInput {
    monomials: Vec<Vec<u32>>,
    coefficients: Vec<Rational>,
    distinguished: Vec<u32>,
    form: Vec<u32>,
}

#[derive(Serialize, Deserialize)]
struct InputJson {
    monomials: Vec<Vec<u32>>,
    #[serde(default, with = "opt_rats", skip_serializing_if = "Option::is_none")]
    coefficients: Option<Vec<Rational>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    distinguished: Option<Vec<u32>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    form: Option<Vec<u32>>,
}

mod opt_rats {
    use crate::rational::{RatList, Rational};
    use serde::{Deserialize, Deserializer, Serialize, Serializer};

    pub fn serialize<S: Serializer>(v: &Option<Vec<Rational>>, s: S) -> Result<S::Ok, S::Error> {
        v.clone().map(RatList).serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Option<Vec<Rational>>, D::Error> {
        Ok(Option::<RatList>::deserialize(d)?.map(|l| l.0))
    }
}

impl TryFrom<InputJson> for MonomialInput {
    type Error = Error;

    fn try_from(j: InputJson) -> Result<Self> {
        Self::new(j.monomials, j.coefficients, j.distinguished, j.form)
    }
}

impl From<MonomialInput> for InputJson {
    fn from(m: MonomialInput) -> Self {
        InputJson {
            monomials: m.monomials,
            coefficients: Some(m.coefficients),
            distinguished: Some(m.distinguished),
            form: Some(m.form),
        }
    }
}

impl MonomialInput {
    /// Missing coefficients default to one, a missing distinguished monomial
    /// to `x₁⋯x_{n+1}` and a missing form exponent to zero.
    pub fn new(
        monomials: Vec<Vec<u32>>,
        coefficients: Option<Vec<Rational>>,
        distinguished: Option<Vec<u32>>,
        form: Option<Vec<u32>>,
    ) -> Result<Self> {
        let n = monomials.len();
        if n == 0 {
            return Err(Error::InvalidInput("at least one monomial is required".into()));
        }
        if monomials.iter().any(|row| row.len() != n) {
            return Err(Error::InvalidInput(format!(
                "exponent matrix must be {n}x{n} (one variable per monomial)"
            )));
        }
        let coefficients = coefficients.unwrap_or_else(|| vec![Rational::one(); n]);
        let distinguished = distinguished.unwrap_or_else(|| vec![1; n]);
        let form = form.unwrap_or_else(|| vec![0; n]);
        if coefficients.len() != n || distinguished.len() != n || form.len() != n {
            return Err(Error::InvalidInput(format!(
                "coefficients, distinguished and form must all have length {n}"
            )));
        }
        if distinguished.contains(&0) {
            return Err(Error::InvalidInput(
                "the distinguished monomial must involve every variable".into(),
            ));
        }
        Ok(MonomialInput { monomials, coefficients, distinguished, form })
    }

    /// Number of variables, `n + 1`.
    pub fn num_vars(&self) -> usize {
        self.monomials.len()
    }

    pub fn monomials(&self) -> &[Vec<u32>] {
        &self.monomials
    }

    pub fn coefficients(&self) -> &[Rational] {
        &self.coefficients
    }

    pub fn distinguished(&self) -> &[u32] {
        &self.distinguished
    }

    pub fn form(&self) -> &[u32] {
        &self.form
    }
}

/// Solution of the square system `m·x = rhs`, or `None` when `m` is singular.
fn solve(m: &[Vec<Rational>], rhs: &[Rational]) -> Option<Vec<Rational>> {
    let n = m.len();
    let mut aug: Vec<Vec<Rational>> = m
        .iter()
        .zip(rhs)
        .map(|(row, r)| {
            let mut v = row.clone();
            v.push(r.clone());
            v
        })
        .collect();
    for col in 0..n {
        let piv = (col..n).find(|&r| !aug[r][col].is_zero())?;
        aug.swap(col, piv);
        let inv = aug[col][col].recip();
        for x in aug[col].iter_mut() {
            *x *= &inv;
        }
        for r in 0..n {
            if r != col && !aug[r][col].is_zero() {
                let f = aug[r][col].clone();
                let pivot_row = aug[col].clone();
                for (x, y) in aug[r].iter_mut().zip(&pivot_row) {
                    *x -= &f * y;
                }
            }
        }
    }
    Some(aug.into_iter().map(|mut row| row.pop().expect("augmented")).collect())
}

fn rat_u(e: u32) -> Rational {
    Rational::from_integer(BigInt::from(e))
}

/// The weight vector `u⁽ⁱ⁾` with `Σ_j u_j·c_{i′}·A_{i′j} = δ_{i i′}` (`i` 0-based).
pub fn solve_weights(input: &MonomialInput, i: usize) -> Result<Vec<Rational>> {
    let n = input.num_vars();
    if i >= n {
        return Err(Error::InvalidInput(format!("monomial index {} out of range", i + 1)));
    }
    let k: Vec<Vec<Rational>> = input
        .monomials
        .iter()
        .zip(&input.coefficients)
        .map(|(row, c)| row.iter().map(|&e| c * rat_u(e)).collect())
        .collect();
    let rhs: Vec<Rational> = (0..n).map(|r| if r == i { Rational::one() } else { Rational::zero() }).collect();
    solve(&k, &rhs).ok_or(Error::DegenerateExponents)
}

/// `α = u·μ`.
fn alpha_of(u: &[Rational], mu: &[u32]) -> Rational {
    u.iter().zip(mu).map(|(x, &m)| x * rat_u(m)).sum()
}

/// The affine map `k ↦ slope·k + intercept`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Affine {
    pub slope: Rational,
    pub intercept: Rational,
}

impl Affine {
    pub fn eval(&self, k: u32) -> Rational {
        &self.slope * rat_u(k) + &self.intercept
    }
}

impl std::fmt::Display for Affine {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if self.slope == self.intercept {
            return write!(f, "({})*(k+1)", self.slope);
        }
        if self.slope.is_zero() {
            return write!(f, "{}", self.intercept);
        }
        write!(f, "({})*k", self.slope)?;
        if self.intercept.is_negative() {
            write!(f, " - {}", -&self.intercept)
        } else if !self.intercept.is_zero() {
            write!(f, " + {}", self.intercept)
        } else {
            Ok(())
        }
    }
}

/// `σ` and the right-hand constant of the one-step recurrence.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Recurrence {
    pub weights: Vec<Vec<Rational>>,
    pub alpha: Vec<Rational>,
    pub sigma: Affine,
    pub rhs: Rational,
}

pub fn recurrence(input: &MonomialInput) -> Result<Recurrence> {
    let n = input.num_vars();
    let weights = (0..n)
        .map(|i| solve_weights(input, i))
        .collect::<Result<Vec<_>>>()?;
    let alpha: Vec<Rational> = weights.iter().map(|u| alpha_of(u, &input.distinguished)).collect();
    let mut slope = Rational::zero();
    let mut intercept = Rational::zero();
    for (u, c) in weights.iter().zip(&input.coefficients) {
        for (j, uj) in u.iter().enumerate() {
            slope += c * uj * rat_u(input.distinguished[j]);
            intercept += c * uj * rat_u(input.form[j] + 1);
        }
    }
    let rhs = Rational::one()
        - alpha
            .iter()
            .zip(&input.coefficients)
            .map(|(a, c)| a * c)
            .sum::<Rational>();
    if rhs.is_zero() {
        return Err(Error::DegenerateRecurrence);
    }
    Ok(Recurrence { weights, alpha, sigma: Affine { slope, intercept }, rhs })
}

/// Least `N ≥ 1` and nonnegative integers `p` with `Σ p_i·A_i = N·μ`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Closure {
    pub degree: u32,
    pub exponents: Vec<u64>,
}

pub fn closure_degree(input: &MonomialInput) -> Result<Closure> {
    closure_degree_bounded(input, DEFAULT_CLOSURE_BOUND)
}

/// [`closure_degree`] with an explicit bound on `N`.
///
/// When the exponent matrix is invertible the solution direction is unique
/// and `N` is the least common denominator of the rational solution;
/// otherwise every `N` up to the bound is tried by enumeration.
pub fn closure_degree_bounded(input: &MonomialInput, bound: u32) -> Result<Closure> {
    let n = input.num_vars();
    let transposed: Vec<Vec<Rational>> = (0..n)
        .map(|j| (0..n).map(|i| rat_u(input.monomials[i][j])).collect())
        .collect();
    let mu: Vec<Rational> = input.distinguished.iter().map(|&m| rat_u(m)).collect();
    match solve(&transposed, &mu) {
        Some(p) => {
            if p.iter().any(|x| x.is_negative()) {
                return Err(Error::NoClosure { bound });
            }
            let l = lcm_of_denominators(&p);
            match l.to_u32() {
                Some(d) if d <= bound => Ok(Closure {
                    degree: d,
                    exponents: p
                        .iter()
                        .map(|x| (x * Rational::from_integer(l.clone())).to_integer().to_u64().expect("nonnegative"))
                        .collect(),
                }),
                _ => Err(Error::NoClosure { bound }),
            }
        }
        None => (1..=bound)
            .find_map(|d| enumerate_closure(input, d).map(|exponents| Closure { degree: d, exponents }))
            .ok_or(Error::NoClosure { bound }),
    }
}

/// Some nonnegative `p` with `Σ p_i·A_i = N·μ` for this exact `N`, by
/// depth-first search.
pub fn enumerate_closure(input: &MonomialInput, n: u32) -> Option<Vec<u64>> {
    let target: Vec<u64> = input.distinguished.iter().map(|&m| m as u64 * n as u64).collect();
    let mut p = vec![0u64; input.num_vars()];
    if search(&input.monomials, 0, &target, &mut p) {
        Some(p)
    } else {
        None
    }
}

fn search(rows: &[Vec<u32>], i: usize, remaining: &[u64], p: &mut [u64]) -> bool {
    if i == rows.len() {
        return remaining.iter().all(|&r| r == 0);
    }
    let row = &rows[i];
    let cap = row
        .iter()
        .zip(remaining)
        .filter(|(&a, _)| a > 0)
        .map(|(&a, &r)| r / a as u64)
        .min();
    let Some(cap) = cap else {
        p[i] = 0;
        return search(rows, i + 1, remaining, p);
    };
    for t in 0..=cap {
        let next: Vec<u64> = remaining
            .iter()
            .zip(row)
            .map(|(&r, &a)| r - t * a as u64)
            .collect();
        p[i] = t;
        if search(rows, i + 1, &next, p) {
            return true;
        }
    }
    p[i] = 0;
    false
}

/// `σ(N−1), σ(N−2), …, σ(0)`: the λ-sequence of the annihilator product.
fn product_lambdas(sigma: &Affine, n: u32) -> Vec<Rational> {
    (0..n).rev().map(|k| sigma.eval(k)).collect()
}

/// `∏_{k = N−1 down to 0} (a − σ(k)·b)`, multiplied left to right.
pub fn annihilator_product(input: &MonomialInput) -> Result<HomogeneousElement> {
    let rec = recurrence(input)?;
    let closure = closure_degree(input)?;
    Ok(bernstein_element(&product_lambdas(&rec.sigma, closure.degree)))
}

/// Everything the pipeline derives for one input.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RecurrenceResult {
    pub weights: Vec<Vec<Rational>>,
    pub alpha: Vec<Rational>,
    pub sigma: Affine,
    pub rhs: Rational,
    pub closure_degree: u32,
    pub closure_exponents: Vec<u64>,
    /// `σ(N−1), …, σ(0)`, the factors of the product from the left.
    pub lambdas: Vec<Rational>,
    pub product: HomogeneousElement,
    pub divisor: BernsteinPoly,
    pub warnings: Vec<String>,
}

/// The candidate divisor alone, with its warnings.
pub fn bernstein_divisor(input: &MonomialInput) -> Result<(BernsteinPoly, Vec<String>)> {
    let r = run(input)?;
    Ok((r.divisor, r.warnings))
}

/// Runs weights, recurrence, closure, product and divisor.
pub fn run(input: &MonomialInput) -> Result<RecurrenceResult> {
    run_bounded(input, DEFAULT_CLOSURE_BOUND)
}

pub fn run_bounded(input: &MonomialInput, closure_bound: u32) -> Result<RecurrenceResult> {
    let rec = recurrence(input)?;
    let closure = closure_degree_bounded(input, closure_bound)?;
    let lambdas = product_lambdas(&rec.sigma, closure.degree);
    let product = bernstein_element(&lambdas);
    let divisor = element_to_bpoly(&product)?;
    let mut warnings = Vec::new();
    if roots_from_factors(&lambdas).iter().any(|r| !r.is_negative()) {
        warnings.push(NON_NEGATIVE_ROOT.to_string());
    }
    Ok(RecurrenceResult {
        weights: rec.weights,
        alpha: rec.alpha,
        sigma: rec.sigma,
        rhs: rec.rhs,
        closure_degree: closure.degree,
        closure_exponents: closure.exponents,
        lambdas,
        product,
        divisor,
        warnings,
    })
}

fn strs(v: &[Rational]) -> Vec<String> {
    v.iter().map(|r| r.to_string()).collect()
}

fn joined(v: &[Rational]) -> String {
    strs(v).join(", ")
}

fn monomial_text(exps: &[u32], vars: &[String]) -> String {
    let parts: Vec<String> = exps
        .iter()
        .zip(vars)
        .filter(|(&e, _)| e > 0)
        .map(|(&e, v)| if e == 1 { v.clone() } else { format!("{v}^{e}") })
        .collect();
    if parts.is_empty() {
        "1".into()
    } else {
        parts.join("*")
    }
}

fn variable_names(n: usize) -> Vec<String> {
    const NAMES: [&str; 4] = ["x", "y", "z", "t"];
    if n <= NAMES.len() {
        NAMES[..n].iter().map(|s| s.to_string()).collect()
    } else {
        (1..=n).map(|i| format!("x{i}")).collect()
    }
}

impl RecurrenceResult {
    /// Machine-readable form; every rational is a string.
    pub fn to_json(&self) -> Value {
        json!({
            "weights": self.weights.iter().map(|u| strs(u)).collect::<Vec<_>>(),
            "alpha": strs(&self.alpha),
            "sigma": {
                "slope": self.sigma.slope.to_string(),
                "intercept": self.sigma.intercept.to_string(),
            },
            "rhs": self.rhs.to_string(),
            "closure_degree": self.closure_degree,
            "closure_exponents": self.closure_exponents,
            "lambdas": strs(&self.lambdas),
            "product": self.product.to_string(),
            "divisor": self.divisor.render("x"),
            "warnings": self.warnings,
        })
    }

    /// Human-readable derivation, one step per line.
    pub fn report(&self, input: &MonomialInput) -> String {
        let vars = variable_names(input.num_vars());
        let mut out = String::new();
        let terms: Vec<String> = input
            .monomials
            .iter()
            .zip(&input.coefficients)
            .map(|(m, c)| {
                let mono = monomial_text(m, &vars);
                if c.is_one() {
                    mono
                } else {
                    format!("{c}*{mono}")
                }
            })
            .collect();
        let m = monomial_text(&input.distinguished, &vars);
        let _ = writeln!(out, "f = {} + lambda*{m}", terms.join(" + "));
        let _ = writeln!(out, "m = lambda*{m}");
        let form = monomial_text(&input.form, &vars);
        let prefix = if form == "1" { String::new() } else { format!("{form}*") };
        let _ = writeln!(out, "omega = {prefix}d{}", vars.join("∧d"));
        for (i, (u, a)) in self.weights.iter().zip(&self.alpha).enumerate() {
            let _ = writeln!(out, "u{} = ({}), alpha{} = {a}", i + 1, joined(u), i + 1);
        }
        let _ = writeln!(out, "alpha = ({})", joined(&self.alpha));
        let _ = writeln!(out, "sigma(k) = {}", self.sigma);
        let _ = writeln!(out, "(a - {}*b)[m^k] = ({})*m^(k+1)", self.sigma, self.rhs);
        let p: Vec<String> = self.closure_exponents.iter().map(|e| e.to_string()).collect();
        let _ = writeln!(out, "N = {}, p = ({})", self.closure_degree, p.join(", "));
        let factors: Vec<String> = self
            .lambdas
            .iter()
            .map(|l| format!("(a - {l}*b)"))
            .collect();
        let _ = writeln!(out, "annihilator initial form = {}", factors.join("*"));
        let _ = writeln!(out, "candidate divisor B(ξ) <= {}", self.divisor.render("ξ"));
        if self.warnings.is_empty() {
            let _ = writeln!(out, "warnings: none");
        } else {
            let _ = writeln!(out, "warnings: {}", self.warnings.join(", "));
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{int, rat};

    fn quartic() -> MonomialInput {
        MonomialInput::new(
            vec![vec![1, 2, 0, 0], vec![2, 1, 0, 0], vec![0, 0, 1, 3], vec![0, 0, 3, 1]],
            None,
            None,
            None,
        )
        .unwrap()
    }

    fn klein() -> MonomialInput {
        MonomialInput::new(vec![vec![1, 3, 0], vec![0, 1, 3], vec![3, 0, 1]], None, None, None).unwrap()
    }

    fn squares(form: Vec<u32>) -> MonomialInput {
        MonomialInput::new(
            vec![vec![2, 0, 0], vec![0, 2, 0], vec![0, 0, 2]],
            None,
            None,
            Some(form),
        )
        .unwrap()
    }

    #[test]
    fn weights() {
        let u = solve_weights(&quartic(), 0).unwrap();
        assert_eq!(u, vec![rat(-1, 3), rat(2, 3), int(0), int(0)]);
        let u3 = solve_weights(&quartic(), 2).unwrap();
        assert_eq!(alpha_of(&u3, &[1, 1, 1, 1]), rat(1, 4));
        let k = solve_weights(&klein(), 0).unwrap();
        assert_eq!(k, vec![rat(1, 28), rat(9, 28), rat(-3, 28)]);
        assert_eq!(alpha_of(&k, &[1, 1, 1]), rat(1, 4));
    }

    #[test]
    fn recurrences() {
        let r = recurrence(&quartic()).unwrap();
        assert_eq!(r.sigma, Affine { slope: rat(7, 6), intercept: rat(7, 6) });
        assert_eq!(r.rhs, rat(-1, 6));
        let s = recurrence(&squares(vec![0, 0, 0])).unwrap();
        assert_eq!(s.sigma, Affine { slope: rat(3, 2), intercept: rat(3, 2) });
        assert_eq!(s.rhs, rat(-1, 2));
        let t = recurrence(&squares(vec![1, 0, 0])).unwrap();
        assert_eq!(t.sigma, Affine { slope: rat(3, 2), intercept: int(2) });
        assert_eq!(t.sigma.to_string(), "(3/2)*k + 2");
    }

    #[test]
    fn closures() {
        let c = closure_degree(&quartic()).unwrap();
        assert_eq!((c.degree, c.exponents), (12, vec![4, 4, 3, 3]));
        let k = closure_degree(&klein()).unwrap();
        assert_eq!((k.degree, k.exponents), (4, vec![1, 1, 1]));
        let s = closure_degree(&squares(vec![0, 0, 0])).unwrap();
        assert_eq!((s.degree, s.exponents), (2, vec![1, 1, 1]));
        assert_eq!(closure_degree_bounded(&quartic(), 11), Err(Error::NoClosure { bound: 11 }));
    }

    #[test]
    fn products_and_divisors() {
        let p = annihilator_product(&squares(vec![1, 0, 0])).unwrap();
        let want = bernstein_element(&[rat(7, 2), int(2)]);
        assert_eq!(p, want);
        let r = run(&squares(vec![1, 0, 0])).unwrap();
        assert_eq!(r.divisor, "(x + 5/2)(x + 2)".parse().unwrap());
        assert!(r.warnings.is_empty());
        let k = run(&klein()).unwrap();
        assert_eq!(k.divisor, "x(x + 1/4)(x + 1/2)(x + 3/4)".parse().unwrap());
        assert_eq!(k.warnings, vec![NON_NEGATIVE_ROOT.to_string()]);
    }

    #[test]
    fn quartic_report() {
        let r = run(&quartic()).unwrap();
        let roots: Vec<Rational> = (0..12).map(|k| rat(-(k + 7), 6)).collect();
        assert_eq!(r.divisor, BernsteinPoly::from_roots(&roots));
        let text = r.report(&quartic());
        assert!(text.contains("N = 12, p = (4, 4, 3, 3)"), "{text}");
        assert!(text.contains("(a - (7/6)*(k+1)*b)[m^k] = (-1/6)*m^(k+1)"), "{text}");
        assert!(text.contains("alpha = (1/3, 1/3, 1/4, 1/4)"), "{text}");
        assert!(text.contains("(ξ + 7/6)*(ξ + 4/3)"), "{text}");
    }

    #[test]
    fn input_json() {
        let text = r#"{"monomials": [[1,2,0,0],[2,1,0,0],[0,0,1,3],[0,0,3,1]], "coefficients": ["1","1","1","1"], "distinguished": [1,1,1,1], "form": [0,0,0,0]}"#;
        let m: MonomialInput = serde_json::from_str(text).unwrap();
        assert_eq!(m, quartic());
        assert!(serde_json::from_str::<MonomialInput>(r#"{"monomials": [[1,2],[2]]}"#).is_err());
    }

    #[test]
    fn degenerate_inputs() {
        let singular = MonomialInput::new(vec![vec![1, 1], vec![1, 1]], None, None, None).unwrap();
        assert_eq!(solve_weights(&singular, 0), Err(Error::DegenerateExponents));
        // enumeration fallback for a singular exponent matrix
        assert_eq!(closure_degree(&singular).unwrap().degree, 1);
        // sum of c_i alpha_i = 1 makes the chain stall
        let stall = MonomialInput::new(vec![vec![1]], Some(vec![rat(1, 2)]), None, None).unwrap();
        assert_eq!(recurrence(&stall), Err(Error::DegenerateRecurrence));
    }
}
