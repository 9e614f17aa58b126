use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::fresco::AbModulePresentation;
use crate::poly::Poly;
use crate::rational::Rational;

/// Bounds for [`saturate_bernstein`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SaturationConfig {
    pub max_iter: usize,
    pub laurent_window: u32,
    pub precision: usize,
}

impl Default for SaturationConfig {
    fn default() -> Self {
        SaturationConfig { max_iter: 64, laurent_window: 16, precision: 32 }
    }
}

/// Characteristic and minimal polynomials of `−b^{-1}·a` on `F♯/b·F♯`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SaturationResult {
    pub char_poly: Poly,
    pub min_poly: Poly,
    /// Number of generation steps, including the one that confirmed stability.
    pub iterations: usize,
}

/// `Σ_{n ≥ start} c_n b^n`, known modulo `b^prec`.
#[derive(Clone, Debug)]
struct Laurent {
    start: i64,
    coeffs: Vec<Rational>,
    prec: i64,
}

impl Laurent {
    fn zero(prec: i64) -> Self {
        Laurent { start: prec, coeffs: Vec::new(), prec }
    }

    fn from_coeffs(start: i64, coeffs: Vec<Rational>, prec: i64) -> Self {
        let mut s = Laurent { start, coeffs, prec };
        s.normalize();
        s
    }

    fn monomial(c: Rational, n: i64, prec: i64) -> Self {
        Self::from_coeffs(n, vec![c], prec)
    }

    fn normalize(&mut self) {
        let keep = (self.prec - self.start).max(0) as usize;
        self.coeffs.truncate(keep);
        while self.coeffs.last().is_some_and(|c| c.is_zero()) {
            self.coeffs.pop();
        }
        let lead = self.coeffs.iter().position(|c| !c.is_zero());
        match lead {
            Some(i) => {
                self.coeffs.drain(..i);
                self.start += i as i64;
            }
            None => {
                self.coeffs.clear();
                self.start = self.prec;
            }
        }
    }

    fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Exponent of the first nonzero term, or `prec` when none is known.
    fn valuation(&self) -> i64 {
        self.start
    }

    fn coeff(&self, n: i64) -> Rational {
        if n < self.start {
            return Rational::zero();
        }
        self.coeffs
            .get((n - self.start) as usize)
            .cloned()
            .unwrap_or_else(Rational::zero)
    }

    fn add(&self, other: &Self) -> Self {
        let prec = self.prec.min(other.prec);
        let start = self.start.min(other.start).min(prec);
        let coeffs = (start..prec)
            .take_while(|&n| n < self.start + self.coeffs.len() as i64 || n < other.start + other.coeffs.len() as i64)
            .map(|n| self.coeff(n) + other.coeff(n))
            .collect();
        Self::from_coeffs(start, coeffs, prec)
    }

    fn neg(&self) -> Self {
        Laurent {
            start: self.start,
            coeffs: self.coeffs.iter().map(|c| -c).collect(),
            prec: self.prec,
        }
    }

    fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    fn mul(&self, other: &Self) -> Self {
        let prec = (self.prec + other.valuation()).min(other.prec + self.valuation());
        let start = self.start + other.start;
        let len = ((prec - start).max(0) as usize).min(self.coeffs.len() + other.coeffs.len());
        let mut coeffs = vec![Rational::zero(); len];
        for (i, x) in self.coeffs.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (j, y) in other.coeffs.iter().enumerate() {
                if i + j >= len {
                    break;
                }
                coeffs[i + j] += x * y;
            }
        }
        Self::from_coeffs(start, coeffs, prec)
    }

    fn shift(&self, n: i64) -> Self {
        Laurent { start: self.start + n, coeffs: self.coeffs.clone(), prec: self.prec + n }
    }

    /// `b²·d/db`.
    fn b2_derivative(&self) -> Self {
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .map(|(i, c)| c * Rational::from_integer(BigInt::from(self.start + i as i64)))
            .collect();
        Self::from_coeffs(self.start + 1, coeffs, self.prec + 1)
    }

    /// Inverse of a series with valuation exactly zero and nonzero constant term.
    fn unit_inverse(&self) -> Self {
        debug_assert_eq!(self.start, 0);
        let n = self.prec.max(0) as usize;
        let inv0 = self.coeffs[0].recip();
        let mut out: Vec<Rational> = Vec::with_capacity(n);
        out.push(inv0.clone());
        for k in 1..n {
            let mut acc = Rational::zero();
            for j in 1..=k.min(self.coeffs.len().saturating_sub(1)) {
                acc += &self.coeffs[j] * &out[k - j];
            }
            out.push(-acc * &inv0);
        }
        Self::from_coeffs(0, out, self.prec)
    }
}

type Column = Vec<Laurent>;

/// `b^{-1}·a` applied to a column vector of the lattice.
fn b_inv_a(m: &[Vec<Laurent>], g: &Column) -> Column {
    let r = g.len();
    (0..r)
        .map(|i| {
            let mut acc = g[i].b2_derivative();
            for (j, gj) in g.iter().enumerate() {
                acc = acc.add(&m[i][j].mul(gj));
            }
            acc.shift(-1)
        })
        .collect()
}

/// Lower-triangular basis `G` with `G[i][i] = b^{v_i}` of the lattice spanned
/// by `cols`, by valuation-pivot column reduction.
fn echelon(mut cols: Vec<Column>, rank: usize) -> Result<Vec<Column>> {
    let mut basis = Vec::with_capacity(rank);
    for row in 0..rank {
        let pivot = cols
            .iter()
            .enumerate()
            .filter(|(_, c)| !c[row].is_zero())
            .min_by_key(|(_, c)| c[row].valuation())
            .map(|(i, _)| i)
            .ok_or_else(|| {
                Error::PrecisionExhausted(format!(
                    "no generator has a certified nonzero entry in row {row}"
                ))
            })?;
        let mut p = cols.swap_remove(pivot);
        let v = p[row].valuation();
        let unit = p[row].shift(-v).unit_inverse();
        p = p.iter().map(|e| e.mul(&unit)).collect();
        p[row] = Laurent::monomial(Rational::one(), v, p[row].prec);
        for c in cols.iter_mut() {
            if c[row].is_zero() {
                continue;
            }
            let factor = c[row].shift(-v);
            *c = c.iter().zip(&p).map(|(x, y)| x.sub(&factor.mul(y))).collect();
        }
        cols.retain(|c| c[row + 1..].iter().any(|x| !x.is_zero()));
        basis.push(p);
    }
    Ok(basis)
}

fn index_of(basis: &[Column]) -> i64 {
    basis.iter().enumerate().map(|(i, c)| c[i].valuation()).sum()
}

fn check_window(cols: &[Column], window: u32) -> Result<()> {
    for c in cols {
        for e in c {
            if !e.is_zero() && e.valuation() < -(window as i64) {
                return Err(Error::LaurentWindowExceeded {
                    exponent: e.valuation(),
                    window,
                });
            }
        }
    }
    Ok(())
}

/// Bernstein data of a regular (a,b)-module through its saturation
/// `F♯ = Σ_j (b^{-1}a)^j·F`.
///
/// Starting from the lattice `F`, the images of the current basis under
/// `b^{-1}a` are adjoined and the lattice is brought back to triangular form
/// until its index stops growing. The matrix of `−b^{-1}a` on the final basis
/// is then reduced modulo `b`.
pub fn saturate_bernstein(
    m: &AbModulePresentation,
    config: &SaturationConfig,
) -> Result<SaturationResult> {
    let r = m.rank();
    let prec = config.precision.min(m.precision()) as i64;
    if prec == 0 {
        return Err(Error::InvalidInput("precision must be >= 1".into()));
    }
    let mat: Vec<Vec<Laurent>> = (0..r)
        .map(|i| {
            (0..r)
                .map(|j| Laurent::from_coeffs(0, m.entry(i, j).coeffs().to_vec(), prec))
                .collect()
        })
        .collect();
    let identity: Vec<Column> = (0..r)
        .map(|j| {
            (0..r)
                .map(|i| {
                    if i == j {
                        Laurent::monomial(Rational::one(), 0, prec)
                    } else {
                        Laurent::zero(prec)
                    }
                })
                .collect()
        })
        .collect();
    let mut basis = echelon(identity, r)?;
    let mut index = index_of(&basis);
    for iter in 1..=config.max_iter {
        let images: Vec<Column> = basis.iter().map(|g| b_inv_a(&mat, g)).collect();
        check_window(&images, config.laurent_window)?;
        let mut all = basis.clone();
        all.extend(images.iter().cloned());
        let next = echelon(all, r)?;
        let next_index = index_of(&next);
        if next_index == index {
            let action = action_mod_b(&basis, &images)?;
            let n: Vec<Vec<Rational>> = action
                .iter()
                .map(|row| row.iter().map(|c| -c).collect())
                .collect();
            return Ok(SaturationResult {
                char_poly: char_poly(&n),
                min_poly: min_poly(&n),
                iterations: iter,
            });
        }
        basis = next;
        index = next_index;
    }
    Err(Error::NotStabilized { max_iter: config.max_iter })
}

/// Constant terms of `C` with `images[j] = Σ_i basis[i]·C[i][j]`, by forward
/// substitution in the lower-triangular basis.
fn action_mod_b(basis: &[Column], images: &[Column]) -> Result<Vec<Vec<Rational>>> {
    let r = basis.len();
    let mut out = vec![vec![Rational::zero(); r]; r];
    for (j, h) in images.iter().enumerate() {
        let mut solved: Vec<Laurent> = Vec::with_capacity(r);
        for i in 0..r {
            let mut rest = h[i].clone();
            for (l, c) in solved.iter().enumerate() {
                rest = rest.sub(&basis[l][i].mul(c));
            }
            let v = basis[i][i].valuation();
            let c = rest.shift(-v);
            if c.prec <= 0 {
                return Err(Error::PrecisionExhausted(format!(
                    "action coefficient ({i}, {j}) not certified modulo b"
                )));
            }
            if c.valuation() < 0 {
                return Err(Error::InvalidInput(
                    "lattice is not stable under b^-1.a (module not regular)".into(),
                ));
            }
            out[i][j] = c.coeff(0);
            solved.push(c);
        }
    }
    Ok(out)
}

fn mat_mul(x: &[Vec<Rational>], y: &[Vec<Rational>]) -> Vec<Vec<Rational>> {
    let n = x.len();
    (0..n)
        .map(|i| {
            (0..n)
                .map(|j| (0..n).fold(Rational::zero(), |acc, l| acc + &x[i][l] * &y[l][j]))
                .collect()
        })
        .collect()
}

fn identity(n: usize) -> Vec<Vec<Rational>> {
    (0..n)
        .map(|i| (0..n).map(|j| if i == j { Rational::one() } else { Rational::zero() }).collect())
        .collect()
}

/// `det(x·I − N)` by the Faddeev–LeVerrier recursion.
pub fn char_poly(n: &[Vec<Rational>]) -> Poly {
    let size = n.len();
    let mut coeffs = vec![Rational::zero(); size + 1];
    coeffs[size] = Rational::one();
    let mut m = vec![vec![Rational::zero(); size]; size];
    for k in 1..=size {
        let mut next = mat_mul(n, &m);
        for (i, row) in next.iter_mut().enumerate() {
            row[i] += &coeffs[size - k + 1];
        }
        m = next;
        let nm = mat_mul(n, &m);
        let trace = (0..size).fold(Rational::zero(), |acc, i| acc + &nm[i][i]);
        coeffs[size - k] = -trace / Rational::from_integer(BigInt::from(k));
    }
    Poly::new(coeffs)
}

/// Monic polynomial of least degree annihilating `N`.
pub fn min_poly(n: &[Vec<Rational>]) -> Poly {
    let size = n.len();
    // Gaussian elimination on flattened powers I, N, N², …; each stored row
    // keeps its expression in terms of the powers.
    let mut rows: Vec<(Vec<Rational>, Vec<Rational>, usize)> = Vec::new();
    let mut power = identity(size);
    for d in 0..=size {
        let mut v: Vec<Rational> = power.iter().flatten().cloned().collect();
        let mut combo = vec![Rational::zero(); d + 1];
        combo[d] = Rational::one();
        for (row, rc, pivot) in &rows {
            let f = v[*pivot].clone();
            if f.is_zero() {
                continue;
            }
            for (x, y) in v.iter_mut().zip(row) {
                *x -= &f * y;
            }
            for (x, y) in combo.iter_mut().zip(rc) {
                *x -= &f * y;
            }
        }
        match v.iter().position(|x| !x.is_zero()) {
            None => return Poly::new(combo),
            Some(p) => {
                let inv = v[p].recip();
                let v: Vec<Rational> = v.iter().map(|x| x * &inv).collect();
                let combo: Vec<Rational> = combo.iter().map(|x| x * &inv).collect();
                rows.push((v, combo, p));
            }
        }
        power = mat_mul(&power, n);
    }
    unreachable!("Cayley-Hamilton bounds the degree by the size")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fresco::{a_matrix_from_presentation, FrescoPresentation};
    use crate::rational::{int, rat};
    use crate::TruncatedSeries;

    fn ints(v: &[i64]) -> Vec<Rational> {
        v.iter().map(|&x| int(x)).collect()
    }

    fn poly(s: &str) -> Poly {
        s.parse().unwrap()
    }

    #[test]
    fn rank_one() {
        let p = FrescoPresentation::with_trivial_series(vec![rat(3, 2)]).unwrap();
        let m = a_matrix_from_presentation(&p, 16).unwrap();
        let r = saturate_bernstein(&m, &SaturationConfig::default()).unwrap();
        assert_eq!(r.char_poly, poly("x + 3/2"));
        assert_eq!(r.min_poly, poly("x + 3/2"));
    }

    #[test]
    fn rank_two_trivial_and_nontrivial_series() {
        let p = FrescoPresentation::with_trivial_series(ints(&[2, 1])).unwrap();
        let m = a_matrix_from_presentation(&p, 32).unwrap();
        let r = saturate_bernstein(&m, &SaturationConfig::default()).unwrap();
        assert_eq!(r.char_poly, poly("(x+1)^2"));
        assert!(r.min_poly.divides(&r.char_poly));
        let q = FrescoPresentation::new(ints(&[2, 1]), vec![Poly::new(ints(&[1, 1]))]).unwrap();
        let mq = a_matrix_from_presentation(&q, 32).unwrap();
        let rq = saturate_bernstein(&mq, &SaturationConfig::default()).unwrap();
        assert_eq!(rq.char_poly, poly("(x+1)^2"));
    }

    #[test]
    fn max_iter_zero_never_stabilizes() {
        let p = FrescoPresentation::with_trivial_series(ints(&[2, 1])).unwrap();
        let m = a_matrix_from_presentation(&p, 32).unwrap();
        let cfg = SaturationConfig { max_iter: 0, ..Default::default() };
        assert_eq!(saturate_bernstein(&m, &cfg), Err(Error::NotStabilized { max_iter: 0 }));
    }

    #[test]
    fn window_is_enforced() {
        // a·e1 = e2, a·e2 = 0: saturation needs b^-1 e2, b^-2 ... only one step
        let z = TruncatedSeries::zero(8);
        let one = TruncatedSeries::one(8);
        let m = AbModulePresentation::new(vec![vec![z.clone(), z.clone()], vec![one, z]], 8).unwrap();
        let cfg = SaturationConfig { laurent_window: 0, ..Default::default() };
        assert!(matches!(
            saturate_bernstein(&m, &cfg),
            Err(Error::LaurentWindowExceeded { .. })
        ));
    }

    #[test]
    fn matrix_polynomials() {
        let n = vec![ints(&[2, 0]), ints(&[0, 2])];
        assert_eq!(char_poly(&n), poly("(x-2)^2"));
        assert_eq!(min_poly(&n), poly("x-2"));
        let j = vec![ints(&[2, 1]), ints(&[0, 2])];
        assert_eq!(min_poly(&j), poly("(x-2)^2"));
        let c = vec![ints(&[0, -1]), ints(&[1, 0])];
        assert_eq!(char_poly(&c), poly("x^2 + 1"));
    }
}
