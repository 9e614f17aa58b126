//! Ledgers of pole locations and orders for families of meromorphic
//! functions `Φ_h(λ)` indexed by a twist `h ∈ Z`, viewed in the quotient
//! that forgets poles of order below `q` along the class `ξ + Z`.
//!
//! Only locations and orders are tracked. An entry is either exact or an
//! upper bound; sums of classes can only produce bounds, except at the
//! maximal location of the class where no cancellation is possible.

use std::collections::BTreeMap;
use std::fmt;

use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fresco::{roots_from_factors, FrescoPresentation};
use crate::ncalg::TruncatedSeries;
use crate::rational::{congruent_mod_one, int, Rational};

/// Parameters shared by every ledger of a family.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QuotientParams {
    /// Largest admissible pole order, `n + 1`.
    pub cap: u32,
    /// A representative of `ξ` modulo `Z`.
    pub xi_class: Rational,
    /// Orders below `q` along `ξ + Z` are invisible in the quotient.
    pub q: u32,
}

impl QuotientParams {
    pub fn new(cap: u32, xi_class: Rational, q: u32) -> Result<Self> {
        if q == 0 {
            return Err(Error::InvalidInput("q must be positive".into()));
        }
        Ok(QuotientParams { cap, xi_class, q })
    }

    pub fn in_class(&self, loc: &Rational) -> bool {
        congruent_mod_one(loc, &self.xi_class)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct PoleEntry {
    pub order: u32,
    /// False when `order` is only an upper bound.
    pub exact: bool,
}

/// Poles of one function, all at negative rational locations.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PoleLedger {
    params: QuotientParams,
    entries: BTreeMap<Rational, PoleEntry>,
}

impl PoleLedger {
    pub fn new(params: QuotientParams) -> Self {
        PoleLedger { params, entries: BTreeMap::new() }
    }

    pub fn params(&self) -> &QuotientParams {
        &self.params
    }

    /// Adds or replaces the entry at `loc`.
    pub fn insert(&mut self, loc: Rational, order: u32, exact: bool) -> Result<()> {
        if !loc.is_negative() {
            return Err(Error::InvalidInput(format!("pole location {loc} is not negative")));
        }
        if order == 0 || order > self.params.cap {
            return Err(Error::InvalidInput(format!(
                "pole order {order} outside 1..={}",
                self.params.cap
            )));
        }
        self.entries.insert(loc, PoleEntry { order, exact });
        Ok(())
    }

    pub fn with(mut self, loc: Rational, order: u32, exact: bool) -> Result<Self> {
        self.insert(loc, order, exact)?;
        Ok(self)
    }

    pub fn entries(&self) -> impl DoubleEndedIterator<Item = (&Rational, &PoleEntry)> {
        self.entries.iter()
    }

    pub fn entry(&self, loc: &Rational) -> Option<&PoleEntry> {
        self.entries.get(loc)
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Order seen in the quotient: along `ξ + Z` orders below `q` read as 0.
    pub fn order_at(&self, loc: &Rational) -> u32 {
        match self.entries.get(loc) {
            Some(e) if self.params.in_class(loc) && e.order < self.params.q => 0,
            Some(e) => e.order,
            None => 0,
        }
    }

    /// `F(λ) ↦ F(λ + 1)`: every location moves by −1.
    pub fn shift(&self) -> Self {
        self.shift_by(1)
    }

    fn shift_by(&self, n: i64) -> Self {
        let d = int(n);
        PoleLedger {
            params: self.params.clone(),
            entries: self.entries.iter().map(|(l, e)| (l - &d, *e)).collect(),
        }
    }

    /// Multiplication by `λ + λ₀`: the order at `−λ₀` drops by one.
    fn times_linear(&self, lambda0: &Rational) -> Self {
        let mut out = self.clone();
        let loc = -lambda0.clone();
        if let Some(e) = out.entries.get_mut(&loc) {
            if e.order == 1 {
                out.entries.remove(&loc);
            } else {
                e.order -= 1;
            }
        }
        out
    }
}

/// A generator of `A` acting on the family.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Generator {
    A,
    B,
    /// `a − λ₀·b`.
    Linear(Rational),
}

/// Ledgers `Φ_h` for the twists `h` in a finite window.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LedgerFamily {
    params: QuotientParams,
    window: BTreeMap<i64, PoleLedger>,
}

/// The largest class-`ξ` location carrying a visible pole.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MaximalPole {
    pub location: Rational,
    pub order: u32,
    pub h: i64,
}

impl LedgerFamily {
    pub fn new(params: QuotientParams) -> Self {
        LedgerFamily { params, window: BTreeMap::new() }
    }

    pub fn params(&self) -> &QuotientParams {
        &self.params
    }

    /// Sets `Φ_h`; the ledger must share the family's parameters.
    pub fn set(&mut self, h: i64, ledger: PoleLedger) -> Result<()> {
        if ledger.params != self.params {
            return Err(Error::InvalidInput("ledger parameters differ from the family's".into()));
        }
        self.window.insert(h, ledger);
        Ok(())
    }

    pub fn with(mut self, h: i64, ledger: PoleLedger) -> Result<Self> {
        self.set(h, ledger)?;
        Ok(self)
    }

    /// `Φ_h`, empty outside the window.
    pub fn get(&self, h: i64) -> PoleLedger {
        self.window
            .get(&h)
            .cloned()
            .unwrap_or_else(|| PoleLedger::new(self.params.clone()))
    }

    pub fn window(&self) -> impl Iterator<Item = (i64, &PoleLedger)> {
        self.window.iter().map(|(&h, l)| (h, l))
    }

    fn map_to_next(&self, f: impl Fn(&PoleLedger) -> PoleLedger) -> Self {
        LedgerFamily {
            params: self.params.clone(),
            window: self.window.iter().map(|(&h, l)| (h + 1, f(l))).collect(),
        }
    }
}

/// `Φ′_h` built from `Φ_{h−1}` for the action of one generator.
///
/// `b` is a pure shift; `a` multiplies by `λ` before shifting, which keeps
/// every order because all locations are negative; `a − λ₀b` multiplies by
/// `λ + λ₀`, lowering the order at `−λ₀`, then shifts.
pub fn apply_generator(family: &LedgerFamily, g: &Generator) -> LedgerFamily {
    match g {
        Generator::A | Generator::B => family.map_to_next(PoleLedger::shift),
        Generator::Linear(l0) => family.map_to_next(|l| l.times_linear(l0).shift()),
    }
}

/// Order, exactness, and whether it came from the identity term.
type Contribution = (u32, bool, bool);

/// The action of a unit series `S(b) = Σ s_ν b^ν` with `s_0 = 1`:
/// `Φ′_h = Σ_ν s_ν·Sh^ν(Φ_{h−ν})`, merged by maximum order.
///
/// Only an entry at the maximal class location that comes from the `ν = 0`
/// term and strictly dominates every other contribution stays exact.
pub fn apply_series(family: &LedgerFamily, s: &TruncatedSeries) -> Result<LedgerFamily> {
    if !s.coeff(0).is_one() {
        return Err(Error::InvalidInput("series must have constant term 1".into()));
    }
    if s.coeffs().len() == 1 {
        return Ok(family.clone());
    }
    let maximal = maximal_pole(family).map(|m| m.location);
    let mut contrib: BTreeMap<(i64, Rational), Vec<Contribution>> = BTreeMap::new();
    for (&h, ledger) in &family.window {
        for (nu, c) in s.coeffs().iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let shifted = ledger.shift_by(nu as i64);
            for (loc, e) in shifted.entries {
                contrib
                    .entry((h + nu as i64, loc))
                    .or_default()
                    .push((e.order, e.exact, nu == 0));
            }
        }
    }
    let mut out = LedgerFamily::new(family.params.clone());
    for &h in family.window.keys() {
        out.window.insert(h, PoleLedger::new(family.params.clone()));
    }
    for ((h, loc), list) in contrib {
        let order = list.iter().map(|c| c.0).max().expect("nonempty");
        let at_max = maximal.as_ref() == Some(&loc);
        let top: Vec<_> = list.iter().filter(|c| c.0 == order).collect();
        let exact = at_max && top.len() == 1 && top[0].1 && top[0].2;
        out.window
            .entry(h)
            .or_insert_with(|| PoleLedger::new(family.params.clone()))
            .entries
            .insert(loc, PoleEntry { order, exact });
    }
    Ok(out)
}

/// The largest location in `ξ + Z` with order `≥ q` over the whole window,
/// the largest order there, and the first twist attaining it.
pub fn maximal_pole(family: &LedgerFamily) -> Option<MaximalPole> {
    let p = &family.params;
    let mut best: Option<MaximalPole> = None;
    for (&h, ledger) in &family.window {
        for (loc, e) in &ledger.entries {
            if !p.in_class(loc) || e.order < p.q {
                continue;
            }
            let better = match &best {
                None => true,
                Some(b) => loc > &b.location || (loc == &b.location && e.order > b.order),
            };
            if better {
                best = Some(MaximalPole { location: loc.clone(), order: e.order, h });
            }
        }
    }
    best
}

/// Result of replaying `Π` on a family.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Fond3Check {
    pub holds: bool,
    /// Factor indices `j` (from 1, left to right) with `−(λ_j + j − k) = ξ₀`.
    pub witnesses: Vec<usize>,
    pub maximal: MaximalPole,
}

/// Replays `Π = (a − λ₁b)·S₁^{-1}…(a − λ_k b)` on the family, rightmost
/// factor first, and counts the factors whose root equals the maximal pole.
///
/// `Π` annihilates the class, so after the replay no exact pole of order
/// `≥ q` may survive along `ξ + Z`; if one does the ledger contradicts the
/// presentation.
pub fn check_fond3(
    family: &LedgerFamily,
    presentation: &FrescoPresentation,
    d: u32,
) -> Result<Fond3Check> {
    let maximal = maximal_pole(family).ok_or_else(|| {
        Error::InvalidInput("the family has no pole of order >= q in the class".into())
    })?;
    let lambdas = presentation.lambdas();
    let k = lambdas.len();
    let mut current = family.clone();
    for j in (0..k).rev() {
        current = apply_generator(&current, &Generator::Linear(lambdas[j].clone()));
        if j > 0 {
            let s = presentation.series()[j - 1].coeffs().to_vec();
            let inv = TruncatedSeries::new(s, k + 2)?.inverse()?;
            current = apply_series(&current, &inv)?;
        }
    }
    let p = &current.params;
    for (h, ledger) in current.window() {
        if let Some((loc, e)) = ledger
            .entries()
            .find(|(loc, e)| p.in_class(loc) && e.exact && e.order >= p.q)
        {
            return Err(Error::InconsistentLedger(format!(
                "an exact pole of order {} survives at {loc} for h = {h}",
                e.order
            )));
        }
    }
    let witnesses: Vec<usize> = roots_from_factors(lambdas)
        .iter()
        .enumerate()
        .filter(|(_, r)| **r == maximal.location)
        .map(|(j, _)| j + 1)
        .collect();
    Ok(Fond3Check { holds: witnesses.len() >= d as usize, witnesses, maximal })
}

impl fmt::Display for PoleLedger {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.entries.is_empty() {
            return write!(f, "{{}}");
        }
        let parts: Vec<String> = self
            .entries
            .iter()
            .rev()
            .map(|(l, e)| {
                if e.exact {
                    format!("{l}: {}", e.order)
                } else {
                    format!("{l}: <={}", e.order)
                }
            })
            .collect();
        write!(f, "{{{}}}", parts.join(", "))
    }
}

impl fmt::Display for LedgerFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let lines: Vec<String> = self.window.iter().map(|(h, l)| format!("h={h}: {l}")).collect();
        write!(f, "{}", lines.join("\n"))
    }
}

#[derive(Serialize, Deserialize)]
struct EntryJson {
    #[serde(with = "crate::rational::serde_str")]
    loc: Rational,
    ord: u32,
    #[serde(default = "default_exact")]
    exact: bool,
}

fn default_exact() -> bool {
    true
}

#[derive(Deserialize)]
struct FamilyJson {
    q: u32,
    cap: u32,
    #[serde(with = "crate::rational::serde_str")]
    xi_class: Rational,
    family: BTreeMap<String, Vec<EntryJson>>,
}

impl Serialize for LedgerFamily {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        // twists in numeric order; string keys would sort "10" before "2"
        use serde::ser::SerializeMap;
        struct Window<'a>(&'a BTreeMap<i64, PoleLedger>);
        impl Serialize for Window<'_> {
            fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
                let mut m = s.serialize_map(Some(self.0.len()))?;
                for (h, l) in self.0 {
                    let entries: Vec<EntryJson> = l
                        .entries
                        .iter()
                        .rev()
                        .map(|(loc, e)| EntryJson { loc: loc.clone(), ord: e.order, exact: e.exact })
                        .collect();
                    m.serialize_entry(&h.to_string(), &entries)?;
                }
                m.end()
            }
        }
        let mut m = s.serialize_map(Some(4))?;
        m.serialize_entry("q", &self.params.q)?;
        m.serialize_entry("cap", &self.params.cap)?;
        m.serialize_entry("xi_class", &self.params.xi_class.to_string())?;
        m.serialize_entry("family", &Window(&self.window))?;
        m.end()
    }
}

impl<'de> Deserialize<'de> for LedgerFamily {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        let raw = FamilyJson::deserialize(d)?;
        let build = || -> Result<LedgerFamily> {
            let params = QuotientParams::new(raw.cap, raw.xi_class.clone(), raw.q)?;
            let mut fam = LedgerFamily::new(params.clone());
            for (h, entries) in &raw.family {
                let h: i64 = h
                    .trim()
                    .parse()
                    .map_err(|_| Error::InvalidInput(format!("twist {h:?} is not an integer")))?;
                let mut ledger = PoleLedger::new(params.clone());
                for e in entries {
                    ledger.insert(e.loc.clone(), e.ord, e.exact)?;
                }
                fam.window.insert(h, ledger);
            }
            Ok(fam)
        };
        build().map_err(D::Error::custom)
    }
}

/// One step of a ledger script.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "op", rename_all = "lowercase")]
pub enum ScriptOp {
    A,
    B,
    Linear {
        #[serde(with = "crate::rational::serde_str")]
        lambda0: Rational,
    },
    Series {
        #[serde(with = "crate::rational::serde_vec")]
        coeffs: Vec<Rational>,
    },
}

impl ScriptOp {
    pub fn apply(&self, family: &LedgerFamily) -> Result<LedgerFamily> {
        match self {
            ScriptOp::A => Ok(apply_generator(family, &Generator::A)),
            ScriptOp::B => Ok(apply_generator(family, &Generator::B)),
            ScriptOp::Linear { lambda0 } => {
                Ok(apply_generator(family, &Generator::Linear(lambda0.clone())))
            }
            ScriptOp::Series { coeffs } => {
                let s = TruncatedSeries::new(coeffs.clone(), coeffs.len().max(1))?;
                apply_series(family, &s)
            }
        }
    }
}

impl fmt::Display for ScriptOp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ScriptOp::A => write!(f, "a"),
            ScriptOp::B => write!(f, "b"),
            ScriptOp::Linear { lambda0 } => write!(f, "a - ({lambda0})*b"),
            ScriptOp::Series { coeffs } => {
                let c: Vec<String> = coeffs.iter().map(|x| x.to_string()).collect();
                write!(f, "S[{}]", c.join(", "))
            }
        }
    }
}
