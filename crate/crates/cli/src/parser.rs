//! The operator expression grammar.
//!
//! ```text
//! expr   := ["-"] term (("+" | "-") term)*
//! term   := factor ("*" factor)*
//! factor := atom ["^" (uint | "-" uint)]
//! atom   := rational | "a" | "b" | "(" expr ")" | "S[" rational ("," rational)* "]"
//! ```
//!
//! Negative exponents are only accepted on `b`, so `b^-1` and `b^-3` are
//! atoms of the Laurent extension. Whitespace is ignored and binary
//! operators associate to the left.

use std::fmt;

use fresco_core::rational::parse_rational;
use fresco_core::Rational;
use num_traits::Signed;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum OperatorExpr {
    Rational(Rational),
    A,
    B,
    /// `b^-n` with `n ≥ 1`.
    BInvPow(u32),
    /// `S[c0, c1, …]`, a series in `b`.
    Series(Vec<Rational>),
    Neg(Box<OperatorExpr>),
    Add(Box<OperatorExpr>, Box<OperatorExpr>),
    Sub(Box<OperatorExpr>, Box<OperatorExpr>),
    Mul(Box<OperatorExpr>, Box<OperatorExpr>),
    Pow(Box<OperatorExpr>, u32),
}

impl OperatorExpr {
    pub fn contains_series(&self) -> bool {
        use OperatorExpr::*;
        match self {
            Series(_) => true,
            Rational(_) | A | B | BInvPow(_) => false,
            Neg(x) | Pow(x, _) => x.contains_series(),
            Add(x, y) | Sub(x, y) | Mul(x, y) => x.contains_series() || y.contains_series(),
        }
    }

    pub fn contains_b_inverse(&self) -> bool {
        use OperatorExpr::*;
        match self {
            BInvPow(_) => true,
            Rational(_) | A | B | Series(_) => false,
            Neg(x) | Pow(x, _) => x.contains_b_inverse(),
            Add(x, y) | Sub(x, y) | Mul(x, y) => x.contains_b_inverse() || y.contains_b_inverse(),
        }
    }
}

/// A syntax error with the character offset where it was detected and the
/// tokens that would have been accepted there.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ParseError {
    pub position: usize,
    pub expected: Vec<&'static str>,
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "at offset {}: expected {}",
            self.position,
            self.expected.join(" | ")
        )
    }
}

impl std::error::Error for ParseError {}

const ATOM_START: &[&str] = &["rational", "'a'", "'b'", "'('", "'S['"];

struct Parser {
    chars: Vec<char>,
    pos: usize,
}

pub fn parse_expression(text: &str) -> Result<OperatorExpr, ParseError> {
    let mut p = Parser { chars: text.chars().collect(), pos: 0 };
    let e = p.expr()?;
    p.skip_ws();
    if p.pos < p.chars.len() {
        return Err(p.error(&["'+'", "'-'", "'*'", "'^'", "end of input"]));
    }
    Ok(e)
}

impl Parser {
    fn error(&self, expected: &[&'static str]) -> ParseError {
        ParseError { position: self.pos, expected: expected.to_vec() }
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

    fn expr(&mut self) -> Result<OperatorExpr, ParseError> {
        let mut acc = if self.eat('-') {
            OperatorExpr::Neg(Box::new(self.term()?))
        } else {
            self.term()?
        };
        loop {
            if self.eat('+') {
                acc = OperatorExpr::Add(Box::new(acc), Box::new(self.term()?));
            } else if self.eat('-') {
                acc = OperatorExpr::Sub(Box::new(acc), Box::new(self.term()?));
            } else {
                return Ok(acc);
            }
        }
    }

    fn term(&mut self) -> Result<OperatorExpr, ParseError> {
        let mut acc = self.factor()?;
        while self.eat('*') {
            acc = OperatorExpr::Mul(Box::new(acc), Box::new(self.factor()?));
        }
        Ok(acc)
    }

    fn factor(&mut self) -> Result<OperatorExpr, ParseError> {
        let atom = self.atom()?;
        if !self.eat('^') {
            return Ok(atom);
        }
        if self.peek() == Some('-') {
            if atom != OperatorExpr::B {
                return Err(self.error(&["unsigned integer"]));
            }
            self.pos += 1;
            let n = self.uint()?;
            if n == 0 {
                return Ok(OperatorExpr::Pow(Box::new(OperatorExpr::B), 0));
            }
            return Ok(OperatorExpr::BInvPow(n));
        }
        let expected: &[&'static str] = if atom == OperatorExpr::B {
            &["unsigned integer", "'-'"]
        } else {
            &["unsigned integer"]
        };
        let n = self.uint().map_err(|e| ParseError { expected: expected.to_vec(), ..e })?;
        Ok(OperatorExpr::Pow(Box::new(atom), n))
    }

    fn digits(&mut self) -> Option<String> {
        self.skip_ws();
        let start = self.pos;
        while self.chars.get(self.pos).is_some_and(|c| c.is_ascii_digit()) {
            self.pos += 1;
        }
        (self.pos > start).then(|| self.chars[start..self.pos].iter().collect())
    }

    fn uint(&mut self) -> Result<u32, ParseError> {
        let start = {
            self.skip_ws();
            self.pos
        };
        match self.digits().and_then(|d| d.parse().ok()) {
            Some(n) => Ok(n),
            None => {
                self.pos = start;
                Err(self.error(&["unsigned integer"]))
            }
        }
    }

    fn rational(&mut self) -> Result<Rational, ParseError> {
        self.skip_ws();
        let start = self.pos;
        let negative = self.eat('-');
        let Some(num) = self.digits() else {
            self.pos = start;
            return Err(self.error(&["rational"]));
        };
        let save = self.pos;
        let mut text = if negative { format!("-{num}") } else { num };
        if self.eat('/') {
            match self.digits() {
                Some(den) if den.trim_start_matches('0').is_empty() => {
                    return Err(ParseError { position: save + 1, expected: vec!["nonzero denominator"] });
                }
                Some(den) => {
                    text.push('/');
                    text.push_str(&den);
                }
                None => return Err(self.error(&["denominator"])),
            }
        }
        parse_rational(&text).map_err(|_| ParseError { position: start, expected: vec!["rational"] })
    }

    fn atom(&mut self) -> Result<OperatorExpr, ParseError> {
        match self.peek() {
            Some('a') => {
                self.pos += 1;
                Ok(OperatorExpr::A)
            }
            Some('b') => {
                self.pos += 1;
                Ok(OperatorExpr::B)
            }
            Some('(') => {
                self.pos += 1;
                let e = self.expr()?;
                if !self.eat(')') {
                    return Err(self.error(&["')'", "'+'", "'-'", "'*'", "'^'"]));
                }
                Ok(e)
            }
            Some('S') => {
                self.pos += 1;
                if !self.eat('[') {
                    return Err(self.error(&["'['"]));
                }
                let mut coeffs = vec![self.rational()?];
                while self.eat(',') {
                    coeffs.push(self.rational()?);
                }
                if !self.eat(']') {
                    return Err(self.error(&["','", "']'"]));
                }
                Ok(OperatorExpr::Series(coeffs))
            }
            Some(c) if c.is_ascii_digit() => Ok(OperatorExpr::Rational(self.rational()?)),
            _ => Err(self.error(ATOM_START)),
        }
    }
}

/// Pretty form of a tree, fully parenthesized where precedence requires it.
impl fmt::Display for OperatorExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        use OperatorExpr::*;
        match self {
            Rational(r) if r.is_integer() && !r.is_negative() => {
                write!(f, "{r}")
            }
            Rational(r) => write!(f, "({r})"),
            A => write!(f, "a"),
            B => write!(f, "b"),
            BInvPow(n) => write!(f, "b^-{n}"),
            Series(c) => {
                let parts: Vec<String> = c.iter().map(|x| x.to_string()).collect();
                write!(f, "S[{}]", parts.join(", "))
            }
            Neg(x) => write!(f, "(-{x})"),
            Add(x, y) => write!(f, "({x} + {y})"),
            Sub(x, y) => write!(f, "({x} - {y})"),
            Mul(x, y) => write!(f, "{x}*{y}"),
            Pow(x, n) => write!(f, "({x})^{n}"),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn dangling_operator() {
        let e = parse_expression("a*").unwrap_err();
        assert_eq!(e.position, 2);
        assert!(e.expected.contains(&"'a'"));
    }

    #[test]
    fn structure() {
        let e = parse_expression("a*b - b*a").unwrap();
        assert!(matches!(e, OperatorExpr::Sub(_, _)));
        let p = parse_expression("(a - 2*b)*(a - b)").unwrap();
        assert!(matches!(p, OperatorExpr::Mul(_, _)));
        assert_eq!(parse_expression("b^-3").unwrap(), OperatorExpr::BInvPow(3));
        assert!(parse_expression("a^-1").is_err());
        assert_eq!(
            parse_expression("S[1, -1/2]").unwrap(),
            OperatorExpr::Series(vec![fresco_core::rational::int(1), fresco_core::rational::rat(-1, 2)])
        );
        assert!(parse_expression("S[]").is_err());
        assert!(parse_expression("1/0").is_err());
        assert!(parse_expression("a b").is_err());
    }

    #[test]
    fn display_reparses() {
        for text in ["a*b - b*a", "-1/2*a + (b^-2)^3", "S[1, 2]*a^2", "-(a - 3)"] {
            let e = parse_expression(text).unwrap();
            assert_eq!(parse_expression(&e.to_string()).unwrap(), e, "{text}");
        }
    }
}
