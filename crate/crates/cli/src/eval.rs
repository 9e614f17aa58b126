//! Evaluation of parsed expressions into normal-ordered elements.

use fresco_core::rational::int;
use fresco_core::{Error, NcElement, NcSeriesElement, Result, TruncatedSeries};

use crate::parser::OperatorExpr;

#[derive(Clone, Copy, Debug)]
pub struct EvalOptions {
    /// Allow `b^-n`.
    pub laurent: bool,
    pub laurent_window: u32,
    /// b-precision used once a series literal is involved.
    pub precision: usize,
}

/// An exact element, or a truncated one when a series literal was used.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Value {
    Exact(NcElement),
    Series(NcSeriesElement),
}

impl Value {
    pub fn render(&self) -> String {
        match self {
            Value::Exact(e) => e.to_string(),
            Value::Series(s) => s.to_string(),
        }
    }

    pub fn into_exact(self) -> Result<NcElement> {
        match self {
            Value::Exact(e) => Ok(e),
            Value::Series(_) => Err(Error::InvalidInput(
                "a series literal is not allowed here".into(),
            )),
        }
    }
}

pub fn evaluate(expr: &OperatorExpr, opts: &EvalOptions) -> Result<Value> {
    if expr.contains_b_inverse() && !opts.laurent {
        return Err(Error::LaurentNotAllowed);
    }
    if expr.contains_series() {
        if expr.contains_b_inverse() {
            return Err(Error::InvalidInput(
                "series literals cannot be mixed with b^-1".into(),
            ));
        }
        if opts.precision == 0 {
            return Err(Error::InvalidInput("precision must be >= 1".into()));
        }
        return eval_series(expr, opts.precision).map(Value::Series);
    }
    eval_exact(expr, opts).map(Value::Exact)
}

fn eval_exact(expr: &OperatorExpr, opts: &EvalOptions) -> Result<NcElement> {
    use OperatorExpr::*;
    let w = opts.laurent_window;
    let lift = |e: NcElement| if opts.laurent { e.into_laurent() } else { e };
    Ok(match expr {
        Rational(r) => lift(NcElement::scalar(r.clone())),
        A => lift(NcElement::a()),
        B => lift(NcElement::b()),
        BInvPow(n) => {
            if *n > w {
                return Err(Error::LaurentWindowExceeded { exponent: -(*n as i64), window: w });
            }
            NcElement::monomial(int(1), 0, -(*n as i32))
        }
        Series(_) => unreachable!("series handled by eval_series"),
        Neg(x) => eval_exact(x, opts)?.neg(),
        Add(x, y) => eval_exact(x, opts)?.add(&eval_exact(y, opts)?),
        Sub(x, y) => eval_exact(x, opts)?.sub(&eval_exact(y, opts)?),
        Mul(x, y) => eval_exact(x, opts)?.mul_in_window(&eval_exact(y, opts)?, w)?,
        Pow(x, n) => {
            let base = eval_exact(x, opts)?;
            let mut acc = lift(NcElement::one());
            for _ in 0..*n {
                acc = acc.mul_in_window(&base, w)?;
            }
            acc
        }
    })
}

fn eval_series(expr: &OperatorExpr, precision: usize) -> Result<NcSeriesElement> {
    use OperatorExpr::*;
    Ok(match expr {
        Rational(r) => NcSeriesElement::from_series(TruncatedSeries::constant(r.clone(), precision)),
        A => NcSeriesElement::from_element(&NcElement::a(), precision)?,
        B => NcSeriesElement::from_element(&NcElement::b(), precision)?,
        BInvPow(_) => return Err(Error::LaurentNotAllowed),
        Series(c) => NcSeriesElement::from_series(TruncatedSeries::new(c.clone(), precision)?),
        Neg(x) => eval_series(x, precision)?.neg(),
        Add(x, y) => eval_series(x, precision)?.add(&eval_series(y, precision)?),
        Sub(x, y) => eval_series(x, precision)?.sub(&eval_series(y, precision)?),
        Mul(x, y) => eval_series(x, precision)?.mul(&eval_series(y, precision)?),
        Pow(x, n) => {
            let base = eval_series(x, precision)?;
            let mut acc = NcSeriesElement::one(precision);
            for _ in 0..*n {
                acc = acc.mul(&base);
            }
            acc
        }
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parser::parse_expression;

    fn opts(laurent: bool) -> EvalOptions {
        EvalOptions { laurent, laurent_window: 16, precision: 8 }
    }

    fn eval(text: &str, laurent: bool) -> Result<Value> {
        evaluate(&parse_expression(text).unwrap(), &opts(laurent))
    }

    #[test]
    fn commutation_relation() {
        assert_eq!(eval("a*b - b*a", false).unwrap().render(), "b^2");
        assert_eq!(eval("(a - 2*b)*(a - b)", false).unwrap().render(), "a^2 - 3*a*b + 4*b^2");
        assert_eq!(eval("b*a", false).unwrap().render(), "a*b - b^2");
    }

    #[test]
    fn laurent_gate() {
        assert_eq!(eval("b^-1*a", false), Err(Error::LaurentNotAllowed));
        assert_eq!(eval("b^-1*a", true).unwrap().render(), "a*b^-1 + 1");
        assert!(matches!(eval("b^-17", true), Err(Error::LaurentWindowExceeded { .. })));
        assert!(matches!(eval("(b^-9)^2", true), Err(Error::LaurentWindowExceeded { .. })));
    }

    #[test]
    fn series_literals() {
        let v = eval("S[1, 1]*a", false).unwrap();
        assert_eq!(v.render(), "a + a*b - b^2 + O(b^8)");
    }
}
