use num_traits::Signed;
use serde::{Deserialize, Serialize};

use crate::fresco::BernsteinPoly;
use crate::poly::Poly;
use crate::rational::Rational;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum GeometricStatus {
    Geometric,
    NotGeometric,
    Unknown,
}

impl GeometricStatus {
    pub fn as_str(self) -> &'static str {
        match self {
            GeometricStatus::Geometric => "geometric",
            GeometricStatus::NotGeometric => "not_geometric",
            GeometricStatus::Unknown => "unknown",
        }
    }
}

/// Outcome of the negative-rational-roots test on a Bernstein polynomial.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GeometricVerdict {
    pub status: GeometricStatus,
    /// Rational roots with multiplicity, ascending.
    pub rational_roots: Vec<Rational>,
    /// The monic factor without rational roots.
    pub unfactored_part: Poly,
}

/// Whether every root of `b` is a negative rational.
///
/// A rational root `≥ 0` settles the question negatively. Otherwise a
/// leftover factor without rational roots leaves the status unknown.
pub fn is_geometric(b: &BernsteinPoly) -> GeometricVerdict {
    let (rational_roots, rest) = b.poly().rational_roots();
    let unfactored_part = rest.monic();
    let status = if rational_roots.iter().any(|r| !r.is_negative()) {
        GeometricStatus::NotGeometric
    } else if unfactored_part.degree().unwrap_or(0) > 0 || unfactored_part.is_zero() {
        GeometricStatus::Unknown
    } else {
        GeometricStatus::Geometric
    };
    GeometricVerdict { status, rational_roots, unfactored_part }
}
