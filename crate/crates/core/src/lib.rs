//! Exact computer algebra for the algebra generated by `a`, `b` with
//! `a·b − b·a = b²`.
//!
//! The crate covers four areas:
//!
//! * [`ncalg`]: normal-ordered arithmetic in the algebra, its Laurent
//!   extension and its b-adic completion truncated at a finite precision.
//! * [`fresco`]: Bernstein elements and Bernstein polynomials of frescos,
//!   division of initial forms, presentations `Ã/Ã·Π`, saturation of
//!   (a,b)-modules and geometric-ness verdicts.
//! * [`gaussmanin`]: the one-step recurrence for polynomials with `n + 2`
//!   monomials and the candidate Bernstein divisor it produces.
//! * [`poles`]: ledgers of pole locations and orders with the shift and
//!   generator actions used to count roots of Bernstein polynomials.
//!
//! All arithmetic is over exact rationals.

pub mod error;
pub mod fresco;
pub mod gaussmanin;
pub mod ncalg;
pub mod poles;
pub mod poly;
pub mod rational;

pub use error::{Error, Result};
pub use fresco::{
    AbModulePresentation, BernsteinPoly, FrescoPresentation, GeometricStatus, GeometricVerdict,
    HomogeneousElement,
};
pub use gaussmanin::{MonomialInput, RecurrenceResult};
pub use ncalg::{Letter, NcElement, NcSeriesElement, TruncatedSeries};
pub use poles::{LedgerFamily, PoleLedger};
pub use poly::Poly;
pub use rational::Rational;
