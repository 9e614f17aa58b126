use thiserror::Error;

/// Every failure the library can report.
///
/// Variants fall into two families: domain errors (the input violates a
/// mathematical precondition) and exhaustion errors (a configured bound such
/// as precision, iteration count or exponent window ran out). See
/// [`Error::is_exhaustion`].
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("b^-1 is not allowed outside Laurent mode")]
    LaurentNotAllowed,
    #[error("b-exponent {exponent} is outside the Laurent window |e| <= {window}")]
    LaurentWindowExceeded { exponent: i64, window: u32 },
    #[error("series with zero constant term is not a unit")]
    NotAUnit,
    #[error("element is zero up to the known precision")]
    ZeroElement,
    #[error("initial form of degree {degree} is not determined at b-precision {precision}")]
    PrecisionTooLow { degree: u32, precision: usize },
    #[error("precision exhausted: {0}")]
    PrecisionExhausted(String),
    #[error("element is not monic in a")]
    NotMonic,
    #[error("element is not homogeneous in (a, b)")]
    NotHomogeneous,
    #[error("not right-divisible, remainder {remainder}")]
    NotDivisible { remainder: String },
    #[error("saturation did not stabilize within {max_iter} iterations")]
    NotStabilized { max_iter: usize },
    #[error("exponent matrix is singular")]
    DegenerateExponents,
    #[error("recurrence right-hand side vanishes, the chain does not advance")]
    DegenerateRecurrence,
    #[error("no nonnegative closure relation with N <= {bound}")]
    NoClosure { bound: u32 },
    #[error("inconsistent pole ledger: {0}")]
    InconsistentLedger(String),
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("parse error: {0}")]
    Parse(String),
}

impl Error {
    /// True when the error reports an exhausted bound rather than bad input.
    pub fn is_exhaustion(&self) -> bool {
        matches!(
            self,
            Error::LaurentWindowExceeded { .. }
                | Error::PrecisionTooLow { .. }
                | Error::PrecisionExhausted(_)
                | Error::NotStabilized { .. }
                | Error::NoClosure { .. }
        )
    }

    /// Stable machine-readable name of the variant.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::LaurentNotAllowed => "LaurentNotAllowed",
            Error::LaurentWindowExceeded { .. } => "LaurentWindowExceeded",
            Error::NotAUnit => "NotAUnit",
            Error::ZeroElement => "ZeroElement",
            Error::PrecisionTooLow { .. } => "PrecisionTooLow",
            Error::PrecisionExhausted(_) => "PrecisionExhausted",
            Error::NotMonic => "NotMonic",
            Error::NotHomogeneous => "NotHomogeneous",
            Error::NotDivisible { .. } => "NotDivisible",
            Error::NotStabilized { .. } => "NotStabilized",
            Error::DegenerateExponents => "DegenerateExponents",
            Error::DegenerateRecurrence => "DegenerateRecurrence",
            Error::NoClosure { .. } => "NoClosure",
            Error::InconsistentLedger(_) => "InconsistentLedger",
            Error::InvalidInput(_) => "InvalidInput",
            Error::Parse(_) => "ParseError",
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
