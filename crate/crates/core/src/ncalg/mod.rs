//! Normal-ordered arithmetic in `A = Q⟨a, b⟩/(ab − ba − b²)`, its Laurent
//! extension `A[b^-1]` and the b-adically truncated completion.
//!
//! The canonical order puts a-powers to the left of b-powers. Rewriting
//! rests on the single rule `b^q·a = a·b^q − q·b^{q+1}`, valid for every
//! integer `q`.

mod element;
mod series;
mod truncated;

pub use element::{
    commutator_with_a, expected_commutator_b_power, monomial_product, normal_order,
    normal_order_in_window, Letter, NcElement, DEFAULT_LAURENT_WINDOW,
};
pub(crate) use series::a_pow_times_series;
pub use series::{initial_form, NcSeriesElement};
pub use truncated::TruncatedSeries;

use crate::error::Result;

/// `x·y` in the default Laurent window.
pub fn multiply(x: &NcElement, y: &NcElement) -> Result<NcElement> {
    x.mul(y)
}

/// Inverse of a unit series modulo its precision.
pub fn series_inverse(s: &TruncatedSeries) -> Result<TruncatedSeries> {
    s.inverse()
}
