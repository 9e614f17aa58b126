//! Bernstein elements and polynomials of frescos.
//!
//! A fresco is presented as `Ã/Ã·Π`. Its Bernstein element is the initial
//! form of `Π`, a monic homogeneous element `P` of degree `k`, and its
//! Bernstein polynomial is the monic `B` with `(−b)^k·B(−b^{-1}a) = P` in
//! `A[b^-1]`. The same polynomial is recovered independently as the
//! characteristic polynomial of `−b^{-1}a` on the saturated lattice modulo `b`.

mod bernstein;
mod geometric;
mod presentation;
mod saturation;

pub use bernstein::{
    bernstein_element, bpoly_to_element, cofactor_poly, divide_right, element_to_bpoly,
    exact_sequence_bpoly, exact_sequence_closed_form, roots_from_factors, BernsteinPoly,
    HomogeneousElement,
};
pub use geometric::{is_geometric, GeometricStatus, GeometricVerdict};
pub use presentation::{
    a_matrix_from_presentation, expand_presentation, reduce_mod_pi, AbModulePresentation,
    FrescoPresentation, QuotientClass,
};
pub use saturation::{char_poly, min_poly, saturate_bernstein, SaturationConfig, SaturationResult};

use crate::error::Result;

/// Bernstein polynomial of a presentation read from the initial form of `Π`.
pub fn presentation_bpoly(p: &FrescoPresentation, precision: usize) -> Result<BernsteinPoly> {
    let (init, _) = expand_presentation(p, precision)?.initial_form()?;
    element_to_bpoly(&HomogeneousElement::from_element(&init)?)
}
