//! Symbolic volume coefficients: the localized Laurent ring in the
//! Lefschetz symbol, its evaluations, and the positivity cone.

pub mod aelem;
pub mod laurent;
pub mod sturm;

pub use aelem::{geom_sum, AElem, AlgebraError};
pub use laurent::LaurentPoly;
