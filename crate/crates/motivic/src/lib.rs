//! Exact desk-scale motivic integration over truncated local fields.
//!
//! The crate interprets a three-sorted first-order language over both kinds
//! of local field (p-adic and Laurent series), computes symbolic volumes of
//! cell complexes in the coefficient ring generated by the Lefschetz symbol,
//! and verifies specialization and cross-characteristic transfer identities
//! on concrete integrals, including Jacquet-Ye integrals and weighted
//! orbital integrals for the split general linear group of rank two.
//!
//! Everything is exact: digit arithmetic at tracked precision, big-rational
//! values, cyclotomic character sums, three-valued logic with an explicit
//! `Unknown` wherever truncation cannot decide.

pub mod algebra;
pub mod cells;
pub mod constructible;
pub mod corpus;
pub mod eval;
pub mod field;
pub mod jy;
pub mod weights;
pub mod lang;
pub mod poly;
