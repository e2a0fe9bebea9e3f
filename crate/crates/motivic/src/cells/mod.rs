//! Cells, their symbolic volumes, brute-force volumes, and the
//! specialization/transfer comparison engine.

pub mod checks;
pub mod decompose;
pub mod render;
pub mod types;
pub mod volume;

pub use checks::{
    affine_change_of_variables_check, box_for, check_specialization, fubini_check,
    verify_partition, StructureVerdict, VolumeReport,
};
pub use decompose::{decompose_fragment, DecomposeError};
pub use render::{cell_formula, complex_formula, Render};
pub use types::{Cell, CellBase, CellComplex, CellCoord, CoordKind, RfSpec, VgAffine, VgRange};
pub use volume::{
    integrate_constructible, integrate_exp_constructible, motivic_volume, padic_volume,
    padic_volume_stabilized, MeasureError, MotivicVolume, PadicVolume,
};
