//! Cell data: point fibers and ball fibers over finite residue/value-group
//! bases.

use crate::lang::{Formula, VfConst};
use serde::{Deserialize, Serialize};

/// Range of a value-group parameter.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum VgRange {
    /// Closed interval `[lo, hi]`.
    Interval(i64, i64),
    /// Half line `[lo, oo)`.
    From(i64),
}

/// Affine expression `constant + sum coeff * param` in the cell's
/// value-group parameters.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct VgAffine {
    pub constant: i64,
    pub coeffs: Vec<(usize, i64)>,
}

impl VgAffine {
    pub fn constant(c: i64) -> Self {
        VgAffine { constant: c, coeffs: vec![] }
    }

    pub fn param(idx: usize) -> Self {
        VgAffine { constant: 0, coeffs: vec![(idx, 1)] }
    }

    pub fn eval(&self, params: &[i64]) -> i64 {
        self.constant + self.coeffs.iter().map(|&(i, c)| c * params[i]).sum::<i64>()
    }

    pub fn coeff_of(&self, idx: usize) -> i64 {
        self.coeffs
            .iter()
            .filter(|&&(i, _)| i == idx)
            .map(|&(_, c)| c)
            .sum()
    }
}

/// Leading-digit specification of a ball coordinate.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum RfSpec {
    /// Any nonzero residue.
    Any,
    /// A fixed integer residue (nonzero for large p).
    Const(i64),
    /// One of the cell's residue parameters (implicitly nonzero).
    Var(usize),
}

/// One valued-field coordinate of a cell.
#[derive(Debug, Clone, PartialEq)]
pub enum CoordKind {
    /// Point fiber `z = center`.
    Point,
    /// Ball fiber `ord(z - center) = order`, `ac(z - center) = ac`.
    Ball { order: VgAffine, ac: RfSpec },
}

#[derive(Debug, Clone, PartialEq)]
pub struct CellCoord {
    pub center: VfConst,
    pub kind: CoordKind,
}

impl CellCoord {
    pub fn point(center: VfConst) -> Self {
        CellCoord { center, kind: CoordKind::Point }
    }

    pub fn ball(center: VfConst, order: VgAffine, ac: RfSpec) -> Self {
        CellCoord { center, kind: CoordKind::Ball { order, ac } }
    }
}

/// The auxiliary base of a cell: named residue parameters and value-group
/// parameters with ranges, plus an optional residue constraint formula over
/// the residue parameters.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct CellBase {
    pub rf_params: Vec<String>,
    pub vg_params: Vec<(String, VgRange)>,
    pub constraint: Option<Formula>,
}

/// One cell: a product of point/ball fibers over a common base, one fiber
/// per valued-field coordinate.
#[derive(Debug, Clone, PartialEq)]
pub struct Cell {
    pub base: CellBase,
    pub coords: Vec<CellCoord>,
}

impl Cell {
    /// Does some coordinate degenerate to a point fiber?
    pub fn has_point_coord(&self) -> bool {
        self.coords.iter().any(|c| matches!(c.kind, CoordKind::Point))
    }
}

/// A finite list of cells over a common ambient box.
#[derive(Debug, Clone, Default)]
pub struct CellComplex {
    /// Names of the valued-field fiber variables, one per coordinate.
    pub vf_vars: Vec<String>,
    pub cells: Vec<Cell>,
    /// The formula this complex decomposes, when it is a decomposition.
    pub ambient: Option<Formula>,
    /// Smallest admissible residue characteristic: the symbolic data
    /// (pairwise center orders, leading coefficients, excluded residues)
    /// is faithful only above it.
    pub min_p: u64,
}

impl CellComplex {
    pub fn single_ball(var: &str, center: VfConst, order: i64, ac: i64) -> Self {
        CellComplex {
            vf_vars: vec![var.to_string()],
            cells: vec![Cell {
                base: CellBase::default(),
                coords: vec![CellCoord::ball(
                    center,
                    VgAffine::constant(order),
                    RfSpec::Const(ac),
                )],
            }],
            ambient: None,
            min_p: 3,
        }
    }
}
