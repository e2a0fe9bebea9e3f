//! The shipped verification corpus: sentence suites, cell complexes,
//! integral grids, and orbit points, loaded from the repository's corpus
//! files plus a few built in code.

use crate::cells::{Cell, CellBase, CellCoord, CellComplex, RfSpec, VgAffine, VgRange};
use crate::jy::DiagParam;
use crate::lang::{parse_formula, parse_formula_with, Formula, Sort, VfConst};
use crate::poly::IntPoly;
use crate::weights::OrbitPoint;
use serde::Deserialize;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum CorpusError {
    #[error("corpus file `{file}`: {message}")]
    Malformed { file: String, message: String },
}

fn malformed(file: &str, message: impl std::fmt::Display) -> CorpusError {
    CorpusError::Malformed { file: file.to_string(), message: message.to_string() }
}

// ------------------------------------------------------------- sentences --

#[derive(Debug, Clone)]
pub struct AkeSentence {
    pub id: String,
    pub formula: Formula,
    pub min_p: u64,
}

#[derive(Deserialize)]
struct SentenceFile {
    sentence: Vec<SentenceEntry>,
}

#[derive(Deserialize)]
struct SentenceEntry {
    id: String,
    formula: String,
    #[serde(default = "default_min_p")]
    min_p: u64,
}

fn default_min_p() -> u64 {
    3
}

const AKE_SENTENCES: &str =
    include_str!(concat!(env!("CARGO_MANIFEST_DIR"), "/../../corpus/ake/sentences.toml"));

/// Parse a sentence suite from its file format.
pub fn parse_sentences(text: &str, file: &str) -> Result<Vec<AkeSentence>, CorpusError> {
    let parsed: SentenceFile = toml::from_str(text).map_err(|e| malformed(file, e))?;
    parsed
        .sentence
        .into_iter()
        .map(|s| {
            let formula = parse_formula(&s.formula)
                .map_err(|e| malformed(file, format!("{}: {e}", s.id)))?;
            Ok(AkeSentence { id: s.id, formula, min_p: s.min_p })
        })
        .collect()
}

/// The shipped sentence suite.
pub fn ake_suite() -> Vec<AkeSentence> {
    parse_sentences(AKE_SENTENCES, "corpus/ake/sentences.toml").expect("shipped suite parses")
}

// ------------------------------------------------------------- complexes --

#[derive(Debug, Clone)]
pub struct VolumeCase {
    pub id: String,
    pub complex: CellComplex,
    /// Minimum valuation of the ambient box.
    pub box_min: i64,
    pub min_p: u64,
}

#[derive(Deserialize)]
struct ComplexFile {
    complex: Vec<ComplexEntry>,
}

#[derive(Deserialize)]
struct ComplexEntry {
    id: String,
    formula: String,
    centers: Vec<Vec<i64>>,
    #[serde(default)]
    box_min: i64,
    #[serde(default)]
    min_p: Option<u64>,
}

const FRAGMENT_COMPLEXES: &str = include_str!(concat!(
    env!("CARGO_MANIFEST_DIR"),
    "/../../corpus/complexes/fragment.toml"
));

/// Parse and decompose the fragment corpus entries.
pub fn parse_fragment_cases(text: &str, file: &str) -> Result<Vec<VolumeCase>, CorpusError> {
    let parsed: ComplexFile = toml::from_str(text).map_err(|e| malformed(file, e))?;
    parsed
        .complex
        .into_iter()
        .map(|c| {
            let formula = parse_formula(&c.formula)
                .map_err(|e| malformed(file, format!("{}: {e}", c.id)))?;
            let centers: Vec<VfConst> = c
                .centers
                .iter()
                .map(|coeffs| VfConst::poly(IntPoly::new(coeffs.clone())))
                .collect();
            let complex = crate::cells::decompose_fragment(&formula, &centers, c.box_min)
                .map_err(|e| malformed(file, format!("{}: {e}", c.id)))?;
            let min_p = c.min_p.unwrap_or(complex.min_p).max(complex.min_p);
            Ok(VolumeCase { id: c.id, complex, box_min: c.box_min, min_p })
        })
        .collect()
}

fn rf_formula(text: &str, vars: &[&str]) -> Formula {
    let ctx: Vec<(String, Sort)> = vars
        .iter()
        .map(|v| (v.to_string(), Sort::ResidueField))
        .collect();
    parse_formula_with(text, &ctx).expect("built-in fiber formula parses")
}

/// Hand-built complexes beyond the fragment: residue-fibered shells,
/// value-group-parameterized families, and two-variable towers.
pub fn builtin_cases() -> Vec<VolumeCase> {
    let mut out = Vec::new();

    // shells whose leading digit is a square root of two
    out.push(VolumeCase {
        id: "square-root-of-two-digits".into(),
        complex: CellComplex {
            vf_vars: vec!["z".into()],
            cells: vec![Cell {
                base: CellBase {
                    rf_params: vec!["xi".into()],
                    vg_params: vec![],
                    constraint: Some(rf_formula("xi*xi = #2", &["xi"])),
                },
                coords: vec![CellCoord::ball(
                    VfConst::integer(0),
                    VgAffine::constant(1),
                    RfSpec::Var(0),
                )],
            }],
            ambient: None,
            min_p: 3,
        },
        box_min: 0,
        min_p: 3,
    });

    // unit sphere with a cube-root-of-unity digit
    out.push(VolumeCase {
        id: "cube-root-digits".into(),
        complex: CellComplex {
            vf_vars: vec!["z".into()],
            cells: vec![Cell {
                base: CellBase {
                    rf_params: vec!["xi".into()],
                    vg_params: vec![],
                    constraint: Some(rf_formula("xi*xi*xi = #1", &["xi"])),
                },
                coords: vec![CellCoord::ball(
                    VfConst::integer(0),
                    VgAffine::constant(0),
                    RfSpec::Var(0),
                )],
            }],
            ambient: None,
            min_p: 3,
        },
        box_min: 0,
        min_p: 3,
    });

    // even shells only, to exhaust a stepped geometric sum
    out.push(VolumeCase {
        id: "even-shells".into(),
        complex: CellComplex {
            vf_vars: vec!["z".into()],
            cells: vec![Cell {
                base: CellBase {
                    rf_params: vec![],
                    vg_params: vec![("a".into(), VgRange::Interval(0, 2))],
                    constraint: None,
                },
                coords: vec![CellCoord::ball(
                    VfConst::integer(0),
                    VgAffine { constant: 0, coeffs: vec![(0, 2)] },
                    RfSpec::Any,
                )],
            }],
            ambient: None,
            min_p: 3,
        },
        box_min: 0,
        min_p: 3,
    });

    // product of two balls
    out.push(VolumeCase {
        id: "product-of-balls".into(),
        complex: CellComplex {
            vf_vars: vec!["x".into(), "y".into()],
            cells: vec![Cell {
                base: CellBase::default(),
                coords: vec![
                    CellCoord::ball(VfConst::integer(0), VgAffine::constant(1), RfSpec::Any),
                    CellCoord::ball(VfConst::integer(1), VgAffine::constant(2), RfSpec::Any),
                ],
            }],
            ambient: None,
            min_p: 3,
        },
        box_min: 0,
        min_p: 3,
    });

    // triangular tower: the first variable at least as deep as the second
    out.push(VolumeCase {
        id: "triangle-tower".into(),
        complex: CellComplex {
            vf_vars: vec!["x".into(), "y".into()],
            cells: vec![Cell {
                base: CellBase {
                    rf_params: vec![],
                    vg_params: vec![
                        ("b".into(), VgRange::Interval(0, 2)),
                        ("c".into(), VgRange::From(0)),
                    ],
                    constraint: None,
                },
                coords: vec![
                    CellCoord::ball(
                        VfConst::integer(0),
                        VgAffine { constant: 0, coeffs: vec![(0, 1), (1, 1)] },
                        RfSpec::Any,
                    ),
                    CellCoord::ball(VfConst::integer(0), VgAffine::param(0), RfSpec::Any),
                ],
            }],
            ambient: None,
            min_p: 3,
        },
        box_min: 0,
        min_p: 3,
    });

    // correlated digits across two coordinates: product of digits is one
    out.push(VolumeCase {
        id: "triangle-with-digit-relation".into(),
        complex: CellComplex {
            vf_vars: vec!["x".into(), "y".into()],
            cells: vec![Cell {
                base: CellBase {
                    rf_params: vec!["xi".into(), "eta".into()],
                    vg_params: vec![("b".into(), VgRange::Interval(0, 1))],
                    constraint: Some(rf_formula("xi*eta = #1", &["xi", "eta"])),
                },
                coords: vec![
                    CellCoord::ball(VfConst::integer(0), VgAffine::param(0), RfSpec::Var(0)),
                    CellCoord::ball(VfConst::integer(0), VgAffine::param(0), RfSpec::Var(1)),
                ],
            }],
            ambient: None,
            min_p: 3,
        },
        box_min: 0,
        min_p: 3,
    });

    out
}

/// The full volume corpus: every decomposed fragment entry plus the
/// built-in residue-fibered and tower cases.
pub fn volume_suite() -> Vec<VolumeCase> {
    let mut cases = parse_fragment_cases(FRAGMENT_COMPLEXES, "corpus/complexes/fragment.toml")
        .expect("shipped complex corpus parses");
    cases.extend(builtin_cases());
    cases
}

// ------------------------------------------------------------------- jy --

#[derive(Debug, Clone, Deserialize)]
pub struct JyGrid {
    pub exponents: Vec<i64>,
    pub unit_codes: Vec<i64>,
    pub primes: Vec<u64>,
    pub max_window: usize,
    pub conductor_shifts: Vec<i64>,
    #[serde(default = "default_min_p")]
    pub min_p: u64,
}

#[derive(Deserialize)]
struct JyFile {
    grid: JyGrid,
}

const JY_GRID: &str =
    include_str!(concat!(env!("CARGO_MANIFEST_DIR"), "/../../corpus/jy/grid.toml"));

pub fn jy_grid() -> JyGrid {
    let parsed: JyFile = toml::from_str(JY_GRID).expect("shipped grid parses");
    parsed.grid
}

/// Materialize the diagonal parameters of the grid for one prime: the unit
/// code zero stands for the smallest non-square unit mod p.
pub fn jy_cases(grid: &JyGrid, p: u64) -> Vec<(String, DiagParam)> {
    let nonsquare = crate::field::residue::find_irreducible_binomial_unit(2, p)
        .expect("odd primes have non-squares") as i64;
    let mut cases = Vec::new();
    for &k1 in &grid.exponents {
        for &k2 in &grid.exponents {
            for &u1 in &grid.unit_codes {
                for &u2 in &grid.unit_codes {
                    let (u1, u2) = (
                        if u1 == 0 { nonsquare } else { u1 },
                        if u2 == 0 { nonsquare } else { u2 },
                    );
                    let id = format!("k=({k1},{k2}) u=({u1},{u2})");
                    cases.push((id, DiagParam::with_units(&[u1, u2], &[k1, k2])));
                }
            }
        }
    }
    cases
}

// -------------------------------------------------------------- weights --

#[derive(Debug, Clone)]
pub struct WeightCase {
    pub id: String,
    pub point: OrbitPoint,
}

#[derive(Debug, Clone, Deserialize)]
pub struct WeightSettings {
    pub primes: Vec<u64>,
    pub max_window: usize,
    #[serde(default = "default_min_p")]
    pub min_p: u64,
}

#[derive(Deserialize)]
struct WeightFile {
    point: Vec<WeightEntry>,
    settings: WeightSettings,
}

#[derive(Deserialize)]
struct WeightEntry {
    id: String,
    eigenvalues: Vec<Vec<i64>>,
}

const WEIGHT_POINTS: &str = include_str!(concat!(
    env!("CARGO_MANIFEST_DIR"),
    "/../../corpus/weights/points.toml"
));

pub fn weights_suite() -> (Vec<WeightCase>, WeightSettings) {
    let parsed: WeightFile = toml::from_str(WEIGHT_POINTS).expect("shipped points parse");
    let cases = parsed
        .point
        .into_iter()
        .map(|e| {
            assert_eq!(e.eigenvalues.len(), 2, "orbit points list two eigenvalues");
            let l1 = IntPoly::new(e.eigenvalues[0].clone());
            let l2 = IntPoly::new(e.eigenvalues[1].clone());
            WeightCase { id: e.id, point: OrbitPoint::from_eigenvalues(&l1, &l2) }
        })
        .collect();
    (cases, parsed.settings)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn shipped_suites_load() {
        assert!(ake_suite().len() >= 8);
        assert!(volume_suite().len() >= 12);
        let grid = jy_grid();
        assert!(grid.exponents.len() >= 5);
        let (points, settings) = weights_suite();
        assert!(points.len() >= 6);
        assert!(settings.primes.contains(&5) && settings.primes.contains(&7));
    }

    #[test]
    fn weight_points_have_unit_discriminant() {
        let (points, _) = weights_suite();
        for case in points {
            let disc = case
                .point
                .tr
                .0
                .mul(&case.point.tr.0)
                .sub(&case.point.det.0.mul(&crate::poly::IntPoly::constant(4)));
            assert_eq!(
                disc.t_order(),
                Some(0),
                "{}: discriminant {disc} is not a unit",
                case.id
            );
        }
    }
}
