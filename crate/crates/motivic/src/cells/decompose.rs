//! Cell decomposition for the linear-center fragment.
//!
//! Input formulas are boolean combinations of `ord(z - c) ⋈ k` and
//! `ac(z - c) = r` with centers from a given finite list. The box
//! `ord z >= v0` splits along the ultrametric tree of the centers: each
//! point's address is the closest center (ties to the smallest index), the
//! distance shell, and the leading digit. On every address cell all atoms
//! evaluate symbolically, so the solution set is an exact disjoint union of
//! cells.
//!
//! Pairwise center data (`ord(c_i - c_j)` and leading coefficients) is
//! computed generically in the polynomial ring; the complex records the
//! smallest residue characteristic above which the generic answers are the
//! true ones.

use super::types::{Cell, CellBase, CellComplex, CellCoord, RfSpec, VgAffine, VgRange};
use crate::lang::{free_variables, Formula, Rel, Sort, Term, VfConst};
use crate::poly::IntPoly;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum DecomposeError {
    #[error("formula must have exactly one free valued-field variable")]
    WrongVariables,
    #[error("atom `{0}` is outside the linear-center fragment")]
    OutsideFragment(String),
    #[error("center `{0}` is not in the provided center list")]
    UnknownCenter(String),
    #[error("duplicate centers at indices {0} and {1}")]
    DuplicateCenters(usize, usize),
    #[error("center {0} lies outside the box (its valuation is below {1})")]
    CenterOutsideBox(usize, i64),
    #[error("rational centers are not supported by the decomposition")]
    RationalCenter,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum OrdRel {
    Eq,
    /// `ord(z - c) < k`
    Lt,
    /// `k < ord(z - c)`
    Gt,
}

#[derive(Debug, Clone)]
enum AtomKind {
    Ord { center: usize, rel: OrdRel, bound: i64 },
    Ac { center: usize, residue: i64 },
}

/// Signature of an atom's truth on a piece: decided, or conditional on the
/// leading digit.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum AtomTruth {
    Decided(bool),
    /// True exactly when the leading digit equals the target.
    XiEq(i64),
}

fn match_diff(t: &Term, zname: &str, centers: &[VfConst]) -> Result<usize, DecomposeError> {
    let center = match t {
        Term::Var(v) if v.name == zname => VfConst::poly(IntPoly::zero()),
        Term::Bin(crate::lang::RingOp::Sub, a, b) => match (&**a, &**b) {
            (Term::Var(v), Term::VfConst(c)) if v.name == zname => c.clone(),
            _ => {
                return Err(DecomposeError::OutsideFragment(crate::lang::print_term(t)))
            }
        },
        _ => return Err(DecomposeError::OutsideFragment(crate::lang::print_term(t))),
    };
    if center.denom != 1 {
        return Err(DecomposeError::RationalCenter);
    }
    centers
        .iter()
        .position(|c| *c == center)
        .ok_or_else(|| DecomposeError::UnknownCenter(format!("{}", center.poly)))
}

fn classify_atom(
    rel: Rel,
    a: &Term,
    b: &Term,
    zname: &str,
    centers: &[VfConst],
) -> Result<AtomKind, DecomposeError> {
    let fail = || {
        DecomposeError::OutsideFragment(crate::lang::print_formula(&Formula::Atom(
            rel,
            a.clone(),
            b.clone(),
        )))
    };
    match (rel, a, b) {
        (Rel::Eq, Term::Ord(t), Term::VgConst(k)) | (Rel::Eq, Term::VgConst(k), Term::Ord(t)) => {
            Ok(AtomKind::Ord { center: match_diff(t, zname, centers)?, rel: OrdRel::Eq, bound: *k })
        }
        (Rel::Lt, Term::Ord(t), Term::VgConst(k)) => {
            Ok(AtomKind::Ord { center: match_diff(t, zname, centers)?, rel: OrdRel::Lt, bound: *k })
        }
        (Rel::Lt, Term::VgConst(k), Term::Ord(t)) => {
            Ok(AtomKind::Ord { center: match_diff(t, zname, centers)?, rel: OrdRel::Gt, bound: *k })
        }
        (Rel::Eq, Term::Ac(t), Term::RfConst(r)) | (Rel::Eq, Term::RfConst(r), Term::Ac(t)) => {
            Ok(AtomKind::Ac { center: match_diff(t, zname, centers)?, residue: *r })
        }
        _ => Err(fail()),
    }
}

fn collect_atoms(
    f: &Formula,
    zname: &str,
    centers: &[VfConst],
    out: &mut Vec<AtomKind>,
) -> Result<(), DecomposeError> {
    match f {
        Formula::Atom(rel, a, b) => {
            out.push(classify_atom(*rel, a, b, zname, centers)?);
            Ok(())
        }
        Formula::Not(g) => collect_atoms(g, zname, centers, out),
        Formula::And(a, b) | Formula::Or(a, b) | Formula::Implies(a, b) | Formula::Iff(a, b) => {
            collect_atoms(a, zname, centers, out)?;
            collect_atoms(b, zname, centers, out)
        }
        Formula::Quant(..) => Err(DecomposeError::OutsideFragment(
            crate::lang::print_formula(f),
        )),
    }
}

/// Evaluate the boolean structure given per-atom truth values, in the same
/// order `collect_atoms` produced them.
fn eval_bool(f: &Formula, truth: &[bool], next: &mut usize) -> bool {
    match f {
        Formula::Atom(..) => {
            let v = truth[*next];
            *next += 1;
            v
        }
        Formula::Not(g) => !eval_bool(g, truth, next),
        Formula::And(a, b) => {
            let x = eval_bool(a, truth, next);
            let y = eval_bool(b, truth, next);
            x && y
        }
        Formula::Or(a, b) => {
            let x = eval_bool(a, truth, next);
            let y = eval_bool(b, truth, next);
            x || y
        }
        Formula::Implies(a, b) => {
            let x = eval_bool(a, truth, next);
            let y = eval_bool(b, truth, next);
            !x || y
        }
        Formula::Iff(a, b) => {
            let x = eval_bool(a, truth, next);
            let y = eval_bool(b, truth, next);
            x == y
        }
        Formula::Quant(..) => unreachable!("rejected by collect_atoms"),
    }
}

#[derive(Debug, Clone, Copy)]
enum Piece {
    At(i64),
    Range(i64, i64),
    Tail(i64),
}

impl Piece {
    fn min(&self) -> i64 {
        match *self {
            Piece::At(a) | Piece::Range(a, _) | Piece::Tail(a) => a,
        }
    }
    fn max(&self) -> Option<i64> {
        match *self {
            Piece::At(a) => Some(a),
            Piece::Range(_, b) => Some(b),
            Piece::Tail(_) => None,
        }
    }

    /// Truth of `alpha ⋈ k` across the whole piece, when constant.
    fn compare(&self, rel: OrdRel, k: i64) -> Option<bool> {
        let lo = self.min();
        let hi = self.max();
        match rel {
            OrdRel::Eq => match (hi, lo) {
                (Some(h), l) if l == h => Some(l == k),
                _ => {
                    if hi.map(|h| h < k).unwrap_or(false) || lo > k {
                        Some(false)
                    } else {
                        None
                    }
                }
            },
            OrdRel::Lt => {
                if hi.map(|h| h < k).unwrap_or(false) {
                    Some(true)
                } else if lo >= k {
                    Some(false)
                } else {
                    None
                }
            }
            OrdRel::Gt => {
                if lo > k {
                    Some(true)
                } else if hi.map(|h| h <= k).unwrap_or(false) {
                    Some(false)
                } else {
                    None
                }
            }
        }
    }
}

/// Decompose the solution set of `f` within `ord z >= v0` into disjoint
/// cells addressed by the closest center.
pub fn decompose_fragment(
    f: &Formula,
    centers: &[VfConst],
    v0: i64,
) -> Result<CellComplex, DecomposeError> {
    let fv = free_variables(f);
    if fv.vf.len() != 1 || !fv.rf.is_empty() || !fv.vg.is_empty() {
        return Err(DecomposeError::WrongVariables);
    }
    let zname = fv.vf[0].clone();
    let mut atoms = Vec::new();
    collect_atoms(f, &zname, centers, &mut atoms)?;

    // pairwise generic data
    let n = centers.len();
    let mut dist = vec![vec![0i64; n]; n];
    let mut lead = vec![vec![0i64; n]; n];
    let mut max_abs: i64 = 1;
    for i in 0..n {
        if centers[i].denom != 1 {
            return Err(DecomposeError::RationalCenter);
        }
        let ci_ord = centers[i].poly.t_order().map(|k| k as i64);
        if let Some(o) = ci_ord {
            if o < v0 {
                return Err(DecomposeError::CenterOutsideBox(i, v0));
            }
        }
        for j in 0..n {
            if i == j {
                continue;
            }
            let diff = centers[i].poly.sub(&centers[j].poly);
            let Some(k) = diff.t_order() else {
                return Err(DecomposeError::DuplicateCenters(i.min(j), i.max(j)));
            };
            dist[i][j] = k as i64;
            lead[i][j] = diff.leading_t_coeff().unwrap();
            max_abs = max_abs.max(diff.max_abs_coeff());
        }
    }
    for a in &atoms {
        if let AtomKind::Ac { residue, .. } = a {
            max_abs = max_abs.max(residue.abs());
        }
    }
    let min_p = (2 * max_abs + 1).max(3) as u64;

    let mut cells = Vec::new();

    for i in 0..n {
        // shells of center i start strictly below every earlier center's
        // separation, and within the box
        let lo = (0..i)
            .map(|j| dist[i][j] + 1)
            .max()
            .unwrap_or(i64::MIN)
            .max(v0);
        // critical orders: separations to later centers, atom bounds
        let mut criticals: Vec<i64> = Vec::new();
        for j in 0..n {
            if j != i && dist[i][j] >= lo {
                criticals.push(dist[i][j]);
            }
        }
        for a in &atoms {
            if let AtomKind::Ord { bound, .. } = a {
                for k in [bound - 1, *bound, bound + 1] {
                    if k >= lo {
                        criticals.push(k);
                    }
                }
            }
        }
        criticals.sort_unstable();
        criticals.dedup();

        let mut pieces = Vec::new();
        let mut cursor = lo;
        for &c in &criticals {
            if c > cursor {
                pieces.push(Piece::Range(cursor, c - 1));
            }
            pieces.push(Piece::At(c));
            cursor = c + 1;
        }
        pieces.push(Piece::Tail(cursor));

        for piece in pieces {
            emit_shell_cells(
                f, &atoms, centers, &dist, &lead, i, piece, &mut cells,
            );
        }

        // the point fiber z = c_i
        if centers[i]
            .poly
            .t_order()
            .map(|o| o as i64 >= v0)
            .unwrap_or(v0 <= 0 || centers[i].poly.is_zero())
        {
            let truth: Vec<bool> = atoms
                .iter()
                .map(|a| atom_truth_at_center(a, i, &dist, &lead))
                .collect();
            let mut next = 0;
            if eval_bool(f, &truth, &mut next) {
                cells.push(Cell {
                    base: CellBase::default(),
                    coords: vec![CellCoord::point(centers[i].clone())],
                });
            }
        }
    }

    Ok(CellComplex {
        vf_vars: vec![zname],
        cells,
        ambient: Some(f.clone()),
        min_p,
    })
}

/// Truth of an atom at the exact point `z = c_i` (generic in p).
fn atom_truth_at_center(a: &AtomKind, i: usize, dist: &[Vec<i64>], lead: &[Vec<i64>]) -> bool {
    match a {
        AtomKind::Ord { center, rel, bound } => {
            if *center == i {
                // ord 0 is the infinity sentinel
                match rel {
                    OrdRel::Eq => false,
                    OrdRel::Lt => false,
                    OrdRel::Gt => true,
                }
            } else {
                let d = dist[i][*center];
                match rel {
                    OrdRel::Eq => d == *bound,
                    OrdRel::Lt => d < *bound,
                    OrdRel::Gt => d > *bound,
                }
            }
        }
        AtomKind::Ac { center, residue } => {
            if *center == i {
                // ac(0) = 0
                *residue == 0
            } else {
                lead[i][*center] == *residue
            }
        }
    }
}

fn emit_shell_cells(
    f: &Formula,
    atoms: &[AtomKind],
    centers: &[VfConst],
    dist: &[Vec<i64>],
    lead: &[Vec<i64>],
    i: usize,
    piece: Piece,
    cells: &mut Vec<Cell>,
) {
    // validity exclusions: on a shell at exactly the separation to a later
    // center, a cancelling leading digit would hand the point to that center
    let mut exclusions: Vec<i64> = Vec::new();
    if let Piece::At(a) = piece {
        for (j, row) in dist[i].iter().enumerate() {
            if j > i && *row == a {
                let excluded = -lead[i][j];
                if excluded != 0 {
                    exclusions.push(excluded);
                } else {
                    // leading digits are nonzero, so a zero exclusion never
                    // bites
                }
            }
        }
    }
    exclusions.sort_unstable();
    exclusions.dedup();

    // per-atom symbolic truth on this piece
    let mut truths: Vec<AtomTruth> = Vec::with_capacity(atoms.len());
    for a in atoms {
        let t = match a {
            AtomKind::Ord { center, rel, bound } => {
                let value_is_alpha = *center == i || {
                    let d = dist[i][*center];
                    piece.max().map(|hi| hi < d).unwrap_or(false)
                };
                if value_is_alpha {
                    match piece.compare(*rel, *bound) {
                        Some(b) => AtomTruth::Decided(b),
                        None => unreachable!("pieces never straddle atom bounds"),
                    }
                } else {
                    let d = dist[i][*center];
                    if piece.min() > d {
                        // ord(z - c_j) is the constant separation
                        AtomTruth::Decided(match rel {
                            OrdRel::Eq => d == *bound,
                            OrdRel::Lt => d < *bound,
                            OrdRel::Gt => d > *bound,
                        })
                    } else {
                        // piece sits at the separation: ord is alpha = d
                        AtomTruth::Decided(match rel {
                            OrdRel::Eq => d == *bound,
                            OrdRel::Lt => d < *bound,
                            OrdRel::Gt => d > *bound,
                        })
                    }
                }
            }
            AtomKind::Ac { center, residue } => {
                if *center == i {
                    if *residue == 0 {
                        AtomTruth::Decided(false)
                    } else {
                        AtomTruth::XiEq(*residue)
                    }
                } else {
                    let d = dist[i][*center];
                    if piece.max().map(|hi| hi < d).unwrap_or(false) {
                        // below the separation the difference keeps z's digit
                        if *residue == 0 {
                            AtomTruth::Decided(false)
                        } else {
                            AtomTruth::XiEq(*residue)
                        }
                    } else if piece.min() > d {
                        AtomTruth::Decided(lead[i][*center] == *residue)
                    } else {
                        // at the separation: digit shifts by the leading
                        // coefficient of the center difference
                        let target = residue - lead[i][*center];
                        if target == 0 {
                            AtomTruth::Decided(false)
                        } else {
                            AtomTruth::XiEq(target)
                        }
                    }
                }
            }
        };
        truths.push(t);
    }

    // distinct digit targets among the conditional atoms
    let mut targets: Vec<i64> = truths
        .iter()
        .filter_map(|t| match t {
            AtomTruth::XiEq(v) => Some(*v),
            _ => None,
        })
        .collect();
    targets.sort_unstable();
    targets.dedup();

    // digit cases: pinned to one target, or avoiding all of them
    let mut cases: Vec<Option<i64>> = targets.iter().map(|&t| Some(t)).collect();
    cases.push(None);

    for digit_case in cases {
        if let Some(t) = digit_case {
            if exclusions.contains(&t) {
                continue;
            }
        }
        let truth: Vec<bool> = truths
            .iter()
            .map(|t| match t {
                AtomTruth::Decided(b) => *b,
                AtomTruth::XiEq(v) => digit_case == Some(*v),
            })
            .collect();
        let mut next = 0;
        if !eval_bool(f, &truth, &mut next) {
            continue;
        }
        let (vg_params, order) = match piece {
            Piece::At(a) => (vec![], VgAffine::constant(a)),
            Piece::Range(a, b) => (
                vec![("a".to_string(), VgRange::Interval(a, b))],
                VgAffine::param(0),
            ),
            Piece::Tail(a) => (
                vec![("a".to_string(), VgRange::From(a))],
                VgAffine::param(0),
            ),
        };
        // an unconstrained leading digit needs no parameter at all
        if digit_case.is_none() && targets.is_empty() && exclusions.is_empty() {
            cells.push(Cell {
                base: CellBase { rf_params: vec![], vg_params, constraint: None },
                coords: vec![CellCoord::ball(centers[i].clone(), order, RfSpec::Any)],
            });
            continue;
        }
        let mut constraint_parts: Vec<Formula> = Vec::new();
        let xi_var = || Term::var("xi", Sort::ResidueField);
        match digit_case {
            Some(t) => constraint_parts.push(Formula::eq(xi_var(), Term::RfConst(t))),
            None => {
                for &t in &targets {
                    constraint_parts
                        .push(Formula::not(Formula::eq(xi_var(), Term::RfConst(t))));
                }
                for &e in &exclusions {
                    if !targets.contains(&e) {
                        constraint_parts
                            .push(Formula::not(Formula::eq(xi_var(), Term::RfConst(e))));
                    }
                }
            }
        }
        let base = CellBase {
            rf_params: vec!["xi".to_string()],
            vg_params,
            constraint: if constraint_parts.is_empty() {
                None
            } else {
                Some(Formula::conj(constraint_parts))
            },
        };
        cells.push(Cell {
            base,
            coords: vec![CellCoord::ball(centers[i].clone(), order, RfSpec::Var(0))],
        });
    }
}
