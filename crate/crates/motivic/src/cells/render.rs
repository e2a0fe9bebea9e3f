//! Rendering cells as membership formulas for the evaluator.

use super::types::{Cell, CellComplex, CoordKind, RfSpec, VgAffine, VgRange};
use crate::lang::{BoundAnnotation, Formula, Sort, Term, Var};

fn coord_diff(var: &str, center: &crate::lang::VfConst) -> Term {
    if center.poly.is_zero() && center.denom == 1 {
        Term::var(var, Sort::ValuedField)
    } else {
        Term::sub(
            Term::var(var, Sort::ValuedField),
            Term::VfConst(center.clone()),
        )
    }
}

fn affine_term(a: &VgAffine, vg_names: &[String]) -> Term {
    let mut acc = Term::VgConst(a.constant);
    for &(idx, c) in &a.coeffs {
        if c == 0 {
            continue;
        }
        let v = Term::var(vg_names[idx].clone(), Sort::ValueGroup);
        let t = if c == 1 {
            v
        } else {
            Term::mul(Term::VgConst(c), v)
        };
        acc = Term::add(acc, t);
    }
    acc
}

/// Rendering mode for cell membership.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Render {
    /// Measure-faithful: shell half-lines collapse to `ord >= lo` (absorbing
    /// the measure-zero center) so deep classes stay decidable.
    Measure,
    /// Point-exact: strict membership, suitable for partition certificates
    /// on exact sample points.
    Exact,
}

/// Membership formula of one cell. Value-group half lines are clipped at
/// `clip_hi`; in measure mode a ball family with an unconstrained leading
/// digit and a pure step-one half line renders as a plain `ord >= lo` atom,
/// which stays decidable at every precision.
pub fn cell_formula(cell: &Cell, vf_vars: &[String], clip_hi: i64, mode: Render) -> Formula {
    let vg_names: Vec<String> = cell.base.vg_params.iter().map(|(n, _)| n.clone()).collect();
    let rf_names = &cell.base.rf_params;

    // which value-group params admit the ball-shorthand
    let mut parts: Vec<Formula> = Vec::new();
    let mut used_vg = vec![false; vg_names.len()];
    let mut used_rf = vec![false; rf_names.len()];

    for (coord, var) in cell.coords.iter().zip(vf_vars) {
        let diff = coord_diff(var, &coord.center);
        match &coord.kind {
            CoordKind::Point => {
                parts.push(Formula::eq(
                    Term::var(var.clone(), Sort::ValuedField),
                    Term::VfConst(coord.center.clone()),
                ));
            }
            CoordKind::Ball { order, ac } => {
                // shorthand: when the order carries one step-one half-line
                // parameter read by no other coordinate and the leading
                // digit is free, the shell family is the ball
                // `ord >= (rest of the affine) + lo`
                let halfline_param = if mode == Render::Measure && *ac == RfSpec::Any {
                    order.coeffs.iter().find_map(|&(idx, c)| {
                        if c != 1 {
                            return None;
                        }
                        let solo_here = cell
                            .coords
                            .iter()
                            .filter(|cc| match &cc.kind {
                                CoordKind::Ball { order: o, .. } => o.coeff_of(idx) != 0,
                                CoordKind::Point => false,
                            })
                            .count()
                            == 1;
                        match cell.base.vg_params[idx].1 {
                            VgRange::From(lo) if solo_here => Some((idx, lo)),
                            _ => None,
                        }
                    })
                } else {
                    None
                };
                if let Some((idx, lo)) = halfline_param {
                    used_vg[idx] = true;
                    let rest = VgAffine {
                        constant: order.constant + lo,
                        coeffs: order
                            .coeffs
                            .iter()
                            .copied()
                            .filter(|&(i, _)| i != idx)
                            .collect(),
                    };
                    parts.push(Formula::not(Formula::lt(
                        Term::ord(diff),
                        affine_term(&rest, &vg_names),
                    )));
                    continue;
                }
                parts.push(Formula::eq(Term::ord(diff.clone()), affine_term(order, &vg_names)));
                match ac {
                    RfSpec::Any => {
                        parts.push(Formula::not(Formula::eq(
                            Term::ac(diff),
                            Term::RfConst(0),
                        )));
                    }
                    RfSpec::Const(r) => {
                        parts.push(Formula::eq(Term::ac(diff), Term::RfConst(*r)));
                    }
                    RfSpec::Var(i) => {
                        used_rf[*i] = true;
                        parts.push(Formula::eq(
                            Term::ac(diff),
                            Term::var(rf_names[*i].clone(), Sort::ResidueField),
                        ));
                        parts.push(Formula::not(Formula::eq(
                            Term::var(rf_names[*i].clone(), Sort::ResidueField),
                            Term::RfConst(0),
                        )));
                    }
                }
            }
        }
    }
    if let Some(c) = &cell.base.constraint {
        parts.push(c.clone());
    }
    let mut f = Formula::conj(parts);
    // bind the parameters, innermost first
    for (i, name) in rf_names.iter().enumerate() {
        let _ = used_rf.get(i);
        f = Formula::exists(Var::new(name.clone(), Sort::ResidueField), None, f);
    }
    for (i, (name, range)) in cell.base.vg_params.iter().enumerate() {
        if used_vg[i] && !formula_mentions(&f, name) {
            continue;
        }
        let (lo, hi) = match range {
            VgRange::Interval(lo, hi) => (*lo, *hi),
            VgRange::From(lo) => (*lo, clip_hi.max(*lo)),
        };
        f = Formula::exists(
            Var::new(name.clone(), Sort::ValueGroup),
            Some(BoundAnnotation::Range(lo, hi)),
            f,
        );
    }
    f
}

fn formula_mentions(f: &Formula, name: &str) -> bool {
    crate::lang::free_variables(f).all().any(|(n, _)| n == name)
}

/// Membership formula of the whole complex: the disjunction of its cells.
/// Measure mode omits point-fiber cells: they carry no volume, and exact
/// equality cannot be decided on class markers.
pub fn complex_formula(cx: &CellComplex, clip_hi: i64, mode: Render) -> Formula {
    let parts: Vec<Formula> = cx
        .cells
        .iter()
        .filter(|c| mode == Render::Exact || !c.has_point_coord())
        .map(|c| cell_formula(c, &cx.vf_vars, clip_hi, mode))
        .collect();
    if parts.is_empty() {
        // empty union: an unsatisfiable closed atom
        return Formula::eq(Term::VgConst(0), Term::VgConst(1));
    }
    Formula::disj(parts)
}
