//! Symbolic and brute-force volumes of cell complexes.

use super::render::{complex_formula, Render};
use super::types::{CellComplex, CoordKind, RfSpec, VgRange};
use crate::algebra::{geom_sum, AElem, AlgebraError};
use crate::constructible::{specialize_exp_fn, specialize_fn, CharacterConfig, CTerm, ConstructibleFn, CycloValue, ExpConstructibleFn, SpecializeError};
use crate::eval::{enumerate_points, Assignment, EnumerateError, EvalBox, Structure};
use crate::lang::{Formula, Term};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum MeasureError {
    #[error("value-group parameter `{0}` makes the volume diverge")]
    Divergent(String),
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
    #[error(transparent)]
    Enumerate(#[from] EnumerateError),
    #[error(transparent)]
    Specialize(#[from] SpecializeError),
    #[error("volume did not stabilize by window {max_window} ({undecided} undecided classes remain)")]
    Unstabilized { max_window: usize, undecided: u64 },
}

/// Symbolic volume: a constructible class over the point, together with a
/// closed coefficient-ring form when every residue fiber folds into a
/// polynomial count.
#[derive(Debug, Clone)]
pub struct MotivicVolume {
    pub class: ConstructibleFn,
    pub closed: Option<AElem>,
}

/// Volume of a complex under the axioms: each ball coordinate contributes
/// `L^(-order-1)`, value-group parameters sum geometrically, residue
/// parameters count as fiber classes, and point coordinates annihilate
/// their cell (dimension drop).
pub fn motivic_volume(cx: &CellComplex) -> Result<MotivicVolume, MeasureError> {
    let mut class = ConstructibleFn::zero();
    let mut closed = Some(AElem::zero());
    for cell in &cx.cells {
        if cell.has_point_coord() {
            continue;
        }
        // total exponent of L: sum over coordinates of -(order + 1)
        let mut const_exp: i64 = 0;
        let mut param_coeff = vec![0i64; cell.base.vg_params.len()];
        let mut free_digit_factors = 0u32;
        let mut rf_used = vec![false; cell.base.rf_params.len()];
        for coord in &cell.coords {
            let CoordKind::Ball { order, ac } = &coord.kind else {
                unreachable!("point coordinates were skipped")
            };
            const_exp += -(order.constant + 1);
            for &(idx, c) in &order.coeffs {
                param_coeff[idx] -= c;
            }
            match ac {
                RfSpec::Any => free_digit_factors += 1,
                RfSpec::Const(_) => {}
                RfSpec::Var(i) => rf_used[*i] = true,
            }
        }
        let mut coeff = AElem::l_power(const_exp);
        for _ in 0..free_digit_factors {
            coeff = coeff.mul(&AElem::l().sub(&AElem::one()));
        }
        for (idx, (name, range)) in cell.base.vg_params.iter().enumerate() {
            let c = param_coeff[idx];
            // sum of L^(c * l) over the range is sum of L^(-(-c) l)
            let summed = match range {
                VgRange::Interval(lo, hi) => geom_sum(-c, 0, *lo, Some(*hi))?,
                VgRange::From(lo) => {
                    if -c <= 0 {
                        return Err(MeasureError::Divergent(name.clone()));
                    }
                    geom_sum(-c, 0, *lo, None)?
                }
            };
            coeff = coeff.mul(&summed);
        }
        // residue fiber: the constraint formula (if any) plus the implicit
        // nonzero conditions on digits used as leading digits
        let mut fiber_parts: Vec<Formula> = Vec::new();
        for (i, name) in cell.base.rf_params.iter().enumerate() {
            if rf_used[i] {
                fiber_parts.push(Formula::not(Formula::eq(
                    Term::var(name.clone(), crate::lang::Sort::ResidueField),
                    Term::RfConst(0),
                )));
            }
        }
        if let Some(c) = &cell.base.constraint {
            fiber_parts.push(c.clone());
        }
        if fiber_parts.is_empty() && cell.base.rf_params.is_empty() {
            // pure coefficient term
            if let Some(acc) = closed.take() {
                closed = Some(acc.add(&coeff));
            }
            class = class.add(&ConstructibleFn::constant(coeff));
        } else {
            let fiber = if fiber_parts.is_empty() {
                Formula::eq(Term::VgConst(0), Term::VgConst(0))
            } else {
                Formula::conj(fiber_parts)
            };
            // closed form survives only for counts that are polynomial in L
            closed = match (closed, symbolic_count(cell, &rf_used)) {
                (Some(acc), Some(count)) => Some(acc.add(&coeff.mul(&count))),
                _ => None,
            };
            class = class.add(&ConstructibleFn::term(CTerm {
                rf_vars: cell.base.rf_params.clone(),
                fiber,
                coeff,
                l_exps: vec![],
                factors: vec![],
            }));
        }
    }
    Ok(MotivicVolume { class, closed })
}

/// Count the residue fiber symbolically when the constraint decomposes
/// into per-parameter equalities/disequalities with integer constants
/// (valid above the complex's minimum characteristic).
fn symbolic_count(cell: &super::types::Cell, rf_used: &[bool]) -> Option<AElem> {
    
    #[derive(Default, Clone)]
    struct ParamInfo {
        eq: Option<i64>,
        ne: Vec<i64>,
    }
    let names = &cell.base.rf_params;
    let mut info = vec![ParamInfo::default(); names.len()];
    let mut atoms = Vec::new();
    if let Some(c) = &cell.base.constraint {
        collect_rf_literals(c, &mut atoms)?;
    }
    for (positive, lhs, rhs) in atoms {
        let (name, value) = match (lhs, rhs) {
            (Term::Var(v), Term::RfConst(k)) | (Term::RfConst(k), Term::Var(v)) => (v.name, k),
            _ => return None,
        };
        let idx = names.iter().position(|n| *n == name)?;
        if positive {
            match info[idx].eq {
                Some(prev) if prev != value => return Some(AElem::zero()),
                _ => info[idx].eq = Some(value),
            }
        } else {
            info[idx].ne.push(value);
        }
    }
    let mut count = AElem::one();
    for (idx, pi) in info.iter().enumerate() {
        let mut ne = pi.ne.clone();
        if rf_used[idx] {
            ne.push(0);
        }
        ne.sort_unstable();
        ne.dedup();
        match pi.eq {
            Some(v) => {
                if ne.contains(&v) {
                    return Some(AElem::zero());
                }
                // a single admissible value (nonzero above min_p when used
                // as a leading digit)
            }
            None => {
                count = count.mul(&AElem::l().sub(&AElem::from_int(ne.len() as i64)));
            }
        }
    }
    Some(count)
}

/// Flatten a conjunction of residue (dis)equalities; `None` when the
/// constraint has any other shape.
fn collect_rf_literals(
    f: &Formula,
    out: &mut Vec<(bool, Term, Term)>,
) -> Option<()> {
    use crate::lang::Rel;
    match f {
        Formula::And(a, b) => {
            collect_rf_literals(a, out)?;
            collect_rf_literals(b, out)
        }
        Formula::Atom(Rel::Eq, a, b) => {
            out.push((true, a.clone(), b.clone()));
            Some(())
        }
        Formula::Not(inner) => match &**inner {
            Formula::Atom(Rel::Eq, a, b) => {
                out.push((false, a.clone(), b.clone()));
                Some(())
            }
            _ => None,
        },
        _ => None,
    }
}

/// Exact brute-force volume at one window, from class counting.
#[derive(Debug, Clone, PartialEq)]
pub struct PadicVolume {
    pub value: BigRational,
    pub undecided: u64,
    pub window: usize,
}

fn q_power(q: u64, e: i64) -> BigRational {
    let mut acc = BigRational::one();
    let qq = BigRational::from(BigInt::from(q));
    for _ in 0..e.unsigned_abs() {
        acc *= &qq;
    }
    if e >= 0 {
        acc
    } else {
        acc.recip()
    }
}

/// Measure of one enumeration class: the box is normalized so the full
/// integral lattice has mass one per coordinate.
fn class_measure(st: &Structure, bx: &EvalBox, f: &Formula, m: usize) -> BigRational {
    let fv = crate::lang::free_variables(f);
    let mut measure = BigRational::one();
    for name in &fv.vf {
        let v0 = bx.vf.get(name).copied().unwrap_or(0);
        measure *= q_power(st.q(), -(v0 + m as i64));
    }
    measure
}

/// Volume of the solution set of `f` in the box at window `m`.
pub fn padic_volume(
    st: &Structure,
    f: &Formula,
    bx: &EvalBox,
    m: usize,
) -> Result<PadicVolume, MeasureError> {
    let sweep = enumerate_points(st, f, bx, m)?;
    let measure = class_measure(st, bx, f, m);
    Ok(PadicVolume {
        value: measure * BigRational::from(BigInt::from(sweep.satisfied.len() as u64)),
        undecided: sweep.undecided.len() as u64,
        window: m,
    })
}

/// Sweep windows until two consecutive volumes agree exactly with no
/// undecided classes; report the stabilization window.
pub fn padic_volume_stabilized(
    st: &Structure,
    f: &Formula,
    bx: &EvalBox,
    max_window: usize,
) -> Result<(BigRational, usize), MeasureError> {
    let mut prev: Option<PadicVolume> = None;
    let mut last_undecided = 0;
    for m in 1..=max_window {
        let cur = padic_volume(st, f, bx, m)?;
        last_undecided = cur.undecided;
        if let Some(p) = &prev {
            if p.undecided == 0 && cur.undecided == 0 && p.value == cur.value {
                return Ok((cur.value, m));
            }
        }
        prev = Some(cur);
    }
    Err(MeasureError::Unstabilized { max_window, undecided: last_undecided })
}

/// Exact integral of a constructible function over a box: Riemann sum of
/// specialized values times class measures, swept to stabilization.
pub fn integrate_constructible(
    st: &Structure,
    phi: &ConstructibleFn,
    vf_vars: &[String],
    bx: &EvalBox,
    max_window: usize,
) -> Result<(BigRational, usize), MeasureError> {
    let mut prev: Option<BigRational> = None;
    for m in 1..=max_window {
        let value = integrate_once(st, phi, vf_vars, bx, m)?;
        if let Some(p) = &prev {
            if *p == value {
                return Ok((value, m));
            }
        }
        prev = Some(value);
    }
    Err(MeasureError::Unstabilized { max_window, undecided: 0 })
}

fn integrate_once(
    st: &Structure,
    phi: &ConstructibleFn,
    vf_vars: &[String],
    bx: &EvalBox,
    m: usize,
) -> Result<BigRational, MeasureError> {
    let mut total = BigRational::zero();
    let mut measure = BigRational::one();
    for name in vf_vars {
        let v0 = bx.vf.get(name).copied().unwrap_or(0);
        measure *= q_power(st.q(), -(v0 + m as i64));
    }
    sweep_box(st, vf_vars, bx, m, &mut |point| {
        let v = specialize_fn(phi, st, point)?;
        total += v * &measure;
        Ok(())
    })?;
    Ok(total)
}

/// Exact integral of an exponential constructible function.
pub fn integrate_exp_constructible(
    st: &Structure,
    phi: &ExpConstructibleFn,
    psi: &CharacterConfig,
    vf_vars: &[String],
    bx: &EvalBox,
    max_window: usize,
) -> Result<(CycloValue, usize), MeasureError> {
    let mut prev: Option<CycloValue> = None;
    for m in 1..=max_window {
        let mut total = CycloValue::zero(st.p());
        let mut measure = BigRational::one();
        for name in vf_vars {
            let v0 = bx.vf.get(name).copied().unwrap_or(0);
            measure *= q_power(st.q(), -(v0 + m as i64));
        }
        sweep_box(st, vf_vars, bx, m, &mut |point| {
            let v = specialize_exp_fn(phi, st, psi, point)?;
            total = total.add(&v.scale(&measure));
            Ok(())
        })?;
        if let Some(p) = &prev {
            if *p == total {
                return Ok((total, m));
            }
        }
        prev = Some(total);
    }
    Err(MeasureError::Unstabilized { max_window, undecided: 0 })
}

/// Iterate class representatives of the valued-field variables of a box.
fn sweep_box(
    st: &Structure,
    vf_vars: &[String],
    bx: &EvalBox,
    m: usize,
    visit: &mut dyn FnMut(&Assignment) -> Result<(), MeasureError>,
) -> Result<(), MeasureError> {
    use crate::eval::formula::next_tuple;
    use crate::eval::Value;
    let mut tuples: Vec<Vec<u64>> = vf_vars.iter().map(|_| vec![0u64; m]).collect();
    let mins: Vec<i64> = vf_vars
        .iter()
        .map(|n| bx.vf.get(n).copied().unwrap_or(0))
        .collect();
    let mut asg = Assignment::new();
    loop {
        for ((name, digits), &v0) in vf_vars.iter().zip(&tuples).zip(&mins) {
            asg.insert(name.clone(), Value::Vf(st.field.make(v0, digits, false)));
        }
        visit(&asg)?;
        let mut advanced = false;
        for t in tuples.iter_mut() {
            if next_tuple(t, st.p()) {
                advanced = true;
                break;
            }
        }
        if !advanced {
            break;
        }
    }
    Ok(())
}

/// Specialize a symbolic volume at a structure by residue counting.
pub fn specialize_volume(
    vol: &MotivicVolume,
    st: &Structure,
) -> Result<BigRational, MeasureError> {
    Ok(specialize_fn(&vol.class, st, &Assignment::new())?)
}

/// Membership formula of the complex clipped for a box at window `m`.
pub fn volume_formula(cx: &CellComplex, bx: &EvalBox, m: usize) -> Formula {
    let deepest = bx.vf.values().copied().min().unwrap_or(0);
    complex_formula(cx, deepest + m as i64 + 1, Render::Measure)
}
