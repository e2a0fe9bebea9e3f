//! Point enumeration over boxes: the concrete solution sets of formulas.

use super::formula::{next_tuple, Assignment, EvalError, Evaluator};
use super::structure::{EvalBox, Structure};
use super::value::{RfValue, TruthValue, Value, VgValue};
use crate::lang::{free_variables, Formula, Sort};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum EnumerateError {
    #[error("free variable `{0}` of sort {1} has no box entry")]
    UnboxedVariable(String, Sort),
    #[error(transparent)]
    Eval(#[from] EvalError),
}

/// One representative point of the enumeration grid.
pub type Point = Vec<(String, Value)>;

#[derive(Debug, Clone, Default)]
pub struct PointSweep {
    /// Points where the formula is decidedly true.
    pub satisfied: Vec<Point>,
    /// Points the precision could not decide.
    pub undecided: Vec<Point>,
    /// Total number of grid points visited.
    pub total: u64,
}

struct Axis {
    name: String,
    sort: Sort,
    /// For valued-field axes, the minimum valuation.
    min_val: i64,
    /// VG interval.
    lo: i64,
    hi: i64,
}

/// Enumerate representatives of the free variables of `f` over the box at
/// window `m`, classifying each as satisfied / refuted / undecided.
///
/// Valued-field representatives are class markers, not exact points: their
/// digits are known up to `ϖ^(min + m)` and unknown beyond, so a `True`
/// verdict holds for the entire class and counting them yields measures.
pub fn enumerate_points(
    st: &Structure,
    f: &Formula,
    bx: &EvalBox,
    m: usize,
) -> Result<PointSweep, EnumerateError> {
    let fv = free_variables(f);
    let mut axes = Vec::new();
    for name in &fv.vf {
        let min_val = *bx
            .vf
            .get(name)
            .ok_or_else(|| EnumerateError::UnboxedVariable(name.clone(), Sort::ValuedField))?;
        axes.push(Axis { name: name.clone(), sort: Sort::ValuedField, min_val, lo: 0, hi: 0 });
    }
    for name in &fv.rf {
        axes.push(Axis {
            name: name.clone(),
            sort: Sort::ResidueField,
            min_val: 0,
            lo: 0,
            hi: st.p() as i64 - 1,
        });
    }
    for name in &fv.vg {
        let (lo, hi) = *bx
            .vg
            .get(name)
            .ok_or_else(|| EnumerateError::UnboxedVariable(name.clone(), Sort::ValueGroup))?;
        axes.push(Axis { name: name.clone(), sort: Sort::ValueGroup, min_val: 0, lo, hi });
    }

    let grid = EvalBox { window: m, ..bx.clone() };
    let mut ev = Evaluator::new(st, &grid);
    let mut sweep = PointSweep::default();
    let mut asg: Assignment = Assignment::new();
    let p = st.p();

    // per-axis digit tuples for VF, counters for RF/VG
    let mut vf_digits: Vec<Vec<u64>> = axes
        .iter()
        .filter(|a| a.sort == Sort::ValuedField)
        .map(|_| vec![0u64; m])
        .collect();
    let mut scalars: Vec<i64> = axes
        .iter()
        .filter(|a| a.sort != Sort::ValuedField)
        .map(|a| if a.sort == Sort::ValueGroup { a.lo } else { 0 })
        .collect();

    loop {
        // materialize the assignment
        let mut vf_i = 0;
        let mut sc_i = 0;
        for axis in &axes {
            match axis.sort {
                Sort::ValuedField => {
                    let rep = st.field.make(axis.min_val, &vf_digits[vf_i], false);
                    asg.insert(axis.name.clone(), Value::Vf(rep));
                    vf_i += 1;
                }
                Sort::ResidueField => {
                    asg.insert(
                        axis.name.clone(),
                        Value::Rf(RfValue::Known(scalars[sc_i] as u64)),
                    );
                    sc_i += 1;
                }
                Sort::ValueGroup => {
                    asg.insert(axis.name.clone(), Value::Vg(VgValue::int(scalars[sc_i])));
                    sc_i += 1;
                }
            }
        }
        sweep.total += 1;
        match ev.eval(f, &mut asg)? {
            TruthValue::True => sweep
                .satisfied
                .push(axes.iter().map(|a| (a.name.clone(), asg[&a.name].clone())).collect()),
            TruthValue::Unknown => sweep
                .undecided
                .push(axes.iter().map(|a| (a.name.clone(), asg[&a.name].clone())).collect()),
            TruthValue::False => {}
        }
        // advance the mixed-radix counter
        let mut advanced = false;
        for t in vf_digits.iter_mut() {
            if next_tuple(t, p) {
                advanced = true;
                break;
            }
        }
        if !advanced {
            let mut sc_i = 0;
            for axis in axes.iter().filter(|a| a.sort != Sort::ValuedField) {
                let (reset, max) = match axis.sort {
                    Sort::ResidueField => (0, p as i64 - 1),
                    Sort::ValueGroup => (axis.lo, axis.hi),
                    Sort::ValuedField => unreachable!(),
                };
                scalars[sc_i] += 1;
                if scalars[sc_i] <= max {
                    advanced = true;
                    break;
                }
                scalars[sc_i] = reset;
                sc_i += 1;
            }
        }
        if !advanced {
            break;
        }
    }
    Ok(sweep)
}

/// Count the satisfied classes; the undecided count rides along.
pub fn count_mod(
    st: &Structure,
    f: &Formula,
    bx: &EvalBox,
    m: usize,
) -> Result<(u64, u64), EnumerateError> {
    let sweep = enumerate_points(st, f, bx, m)?;
    Ok((sweep.satisfied.len() as u64, sweep.undecided.len() as u64))
}
