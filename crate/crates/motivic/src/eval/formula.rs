//! Three-valued interpretation of formulas at finite precision.
//!
//! Atoms evaluate on truncated values; a quantified claim becomes `True` or
//! `False` only when every contributing class is decided from determined
//! digits alone, so refining the precision can never overturn a verdict.
//! Existential witnesses hidden inside a class are recovered by Newton
//! lifting in `certify`.

use super::structure::{EvalBox, Structure};
use super::value::{RfValue, TruthValue, Value, VgValue};
use crate::field::{residue, FieldElement, FieldError, Valuation};
use crate::lang::{BoundAnnotation, Formula, Quantifier, Rel, RingOp, Sort, Term, Var};
use std::collections::BTreeMap;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum EvalError {
    #[error("variable `{0}` has no assigned value")]
    MissingVariable(String),
    #[error("field error: {0}")]
    Field(#[from] FieldError),
    #[error("value has wrong sort for `{0}`")]
    WrongSort(String),
}

pub type Assignment = BTreeMap<String, Value>;

/// Evaluation context; collects diagnostics about unbounded quantifiers and
/// other sources of `Unknown`.
pub struct Evaluator<'a> {
    pub st: &'a Structure,
    pub bx: &'a EvalBox,
    pub diagnostics: Vec<String>,
    /// Refine undecided existential classes by Newton lifting.
    pub certify: bool,
}

impl<'a> Evaluator<'a> {
    pub fn new(st: &'a Structure, bx: &'a EvalBox) -> Self {
        Evaluator { st, bx, diagnostics: Vec::new(), certify: true }
    }

    pub fn eval_term(&self, t: &Term, asg: &Assignment) -> Result<Value, EvalError> {
        match t {
            Term::Var(v) => asg
                .get(&v.name)
                .cloned()
                .ok_or_else(|| EvalError::MissingVariable(v.name.clone())),
            Term::VfConst(c) => Ok(Value::Vf(self.st.interpret_vf_const(c)?)),
            Term::RfConst(k) => Ok(Value::Rf(RfValue::Known(self.st.interpret_rf_const(*k)))),
            Term::VgConst(n) => Ok(Value::Vg(VgValue::int(*n))),
            Term::Bin(op, a, b) => {
                let va = self.eval_term(a, asg)?;
                let vb = self.eval_term(b, asg)?;
                self.apply_bin(*op, va, vb)
            }
            Term::Neg(a) => match self.eval_term(a, asg)? {
                Value::Vf(e) => Ok(Value::Vf(self.st.field.neg(&e))),
                Value::Rf(RfValue::Known(d)) => {
                    Ok(Value::Rf(RfValue::Known(residue::sub(0, d, self.st.p()))))
                }
                Value::Rf(RfValue::Unknown) => Ok(Value::Rf(RfValue::Unknown)),
                Value::Vg(v) => Ok(Value::Vg(v.neg())),
            },
            Term::Ord(a) => {
                let e = self.expect_vf(self.eval_term(a, asg)?)?;
                Ok(Value::Vg(match self.st.field.ord(&e) {
                    Valuation::Finite(v) => VgValue::int(v),
                    Valuation::Infinity => VgValue::infinity(),
                    Valuation::AtLeast(b) => VgValue::at_least(b),
                }))
            }
            Term::Ac(a) => {
                let e = self.expect_vf(self.eval_term(a, asg)?)?;
                Ok(Value::Rf(match self.st.field.ac(&e) {
                    Ok(d) => RfValue::Known(d),
                    Err(FieldError::AcUnknown) => RfValue::Unknown,
                    Err(other) => return Err(other.into()),
                }))
            }
        }
    }

    fn expect_vf(&self, v: Value) -> Result<FieldElement, EvalError> {
        match v {
            Value::Vf(e) => Ok(e),
            _ => Err(EvalError::WrongSort("ord/ac argument".into())),
        }
    }

    fn apply_bin(&self, op: RingOp, a: Value, b: Value) -> Result<Value, EvalError> {
        let p = self.st.p();
        Ok(match (a, b) {
            (Value::Vf(x), Value::Vf(y)) => Value::Vf(match op {
                RingOp::Add => self.st.field.add(&x, &y),
                RingOp::Sub => self.st.field.sub(&x, &y),
                RingOp::Mul => self.st.field.mul(&x, &y),
            }),
            (Value::Rf(x), Value::Rf(y)) => Value::Rf(match (x, y) {
                (RfValue::Known(u), RfValue::Known(v)) => RfValue::Known(match op {
                    RingOp::Add => residue::add(u, v, p),
                    RingOp::Sub => residue::sub(u, v, p),
                    RingOp::Mul => residue::mul(u, v, p),
                }),
                // unknown residues absorb, except multiplication by zero
                (RfValue::Known(0), RfValue::Unknown) | (RfValue::Unknown, RfValue::Known(0))
                    if op == RingOp::Mul =>
                {
                    RfValue::Known(0)
                }
                _ => RfValue::Unknown,
            }),
            (Value::Vg(x), Value::Vg(y)) => Value::Vg(match op {
                RingOp::Add => x.add(y),
                RingOp::Sub => x.sub(y),
                RingOp::Mul => x.mul(y),
            }),
            _ => return Err(EvalError::WrongSort("ring operation".into())),
        })
    }

    fn eval_atom(&self, rel: Rel, a: &Term, b: &Term, asg: &Assignment) -> Result<TruthValue, EvalError> {
        let va = self.eval_term(a, asg)?;
        let vb = self.eval_term(b, asg)?;
        Ok(match (rel, va, vb) {
            (Rel::Eq, Value::Vf(x), Value::Vf(y)) => match self.st.field.try_eq(&x, &y) {
                Some(true) => TruthValue::True,
                Some(false) => TruthValue::False,
                None => TruthValue::Unknown,
            },
            (Rel::Eq, Value::Rf(x), Value::Rf(y)) => match (x, y) {
                (RfValue::Known(u), RfValue::Known(v)) => TruthValue::from_bool(u == v),
                _ => TruthValue::Unknown,
            },
            (Rel::Eq, Value::Vg(x), Value::Vg(y)) => x.eq(y),
            (Rel::Lt, Value::Vg(x), Value::Vg(y)) => x.lt(y),
            _ => return Err(EvalError::WrongSort("atom".into())),
        })
    }

    pub fn eval(&mut self, f: &Formula, asg: &mut Assignment) -> Result<TruthValue, EvalError> {
        match f {
            Formula::Atom(rel, a, b) => self.eval_atom(*rel, a, b, asg),
            Formula::Not(g) => Ok(self.eval(g, asg)?.not()),
            Formula::And(a, b) => {
                let va = self.eval(a, asg)?;
                if va == TruthValue::False {
                    return Ok(TruthValue::False);
                }
                Ok(va.and(self.eval(b, asg)?))
            }
            Formula::Or(a, b) => {
                let va = self.eval(a, asg)?;
                if va == TruthValue::True {
                    return Ok(TruthValue::True);
                }
                Ok(va.or(self.eval(b, asg)?))
            }
            Formula::Implies(a, b) => {
                let va = self.eval(a, asg)?;
                if va == TruthValue::False {
                    return Ok(TruthValue::True);
                }
                Ok(va.implies(self.eval(b, asg)?))
            }
            Formula::Iff(a, b) => Ok(self.eval(a, asg)?.iff(self.eval(b, asg)?)),
            Formula::Quant(q, var, bound, body) => self.eval_quant(*q, var, *bound, body, asg),
        }
    }

    fn eval_quant(
        &mut self,
        q: Quantifier,
        var: &Var,
        bound: Option<BoundAnnotation>,
        body: &Formula,
        asg: &mut Assignment,
    ) -> Result<TruthValue, EvalError> {
        // forall x F == not exists x not F, exactly in three-valued logic
        if q == Quantifier::Forall {
            let negated = Formula::not(body.clone());
            let inner = self.eval_quant(Quantifier::Exists, var, bound, &negated, asg)?;
            return Ok(inner.not());
        }
        let saved = asg.get(&var.name).cloned();
        let result = self.exists_sweep(var, bound, body, asg)?;
        match saved {
            Some(v) => {
                asg.insert(var.name.clone(), v);
            }
            None => {
                asg.remove(&var.name);
            }
        }
        Ok(result)
    }

    fn exists_sweep(
        &mut self,
        var: &Var,
        bound: Option<BoundAnnotation>,
        body: &Formula,
        asg: &mut Assignment,
    ) -> Result<TruthValue, EvalError> {
        match var.sort {
            Sort::ResidueField => {
                let mut acc = TruthValue::False;
                for d in 0..self.st.p() {
                    asg.insert(var.name.clone(), Value::Rf(RfValue::Known(d)));
                    acc = acc.or(self.eval(body, asg)?);
                    if acc == TruthValue::True {
                        return Ok(TruthValue::True);
                    }
                }
                Ok(acc)
            }
            Sort::ValueGroup => {
                let range = match bound {
                    Some(BoundAnnotation::Range(lo, hi)) => Some((lo, hi)),
                    Some(BoundAnnotation::MinVal(_)) | None => {
                        self.bx.vg.get(&var.name).copied()
                    }
                };
                let Some((lo, hi)) = range else {
                    self.diagnostics.push(format!(
                        "value-group quantifier over `{}` has no bound; result unknown",
                        var.name
                    ));
                    return Ok(TruthValue::Unknown);
                };
                let mut acc = TruthValue::False;
                for n in lo..=hi {
                    asg.insert(var.name.clone(), Value::Vg(VgValue::int(n)));
                    acc = acc.or(self.eval(body, asg)?);
                    if acc == TruthValue::True {
                        return Ok(TruthValue::True);
                    }
                }
                Ok(acc)
            }
            Sort::ValuedField => {
                let min_val = match bound {
                    Some(BoundAnnotation::MinVal(v)) => Some(v),
                    Some(BoundAnnotation::Range(..)) | None => self.bx.vf.get(&var.name).copied(),
                };
                let Some(min_val) = min_val else {
                    self.diagnostics.push(format!(
                        "valued-field quantifier over `{}` has no bound; result unknown",
                        var.name
                    ));
                    return Ok(TruthValue::Unknown);
                };
                let window = self.bx.window;
                let mut acc = TruthValue::False;
                let mut undecided = Vec::new();
                let mut digits = vec![0u64; window];
                loop {
                    let rep = self.st.field.make(min_val, &digits, false);
                    asg.insert(var.name.clone(), Value::Vf(rep));
                    let v = self.eval(body, asg)?;
                    if v == TruthValue::True {
                        return Ok(TruthValue::True);
                    }
                    if v == TruthValue::Unknown {
                        undecided.push(digits.clone());
                    }
                    acc = acc.or(v);
                    if !next_tuple(&mut digits, self.st.p()) {
                        break;
                    }
                }
                if acc == TruthValue::Unknown && self.certify {
                    for class in undecided {
                        if super::certify::witness_in_class(
                            self, body, var, min_val, &class, asg,
                        )? {
                            return Ok(TruthValue::True);
                        }
                    }
                }
                Ok(acc)
            }
        }
    }
}

/// Advance a little-endian digit tuple; false when the sweep wraps.
pub fn next_tuple(digits: &mut [u64], p: u64) -> bool {
    for d in digits.iter_mut() {
        *d += 1;
        if *d < p {
            return true;
        }
        *d = 0;
    }
    false
}

/// Evaluate a formula in a structure under an assignment and box.
pub fn eval_formula(
    st: &Structure,
    f: &Formula,
    asg: &Assignment,
    bx: &EvalBox,
) -> Result<TruthValue, EvalError> {
    let mut ev = Evaluator::new(st, bx);
    let mut scratch = asg.clone();
    ev.eval(f, &mut scratch)
}

/// Evaluate a term under an assignment.
pub fn eval_term(st: &Structure, t: &Term, asg: &Assignment) -> Result<Value, EvalError> {
    let bx = EvalBox::new(0);
    let ev = Evaluator::new(st, &bx);
    ev.eval_term(t, asg)
}
