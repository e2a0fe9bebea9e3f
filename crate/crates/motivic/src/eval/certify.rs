//! Witness certification for valued-field existentials.
//!
//! A class whose truth stayed `Unknown` may still contain an exact witness:
//! a simple root of a polynomial equation hidden below the enumeration
//! precision. Newton's criterion certifies such a root rigorously from
//! finitely many digits; the remaining conjuncts are then re-checked on the
//! refined ball around it.

use super::formula::{Assignment, EvalError, Evaluator};
use super::value::{TruthValue, Value};
use crate::field::{FieldElement, LocalField, Valuation};
use crate::lang::{Formula, Quantifier, Rel, RingOp, Sort, Term, Var};

/// Negation normal form, preserving three-valued semantics.
pub fn to_nnf(f: &Formula) -> Formula {
    match f {
        Formula::Atom(..) => f.clone(),
        Formula::And(a, b) => Formula::and(to_nnf(a), to_nnf(b)),
        Formula::Or(a, b) => Formula::or(to_nnf(a), to_nnf(b)),
        Formula::Implies(a, b) => Formula::or(to_nnf(&Formula::not((**a).clone())), to_nnf(b)),
        Formula::Iff(a, b) => {
            let a = (**a).clone();
            let b = (**b).clone();
            Formula::or(
                Formula::and(to_nnf(&a), to_nnf(&b)),
                Formula::and(
                    to_nnf(&Formula::not(a)),
                    to_nnf(&Formula::not(b)),
                ),
            )
        }
        Formula::Quant(q, v, bound, body) => {
            Formula::Quant(*q, v.clone(), *bound, Box::new(to_nnf(body)))
        }
        Formula::Not(inner) => match &**inner {
            Formula::Not(g) => to_nnf(g),
            Formula::And(a, b) => Formula::or(
                to_nnf(&Formula::not((**a).clone())),
                to_nnf(&Formula::not((**b).clone())),
            ),
            Formula::Or(a, b) => Formula::and(
                to_nnf(&Formula::not((**a).clone())),
                to_nnf(&Formula::not((**b).clone())),
            ),
            Formula::Implies(a, b) => Formula::and(
                to_nnf(a),
                to_nnf(&Formula::not((**b).clone())),
            ),
            Formula::Iff(a, b) => {
                let a = (**a).clone();
                let b = (**b).clone();
                Formula::or(
                    Formula::and(to_nnf(&a), to_nnf(&Formula::not(b.clone()))),
                    Formula::and(to_nnf(&Formula::not(a)), to_nnf(&b)),
                )
            }
            Formula::Quant(q, v, bound, body) => {
                let flipped = match q {
                    Quantifier::Forall => Quantifier::Exists,
                    Quantifier::Exists => Quantifier::Forall,
                };
                Formula::Quant(
                    flipped,
                    v.clone(),
                    *bound,
                    Box::new(to_nnf(&Formula::not((**body).clone()))),
                )
            }
            Formula::Atom(..) => f.clone(),
        },
    }
}

fn conjuncts(f: &Formula, out: &mut Vec<Formula>) {
    match f {
        Formula::And(a, b) => {
            conjuncts(a, out);
            conjuncts(b, out);
        }
        other => out.push(other.clone()),
    }
}

fn disjunction_branches(f: &Formula) -> Vec<Formula> {
    match f {
        Formula::Or(a, b) => {
            let mut v = disjunction_branches(a);
            v.extend(disjunction_branches(b));
            v
        }
        other => vec![other.clone()],
    }
}

/// Extract the coefficients of a valued-field term viewed as a polynomial
/// in `var` (valued-field terms are always polynomial in their variables).
fn term_as_poly(
    ev: &Evaluator,
    t: &Term,
    var: &Var,
    asg: &Assignment,
) -> Result<Vec<FieldElement>, EvalError> {
    let field = &ev.st.field;
    match t {
        Term::Var(v) if v.name == var.name => Ok(vec![FieldElement::Zero, field.one()]),
        Term::Var(_) | Term::VfConst(_) => match ev.eval_term(t, asg)? {
            Value::Vf(e) => Ok(vec![e]),
            _ => Err(EvalError::WrongSort("polynomial coefficient".into())),
        },
        Term::Neg(a) => Ok(term_as_poly(ev, a, var, asg)?
            .iter()
            .map(|c| field.neg(c))
            .collect()),
        Term::Bin(op, a, b) => {
            let pa = term_as_poly(ev, a, var, asg)?;
            let pb = term_as_poly(ev, b, var, asg)?;
            Ok(match op {
                RingOp::Add => poly_add(field, &pa, &pb, false),
                RingOp::Sub => poly_add(field, &pa, &pb, true),
                RingOp::Mul => poly_mul(field, &pa, &pb),
            })
        }
        // ord/ac leave the valued-field sort, so they cannot occur inside
        // a valued-field term
        _ => Err(EvalError::WrongSort("valued-field polynomial".into())),
    }
}

fn poly_add(
    field: &LocalField,
    a: &[FieldElement],
    b: &[FieldElement],
    subtract: bool,
) -> Vec<FieldElement> {
    let n = a.len().max(b.len());
    (0..n)
        .map(|i| {
            let x = a.get(i).cloned().unwrap_or(FieldElement::Zero);
            let y = b.get(i).cloned().unwrap_or(FieldElement::Zero);
            if subtract {
                field.sub(&x, &y)
            } else {
                field.add(&x, &y)
            }
        })
        .collect()
}

fn poly_mul(field: &LocalField, a: &[FieldElement], b: &[FieldElement]) -> Vec<FieldElement> {
    let mut out = vec![FieldElement::Zero; a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            let prod = field.mul(x, y);
            out[i + j] = field.add(&out[i + j], &prod);
        }
    }
    out
}

fn poly_eval(field: &LocalField, coeffs: &[FieldElement], x: &FieldElement) -> FieldElement {
    let mut acc = FieldElement::Zero;
    for c in coeffs.iter().rev() {
        acc = field.add(&field.mul(&acc, x), c);
    }
    acc
}

fn poly_derivative(field: &LocalField, coeffs: &[FieldElement]) -> Vec<FieldElement> {
    coeffs
        .iter()
        .enumerate()
        .skip(1)
        .map(|(k, c)| field.mul(&field.from_int(k as i64), c))
        .collect()
}

/// Search for a certified root of `poly` inside the class
/// `center + O(ϖ^required)`, refining at most `MAX_DEPTH` extra digits.
/// Returns the root truncated to its certified agreement window.
///
/// Newton's criterion at a refined center `x0` (`v = ord f(x0)`,
/// `w = ord f'(x0)`, `v > 2w`) guarantees a unique exact root within
/// `ϖ^(v-w)` of `x0`; the root then stays inside the original class
/// whenever `v - w >= required`.
fn newton_in_class(
    field: &LocalField,
    poly: &[FieldElement],
    min_val: i64,
    digits: &[u64],
    required: i64,
    depth: u32,
) -> Option<FieldElement> {
    const MAX_DEPTH: u32 = 3;
    let center = field.make(min_val, digits, false);
    let deriv = poly_derivative(field, poly);
    let fx = poly_eval(field, poly, &center);
    let dfx = poly_eval(field, &deriv, &center);
    if let (Valuation::Finite(v), Valuation::Finite(w)) = (field.ord(&fx), field.ord(&dfx)) {
        if v > 2 * w && v - w >= required {
            let mut x = center;
            for _ in 0..8 {
                let fx = poly_eval(field, poly, &x);
                match field.ord(&fx) {
                    Valuation::Infinity => break,
                    Valuation::AtLeast(b) if b >= field.cfg.precision as i64 => break,
                    _ => {}
                }
                let dfx = poly_eval(field, &deriv, &x);
                let step = field.div(&fx, &dfx).ok()?;
                x = field.sub(&x, &step);
            }
            // certified digits: the residual bounds the distance to the root
            let residual = poly_eval(field, poly, &x);
            let res_bound = match field.ord(&residual) {
                Valuation::Infinity => i64::MAX / 2,
                Valuation::Finite(v) => v,
                Valuation::AtLeast(b) => b,
            };
            let valid_end = res_bound - w;
            if valid_end <= required {
                return None;
            }
            return Some(field.truncate_to(&x, valid_end));
        }
    }
    if depth >= MAX_DEPTH {
        return None;
    }
    // refine one more digit and recurse within the same original class
    let mut extended = digits.to_vec();
    extended.push(0);
    for d in 0..field.p() {
        *extended.last_mut().unwrap() = d;
        if let Some(r) = newton_in_class(field, poly, min_val, &extended, required, depth + 1) {
            return Some(r);
        }
    }
    None
}

/// Try to certify that the class `min_val`-based class with the given digit
/// tuple contains an exact witness for `body` at the existential `var`.
pub fn witness_in_class(
    ev: &mut Evaluator,
    body: &Formula,
    var: &Var,
    min_val: i64,
    digits: &[u64],
    asg: &mut Assignment,
) -> Result<bool, EvalError> {
    debug_assert_eq!(var.sort, Sort::ValuedField);
    let nnf = to_nnf(body);
    for branch in disjunction_branches(&nnf) {
        if try_branch(ev, &branch, var, min_val, digits, asg)? {
            return Ok(true);
        }
    }
    Ok(false)
}

fn try_branch(
    ev: &mut Evaluator,
    branch: &Formula,
    var: &Var,
    min_val: i64,
    digits: &[u64],
    asg: &mut Assignment,
) -> Result<bool, EvalError> {
    let modulus = min_val + digits.len() as i64;
    let rep = ev.st.field.make(min_val, digits, false);
    let mut parts = Vec::new();
    conjuncts(branch, &mut parts);
    // locate an undecided polynomial equation among the conjuncts
    asg.insert(var.name.clone(), Value::Vf(rep));
    let mut equation: Option<(usize, Vec<FieldElement>)> = None;
    for (i, part) in parts.iter().enumerate() {
        let v = ev.eval(part, asg)?;
        if v == TruthValue::False {
            return Ok(false);
        }
        if v != TruthValue::Unknown {
            continue;
        }
        if equation.is_none() {
            if let Formula::Atom(Rel::Eq, lhs, rhs) = part {
                if lhs.sort() == Sort::ValuedField {
                    let pl = term_as_poly(ev, lhs, var, asg)?;
                    let pr = term_as_poly(ev, rhs, var, asg)?;
                    let poly = poly_add(&ev.st.field, &pl, &pr, true);
                    if poly.len() >= 2 {
                        equation = Some((i, poly));
                    }
                }
            }
        }
        // other undecided conjuncts may clear up on the refined ball
    }
    let Some((eq_idx, poly)) = equation else {
        return Ok(false);
    };
    let Some(witness) = newton_in_class(&ev.st.field, &poly, min_val, digits, modulus, 0) else {
        return Ok(false);
    };
    // every other conjunct must hold on the certified ball
    asg.insert(var.name.clone(), Value::Vf(witness));
    for (i, part) in parts.iter().enumerate() {
        if i == eq_idx {
            continue;
        }
        if ev.eval(part, asg)? != TruthValue::True {
            return Ok(false);
        }
    }
    Ok(true)
}
