//! Abstract syntax of the three-sorted first-order language.
//!
//! Terms and formulas carry their sorts after elaboration; the parser
//! produces fully sorted trees and every constructor-side invariant is
//! re-checkable through [`crate::lang::sort_check`].

use crate::poly::IntPoly;
use std::fmt;

/// The three sorts: valued field, residue field, value group.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug, PartialOrd, Ord)]
pub enum Sort {
    ValuedField,
    ResidueField,
    ValueGroup,
}

impl Sort {
    pub fn short(self) -> &'static str {
        match self {
            Sort::ValuedField => "VF",
            Sort::ResidueField => "RF",
            Sort::ValueGroup => "VG",
        }
    }
}

impl fmt::Display for Sort {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.short())
    }
}

/// A sorted variable.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Var {
    pub name: String,
    pub sort: Sort,
}

impl Var {
    pub fn new(name: impl Into<String>, sort: Sort) -> Self {
        Var { name: name.into(), sort }
    }
}

/// A valued-field constant: an integer polynomial in `t`, scaled by `1/denom`.
///
/// `denom` is `1` for plain polynomials. Structures whose residue
/// characteristic does not exceed `denom` refuse to interpret the constant.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct VfConst {
    pub poly: IntPoly,
    pub denom: u64,
}

impl VfConst {
    pub fn poly(poly: IntPoly) -> Self {
        VfConst { poly, denom: 1 }
    }

    pub fn integer(c: i64) -> Self {
        Self::poly(IntPoly::constant(c))
    }

    pub fn with_denom(poly: IntPoly, denom: u64) -> Self {
        assert!(denom > 0, "denominator must be positive");
        VfConst { poly, denom }
    }
}

/// Binary ring operations; each connects two children of one common sort.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub enum RingOp {
    Add,
    Sub,
    Mul,
}

/// A term of the language.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub enum Term {
    Var(Var),
    VfConst(VfConst),
    /// Residue-field constant, an integer reduced mod p per structure.
    RfConst(i64),
    VgConst(i64),
    Bin(RingOp, Box<Term>, Box<Term>),
    Neg(Box<Term>),
    /// Valuation map, valued field -> value group.
    Ord(Box<Term>),
    /// Angular component, valued field -> residue field.
    Ac(Box<Term>),
}

impl Term {
    pub fn var(name: impl Into<String>, sort: Sort) -> Self {
        Term::Var(Var::new(name, sort))
    }

    pub fn add(a: Term, b: Term) -> Self {
        Term::Bin(RingOp::Add, Box::new(a), Box::new(b))
    }

    pub fn sub(a: Term, b: Term) -> Self {
        Term::Bin(RingOp::Sub, Box::new(a), Box::new(b))
    }

    pub fn mul(a: Term, b: Term) -> Self {
        Term::Bin(RingOp::Mul, Box::new(a), Box::new(b))
    }

    pub fn ord(a: Term) -> Self {
        Term::Ord(Box::new(a))
    }

    pub fn ac(a: Term) -> Self {
        Term::Ac(Box::new(a))
    }

    /// The sort of the term, assuming it is well-sorted.
    pub fn sort(&self) -> Sort {
        match self {
            Term::Var(v) => v.sort,
            Term::VfConst(_) => Sort::ValuedField,
            Term::RfConst(_) => Sort::ResidueField,
            Term::VgConst(_) => Sort::ValueGroup,
            Term::Bin(_, a, _) => a.sort(),
            Term::Neg(a) => a.sort(),
            Term::Ord(_) => Sort::ValueGroup,
            Term::Ac(_) => Sort::ResidueField,
        }
    }
}

/// Atomic relations: equality on every sort, order on the value group only.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub enum Rel {
    Eq,
    Lt,
}

#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub enum Quantifier {
    Forall,
    Exists,
}

/// Evaluation bound attached to a quantifier.
///
/// Syntactically unbounded quantifiers parse fine; the evaluator resolves
/// their range from the ambient box or reports `Unknown`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub enum BoundAnnotation {
    /// Valued-field quantifier: enumerate over `ord >= min_val`.
    MinVal(i64),
    /// Value-group quantifier: enumerate over a closed integer interval.
    Range(i64, i64),
}

#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub enum Formula {
    Atom(Rel, Term, Term),
    Not(Box<Formula>),
    And(Box<Formula>, Box<Formula>),
    Or(Box<Formula>, Box<Formula>),
    Implies(Box<Formula>, Box<Formula>),
    Iff(Box<Formula>, Box<Formula>),
    Quant(Quantifier, Var, Option<BoundAnnotation>, Box<Formula>),
}

impl Formula {
    pub fn eq(a: Term, b: Term) -> Self {
        Formula::Atom(Rel::Eq, a, b)
    }

    pub fn lt(a: Term, b: Term) -> Self {
        Formula::Atom(Rel::Lt, a, b)
    }

    pub fn not(f: Formula) -> Self {
        Formula::Not(Box::new(f))
    }

    pub fn and(a: Formula, b: Formula) -> Self {
        Formula::And(Box::new(a), Box::new(b))
    }

    pub fn or(a: Formula, b: Formula) -> Self {
        Formula::Or(Box::new(a), Box::new(b))
    }

    pub fn conj(mut parts: Vec<Formula>) -> Self {
        let mut f = parts.pop().expect("conj of empty list");
        while let Some(g) = parts.pop() {
            f = Formula::and(g, f);
        }
        f
    }

    pub fn disj(mut parts: Vec<Formula>) -> Self {
        let mut f = parts.pop().expect("disj of empty list");
        while let Some(g) = parts.pop() {
            f = Formula::or(g, f);
        }
        f
    }

    pub fn exists(var: Var, bound: Option<BoundAnnotation>, body: Formula) -> Self {
        Formula::Quant(Quantifier::Exists, var, bound, Box::new(body))
    }

    pub fn forall(var: Var, bound: Option<BoundAnnotation>, body: Formula) -> Self {
        Formula::Quant(Quantifier::Forall, var, bound, Box::new(body))
    }
}

/// Free variables of a formula, partitioned by sort, in first free
/// occurrence order.
#[derive(Clone, PartialEq, Eq, Debug, Default)]
pub struct FreeVars {
    pub vf: Vec<String>,
    pub rf: Vec<String>,
    pub vg: Vec<String>,
}

impl FreeVars {
    pub fn is_empty(&self) -> bool {
        self.vf.is_empty() && self.rf.is_empty() && self.vg.is_empty()
    }

    pub fn all(&self) -> impl Iterator<Item = (&str, Sort)> {
        self.vf
            .iter()
            .map(|n| (n.as_str(), Sort::ValuedField))
            .chain(self.rf.iter().map(|n| (n.as_str(), Sort::ResidueField)))
            .chain(self.vg.iter().map(|n| (n.as_str(), Sort::ValueGroup)))
    }

    fn push(&mut self, var: &Var) {
        let list = match var.sort {
            Sort::ValuedField => &mut self.vf,
            Sort::ResidueField => &mut self.rf,
            Sort::ValueGroup => &mut self.vg,
        };
        if !list.iter().any(|n| n == &var.name) {
            list.push(var.name.clone());
        }
    }
}

fn term_free_vars(t: &Term, bound: &[String], out: &mut FreeVars) {
    match t {
        Term::Var(v) => {
            if !bound.iter().any(|b| b == &v.name) {
                out.push(v);
            }
        }
        Term::VfConst(_) | Term::RfConst(_) | Term::VgConst(_) => {}
        Term::Bin(_, a, b) => {
            term_free_vars(a, bound, out);
            term_free_vars(b, bound, out);
        }
        Term::Neg(a) | Term::Ord(a) | Term::Ac(a) => term_free_vars(a, bound, out),
    }
}

fn formula_free_vars(f: &Formula, bound: &mut Vec<String>, out: &mut FreeVars) {
    match f {
        Formula::Atom(_, a, b) => {
            term_free_vars(a, bound, out);
            term_free_vars(b, bound, out);
        }
        Formula::Not(g) => formula_free_vars(g, bound, out),
        Formula::And(a, b) | Formula::Or(a, b) | Formula::Implies(a, b) | Formula::Iff(a, b) => {
            formula_free_vars(a, bound, out);
            formula_free_vars(b, bound, out);
        }
        Formula::Quant(_, v, _, body) => {
            bound.push(v.name.clone());
            formula_free_vars(body, bound, out);
            bound.pop();
        }
    }
}

/// Variables with at least one free occurrence, by sort, in first-occurrence
/// order.
pub fn free_variables(f: &Formula) -> FreeVars {
    let mut out = FreeVars::default();
    formula_free_vars(f, &mut Vec::new(), &mut out);
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample() -> Formula {
        // forall x:VF exists w:VG (ord(x^2 + (1+t^3)*y) = 2*w + 1)
        let x = || Term::var("x", Sort::ValuedField);
        let y = Term::var("y", Sort::ValuedField);
        let w = || Term::var("w", Sort::ValueGroup);
        let inner = Term::add(
            Term::mul(x(), x()),
            Term::mul(Term::VfConst(VfConst::poly(crate::poly::IntPoly::new(vec![1, 0, 0, 1]))), y),
        );
        let lhs = Term::ord(inner);
        let rhs = Term::add(Term::mul(Term::VgConst(2), w()), Term::VgConst(1));
        Formula::forall(
            Var::new("x", Sort::ValuedField),
            None,
            Formula::exists(
                Var::new("w", Sort::ValueGroup),
                None,
                Formula::eq(lhs, rhs),
            ),
        )
    }

    #[test]
    fn free_vars_of_quantified_formula() {
        let fv = free_variables(&sample());
        assert_eq!(fv.vf, vec!["y".to_string()]);
        assert!(fv.rf.is_empty());
        assert!(fv.vg.is_empty());
    }

    #[test]
    fn closed_sentence_has_no_free_vars() {
        let f = Formula::eq(Term::VgConst(0), Term::VgConst(0));
        assert!(free_variables(&f).is_empty());
    }

    #[test]
    fn bound_and_free_mix() {
        // exists x:VF (ord(x - y) = w): x bound, y and w free
        let f = Formula::exists(
            Var::new("x", Sort::ValuedField),
            None,
            Formula::eq(
                Term::ord(Term::sub(
                    Term::var("x", Sort::ValuedField),
                    Term::var("y", Sort::ValuedField),
                )),
                Term::var("w", Sort::ValueGroup),
            ),
        );
        let fv = free_variables(&f);
        assert_eq!(fv.vf, vec!["y".to_string()]);
        assert_eq!(fv.vg, vec!["w".to_string()]);
    }
}
