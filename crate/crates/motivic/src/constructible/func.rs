//! Constructible functions and their specialization by residue counting.
//!
//! A function is a finite sum of terms. Each term carries a residue-fiber
//! formula (fresh residue variables over the base), a symbolic coefficient,
//! powers `L^alpha`, and plain integer factors `alpha`; the exponential
//! variant adds a valued-field phase and a residue phase. Specializing at a
//! point of a concrete structure counts the fiber and evaluates everything
//! exactly.

use super::character::{CharacterConfig, CharacterError};
use super::cyclo::CycloValue;
use crate::algebra::{AElem, AlgebraError};
use crate::eval::{Assignment, EvalBox, EvalError, Evaluator, RfValue, Structure, TruthValue, Value};
use crate::field::FieldElement;
use crate::lang::{Formula, Term};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SpecializeError {
    #[error("fiber membership undecided at a residue point")]
    UndecidedFiber,
    #[error("integer exponent undetermined or infinite at the point")]
    UndeterminedExponent,
    #[error("valued-field phase undetermined at a fiber point")]
    UndeterminedPhase,
    #[error(transparent)]
    Eval(#[from] EvalError),
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
    #[error(transparent)]
    Character(#[from] CharacterError),
}

/// One term of a constructible function.
#[derive(Debug, Clone)]
pub struct CTerm {
    /// Fresh residue-field fiber variables.
    pub rf_vars: Vec<String>,
    /// Fiber membership formula over base variables and `rf_vars`.
    pub fiber: Formula,
    pub coeff: AElem,
    /// Value-group morphisms composed as `L^(sum)`.
    pub l_exps: Vec<Term>,
    /// Value-group morphisms composed as a plain product.
    pub factors: Vec<Term>,
}

impl CTerm {
    /// A term with a trivially true fiber and no exponents.
    pub fn constant(coeff: AElem) -> Self {
        CTerm {
            rf_vars: vec![],
            fiber: Formula::eq(crate::lang::Term::VgConst(0), crate::lang::Term::VgConst(0)),
            coeff,
            l_exps: vec![],
            factors: vec![],
        }
    }
}

#[derive(Debug, Clone, Default)]
pub struct ConstructibleFn {
    pub terms: Vec<CTerm>,
}

/// Exponential term: a constructible term with phases.
#[derive(Debug, Clone)]
pub struct ExpTerm {
    pub base: CTerm,
    /// Valued-field phase, fed to the additive character.
    pub g: Option<Term>,
    /// Residue phase, fed to the residue character.
    pub xi: Option<Term>,
}

#[derive(Debug, Clone, Default)]
pub struct ExpConstructibleFn {
    pub terms: Vec<ExpTerm>,
}

impl ConstructibleFn {
    pub fn zero() -> Self {
        ConstructibleFn { terms: vec![] }
    }

    pub fn constant(coeff: AElem) -> Self {
        ConstructibleFn { terms: vec![CTerm::constant(coeff)] }
    }

    pub fn term(t: CTerm) -> Self {
        ConstructibleFn { terms: vec![t] }
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut terms = self.terms.clone();
        terms.extend(other.terms.iter().cloned());
        ConstructibleFn { terms }
    }

    /// Product, renaming the right factor's fiber variables apart.
    pub fn mul(&self, other: &Self) -> Self {
        let mut terms = Vec::new();
        for (i, a) in self.terms.iter().enumerate() {
            for (j, b) in other.terms.iter().enumerate() {
                let mut b = b.clone();
                rename_rf_vars(&mut b, &format!("'m{i}_{j}"));
                let mut rf_vars = a.rf_vars.clone();
                rf_vars.extend(b.rf_vars.iter().cloned());
                let mut l_exps = a.l_exps.clone();
                l_exps.extend(b.l_exps.iter().cloned());
                let mut factors = a.factors.clone();
                factors.extend(b.factors.iter().cloned());
                terms.push(CTerm {
                    rf_vars,
                    fiber: Formula::and(a.fiber.clone(), b.fiber.clone()),
                    coeff: a.coeff.mul(&b.coeff),
                    l_exps,
                    factors,
                });
            }
        }
        ConstructibleFn { terms }
    }

    /// Embed as an exponential function with trivial phases.
    pub fn into_exp(self) -> ExpConstructibleFn {
        ExpConstructibleFn {
            terms: self
                .terms
                .into_iter()
                .map(|base| ExpTerm { base, g: None, xi: None })
                .collect(),
        }
    }

    /// When every term is a pure coefficient (trivial fiber, no exponents),
    /// collapse to a single symbolic value.
    pub fn as_aelem(&self) -> Option<AElem> {
        let mut acc = AElem::zero();
        for t in &self.terms {
            if !t.rf_vars.is_empty() || !t.l_exps.is_empty() || !t.factors.is_empty() {
                return None;
            }
            // fiber must be the trivial tautology used by `constant`
            if crate::lang::free_variables(&t.fiber).is_empty() {
                acc = acc.add(&t.coeff);
            } else {
                return None;
            }
        }
        Some(acc)
    }
}

fn rename_rf_vars(t: &mut CTerm, suffix: &str) {
    for name in &t.rf_vars.clone() {
        let fresh = format!("{name}{suffix}");
        rename_in_formula(&mut t.fiber, name, &fresh);
    }
    for name in t.rf_vars.iter_mut() {
        name.push_str(suffix);
    }
}

fn rename_in_formula(f: &mut Formula, from: &str, to: &str) {
    match f {
        Formula::Atom(_, a, b) => {
            rename_in_term(a, from, to);
            rename_in_term(b, from, to);
        }
        Formula::Not(g) => rename_in_formula(g, from, to),
        Formula::And(a, b) | Formula::Or(a, b) | Formula::Implies(a, b) | Formula::Iff(a, b) => {
            rename_in_formula(a, from, to);
            rename_in_formula(b, from, to);
        }
        Formula::Quant(_, v, _, body) => {
            if v.name != from {
                rename_in_formula(body, from, to);
            }
        }
    }
}

fn rename_in_term(t: &mut Term, from: &str, to: &str) {
    match t {
        Term::Var(v) => {
            if v.name == from {
                v.name = to.to_string();
            }
        }
        Term::Bin(_, a, b) => {
            rename_in_term(a, from, to);
            rename_in_term(b, from, to);
        }
        Term::Neg(a) | Term::Ord(a) | Term::Ac(a) => rename_in_term(a, from, to),
        _ => {}
    }
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

struct TermPoint {
    /// Count weight contributed by exponents and factors at the point.
    scale: BigRational,
}

fn eval_exponents(
    ev: &Evaluator,
    term: &CTerm,
    asg: &Assignment,
    q: u64,
) -> Result<TermPoint, SpecializeError> {
    let mut scale = BigRational::one();
    for alpha in &term.l_exps {
        match ev.eval_term(alpha, asg)? {
            Value::Vg(v) => match v.exact() {
                Some(n) => scale *= q_power(q, n),
                None => return Err(SpecializeError::UndeterminedExponent),
            },
            _ => return Err(SpecializeError::UndeterminedExponent),
        }
    }
    for alpha in &term.factors {
        match ev.eval_term(alpha, asg)? {
            Value::Vg(v) => match v.exact() {
                Some(n) => scale *= BigRational::from(BigInt::from(n)),
                None => return Err(SpecializeError::UndeterminedExponent),
            },
            _ => return Err(SpecializeError::UndeterminedExponent),
        }
    }
    Ok(TermPoint { scale })
}

/// Iterate over the residue fiber of a term, calling `visit` at each fiber
/// point with the extended assignment.
fn sweep_fiber(
    ev: &mut Evaluator,
    term: &CTerm,
    asg: &mut Assignment,
    mut visit: impl FnMut(&mut Evaluator, &mut Assignment) -> Result<(), SpecializeError>,
) -> Result<(), SpecializeError> {
    let p = ev.st.p();
    let n = term.rf_vars.len();
    let mut digits = vec![0u64; n];
    loop {
        for (name, &d) in term.rf_vars.iter().zip(&digits) {
            asg.insert(name.clone(), Value::Rf(RfValue::Known(d)));
        }
        match ev.eval(&term.fiber, asg)? {
            TruthValue::True => visit(ev, asg)?,
            TruthValue::False => {}
            TruthValue::Unknown => return Err(SpecializeError::UndecidedFiber),
        }
        if n == 0 || !crate::eval::formula::next_tuple(&mut digits, p) {
            break;
        }
    }
    for name in &term.rf_vars {
        asg.remove(name);
    }
    Ok(())
}

/// Specialize a constructible function at a point: count residue fibers,
/// evaluate the coefficient at `q`, and multiply the integer data in.
pub fn specialize_fn(
    phi: &ConstructibleFn,
    st: &Structure,
    point: &Assignment,
) -> Result<BigRational, SpecializeError> {
    let bx = EvalBox::new(st.field.cfg.precision);
    let mut ev = Evaluator::new(st, &bx);
    let q = st.q();
    let mut total = BigRational::zero();
    let mut asg = point.clone();
    for term in &phi.terms {
        let coeff_val = term.coeff.theta_int(q)?;
        let mut term_sum = BigRational::zero();
        sweep_fiber(&mut ev, term, &mut asg, |ev, asg| {
            let tp = eval_exponents(ev, term, asg, q)?;
            term_sum += tp.scale;
            Ok(())
        })?;
        total += coeff_val * term_sum;
    }
    Ok(total)
}

/// Specialize an exponential constructible function: the fiber points now
/// contribute character phases.
pub fn specialize_exp_fn(
    phi: &ExpConstructibleFn,
    st: &Structure,
    psi: &CharacterConfig,
    point: &Assignment,
) -> Result<CycloValue, SpecializeError> {
    let bx = EvalBox::new(st.field.cfg.precision);
    let mut ev = Evaluator::new(st, &bx);
    let q = st.q();
    let p = st.p();
    let mut total = CycloValue::zero(p);
    let mut asg = point.clone();
    for term in &phi.terms {
        let coeff_val = term.base.coeff.theta_int(q)?;
        let mut term_sum = CycloValue::zero(p);
        let g = term.g.clone();
        let xi = term.xi.clone();
        sweep_fiber(&mut ev, &term.base, &mut asg, |ev, asg| {
            let tp = eval_exponents(ev, &term.base, asg, q)?;
            let mut phase = CycloValue::one(p);
            if let Some(g) = &g {
                let e: FieldElement = match ev.eval_term(g, asg)? {
                    Value::Vf(e) => e,
                    _ => return Err(SpecializeError::UndeterminedPhase),
                };
                phase = phase.mul(&psi.eval(&ev.st.field, &e)?);
            }
            if let Some(xi) = &xi {
                match ev.eval_term(xi, asg)? {
                    Value::Rf(RfValue::Known(d)) => {
                        phase = phase.mul(&CycloValue::zeta_pow(p, d));
                    }
                    _ => return Err(SpecializeError::UndeterminedPhase),
                }
            }
            term_sum = term_sum.add(&phase.scale(&tp.scale));
            Ok(())
        })?;
        total = total.add(&term_sum.scale(&coeff_val));
    }
    Ok(total)
}
