//! Elaboration of surface expressions into sorted core trees.
//!
//! Bound variables are declared at their binder; free variables get their
//! sorts from inline ascriptions, from an ambient context, or by inference
//! from the positions they occupy. Valued-field constant arithmetic folds
//! into a single polynomial constant.

use super::ast::{Formula, Sort, Term, Var, VfConst};
use super::parser::{fold_rat, ParseError, SExpr, SRel};
use std::collections::HashMap;

struct Env {
    free: HashMap<String, Sort>,
    bound: Vec<(String, Sort)>,
    changed: bool,
}

impl Env {
    fn lookup(&self, name: &str) -> Option<Sort> {
        self.bound
            .iter()
            .rev()
            .find(|(n, _)| n == name)
            .map(|(_, s)| *s)
            .or_else(|| self.free.get(name).copied())
    }

    fn is_bound(&self, name: &str) -> bool {
        self.bound.iter().any(|(n, _)| n == name)
    }

    fn assign(&mut self, name: &str, sort: Sort) -> Result<(), ParseError> {
        if let Some(existing) = self.lookup(name) {
            if existing != sort {
                return Err(ParseError::Sort(format!(
                    "variable `{name}` used both as {existing} and as {sort}"
                )));
            }
            return Ok(());
        }
        if self.is_bound(name) {
            unreachable!("bound variables always carry a sort");
        }
        self.free.insert(name.to_string(), sort);
        self.changed = true;
        Ok(())
    }
}

/// Does the subtree force a sort on its own?
fn infer(e: &SExpr, env: &Env) -> Option<Sort> {
    match e {
        SExpr::Lit(_) => None,
        SExpr::T | SExpr::VfLit(..) => Some(Sort::ValuedField),
        SExpr::RfLit(_) => Some(Sort::ResidueField),
        SExpr::Var(name, ascribed) => ascribed.or_else(|| env.lookup(name)),
        SExpr::Neg(a) | SExpr::Pow(a, _) => infer(a, env),
        SExpr::Add(a, b) | SExpr::Sub(a, b) | SExpr::Mul(a, b) => {
            infer(a, env).or_else(|| infer(b, env))
        }
        SExpr::Ord(_) => Some(Sort::ValueGroup),
        SExpr::Ac(_) => Some(Sort::ResidueField),
        _ => None,
    }
}

/// Record that `e` occupies a position of sort `want`.
fn push(e: &SExpr, want: Sort, env: &mut Env) -> Result<(), ParseError> {
    match e {
        SExpr::Lit(_) => Ok(()),
        SExpr::T | SExpr::VfLit(..) => Ok(()),
        SExpr::RfLit(_) => Ok(()),
        SExpr::Var(name, ascribed) => {
            if let Some(s) = ascribed {
                if *s != want {
                    return Err(ParseError::Sort(format!(
                        "variable `{name}` ascribed {s} but used as {want}"
                    )));
                }
            }
            env.assign(name, want)
        }
        SExpr::Neg(a) | SExpr::Pow(a, _) => push(a, want, env),
        SExpr::Add(a, b) | SExpr::Sub(a, b) | SExpr::Mul(a, b) => {
            push(a, want, env)?;
            push(b, want, env)
        }
        SExpr::Ord(a) | SExpr::Ac(a) => push(a, Sort::ValuedField, env),
        _ => Ok(()),
    }
}

/// One inference sweep over all atoms.
fn sweep(e: &SExpr, env: &mut Env) -> Result<(), ParseError> {
    match e {
        SExpr::Rel(rel, a, b) => {
            // ord/ac arguments are valued-field regardless of the relation
            propagate_unary_args(a, env)?;
            propagate_unary_args(b, env)?;
            match rel {
                SRel::Lt | SRel::Le | SRel::Gt | SRel::Ge => {
                    push(a, Sort::ValueGroup, env)?;
                    push(b, Sort::ValueGroup, env)
                }
                SRel::Eq | SRel::Ne => {
                    if let Some(s) = infer(a, env).or_else(|| infer(b, env)) {
                        push(a, s, env)?;
                        push(b, s, env)
                    } else {
                        Ok(())
                    }
                }
            }
        }
        SExpr::Not(a) => sweep(a, env),
        SExpr::And(a, b) | SExpr::Or(a, b) | SExpr::Implies(a, b) | SExpr::Iff(a, b) => {
            sweep(a, env)?;
            sweep(b, env)
        }
        SExpr::Quant(_, name, sort, _, body) => {
            env.bound.push((name.clone(), *sort));
            let r = sweep(body, env);
            env.bound.pop();
            r
        }
        // bare term at formula position: caught during the build phase
        _ => Ok(()),
    }
}

fn propagate_unary_args(e: &SExpr, env: &mut Env) -> Result<(), ParseError> {
    match e {
        SExpr::Ord(a) | SExpr::Ac(a) => {
            push(a, Sort::ValuedField, env)?;
            propagate_unary_args(a, env)
        }
        SExpr::Neg(a) | SExpr::Pow(a, _) => propagate_unary_args(a, env),
        SExpr::Add(a, b) | SExpr::Sub(a, b) | SExpr::Mul(a, b) => {
            propagate_unary_args(a, env)?;
            propagate_unary_args(b, env)
        }
        _ => Ok(()),
    }
}

fn build_term(e: &SExpr, want: Sort, env: &Env) -> Result<Term, ParseError> {
    if want == Sort::ValuedField {
        if let Some((poly, denom)) = fold_rat(e) {
            return Ok(Term::VfConst(VfConst::with_denom(poly, denom)));
        }
    }
    match e {
        SExpr::Lit(n) => Ok(match want {
            Sort::ValuedField => unreachable!("folded above"),
            Sort::ResidueField => Term::RfConst(*n),
            Sort::ValueGroup => Term::VgConst(*n),
        }),
        SExpr::T | SExpr::VfLit(..) => Err(ParseError::Sort(format!(
            "valued-field constant used at sort {want}"
        ))),
        SExpr::RfLit(k) => {
            if want != Sort::ResidueField {
                return Err(ParseError::Sort(format!(
                    "residue-field constant #{k} used at sort {want}"
                )));
            }
            Ok(Term::RfConst(*k))
        }
        SExpr::Var(name, _) => {
            let sort = env.lookup(name).ok_or_else(|| {
                ParseError::Sort(format!(
                    "cannot infer the sort of `{name}`; ascribe it as {name}:VF, {name}:RF, or {name}:VG"
                ))
            })?;
            if sort != want {
                return Err(ParseError::Sort(format!(
                    "variable `{name}` has sort {sort} but is used as {want}"
                )));
            }
            Ok(Term::Var(Var::new(name.clone(), sort)))
        }
        SExpr::Neg(a) => {
            let inner = build_term(a, want, env)?;
            // normal form: negation folds into constants
            Ok(match inner {
                Term::RfConst(k) => Term::RfConst(-k),
                Term::VgConst(k) => Term::VgConst(-k),
                Term::VfConst(c) => Term::VfConst(VfConst::with_denom(c.poly.neg(), c.denom)),
                other => Term::Neg(Box::new(other)),
            })
        }
        SExpr::Add(a, b) => Ok(Term::add(build_term(a, want, env)?, build_term(b, want, env)?)),
        SExpr::Sub(a, b) => Ok(Term::sub(build_term(a, want, env)?, build_term(b, want, env)?)),
        SExpr::Mul(a, b) => Ok(Term::mul(build_term(a, want, env)?, build_term(b, want, env)?)),
        SExpr::Pow(a, n) => {
            if *n == 0 {
                return Ok(match want {
                    Sort::ValuedField => Term::VfConst(VfConst::integer(1)),
                    Sort::ResidueField => Term::RfConst(1),
                    Sort::ValueGroup => Term::VgConst(1),
                });
            }
            let base = build_term(a, want, env)?;
            let mut acc = base.clone();
            for _ in 1..*n {
                acc = Term::mul(acc, base.clone());
            }
            Ok(acc)
        }
        SExpr::Ord(a) => {
            if want != Sort::ValueGroup {
                return Err(ParseError::Sort(format!("ord(..) has sort VG, used as {want}")));
            }
            Ok(Term::ord(build_term(a, Sort::ValuedField, env)?))
        }
        SExpr::Ac(a) => {
            if want != Sort::ResidueField {
                return Err(ParseError::Sort(format!("ac(..) has sort RF, used as {want}")));
            }
            Ok(Term::ac(build_term(a, Sort::ValuedField, env)?))
        }
        _ => Err(ParseError::Sort("formula used at term position".into())),
    }
}

fn build_formula(e: &SExpr, env: &mut Env) -> Result<Formula, ParseError> {
    match e {
        SExpr::Rel(rel, a, b) => {
            let sort = match rel {
                SRel::Lt | SRel::Le | SRel::Gt | SRel::Ge => Sort::ValueGroup,
                SRel::Eq | SRel::Ne => infer(a, env)
                    .or_else(|| infer(b, env))
                    // atoms built from bare integer literals default to the
                    // value group
                    .unwrap_or(Sort::ValueGroup),
            };
            let ta = build_term(a, sort, env)?;
            let tb = build_term(b, sort, env)?;
            Ok(match rel {
                SRel::Eq => Formula::eq(ta, tb),
                SRel::Ne => Formula::not(Formula::eq(ta, tb)),
                SRel::Lt => Formula::lt(ta, tb),
                SRel::Le => Formula::not(Formula::lt(tb, ta)),
                SRel::Gt => Formula::lt(tb, ta),
                SRel::Ge => Formula::not(Formula::lt(ta, tb)),
            })
        }
        SExpr::Not(a) => Ok(Formula::not(build_formula(a, env)?)),
        SExpr::And(a, b) => Ok(Formula::and(build_formula(a, env)?, build_formula(b, env)?)),
        SExpr::Or(a, b) => Ok(Formula::or(build_formula(a, env)?, build_formula(b, env)?)),
        SExpr::Implies(a, b) => Ok(Formula::Implies(
            Box::new(build_formula(a, env)?),
            Box::new(build_formula(b, env)?),
        )),
        SExpr::Iff(a, b) => Ok(Formula::Iff(
            Box::new(build_formula(a, env)?),
            Box::new(build_formula(b, env)?),
        )),
        SExpr::Quant(q, name, sort, bound, body) => {
            env.bound.push((name.clone(), *sort));
            let inner = build_formula(body, env);
            env.bound.pop();
            Ok(Formula::Quant(*q, Var::new(name.clone(), *sort), *bound, Box::new(inner?)))
        }
        _ => Err(ParseError::Sort(
            "expected a formula, found a bare term (missing relation?)".into(),
        )),
    }
}

/// Elaborate a parsed surface expression into a sorted formula.
///
/// `context` pre-declares sorts for free variables; inline ascriptions and
/// inference fill in the rest.
pub(super) fn elaborate(e: &SExpr, context: &[(String, Sort)]) -> Result<Formula, ParseError> {
    let mut env = Env {
        free: context.iter().cloned().collect(),
        bound: Vec::new(),
        changed: true,
    };
    let mut rounds = 0;
    while env.changed {
        env.changed = false;
        sweep(e, &mut env)?;
        rounds += 1;
        if rounds > 64 {
            break;
        }
    }
    let f = build_formula(e, &mut env)?;
    super::sorts::sort_check(&f).map_err(|err| ParseError::Sort(err.to_string()))?;
    Ok(f)
}
