//! Structural sort validation.
//!
//! The parser only produces well-sorted trees, but formulas can also be built
//! programmatically; `sort_check` re-verifies every invariant from scratch.

use super::ast::{Formula, Rel, Sort, Term};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SortError {
    #[error("sort mismatch in `{context}`: {left} vs {right}")]
    Mismatch {
        context: String,
        left: Sort,
        right: Sort,
    },
    #[error("`{context}`: {op} expects a valued-field argument, got {got}")]
    BadArgument {
        context: String,
        op: &'static str,
        got: Sort,
    },
    #[error("`{context}`: relation `<` compares value-group terms only, got {got}")]
    BadOrderRelation { context: String, got: Sort },
    #[error("variable `{name}` occurs with sorts {first} and {second}")]
    InconsistentVariable {
        name: String,
        first: Sort,
        second: Sort,
    },
}

fn check_term(t: &Term, vars: &mut Vec<(String, Sort)>) -> Result<Sort, SortError> {
    match t {
        Term::Var(v) => {
            if let Some((_, s)) = vars.iter().find(|(n, _)| n == &v.name) {
                if *s != v.sort {
                    return Err(SortError::InconsistentVariable {
                        name: v.name.clone(),
                        first: *s,
                        second: v.sort,
                    });
                }
            } else {
                vars.push((v.name.clone(), v.sort));
            }
            Ok(v.sort)
        }
        Term::VfConst(_) => Ok(Sort::ValuedField),
        Term::RfConst(_) => Ok(Sort::ResidueField),
        Term::VgConst(_) => Ok(Sort::ValueGroup),
        Term::Bin(_, a, b) => {
            let sa = check_term(a, vars)?;
            let sb = check_term(b, vars)?;
            if sa != sb {
                return Err(SortError::Mismatch {
                    context: crate::lang::print_term(t),
                    left: sa,
                    right: sb,
                });
            }
            Ok(sa)
        }
        Term::Neg(a) => check_term(a, vars),
        Term::Ord(a) => {
            let s = check_term(a, vars)?;
            if s != Sort::ValuedField {
                return Err(SortError::BadArgument {
                    context: crate::lang::print_term(t),
                    op: "ord",
                    got: s,
                });
            }
            Ok(Sort::ValueGroup)
        }
        Term::Ac(a) => {
            let s = check_term(a, vars)?;
            if s != Sort::ValuedField {
                return Err(SortError::BadArgument {
                    context: crate::lang::print_term(t),
                    op: "ac",
                    got: s,
                });
            }
            Ok(Sort::ResidueField)
        }
    }
}

fn check_formula(f: &Formula, vars: &mut Vec<(String, Sort)>) -> Result<(), SortError> {
    match f {
        Formula::Atom(rel, a, b) => {
            let sa = check_term(a, vars)?;
            let sb = check_term(b, vars)?;
            if sa != sb {
                return Err(SortError::Mismatch {
                    context: crate::lang::print_formula(f),
                    left: sa,
                    right: sb,
                });
            }
            if *rel == Rel::Lt && sa != Sort::ValueGroup {
                return Err(SortError::BadOrderRelation {
                    context: crate::lang::print_formula(f),
                    got: sa,
                });
            }
            Ok(())
        }
        Formula::Not(g) => check_formula(g, vars),
        Formula::And(a, b) | Formula::Or(a, b) | Formula::Implies(a, b) | Formula::Iff(a, b) => {
            check_formula(a, vars)?;
            check_formula(b, vars)
        }
        Formula::Quant(_, v, _, body) => {
            // The bound variable shadows an outer variable of the same name.
            let saved: Vec<(String, Sort)> = vars.iter().filter(|(n, _)| n == &v.name).cloned().collect();
            vars.retain(|(n, _)| n != &v.name);
            vars.push((v.name.clone(), v.sort));
            let result = check_formula(body, vars);
            vars.retain(|(n, _)| n != &v.name);
            vars.extend(saved);
            result
        }
    }
}

/// Accepts exactly the trees obeying the sort invariants: ring operations
/// connect equal sorts, `ord`/`ac` consume valued-field terms, `<` compares
/// value-group terms, and every variable occurs with one sort per scope.
pub fn sort_check(f: &Formula) -> Result<(), SortError> {
    check_formula(f, &mut Vec::new())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lang::ast::Var;

    #[test]
    fn ord_vs_ac_mismatch() {
        // ord(x) = ac(x): value group vs residue field
        let x = || Term::var("x", Sort::ValuedField);
        let f = Formula::eq(Term::ord(x()), Term::ac(x()));
        assert!(matches!(sort_check(&f), Err(SortError::Mismatch { .. })));
    }

    #[test]
    fn lt_requires_value_group() {
        let f = Formula::lt(
            Term::var("x", Sort::ValuedField),
            Term::var("y", Sort::ValuedField),
        );
        assert!(matches!(
            sort_check(&f),
            Err(SortError::BadOrderRelation { .. })
        ));
    }

    #[test]
    fn accepts_mixed_sort_formula() {
        // ac(x^2 + (1+t^3)*y) - 5*z^3 = 0 with z:RF
        let x = || Term::var("x", Sort::ValuedField);
        let y = Term::var("y", Sort::ValuedField);
        let z = || Term::var("z", Sort::ResidueField);
        let c = Term::VfConst(crate::lang::ast::VfConst::poly(crate::poly::IntPoly::new(
            vec![1, 0, 0, 1],
        )));
        let inner = Term::add(Term::mul(x(), x()), Term::mul(c, y));
        let z3 = Term::mul(z(), Term::mul(z(), z()));
        let lhs = Term::sub(Term::ac(inner), Term::mul(Term::RfConst(5), z3));
        let f = Formula::eq(lhs, Term::RfConst(0));
        assert_eq!(sort_check(&f), Ok(()));
    }

    #[test]
    fn shadowing_allows_resorted_name() {
        // x free as VF, rebound as VG inside
        let f = Formula::and(
            Formula::eq(Term::ord(Term::var("x", Sort::ValuedField)), Term::VgConst(0)),
            Formula::exists(
                Var::new("x", Sort::ValueGroup),
                None,
                Formula::eq(Term::var("x", Sort::ValueGroup), Term::VgConst(1)),
            ),
        );
        assert_eq!(sort_check(&f), Ok(()));
    }
}
