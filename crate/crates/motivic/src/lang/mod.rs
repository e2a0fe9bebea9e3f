//! The three-sorted first-order language: syntax, parsing, printing,
//! sort checking.

pub mod ast;
pub mod generate;
mod infer;
mod parser;
mod printer;
mod sorts;

pub use ast::{
    free_variables, BoundAnnotation, Formula, FreeVars, Quantifier, Rel, RingOp, Sort, Term, Var,
    VfConst,
};
pub use parser::ParseError;
pub use printer::{print_formula, print_term};
pub use sorts::{sort_check, SortError};

/// Parse and elaborate a formula; free variables must be ascribed inline or
/// inferable from context.
pub fn parse_formula(text: &str) -> Result<Formula, ParseError> {
    parse_formula_with(text, &[])
}

/// Parse with pre-declared sorts for free variables.
pub fn parse_formula_with(text: &str, context: &[(String, Sort)]) -> Result<Formula, ParseError> {
    let mut p = parser::Parser::new(text)?;
    let surface = p.parse_expr_to_end()?;
    infer::elaborate(&surface, context)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn roundtrip(f: &Formula) {
        let text = print_formula(f);
        let back = parse_formula(&text)
            .unwrap_or_else(|e| panic!("reparse failed for `{text}`: {e}"));
        assert_eq!(&back, f, "round trip changed `{text}`");
    }

    #[test]
    fn parses_quantified_example() {
        let f = parse_formula(
            "forall x:VF exists w:VG (ord(x^2 + (1+t^3)*y) = 2*w + 1)",
        )
        .unwrap();
        let fv = free_variables(&f);
        assert_eq!(fv.vf, vec!["y".to_string()]);
        assert!(fv.rf.is_empty() && fv.vg.is_empty());
        sort_check(&f).unwrap();
        roundtrip(&f);
    }

    #[test]
    fn parses_closed_atom() {
        let f = parse_formula("0 = 0").unwrap();
        assert!(free_variables(&f).is_empty());
        assert_eq!(f, Formula::eq(Term::VgConst(0), Term::VgConst(0)));
        roundtrip(&f);
    }

    #[test]
    fn parses_residue_identity() {
        let f = parse_formula("ac(x) = ac(x)*#1").unwrap();
        let fv = free_variables(&f);
        assert_eq!(fv.vf, vec!["x".to_string()]);
        sort_check(&f).unwrap();
        roundtrip(&f);
    }

    #[test]
    fn infers_residue_sort_from_context() {
        // z multiplies into an ac(..) expression, so z:RF
        let f = parse_formula("ac(x^2 + (1+t^3)*y) - #5*z^3 = #0").unwrap();
        let fv = free_variables(&f);
        assert_eq!(fv.rf, vec!["z".to_string()]);
        assert_eq!(fv.vf, vec!["x".to_string(), "y".to_string()]);
        roundtrip(&f);
    }

    #[test]
    fn infers_plain_literal_in_residue_position() {
        let f = parse_formula("ac(x) = ac(x)*1").unwrap();
        sort_check(&f).unwrap();
        match &f {
            Formula::Atom(Rel::Eq, _, rhs) => match rhs {
                Term::Bin(RingOp::Mul, _, one) => assert_eq!(**one, Term::RfConst(1)),
                other => panic!("unexpected rhs {other:?}"),
            },
            other => panic!("unexpected formula {other:?}"),
        }
    }

    #[test]
    fn rejects_sort_mismatch() {
        assert!(parse_formula("ord(x) = ac(x)").is_err());
    }

    #[test]
    fn accepts_order_atoms_on_value_group_only() {
        assert!(parse_formula("ord(x) < 3").is_ok());
        assert!(parse_formula("x:VF < 3").is_err());
    }

    #[test]
    fn sugar_relations_expand() {
        let le = parse_formula("ord(x) <= 3").unwrap();
        let expected = Formula::not(Formula::lt(
            Term::VgConst(3),
            Term::ord(Term::var("x", Sort::ValuedField)),
        ));
        assert_eq!(le, expected);
        let ne = parse_formula("ord(x) != 3").unwrap();
        assert!(matches!(ne, Formula::Not(_)));
    }

    #[test]
    fn bound_annotations() {
        let f = parse_formula("exists x:VF[ord >= -1] (ord(x) = -1)").unwrap();
        match &f {
            Formula::Quant(Quantifier::Exists, v, Some(BoundAnnotation::MinVal(-1)), _) => {
                assert_eq!(v.sort, Sort::ValuedField);
            }
            other => panic!("unexpected {other:?}"),
        }
        roundtrip(&f);
        let g = parse_formula("exists w:VG[0..10] (ord(t^3) = 2*w + 1)").unwrap();
        roundtrip(&g);
    }

    #[test]
    fn rational_constants() {
        let f = parse_formula("x = 1/2").unwrap();
        match &f {
            Formula::Atom(Rel::Eq, _, Term::VfConst(c)) => {
                assert_eq!(c.denom, 2);
            }
            other => panic!("unexpected {other:?}"),
        }
        roundtrip(&f);
    }

    #[test]
    fn vf_constant_folding() {
        let f = parse_formula("x = (1 + t)*(1 - t)").unwrap();
        match &f {
            Formula::Atom(Rel::Eq, _, Term::VfConst(c)) => {
                assert_eq!(c.poly, crate::poly::IntPoly::new(vec![1, 0, -1]));
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn reports_position_on_syntax_error() {
        match parse_formula("ord(x = 0") {
            Err(ParseError::Syntax { pos, .. }) => assert_eq!(pos, 6),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn roundtrip_random_formulas() {
        for f in generate::random_formulas(0xD15C0, 100, 4) {
            sort_check(&f).unwrap();
            roundtrip(&f);
        }
    }

    #[test]
    fn sort_check_agrees_with_validator_on_random_asts() {
        // the parser never emits ill-sorted trees; mutate sorts to create
        // violations and confirm the checker rejects them
        use rand::prelude::*;
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        for f in generate::random_formulas(99, 60, 3) {
            assert!(sort_check(&f).is_ok());
            let mut broken = f.clone();
            if break_one_sort(&mut broken, &mut rng) {
                assert!(sort_check(&broken).is_err(), "mutation not caught: {broken:?}");
            }
        }
    }

    /// Flip the sort of the first variable found inside an `ord` argument,
    /// producing an ill-sorted tree (ord demands valued-field arguments).
    fn break_one_sort(f: &mut Formula, rng: &mut impl rand::Rng) -> bool {
        fn visit_term(t: &mut Term, rng: &mut impl rand::Rng) -> bool {
            match t {
                Term::Ord(a) | Term::Ac(a) => {
                    if let Term::Var(v) = a.as_mut() {
                        v.sort = if rng.gen_bool(0.5) {
                            Sort::ResidueField
                        } else {
                            Sort::ValueGroup
                        };
                        return true;
                    }
                    visit_term(a, rng)
                }
                Term::Bin(_, a, b) => visit_term(a, rng) || visit_term(b, rng),
                Term::Neg(a) => visit_term(a, rng),
                _ => false,
            }
        }
        fn visit(f: &mut Formula, rng: &mut impl rand::Rng) -> bool {
            match f {
                Formula::Atom(_, a, b) => visit_term(a, rng) || visit_term(b, rng),
                Formula::Not(g) => visit(g, rng),
                Formula::And(a, b)
                | Formula::Or(a, b)
                | Formula::Implies(a, b)
                | Formula::Iff(a, b) => visit(a, rng) || visit(b, rng),
                Formula::Quant(_, _, _, body) => visit(body, rng),
            }
        }
        visit(f, rng)
    }
}
