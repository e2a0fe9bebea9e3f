//! Three-valued evaluation of formulas in concrete structures, with point
//! enumeration over finite boxes.

pub mod certify;
pub mod enumerate;
pub mod formula;
pub mod structure;
pub mod value;

pub use enumerate::{count_mod, enumerate_points, EnumerateError, Point, PointSweep};
pub use formula::{eval_formula, eval_term, Assignment, EvalError, Evaluator};
pub use structure::{EvalBox, Structure};
pub use value::{RfValue, TruthValue, Value, VgValue};

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::CharKind;
    use crate::lang::parse_formula;

    fn f5t() -> Structure {
        Structure::base(CharKind::Positive, 5, 8).unwrap()
    }

    fn q5() -> Structure {
        Structure::base(CharKind::Zero, 5, 8).unwrap()
    }

    #[test]
    fn term_evaluation_examples() {
        let st = f5t();
        // ord(x^2 + (1+t^3)*y) at x = t, y = 1 is 0
        let f = parse_formula("ord(x^2 + (1+t^3)*y) = 0").unwrap();
        let mut asg = Assignment::new();
        asg.insert("x".into(), Value::Vf(st.field.uniformizer()));
        asg.insert("y".into(), Value::Vf(st.field.one()));
        let bx = EvalBox::new(4);
        assert_eq!(eval_formula(&st, &f, &asg, &bx).unwrap(), TruthValue::True);

        // 2w + 1 at w = 3 is 7
        let g = parse_formula("2*w:VG + 1 = 7").unwrap();
        let mut asg = Assignment::new();
        asg.insert("w".into(), Value::Vg(VgValue::int(3)));
        assert_eq!(eval_formula(&st, &g, &asg, &bx).unwrap(), TruthValue::True);

        // ac(x) at exact zero is 0
        let h = parse_formula("ac(x) = #0").unwrap();
        let mut asg = Assignment::new();
        asg.insert("x".into(), Value::Vf(crate::field::FieldElement::Zero));
        assert_eq!(eval_formula(&st, &h, &asg, &bx).unwrap(), TruthValue::True);
    }

    #[test]
    fn existential_square_root_is_certified() {
        // a square root of 1 + t exists among integral elements
        let st = f5t();
        let f = parse_formula("exists x:VF[ord >= 0] (x*x = [1 + t])").unwrap();
        let bx = EvalBox::new(2);
        assert_eq!(
            eval_formula(&st, &f, &Assignment::new(), &bx).unwrap(),
            TruthValue::True
        );
    }

    #[test]
    fn existential_value_group_witness() {
        let st = f5t();
        let f = parse_formula("exists w:VG[0..10] (ord([t^3]) = 2*w + 1)").unwrap();
        let bx = EvalBox::new(3);
        assert_eq!(
            eval_formula(&st, &f, &Assignment::new(), &bx).unwrap(),
            TruthValue::True
        );
    }

    #[test]
    fn no_square_root_of_uniformizer() {
        // odd valuation: decidedly false at sufficient precision
        for st in [f5t(), q5()] {
            let f = parse_formula("exists x:VF[ord >= 0] (x*x = [t])").unwrap();
            let bx = EvalBox::new(3);
            assert_eq!(
                eval_formula(&st, &f, &Assignment::new(), &bx).unwrap(),
                TruthValue::False
            );
        }
    }

    #[test]
    fn unbounded_quantifier_reports_unknown() {
        let st = f5t();
        let f = parse_formula("exists x:VF (x*x = [t])").unwrap();
        let bx = EvalBox::new(2);
        let mut ev = Evaluator::new(&st, &bx);
        let mut asg = Assignment::new();
        assert_eq!(ev.eval(&f, &mut asg).unwrap(), TruthValue::Unknown);
        assert!(!ev.diagnostics.is_empty());
    }

    #[test]
    fn enumerate_annulus_classes() {
        // ord(z) >= 1 in the unit box at window 2: 3 of 9 classes mod p^2
        let st = Structure::base(CharKind::Positive, 3, 8).unwrap();
        let f = parse_formula("ord(z) >= 1").unwrap();
        let bx = EvalBox::new(2).with_vf("z", 0);
        let sweep = enumerate_points(&st, &f, &bx, 2).unwrap();
        assert_eq!(sweep.total, 9);
        assert_eq!(sweep.satisfied.len(), 3);
        assert!(sweep.undecided.is_empty());
    }

    #[test]
    fn enumerate_leading_digit_condition() {
        // ac(z) = 1 and ord(z) = 0 at window 1: exactly one class mod p
        let st = q5();
        let f = parse_formula("ac(z) = #1 & ord(z) = 0").unwrap();
        let bx = EvalBox::new(1).with_vf("z", 0);
        let (count, unknown) = count_mod(&st, &f, &bx, 1).unwrap();
        assert_eq!(count, 1);
        assert_eq!(unknown, 0);
    }

    #[test]
    fn enumerate_with_oracle_cross_check() {
        // ord(z^2 - t) >= 2 at p = 3, window 3; brute-force the residue
        // algebra independently
        let st = Structure::base(CharKind::Positive, 3, 8).unwrap();
        let f = parse_formula("ord(z*z - [t]) >= 2").unwrap();
        let bx = EvalBox::new(3).with_vf("z", 0);
        let (count, unknown) = count_mod(&st, &f, &bx, 3).unwrap();
        // oracle: z = a + b t + c t^2, z^2 - t mod t^2 has coefficients
        // (a^2, 2ab - 1); count tuples with both zero mod 3
        let mut expected = 0;
        for a in 0..3i64 {
            for b in 0..3i64 {
                for _c in 0..3i64 {
                    let c0 = (a * a).rem_euclid(3);
                    let c1 = (2 * a * b - 1).rem_euclid(3);
                    if c0 == 0 && c1 == 0 {
                        expected += 1;
                    }
                }
            }
        }
        assert_eq!(count, expected);
        assert_eq!(unknown, 0);
    }

    #[test]
    fn count_polynomial_roots_mod_p() {
        // ord(z(z-1)) >= 1 over the p-adic side: classes of 0 and 1 mod 5
        let st = q5();
        let f = parse_formula("ord(z*(z - [1])) >= 1").unwrap();
        let bx = EvalBox::new(1).with_vf("z", 0);
        let (count, unknown) = count_mod(&st, &f, &bx, 1).unwrap();
        assert_eq!(count, 2);
        assert_eq!(unknown, 0);
    }

    #[test]
    fn empty_conjunction_counts_zero() {
        let st = q5();
        let f = parse_formula("0 = 1 & ord(z) >= 0").unwrap();
        let bx = EvalBox::new(1).with_vf("z", 0);
        let (count, _) = count_mod(&st, &f, &bx, 1).unwrap();
        assert_eq!(count, 0);
    }

    #[test]
    fn decided_verdicts_are_stable_under_refinement() {
        // raising the window never overturns a decided verdict
        let st = f5t();
        let sentences = [
            "exists x:VF[ord >= 0] (x*x = [1 + t])",
            "exists x:VF[ord >= 0] (x*x = [t])",
            "exists x:VF[ord >= 0] (ord(x*x*[t]) = 5)",
            "exists x:VF[ord >= 0] (ord(x*x*[t]) = 4)",
            "forall x:VF[ord >= 0] (ord(x*x) = 0 -> ord(x) = 0)",
        ];
        for text in sentences {
            let f = parse_formula(text).unwrap();
            let mut decided: Option<TruthValue> = None;
            for m in 2..=5 {
                let bx = EvalBox::new(m);
                let v = eval_formula(&st, &f, &Assignment::new(), &bx).unwrap();
                if let Some(prev) = decided {
                    if prev.is_determined() {
                        assert_eq!(prev, v, "verdict for `{text}` flipped at window {m}");
                    }
                }
                if v.is_determined() {
                    decided = Some(v);
                }
            }
            assert!(decided.is_some(), "`{text}` never decided");
        }
    }

    #[test]
    fn universal_with_implication() {
        // every unit square is a unit
        for st in [f5t(), q5()] {
            let f = parse_formula("forall x:VF[ord >= 0] (ord(x*x) = 0 -> ord(x) = 0)").unwrap();
            let bx = EvalBox::new(2);
            assert_eq!(
                eval_formula(&st, &f, &Assignment::new(), &bx).unwrap(),
                TruthValue::True
            );
        }
    }

    #[test]
    fn residue_quantifier_sum_of_squares() {
        // every residue is a sum of two squares
        let st = Structure::base(CharKind::Zero, 7, 6).unwrap();
        let f = parse_formula("forall r:RF exists s:RF exists u:RF (s*s + u*u = r)").unwrap();
        let bx = EvalBox::new(1);
        assert_eq!(
            eval_formula(&st, &f, &Assignment::new(), &bx).unwrap(),
            TruthValue::True
        );
    }
}
