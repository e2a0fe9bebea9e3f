//! Constructible functions, exact cyclotomic values, and additive
//! characters: the algebra that specializes to functions on points by
//! residue counting.

pub mod character;
pub mod cyclo;
pub mod func;

pub use character::{CharacterConfig, CharacterError};
pub use cyclo::{canonical_text, CycloValue};
pub use func::{
    specialize_exp_fn, specialize_fn, CTerm, ConstructibleFn, ExpConstructibleFn, ExpTerm,
    SpecializeError,
};

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::AElem;
    use crate::eval::{Assignment, Structure, Value};
    use crate::field::CharKind;
    use crate::lang::{parse_formula_with, Formula, Sort, Term};
    use num_bigint::BigInt;
    use num_rational::BigRational;

    fn rat(n: i64) -> BigRational {
        BigRational::from(BigInt::from(n))
    }

    /// The class counting square roots of the leading digit of `u`.
    fn square_fiber() -> CTerm {
        let fiber = parse_formula_with(
            "xi*xi = ac(u)",
            &[("xi".to_string(), Sort::ResidueField), ("u".to_string(), Sort::ValuedField)],
        )
        .unwrap();
        CTerm {
            rf_vars: vec!["xi".to_string()],
            fiber,
            coeff: AElem::one(),
            l_exps: vec![],
            factors: vec![],
        }
    }

    #[test]
    fn residue_fiber_count() {
        // [xi^2 = ac(u)] at u = 4 over the 5-adic side: two roots
        let st = Structure::base(CharKind::Zero, 5, 6).unwrap();
        let phi = ConstructibleFn::term(square_fiber());
        let mut point = Assignment::new();
        point.insert("u".into(), Value::Vf(st.field.from_int(4)));
        assert_eq!(specialize_fn(&phi, &st, &point).unwrap(), rat(2));
    }

    #[test]
    fn l_power_of_valuation() {
        // L^(ord u) at u = t^2: q^2 = 9 at p = 3
        let st = Structure::base(CharKind::Positive, 3, 6).unwrap();
        let term = CTerm {
            l_exps: vec![Term::ord(Term::var("u", Sort::ValuedField))],
            ..CTerm::constant(AElem::one())
        };
        let phi = ConstructibleFn::term(term);
        let mut point = Assignment::new();
        let t2 = st.field.shift(&st.field.one(), 2);
        point.insert("u".into(), Value::Vf(t2));
        assert_eq!(specialize_fn(&phi, &st, &point).unwrap(), rat(9));
    }

    #[test]
    fn constant_l_minus_one() {
        let st = Structure::base(CharKind::Zero, 7, 6).unwrap();
        let phi = ConstructibleFn::constant(AElem::l().sub(&AElem::one()));
        assert_eq!(specialize_fn(&phi, &st, &Assignment::new()).unwrap(), rat(6));
    }

    #[test]
    fn trivial_phases_reduce_to_plain_specialization() {
        let st = Structure::base(CharKind::Zero, 5, 6).unwrap();
        let phi = ConstructibleFn::term(square_fiber());
        let exp = phi.clone().into_exp();
        let psi = CharacterConfig::new(1);
        let mut point = Assignment::new();
        point.insert("u".into(), Value::Vf(st.field.from_int(4)));
        let plain = specialize_fn(&phi, &st, &point).unwrap();
        let with_phases = specialize_exp_fn(&exp, &st, &psi, &point).unwrap();
        assert_eq!(with_phases.as_rational(), Some(plain));
    }

    #[test]
    fn full_residue_line_with_identity_phase_vanishes() {
        // sum over all residues of zeta^xi is zero
        let st = Structure::base(CharKind::Zero, 5, 6).unwrap();
        let term = ExpTerm {
            base: CTerm {
                rf_vars: vec!["xi".to_string()],
                fiber: Formula::eq(
                    Term::var("xi", Sort::ResidueField),
                    Term::var("xi", Sort::ResidueField),
                ),
                coeff: AElem::one(),
                l_exps: vec![],
                factors: vec![],
            },
            g: None,
            xi: Some(Term::var("xi", Sort::ResidueField)),
        };
        let phi = ExpConstructibleFn { terms: vec![term] };
        let psi = CharacterConfig::new(1);
        let v = specialize_exp_fn(&phi, &st, &psi, &Assignment::new()).unwrap();
        assert!(v.is_zero());
    }

    #[test]
    fn gauss_sum_fiber_has_norm_p() {
        // fiber {(xi, eta) : eta = xi^2} weighted by zeta^eta gives the
        // quadratic Gauss sum; its norm squared is p
        let p = 5;
        let st = Structure::base(CharKind::Zero, p, 6).unwrap();
        let fiber = parse_formula_with(
            "eta = xi*xi",
            &[("eta".to_string(), Sort::ResidueField), ("xi".to_string(), Sort::ResidueField)],
        )
        .unwrap();
        let term = ExpTerm {
            base: CTerm {
                rf_vars: vec!["xi".to_string(), "eta".to_string()],
                fiber,
                coeff: AElem::one(),
                l_exps: vec![],
                factors: vec![],
            },
            g: None,
            xi: Some(Term::var("eta", Sort::ResidueField)),
        };
        let phi = ExpConstructibleFn { terms: vec![term] };
        let psi = CharacterConfig::new(1);
        let g = specialize_exp_fn(&phi, &st, &psi, &Assignment::new()).unwrap();
        assert_eq!(g.norm_squared().as_rational(), Some(rat(p as i64)));
    }

    #[test]
    fn specialization_is_additive_and_multiplicative() {
        use rand::prelude::*;
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(31);
        let st = Structure::base(CharKind::Zero, 7, 6).unwrap();
        let random_term = |rng: &mut rand_chacha::ChaCha8Rng, tag: usize| -> CTerm {
            let name = format!("x{tag}");
            let c = rng.gen_range(1..4);
            let fiber = parse_formula_with(
                &format!("{name}*{name} = #{}", rng.gen_range(0..7)),
                &[(name.clone(), Sort::ResidueField)],
            )
            .unwrap();
            CTerm {
                rf_vars: vec![name],
                fiber,
                coeff: AElem::from_int(c),
                l_exps: vec![],
                factors: vec![],
            }
        };
        for i in 0..40 {
            let a = ConstructibleFn::term(random_term(&mut rng, 2 * i));
            let b = ConstructibleFn::term(random_term(&mut rng, 2 * i + 1));
            let pt = Assignment::new();
            let va = specialize_fn(&a, &st, &pt).unwrap();
            let vb = specialize_fn(&b, &st, &pt).unwrap();
            let sum = specialize_fn(&a.add(&b), &st, &pt).unwrap();
            let prod = specialize_fn(&a.mul(&b), &st, &pt).unwrap();
            assert_eq!(sum, &va + &vb);
            assert_eq!(prod, &va * &vb);
        }
    }

    #[test]
    fn conjugate_value_against_gauss_pairing() {
        // conj(g)·g rational and symmetric: coefficient vector of g·conj(g)
        // is fixed by conjugation
        let p = 7;
        let st = Structure::base(CharKind::Positive, p, 6).unwrap();
        let fiber = parse_formula_with(
            "eta = xi*xi*xi + xi",
            &[("eta".to_string(), Sort::ResidueField), ("xi".to_string(), Sort::ResidueField)],
        )
        .unwrap();
        let term = ExpTerm {
            base: CTerm {
                rf_vars: vec!["xi".to_string(), "eta".to_string()],
                fiber,
                coeff: AElem::one(),
                l_exps: vec![],
                factors: vec![],
            },
            g: None,
            xi: Some(Term::var("eta", Sort::ResidueField)),
        };
        let phi = ExpConstructibleFn { terms: vec![term] };
        let psi = CharacterConfig::new(1);
        let g = specialize_exp_fn(&phi, &st, &psi, &Assignment::new()).unwrap();
        let paired = g.mul(&g.conj());
        assert_eq!(paired, paired.conj());
    }
}
