//! Exact truncated arithmetic for the two families of local fields and
//! their unramified extensions.

pub mod config;
pub mod element;
pub mod ext;
pub mod hensel;
pub mod residue;

pub use config::{CharKind, ConfigError, FieldConfig, DEFAULT_PRECISION};
pub use element::{FieldElement, FieldError, LocalField, Valuation};
pub use ext::{ExtElement, ExtField, ExtResidue};
pub use hensel::{hensel_lift, poly_eval};

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::IntPoly;

    fn k(chark: CharKind, p: u64) -> LocalField {
        LocalField::new(FieldConfig::base(chark, p, 8).unwrap())
    }

    /// Assert two elements agree: exactly equal, or indistinguishable to at
    /// least `min` digits when truncation is involved.
    fn assert_agree(f: &LocalField, a: &FieldElement, b: &FieldElement, min: i64) {
        match f.ord(&f.sub(a, b)) {
            Valuation::Infinity => {}
            Valuation::AtLeast(bound) => {
                assert!(bound >= min, "agreement only certified below {bound}")
            }
            Valuation::Finite(v) => panic!("elements differ at digit {v}"),
        }
    }

    #[test]
    fn uniformizer_interpretation() {
        let f5t = k(CharKind::Positive, 5);
        let u = f5t.uniformizer();
        assert_eq!(f5t.ord(&u), Valuation::Finite(1));
        assert_eq!(f5t.ac(&u), Ok(1));

        let q5 = k(CharKind::Zero, 5);
        let five = q5.uniformizer();
        assert_eq!(q5.ord(&five), Valuation::Finite(1));
        assert_eq!(q5.ac(&five), Ok(1));
        // the uniformizer is the integer p
        assert_eq!(q5.try_eq(&five, &q5.from_int(5)), Some(true));
    }

    #[test]
    fn coefficient_map_evaluates_polynomials() {
        // 1 + t^3 in Q_5 is 1 + 125 = 126
        let q5 = k(CharKind::Zero, 5);
        let e = q5.from_poly(&IntPoly::new(vec![1, 0, 0, 1]));
        assert_eq!(q5.try_eq(&e, &q5.from_int(126)), Some(true));
        // digits of 126 = 1 + 0*5 + 0*25 + 1*125
        assert_eq!(e.digit(0), Some(1));
        assert_eq!(e.digit(1), Some(0));
        assert_eq!(e.digit(3), Some(1));
    }

    #[test]
    fn ord_and_ac_basics() {
        let f = k(CharKind::Positive, 3);
        assert_eq!(f.ord(&f.uniformizer()), Valuation::Finite(1));
        assert_eq!(f.ord(&FieldElement::Zero), Valuation::Infinity);
        assert_eq!(f.ac(&FieldElement::Zero), Ok(0));

        let q5 = k(CharKind::Zero, 5);
        let fifty = q5.from_int(50);
        assert_eq!(q5.ord(&fifty), Valuation::Finite(2));
        assert_eq!(q5.ac(&fifty), Ok(2));
    }

    #[test]
    fn product_of_one_plus_minus_t() {
        let f3 = k(CharKind::Positive, 3);
        let a = f3.from_poly(&IntPoly::new(vec![1, 1]));
        let b = f3.from_poly(&IntPoly::new(vec![1, -1]));
        let prod = f3.mul(&a, &b);
        let expected = f3.from_poly(&IntPoly::new(vec![1, 0, -1]));
        assert_eq!(f3.try_eq(&prod, &expected), Some(true));
    }

    #[test]
    fn cancellation_and_exactness() {
        let f3 = k(CharKind::Positive, 3);
        let t = f3.uniformizer();
        // exact operands cancel to exact zero
        let z = f3.add(&t, &f3.neg(&t));
        assert!(z.is_zero());
        // inexact cancellation only exhausts precision
        let inexact = f3.invert(&f3.from_poly(&IntPoly::new(vec![1, 1]))).unwrap();
        let w = f3.sub(&inexact, &inexact.clone());
        assert!(matches!(w, FieldElement::Vanishing { .. }));
    }

    #[test]
    fn char_zero_exact_subtraction() {
        let q5 = k(CharKind::Zero, 5);
        let a = q5.from_int(126);
        let b = q5.from_int(126);
        assert!(q5.sub(&a, &b).is_zero());
        // 5 - 6 = -1: complement digits 4,4,4,...
        let m = q5.sub(&q5.from_int(5), &q5.from_int(6));
        assert_eq!(m.digit(0), Some(4));
        assert_eq!(m.digit(1), Some(4));
        assert_eq!(q5.ord(&m), Valuation::Finite(0));
    }

    #[test]
    fn inverse_of_one_plus_five() {
        // 1/6 in Q_5: 6x = 1 mod 125 gives x = 21 = 1 + 4*5 + 0*25
        let q5 = k(CharKind::Zero, 5);
        let six = q5.from_int(6);
        let inv = q5.invert(&six).unwrap();
        assert_eq!(inv.digit(0), Some(1));
        assert_eq!(inv.digit(1), Some(4));
        assert_eq!(inv.digit(2), Some(0));
        assert_eq!(inv.digit(3), Some(4));
        let prod = q5.mul(&six, &inv);
        assert_eq!(q5.residue(&prod), Ok(1));
    }

    #[test]
    fn division_errors_distinguish_zero_kinds() {
        let q5 = k(CharKind::Zero, 5);
        assert_eq!(
            q5.invert(&FieldElement::Zero),
            Err(FieldError::DivisionByZero)
        );
        assert_eq!(
            q5.invert(&FieldElement::Vanishing { below: 8 }),
            Err(FieldError::PossibleZero { below: 8 })
        );
    }

    #[test]
    fn valuation_arithmetic_properties() {
        use rand::prelude::*;
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(11);
        for chark in [CharKind::Zero, CharKind::Positive] {
            let f = k(chark, 7);
            for _ in 0..200 {
                let pa = IntPoly::new((0..3).map(|_| rng.gen_range(-9..10)).collect());
                let pb = IntPoly::new((0..3).map(|_| rng.gen_range(-9..10)).collect());
                let a = f.from_poly(&pa);
                let b = f.from_poly(&pb);
                let prod = f.mul(&a, &b);
                // ord multiplies, ac multiplies
                match (f.ord(&a), f.ord(&b), f.ord(&prod)) {
                    (Valuation::Finite(x), Valuation::Finite(y), Valuation::Finite(z)) => {
                        assert_eq!(x + y, z);
                        let ac_prod = residue::mul(f.ac(&a).unwrap(), f.ac(&b).unwrap(), 7);
                        assert_eq!(f.ac(&prod).unwrap(), ac_prod);
                    }
                    (Valuation::Infinity, _, v) | (_, Valuation::Infinity, v) => {
                        assert_eq!(v, Valuation::Infinity)
                    }
                    other => panic!("unexpected {other:?}"),
                }
                // ultrametric inequality
                let sum = f.add(&a, &b);
                if let (Valuation::Finite(x), Valuation::Finite(y)) = (f.ord(&a), f.ord(&b)) {
                    match f.ord(&sum) {
                        Valuation::Finite(z) => {
                            assert!(z >= x.min(y));
                            if x != y {
                                assert_eq!(z, x.min(y));
                            }
                        }
                        Valuation::Infinity => assert_eq!(x, y),
                        Valuation::AtLeast(_) => panic!("exact inputs gave inexact sum"),
                    }
                }
            }
        }
    }

    #[test]
    fn coefficient_map_commutes_with_ring_ops() {
        use rand::prelude::*;
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(5);
        for chark in [CharKind::Zero, CharKind::Positive] {
            let f = k(chark, 5);
            for _ in 0..100 {
                let pa = IntPoly::new((0..4).map(|_| rng.gen_range(-6..7)).collect());
                let pb = IntPoly::new((0..4).map(|_| rng.gen_range(-6..7)).collect());
                let sum = f.from_poly(&pa.add(&pb));
                let sum2 = f.add(&f.from_poly(&pa), &f.from_poly(&pb));
                assert_agree(&f, &sum, &sum2, 6);
                let prod = f.from_poly(&pa.mul(&pb));
                let prod2 = f.mul(&f.from_poly(&pa), &f.from_poly(&pb));
                assert_agree(&f, &prod, &prod2, 6);
            }
        }
    }

    #[test]
    fn precision_monotonicity_of_inversion() {
        // recomputing at higher precision refines, never contradicts
        for chark in [CharKind::Zero, CharKind::Positive] {
            let lo = LocalField::new(FieldConfig::base(chark, 5, 4).unwrap());
            let hi = LocalField::new(FieldConfig::base(chark, 5, 12).unwrap());
            let target = IntPoly::new(vec![2, 3, 1]);
            let a_lo = lo.invert(&lo.from_poly(&target)).unwrap();
            let a_hi = hi.invert(&hi.from_poly(&target)).unwrap();
            for pos in 0..4 {
                assert_eq!(a_lo.digit(pos), a_hi.digit(pos));
            }
        }
    }

    #[test]
    fn rational_constants_respect_characteristic() {
        let q5 = k(CharKind::Zero, 5);
        let half = q5.from_rational(&IntPoly::constant(1), 2).unwrap();
        let two = q5.from_int(2);
        assert_eq!(q5.residue(&q5.mul(&half, &two)), Ok(1));
        assert_eq!(
            q5.from_rational(&IntPoly::constant(1), 5),
            Err(FieldError::BadDenominator { denom: 5, p: 5 })
        );
    }

    #[test]
    fn sqrt_with_even_valuation() {
        let f5 = k(CharKind::Positive, 5);
        // t^2 * (4 + t): sqrt exists with residue root 2
        let e = f5.from_poly(&IntPoly::new(vec![0, 0, 4, 1]));
        let r = f5.sqrt(&e).unwrap();
        let back = f5.mul(&r, &r);
        match f5.ord(&f5.sub(&back, &e)) {
            Valuation::AtLeast(b) => assert!(b >= 8),
            Valuation::Infinity => {}
            // truncation of the true root: disagreement only past the window
            Valuation::Finite(v) => assert!(v >= 8, "sqrt wrong at {v}"),
        }
        // odd valuation has no square root
        let t = f5.uniformizer();
        assert!(matches!(f5.sqrt(&t), Err(FieldError::NoSquareRoot { .. })));
    }
}
