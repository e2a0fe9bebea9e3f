//! Newton lifting of simple residue roots.

use super::element::{FieldElement, FieldError, LocalField, Valuation};

/// Evaluate a polynomial with field coefficients (lowest degree first).
pub fn poly_eval(field: &LocalField, coeffs: &[FieldElement], x: &FieldElement) -> FieldElement {
    let mut acc = FieldElement::Zero;
    for c in coeffs.iter().rev() {
        acc = field.add(&field.mul(&acc, x), c);
    }
    acc
}

/// Formal derivative.
pub fn poly_derivative(field: &LocalField, coeffs: &[FieldElement]) -> Vec<FieldElement> {
    coeffs
        .iter()
        .enumerate()
        .skip(1)
        .map(|(k, c)| field.mul(&field.from_int(k as i64), c))
        .collect()
}

/// Lift a simple residue root of an integral polynomial to the working
/// precision by Newton iteration. Requires `f(root) ≡ 0` and
/// `f'(root) ≢ 0` mod the uniformizer.
pub fn hensel_lift(
    field: &LocalField,
    coeffs: &[FieldElement],
    root: u64,
) -> Result<FieldElement, FieldError> {
    let mut x = field.from_int(root as i64);
    let f0 = poly_eval(field, coeffs, &x);
    match field.ord(&f0) {
        Valuation::Infinity | Valuation::Finite(1..) => {}
        Valuation::AtLeast(b) if b >= 1 => {}
        _ => return Err(FieldError::NoSimpleRoot { root }),
    }
    let deriv = poly_derivative(field, coeffs);
    let d0 = poly_eval(field, &deriv, &x);
    match field.ord(&d0) {
        Valuation::Finite(0) => {}
        _ => return Err(FieldError::NoSimpleRoot { root }),
    }
    // quadratic convergence; the window caps useful iterations
    let mut gained = 1i64;
    let target = field.cfg.precision as i64;
    while gained < target {
        let fx = poly_eval(field, coeffs, &x);
        if matches!(field.ord(&fx), Valuation::Infinity) {
            break;
        }
        if let Valuation::AtLeast(b) = field.ord(&fx) {
            if b >= target {
                break;
            }
        }
        let dx = poly_eval(field, &deriv, &x);
        let step = field.div(&fx, &dx)?;
        x = field.sub(&x, &step);
        gained *= 2;
    }
    Ok(x)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::config::{CharKind, FieldConfig};

    fn f5t() -> LocalField {
        LocalField::new(FieldConfig::base(CharKind::Positive, 5, 8).unwrap())
    }

    fn q5() -> LocalField {
        LocalField::new(FieldConfig::base(CharKind::Zero, 5, 8).unwrap())
    }

    #[test]
    fn lifts_square_root_of_one_plus_t() {
        let k = f5t();
        // x^2 - (1 + t), residue root 1
        let c = k.from_poly(&crate::poly::IntPoly::new(vec![1, 1]));
        let coeffs = [k.neg(&c), FieldElement::Zero, k.one()];
        let root = hensel_lift(&k, &coeffs, 1).unwrap();
        // verify the square matches to at least t^3
        let sq = k.mul(&root, &root);
        let diff = k.sub(&sq, &c);
        match k.ord(&diff) {
            Valuation::AtLeast(b) => assert!(b >= 3, "square only correct below {b}"),
            Valuation::Infinity => {}
            Valuation::Finite(v) => assert!(v >= 3, "square wrong at position {v}"),
        }
    }

    #[test]
    fn lifts_square_root_of_six() {
        let k = q5();
        let six = k.from_int(6);
        let coeffs = [k.neg(&six), FieldElement::Zero, k.one()];
        let root = hensel_lift(&k, &coeffs, 1).unwrap();
        let sq = k.mul(&root, &root);
        let diff = k.sub(&sq, &six);
        // correct mod 5^3 at the least
        match k.ord(&diff) {
            Valuation::AtLeast(b) => assert!(b >= 3),
            Valuation::Infinity => {}
            Valuation::Finite(v) => assert!(v >= 3),
        }
        // the lift starts 1 + 3*5 (16^2 = 256 = 6 + 2*125)
        assert_eq!(root.digit(0), Some(1));
        assert_eq!(root.digit(1), Some(3));
    }

    #[test]
    fn rejects_non_simple_root() {
        let k = q5();
        // x^2 - 5: residue polynomial x^2 has only the double root 0
        let five = k.from_int(5);
        let coeffs = [k.neg(&five), FieldElement::Zero, k.one()];
        assert!(matches!(
            hensel_lift(&k, &coeffs, 0),
            Err(FieldError::NoSimpleRoot { .. })
        ));
    }
}
