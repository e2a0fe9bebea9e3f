//! Additive characters on the local field, with an explicit conductor
//! shift.

use super::cyclo::CycloValue;
use crate::field::{CharKind, FieldElement, FieldError, LocalField, Valuation};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CharacterError {
    #[error("character argument has undetermined digits near the conductor")]
    UndeterminedArgument,
    #[error(transparent)]
    Field(#[from] FieldError),
}

/// `psi(x) = psi0(ϖ^shift * x)` where `psi0` restricts on the valuation
/// ring to the standard residue character. `psi` is trivial on
/// `ϖ^(-shift) M` and nontrivial on `ϖ^(-shift) R`.
///
/// With `shift = 1` the character is trivial on the valuation ring and
/// nontrivial on `ϖ^(-1) R`, the standard normalization for the integral
/// identities.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
pub struct CharacterConfig {
    pub shift: i64,
}

impl CharacterConfig {
    pub fn new(shift: i64) -> Self {
        CharacterConfig { shift }
    }

    /// Evaluate the character exactly. On the Laurent side a single digit
    /// decides the value; on the p-adic side carries force the value into
    /// `Q(zeta_{p^(1+depth)})` for arguments of depth below the conductor.
    pub fn eval(&self, field: &LocalField, x: &FieldElement) -> Result<CycloValue, CharacterError> {
        let p = field.p();
        let w = field.shift(x, self.shift);
        match field.ord(&w) {
            Valuation::Infinity => return Ok(CycloValue::one(p)),
            Valuation::Finite(v) if v >= 1 => return Ok(CycloValue::one(p)),
            Valuation::AtLeast(b) if b >= 1 => return Ok(CycloValue::one(p)),
            Valuation::AtLeast(_) => return Err(CharacterError::UndeterminedArgument),
            Valuation::Finite(_) => {}
        }
        let v = match field.ord(&w) {
            Valuation::Finite(v) => v,
            _ => unreachable!(),
        };
        match field.cfg.characteristic {
            CharKind::Positive => {
                // no carries: only the digit at the conductor edge matters
                let d = w.digit(0).ok_or(CharacterError::UndeterminedArgument)?;
                Ok(CycloValue::zeta_pow(p, d))
            }
            CharKind::Zero => {
                // fractional part of w/p: digits at positions v..0 form the
                // exponent of a root of unity of order p^(1-v)
                let depth = (-v) as u32; // v <= 0 here
                let mut exponent: u64 = 0;
                let mut power: u64 = 1;
                for pos in v..=0 {
                    let d = w.digit(pos).ok_or(CharacterError::UndeterminedArgument)?;
                    exponent += d * power;
                    power *= p;
                }
                Ok(CycloValue::root_of_unity(p, depth + 1, exponent))
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::FieldConfig;
    use num_rational::BigRational;
    use num_traits::One;

    fn field(chark: CharKind, p: u64) -> LocalField {
        LocalField::new(FieldConfig::base(chark, p, 8).unwrap())
    }

    #[test]
    fn conductor_normalization() {
        // shift 1: trivial on the valuation ring, nontrivial one level up
        for chark in [CharKind::Positive, CharKind::Zero] {
            let k = field(chark, 5);
            let psi = CharacterConfig::new(1);
            assert_eq!(psi.eval(&k, &k.one()).unwrap(), CycloValue::one(5));
            assert_eq!(psi.eval(&k, &k.from_int(3)).unwrap(), CycloValue::one(5));
            let deep = k.shift(&k.from_int(2), -1); // 2/ϖ
            let v = psi.eval(&k, &deep).unwrap();
            assert_eq!(v, CycloValue::zeta_pow(5, 2));
        }
    }

    #[test]
    fn additivity() {
        for chark in [CharKind::Positive, CharKind::Zero] {
            let k = field(chark, 7);
            let psi = CharacterConfig::new(1);
            let a = k.shift(&k.from_int(3), -2);
            let b = k.shift(&k.from_int(6), -1);
            let lhs = psi.eval(&k, &k.add(&a, &b)).unwrap();
            let rhs = psi.eval(&k, &a).unwrap().mul(&psi.eval(&k, &b).unwrap());
            assert_eq!(lhs, rhs);
        }
    }

    #[test]
    fn depth_two_needs_higher_level_only_with_carries() {
        let q5 = field(CharKind::Zero, 5);
        let psi = CharacterConfig::new(1);
        let x = q5.shift(&q5.from_int(7), -2); // 7/25: depth two
        let v = psi.eval(&q5, &x).unwrap();
        assert_eq!(v.level(), 2);

        let f5 = field(CharKind::Positive, 5);
        let y = f5.shift(&f5.from_int(2), -2);
        let v = psi.eval(&f5, &y).unwrap();
        assert_eq!(v.level(), 1);
    }

    #[test]
    fn full_sum_over_residues_vanishes() {
        // sum over a full set of residues at the conductor edge is zero
        for chark in [CharKind::Positive, CharKind::Zero] {
            let k = field(chark, 3);
            let psi = CharacterConfig::new(1);
            let mut acc = CycloValue::zero(3);
            for d in 0..3 {
                let x = k.shift(&k.from_int(d), -1);
                acc = acc.add(&psi.eval(&k, &x).unwrap());
            }
            assert!(acc.is_zero());
        }
    }

    #[test]
    fn rational_values_are_exact() {
        let k = field(CharKind::Zero, 5);
        let psi = CharacterConfig::new(0);
        // shift 0: nontrivial on the ring itself
        let v = psi.eval(&k, &k.one()).unwrap();
        assert_eq!(v, CycloValue::zeta_pow(5, 1));
        let w = psi.eval(&k, &FieldElement::Zero).unwrap();
        assert_eq!(w.as_rational(), Some(BigRational::one()));
    }
}
