//! Laurent polynomials in the Lefschetz symbol `L` with integer
//! coefficients.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use std::fmt;

/// `sum_j coeffs[j] * L^(low + j)`, normalized so the first and last stored
/// coefficients are nonzero (zero is the empty vector).
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct LaurentPoly {
    low: i64,
    coeffs: Vec<BigInt>,
}

impl LaurentPoly {
    pub fn new(low: i64, coeffs: Vec<BigInt>) -> Self {
        let mut p = LaurentPoly { low, coeffs };
        p.normalize();
        p
    }

    fn normalize(&mut self) {
        while self.coeffs.last().map(|c| c.is_zero()).unwrap_or(false) {
            self.coeffs.pop();
        }
        let lead_zeros = self.coeffs.iter().take_while(|c| c.is_zero()).count();
        if lead_zeros > 0 {
            self.coeffs.drain(..lead_zeros);
            self.low += lead_zeros as i64;
        }
        if self.coeffs.is_empty() {
            self.low = 0;
        }
    }

    pub fn zero() -> Self {
        LaurentPoly { low: 0, coeffs: vec![] }
    }

    pub fn one() -> Self {
        Self::constant(1)
    }

    pub fn constant(c: i64) -> Self {
        Self::new(0, vec![BigInt::from(c)])
    }

    /// `c * L^k`.
    pub fn monomial(c: i64, k: i64) -> Self {
        Self::new(k, vec![BigInt::from(c)])
    }

    /// `L^i - 1` (i > 0).
    pub fn cyclo_factor(i: u32) -> Self {
        let mut coeffs = vec![BigInt::zero(); i as usize + 1];
        coeffs[0] = BigInt::from(-1);
        coeffs[i as usize] = BigInt::one();
        Self::new(0, coeffs)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn low(&self) -> i64 {
        self.low
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    /// Degree in `L` (highest power), `None` for zero.
    pub fn degree(&self) -> Option<i64> {
        if self.is_zero() {
            None
        } else {
            Some(self.low + self.coeffs.len() as i64 - 1)
        }
    }

    pub fn coeff_at(&self, power: i64) -> BigInt {
        if power < self.low {
            return BigInt::zero();
        }
        self.coeffs
            .get((power - self.low) as usize)
            .cloned()
            .unwrap_or_else(BigInt::zero)
    }

    pub fn add(&self, other: &Self) -> Self {
        if self.is_zero() {
            return other.clone();
        }
        if other.is_zero() {
            return self.clone();
        }
        let low = self.low.min(other.low);
        let high = self.degree().unwrap().max(other.degree().unwrap());
        let mut coeffs = vec![BigInt::zero(); (high - low + 1) as usize];
        for (j, c) in coeffs.iter_mut().enumerate() {
            *c = self.coeff_at(low + j as i64) + other.coeff_at(low + j as i64);
        }
        Self::new(low, coeffs)
    }

    pub fn neg(&self) -> Self {
        LaurentPoly {
            low: self.low,
            coeffs: self.coeffs.iter().map(|c| -c).collect(),
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return Self::zero();
        }
        let mut coeffs = vec![BigInt::zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                coeffs[i + j] += a * b;
            }
        }
        Self::new(self.low + other.low, coeffs)
    }

    pub fn shift(&self, k: i64) -> Self {
        if self.is_zero() {
            return Self::zero();
        }
        LaurentPoly {
            low: self.low + k,
            coeffs: self.coeffs.clone(),
        }
    }

    /// Exact division, `None` if the divisor does not divide exactly.
    /// The divisor must be monic-up-to-sign at its top coefficient.
    pub fn div_exact(&self, divisor: &Self) -> Option<Self> {
        if self.is_zero() {
            return Some(Self::zero());
        }
        if divisor.is_zero() {
            return None;
        }
        let lead = divisor.coeffs.last().unwrap();
        assert!(
            lead.is_one() || (-lead).is_one(),
            "div_exact expects a divisor with unit leading coefficient"
        );
        let mut rem = self.coeffs.clone();
        let dn = divisor.coeffs.len();
        if rem.len() < dn {
            return None;
        }
        let qlen = rem.len() - dn + 1;
        let mut quot = vec![BigInt::zero(); qlen];
        for k in (0..qlen).rev() {
            let top = rem[k + dn - 1].clone();
            if top.is_zero() {
                continue;
            }
            let q = &top / lead;
            quot[k] = q.clone();
            for (j, d) in divisor.coeffs.iter().enumerate() {
                rem[k + j] -= &q * d;
            }
        }
        if rem.iter().any(|c| !c.is_zero()) {
            return None;
        }
        Some(Self::new(self.low - divisor.low, quot))
    }

    /// Exact rational evaluation; `q` must be nonzero when negative powers
    /// are present.
    pub fn eval(&self, q: &BigRational) -> BigRational {
        if self.is_zero() {
            return BigRational::zero();
        }
        let mut acc = BigRational::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * q + BigRational::from(c.clone());
        }
        // multiply by q^low
        let mut shift = BigRational::one();
        let a = self.low.unsigned_abs();
        for _ in 0..a {
            shift *= q;
        }
        if self.low >= 0 {
            acc * shift
        } else {
            acc / shift
        }
    }

    /// Largest absolute coefficient value.
    pub fn max_abs(&self) -> BigInt {
        self.coeffs
            .iter()
            .map(|c| c.abs())
            .max()
            .unwrap_or_else(BigInt::zero)
    }
}

impl fmt::Display for LaurentPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (j, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let k = self.low + j as i64;
            if first {
                if c.is_negative() {
                    write!(f, "-")?;
                }
                first = false;
            } else if c.is_negative() {
                write!(f, " - ")?;
            } else {
                write!(f, " + ")?;
            }
            let a = c.abs();
            if k == 0 {
                write!(f, "{a}")?;
            } else {
                if !a.is_one() {
                    write!(f, "{a}*")?;
                }
                if k == 1 {
                    write!(f, "L")?;
                } else {
                    write!(f, "L^{k}")?;
                }
            }
        }
        Ok(())
    }
}

impl fmt::Debug for LaurentPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn arithmetic_and_normalization() {
        let a = LaurentPoly::monomial(1, 2); // L^2
        let one = LaurentPoly::one();
        let diff = a.sub(&one); // L^2 - 1
        assert_eq!(diff, LaurentPoly::cyclo_factor(2));
        assert_eq!(diff.degree(), Some(2));
    }

    #[test]
    fn exact_division() {
        // (L^2 - 1)/(L - 1) = L + 1
        let n = LaurentPoly::cyclo_factor(2);
        let d = LaurentPoly::cyclo_factor(1);
        let q = n.div_exact(&d).unwrap();
        assert_eq!(q, LaurentPoly::new(0, vec![BigInt::from(1), BigInt::from(1)]));
        // L - 1 does not divide L^2 + 1
        let bad = LaurentPoly::new(0, vec![BigInt::from(1), BigInt::zero(), BigInt::from(1)]);
        assert!(bad.div_exact(&d).is_none());
    }

    #[test]
    fn laurent_eval() {
        // L^-1 + 1 at 2 = 3/2
        let p = LaurentPoly::new(-1, vec![BigInt::one(), BigInt::one()]);
        let v = p.eval(&BigRational::from(BigInt::from(2)));
        assert_eq!(v, BigRational::new(BigInt::from(3), BigInt::from(2)));
    }
}
