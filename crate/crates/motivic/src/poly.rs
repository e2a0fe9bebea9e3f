//! Integer polynomials in the formal uniformizer `t`.
//!
//! These are the valued-field constants of the language: every constant is a
//! polynomial in `t` with integer coefficients, optionally scaled by `1/N`.
//! They specialize to both kinds of local field (`t -> p` and `t -> t`).

use std::fmt;

/// A polynomial in `t` with `i64` coefficients, lowest degree first.
///
/// Coefficients stay desk-scale; arithmetic uses checked ops and panics on
/// overflow rather than silently wrapping.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct IntPoly {
    coeffs: Vec<i64>,
}

impl IntPoly {
    pub fn new(mut coeffs: Vec<i64>) -> Self {
        while coeffs.last() == Some(&0) {
            coeffs.pop();
        }
        IntPoly { coeffs }
    }

    pub fn zero() -> Self {
        IntPoly { coeffs: vec![] }
    }

    pub fn constant(c: i64) -> Self {
        Self::new(vec![c])
    }

    /// The monomial `c * t^k`.
    pub fn monomial(c: i64, k: usize) -> Self {
        let mut coeffs = vec![0; k + 1];
        coeffs[k] = c;
        Self::new(coeffs)
    }

    pub fn t() -> Self {
        Self::monomial(1, 1)
    }

    pub fn coeffs(&self) -> &[i64] {
        &self.coeffs
    }

    pub fn coeff(&self, k: usize) -> i64 {
        self.coeffs.get(k).copied().unwrap_or(0)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    /// `t`-adic order: index of the lowest nonzero coefficient.
    pub fn t_order(&self) -> Option<usize> {
        self.coeffs.iter().position(|&c| c != 0)
    }

    /// Lowest nonzero coefficient.
    pub fn leading_t_coeff(&self) -> Option<i64> {
        self.t_order().map(|k| self.coeffs[k])
    }

    pub fn add(&self, other: &Self) -> Self {
        let n = self.coeffs.len().max(other.coeffs.len());
        let coeffs = (0..n)
            .map(|k| {
                self.coeff(k)
                    .checked_add(other.coeff(k))
                    .expect("IntPoly coefficient overflow")
            })
            .collect();
        Self::new(coeffs)
    }

    pub fn neg(&self) -> Self {
        Self::new(self.coeffs.iter().map(|&c| -c).collect())
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return Self::zero();
        }
        let mut coeffs = vec![0i64; self.coeffs.len() + other.coeffs.len() - 1];
        for (i, &a) in self.coeffs.iter().enumerate() {
            for (j, &b) in other.coeffs.iter().enumerate() {
                let prod = a.checked_mul(b).expect("IntPoly coefficient overflow");
                coeffs[i + j] = coeffs[i + j]
                    .checked_add(prod)
                    .expect("IntPoly coefficient overflow");
            }
        }
        Self::new(coeffs)
    }

    /// Largest absolute value among the coefficients.
    pub fn max_abs_coeff(&self) -> i64 {
        self.coeffs.iter().map(|c| c.abs()).max().unwrap_or(0)
    }
}

impl fmt::Display for IntPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (k, &c) in self.coeffs.iter().enumerate() {
            if c == 0 {
                continue;
            }
            if first {
                if c < 0 {
                    write!(f, "-")?;
                }
                first = false;
            } else if c < 0 {
                write!(f, " - ")?;
            } else {
                write!(f, " + ")?;
            }
            let a = c.unsigned_abs();
            match k {
                0 => write!(f, "{a}")?,
                _ => {
                    if a != 1 {
                        write!(f, "{a}*")?;
                    }
                    if k == 1 {
                        write!(f, "t")?;
                    } else {
                        write!(f, "t^{k}")?;
                    }
                }
            }
        }
        Ok(())
    }
}

impl fmt::Debug for IntPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn normalization_strips_high_zeros() {
        let p = IntPoly::new(vec![1, 0, 0]);
        assert_eq!(p.degree(), Some(0));
        assert_eq!(p, IntPoly::constant(1));
    }

    #[test]
    fn arithmetic() {
        let one_plus_t = IntPoly::new(vec![1, 1]);
        let one_minus_t = IntPoly::new(vec![1, -1]);
        assert_eq!(one_plus_t.mul(&one_minus_t), IntPoly::new(vec![1, 0, -1]));
        assert_eq!(one_plus_t.sub(&one_plus_t), IntPoly::zero());
    }

    #[test]
    fn t_order() {
        let p = IntPoly::new(vec![0, 0, 3, 1]);
        assert_eq!(p.t_order(), Some(2));
        assert_eq!(p.leading_t_coeff(), Some(3));
        assert_eq!(IntPoly::zero().t_order(), None);
    }

    #[test]
    fn display() {
        assert_eq!(IntPoly::new(vec![1, 0, 0, 1]).to_string(), "1 + t^3");
        assert_eq!(IntPoly::new(vec![0, -2]).to_string(), "-2*t");
        assert_eq!(IntPoly::zero().to_string(), "0");
    }
}
