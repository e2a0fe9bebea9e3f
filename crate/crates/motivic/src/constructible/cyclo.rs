//! Exact arithmetic in prime-power cyclotomic fields.
//!
//! Values of character sums live in `Q(zeta_p)`; on the p-adic side, digit
//! carries can push intermediate terms into `Q(zeta_{p^2})`, so the type
//! carries a power-of-p level and embeds smaller levels into larger ones.
//! The basis is `1, z, ..., z^(phi-1)` with `phi = p^(k-1)(p-1)`, reduced by
//! the prime-power cyclotomic polynomial.

use num_rational::BigRational;
use num_traits::{One, Zero};
use std::fmt;

/// An element of `Q(zeta_{p^k})` in the power basis.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CycloValue {
    p: u64,
    k: u32,
    coeffs: Vec<BigRational>,
}

fn phi(p: u64, k: u32) -> usize {
    (p.pow(k - 1) * (p - 1)) as usize
}

impl CycloValue {
    pub fn zero(p: u64) -> Self {
        CycloValue { p, k: 1, coeffs: vec![BigRational::zero(); phi(p, 1)] }
    }

    pub fn one(p: u64) -> Self {
        Self::rational(p, BigRational::one())
    }

    pub fn rational(p: u64, c: BigRational) -> Self {
        let mut coeffs = vec![BigRational::zero(); phi(p, 1)];
        coeffs[0] = c;
        CycloValue { p, k: 1, coeffs }
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn level(&self) -> u32 {
        self.k
    }

    /// The root of unity `zeta_{p^k}^m`.
    pub fn root_of_unity(p: u64, k: u32, m: u64) -> Self {
        let modulus = p.pow(k);
        let m = (m % modulus) as usize;
        let mut coeffs = vec![BigRational::zero(); m + 1];
        coeffs[m] = BigRational::one();
        let mut v = CycloValue { p, k, coeffs };
        v.reduce();
        v.normalized()
    }

    /// `zeta_p^m` at level 1.
    pub fn zeta_pow(p: u64, m: u64) -> Self {
        Self::root_of_unity(p, 1, m)
    }

    /// Reduce the coefficient vector modulo the cyclotomic polynomial
    /// `Phi_{p^k}(x) = sum_j x^(j p^(k-1))`, then pad to the basis length.
    fn reduce(&mut self) {
        let n = phi(self.p, self.k);
        let step = self.p.pow(self.k - 1) as usize;
        while self.coeffs.len() > n {
            let top = self.coeffs.pop().unwrap();
            if top.is_zero() {
                continue;
            }
            // x^(phi + s) = -sum_{j=0}^{p-2} x^(j*step + s)
            let s = self.coeffs.len() - n;
            for j in 0..(self.p - 1) as usize {
                let idx = j * step + s;
                self.coeffs[idx] -= &top;
            }
        }
        self.coeffs.resize(n, BigRational::zero());
    }

    /// Embed into a larger level: `zeta_{p^k} = zeta_{p^k'}^(p^(k'-k))`.
    pub fn lift_to(&self, k: u32) -> Self {
        assert!(k >= self.k);
        if k == self.k {
            return self.clone();
        }
        let stride = self.p.pow(k - self.k) as usize;
        let mut coeffs = vec![BigRational::zero(); phi(self.p, k)];
        for (i, c) in self.coeffs.iter().enumerate() {
            coeffs[i * stride] = c.clone();
        }
        CycloValue { p: self.p, k, coeffs }
    }

    /// Express at level 1 when the value lies in `Q(zeta_p)`.
    pub fn try_level_one(&self) -> Option<Self> {
        let mut v = self.clone();
        while v.k > 1 {
            v = v.try_lower()?;
        }
        Some(v)
    }

    /// Drop one level when the value lies in the smaller field.
    fn try_lower(&self) -> Option<Self> {
        if self.k == 1 {
            return None;
        }
        let stride = self.p as usize;
        let mut coeffs = vec![BigRational::zero(); phi(self.p, self.k - 1)];
        for (i, c) in self.coeffs.iter().enumerate() {
            if i % stride == 0 {
                coeffs[i / stride] = c.clone();
            } else if !c.is_zero() {
                return None;
            }
        }
        Some(CycloValue { p: self.p, k: self.k - 1, coeffs })
    }

    /// Canonical form: the smallest level containing the value.
    fn normalized(mut self) -> Self {
        while self.k > 1 {
            match self.try_lower() {
                Some(v) => self = v,
                None => break,
            }
        }
        self
    }

    fn common_level(a: &Self, b: &Self) -> (Self, Self) {
        assert_eq!(a.p, b.p, "mixed primes in cyclotomic arithmetic");
        let k = a.k.max(b.k);
        (a.lift_to(k), b.lift_to(k))
    }

    pub fn add(&self, other: &Self) -> Self {
        let (mut a, b) = Self::common_level(self, other);
        for (x, y) in a.coeffs.iter_mut().zip(&b.coeffs) {
            *x += y;
        }
        a.normalized()
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Self {
        CycloValue {
            p: self.p,
            k: self.k,
            coeffs: self.coeffs.iter().map(|c| -c).collect(),
        }
    }

    pub fn mul(&self, other: &Self) -> Self {
        let (a, b) = Self::common_level(self, other);
        let mut coeffs = vec![BigRational::zero(); a.coeffs.len() + b.coeffs.len() - 1];
        for (i, x) in a.coeffs.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (j, y) in b.coeffs.iter().enumerate() {
                if y.is_zero() {
                    continue;
                }
                coeffs[i + j] += x * y;
            }
        }
        let mut v = CycloValue { p: a.p, k: a.k, coeffs };
        v.reduce();
        v.normalized()
    }

    pub fn scale(&self, c: &BigRational) -> Self {
        CycloValue {
            p: self.p,
            k: self.k,
            coeffs: self.coeffs.iter().map(|x| x * c).collect(),
        }
    }

    /// Complex conjugation: index negation on roots of unity.
    pub fn conj(&self) -> Self {
        let modulus = self.p.pow(self.k);
        let mut acc = CycloValue {
            p: self.p,
            k: self.k,
            coeffs: vec![BigRational::zero(); phi(self.p, self.k)],
        };
        for (i, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let m = (modulus - i as u64 % modulus) % modulus;
            let root = Self::root_of_unity(self.p, self.k, m).lift_to(self.k).scale(c);
            acc = acc.add(&root);
        }
        acc.normalized()
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_zero())
    }

    /// The rational coefficient when the value is rational.
    pub fn as_rational(&self) -> Option<BigRational> {
        if self.coeffs.iter().skip(1).all(|c| c.is_zero()) {
            Some(self.coeffs[0].clone())
        } else {
            None
        }
    }

    pub fn coeffs(&self) -> &[BigRational] {
        &self.coeffs
    }

    /// `|v|^2 = v * conj(v)`; rational for values fixed by conjugation up
    /// to the standard pairing (used by design only on such values).
    pub fn norm_squared(&self) -> Self {
        self.mul(&self.conj())
    }
}

impl fmt::Display for CycloValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let order = self.p.pow(self.k);
        let mut parts = Vec::new();
        for (i, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            parts.push(match i {
                0 => format!("{c}"),
                1 => format!("{c}*z"),
                _ => format!("{c}*z^{i}"),
            });
        }
        if parts.is_empty() {
            return write!(f, "0");
        }
        write!(f, "{} (z = zeta_{})", parts.join(" + "), order)
    }
}

/// Serialization helper: stable text form for report records.
pub fn canonical_text(v: &CycloValue) -> String {
    let v = v.try_level_one().unwrap_or_else(|| v.clone());
    let coeffs: Vec<String> = v.coeffs().iter().map(|c| c.to_string()).collect();
    format!("zeta{}^[{}]", v.p.pow(v.level()), coeffs.join(","))
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::BigInt;

    #[test]
    fn full_character_sum_vanishes() {
        let p = 5;
        let mut acc = CycloValue::zero(p);
        for m in 0..p {
            acc = acc.add(&CycloValue::zeta_pow(p, m));
        }
        assert!(acc.is_zero());
    }

    #[test]
    fn conjugation_is_involutive_multiplicative() {
        let p = 7;
        let a = CycloValue::zeta_pow(p, 3).add(&CycloValue::rational(p, BigRational::from(BigInt::from(2))));
        let b = CycloValue::zeta_pow(p, 5);
        assert_eq!(a.conj().conj(), a);
        assert_eq!(a.mul(&b).conj(), a.conj().mul(&b.conj()));
    }

    #[test]
    fn quadratic_gauss_sum_has_norm_p() {
        // g = sum_x zeta^(x^2); |g|^2 = p for odd p
        for p in [3u64, 5, 7] {
            let mut g = CycloValue::zero(p);
            for x in 0..p {
                g = g.add(&CycloValue::zeta_pow(p, (x * x) % p));
            }
            let n = g.norm_squared();
            assert_eq!(
                n.as_rational(),
                Some(BigRational::from(BigInt::from(p))),
                "norm of the Gauss sum at p = {p}"
            );
        }
    }

    #[test]
    fn level_lifting_and_projection() {
        let p = 3;
        let a = CycloValue::zeta_pow(p, 2);
        let lifted = a.lift_to(2);
        assert_eq!(lifted.try_level_one(), Some(a.clone()));
        // a genuine level-2 element does not project
        let z9 = CycloValue::root_of_unity(p, 2, 1);
        assert_eq!(z9.try_level_one(), None);
        // arithmetic across levels lands at the common level, and results
        // normalize back down when the high-level parts cancel
        let s = a.add(&z9);
        assert_eq!(s.level(), 2);
        assert_eq!(s.sub(&z9), a);
    }

    #[test]
    fn prime_power_relation() {
        // zeta_9^9 = 1, and 1 + zeta_9^3 + zeta_9^6 = 0 (level-1 relation)
        let z = |m| CycloValue::root_of_unity(3, 2, m);
        assert_eq!(z(9), CycloValue::one(3));
        let s = z(0).add(&z(3)).add(&z(6));
        assert!(s.is_zero());
    }
}
