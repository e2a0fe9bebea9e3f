//! The coefficient ring of motivic volumes: Laurent polynomials in `L`
//! localized at the elements `L^i - 1`, in canonical fraction form.

use super::laurent::LaurentPoly;
use super::sturm::{nonneg_beyond_one, RatPoly};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::One;
use std::collections::BTreeMap;
use std::fmt;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum AlgebraError {
    #[error("evaluation point must satisfy q > 1, got {0}")]
    BadEvaluationPoint(BigRational),
    #[error("geometric sum diverges: step {step} not positive for an infinite range")]
    DivergentSum { step: i64 },
}

/// `num / prod (L^i - 1)^mult`, with no denominator factor dividing the
/// numerator exactly. Equality is decided by cross-multiplication.
#[derive(Clone, PartialEq, Eq)]
pub struct AElem {
    num: LaurentPoly,
    den: BTreeMap<u32, u32>,
}

impl AElem {
    pub fn zero() -> Self {
        AElem { num: LaurentPoly::zero(), den: BTreeMap::new() }
    }

    pub fn one() -> Self {
        AElem { num: LaurentPoly::one(), den: BTreeMap::new() }
    }

    pub fn from_int(c: i64) -> Self {
        AElem { num: LaurentPoly::constant(c), den: BTreeMap::new() }
    }

    /// `c * L^k`.
    pub fn monomial(c: i64, k: i64) -> Self {
        AElem { num: LaurentPoly::monomial(c, k), den: BTreeMap::new() }
    }

    /// The symbol `L`.
    pub fn l() -> Self {
        Self::monomial(1, 1)
    }

    /// `L^k`.
    pub fn l_power(k: i64) -> Self {
        Self::monomial(1, k)
    }

    pub fn from_laurent(num: LaurentPoly) -> Self {
        AElem { num, den: BTreeMap::new() }
    }

    /// Build `num / prod (L^i - 1)^mult` and reduce to canonical form.
    pub fn fraction(num: LaurentPoly, den: BTreeMap<u32, u32>) -> Self {
        let mut x = AElem { num, den };
        x.reduce();
        x
    }

    fn reduce(&mut self) {
        if self.num.is_zero() {
            self.den.clear();
            return;
        }
        let factors: Vec<u32> = self.den.keys().copied().collect();
        for i in factors {
            let f = LaurentPoly::cyclo_factor(i);
            while self.den.get(&i).map(|&m| m > 0).unwrap_or(false) {
                match self.num.div_exact(&f) {
                    Some(q) => {
                        self.num = q;
                        let m = self.den.get_mut(&i).unwrap();
                        *m -= 1;
                        if *m == 0 {
                            self.den.remove(&i);
                        }
                    }
                    None => break,
                }
            }
        }
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    /// The numerator when the denominator is trivial.
    pub fn as_laurent(&self) -> Option<&LaurentPoly> {
        if self.den.is_empty() {
            Some(&self.num)
        } else {
            None
        }
    }

    fn den_poly(&self) -> LaurentPoly {
        let mut p = LaurentPoly::one();
        for (&i, &m) in &self.den {
            let f = LaurentPoly::cyclo_factor(i);
            for _ in 0..m {
                p = p.mul(&f);
            }
        }
        p
    }

    pub fn add(&self, other: &Self) -> Self {
        // common denominator: max multiplicity per factor
        let mut den = self.den.clone();
        for (&i, &m) in &other.den {
            let e = den.entry(i).or_insert(0);
            *e = (*e).max(m);
        }
        let scale = |x: &AElem| -> LaurentPoly {
            let mut n = x.num.clone();
            for (&i, &m) in &den {
                let have = x.den.get(&i).copied().unwrap_or(0);
                let f = LaurentPoly::cyclo_factor(i);
                for _ in have..m {
                    n = n.mul(&f);
                }
            }
            n
        };
        Self::fraction(scale(self).add(&scale(other)), den)
    }

    pub fn neg(&self) -> Self {
        AElem { num: self.num.neg(), den: self.den.clone() }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut den = self.den.clone();
        for (&i, &m) in &other.den {
            *den.entry(i).or_insert(0) += m;
        }
        Self::fraction(self.num.mul(&other.num), den)
    }

    pub fn mul_int(&self, c: i64) -> Self {
        self.mul(&Self::from_int(c))
    }

    /// Ring-equality by cross-multiplication of canonical forms.
    pub fn eq(&self, other: &Self) -> bool {
        self.num.mul(&other.den_poly()) == other.num.mul(&self.den_poly())
    }

    /// Evaluation homomorphism sending `L` to a rational `q > 1`.
    pub fn theta_q(&self, q: &BigRational) -> Result<BigRational, AlgebraError> {
        if *q <= BigRational::one() {
            return Err(AlgebraError::BadEvaluationPoint(q.clone()));
        }
        let mut v = self.num.eval(q);
        for (&i, &m) in &self.den {
            let mut qi = BigRational::one();
            for _ in 0..i {
                qi *= q;
            }
            let factor = qi - BigRational::one();
            for _ in 0..m {
                v /= factor.clone();
            }
        }
        Ok(v)
    }

    /// Convenience: evaluate at an integer `q`.
    pub fn theta_int(&self, q: u64) -> Result<BigRational, AlgebraError> {
        self.theta_q(&BigRational::from(BigInt::from(q)))
    }

    /// Membership in the positivity cone: nonnegative under every
    /// evaluation `L -> q`, `q > 1`. The denominator is positive there, so
    /// the decision reduces to the numerator's sign, settled by Sturm root
    /// counting on the odd-multiplicity part.
    pub fn is_in_a_plus(&self) -> bool {
        if self.num.is_zero() {
            return true;
        }
        // clear the Laurent shift by a positive power of L
        let poly = RatPoly::from_bigints(self.num.coeffs());
        nonneg_beyond_one(&poly)
    }
}

/// Closed form of `sum L^(-step*l + offset)` for `l` in `[lo, hi]` or
/// `[lo, oo)`. Infinite ranges need a positive step for summability.
pub fn geom_sum(step: i64, offset: i64, lo: i64, hi: Option<i64>) -> Result<AElem, AlgebraError> {
    match hi {
        Some(hi) => {
            if hi < lo {
                return Ok(AElem::zero());
            }
            let mut acc = LaurentPoly::zero();
            for l in lo..=hi {
                acc = acc.add(&LaurentPoly::monomial(1, -step * l + offset));
            }
            Ok(AElem::from_laurent(acc))
        }
        None => {
            if step <= 0 {
                return Err(AlgebraError::DivergentSum { step });
            }
            // sum_{l >= lo} L^(-step*l + offset)
            //   = L^(-step*lo + offset) * L^step / (L^step - 1)
            let num = LaurentPoly::monomial(1, -step * lo + offset + step);
            let mut den = BTreeMap::new();
            den.insert(step as u32, 1);
            Ok(AElem::fraction(num, den))
        }
    }
}

impl fmt::Display for AElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den.is_empty() {
            return write!(f, "{}", self.num);
        }
        write!(f, "({})/(", self.num)?;
        let mut first = true;
        for (&i, &m) in &self.den {
            if !first {
                write!(f, "*")?;
            }
            first = false;
            if m == 1 {
                write!(f, "(L^{i} - 1)")?;
            } else {
                write!(f, "(L^{i} - 1)^{m}")?;
            }
        }
        write!(f, ")")
    }
}

impl fmt::Debug for AElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::Signed;

    #[test]
    fn ring_identities() {
        // (L - 1) + 1 = L
        let x = AElem::l().sub(&AElem::one()).add(&AElem::one());
        assert!(x.eq(&AElem::l()));
        // (L^2 - 1)/(L - 1) = L + 1
        let mut den = BTreeMap::new();
        den.insert(1, 1);
        let y = AElem::fraction(LaurentPoly::cyclo_factor(2), den);
        let expected = AElem::l().add(&AElem::one());
        assert!(y.eq(&expected));
        assert!(y.as_laurent().is_some(), "canonical form should clear the denominator");
    }

    #[test]
    fn l_inverse_over_one_minus_l_inverse() {
        // L^-1 / (1 - L^-1) = 1/(L - 1)
        // built directly as L^-1 * (L^1/(L^1-1)) * L^-1 ... use geom_sum
        let s = geom_sum(1, 0, 1, None).unwrap();
        let mut den = BTreeMap::new();
        den.insert(1, 1);
        let expected = AElem::fraction(LaurentPoly::one(), den);
        assert!(s.eq(&expected));
    }

    #[test]
    fn theta_q_values() {
        let q3 = BigRational::from(BigInt::from(3));
        let x = AElem::l().mul(&AElem::l()).sub(&AElem::one()); // L^2 - 1
        assert_eq!(x.theta_q(&q3).unwrap(), BigRational::from(BigInt::from(8)));

        let mut den = BTreeMap::new();
        den.insert(1, 1);
        let y = AElem::fraction(LaurentPoly::one(), den); // 1/(L-1)
        assert_eq!(
            y.theta_int(5).unwrap(),
            BigRational::new(BigInt::from(1), BigInt::from(4))
        );
        assert!(y.theta_q(&BigRational::one()).is_err());
    }

    #[test]
    fn finite_geometric_sum() {
        // sum_{l=0..2} L^-l = (L^2 + L + 1) L^-2
        let s = geom_sum(1, 0, 0, Some(2)).unwrap();
        let expected = AElem::from_laurent(LaurentPoly::new(
            -2,
            vec![BigInt::one(), BigInt::one(), BigInt::one()],
        ));
        assert!(s.eq(&expected));
    }

    #[test]
    fn infinite_sum_matches_partial_limits() {
        use rand::prelude::*;
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(17);
        for _ in 0..50 {
            let a = rng.gen_range(1..4);
            let b = rng.gen_range(-3..4);
            let lo = rng.gen_range(-2..3);
            let full = geom_sum(a, b, lo, None).unwrap();
            let q = BigRational::from(BigInt::from(rng.gen_range(2..6)));
            // tail after N terms shrinks like q^{-aN}; compare against the
            // algebraic identity: partial + tail = full
            let n = 40;
            let partial = geom_sum(a, b, lo, Some(lo + n - 1)).unwrap();
            let tail = geom_sum(a, b, lo + n, None).unwrap();
            let total = partial.add(&tail);
            assert!(total.eq(&full));
            let fv = full.theta_q(&q).unwrap();
            let pv = partial.theta_q(&q).unwrap();
            assert!((fv.clone() - pv).abs() < fv.abs() * BigRational::new(BigInt::one(), BigInt::from(1000u64)));
        }
    }

    #[test]
    fn divergent_sum_rejected() {
        assert!(geom_sum(0, 0, 0, None).is_err());
        assert!(geom_sum(-1, 0, 0, None).is_err());
    }

    #[test]
    fn positivity_cone() {
        let l = AElem::l();
        assert!(l.sub(&AElem::one()).is_in_a_plus()); // L - 1
        assert!(!AElem::one().sub(&l).is_in_a_plus()); // 1 - L
        assert!(!l.sub(&AElem::from_int(3)).is_in_a_plus()); // L - 3
        // (L-1)(L-2) dips negative between 1 and 2
        let x = l.sub(&AElem::one()).mul(&l.sub(&AElem::from_int(2)));
        assert!(!x.is_in_a_plus());
        // (L-2)^2 is fine
        let y = l.sub(&AElem::from_int(2)).mul(&l.sub(&AElem::from_int(2)));
        assert!(y.is_in_a_plus());
        // volumes: 1/(L-1) etc.
        let s = geom_sum(1, 0, 1, None).unwrap();
        assert!(s.is_in_a_plus());
    }

    #[test]
    fn theta_q_is_ring_homomorphism_randomized() {
        use rand::prelude::*;
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(23);
        let random_elem = |rng: &mut rand_chacha::ChaCha8Rng| -> AElem {
            let mut num = LaurentPoly::zero();
            for _ in 0..rng.gen_range(1..4) {
                num = num.add(&LaurentPoly::monomial(
                    rng.gen_range(-5..6),
                    rng.gen_range(-3..4),
                ));
            }
            let mut den = BTreeMap::new();
            if rng.gen_bool(0.5) {
                den.insert(rng.gen_range(1..4), rng.gen_range(1..3));
            }
            AElem::fraction(num, den)
        };
        for _ in 0..100 {
            let x = random_elem(&mut rng);
            let y = random_elem(&mut rng);
            let q = BigRational::new(BigInt::from(rng.gen_range(3..20)), BigInt::from(2));
            let tx = x.theta_q(&q).unwrap();
            let ty = y.theta_q(&q).unwrap();
            assert_eq!(x.add(&y).theta_q(&q).unwrap(), &tx + &ty);
            assert_eq!(x.mul(&y).theta_q(&q).unwrap(), &tx * &ty);
        }
    }

    #[test]
    fn equality_iff_enough_evaluations_agree() {
        use rand::prelude::*;
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(29);
        for _ in 0..50 {
            let x = AElem::monomial(rng.gen_range(-4..5), rng.gen_range(-2..3));
            let y = AElem::monomial(rng.gen_range(-4..5), rng.gen_range(-2..3));
            let equal = x.eq(&y);
            // max degree spread is small; 8 points are plenty
            let agree = (2..10).all(|q| {
                x.theta_int(q).unwrap() == y.theta_int(q).unwrap()
            });
            assert_eq!(equal, agree);
        }
    }
}
