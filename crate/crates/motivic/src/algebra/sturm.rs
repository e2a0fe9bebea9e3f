//! Exact real-root counting for the positivity cone: Sturm sequences plus
//! Yun's squarefree split, over big rationals.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

/// Dense polynomial over the rationals, lowest degree first.
#[derive(Debug, Clone, PartialEq)]
pub struct RatPoly {
    pub coeffs: Vec<BigRational>,
}

impl RatPoly {
    pub fn new(mut coeffs: Vec<BigRational>) -> Self {
        while coeffs.last().map(|c| c.is_zero()).unwrap_or(false) {
            coeffs.pop();
        }
        RatPoly { coeffs }
    }

    pub fn from_bigints(coeffs: &[BigInt]) -> Self {
        Self::new(coeffs.iter().map(|c| BigRational::from(c.clone())).collect())
    }

    pub fn zero() -> Self {
        RatPoly { coeffs: vec![] }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn lead(&self) -> Option<&BigRational> {
        self.coeffs.last()
    }

    pub fn eval(&self, x: &BigRational) -> BigRational {
        let mut acc = BigRational::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * x + c;
        }
        acc
    }

    pub fn derivative(&self) -> Self {
        Self::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(k, c)| c * BigRational::from(BigInt::from(k)))
                .collect(),
        )
    }

    fn sub_scaled(&self, other: &Self, scale: &BigRational, shift: usize) -> Self {
        // self - scale * x^shift * other
        let n = self.coeffs.len().max(other.coeffs.len() + shift);
        let mut coeffs = vec![BigRational::zero(); n];
        for (i, c) in self.coeffs.iter().enumerate() {
            coeffs[i] = c.clone();
        }
        for (i, c) in other.coeffs.iter().enumerate() {
            coeffs[i + shift] -= scale * c;
        }
        Self::new(coeffs)
    }

    /// Polynomial remainder.
    pub fn rem(&self, divisor: &Self) -> Self {
        let dn = divisor.degree().expect("division by zero polynomial");
        let dl = divisor.lead().unwrap().clone();
        let mut r = self.clone();
        while let Some(rn) = r.degree() {
            if rn < dn {
                break;
            }
            let scale = r.lead().unwrap() / &dl;
            r = r.sub_scaled(divisor, &scale, rn - dn);
        }
        r
    }

    pub fn div_exact(&self, divisor: &Self) -> Option<Self> {
        let dn = divisor.degree()?;
        let dl = divisor.lead().unwrap().clone();
        let mut r = self.clone();
        let qn = match self.degree() {
            None => return Some(Self::zero()),
            Some(n) if n < dn => return None,
            Some(n) => n - dn,
        };
        let mut q = vec![BigRational::zero(); qn + 1];
        while let Some(rn) = r.degree() {
            if rn < dn {
                break;
            }
            let scale = r.lead().unwrap() / &dl;
            q[rn - dn] = scale.clone();
            r = r.sub_scaled(divisor, &scale, rn - dn);
        }
        if r.is_zero() {
            Some(Self::new(q))
        } else {
            None
        }
    }

    pub fn gcd(&self, other: &Self) -> Self {
        let mut a = self.clone();
        let mut b = other.clone();
        while !b.is_zero() {
            let r = a.rem(&b);
            a = b;
            b = r;
        }
        if let Some(l) = a.lead().cloned() {
            // monic normalization
            a = Self::new(a.coeffs.iter().map(|c| c / &l).collect());
        }
        a
    }
}

/// The Sturm chain of a polynomial.
fn sturm_chain(p: &RatPoly) -> Vec<RatPoly> {
    let mut chain = vec![p.clone(), p.derivative()];
    loop {
        let n = chain.len();
        if chain[n - 1].is_zero() {
            chain.pop();
            return chain;
        }
        let r = chain[n - 2].rem(&chain[n - 1]);
        if r.is_zero() {
            return chain;
        }
        chain.push(RatPoly::new(r.coeffs.iter().map(|c| -c).collect()));
    }
}

fn sign_variations(chain: &[RatPoly], x: &BigRational) -> usize {
    let mut last: Option<bool> = None;
    let mut variations = 0;
    for p in chain {
        let v = p.eval(x);
        if v.is_zero() {
            continue;
        }
        let s = v.is_positive();
        if let Some(prev) = last {
            if prev != s {
                variations += 1;
            }
        }
        last = Some(s);
    }
    variations
}

/// Number of distinct real roots in the half-open interval `(a, b]`.
pub fn count_roots(p: &RatPoly, a: &BigRational, b: &BigRational) -> usize {
    if p.is_zero() {
        panic!("root counting on the zero polynomial");
    }
    let chain = sturm_chain(p);
    sign_variations(&chain, a) - sign_variations(&chain, b)
}

/// Cauchy-style bound: all real roots lie in `[-B, B]`.
pub fn root_bound(p: &RatPoly) -> BigRational {
    let lead = p.lead().expect("zero polynomial").clone();
    let mut m = BigRational::zero();
    for c in &p.coeffs {
        let r = (c / &lead).abs();
        if r > m {
            m = r;
        }
    }
    m + BigRational::one() + BigRational::one()
}

/// The product of the odd-multiplicity squarefree factors (Yun's
/// algorithm); exactly where the polynomial changes sign.
pub fn odd_multiplicity_part(p: &RatPoly) -> RatPoly {
    let dp = p.derivative();
    let g = p.gcd(&dp);
    if g.degree() == Some(0) || g.is_zero() {
        // squarefree: every root has multiplicity one
        return p.clone();
    }
    let mut c = p.div_exact(&g).expect("gcd divides");
    let mut d = dp.div_exact(&g).expect("gcd divides").sub_scaled(
        &c.derivative(),
        &BigRational::one(),
        0,
    );
    let mut odd = RatPoly::new(vec![BigRational::one()]);
    let mut index = 1usize;
    while c.degree().map(|d| d > 0).unwrap_or(false) {
        let s = c.gcd(&d);
        if index % 2 == 1 {
            odd = mul(&odd, &s);
        }
        c = c.div_exact(&s).expect("factor divides");
        d = d.div_exact(&s).expect("factor divides").sub_scaled(
            &c.derivative(),
            &BigRational::one(),
            0,
        );
        index += 1;
    }
    odd
}

fn mul(a: &RatPoly, b: &RatPoly) -> RatPoly {
    if a.is_zero() || b.is_zero() {
        return RatPoly::zero();
    }
    let mut coeffs = vec![BigRational::zero(); a.coeffs.len() + b.coeffs.len() - 1];
    for (i, x) in a.coeffs.iter().enumerate() {
        for (j, y) in b.coeffs.iter().enumerate() {
            coeffs[i + j] += x * y;
        }
    }
    RatPoly::new(coeffs)
}

/// Decide `p(x) >= 0` for every real `x > 1`, exactly.
///
/// The sign can only change at roots of odd multiplicity; with a positive
/// leading coefficient and no odd-multiplicity root beyond 1 the polynomial
/// stays nonnegative there.
pub fn nonneg_beyond_one(p: &RatPoly) -> bool {
    if p.is_zero() {
        return true;
    }
    if p.lead().unwrap().is_negative() {
        return false;
    }
    let odd = odd_multiplicity_part(p);
    if odd.degree().map(|d| d == 0).unwrap_or(true) {
        return true;
    }
    let one = BigRational::one();
    let bound = root_bound(&odd).max(root_bound(p));
    count_roots(&odd, &one, &bound) == 0
}
