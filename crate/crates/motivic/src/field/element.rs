//! Truncated valued-field elements and their exact arithmetic.
//!
//! An element is stored as a valuation offset plus a digit window. Digits are
//! residues mod p: Laurent-series coefficients in positive characteristic,
//! base-p digits (with carries) in characteristic zero. The window records
//! how far the digits are known; arithmetic never fabricates digits beyond
//! it. An `exact` element has all-zero digits past the stored window, so its
//! window can be extended at will.

use super::config::{CharKind, FieldConfig};
use super::residue;
use crate::poly::IntPoly;
use num_bigint::BigUint;
use num_traits::{One, ToPrimitive, Zero as NumZero};
use std::fmt;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum FieldError {
    #[error("division by exact zero")]
    DivisionByZero,
    #[error("division by a possible zero (all digits vanish below {below}, precision exhausted)")]
    PossibleZero { below: i64 },
    #[error("angular component of a precision-exhausted element")]
    AcUnknown,
    #[error("residue of an element of negative valuation")]
    NotIntegral,
    #[error("rational constant 1/{denom} not interpretable: residue characteristic {p} too small")]
    BadDenominator { denom: u64, p: u64 },
    #[error("no simple residue root: f({root}) or f'({root}) constraint fails mod p")]
    NoSimpleRoot { root: u64 },
    #[error("element has no square root: {reason}")]
    NoSquareRoot { reason: String },
}

/// Valuation of a truncated element.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Valuation {
    Finite(i64),
    /// Exact zero.
    Infinity,
    /// Every stored digit vanishes; the true valuation is `>= bound` but
    /// unknown (the element may even be zero).
    AtLeast(i64),
}

impl Valuation {
    pub fn known(self) -> Option<i64> {
        match self {
            Valuation::Finite(v) => Some(v),
            _ => None,
        }
    }

    pub fn is_determined(self) -> bool {
        !matches!(self, Valuation::AtLeast(_))
    }
}

/// A truncated valued-field element.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum FieldElement {
    /// Exact zero.
    Zero,
    /// `ϖ^val * (digits[0] + digits[1] ϖ + ...)`, leading digit nonzero,
    /// digits known on the stored window only (beyond it if `exact`).
    Finite {
        val: i64,
        digits: Vec<u64>,
        exact: bool,
    },
    /// All digits below `below` vanish, nothing known beyond: `O(ϖ^below)`.
    Vanishing { below: i64 },
}

impl FieldElement {
    pub fn is_zero(&self) -> bool {
        matches!(self, FieldElement::Zero)
    }

    /// Known window end: digits at positions `< end` are determined.
    fn known_end(&self) -> Option<i64> {
        match self {
            FieldElement::Zero => None,
            FieldElement::Finite { val, digits, exact } => {
                if *exact {
                    None
                } else {
                    Some(val + digits.len() as i64)
                }
            }
            FieldElement::Vanishing { below } => Some(*below),
        }
    }

    /// Digit at absolute position `pos`, if determined.
    pub fn digit(&self, pos: i64) -> Option<u64> {
        match self {
            FieldElement::Zero => Some(0),
            FieldElement::Finite { val, digits, exact } => {
                if pos < *val {
                    Some(0)
                } else {
                    let idx = (pos - val) as usize;
                    match digits.get(idx) {
                        Some(&d) => Some(d),
                        None if *exact => Some(0),
                        None => None,
                    }
                }
            }
            FieldElement::Vanishing { below } => {
                if pos < *below {
                    Some(0)
                } else {
                    None
                }
            }
        }
    }
}

/// Arithmetic context for one structure `K`: all element operations live
/// here so they can consult the prime, the characteristic, and the working
/// precision.
#[derive(Debug, Clone)]
pub struct LocalField {
    pub cfg: FieldConfig,
}

impl LocalField {
    pub fn new(cfg: FieldConfig) -> Self {
        LocalField { cfg }
    }

    pub fn p(&self) -> u64 {
        self.cfg.p
    }

    fn window(&self) -> usize {
        self.cfg.precision
    }

    /// Build an element from a valuation offset and raw digits (already in
    /// `[0, p)`). Leading zeros are stripped; `exact` asserts that every
    /// digit beyond the slice is zero.
    pub fn make(&self, val: i64, digits: &[u64], exact: bool) -> FieldElement {
        debug_assert!(digits.iter().all(|&d| d < self.p()));
        match digits.iter().position(|&d| d != 0) {
            Some(k) => FieldElement::Finite {
                val: val + k as i64,
                digits: digits[k..].to_vec(),
                exact,
            },
            None => {
                if exact {
                    FieldElement::Zero
                } else {
                    FieldElement::Vanishing {
                        below: val + digits.len() as i64,
                    }
                }
            }
        }
    }

    /// The chosen uniformizer: `t` in positive characteristic, `p` in
    /// characteristic zero. Either way a single digit 1 at valuation 1.
    pub fn uniformizer(&self) -> FieldElement {
        FieldElement::Finite {
            val: 1,
            digits: vec![1],
            exact: true,
        }
    }

    pub fn one(&self) -> FieldElement {
        FieldElement::Finite {
            val: 0,
            digits: vec![1],
            exact: true,
        }
    }

    /// Interpret an integer exactly.
    pub fn from_int(&self, n: i64) -> FieldElement {
        self.from_poly(&IntPoly::constant(n))
    }

    /// The coefficient map: interpret a polynomial in `t` by substituting
    /// the uniformizer.
    pub fn from_poly(&self, poly: &IntPoly) -> FieldElement {
        match self.cfg.characteristic {
            CharKind::Positive => {
                let digits: Vec<u64> = poly
                    .coeffs()
                    .iter()
                    .map(|&c| residue::reduce(c, self.p()))
                    .collect();
                self.make(0, &digits, true)
            }
            CharKind::Zero => {
                // exact integer evaluation at p, then base-p expansion
                let p = self.p();
                let mut pos = BigUint::ZERO;
                let mut neg = BigUint::ZERO;
                let mut pk = BigUint::one();
                for &c in poly.coeffs() {
                    if c >= 0 {
                        pos += &pk * c as u64;
                    } else {
                        neg += &pk * c.unsigned_abs();
                    }
                    pk *= p;
                }
                if pos >= neg {
                    let digits = biguint_digits(&(pos - neg), p, None);
                    self.make(0, &digits, true)
                } else {
                    // negative integers have infinite expansions; truncate
                    let value = neg - pos;
                    let w = self.window() + (value.bits() as usize / 2 + 2);
                    let modulus = BigUint::from(p).pow(w as u32);
                    let rep = &modulus - (value % &modulus);
                    let digits = biguint_digits(&rep, p, Some(w));
                    self.make(0, &digits, false)
                }
            }
        }
    }

    /// Interpret `poly / denom`; fails when the residue characteristic
    /// divides the denominator.
    pub fn from_rational(&self, poly: &IntPoly, denom: u64) -> Result<FieldElement, FieldError> {
        let num = self.from_poly(poly);
        if denom == 1 {
            return Ok(num);
        }
        if denom % self.p() == 0 {
            return Err(FieldError::BadDenominator {
                denom,
                p: self.p(),
            });
        }
        let d = self.from_int(denom as i64);
        self.div(&num, &d)
    }

    pub fn ord(&self, e: &FieldElement) -> Valuation {
        match e {
            FieldElement::Zero => Valuation::Infinity,
            FieldElement::Finite { val, .. } => Valuation::Finite(*val),
            FieldElement::Vanishing { below } => Valuation::AtLeast(*below),
        }
    }

    /// First nonzero digit; zero for exact zero; error when precision is
    /// exhausted without a determined leading digit.
    pub fn ac(&self, e: &FieldElement) -> Result<u64, FieldError> {
        match e {
            FieldElement::Zero => Ok(0),
            FieldElement::Finite { digits, .. } => Ok(digits[0]),
            FieldElement::Vanishing { .. } => Err(FieldError::AcUnknown),
        }
    }

    /// Residue of an integral element: its digit at position 0.
    pub fn residue(&self, e: &FieldElement) -> Result<u64, FieldError> {
        match self.ord(e) {
            Valuation::Infinity => Ok(0),
            Valuation::Finite(v) if v < 0 => Err(FieldError::NotIntegral),
            Valuation::Finite(_) => e.digit(0).ok_or(FieldError::AcUnknown),
            Valuation::AtLeast(b) => {
                if b > 0 {
                    Ok(0)
                } else {
                    Err(FieldError::AcUnknown)
                }
            }
        }
    }

    /// Multiply by `ϖ^k`.
    pub fn shift(&self, e: &FieldElement, k: i64) -> FieldElement {
        match e {
            FieldElement::Zero => FieldElement::Zero,
            FieldElement::Finite { val, digits, exact } => FieldElement::Finite {
                val: val + k,
                digits: digits.clone(),
                exact: *exact,
            },
            FieldElement::Vanishing { below } => FieldElement::Vanishing { below: below + k },
        }
    }

    pub fn add(&self, a: &FieldElement, b: &FieldElement) -> FieldElement {
        self.add_sub(a, b, false)
    }

    pub fn sub(&self, a: &FieldElement, b: &FieldElement) -> FieldElement {
        self.add_sub(a, b, true)
    }

    pub fn neg(&self, a: &FieldElement) -> FieldElement {
        match self.cfg.characteristic {
            CharKind::Positive => match a {
                FieldElement::Zero => FieldElement::Zero,
                FieldElement::Finite { val, digits, exact } => FieldElement::Finite {
                    val: *val,
                    digits: digits.iter().map(|&d| residue::sub(0, d, self.p())).collect(),
                    exact: *exact,
                },
                FieldElement::Vanishing { below } => FieldElement::Vanishing { below: *below },
            },
            CharKind::Zero => match a {
                FieldElement::Zero => FieldElement::Zero,
                FieldElement::Vanishing { below } => FieldElement::Vanishing { below: *below },
                FieldElement::Finite { val, digits, exact } => {
                    // p-adic complement; the tail is all p-1, so the result
                    // is never exact but extends to any window
                    let p = self.p();
                    let len = if *exact {
                        digits.len().max(self.window())
                    } else {
                        digits.len()
                    };
                    let mut out = vec![0u64; len];
                    out[0] = p - digits[0];
                    for (i, o) in out.iter_mut().enumerate().skip(1) {
                        *o = p - 1 - digits.get(i).copied().unwrap_or(0);
                    }
                    self.make(*val, &out, false)
                }
            },
        }
    }

    fn add_sub(&self, a: &FieldElement, b: &FieldElement, subtract: bool) -> FieldElement {
        match (a, b) {
            (FieldElement::Zero, _) => {
                if subtract {
                    self.neg(b)
                } else {
                    b.clone()
                }
            }
            (_, FieldElement::Zero) => a.clone(),
            _ => self.add_sub_general(a, b, subtract),
        }
    }

    fn add_sub_general(&self, a: &FieldElement, b: &FieldElement, subtract: bool) -> FieldElement {
        let p = self.p();
        let start_a = match a {
            FieldElement::Finite { val, .. } => *val,
            FieldElement::Vanishing { below } => *below,
            FieldElement::Zero => unreachable!(),
        };
        let start_b = match b {
            FieldElement::Finite { val, .. } => *val,
            FieldElement::Vanishing { below } => *below,
            FieldElement::Zero => unreachable!(),
        };
        let start = start_a.min(start_b);
        let both_exact = matches!(a, FieldElement::Finite { exact: true, .. })
            && matches!(b, FieldElement::Finite { exact: true, .. });
        // window: digits are valid strictly below every operand's known end
        let end = match (a.known_end(), b.known_end()) {
            (None, None) => {
                // both exact; leave room for carries
                let ea = match a {
                    FieldElement::Finite { val, digits, .. } => val + digits.len() as i64,
                    _ => start,
                };
                let eb = match b {
                    FieldElement::Finite { val, digits, .. } => val + digits.len() as i64,
                    _ => start,
                };
                ea.max(eb) + 1
            }
            (None, Some(e)) | (Some(e), None) => e,
            (Some(ea), Some(eb)) => ea.min(eb),
        };
        if end <= start {
            // the more vanishing operand swallows everything known
            return FieldElement::Vanishing { below: end };
        }
        let len = (end - start) as usize;
        let mut digits = vec![0u64; len];
        let da = |i: usize| a.digit(start + i as i64).unwrap_or(0);
        let db = |i: usize| b.digit(start + i as i64).unwrap_or(0);
        match self.cfg.characteristic {
            CharKind::Positive => {
                for (i, d) in digits.iter_mut().enumerate() {
                    *d = if subtract {
                        residue::sub(da(i), db(i), p)
                    } else {
                        residue::add(da(i), db(i), p)
                    };
                }
            }
            CharKind::Zero if subtract => {
                let mut borrow = 0u64;
                for (i, d) in digits.iter_mut().enumerate() {
                    let x = da(i);
                    let y = db(i) + borrow;
                    if x >= y {
                        *d = x - y;
                        borrow = 0;
                    } else {
                        *d = x + p - y;
                        borrow = 1;
                    }
                }
                if borrow != 0 {
                    // negative result: digits are the p-adic complement,
                    // correct within the window but no longer exact
                    return self.make(start, &digits, false);
                }
            }
            CharKind::Zero => {
                let mut carry = 0u64;
                for (i, d) in digits.iter_mut().enumerate() {
                    let s = da(i) + db(i) + carry;
                    *d = s % p;
                    carry = s / p;
                }
                if carry != 0 && both_exact {
                    digits.push(carry);
                }
            }
        }
        self.make(start, &digits, both_exact)
    }

    pub fn mul(&self, a: &FieldElement, b: &FieldElement) -> FieldElement {
        let p = self.p();
        match (a, b) {
            (FieldElement::Zero, _) | (_, FieldElement::Zero) => FieldElement::Zero,
            (FieldElement::Vanishing { below }, other)
            | (other, FieldElement::Vanishing { below }) => {
                let lower = match other {
                    FieldElement::Finite { val, .. } => *val,
                    FieldElement::Vanishing { below: b2 } => *b2,
                    FieldElement::Zero => unreachable!(),
                };
                FieldElement::Vanishing { below: below + lower }
            }
            (
                FieldElement::Finite { val: va, digits: da, exact: xa },
                FieldElement::Finite { val: vb, digits: db, exact: xb },
            ) => {
                let exact = *xa && *xb;
                // product digits are valid for min(len_a, len_b) places:
                // the unknown tail of one factor meets the leading digit of
                // the other exactly there
                let len = if exact {
                    da.len() + db.len()
                } else {
                    let la = if *xa { usize::MAX } else { da.len() };
                    let lb = if *xb { usize::MAX } else { db.len() };
                    la.min(lb)
                };
                let mut acc = vec![0u128; len + 1];
                for (i, &x) in da.iter().enumerate() {
                    if i >= len {
                        break;
                    }
                    for (j, &y) in db.iter().enumerate() {
                        if i + j >= len {
                            break;
                        }
                        acc[i + j] += x as u128 * y as u128;
                    }
                }
                let mut digits = vec![0u64; len];
                match self.cfg.characteristic {
                    CharKind::Positive => {
                        for (i, d) in digits.iter_mut().enumerate() {
                            *d = (acc[i] % p as u128) as u64;
                        }
                    }
                    CharKind::Zero => {
                        let mut carry: u128 = 0;
                        for (i, d) in digits.iter_mut().enumerate() {
                            let s = acc[i] + carry;
                            *d = (s % p as u128) as u64;
                            carry = s / p as u128;
                        }
                        if exact {
                            while carry > 0 {
                                digits.push((carry % p as u128) as u64);
                                carry /= p as u128;
                            }
                        }
                    }
                }
                self.make(va + vb, &digits, exact)
            }
        }
    }

    /// Inverse of a determined nonzero element, to its known window (at
    /// least the working precision for exact inputs).
    pub fn invert(&self, e: &FieldElement) -> Result<FieldElement, FieldError> {
        let (val, digits, exact) = match e {
            FieldElement::Zero => return Err(FieldError::DivisionByZero),
            FieldElement::Vanishing { below } => {
                return Err(FieldError::PossibleZero { below: *below })
            }
            FieldElement::Finite { val, digits, exact } => (*val, digits, *exact),
        };
        let p = self.p();
        let len = if exact {
            self.window().max(digits.len())
        } else {
            digits.len()
        };
        let mut unit = vec![0u64; len];
        for (i, u) in unit.iter_mut().enumerate() {
            *u = digits.get(i).copied().unwrap_or(0);
        }
        let inv_digits = match self.cfg.characteristic {
            CharKind::Positive => {
                // power-series inversion: e0 = 1/u0, then peel convolutions
                let u0inv = residue::inv(unit[0], p);
                let mut out = vec![0u64; len];
                out[0] = u0inv;
                for k in 1..len {
                    let mut s = 0u64;
                    for j in 1..=k {
                        s = residue::add(s, residue::mul(unit[j], out[k - j], p), p);
                    }
                    out[k] = residue::mul(residue::sub(0, s, p), u0inv, p);
                }
                out
            }
            CharKind::Zero => {
                // modular inverse of the unit part mod p^len
                let mut value = BigUint::ZERO;
                for &d in unit.iter().rev() {
                    value = value * p + d;
                }
                let modulus = BigUint::from(p).pow(len as u32);
                let inv = modinv(&value, &modulus, p, len as u32);
                biguint_digits(&inv, p, Some(len))
            }
        };
        Ok(self.make(-val, &inv_digits, false))
    }

    pub fn div(&self, a: &FieldElement, b: &FieldElement) -> Result<FieldElement, FieldError> {
        Ok(self.mul(a, &self.invert(b)?))
    }

    /// Exact integer power.
    pub fn pow(&self, e: &FieldElement, n: u32) -> FieldElement {
        let mut acc = self.one();
        for _ in 0..n {
            acc = self.mul(&acc, e);
        }
        acc
    }

    /// Equality as a three-valued decision: `Some(true)` / `Some(false)`
    /// when determined, `None` when precision cannot tell.
    pub fn try_eq(&self, a: &FieldElement, b: &FieldElement) -> Option<bool> {
        match self.ord(&self.sub(a, b)) {
            Valuation::Infinity => Some(true),
            Valuation::Finite(_) => Some(false),
            Valuation::AtLeast(_) => None,
        }
    }

    /// Forget all digits at positions `>= end`, weakening the element to
    /// what is certified below `end`.
    pub fn truncate_to(&self, e: &FieldElement, end: i64) -> FieldElement {
        match e {
            FieldElement::Zero => FieldElement::Zero,
            FieldElement::Vanishing { below } => FieldElement::Vanishing {
                below: (*below).min(end),
            },
            FieldElement::Finite { val, digits, .. } => {
                if end <= *val {
                    return FieldElement::Vanishing { below: end };
                }
                let keep = ((end - val) as usize).min(digits.len());
                self.make(*val, &digits[..keep], false)
            }
        }
    }

    /// Square root of an element of even determined valuation whose leading
    /// digit is a residue square.
    pub fn sqrt(&self, e: &FieldElement) -> Result<FieldElement, FieldError> {
        let (val, lead) = match e {
            FieldElement::Zero => return Ok(FieldElement::Zero),
            FieldElement::Vanishing { below } => {
                return Err(FieldError::PossibleZero { below: *below })
            }
            FieldElement::Finite { val, digits, .. } => (*val, digits[0]),
        };
        if val % 2 != 0 {
            return Err(FieldError::NoSquareRoot {
                reason: format!("odd valuation {val}"),
            });
        }
        let root0 = residue::sqrt(lead, self.p()).ok_or_else(|| FieldError::NoSquareRoot {
            reason: format!("{lead} is not a residue square mod {}", self.p()),
        })?;
        let unit = self.shift(e, -val);
        // x^2 - unit has the simple residue root root0 (p odd)
        let root = super::hensel::hensel_lift(
            self,
            &[self.neg(&unit), FieldElement::Zero, self.one()],
            root0,
        )?;
        Ok(self.shift(&root, val / 2))
    }
}

fn biguint_digits(n: &BigUint, p: u64, pad_to: Option<usize>) -> Vec<u64> {
    let mut digits = Vec::new();
    let mut n = n.clone();
    let p = BigUint::from(p);
    while !n.is_zero() {
        digits.push((&n % &p).to_u64().unwrap());
        n /= &p;
    }
    if let Some(k) = pad_to {
        digits.resize(k.max(digits.len()), 0);
        digits.truncate(k);
    }
    digits
}

/// Inverse of `value` mod `p^k` by lifting the mod-p inverse.
fn modinv(value: &BigUint, modulus: &BigUint, p: u64, k: u32) -> BigUint {
    let v0 = (value % p).to_u64().unwrap();
    let mut inv = BigUint::from(residue::inv(v0, p));
    // Newton: inv <- inv * (2 - value * inv), doubling correct digits
    let two = BigUint::from(2u32);
    let mut bits = 1;
    while bits < k {
        let prod = (value * &inv) % modulus;
        let correction = if two >= prod {
            &two - &prod
        } else {
            modulus - ((prod - &two) % modulus)
        };
        inv = (inv * correction) % modulus;
        bits *= 2;
    }
    inv % modulus
}

impl LocalField {
    /// Render an element as a digit expansion for reports.
    pub fn display(&self, e: &FieldElement) -> String {
        let sym = match self.cfg.characteristic {
            CharKind::Positive => "t".to_string(),
            CharKind::Zero => format!("{}", self.p()),
        };
        match e {
            FieldElement::Zero => "0".to_string(),
            FieldElement::Vanishing { below } => format!("O({sym}^{below})"),
            FieldElement::Finite { val, digits, exact } => {
                let mut parts = Vec::new();
                for (i, &d) in digits.iter().enumerate() {
                    if d == 0 {
                        continue;
                    }
                    let k = val + i as i64;
                    parts.push(match k {
                        0 => format!("{d}"),
                        1 if d == 1 => sym.clone(),
                        1 => format!("{d}*{sym}"),
                        _ if d == 1 => format!("{sym}^{k}"),
                        _ => format!("{d}*{sym}^{k}"),
                    });
                }
                let mut s = parts.join(" + ");
                if !exact {
                    let end = val + digits.len() as i64;
                    s.push_str(&format!(" + O({sym}^{end})"));
                }
                s
            }
        }
    }
}

impl fmt::Display for Valuation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Valuation::Finite(v) => write!(f, "{v}"),
            Valuation::Infinity => write!(f, "oo"),
            Valuation::AtLeast(b) => write!(f, ">={b}?"),
        }
    }
}
