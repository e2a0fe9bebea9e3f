//! Runtime values和 three-valued truth for the evaluator.

use crate::field::FieldElement;
use std::fmt;

/// Kleene three-valued truth.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, serde::Serialize)]
pub enum TruthValue {
    True,
    False,
    Unknown,
}

impl TruthValue {
    pub fn from_bool(b: bool) -> Self {
        if b {
            TruthValue::True
        } else {
            TruthValue::False
        }
    }

    pub fn not(self) -> Self {
        match self {
            TruthValue::True => TruthValue::False,
            TruthValue::False => TruthValue::True,
            TruthValue::Unknown => TruthValue::Unknown,
        }
    }

    pub fn and(self, other: Self) -> Self {
        match (self, other) {
            (TruthValue::False, _) | (_, TruthValue::False) => TruthValue::False,
            (TruthValue::True, TruthValue::True) => TruthValue::True,
            _ => TruthValue::Unknown,
        }
    }

    pub fn or(self, other: Self) -> Self {
        match (self, other) {
            (TruthValue::True, _) | (_, TruthValue::True) => TruthValue::True,
            (TruthValue::False, TruthValue::False) => TruthValue::False,
            _ => TruthValue::Unknown,
        }
    }

    pub fn implies(self, other: Self) -> Self {
        self.not().or(other)
    }

    pub fn iff(self, other: Self) -> Self {
        self.and(other).or(self.not().and(other.not()))
    }

    pub fn is_determined(self) -> bool {
        self != TruthValue::Unknown
    }
}

impl fmt::Display for TruthValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            TruthValue::True => "true",
            TruthValue::False => "false",
            TruthValue::Unknown => "unknown",
        })
    }
}

/// Residue-field value, possibly not determined by the stored digits.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RfValue {
    Known(u64),
    Unknown,
}

/// Extended integers for value-group arithmetic with the infinity sentinel.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Ext {
    NegInf,
    Int(i64),
    PosInf,
}

impl Ext {
    fn add(self, other: Self) -> Self {
        use Ext::*;
        match (self, other) {
            (Int(a), Int(b)) => Int(a + b),
            (PosInf, NegInf) | (NegInf, PosInf) => {
                panic!("indeterminate sum of opposite infinities")
            }
            (PosInf, _) | (_, PosInf) => PosInf,
            (NegInf, _) | (_, NegInf) => NegInf,
        }
    }

    fn neg(self) -> Self {
        match self {
            Ext::NegInf => Ext::PosInf,
            Ext::Int(a) => Ext::Int(-a),
            Ext::PosInf => Ext::NegInf,
        }
    }

    fn mul(self, other: Self) -> Self {
        use Ext::*;
        match (self, other) {
            (Int(a), Int(b)) => Int(a * b),
            // the zero convention keeps multiplication total; the infinity
            // only ever arises from the valuation of exact zero
            (Int(0), _) | (_, Int(0)) => Int(0),
            (PosInf, PosInf) | (NegInf, NegInf) => PosInf,
            (PosInf, NegInf) | (NegInf, PosInf) => NegInf,
            (PosInf, Int(a)) | (Int(a), PosInf) => {
                if a > 0 {
                    PosInf
                } else {
                    NegInf
                }
            }
            (NegInf, Int(a)) | (Int(a), NegInf) => {
                if a > 0 {
                    NegInf
                } else {
                    PosInf
                }
            }
        }
    }

    fn le(self, other: Self) -> bool {
        use Ext::*;
        match (self, other) {
            (NegInf, _) | (_, PosInf) => true,
            (Int(a), Int(b)) => a <= b,
            _ => false,
        }
    }

    fn lt(self, other: Self) -> bool {
        self.le(other) && self != other
    }
}

/// A value-group value known only up to an interval `[lo, hi]`.
///
/// Valuations of truncated elements are intervals; exact integers are
/// degenerate intervals.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct VgValue {
    pub lo: Ext,
    pub hi: Ext,
}

impl VgValue {
    pub fn int(n: i64) -> Self {
        VgValue { lo: Ext::Int(n), hi: Ext::Int(n) }
    }

    pub fn infinity() -> Self {
        VgValue { lo: Ext::PosInf, hi: Ext::PosInf }
    }

    pub fn at_least(b: i64) -> Self {
        VgValue { lo: Ext::Int(b), hi: Ext::PosInf }
    }

    pub fn exact(self) -> Option<i64> {
        match (self.lo, self.hi) {
            (Ext::Int(a), Ext::Int(b)) if a == b => Some(a),
            _ => None,
        }
    }

    pub fn add(self, other: Self) -> Self {
        VgValue {
            lo: self.lo.add(other.lo),
            hi: self.hi.add(other.hi),
        }
    }

    pub fn neg(self) -> Self {
        VgValue { lo: self.hi.neg(), hi: self.lo.neg() }
    }

    pub fn sub(self, other: Self) -> Self {
        self.add(other.neg())
    }

    pub fn mul(self, other: Self) -> Self {
        let corners = [
            self.lo.mul(other.lo),
            self.lo.mul(other.hi),
            self.hi.mul(other.lo),
            self.hi.mul(other.hi),
        ];
        let mut lo = corners[0];
        let mut hi = corners[0];
        for &c in &corners[1..] {
            if c.le(lo) {
                lo = c;
            }
            if hi.le(c) {
                hi = c;
            }
        }
        VgValue { lo, hi }
    }

    /// Three-valued equality.
    pub fn eq(self, other: Self) -> TruthValue {
        match (self.exact(), other.exact()) {
            (Some(a), Some(b)) => TruthValue::from_bool(a == b),
            _ => {
                if self.lo == Ext::PosInf && other.lo == Ext::PosInf {
                    // both are the valuation of exact zero
                    return TruthValue::True;
                }
                // disjoint intervals cannot be equal
                if !self.lo.le(other.hi) || !other.lo.le(self.hi) {
                    TruthValue::False
                } else {
                    TruthValue::Unknown
                }
            }
        }
    }

    /// Three-valued strict order.
    pub fn lt(self, other: Self) -> TruthValue {
        if self.hi.lt(other.lo) {
            return TruthValue::True;
        }
        // not less for every pair: lo >= other's hi
        if other.hi.le(self.lo) {
            return TruthValue::False;
        }
        TruthValue::Unknown
    }
}

/// A runtime value of any sort.
#[derive(Debug, Clone, PartialEq)]
pub enum Value {
    Vf(FieldElement),
    Rf(RfValue),
    Vg(VgValue),
}
