//! Seeded random generation of well-sorted formulas in elaborator normal
//! form. Drives the parser round-trip property and the randomized
//! sort-checker comparison.

use super::ast::{BoundAnnotation, Formula, Quantifier, Sort, Term, Var, VfConst};
use crate::poly::IntPoly;
use num_integer::Integer;
use rand::prelude::*;

const VF_NAMES: &[&str] = &["x", "y", "z"];
const RF_NAMES: &[&str] = &["r", "s", "u"];
const VG_NAMES: &[&str] = &["w", "v", "m"];

pub struct FormulaGen<R: Rng> {
    rng: R,
}

impl<R: Rng> FormulaGen<R> {
    pub fn new(rng: R) -> Self {
        FormulaGen { rng }
    }

    fn name(&mut self, sort: Sort) -> String {
        let pool = match sort {
            Sort::ValuedField => VF_NAMES,
            Sort::ResidueField => RF_NAMES,
            Sort::ValueGroup => VG_NAMES,
        };
        (*pool.choose(&mut self.rng).unwrap()).to_string()
    }

    fn sort(&mut self) -> Sort {
        *[Sort::ValuedField, Sort::ResidueField, Sort::ValueGroup]
            .choose(&mut self.rng)
            .unwrap()
    }

    fn vf_const(&mut self) -> VfConst {
        let deg = self.rng.gen_range(0..3);
        let coeffs: Vec<i64> = (0..=deg).map(|_| self.rng.gen_range(-4..5)).collect();
        let poly = IntPoly::new(coeffs);
        let denom: u64 = *[1u64, 1, 1, 2, 3].choose(&mut self.rng).unwrap();
        if poly.is_zero() {
            return VfConst::poly(poly);
        }
        // keep the printed form canonical
        let mut g = denom;
        for &c in poly.coeffs() {
            g = g.gcd(&c.unsigned_abs());
        }
        if g > 1 {
            let coeffs = poly.coeffs().iter().map(|&c| c / g as i64).collect();
            VfConst::with_denom(IntPoly::new(coeffs), denom / g)
        } else {
            VfConst::with_denom(poly, denom)
        }
    }

    fn leaf(&mut self, sort: Sort, with_var: bool) -> Term {
        if with_var || self.rng.gen_bool(0.5) {
            return Term::var(self.name(sort), sort);
        }
        match sort {
            Sort::ValuedField => Term::VfConst(self.vf_const()),
            Sort::ResidueField => Term::RfConst(self.rng.gen_range(-6..7)),
            Sort::ValueGroup => Term::VgConst(self.rng.gen_range(-6..7)),
        }
    }

    /// Children for a binary node. In the valued-field sort one side always
    /// carries a variable and the other side is a leaf or variable-bearing,
    /// so no composite constant subtree survives to be folded away.
    fn bin_children(&mut self, sort: Sort, depth: u32, with_var: bool) -> (Term, Term) {
        if sort == Sort::ValuedField {
            let carrier = self.term(sort, depth - 1, true);
            let other = if self.rng.gen_bool(0.5) {
                self.leaf(sort, false)
            } else {
                self.term(sort, depth - 1, true)
            };
            if self.rng.gen_bool(0.5) {
                (carrier, other)
            } else {
                (other, carrier)
            }
        } else {
            let var_side = self.rng.gen_bool(0.5);
            let a = self.term(sort, depth - 1, with_var && var_side);
            let b = self.term(sort, depth - 1, with_var && !var_side);
            (a, b)
        }
    }

    /// A term of the given sort. When `with_var` is true the term contains
    /// at least one variable. Valued-field terms keep composite subtrees
    /// variable-bearing so that constant folding cannot collapse them.
    fn term(&mut self, sort: Sort, depth: u32, with_var: bool) -> Term {
        if depth == 0 || self.rng.gen_bool(0.35) {
            return self.leaf(sort, with_var);
        }
        match self.rng.gen_range(0..6) {
            0 | 1 => {
                let (a, b) = self.bin_children(sort, depth, with_var);
                if self.rng.gen_bool(0.5) {
                    Term::add(a, b)
                } else {
                    Term::sub(a, b)
                }
            }
            2 => {
                let (a, b) = self.bin_children(sort, depth, with_var);
                Term::mul(a, b)
            }
            3 => {
                // negation of a variable-containing term stays in normal form
                Term::Neg(Box::new(self.term(sort, depth - 1, true)))
            }
            4 if sort == Sort::ValueGroup => {
                let with_var = self.rng.gen_bool(0.8);
                Term::ord(self.term(Sort::ValuedField, depth - 1, with_var))
            }
            4 if sort == Sort::ResidueField => {
                let with_var = self.rng.gen_bool(0.8);
                Term::ac(self.term(Sort::ValuedField, depth - 1, with_var))
            }
            _ => self.term(sort, depth - 1, with_var),
        }
    }

    fn atom(&mut self, depth: u32) -> Formula {
        let sort = self.sort();
        // valued-field terms must not be all-constant on both sides, or
        // folding would merge them differently than written
        let lhs_var = sort == Sort::ValuedField;
        let lhs = self.term(sort, depth, lhs_var);
        let rhs = self.term(sort, depth, false);
        if sort == Sort::ValueGroup && self.rng.gen_bool(0.4) {
            Formula::lt(lhs, rhs)
        } else {
            Formula::eq(lhs, rhs)
        }
    }

    pub fn formula(&mut self, depth: u32) -> Formula {
        if depth == 0 || self.rng.gen_bool(0.3) {
            return self.atom(depth.min(2));
        }
        match self.rng.gen_range(0..7) {
            0 => Formula::not(self.formula(depth - 1)),
            1 => Formula::and(self.formula(depth - 1), self.formula(depth - 1)),
            2 => Formula::or(self.formula(depth - 1), self.formula(depth - 1)),
            3 => Formula::Implies(
                Box::new(self.formula(depth - 1)),
                Box::new(self.formula(depth - 1)),
            ),
            4 => Formula::Iff(
                Box::new(self.formula(depth - 1)),
                Box::new(self.formula(depth - 1)),
            ),
            _ => {
                let sort = self.sort();
                let name = self.name(sort);
                let bound = match sort {
                    Sort::ValuedField if self.rng.gen_bool(0.7) => {
                        Some(BoundAnnotation::MinVal(self.rng.gen_range(-2..3)))
                    }
                    Sort::ValueGroup if self.rng.gen_bool(0.7) => {
                        let lo = self.rng.gen_range(-5..0);
                        let hi = self.rng.gen_range(0..6);
                        Some(BoundAnnotation::Range(lo, hi))
                    }
                    _ => None,
                };
                let q = if self.rng.gen_bool(0.5) {
                    Quantifier::Forall
                } else {
                    Quantifier::Exists
                };
                Formula::Quant(q, Var::new(name, sort), bound, Box::new(self.formula(depth - 1)))
            }
        }
    }
}

/// Deterministic stream of random well-sorted formulas.
pub fn random_formulas(seed: u64, count: usize, depth: u32) -> Vec<Formula> {
    let rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
    let mut gen = FormulaGen::new(rng);
    (0..count).map(|_| gen.formula(depth)).collect()
}
