//! Pretty-printer inverse to the parser: `parse(print(f))` rebuilds `f`
//! node-for-node on elaborator normal forms.

use super::ast::{BoundAnnotation, Formula, Quantifier, Rel, RingOp, Term};
use std::collections::HashSet;
use std::fmt::Write;

struct Printer {
    out: String,
    /// Free variables that still need a sort ascription at their first
    /// free occurrence.
    pending: HashSet<String>,
    bound: Vec<String>,
}

// formula precedence levels
const P_IFF: u8 = 1;
const P_IMPLIES: u8 = 2;
const P_OR: u8 = 3;
const P_AND: u8 = 4;
const P_UNARY: u8 = 5;

// term precedence levels
const T_SUM: u8 = 1;
const T_MUL: u8 = 2;
const T_NEG: u8 = 3;
const T_ATOM: u8 = 4;

impl Printer {
    fn formula(&mut self, f: &Formula, min_prec: u8) {
        let prec = match f {
            Formula::Iff(..) => P_IFF,
            Formula::Implies(..) => P_IMPLIES,
            Formula::Or(..) => P_OR,
            Formula::And(..) => P_AND,
            Formula::Not(..) | Formula::Quant(..) => P_UNARY,
            Formula::Atom(..) => P_UNARY + 1,
        };
        let parens = prec < min_prec;
        if parens {
            self.out.push('(');
        }
        match f {
            Formula::Atom(rel, a, b) => {
                self.term(a, T_SUM);
                self.out.push_str(match rel {
                    Rel::Eq => " = ",
                    Rel::Lt => " < ",
                });
                self.term(b, T_SUM);
            }
            Formula::Not(g) => {
                self.out.push('!');
                self.formula(g, P_UNARY);
            }
            Formula::And(a, b) => {
                self.formula(a, P_AND);
                self.out.push_str(" & ");
                self.formula(b, P_AND + 1);
            }
            Formula::Or(a, b) => {
                self.formula(a, P_OR);
                self.out.push_str(" | ");
                self.formula(b, P_OR + 1);
            }
            Formula::Implies(a, b) => {
                self.formula(a, P_IMPLIES + 1);
                self.out.push_str(" -> ");
                self.formula(b, P_IMPLIES);
            }
            Formula::Iff(a, b) => {
                self.formula(a, P_IFF);
                self.out.push_str(" <-> ");
                self.formula(b, P_IFF + 1);
            }
            Formula::Quant(q, v, bound, body) => {
                self.out.push_str(match q {
                    Quantifier::Forall => "forall ",
                    Quantifier::Exists => "exists ",
                });
                let _ = write!(self.out, "{}:{}", v.name, v.sort.short());
                match bound {
                    Some(BoundAnnotation::MinVal(n)) => {
                        let _ = write!(self.out, "[ord >= {n}]");
                    }
                    Some(BoundAnnotation::Range(lo, hi)) => {
                        let _ = write!(self.out, "[{lo}..{hi}]");
                    }
                    None => {}
                }
                self.out.push(' ');
                self.bound.push(v.name.clone());
                self.formula(body, P_UNARY);
                self.bound.pop();
            }
        }
        if parens {
            self.out.push(')');
        }
    }

    fn term(&mut self, t: &Term, min_prec: u8) {
        let prec = match t {
            Term::Bin(RingOp::Add | RingOp::Sub, ..) => T_SUM,
            Term::Bin(RingOp::Mul, ..) => T_MUL,
            Term::Neg(..) => T_NEG,
            _ => T_ATOM,
        };
        let parens = prec < min_prec;
        if parens {
            self.out.push('(');
        }
        match t {
            Term::Var(v) => {
                let is_bound = self.bound.iter().any(|b| b == &v.name);
                if !is_bound && self.pending.remove(&v.name) {
                    let _ = write!(self.out, "{}:{}", v.name, v.sort.short());
                } else {
                    self.out.push_str(&v.name);
                }
            }
            Term::VfConst(c) => {
                if c.denom == 1 {
                    let _ = write!(self.out, "[{}]", c.poly);
                } else {
                    let _ = write!(self.out, "[{}/{}]", c.poly, c.denom);
                }
            }
            Term::RfConst(k) => {
                let _ = write!(self.out, "#{k}");
            }
            Term::VgConst(k) => {
                let _ = write!(self.out, "{k}");
            }
            Term::Bin(op, a, b) => {
                self.term(a, prec);
                self.out.push_str(match op {
                    RingOp::Add => " + ",
                    RingOp::Sub => " - ",
                    RingOp::Mul => "*",
                });
                self.term(b, prec + 1);
            }
            Term::Neg(a) => {
                self.out.push('-');
                self.term(a, T_ATOM);
            }
            Term::Ord(a) => {
                self.out.push_str("ord(");
                self.term(a, T_SUM);
                self.out.push(')');
            }
            Term::Ac(a) => {
                self.out.push_str("ac(");
                self.term(a, T_SUM);
                self.out.push(')');
            }
        }
        if parens {
            self.out.push(')');
        }
    }
}

/// Render a formula in the concrete grammar, ascribing each free variable at
/// its first free occurrence so all sorts survive a round trip.
pub fn print_formula(f: &Formula) -> String {
    let fv = super::ast::free_variables(f);
    let mut p = Printer {
        out: String::new(),
        pending: fv.all().map(|(n, _)| n.to_string()).collect(),
        bound: Vec::new(),
    };
    p.formula(f, 0);
    p.out
}

/// Render a term (no ascriptions; used for diagnostics).
pub fn print_term(t: &Term) -> String {
    let mut p = Printer {
        out: String::new(),
        pending: HashSet::new(),
        bound: Vec::new(),
    };
    p.term(t, 0);
    p.out
}
