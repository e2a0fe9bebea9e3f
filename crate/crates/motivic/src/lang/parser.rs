//! Lexer and parser for the concrete formula grammar.
//!
//! The grammar (see the repository README for the EBNF) blends terms and
//! formulas in one expression language; elaboration separates the two and
//! infers sorts for unascribed free variables. Bound variables always carry
//! a sort at the binder.

use super::ast::{BoundAnnotation, Quantifier, Sort};
use crate::poly::IntPoly;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ParseError {
    #[error("parse error at byte {pos}: {msg}")]
    Syntax { pos: usize, msg: String },
    #[error("sort error: {0}")]
    Sort(String),
}

pub(super) fn syntax(pos: usize, msg: impl Into<String>) -> ParseError {
    ParseError::Syntax { pos, msg: msg.into() }
}

// ---------------------------------------------------------------- tokens --

#[derive(Debug, Clone, PartialEq, Eq)]
pub(super) enum Tok {
    Int(i64),
    Ident(String),
    KwForall,
    KwExists,
    KwNot,
    KwAnd,
    KwOr,
    KwOrd,
    KwAc,
    KwT,
    KwSort(Sort),
    LParen,
    RParen,
    LBracket,
    RBracket,
    Hash,
    Plus,
    Minus,
    Star,
    Caret,
    Slash,
    Amp,
    Pipe,
    Bang,
    Arrow,
    DArrow,
    Colon,
    DotDot,
    Eq,
    Ne,
    Lt,
    Le,
    Gt,
    Ge,
}

#[derive(Debug, Clone)]
pub(super) struct Spanned {
    pub tok: Tok,
    pub pos: usize,
}

pub(super) fn lex(input: &str) -> Result<Vec<Spanned>, ParseError> {
    let bytes = input.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i] as char;
        let start = i;
        match c {
            ' ' | '\t' | '\n' | '\r' => {
                i += 1;
                continue;
            }
            '(' => out.push(Spanned { tok: Tok::LParen, pos: start }),
            ')' => out.push(Spanned { tok: Tok::RParen, pos: start }),
            '[' => out.push(Spanned { tok: Tok::LBracket, pos: start }),
            ']' => out.push(Spanned { tok: Tok::RBracket, pos: start }),
            '#' => out.push(Spanned { tok: Tok::Hash, pos: start }),
            '+' => out.push(Spanned { tok: Tok::Plus, pos: start }),
            '*' => out.push(Spanned { tok: Tok::Star, pos: start }),
            '^' => out.push(Spanned { tok: Tok::Caret, pos: start }),
            '/' => out.push(Spanned { tok: Tok::Slash, pos: start }),
            '&' => out.push(Spanned { tok: Tok::Amp, pos: start }),
            '|' => out.push(Spanned { tok: Tok::Pipe, pos: start }),
            ':' => out.push(Spanned { tok: Tok::Colon, pos: start }),
            '-' => {
                if bytes.get(i + 1) == Some(&b'>') {
                    i += 1;
                    out.push(Spanned { tok: Tok::Arrow, pos: start });
                } else {
                    out.push(Spanned { tok: Tok::Minus, pos: start });
                }
            }
            '<' => {
                if bytes.get(i + 1) == Some(&b'-') && bytes.get(i + 2) == Some(&b'>') {
                    i += 2;
                    out.push(Spanned { tok: Tok::DArrow, pos: start });
                } else if bytes.get(i + 1) == Some(&b'=') {
                    i += 1;
                    out.push(Spanned { tok: Tok::Le, pos: start });
                } else {
                    out.push(Spanned { tok: Tok::Lt, pos: start });
                }
            }
            '>' => {
                if bytes.get(i + 1) == Some(&b'=') {
                    i += 1;
                    out.push(Spanned { tok: Tok::Ge, pos: start });
                } else {
                    out.push(Spanned { tok: Tok::Gt, pos: start });
                }
            }
            '=' => out.push(Spanned { tok: Tok::Eq, pos: start }),
            '!' => {
                if bytes.get(i + 1) == Some(&b'=') {
                    i += 1;
                    out.push(Spanned { tok: Tok::Ne, pos: start });
                } else {
                    out.push(Spanned { tok: Tok::Bang, pos: start });
                }
            }
            '.' => {
                if bytes.get(i + 1) == Some(&b'.') {
                    i += 1;
                    out.push(Spanned { tok: Tok::DotDot, pos: start });
                } else {
                    return Err(syntax(start, "unexpected `.`"));
                }
            }
            '0'..='9' => {
                let mut j = i;
                while j < bytes.len() && bytes[j].is_ascii_digit() {
                    j += 1;
                }
                let text = &input[i..j];
                let value: i64 = text
                    .parse()
                    .map_err(|_| syntax(start, format!("integer literal `{text}` out of range")))?;
                out.push(Spanned { tok: Tok::Int(value), pos: start });
                i = j;
                continue;
            }
            'a'..='z' | 'A'..='Z' | '_' => {
                let mut j = i;
                while j < bytes.len()
                    && (bytes[j].is_ascii_alphanumeric() || bytes[j] == b'_' || bytes[j] == b'\'')
                {
                    j += 1;
                }
                let word = &input[i..j];
                let tok = match word {
                    "forall" => Tok::KwForall,
                    "exists" => Tok::KwExists,
                    "not" => Tok::KwNot,
                    "and" => Tok::KwAnd,
                    "or" => Tok::KwOr,
                    "ord" => Tok::KwOrd,
                    "ac" => Tok::KwAc,
                    "t" => Tok::KwT,
                    "VF" => Tok::KwSort(Sort::ValuedField),
                    "RF" => Tok::KwSort(Sort::ResidueField),
                    "VG" => Tok::KwSort(Sort::ValueGroup),
                    _ => Tok::Ident(word.to_string()),
                };
                out.push(Spanned { tok, pos: start });
                i = j;
                continue;
            }
            _ => return Err(syntax(start, format!("unexpected character `{c}`"))),
        }
        i += 1;
    }
    Ok(out)
}

// ---------------------------------------------------- surface expressions --

/// Parsed but not yet sorted: terms and formulas share one tree.
#[derive(Debug, Clone, PartialEq)]
pub(super) enum SExpr {
    /// Integer literal, sort resolved during elaboration.
    Lit(i64),
    /// The uniformizer symbol `t`.
    T,
    /// Bracketed valued-field constant `[poly]` or `[poly/N]`.
    VfLit(IntPoly, u64),
    /// Residue-field constant `#k`.
    RfLit(i64),
    Var(String, Option<Sort>),
    Neg(Box<SExpr>),
    Add(Box<SExpr>, Box<SExpr>),
    Sub(Box<SExpr>, Box<SExpr>),
    Mul(Box<SExpr>, Box<SExpr>),
    Pow(Box<SExpr>, u32),
    Ord(Box<SExpr>),
    Ac(Box<SExpr>),
    Rel(SRel, Box<SExpr>, Box<SExpr>),
    Not(Box<SExpr>),
    And(Box<SExpr>, Box<SExpr>),
    Or(Box<SExpr>, Box<SExpr>),
    Implies(Box<SExpr>, Box<SExpr>),
    Iff(Box<SExpr>, Box<SExpr>),
    Quant(Quantifier, String, Sort, Option<BoundAnnotation>, Box<SExpr>),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(super) enum SRel {
    Eq,
    Ne,
    Lt,
    Le,
    Gt,
    Ge,
}

pub(super) struct Parser {
    toks: Vec<Spanned>,
    at: usize,
    len: usize,
}

impl Parser {
    pub fn new(input: &str) -> Result<Self, ParseError> {
        let toks = lex(input)?;
        Ok(Parser { at: 0, len: input.len(), toks })
    }

    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.at).map(|s| &s.tok)
    }

    fn pos(&self) -> usize {
        self.toks.get(self.at).map(|s| s.pos).unwrap_or(self.len)
    }

    fn bump(&mut self) -> Option<Tok> {
        let tok = self.toks.get(self.at).map(|s| s.tok.clone());
        self.at += 1;
        tok
    }

    fn eat(&mut self, tok: &Tok) -> bool {
        if self.peek() == Some(tok) {
            self.at += 1;
            true
        } else {
            false
        }
    }

    fn expect(&mut self, tok: Tok, what: &str) -> Result<(), ParseError> {
        if self.eat(&tok) {
            Ok(())
        } else {
            Err(syntax(self.pos(), format!("expected {what}")))
        }
    }

    fn expect_int(&mut self, what: &str) -> Result<i64, ParseError> {
        let neg = self.eat(&Tok::Minus);
        match self.bump() {
            Some(Tok::Int(n)) => Ok(if neg { -n } else { n }),
            _ => Err(syntax(self.pos(), format!("expected {what}"))),
        }
    }

    pub fn parse_expr_to_end(&mut self) -> Result<SExpr, ParseError> {
        let e = self.iff()?;
        if self.at != self.toks.len() {
            return Err(syntax(self.pos(), "trailing input after formula"));
        }
        Ok(e)
    }

    fn iff(&mut self) -> Result<SExpr, ParseError> {
        let mut lhs = self.implies()?;
        while self.eat(&Tok::DArrow) {
            let rhs = self.implies()?;
            lhs = SExpr::Iff(Box::new(lhs), Box::new(rhs));
        }
        Ok(lhs)
    }

    fn implies(&mut self) -> Result<SExpr, ParseError> {
        let lhs = self.or()?;
        if self.eat(&Tok::Arrow) {
            let rhs = self.implies()?;
            return Ok(SExpr::Implies(Box::new(lhs), Box::new(rhs)));
        }
        Ok(lhs)
    }

    fn or(&mut self) -> Result<SExpr, ParseError> {
        let mut lhs = self.and()?;
        while self.eat(&Tok::Pipe) || self.eat(&Tok::KwOr) {
            let rhs = self.and()?;
            lhs = SExpr::Or(Box::new(lhs), Box::new(rhs));
        }
        Ok(lhs)
    }

    fn and(&mut self) -> Result<SExpr, ParseError> {
        let mut lhs = self.prefix()?;
        while self.eat(&Tok::Amp) || self.eat(&Tok::KwAnd) {
            let rhs = self.prefix()?;
            lhs = SExpr::And(Box::new(lhs), Box::new(rhs));
        }
        Ok(lhs)
    }

    fn prefix(&mut self) -> Result<SExpr, ParseError> {
        if self.eat(&Tok::Bang) || self.eat(&Tok::KwNot) {
            let inner = self.prefix()?;
            return Ok(SExpr::Not(Box::new(inner)));
        }
        if self.peek() == Some(&Tok::KwForall) || self.peek() == Some(&Tok::KwExists) {
            return self.quantifier();
        }
        self.comparison()
    }

    fn quantifier(&mut self) -> Result<SExpr, ParseError> {
        let q = match self.bump() {
            Some(Tok::KwForall) => Quantifier::Forall,
            Some(Tok::KwExists) => Quantifier::Exists,
            _ => unreachable!(),
        };
        let name = match self.bump() {
            Some(Tok::Ident(n)) => n,
            _ => return Err(syntax(self.pos(), "expected variable name after quantifier")),
        };
        self.expect(Tok::Colon, "`:` and a sort after bound variable")?;
        let sort = match self.bump() {
            Some(Tok::KwSort(s)) => s,
            _ => return Err(syntax(self.pos(), "expected sort (VF, RF, or VG)")),
        };
        let bound = self.binder_bound(sort)?;
        let body = self.prefix()?;
        Ok(SExpr::Quant(q, name, sort, bound, Box::new(body)))
    }

    fn binder_bound(&mut self, sort: Sort) -> Result<Option<BoundAnnotation>, ParseError> {
        if !self.eat(&Tok::LBracket) {
            return Ok(None);
        }
        let ann = match sort {
            Sort::ValuedField => {
                // [ord >= N]
                self.expect(Tok::KwOrd, "`ord` in valued-field quantifier bound")?;
                self.expect(Tok::Ge, "`>=` in valued-field quantifier bound")?;
                let n = self.expect_int("integer bound")?;
                BoundAnnotation::MinVal(n)
            }
            Sort::ValueGroup => {
                // [a..b]
                let lo = self.expect_int("interval lower bound")?;
                self.expect(Tok::DotDot, "`..` in interval bound")?;
                let hi = self.expect_int("interval upper bound")?;
                BoundAnnotation::Range(lo, hi)
            }
            Sort::ResidueField => {
                return Err(syntax(self.pos(), "residue-field quantifiers take no bound"));
            }
        };
        self.expect(Tok::RBracket, "`]` closing quantifier bound")?;
        Ok(Some(ann))
    }

    fn comparison(&mut self) -> Result<SExpr, ParseError> {
        let lhs = self.sum()?;
        let rel = match self.peek() {
            Some(Tok::Eq) => SRel::Eq,
            Some(Tok::Ne) => SRel::Ne,
            Some(Tok::Lt) => SRel::Lt,
            Some(Tok::Le) => SRel::Le,
            Some(Tok::Gt) => SRel::Gt,
            Some(Tok::Ge) => SRel::Ge,
            _ => return Ok(lhs),
        };
        self.at += 1;
        let rhs = self.sum()?;
        Ok(SExpr::Rel(rel, Box::new(lhs), Box::new(rhs)))
    }

    fn sum(&mut self) -> Result<SExpr, ParseError> {
        let mut lhs = self.product()?;
        loop {
            if self.eat(&Tok::Plus) {
                let rhs = self.product()?;
                lhs = SExpr::Add(Box::new(lhs), Box::new(rhs));
            } else if self.eat(&Tok::Minus) {
                let rhs = self.product()?;
                lhs = SExpr::Sub(Box::new(lhs), Box::new(rhs));
            } else {
                return Ok(lhs);
            }
        }
    }

    fn product(&mut self) -> Result<SExpr, ParseError> {
        let mut lhs = self.unary()?;
        while self.eat(&Tok::Star) {
            let rhs = self.unary()?;
            lhs = SExpr::Mul(Box::new(lhs), Box::new(rhs));
        }
        Ok(lhs)
    }

    fn unary(&mut self) -> Result<SExpr, ParseError> {
        if self.eat(&Tok::Minus) {
            let inner = self.unary()?;
            return Ok(SExpr::Neg(Box::new(inner)));
        }
        self.power()
    }

    fn power(&mut self) -> Result<SExpr, ParseError> {
        let base = self.primary()?;
        if self.eat(&Tok::Caret) {
            let pos = self.pos();
            let e = self.expect_int("exponent")?;
            if !(0..=64).contains(&e) {
                return Err(syntax(pos, "exponent out of range 0..=64"));
            }
            return Ok(SExpr::Pow(Box::new(base), e as u32));
        }
        Ok(base)
    }

    fn primary(&mut self) -> Result<SExpr, ParseError> {
        let pos = self.pos();
        match self.bump() {
            Some(Tok::Int(n)) => {
                // `p/q` is a rational valued-field constant
                if self.peek() == Some(&Tok::Slash) {
                    self.at += 1;
                    let d = self.expect_int("denominator")?;
                    if d <= 0 {
                        return Err(syntax(pos, "denominator must be positive"));
                    }
                    return Ok(SExpr::VfLit(IntPoly::constant(n), d as u64));
                }
                Ok(SExpr::Lit(n))
            }
            Some(Tok::KwT) => Ok(SExpr::T),
            Some(Tok::Hash) => {
                let k = self.expect_int("integer after `#`")?;
                Ok(SExpr::RfLit(k))
            }
            Some(Tok::LBracket) => {
                let inner = self.sum()?;
                let denom = if self.eat(&Tok::Slash) {
                    let d = self.expect_int("denominator")?;
                    if d <= 0 {
                        return Err(syntax(pos, "denominator must be positive"));
                    }
                    d as u64
                } else {
                    1
                };
                self.expect(Tok::RBracket, "`]` closing constant")?;
                let (poly, inner_denom) = fold_rat(&inner)
                    .ok_or_else(|| syntax(pos, "bracketed constant must be a polynomial in t"))?;
                Ok(SExpr::VfLit(poly, inner_denom * denom))
            }
            Some(Tok::KwOrd) => {
                self.expect(Tok::LParen, "`(` after ord")?;
                let inner = self.sum()?;
                self.expect(Tok::RParen, "`)` closing ord")?;
                Ok(SExpr::Ord(Box::new(inner)))
            }
            Some(Tok::KwAc) => {
                self.expect(Tok::LParen, "`(` after ac")?;
                let inner = self.sum()?;
                self.expect(Tok::RParen, "`)` closing ac")?;
                Ok(SExpr::Ac(Box::new(inner)))
            }
            Some(Tok::Ident(name)) => {
                let sort = if self.peek() == Some(&Tok::Colon) {
                    // lookahead: `:` must be followed by a sort keyword
                    if let Some(Tok::KwSort(s)) = self.toks.get(self.at + 1).map(|t| &t.tok) {
                        let s = *s;
                        self.at += 2;
                        Some(s)
                    } else {
                        None
                    }
                } else {
                    None
                };
                Ok(SExpr::Var(name, sort))
            }
            Some(Tok::LParen) => {
                let inner = self.iff()?;
                self.expect(Tok::RParen, "`)`")?;
                Ok(inner)
            }
            _ => Err(syntax(pos, "expected a term or formula")),
        }
    }
}

/// Constant-fold a surface tree of literals, `t`, and arithmetic into
/// `poly / denom`. Returns `None` when the tree mentions variables or other
/// non-constant nodes.
pub(super) fn fold_rat(e: &SExpr) -> Option<(IntPoly, u64)> {
    use num_integer::Integer;
    match e {
        SExpr::Lit(n) => Some((IntPoly::constant(*n), 1)),
        SExpr::T => Some((IntPoly::t(), 1)),
        SExpr::VfLit(p, d) => Some((p.clone(), *d)),
        SExpr::Neg(a) => fold_rat(a).map(|(p, d)| (p.neg(), d)),
        SExpr::Add(a, b) | SExpr::Sub(a, b) => {
            let (pa, da) = fold_rat(a)?;
            let (pb, db) = fold_rat(b)?;
            let lcm = (da / da.gcd(&db)) * db;
            let pa = pa.mul(&IntPoly::constant((lcm / da) as i64));
            let pb = pb.mul(&IntPoly::constant((lcm / db) as i64));
            let sum = if matches!(e, SExpr::Add(..)) { pa.add(&pb) } else { pa.sub(&pb) };
            Some(normalize_rat(sum, lcm))
        }
        SExpr::Mul(a, b) => {
            let (pa, da) = fold_rat(a)?;
            let (pb, db) = fold_rat(b)?;
            Some(normalize_rat(pa.mul(&pb), da * db))
        }
        SExpr::Pow(a, e) => {
            let (pa, da) = fold_rat(a)?;
            let mut p = IntPoly::constant(1);
            let mut d: u64 = 1;
            for _ in 0..*e {
                p = p.mul(&pa);
                d *= da;
            }
            Some(normalize_rat(p, d))
        }
        _ => None,
    }
}

/// Reduce `poly / denom` to lowest terms.
pub(super) fn normalize_rat(poly: IntPoly, denom: u64) -> (IntPoly, u64) {
    use num_integer::Integer;
    if denom == 1 || poly.is_zero() {
        return (poly, 1);
    }
    let mut g = denom;
    for &c in poly.coeffs() {
        g = g.gcd(&c.unsigned_abs());
    }
    if g <= 1 {
        return (poly, denom);
    }
    let coeffs = poly.coeffs().iter().map(|&c| c / g as i64).collect();
    (IntPoly::new(coeffs), denom / g)
}
