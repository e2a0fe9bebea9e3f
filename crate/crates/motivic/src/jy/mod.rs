//! Exact Jacquet-Ye integrals for unipotent groups of rank two (rank three
//! best-effort), in both characteristics, with the quadratic-extension side
//! and the matching identity check.
//!
//! The first integral runs over pairs of upper unipotent matrices with the
//! integrality constraint on the twisted product and the standard
//! superdiagonal character; the second runs over a single unipotent matrix
//! over the unramified quadratic extension with the Hermitian constraint.
//! Both are computed as exact cyclotomic class sums over support boxes and
//! swept to stabilization.

use crate::constructible::{CharacterConfig, CycloValue};
use crate::eval::Structure;
use crate::field::{ExtElement, ExtField, FieldElement, FieldError, Valuation};
use crate::poly::IntPoly;
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::One;
use serde::Serialize;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum JyError {
    #[error("diagonal entry {0} does not specialize to a unit times a power of the uniformizer")]
    NotAUnitCode(usize),
    #[error("rank {0} not supported (rank two is exact, rank three best-effort)")]
    UnsupportedRank(usize),
    #[error("enumeration budget exceeded: {0} classes")]
    BudgetExceeded(u64),
    #[error("integral did not stabilize by window {0}")]
    Unstabilized(usize),
    #[error("field error: {0}")]
    Field(#[from] FieldError),
    #[error("extension error: {0}")]
    Extension(String),
    #[error(transparent)]
    Character(#[from] crate::constructible::CharacterError),
}

/// Diagonal data in coefficient form: each entry is a unit code (a
/// polynomial specializing to a unit) times a power of the uniformizer.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DiagParam {
    pub entries: Vec<(IntPoly, i64)>,
}

impl DiagParam {
    pub fn rank(&self) -> usize {
        self.entries.len()
    }

    /// Rank-two data from exponents with unit code 1.
    pub fn from_exponents(k1: i64, k2: i64) -> Self {
        DiagParam {
            entries: vec![(IntPoly::constant(1), k1), (IntPoly::constant(1), k2)],
        }
    }

    pub fn with_units(units: &[i64], exponents: &[i64]) -> Self {
        DiagParam {
            entries: units
                .iter()
                .zip(exponents)
                .map(|(&u, &k)| (IntPoly::constant(u), k))
                .collect(),
        }
    }

    fn interpret(&self, st: &Structure) -> Result<Vec<FieldElement>, JyError> {
        let mut out = Vec::new();
        for (i, (unit, k)) in self.entries.iter().enumerate() {
            let u = st.field.from_poly(unit);
            match st.field.ord(&u) {
                Valuation::Finite(0) => {}
                _ => return Err(JyError::NotAUnitCode(i)),
            }
            out.push(st.field.shift(&u, *k));
        }
        Ok(out)
    }
}

/// The unramified quadratic character: minus one to the valuation.
pub fn eta(st: &Structure, e: &FieldElement) -> Result<i64, JyError> {
    match st.field.ord(e) {
        Valuation::Finite(v) => Ok(if v.rem_euclid(2) == 0 { 1 } else { -1 }),
        _ => Err(JyError::NotAUnitCode(0)),
    }
}

/// The matching factor: the product of the quadratic character on the
/// partial products of the diagonal.
pub fn gamma_factor(st: &Structure, a: &DiagParam) -> Result<i64, JyError> {
    let entries = a.interpret(st)?;
    let mut acc = st.field.one();
    let mut gamma = 1i64;
    for e in entries.iter().take(a.rank() - 1) {
        acc = st.field.mul(&acc, e);
        gamma *= eta(st, &acc)?;
    }
    Ok(gamma)
}

/// Valuation boxes provably containing the integrand's support for the
/// strictly upper entries, or `None` when the support is empty.
///
/// The corner entry of the twisted product is the first diagonal entry
/// itself, so a nonintegral first entry empties the support. The remaining
/// bounds come from solving the integrality constraints entry by entry.
pub fn support_bounds(st: &Structure, a: &DiagParam) -> Result<Option<Vec<i64>>, JyError> {
    let entries = a.interpret(st)?;
    let ords: Vec<i64> = entries
        .iter()
        .map(|e| match st.field.ord(e) {
            Valuation::Finite(v) => v,
            _ => unreachable!("interpret validated unit codes"),
        })
        .collect();
    let k1 = ords[0];
    if k1 < 0 {
        return Ok(None);
    }
    match a.rank() {
        2 => Ok(Some(vec![-k1])),
        3 => {
            let k2 = ords[1];
            // entries (1,2) and (1,3) bound x and z by -k1; the (3,2)
            // entry bounds y through a2 y = M32 - a1 z x'
            let y_bound = -k2 + (-k1).min(0);
            Ok(Some(vec![-k1, y_bound, -k1]))
        }
        n => Err(JyError::UnsupportedRank(n)),
    }
}

/// Strictly-upper coordinate count of a rank-`n` unipotent matrix.
fn coord_count(n: usize) -> usize {
    n * (n - 1) / 2
}

/// Positions of the strictly upper entries, row-major.
fn upper_positions(n: usize) -> Vec<(usize, usize)> {
    let mut v = Vec::new();
    for i in 0..n {
        for j in (i + 1)..n {
            v.push((i, j));
        }
    }
    v
}

struct Budget {
    classes: u64,
    limit: u64,
}

impl Budget {
    fn spend(&mut self) -> Result<(), JyError> {
        self.classes += 1;
        if self.classes > self.limit {
            Err(JyError::BudgetExceeded(self.classes))
        } else {
            Ok(())
        }
    }
}

fn q_power(q: u64, e: i64) -> BigRational {
    let mut acc = BigRational::one();
    let qq = BigRational::from(BigInt::from(q));
    for _ in 0..e.unsigned_abs() {
        acc *= &qq;
    }
    if e >= 0 {
        acc
    } else {
        acc.recip()
    }
}

/// Three-valued integrality of a field element.
fn integral(st: &Structure, e: &FieldElement) -> Option<bool> {
    match st.field.ord(e) {
        Valuation::Infinity => Some(true),
        Valuation::Finite(v) => Some(v >= 0),
        Valuation::AtLeast(b) => {
            if b >= 0 {
                Some(true)
            } else {
                None
            }
        }
    }
}

fn ext_integral(ext: &ExtField, e: &ExtElement) -> Result<Option<bool>, JyError> {
    match ext.ord(e).map_err(|e| JyError::Extension(e.to_string()))? {
        Valuation::Infinity => Ok(Some(true)),
        Valuation::Finite(v) => Ok(Some(v >= 0)),
        Valuation::AtLeast(b) => Ok(if b >= 0 { Some(true) } else { None }),
    }
}

/// One window pass of the first integral; `None` when undecided classes
/// remain at this window.
fn i_integral_at_window(
    st: &Structure,
    diag: &[FieldElement],
    bounds: &[i64],
    psi: &CharacterConfig,
    m: usize,
    budget: &mut Budget,
) -> Result<Option<CycloValue>, JyError> {
    use crate::eval::formula::next_tuple;
    let n = diag.len();
    let coords = coord_count(n);
    let positions = upper_positions(n);
    let field = &st.field;
    let p = st.p();

    // per-variable minimum valuations: u1 and u2 share the same bounds
    let mins: Vec<i64> = bounds.iter().chain(bounds.iter()).copied().collect();
    let mut tuples: Vec<Vec<u64>> = vec![vec![0u64; m]; 2 * coords];
    let mut acc = CycloValue::zero(p);
    let mut undecided = false;

    'outer: loop {
        budget.spend()?;
        // build the two unipotent matrices
        let mut u1 = identity(field, n);
        let mut u2 = identity(field, n);
        for (idx, &(i, j)) in positions.iter().enumerate() {
            u1[i][j] = field.make(mins[idx], &tuples[idx], false);
            u2[i][j] = field.make(mins[coords + idx], &tuples[coords + idx], false);
        }
        // twisted product: transpose(u1) * diag * u2
        let mut member = Some(true);
        'constraints: for row in 0..n {
            for col in 0..n {
                // entry (row, col) = sum_k u1[k][row] * diag[k] * u2[k][col]
                let mut e = FieldElement::Zero;
                for (k, dk) in diag.iter().enumerate() {
                    let t = field.mul(&field.mul(&u1[k][row], dk), &u2[k][col]);
                    e = field.add(&e, &t);
                }
                match integral(st, &e) {
                    Some(true) => {}
                    Some(false) => {
                        member = Some(false);
                        break 'constraints;
                    }
                    None => {
                        member = None;
                        break 'constraints;
                    }
                }
            }
        }
        match member {
            Some(true) => {
                // character argument: superdiagonal of u1 u2
                let mut arg = FieldElement::Zero;
                for i in 0..(n - 1) {
                    // (u1 u2)_{i,i+1} = u1[i][i+1] + u2[i][i+1]
                    arg = field.add(&arg, &field.add(&u1[i][i + 1], &u2[i][i + 1]));
                }
                match psi.eval(field, &arg) {
                    Ok(v) => acc = acc.add(&v),
                    Err(crate::constructible::CharacterError::UndeterminedArgument) => {
                        undecided = true;
                    }
                    Err(e) => return Err(e.into()),
                }
            }
            Some(false) => {}
            None => undecided = true,
        }
        // advance
        for t in tuples.iter_mut() {
            if next_tuple(t, p) {
                continue 'outer;
            }
        }
        break;
    }
    if undecided {
        return Ok(None);
    }
    // class measure: product over coordinates of q^(-(min + m))
    let mut measure = BigRational::one();
    for &v0 in &mins {
        measure *= q_power(st.q(), -(v0 + m as i64));
    }
    Ok(Some(acc.scale(&measure)))
}

fn identity(field: &crate::field::LocalField, n: usize) -> Vec<Vec<FieldElement>> {
    let mut m = vec![vec![FieldElement::Zero; n]; n];
    for (i, row) in m.iter_mut().enumerate() {
        row[i] = field.one();
    }
    m
}

fn ext_identity(ext: &ExtField, n: usize) -> Vec<Vec<ExtElement>> {
    let mut m = vec![vec![ext.zero(); n]; n];
    for (i, row) in m.iter_mut().enumerate() {
        row[i] = ext.from_base(ext.base.one());
    }
    m
}

fn j_integral_at_window(
    st: &Structure,
    ext: &ExtField,
    diag: &[FieldElement],
    bounds: &[i64],
    psi: &CharacterConfig,
    m: usize,
    budget: &mut Budget,
) -> Result<Option<CycloValue>, JyError> {
    use crate::eval::formula::next_tuple;
    let n = diag.len();
    let coords = coord_count(n);
    let positions = upper_positions(n);
    let field = &st.field;
    let p = st.p();

    // each extension entry has two base coordinates with the same bound
    let mins: Vec<i64> = bounds.iter().flat_map(|&b| [b, b]).collect();
    let mut tuples: Vec<Vec<u64>> = vec![vec![0u64; m]; 2 * coords];
    let mut acc = CycloValue::zero(p);
    let mut undecided = false;

    'outer: loop {
        budget.spend()?;
        let mut u = ext_identity(ext, n);
        for (idx, &(i, j)) in positions.iter().enumerate() {
            let e0 = field.make(mins[2 * idx], &tuples[2 * idx], false);
            let e1 = field.make(mins[2 * idx + 1], &tuples[2 * idx + 1], false);
            u[i][j] = ext.from_coords(vec![e0, e1]);
        }
        // constraint matrix: transpose(conj u) * diag * u
        let mut member = Some(true);
        'constraints: for row in 0..n {
            for col in 0..n {
                let mut e = ext.zero();
                for (k, dk) in diag.iter().enumerate() {
                    let cu = ext
                        .conj(&u[k][row])
                        .map_err(|er| JyError::Extension(er.to_string()))?;
                    let t = ext.mul(&ext.scalar_mul(dk, &cu), &u[k][col]);
                    e = ext.add(&e, &t);
                }
                match ext_integral(ext, &e)? {
                    Some(true) => {}
                    Some(false) => {
                        member = Some(false);
                        break 'constraints;
                    }
                    None => {
                        member = None;
                        break 'constraints;
                    }
                }
            }
        }
        match member {
            Some(true) => {
                // character argument: trace of the superdiagonal of u * conj(u)
                let mut arg = FieldElement::Zero;
                for i in 0..(n - 1) {
                    let tr = ext
                        .trace(&u[i][i + 1])
                        .map_err(|er| JyError::Extension(er.to_string()))?;
                    arg = field.add(&arg, &tr);
                }
                match psi.eval(field, &arg) {
                    Ok(v) => acc = acc.add(&v),
                    Err(crate::constructible::CharacterError::UndeterminedArgument) => {
                        undecided = true;
                    }
                    Err(e) => return Err(e.into()),
                }
            }
            Some(false) => {}
            None => undecided = true,
        }
        for t in tuples.iter_mut() {
            if next_tuple(t, p) {
                continue 'outer;
            }
        }
        break;
    }
    if undecided {
        return Ok(None);
    }
    let mut measure = BigRational::one();
    for &v0 in bounds {
        // one extension coordinate has additive mass one on its ring
        measure *= q_power(st.q(), -2 * (v0 + m as i64));
    }
    Ok(Some(acc.scale(&measure)))
}

const CLASS_BUDGET: u64 = 40_000_000;

fn stabilize<F>(m_max: usize, mut pass: F) -> Result<(CycloValue, usize), JyError>
where
    F: FnMut(usize) -> Result<Option<CycloValue>, JyError>,
{
    let mut prev: Option<CycloValue> = None;
    for m in 1..=m_max {
        match pass(m)? {
            Some(v) => {
                if let Some(pv) = &prev {
                    if *pv == v {
                        return Ok((v, m));
                    }
                }
                prev = Some(v);
            }
            None => prev = None,
        }
    }
    Err(JyError::Unstabilized(m_max))
}

/// The twisted-product integral over a pair of unipotent groups.
pub fn i_integral(
    st: &Structure,
    a: &DiagParam,
    psi: &CharacterConfig,
    m_max: usize,
) -> Result<(CycloValue, usize), JyError> {
    let Some(bounds) = support_bounds(st, a)? else {
        return Ok((CycloValue::zero(st.p()), 1));
    };
    let diag = a.interpret(st)?;
    stabilize(m_max, |m| {
        let mut budget = Budget { classes: 0, limit: CLASS_BUDGET };
        i_integral_at_window(st, &diag, &bounds, psi, m, &mut budget)
    })
}

/// The Hermitian integral over the unramified quadratic extension.
pub fn j_integral(
    st: &Structure,
    a: &DiagParam,
    psi: &CharacterConfig,
    m_max: usize,
) -> Result<(CycloValue, usize), JyError> {
    let Some(bounds) = support_bounds(st, a)? else {
        return Ok((CycloValue::zero(st.p()), 1));
    };
    let diag = a.interpret(st)?;
    let ext = ExtField::search(&st.field.cfg, 2)
        .map_err(|e| JyError::Extension(e.to_string()))?;
    stabilize(m_max, |m| {
        let mut budget = Budget { classes: 0, limit: CLASS_BUDGET };
        j_integral_at_window(st, &ext, &diag, &bounds, psi, m, &mut budget)
    })
}

/// Audit data carried by a matching-identity check.
#[derive(Debug, Clone, Serialize)]
pub struct JyAudit {
    pub p: u64,
    pub characteristic: crate::field::CharKind,
    pub exponents: Vec<i64>,
    pub conductor_shift: i64,
    pub stabilized_i: usize,
    pub stabilized_j: usize,
    pub values_in_base_cyclotomic: bool,
}

/// Result of one identity check.
#[derive(Debug, Clone)]
pub struct JYResult {
    pub i_value: CycloValue,
    pub j_value: CycloValue,
    pub gamma: i64,
    pub holds: bool,
    pub audit: JyAudit,
}

/// Compute both integrals and the matching factor; `holds` is exact
/// equality of cyclotomic values.
pub fn check_identity(
    st: &Structure,
    a: &DiagParam,
    psi: &CharacterConfig,
    m_max: usize,
) -> Result<JYResult, JyError> {
    let (i_value, mi) = i_integral(st, a, psi, m_max)?;
    let (j_value, mj) = j_integral(st, a, psi, m_max)?;
    let gamma = gamma_factor(st, a)?;
    let gj = j_value.scale(&BigRational::from(BigInt::from(gamma)));
    let holds = i_value == gj;
    let in_base = i_value.try_level_one().is_some() && j_value.try_level_one().is_some();
    Ok(JYResult {
        audit: JyAudit {
            p: st.p(),
            characteristic: st.field.cfg.characteristic,
            exponents: a.entries.iter().map(|(_, k)| *k).collect(),
            conductor_shift: psi.shift,
            stabilized_i: mi,
            stabilized_j: mj,
            values_in_base_cyclotomic: in_base,
        },
        i_value,
        j_value,
        gamma,
        holds,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::CharKind;

    fn st(chark: CharKind, p: u64) -> Structure {
        Structure::base(chark, p, 10).unwrap()
    }

    #[test]
    fn eta_values() {
        let k = st(CharKind::Positive, 5);
        assert_eq!(eta(&k, &k.field.one()).unwrap(), 1);
        assert_eq!(eta(&k, &k.field.uniformizer()).unwrap(), -1);
        let ut2 = k.field.shift(&k.field.from_int(3), 2);
        assert_eq!(eta(&k, &ut2).unwrap(), 1);
    }

    #[test]
    fn gamma_values() {
        let k = st(CharKind::Positive, 5);
        assert_eq!(gamma_factor(&k, &DiagParam::from_exponents(0, 0)).unwrap(), 1);
        assert_eq!(gamma_factor(&k, &DiagParam::from_exponents(1, 0)).unwrap(), -1);
        // rank three: eta(t) * eta(t^2) = -1
        let a3 = DiagParam {
            entries: vec![
                (IntPoly::constant(1), 1),
                (IntPoly::constant(1), 1),
                (IntPoly::constant(1), 0),
            ],
        };
        assert_eq!(gamma_factor(&k, &a3).unwrap(), -1);
    }

    #[test]
    fn support_bounds_examples() {
        let k = st(CharKind::Zero, 5);
        assert_eq!(
            support_bounds(&k, &DiagParam::from_exponents(0, 0)).unwrap(),
            Some(vec![0])
        );
        assert_eq!(
            support_bounds(&k, &DiagParam::from_exponents(2, 0)).unwrap(),
            Some(vec![-2])
        );
        assert_eq!(
            support_bounds(&k, &DiagParam::from_exponents(-1, 0)).unwrap(),
            None
        );
    }

    #[test]
    fn trivial_diagonal_gives_one() {
        for chark in [CharKind::Positive, CharKind::Zero] {
            let k = st(chark, 5);
            let psi = CharacterConfig::new(1);
            let a = DiagParam::from_exponents(0, 0);
            let (i, _) = i_integral(&k, &a, &psi, 4).unwrap();
            assert_eq!(i, CycloValue::one(5), "first integral at {chark:?}");
            let (j, _) = j_integral(&k, &a, &psi, 4).unwrap();
            assert_eq!(j, CycloValue::one(5), "second integral at {chark:?}");
        }
    }

    #[test]
    fn empty_support_vanishes() {
        let k = st(CharKind::Positive, 3);
        let psi = CharacterConfig::new(1);
        let a = DiagParam::from_exponents(-1, 0);
        let r = check_identity(&k, &a, &psi, 3).unwrap();
        assert!(r.holds);
        assert!(r.i_value.is_zero() && r.j_value.is_zero());
    }

    #[test]
    fn depth_one_identity_hand_value() {
        // diagonal (t, 1): the first integral is -1, the second is 1, and
        // the matching factor is -1
        for chark in [CharKind::Positive, CharKind::Zero] {
            let k = st(chark, 3);
            let psi = CharacterConfig::new(1);
            let a = DiagParam::from_exponents(1, 0);
            let r = check_identity(&k, &a, &psi, 5).unwrap();
            assert_eq!(r.gamma, -1);
            assert_eq!(
                r.i_value.as_rational(),
                Some(BigRational::from(BigInt::from(-1))),
                "{chark:?}"
            );
            assert_eq!(
                r.j_value.as_rational(),
                Some(BigRational::from(BigInt::from(1))),
                "{chark:?}"
            );
            assert!(r.holds);
        }
    }

    #[test]
    fn identity_with_nontrivial_units() {
        // a unit code that is a non-square changes nothing structural
        for chark in [CharKind::Positive, CharKind::Zero] {
            let k = st(chark, 5);
            let psi = CharacterConfig::new(1);
            let a = DiagParam::with_units(&[2, 1], &[1, -1]);
            let r = check_identity(&k, &a, &psi, 5).unwrap();
            assert!(r.holds, "identity at {chark:?}: {:?} vs {:?}", r.i_value, r.j_value);
        }
    }

    #[test]
    fn cross_characteristic_values_agree() {
        let psi = CharacterConfig::new(1);
        for (k1, k2) in [(0i64, 0i64), (1, 0), (1, 1), (2, -1)] {
            let a = DiagParam::from_exponents(k1, k2);
            let zero = st(CharKind::Zero, 3);
            let pos = st(CharKind::Positive, 3);
            let (i0, _) = i_integral(&zero, &a, &psi, 5).unwrap();
            let (i1, _) = i_integral(&pos, &a, &psi, 5).unwrap();
            assert_eq!(i0, i1, "first integral transfer at ({k1},{k2})");
            let (j0, _) = j_integral(&zero, &a, &psi, 5).unwrap();
            let (j1, _) = j_integral(&pos, &a, &psi, 5).unwrap();
            assert_eq!(j0, j1, "second integral transfer at ({k1},{k2})");
        }
    }

    #[test]
    fn conjugation_symmetry() {
        // conjugating the value equals integrating against the conjugate
        // character; the conjugate character at shift c is evaluation at -x
        let k = st(CharKind::Positive, 5);
        let psi = CharacterConfig::new(1);
        let a = DiagParam::from_exponents(1, 0);
        let (i, _) = i_integral(&k, &a, &psi, 5).unwrap();
        // eta is real and the support is symmetric under negation, so the
        // conjugate appears by negating the character argument; verify via
        // the negated diagonal which flips the argument sign
        let neg = DiagParam::with_units(&[-1, -1], &[1, 0]);
        let (i_neg, _) = i_integral(&k, &neg, &psi, 5).unwrap();
        assert_eq!(i.conj(), i_neg);
    }
}
