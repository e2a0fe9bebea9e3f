//! Verification engines: specialization and transfer comparisons, partition
//! certificates, affine change of variables, order-of-integration swaps.

use super::types::CellComplex;
use super::volume::{
    motivic_volume, padic_volume_stabilized, specialize_volume, volume_formula,
    MeasureError,
};
use crate::eval::{eval_formula, Assignment, EvalBox, Structure, TruthValue, Value};
use crate::field::{CharKind, FieldElement, Valuation};
use crate::lang::{Formula, VfConst};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::One;
use serde::Serialize;

/// Outcome of one volume comparison for one structure.
#[derive(Debug, Clone, Serialize)]
pub struct StructureVerdict {
    pub label: String,
    pub p: u64,
    pub characteristic: CharKind,
    pub specialized_motivic: String,
    pub padic: String,
    pub stabilized_at: usize,
    pub specialization_ok: bool,
}

/// Comparison record for a complex: symbolic volume, per-structure
/// specialization verdicts, and cross-characteristic transfer verdicts.
#[derive(Debug, Clone, Serialize)]
pub struct VolumeReport {
    pub closed_form: Option<String>,
    pub verdicts: Vec<StructureVerdict>,
    /// For each prime appearing with both characteristics: do the volumes
    /// agree across them?
    pub transfer_ok: Vec<(u64, bool)>,
    pub all_ok: bool,
}

/// Assert that the specialized symbolic volume equals the brute-force
/// volume in every structure, and that both characteristics agree prime by
/// prime.
pub fn check_specialization(
    cx: &CellComplex,
    structures: &[Structure],
    max_window: usize,
) -> Result<VolumeReport, MeasureError> {
    let vol = motivic_volume(cx)?;
    let mut verdicts = Vec::new();
    let mut by_p: Vec<(u64, CharKind, BigRational)> = Vec::new();
    for st in structures {
        let spec = specialize_volume(&vol, st)?;
        let bx = box_for(cx);
        let f = volume_formula(cx, &bx, max_window);
        let (value, m_star) = padic_volume_stabilized(st, &f, &bx, max_window)?;
        let ok = spec == value;
        verdicts.push(StructureVerdict {
            label: st.label(),
            p: st.p(),
            characteristic: st.field.cfg.characteristic,
            specialized_motivic: spec.to_string(),
            padic: value.to_string(),
            stabilized_at: m_star,
            specialization_ok: ok,
        });
        by_p.push((st.p(), st.field.cfg.characteristic, value));
    }
    let mut transfer_ok = Vec::new();
    let mut primes: Vec<u64> = by_p.iter().map(|(p, _, _)| *p).collect();
    primes.sort_unstable();
    primes.dedup();
    for p in primes {
        let zero: Vec<&BigRational> = by_p
            .iter()
            .filter(|(q, c, _)| *q == p && *c == CharKind::Zero)
            .map(|(_, _, v)| v)
            .collect();
        let pos: Vec<&BigRational> = by_p
            .iter()
            .filter(|(q, c, _)| *q == p && *c == CharKind::Positive)
            .map(|(_, _, v)| v)
            .collect();
        if !zero.is_empty() && !pos.is_empty() {
            transfer_ok.push((p, zero.iter().all(|v| *v == pos[0]) && pos.iter().all(|v| *v == zero[0])));
        }
    }
    let all_ok = verdicts.iter().all(|v| v.specialization_ok)
        && transfer_ok.iter().all(|(_, ok)| *ok);
    Ok(VolumeReport {
        closed_form: vol.closed.as_ref().map(|c| c.to_string()),
        verdicts,
        transfer_ok,
        all_ok,
    })
}

/// The default unit box of a complex: every fiber variable integral.
pub fn box_for(cx: &CellComplex) -> EvalBox {
    let mut bx = EvalBox::new(0);
    for v in &cx.vf_vars {
        bx = bx.with_vf(v, 0);
    }
    bx
}

/// Exhaustively certify on exact sample points that the cells are pairwise
/// disjoint and, when the complex records an ambient formula, that their
/// union is exactly its solution set.
pub fn verify_partition(
    cx: &CellComplex,
    st: &Structure,
    bx: &EvalBox,
    m: usize,
) -> Result<(), String> {
    let clip = bx.vf.values().copied().min().unwrap_or(0) + m as i64 + 1;
    let membership: Vec<Formula> = cx
        .cells
        .iter()
        .map(|c| super::render::cell_formula(c, &cx.vf_vars, clip, super::render::Render::Exact))
        .collect();
    let mins: Vec<i64> = cx
        .vf_vars
        .iter()
        .map(|n| bx.vf.get(n).copied().unwrap_or(0))
        .collect();
    let grid = EvalBox { window: m, ..bx.clone() };
    let p = st.p();
    let mut tuples: Vec<Vec<u64>> = cx.vf_vars.iter().map(|_| vec![0u64; m]).collect();
    loop {
        let mut asg = Assignment::new();
        for ((name, digits), &v0) in cx.vf_vars.iter().zip(&tuples).zip(&mins) {
            // exact sample point, not a class marker
            asg.insert(name.clone(), Value::Vf(st.field.make(v0, digits, true)));
        }
        let mut containing = 0;
        for (idx, mf) in membership.iter().enumerate() {
            match eval_formula(st, mf, &asg, &grid).map_err(|e| e.to_string())? {
                TruthValue::True => containing += 1,
                TruthValue::False => {}
                TruthValue::Unknown => {
                    return Err(format!(
                        "cell {idx} membership undecided at an exact point"
                    ))
                }
            }
        }
        if containing > 1 {
            return Err(format!("{containing} cells overlap at a sample point"));
        }
        if let Some(ambient) = &cx.ambient {
            let expected = match eval_formula(st, ambient, &asg, &grid)
                .map_err(|e| e.to_string())?
            {
                TruthValue::True => 1,
                TruthValue::False => 0,
                TruthValue::Unknown => {
                    return Err("ambient formula undecided at an exact point".into())
                }
            };
            if containing != expected {
                return Err(format!(
                    "covering failure: point lies in {containing} cells, ambient says {expected}"
                ));
            }
        }
        let mut advanced = false;
        for t in tuples.iter_mut() {
            if crate::eval::formula::next_tuple(t, p) {
                advanced = true;
                break;
            }
        }
        if !advanced {
            return Ok(());
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

/// Verify the affine change of variables: the image of the solution set of
/// `f` under `z -> u z + v` has volume `q^(-ord u)` times the original.
/// The image volume is counted directly on the translated box by pulling
/// each representative back through the inverse map.
pub fn affine_change_of_variables_check(
    st: &Structure,
    f: &Formula,
    u: &VfConst,
    v: &VfConst,
    v0: i64,
    max_window: usize,
) -> Result<bool, MeasureError> {
    let zname = {
        let fv = crate::lang::free_variables(f);
        assert_eq!(fv.vf.len(), 1, "affine check expects one fiber variable");
        fv.vf[0].clone()
    };
    let bx = EvalBox::new(0).with_vf(&zname, v0);
    let (source, _) = padic_volume_stabilized(st, f, &bx, max_window)?;

    let field = &st.field;
    let ue = st.interpret_vf_const(u).map_err(crate::eval::EvalError::from)
        .map_err(crate::eval::EnumerateError::from)?;
    let ve = st.interpret_vf_const(v).map_err(crate::eval::EvalError::from)
        .map_err(crate::eval::EnumerateError::from)?;
    let du = match field.ord(&ue) {
        Valuation::Finite(d) => d,
        _ => panic!("affine scale must be a determined nonzero constant"),
    };
    // image box: the ball of radius v0 + ord(u) around v
    let image_v0 = v0 + du;
    let mut prev: Option<BigRational> = None;
    for m in 1..=max_window {
        let mut count: u64 = 0;
        let mut undecided: u64 = 0;
        let grid = EvalBox { window: m, ..bx.clone() };
        let mut digits = vec![0u64; m];
        loop {
            let w = field.add(&ve, &field.make(image_v0, &digits, false));
            // pull back: z = (w - v)/u
            let z = field
                .div(&field.sub(&w, &ve), &ue)
                .map_err(crate::eval::EvalError::from)
                .map_err(crate::eval::EnumerateError::from)?;
            let mut asg = Assignment::new();
            asg.insert(zname.clone(), Value::Vf(z));
            match eval_formula(st, f, &asg, &grid)
                .map_err(crate::eval::EnumerateError::from)?
            {
                TruthValue::True => count += 1,
                TruthValue::Unknown => undecided += 1,
                TruthValue::False => {}
            }
            if !crate::eval::formula::next_tuple(&mut digits, st.p()) {
                break;
            }
        }
        let value =
            q_power(st.q(), -(image_v0 + m as i64)) * BigRational::from(BigInt::from(count));
        if undecided == 0 {
            if let Some(pv) = &prev {
                if *pv == value {
                    let expected = q_power(st.q(), -du) * &source;
                    return Ok(value == expected);
                }
            }
            prev = Some(value);
        } else {
            prev = None;
        }
    }
    Err(MeasureError::Unstabilized { max_window, undecided: 1 })
}

/// Compare the two iteration orders of a two-variable volume, on genuinely
/// different grids (windows `m` and `m+1` assigned to opposite variables).
pub fn fubini_check(
    st: &Structure,
    f: &Formula,
    bx: &EvalBox,
    max_window: usize,
) -> Result<bool, MeasureError> {
    let fv = crate::lang::free_variables(f);
    assert_eq!(fv.vf.len(), 2, "order-swap check expects two fiber variables");
    let (first, second) = (fv.vf[0].clone(), fv.vf[1].clone());
    let order_a = volume_iterated(st, f, bx, &first, &second, max_window)?;
    let order_b = volume_iterated(st, f, bx, &second, &first, max_window)?;
    Ok(order_a == order_b)
}

/// Iterated volume with a larger window on the outer variable.
fn volume_iterated(
    st: &Structure,
    f: &Formula,
    bx: &EvalBox,
    outer: &str,
    inner: &str,
    max_window: usize,
) -> Result<BigRational, MeasureError> {
    use crate::eval::formula::next_tuple;
    let v_outer = bx.vf.get(outer).copied().unwrap_or(0);
    let v_inner = bx.vf.get(inner).copied().unwrap_or(0);
    let mut prev: Option<BigRational> = None;
    for m in 1..=max_window {
        let (mo, mi) = (m + 1, m);
        let grid = EvalBox { window: mi, ..bx.clone() };
        let mut count: u64 = 0;
        let mut undecided: u64 = 0;
        let mut od = vec![0u64; mo];
        loop {
            let mut id = vec![0u64; mi];
            loop {
                let mut asg = Assignment::new();
                asg.insert(
                    outer.to_string(),
                    Value::Vf(st.field.make(v_outer, &od, false)),
                );
                asg.insert(
                    inner.to_string(),
                    Value::Vf(st.field.make(v_inner, &id, false)),
                );
                match eval_formula(st, f, &asg, &grid)
                    .map_err(crate::eval::EnumerateError::from)?
                {
                    TruthValue::True => count += 1,
                    TruthValue::Unknown => undecided += 1,
                    TruthValue::False => {}
                }
                if !next_tuple(&mut id, st.p()) {
                    break;
                }
            }
            if !next_tuple(&mut od, st.p()) {
                break;
            }
        }
        let measure = q_power(st.q(), -(v_outer + mo as i64))
            * q_power(st.q(), -(v_inner + mi as i64));
        let value = measure * BigRational::from(BigInt::from(count));
        if undecided == 0 {
            if let Some(pv) = &prev {
                if *pv == value {
                    return Ok(value);
                }
            }
            prev = Some(value);
        } else {
            prev = None;
        }
    }
    Err(MeasureError::Unstabilized { max_window, undecided: 1 })
}

/// An exact zero test helper for reports.
pub fn exact_eq(a: &BigRational, b: &BigRational) -> bool {
    a == b
}

/// Positivity of the closed symbolic volume of a nonempty complex.
pub fn volume_positivity(cx: &CellComplex) -> Result<Option<bool>, MeasureError> {
    let vol = motivic_volume(cx)?;
    Ok(vol.closed.map(|c| c.is_in_a_plus()))
}

/// Element-level helper shared by tests: exact equality of field elements
/// produced along different routes.
pub fn elements_agree(st: &Structure, a: &FieldElement, b: &FieldElement) -> bool {
    st.field.try_eq(a, b) == Some(true)
}
