//! Unramified extensions through the binomial proxy `F[x]/(x^r - a)`.
//!
//! Elements are coordinate vectors over the base field in the basis
//! `1, x, ..., x^{r-1}`; multiplication reduces via `x^r = a`. The valuation
//! comes from the norm, conjugation from multiplying `x` by a root of unity.

use super::config::{ConfigError, FieldConfig};
use super::element::{FieldElement, FieldError, LocalField, Valuation};
use super::residue;

/// An element of the degree-`r` extension: `sum_i coords[i] x^i`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExtElement {
    pub coords: Vec<FieldElement>,
}

impl ExtElement {
    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(|c| c.is_zero())
    }
}

/// Residue of an extension element: a vector over the prime field in the
/// reduced basis of `F_p[x]/(x^r - a)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExtResidue(pub Vec<u64>);

/// The extension field context.
#[derive(Debug, Clone)]
pub struct ExtField {
    pub base: LocalField,
    pub r: u32,
    pub a: u64,
    /// Root of unity for conjugation, present when `r | p - 1`.
    zeta: Option<FieldElement>,
}

impl ExtField {
    /// Build the unramified degree-`r` extension on the proxy unit `a`.
    /// `x^r - a` must be irreducible over the residue field.
    pub fn new(cfg: &FieldConfig, r: u32, a: u64) -> Result<Self, ConfigError> {
        let p = cfg.p;
        if r < 1 {
            return Err(ConfigError::BadDegree);
        }
        if !residue::binomial_irreducible(r, a, p) {
            return Err(ConfigError::ReducibleProxy { r, a, p });
        }
        let base = LocalField::new(FieldConfig {
            residue_degree: 1,
            proxy_unit: None,
            ..cfg.clone()
        });
        let zeta = if r == 2 {
            Some(base.neg(&base.one()))
        } else if (p - 1) % r as u64 == 0 {
            let z0 = residue::primitive_root_of_unity(r, p)
                .ok_or(ConfigError::ConjugationUnsupported { r, p })?;
            // Teichmueller lift: the root of x^r - 1 over z0
            let mut coeffs = vec![base.neg(&base.one())];
            coeffs.extend(std::iter::repeat_with(|| FieldElement::Zero).take(r as usize - 1));
            coeffs.push(base.one());
            let z = super::hensel::hensel_lift(&base, &coeffs, z0)
                .map_err(|_| ConfigError::ConjugationUnsupported { r, p })?;
            Some(z)
        } else {
            None
        };
        Ok(ExtField { base, r, a, zeta })
    }

    /// Search the smallest valid proxy unit for degree `r` over `cfg`.
    pub fn search(cfg: &FieldConfig, r: u32) -> Result<Self, ConfigError> {
        let a = residue::find_irreducible_binomial_unit(r, cfg.p)
            .ok_or(ConfigError::NoProxyUnit { r, p: cfg.p })?;
        Self::new(cfg, r, a)
    }

    pub fn config(&self) -> FieldConfig {
        FieldConfig {
            residue_degree: self.r,
            proxy_unit: Some(self.a),
            ..self.base.cfg.clone()
        }
    }

    fn rr(&self) -> usize {
        self.r as usize
    }

    pub fn zero(&self) -> ExtElement {
        ExtElement {
            coords: vec![FieldElement::Zero; self.rr()],
        }
    }

    pub fn from_coords(&self, coords: Vec<FieldElement>) -> ExtElement {
        assert_eq!(coords.len(), self.rr());
        ExtElement { coords }
    }

    /// Embed a base-field element.
    pub fn from_base(&self, e: FieldElement) -> ExtElement {
        let mut coords = vec![FieldElement::Zero; self.rr()];
        coords[0] = e;
        ExtElement { coords }
    }

    /// The generator `x`.
    pub fn gen(&self) -> ExtElement {
        let mut coords = vec![FieldElement::Zero; self.rr()];
        coords[1] = self.base.one();
        ExtElement { coords }
    }

    pub fn add(&self, u: &ExtElement, v: &ExtElement) -> ExtElement {
        ExtElement {
            coords: u
                .coords
                .iter()
                .zip(&v.coords)
                .map(|(a, b)| self.base.add(a, b))
                .collect(),
        }
    }

    pub fn sub(&self, u: &ExtElement, v: &ExtElement) -> ExtElement {
        ExtElement {
            coords: u
                .coords
                .iter()
                .zip(&v.coords)
                .map(|(a, b)| self.base.sub(a, b))
                .collect(),
        }
    }

    pub fn neg(&self, u: &ExtElement) -> ExtElement {
        ExtElement {
            coords: u.coords.iter().map(|a| self.base.neg(a)).collect(),
        }
    }

    pub fn mul(&self, u: &ExtElement, v: &ExtElement) -> ExtElement {
        let r = self.rr();
        let k = &self.base;
        let a = k.from_int(self.a as i64);
        let mut out = vec![FieldElement::Zero; r];
        for i in 0..r {
            if u.coords[i].is_zero() {
                continue;
            }
            for j in 0..r {
                if v.coords[j].is_zero() {
                    continue;
                }
                let prod = k.mul(&u.coords[i], &v.coords[j]);
                let idx = i + j;
                if idx < r {
                    out[idx] = k.add(&out[idx], &prod);
                } else {
                    // x^r = a
                    let reduced = k.mul(&prod, &a);
                    out[idx - r] = k.add(&out[idx - r], &reduced);
                }
            }
        }
        ExtElement { coords: out }
    }

    pub fn scalar_mul(&self, s: &FieldElement, u: &ExtElement) -> ExtElement {
        ExtElement {
            coords: u.coords.iter().map(|c| self.base.mul(s, c)).collect(),
        }
    }

    /// Galois conjugation `x -> zeta x`. For degree two this is `x -> -x`.
    pub fn conj(&self, u: &ExtElement) -> Result<ExtElement, FieldError> {
        let zeta = self.zeta.as_ref().ok_or(FieldError::NoSquareRoot {
            reason: format!("conjugation unavailable: {} does not divide p - 1", self.r),
        })?;
        let k = &self.base;
        let mut out = Vec::with_capacity(self.rr());
        let mut zpow = k.one();
        for c in &u.coords {
            out.push(k.mul(c, &zpow));
            zpow = k.mul(&zpow, zeta);
        }
        Ok(ExtElement { coords: out })
    }

    /// Field norm down to the base: product of all conjugates.
    pub fn norm(&self, u: &ExtElement) -> Result<FieldElement, FieldError> {
        if self.r == 2 {
            // e0^2 - a e1^2
            let k = &self.base;
            let a = k.from_int(self.a as i64);
            let e0sq = k.mul(&u.coords[0], &u.coords[0]);
            let e1sq = k.mul(&u.coords[1], &u.coords[1]);
            return Ok(k.sub(&e0sq, &k.mul(&a, &e1sq)));
        }
        let mut acc = self.from_base(self.base.one());
        let mut conj = u.clone();
        for _ in 0..self.r {
            acc = self.mul(&acc, &conj);
            conj = self.conj(&conj)?;
        }
        // the product is Galois-stable, hence lies in the base field
        Ok(acc.coords[0].clone())
    }

    /// Trace down to the base field.
    pub fn trace(&self, u: &ExtElement) -> Result<FieldElement, FieldError> {
        if self.r == 2 {
            let two = self.base.from_int(2);
            return Ok(self.base.mul(&two, &u.coords[0]));
        }
        let mut acc = self.zero();
        let mut conj = u.clone();
        for _ in 0..self.r {
            acc = self.add(&acc, &conj);
            conj = self.conj(&conj)?;
        }
        Ok(acc.coords[0].clone())
    }

    /// Valuation via the norm: `ord(u) = ord(N(u)) / r`, an integer for
    /// unramified extensions.
    pub fn ord(&self, u: &ExtElement) -> Result<Valuation, FieldError> {
        match self.base.ord(&self.norm(u)?) {
            Valuation::Infinity => Ok(Valuation::Infinity),
            Valuation::Finite(v) => {
                debug_assert_eq!(v % self.r as i64, 0, "unramified valuation not divisible");
                Ok(Valuation::Finite(v.div_euclid(self.r as i64)))
            }
            Valuation::AtLeast(b) => Ok(Valuation::AtLeast(b.div_euclid(self.r as i64))),
        }
    }

    /// Angular component: residue vector of `u * ϖ^{-ord u}`.
    pub fn ac(&self, u: &ExtElement) -> Result<ExtResidue, FieldError> {
        match self.ord(u)? {
            Valuation::Infinity => Ok(ExtResidue(vec![0; self.rr()])),
            Valuation::AtLeast(_) => Err(FieldError::AcUnknown),
            Valuation::Finite(v) => {
                let mut out = Vec::with_capacity(self.rr());
                for c in &u.coords {
                    let shifted = self.base.shift(c, -v);
                    out.push(self.base.residue(&shifted)?);
                }
                Ok(ExtResidue(out))
            }
        }
    }

    pub fn invert(&self, u: &ExtElement) -> Result<ExtElement, FieldError> {
        let n = self.norm(u)?;
        let n_inv = self.base.invert(&n)?;
        // norm / u = product of the other conjugates
        let mut cof = self.from_base(self.base.one());
        let mut conj = self.conj(u)?;
        for _ in 1..self.r {
            cof = self.mul(&cof, &conj);
            conj = self.conj(&conj)?;
        }
        Ok(self.scalar_mul(&n_inv, &cof))
    }

    pub fn display(&self, u: &ExtElement) -> String {
        let parts: Vec<String> = u
            .coords
            .iter()
            .enumerate()
            .map(|(i, c)| {
                let s = self.base.display(c);
                match i {
                    0 => format!("({s})"),
                    1 => format!("({s})*x"),
                    _ => format!("({s})*x^{i}"),
                }
            })
            .collect();
        parts.join(" + ")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::config::{CharKind, FieldConfig};

    fn ext(chark: CharKind, p: u64, r: u32, a: u64) -> ExtField {
        ExtField::new(&FieldConfig::base(chark, p, 8).unwrap(), r, a).unwrap()
    }

    #[test]
    fn quadratic_over_three() {
        let e = ext(CharKind::Positive, 3, 2, 2);
        // Tr(x) = x + conj(x) = 0
        let x = e.gen();
        let tr = e.trace(&x).unwrap();
        assert!(tr.is_zero() || matches!(e.base.ord(&tr), Valuation::Infinity));
    }

    #[test]
    fn norm_of_generator() {
        // p = 5, a = 2 (non-square): Norm(x) = -2 = 3 mod 5
        let e = ext(CharKind::Zero, 5, 2, 2);
        let n = e.norm(&e.gen()).unwrap();
        assert_eq!(e.base.residue(&n).unwrap(), 3);
    }

    #[test]
    fn rejects_square_proxy() {
        // 4 = 2^2 is a square mod 5
        let cfg = FieldConfig::base(CharKind::Zero, 5, 8).unwrap();
        assert!(matches!(
            ExtField::new(&cfg, 2, 4),
            Err(ConfigError::ReducibleProxy { .. })
        ));
    }

    #[test]
    fn norm_is_multiplicative_and_ord_scales() {
        let e = ext(CharKind::Positive, 5, 2, 2);
        let k = &e.base;
        let u = e.from_coords(vec![k.from_int(2), k.from_poly(&crate::poly::IntPoly::t())]);
        let v = e.from_coords(vec![k.from_int(1), k.from_int(3)]);
        let nu = e.norm(&u).unwrap();
        let nv = e.norm(&v).unwrap();
        let nuv = e.norm(&e.mul(&u, &v)).unwrap();
        assert_eq!(k.try_eq(&nuv, &k.mul(&nu, &nv)), Some(true));
        // ord via norm: u has ord 0 (unit coordinate 2)
        assert_eq!(e.ord(&u).unwrap(), Valuation::Finite(0));
        let shifted = e.scalar_mul(&k.uniformizer(), &u);
        assert_eq!(e.ord(&shifted).unwrap(), Valuation::Finite(1));
    }

    fn assert_agree(k: &crate::field::LocalField, a: &FieldElement, b: &FieldElement, min: i64) {
        match k.ord(&k.sub(a, b)) {
            Valuation::Infinity => {}
            Valuation::AtLeast(bound) => assert!(bound >= min, "agreement only below {bound}"),
            Valuation::Finite(v) => panic!("elements differ at digit {v}"),
        }
    }

    #[test]
    fn conjugation_is_ring_automorphism_fixing_base() {
        let e = ext(CharKind::Zero, 7, 2, 3);
        let k = e.base.clone();
        let u = e.from_coords(vec![k.from_int(4), k.from_int(2)]);
        let v = e.from_coords(vec![k.from_int(1), k.from_int(6)]);
        let lhs = e.conj(&e.mul(&u, &v)).unwrap();
        let rhs = e.mul(&e.conj(&u).unwrap(), &e.conj(&v).unwrap());
        for (a, b) in lhs.coords.iter().zip(&rhs.coords) {
            assert_agree(&k, a, b, 6);
        }
        let base_elem = e.from_base(k.from_int(5));
        let cb = e.conj(&base_elem).unwrap();
        assert_agree(&k, &cb.coords[0], &base_elem.coords[0], 6);
    }

    #[test]
    fn inversion() {
        let e = ext(CharKind::Zero, 5, 2, 2);
        let k = e.base.clone();
        let u = e.from_coords(vec![k.from_int(3), k.from_int(1)]);
        let inv = e.invert(&u).unwrap();
        let prod = e.mul(&u, &inv);
        assert_agree(&k, &prod.coords[0], &k.one(), 6);
        match k.ord(&prod.coords[1]) {
            Valuation::Infinity => {}
            Valuation::AtLeast(b) => assert!(b >= 6),
            Valuation::Finite(v) => panic!("x-coordinate of u/u has valuation {v}"),
        }
    }
}
