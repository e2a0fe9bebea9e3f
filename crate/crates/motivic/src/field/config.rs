//! Structure configuration: which local field, at what precision.

use super::residue;
use thiserror::Error;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, serde::Serialize, serde::Deserialize)]
pub enum CharKind {
    /// p-adic side: characteristic zero, residue characteristic p.
    Zero,
    /// Laurent-series side: characteristic p.
    Positive,
}

impl CharKind {
    pub fn label(self) -> &'static str {
        match self {
            CharKind::Zero => "char0",
            CharKind::Positive => "charp",
        }
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ConfigError {
    #[error("{0} is not an odd prime")]
    BadPrime(u64),
    #[error("residue degree must be at least 1")]
    BadDegree,
    #[error("x^{r} - {a} is reducible mod {p}")]
    ReducibleProxy { r: u32, a: u64, p: u64 },
    #[error("conjugation needs r | p - 1 (r = {r}, p = {p})")]
    ConjugationUnsupported { r: u32, p: u64 },
    #[error("no unit a with x^{r} - a irreducible mod {p}")]
    NoProxyUnit { r: u32, p: u64 },
}

/// Configuration of one structure: characteristic, prime, residue degree,
/// and working precision (stored digit window).
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct FieldConfig {
    pub characteristic: CharKind,
    pub p: u64,
    pub residue_degree: u32,
    /// Digit window for inexact results of interpretation and inversion.
    pub precision: usize,
    /// For `residue_degree > 1`: the unit `a` with `x^r - a` irreducible.
    pub proxy_unit: Option<u64>,
}

pub const DEFAULT_PRECISION: usize = 8;

impl FieldConfig {
    /// A base-field configuration (residue degree 1).
    pub fn base(characteristic: CharKind, p: u64, precision: usize) -> Result<Self, ConfigError> {
        if p < 3 || !residue::is_prime(p) {
            return Err(ConfigError::BadPrime(p));
        }
        Ok(FieldConfig {
            characteristic,
            p,
            residue_degree: 1,
            precision: precision.max(2),
            proxy_unit: None,
        })
    }

    pub fn label(&self) -> String {
        let side = self.characteristic.label();
        if self.residue_degree == 1 {
            format!("{side}/p{}", self.p)
        } else {
            format!("{side}/p{}^#{}", self.p, self.residue_degree)
        }
    }
}
