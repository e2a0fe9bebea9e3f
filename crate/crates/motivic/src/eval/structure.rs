//! Structures interpreting the language, and finite evaluation boxes.

use crate::field::{CharKind, ConfigError, ExtField, FieldConfig, FieldElement, FieldError, LocalField};
use crate::lang::VfConst;
use std::collections::BTreeMap;

/// A structure: one local field with its interpretation of the constants,
/// plus extensions built on demand.
#[derive(Debug, Clone)]
pub struct Structure {
    pub field: LocalField,
}

impl Structure {
    pub fn new(cfg: FieldConfig) -> Self {
        Structure { field: LocalField::new(cfg) }
    }

    /// Convenience constructor for a base structure.
    pub fn base(chark: CharKind, p: u64, precision: usize) -> Result<Self, ConfigError> {
        Ok(Self::new(FieldConfig::base(chark, p, precision)?))
    }

    pub fn p(&self) -> u64 {
        self.field.p()
    }

    /// Residue field cardinality of the base structure.
    pub fn q(&self) -> u64 {
        self.field.p()
    }

    pub fn interpret_vf_const(&self, c: &VfConst) -> Result<FieldElement, FieldError> {
        self.field.from_rational(&c.poly, c.denom)
    }

    pub fn interpret_rf_const(&self, k: i64) -> u64 {
        crate::field::residue::reduce(k, self.p())
    }

    /// The unramified extension of the given degree via the binomial proxy.
    pub fn extension(&self, r: u32, a: u64) -> Result<ExtField, ConfigError> {
        ExtField::new(&self.field.cfg, r, a)
    }

    pub fn label(&self) -> String {
        self.field.cfg.label()
    }
}

/// Finite enumeration ranges for the variables of a formula.
///
/// Valued-field variables range over the ball `ord >= min`, enumerated as
/// classes modulo `ϖ^(min + window)`; value-group variables over closed
/// intervals; residue-field variables always over the whole residue field.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct EvalBox {
    pub vf: BTreeMap<String, i64>,
    pub vg: BTreeMap<String, (i64, i64)>,
    pub window: usize,
}

impl EvalBox {
    pub fn new(window: usize) -> Self {
        EvalBox { vf: BTreeMap::new(), vg: BTreeMap::new(), window }
    }

    pub fn with_vf(mut self, name: &str, min_val: i64) -> Self {
        self.vf.insert(name.to_string(), min_val);
        self
    }

    pub fn with_vg(mut self, name: &str, lo: i64, hi: i64) -> Self {
        self.vg.insert(name.to_string(), (lo, hi));
        self
    }

    pub fn with_window(mut self, window: usize) -> Self {
        self.window = window;
        self
    }
}
