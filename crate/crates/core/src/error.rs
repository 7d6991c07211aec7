//! Error types shared across the engine.

use std::fmt;

/// A single validation failure, tied to the field (or field path) that
/// violated its invariant.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Violation {
    /// Dotted path of the offending field, e.g. `bounds.c_high`.
    pub field: String,
    /// What went wrong, with the observed value where useful.
    pub message: String,
}

impl Violation {
    pub fn new(field: impl Into<String>, message: impl Into<String>) -> Self {
        Self {
            field: field.into(),
            message: message.into(),
        }
    }
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {}", self.field, self.message)
    }
}

/// Every violation found in one validation pass. Validation never stops at
/// the first problem; authors fix scenarios iteratively and want the full
/// list.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct ValidationErrors {
    pub violations: Vec<Violation>,
}

impl ValidationErrors {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn push(&mut self, field: impl Into<String>, message: impl Into<String>) {
        self.violations.push(Violation::new(field, message));
    }

    pub fn is_empty(&self) -> bool {
        self.violations.is_empty()
    }

    pub fn len(&self) -> usize {
        self.violations.len()
    }

    /// Ok(()) when no violations were recorded, otherwise Err(self).
    pub fn into_result(self) -> Result<(), ValidationErrors> {
        if self.is_empty() {
            Ok(())
        } else {
            Err(self)
        }
    }
}

impl fmt::Display for ValidationErrors {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, v) in self.violations.iter().enumerate() {
            if i > 0 {
                writeln!(f)?;
            }
            write!(f, "{v}")?;
        }
        Ok(())
    }
}

impl std::error::Error for ValidationErrors {}

/// Errors raised by engine operations.
#[derive(Debug, thiserror::Error)]
pub enum CoreError {
    #[error("invalid scenario:\n{0}")]
    Invalid(#[from] ValidationErrors),

    #[error("profile outside feasible box: {0}")]
    OutOfBox(Violation),

    #[error("integrand is non-finite at node z = {z} (value {value})")]
    NonFiniteIntegrand { z: f64, value: f64 },

    #[error("{0}")]
    Domain(String),
}
