//! Capacity reports: an optional exact count plus labeled bounds.

use num_bigint::BigUint;

use crate::combinatorics::log2_biguint;

/// Slack used when a bound can only be compared through `f64` logarithms.
pub const LOG2_SLACK: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum BoundKind {
    Lower,
    Upper,
    /// Correct only up to an unspecified absolute constant factor.
    Order,
}

impl BoundKind {
    pub fn as_str(self) -> &'static str {
        match self {
            BoundKind::Lower => "lower",
            BoundKind::Upper => "upper",
            BoundKind::Order => "order",
        }
    }
}

/// One bound on a capacity, in bits, with the count it came from when the
/// bound is naturally an integer.
#[derive(Debug, Clone, PartialEq)]
pub struct Bound {
    pub name: String,
    pub kind: BoundKind,
    pub log2: f64,
    pub count: Option<BigUint>,
    pub strict: bool,
    /// The result the bound instantiates.
    pub anchor: String,
    /// False when the hypotheses of the underlying result fail; the value is
    /// still reported.
    pub hypotheses_hold: bool,
}

impl Bound {
    pub fn from_log2(name: &str, kind: BoundKind, log2: f64, anchor: &str) -> Self {
        Self {
            name: name.to_string(),
            kind,
            log2,
            count: None,
            strict: false,
            anchor: anchor.to_string(),
            hypotheses_hold: true,
        }
    }

    pub fn from_count(name: &str, kind: BoundKind, count: BigUint, anchor: &str) -> Self {
        Self {
            name: name.to_string(),
            kind,
            log2: log2_biguint(&count),
            count: Some(count),
            strict: false,
            anchor: anchor.to_string(),
            hypotheses_hold: true,
        }
    }

    pub fn strict(mut self) -> Self {
        self.strict = true;
        self
    }

    pub fn with_hypotheses(mut self, hold: bool) -> Self {
        self.hypotheses_hold = hold;
        self
    }

    /// Whether an exact count is consistent with this bound. Order bounds
    /// are always consistent.
    pub fn admits(&self, exact: &BigUint) -> bool {
        match (self.kind, &self.count) {
            (BoundKind::Order, _) => true,
            (BoundKind::Lower, Some(c)) if self.strict => exact > c,
            (BoundKind::Lower, Some(c)) => exact >= c,
            (BoundKind::Upper, Some(c)) if self.strict => exact < c,
            (BoundKind::Upper, Some(c)) => exact <= c,
            (kind, None) => {
                let v = log2_biguint(exact);
                match (kind, self.strict) {
                    (BoundKind::Lower, true) => v > self.log2 - LOG2_SLACK,
                    (BoundKind::Lower, false) => v >= self.log2 - LOG2_SLACK,
                    (_, true) => v < self.log2 + LOG2_SLACK,
                    (_, false) => v <= self.log2 + LOG2_SLACK,
                }
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CapacityReport {
    pub subject: String,
    pub exact_count: Option<BigUint>,
    pub bounds: Vec<Bound>,
    /// Free-form remarks carried into emitted reports.
    pub notes: Vec<String>,
}

impl CapacityReport {
    pub fn new(subject: impl Into<String>) -> Self {
        Self {
            subject: subject.into(),
            exact_count: None,
            bounds: Vec::new(),
            notes: Vec::new(),
        }
    }

    pub fn log2_exact(&self) -> Option<f64> {
        self.exact_count.as_ref().map(log2_biguint)
    }

    /// Bounds whose hypotheses hold but which the exact count contradicts.
    pub fn violations(&self) -> Vec<&Bound> {
        let Some(exact) = &self.exact_count else {
            return Vec::new();
        };
        self.bounds
            .iter()
            .filter(|b| b.hypotheses_hold && !b.admits(exact))
            .collect()
    }

    pub fn bound(&self, name: &str) -> Option<&Bound> {
        self.bounds.iter().find(|b| b.name == name)
    }
}
