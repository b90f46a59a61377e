//! Pass/fail records for numeric inequality checks.

use serde::{Deserialize, Serialize};
use std::fmt;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CheckKind {
    /// Counts towards the report's verdict.
    Required,
    /// Recorded for the reader; never fails the report.
    Informational,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Relation {
    #[serde(rename = "<=")]
    Le,
    #[serde(rename = "<")]
    Lt,
    #[serde(rename = ">=")]
    Ge,
    #[serde(rename = ">")]
    Gt,
}

impl Relation {
    fn holds(self, value: f64, bound: f64, slack: f64) -> bool {
        match self {
            Relation::Le => value <= bound + slack,
            Relation::Lt => value < bound + slack,
            Relation::Ge => value >= bound - slack,
            Relation::Gt => value > bound - slack,
        }
    }

    pub fn symbol(self) -> &'static str {
        match self {
            Relation::Le => "<=",
            Relation::Lt => "<",
            Relation::Ge => ">=",
            Relation::Gt => ">",
        }
    }
}

/// `value relation bound`, allowing `slack`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Check {
    pub description: String,
    pub value: f64,
    pub relation: Relation,
    pub bound: f64,
    pub slack: f64,
    pub pass: bool,
    pub kind: CheckKind,
}

impl Check {
    /// Signed distance to failure; nonnegative when the strict inequality holds.
    pub fn margin(&self) -> f64 {
        match self.relation {
            Relation::Le | Relation::Lt => self.bound - self.value,
            Relation::Ge | Relation::Gt => self.value - self.bound,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AuditReport {
    pub lemma_id: String,
    pub checks: Vec<Check>,
    /// Caveats printed with the report, e.g. that a grid is only a spot check.
    pub notes: Vec<String>,
    /// Structured per-sweep output (grids, arg-min locations).
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub details: Vec<serde_json::Value>,
    pub passed: bool,
}

impl AuditReport {
    pub fn new(lemma_id: impl Into<String>) -> Self {
        AuditReport { lemma_id: lemma_id.into(), checks: Vec::new(), notes: Vec::new(), details: Vec::new(), passed: true }
    }

    pub fn check(&mut self, description: impl Into<String>, value: f64, relation: Relation, bound: f64, slack: f64, kind: CheckKind) -> bool {
        let pass = !value.is_nan() && !bound.is_nan() && relation.holds(value, bound, slack);
        if kind == CheckKind::Required && !pass {
            self.passed = false;
        }
        self.checks.push(Check { description: description.into(), value, relation, bound, slack, pass, kind });
        pass
    }

    pub fn require(&mut self, description: impl Into<String>, value: f64, relation: Relation, bound: f64) -> bool {
        self.check(description, value, relation, bound, 0.0, CheckKind::Required)
    }

    pub fn inform(&mut self, description: impl Into<String>, value: f64, relation: Relation, bound: f64) -> bool {
        self.check(description, value, relation, bound, 0.0, CheckKind::Informational)
    }

    pub fn note(&mut self, text: impl Into<String>) {
        self.notes.push(text.into());
    }

    pub fn extend(&mut self, other: AuditReport) {
        self.passed &= other.passed;
        self.checks.extend(other.checks);
        self.notes.extend(other.notes);
        self.details.extend(other.details);
    }

    pub fn detail<T: Serialize>(&mut self, value: &T) {
        // Plain data structs always serialize.
        self.details.push(serde_json::to_value(value).expect("serializable detail"));
    }

    pub fn first_failure(&self) -> Option<&Check> {
        self.checks.iter().find(|c| c.kind == CheckKind::Required && !c.pass)
    }
}

impl fmt::Display for AuditReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "{}: {}", self.lemma_id, if self.passed { "PASS" } else { "FAIL" })?;
        for c in &self.checks {
            let tag = match (c.kind, c.pass) {
                (CheckKind::Required, true) => "ok  ",
                (CheckKind::Required, false) => "FAIL",
                (CheckKind::Informational, true) => "info",
                (CheckKind::Informational, false) => "info!",
            };
            writeln!(f, "  [{tag}] {}: {:.6e} {} {:.6e} (margin {:.3e})", c.description, c.value, c.relation.symbol(), c.bound, c.margin())?;
        }
        for n in &self.notes {
            writeln!(f, "  note: {n}")?;
        }
        Ok(())
    }
}
