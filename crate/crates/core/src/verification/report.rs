use std::collections::BTreeMap;

use serde::Serialize;

use crate::scalars::{Coeff, Field, ScalarMode};
use crate::spaces::{Region, SpaceError, TruncatedOperator};

/// How an item decides pass or fail.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum CheckKind {
    /// Passes only on an exact zero.
    Exact,
    /// Passes when the residual is at most the tolerance.
    Numeric,
    /// Reported but never decides the overall result.
    Diagnostic,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ReportItem {
    pub name: String,
    pub kind: CheckKind,
    /// Certified upper bound (norm items) or absolute error.
    pub residual: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub exact_zero: Option<bool>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub estimate: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub depth: Option<i64>,
    pub tolerance: f64,
    pub pass: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub detail: Option<String>,
}

impl ReportItem {
    /// Residual of an operator that should vanish on the region. Exact
    /// coefficients pass only when every entry in the region is zero.
    pub fn vanishing<C: Coeff>(
        name: impl Into<String>,
        op: &TruncatedOperator<C>,
        depth: i64,
        tol: f64,
    ) -> Result<Self, SpaceError> {
        let region = Region::Depth(depth);
        let nb = op.residual_norm(region)?;
        let (kind, exact_zero, pass) = if C::EXACT {
            let zero = op.is_zero_on(region)?;
            (CheckKind::Exact, Some(zero), zero)
        } else {
            (CheckKind::Numeric, None, nb.bound <= tol)
        };
        Ok(ReportItem {
            name: name.into(),
            kind,
            residual: nb.bound,
            exact_zero,
            estimate: Some(nb.estimate),
            depth: Some(depth),
            tolerance: if C::EXACT { 0.0 } else { tol },
            pass,
            detail: None,
        })
    }

    pub fn numeric(name: impl Into<String>, residual: f64, tol: f64) -> Self {
        ReportItem {
            name: name.into(),
            kind: CheckKind::Numeric,
            residual,
            exact_zero: None,
            estimate: None,
            depth: None,
            tolerance: tol,
            pass: residual <= tol,
            detail: None,
        }
    }

    pub fn exact(name: impl Into<String>, holds: bool) -> Self {
        ReportItem {
            name: name.into(),
            kind: CheckKind::Exact,
            residual: if holds { 0.0 } else { 1.0 },
            exact_zero: None,
            estimate: None,
            depth: None,
            tolerance: 0.0,
            pass: holds,
            detail: None,
        }
    }

    pub fn diagnostic(name: impl Into<String>, value: f64, detail: impl Into<String>) -> Self {
        ReportItem {
            name: name.into(),
            kind: CheckKind::Diagnostic,
            residual: value,
            exact_zero: None,
            estimate: None,
            depth: None,
            tolerance: 0.0,
            pass: true,
            detail: Some(detail.into()),
        }
    }

    pub fn with_depth(mut self, depth: i64) -> Self {
        self.depth = Some(depth);
        self
    }

    pub fn with_detail(mut self, detail: impl Into<String>) -> Self {
        self.detail = Some(detail.into());
        self
    }
}

#[derive(Clone, Debug, Default, PartialEq, Serialize)]
pub struct Environment {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub q: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub mode: Option<ScalarMode>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub space: Option<String>,
    /// Named truncation parameters such as `L`, `M` or `N`.
    pub truncation: BTreeMap<String, i64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
}

impl Environment {
    pub fn for_field<F: Field>(field: &F) -> Self {
        Environment { q: Some(field.describe_q()), mode: Some(field.mode()), ..Default::default() }
    }

    pub fn with(mut self, key: &str, value: i64) -> Self {
        self.truncation.insert(key.to_string(), value);
        self
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct VerificationReport {
    pub suite: String,
    pub environment: Environment,
    pub items: Vec<ReportItem>,
    pub notes: Vec<String>,
    pub pass: bool,
}

impl VerificationReport {
    pub fn new(suite: impl Into<String>) -> Self {
        VerificationReport { suite: suite.into(), environment: Environment::default(), items: vec![], notes: vec![], pass: true }
    }

    pub fn push(&mut self, item: ReportItem) {
        if item.kind != CheckKind::Diagnostic && !item.pass {
            self.pass = false;
        }
        self.items.push(item);
    }

    pub fn note(&mut self, text: impl Into<String>) {
        self.notes.push(text.into());
    }

    /// Appends the items and notes of another report.
    pub fn absorb(&mut self, other: VerificationReport) {
        for item in other.items {
            self.push(item);
        }
        self.notes.extend(other.notes);
    }

    pub fn failures(&self) -> impl Iterator<Item = &ReportItem> {
        self.items.iter().filter(|i| i.kind != CheckKind::Diagnostic && !i.pass)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    /// One line per item.
    pub fn to_text(&self) -> String {
        let mut out = format!("{}: {}\n", self.suite, if self.pass { "PASS" } else { "FAIL" });
        for item in &self.items {
            let verdict = match (item.kind, item.pass) {
                (CheckKind::Diagnostic, _) => "INFO",
                (_, true) => "ok  ",
                (_, false) => "FAIL",
            };
            let value = match (item.kind, item.exact_zero) {
                (_, Some(true)) => "exact zero".to_string(),
                (_, Some(false)) => format!("nonzero ({:.3e})", item.residual),
                (CheckKind::Exact, None) => if item.pass { "holds" } else { "does not hold" }.to_string(),
                _ => format!("{:.3e}", item.residual),
            };
            out.push_str(&format!("  {verdict} {}: {value}", item.name));
            if let Some(d) = item.depth {
                out.push_str(&format!(" [depth {d}]"));
            }
            if let Some(detail) = &item.detail {
                out.push_str(&format!(" ({detail})"));
            }
            out.push('\n');
        }
        for note in &self.notes {
            out.push_str(&format!("  note: {note}\n"));
        }
        out
    }
}
