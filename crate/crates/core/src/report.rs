//! Pass/fail reports produced by the verification pipelines.

use std::fmt;

use serde::Serialize;
use serde_json::Value;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Check {
    pub name: String,
    pub pass: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub detail: Option<String>,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize)]
pub struct Report {
    pub checks: Vec<Check>,
}

impl Report {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn push(&mut self, name: impl Into<String>, pass: bool) -> &mut Check {
        self.checks.push(Check {
            name: name.into(),
            pass,
            witness: None,
            detail: None,
        });
        self.checks.last_mut().expect("just pushed")
    }

    /// Records a check; a failing one keeps `witness` as its counterexample.
    pub fn record(&mut self, name: impl Into<String>, failure: Option<String>) -> &mut Check {
        let c = self.push(name, failure.is_none());
        c.witness = failure;
        c
    }

    pub fn extend(&mut self, other: Report) {
        self.checks.extend(other.checks);
    }

    pub fn all_passed(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }

    pub fn failures(&self) -> impl Iterator<Item = &Check> {
        self.checks.iter().filter(|c| !c.pass)
    }

    pub fn to_json(&self) -> Value {
        serde_json::to_value(self).expect("report serializes")
    }
}

impl Check {
    pub fn with_detail(&mut self, d: impl Into<String>) -> &mut Self {
        self.detail = Some(d.into());
        self
    }
}

impl fmt::Display for Report {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for c in &self.checks {
            write!(f, "{} {}", if c.pass { "PASS" } else { "FAIL" }, c.name)?;
            if let Some(d) = &c.detail {
                write!(f, ": {d}")?;
            }
            if let Some(w) = &c.witness {
                write!(f, " [witness: {w}]")?;
            }
            writeln!(f)?;
        }
        Ok(())
    }
}
