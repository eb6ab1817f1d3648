//! Named check reports with left/middle/right values, margins, and status.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

/// Outcome of a named check.
///
/// Margins are oriented so that a non-negative value means the corresponding
/// inequality is satisfied, also for reversed (alpha > n) chains; VIOLATED
/// therefore always means some margin < -tol, and EQUALITY always means the
/// flagged margin is within tol of zero.
#[derive(Debug, Clone, PartialEq)]
pub enum CheckStatus {
    Holds,
    Equality,
    Violated,
    Skipped(String),
}

impl CheckStatus {
    fn as_string(&self) -> String {
        match self {
            CheckStatus::Holds => "HOLDS".into(),
            CheckStatus::Equality => "EQUALITY".into(),
            CheckStatus::Violated => "VIOLATED".into(),
            CheckStatus::Skipped(reason) => format!("SKIPPED({reason})"),
        }
    }

    fn parse(s: &str) -> Self {
        match s {
            "HOLDS" => CheckStatus::Holds,
            "EQUALITY" => CheckStatus::Equality,
            "VIOLATED" => CheckStatus::Violated,
            other => {
                let reason = other
                    .strip_prefix("SKIPPED(")
                    .and_then(|r| r.strip_suffix(')'))
                    .unwrap_or(other);
                CheckStatus::Skipped(reason.to_string())
            }
        }
    }

    pub fn is_violated(&self) -> bool {
        matches!(self, CheckStatus::Violated)
    }
}

impl Serialize for CheckStatus {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.serialize_str(&self.as_string())
    }
}

impl<'de> Deserialize<'de> for CheckStatus {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        Ok(CheckStatus::parse(&s))
    }
}

/// Report of one inequality check. Serializes with a stable field order so
/// that identical runs produce byte-identical JSON.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct InequalityReport {
    pub check: String,
    pub params: BTreeMap<String, serde_json::Value>,
    pub left: f64,
    pub middle: f64,
    pub right: f64,
    pub margins: [f64; 2],
    pub tol: f64,
    pub status: CheckStatus,
    pub notes: Vec<String>,
}

impl InequalityReport {
    pub fn new(check: impl Into<String>) -> Self {
        InequalityReport {
            check: check.into(),
            params: BTreeMap::new(),
            left: f64::NAN,
            middle: f64::NAN,
            right: f64::NAN,
            margins: [f64::NAN, f64::NAN],
            tol: 0.0,
            status: CheckStatus::Skipped("not evaluated".into()),
            notes: Vec::new(),
        }
    }

    pub fn param(mut self, key: &str, value: impl Into<serde_json::Value>) -> Self {
        self.params.insert(key.into(), value.into());
        self
    }

    pub fn note(mut self, text: impl Into<String>) -> Self {
        self.notes.push(text.into());
        self
    }

    /// Classifies a two-sided chain from oriented margins: EQUALITY when a
    /// margin expected to vanish is within tol, VIOLATED when any margin is
    /// below -tol, HOLDS otherwise.
    pub fn classify(mut self, equality_expected: &[bool; 2]) -> Self {
        let m = self.margins;
        if m.iter().any(|v| !v.is_finite()) {
            self.status = CheckStatus::Skipped("non-finite margin".into());
            return self;
        }
        if m[0] < -self.tol || m[1] < -self.tol {
            self.status = CheckStatus::Violated;
            return self;
        }
        let eq = (equality_expected[0] && m[0].abs() <= self.tol)
            || (equality_expected[1] && m[1].abs() <= self.tol);
        self.status = if eq {
            CheckStatus::Equality
        } else {
            CheckStatus::Holds
        };
        self
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn status_round_trip() {
        for s in [
            CheckStatus::Holds,
            CheckStatus::Equality,
            CheckStatus::Violated,
            CheckStatus::Skipped("because".into()),
        ] {
            let json = serde_json::to_string(&s).unwrap();
            let back: CheckStatus = serde_json::from_str(&json).unwrap();
            assert_eq!(s, back);
        }
    }

    #[test]
    fn classification_rules() {
        let r = InequalityReport::new("demo");
        let mut r1 = r.clone();
        r1.margins = [0.5, 0.1];
        r1.tol = 1e-6;
        assert_eq!(r1.classify(&[false, false]).status, CheckStatus::Holds);

        let mut r2 = r.clone();
        r2.margins = [1e-9, 0.1];
        r2.tol = 1e-6;
        assert_eq!(r2.classify(&[true, false]).status, CheckStatus::Equality);

        let mut r3 = r;
        r3.margins = [-1.0, 0.1];
        r3.tol = 1e-6;
        assert_eq!(r3.classify(&[false, false]).status, CheckStatus::Violated);
    }
}
