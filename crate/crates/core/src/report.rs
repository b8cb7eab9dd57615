//! Structured pass/fail reports shared by every check.

use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::exact::ExactRational;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CheckReport {
    pub check: String,
    pub parameters: Value,
    pub expected: String,
    pub got: String,
    pub pass: bool,
    /// Number of pairings compared (0 for scalar checks).
    #[serde(default)]
    pub pairings: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

impl CheckReport {
    pub fn scalar(check: &str, parameters: Value, expected: &ExactRational, got: &ExactRational) -> Self {
        CheckReport {
            check: check.to_string(),
            parameters,
            expected: expected.to_string(),
            got: got.to_string(),
            pass: expected == got,
            pairings: 0,
            note: None,
        }
    }

    /// Compares two pairing vectors entry by entry. On failure the first
    /// differing entry is reported with both exact values.
    pub fn pairings(
        check: &str,
        parameters: Value,
        labels: &[String],
        expected: &[ExactRational],
        got: &[ExactRational],
    ) -> Self {
        assert_eq!(expected.len(), got.len());
        let first_bad = expected.iter().zip(got).position(|(a, b)| a != b);
        let (exp_s, got_s, note) = match first_bad {
            None => ("all equal".to_string(), "all equal".to_string(), None),
            Some(i) => (
                expected[i].to_string(),
                got[i].to_string(),
                Some(format!("first mismatch at {}", labels.get(i).map(String::as_str).unwrap_or("?"))),
            ),
        };
        CheckReport {
            check: check.to_string(),
            parameters,
            expected: exp_s,
            got: got_s,
            pass: first_bad.is_none(),
            pairings: expected.len(),
            note,
        }
    }

    pub fn with_note(mut self, note: impl Into<String>) -> Self {
        let n = note.into();
        self.note = Some(match self.note.take() {
            Some(old) => format!("{old}; {n}"),
            None => n,
        });
        self
    }

    pub fn to_json_line(&self) -> String {
        serde_json::to_string(self).expect("report serializes")
    }
}
