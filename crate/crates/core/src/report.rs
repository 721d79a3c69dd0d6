//! Verification reports: named checks with observed values, thresholds and
//! pass flags.

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

/// Acceptance rule of a check.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Threshold {
    /// `value ≤ max`.
    Max { max: f64 },
    /// Fitted order at least `min`, or errors at the noise floor.
    Order { min: f64 },
    /// `value ∈ [lo, hi]`.
    Range { lo: f64, hi: f64 },
    /// Exact boolean property.
    Exact,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Check {
    pub name: String,
    /// Observed value; `None` when not applicable, e.g. an exact check or an
    /// order that could not be fitted.
    pub value: Option<f64>,
    /// Raw samples behind the value, such as errors per refinement step.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub samples: Vec<f64>,
    pub threshold: Threshold,
    pub pass: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

impl Check {
    pub fn max(name: impl Into<String>, value: f64, max: f64) -> Self {
        Self { name: name.into(), value: Some(value), samples: vec![], threshold: Threshold::Max { max }, pass: value <= max, note: None }
    }

    pub fn range(name: impl Into<String>, value: Option<f64>, lo: f64, hi: f64) -> Self {
        let pass = value.is_some_and(|v| (lo..=hi).contains(&v));
        Self { name: name.into(), value, samples: vec![], threshold: Threshold::Range { lo, hi }, pass, note: None }
    }

    pub fn order(name: impl Into<String>, r: &crate::verification::Refinement, min: f64) -> Self {
        Self {
            name: name.into(),
            value: r.order,
            samples: r.errors.clone(),
            threshold: Threshold::Order { min },
            pass: r.converges_at(min),
            note: r.at_noise_floor.then(|| "errors at the noise floor".to_string()),
        }
    }

    pub fn exact(name: impl Into<String>, pass: bool) -> Self {
        Self { name: name.into(), value: None, samples: vec![], threshold: Threshold::Exact, pass, note: None }
    }

    /// A check that could not be evaluated.
    pub fn error(name: impl Into<String>, threshold: Threshold, msg: impl Into<String>) -> Self {
        Self { name: name.into(), value: None, samples: vec![], threshold, pass: false, note: Some(msg.into()) }
    }

    pub fn with_samples(mut self, s: Vec<f64>) -> Self {
        self.samples = s;
        self
    }

    pub fn with_note(mut self, n: impl Into<String>) -> Self {
        self.note = Some(n.into());
        self
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub tool: String,
    pub version: String,
    pub scenario: String,
    /// SHA-256 of the canonical JSON of the parsed scenario.
    pub scenario_hash: String,
    pub suite: String,
    pub checks: Vec<Check>,
    pub overall: bool,
}

impl Report {
    pub fn new(scenario: &str, scenario_hash: String, suite: &str, checks: Vec<Check>) -> Self {
        let overall = !checks.is_empty() && checks.iter().all(|c| c.pass);
        Self {
            tool: env!("CARGO_PKG_NAME").to_string(),
            version: env!("CARGO_PKG_VERSION").to_string(),
            scenario: scenario.to_string(),
            scenario_hash,
            suite: suite.to_string(),
            checks,
            overall,
        }
    }

    pub fn failures(&self) -> impl Iterator<Item = &Check> {
        self.checks.iter().filter(|c| !c.pass)
    }
}

/// Hex SHA-256 of `bytes`.
pub fn sha256_hex(bytes: &[u8]) -> String {
    hex::encode(Sha256::digest(bytes))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn overall_is_conjunction() {
        let ok = Report::new("s", "h".into(), "all", vec![Check::max("a", 1e-9, 1e-8), Check::exact("b", true)]);
        assert!(ok.overall);
        let bad = Report::new("s", "h".into(), "all", vec![Check::max("a", 1e-7, 1e-8), Check::exact("b", true)]);
        assert!(!bad.overall);
        assert_eq!(bad.failures().count(), 1);
        assert!(!Report::new("s", "h".into(), "all", vec![]).overall);
    }

    #[test]
    fn range_needs_a_value() {
        assert!(!Check::range("p", None, 1.8, 2.2).pass);
        assert!(Check::range("p", Some(2.0), 1.8, 2.2).pass);
    }

    #[test]
    fn hash_is_stable() {
        assert_eq!(sha256_hex(b"abc"), "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
    }

    #[test]
    fn report_roundtrip() {
        let r = Report::new("s", sha256_hex(b"x"), "flow", vec![Check::range("p", Some(2.01), 1.8, 2.2).with_samples(vec![1e-4, 1e-6])]);
        let j = serde_json::to_string(&r).unwrap();
        assert_eq!(serde_json::from_str::<Report>(&j).unwrap(), r);
    }
}
