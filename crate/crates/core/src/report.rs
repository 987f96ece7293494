//! Machine-readable verification reports (`supertransport-report/1`).

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use serde_json::Value;

pub const SCHEMA: &str = "supertransport-report/1";

/// One residual measurement against its threshold.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Check {
    pub id: String,
    /// Name of the identity being checked.
    pub anchor: String,
    pub backend: String,
    pub residual: f64,
    pub threshold: f64,
    pub pass: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub schema: String,
    pub suite: String,
    pub checks: Vec<Check>,
    pub environment: BTreeMap<String, Value>,
    pub pass: bool,
}

impl VerificationReport {
    pub fn new(suite: &str) -> Self {
        VerificationReport { schema: SCHEMA.into(), suite: suite.into(), checks: vec![], environment: BTreeMap::new(), pass: true }
    }

    /// Records a residual; NaN, infinite and negative inputs fail.
    pub fn check(&mut self, id: &str, anchor: &str, backend: &str, residual: f64, threshold: f64) -> bool {
        let pass = residual.is_finite() && residual >= 0.0 && residual <= threshold;
        self.checks.push(Check {
            id: id.into(),
            anchor: anchor.into(),
            backend: backend.into(),
            // non-finite values are not representable in JSON
            residual: if residual.is_finite() { residual.abs() } else { f64::MAX },
            threshold,
            pass,
        });
        self.pass &= pass;
        pass
    }

    /// Exact check: passes only on a zero residual.
    pub fn exact(&mut self, id: &str, anchor: &str, backend: &str, residual: f64) -> bool {
        self.check(id, anchor, backend, residual, 0.0)
    }

    pub fn env(&mut self, key: &str, value: impl Into<Value>) {
        self.environment.insert(key.into(), value.into());
    }

    pub fn merge(&mut self, other: VerificationReport) {
        for c in other.checks {
            self.pass &= c.pass;
            self.checks.push(c);
        }
        self.environment.extend(other.environment);
    }

    pub fn failures(&self) -> Vec<&Check> {
        self.checks.iter().filter(|c| !c.pass).collect()
    }

    pub fn to_json_pretty(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn overall_status_tracks_checks() {
        let mut r = VerificationReport::new("demo");
        assert!(r.exact("a", "zero", "rational", 0.0));
        assert!(r.pass);
        assert!(!r.check("b", "tol", "c64", 1e-3, 1e-9));
        assert!(!r.pass);
        assert!(!r.check("c", "nan", "c64", f64::NAN, 1.0));
        assert_eq!(r.failures().len(), 2);
        let back: VerificationReport = serde_json::from_str(&r.to_json_pretty()).unwrap();
        assert_eq!(back, r);
    }
}
