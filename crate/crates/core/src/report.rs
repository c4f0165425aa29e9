//! Machine-readable verification reports shared by the check suites and the
//! CLI.
//!
//! Reports are deterministic: given the same request and seed the serialized
//! bytes are identical (runtimes are opt-in and excluded by default).

use std::collections::BTreeMap;
use std::fmt;

use serde::Serialize;

/// Outcome of one check.
#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Status {
    Pass,
    Fail,
    /// A determinant expected to vanish (the non-elliptic dimension).
    SingularAsExpected,
}

impl Status {
    pub fn ok(self) -> bool {
        matches!(self, Status::Pass | Status::SingularAsExpected)
    }

    pub fn from_bool(b: bool) -> Self {
        if b {
            Status::Pass
        } else {
            Status::Fail
        }
    }
}

impl fmt::Display for Status {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Status::Pass => "pass",
            Status::Fail => "fail",
            Status::SingularAsExpected => "singular-as-expected",
        };
        write!(f, "{s}")
    }
}

/// One named check with its status and optional exact witnesses.
#[derive(Clone, Debug, Serialize)]
pub struct CheckOutcome {
    pub name: String,
    pub status: Status,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub lhs: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub rhs: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub difference: Option<String>,
}

impl CheckOutcome {
    pub fn new(name: impl Into<String>, status: Status) -> Self {
        CheckOutcome {
            name: name.into(),
            status,
            witness: None,
            lhs: None,
            rhs: None,
            difference: None,
        }
    }

    pub fn pass(name: impl Into<String>) -> Self {
        CheckOutcome::new(name, Status::Pass)
    }

    pub fn of(name: impl Into<String>, ok: bool) -> Self {
        CheckOutcome::new(name, Status::from_bool(ok))
    }

    pub fn with_witness(mut self, w: impl Into<String>) -> Self {
        self.witness = Some(w.into());
        self
    }

    pub fn with_sides(
        mut self,
        lhs: impl Into<String>,
        rhs: impl Into<String>,
        difference: impl Into<String>,
    ) -> Self {
        self.lhs = Some(lhs.into());
        self.rhs = Some(rhs.into());
        self.difference = Some(difference.into());
        self
    }
}

/// A suite of checks with its parameters.
#[derive(Clone, Debug, Serialize)]
pub struct SuiteReport {
    pub suite: String,
    pub params: BTreeMap<String, String>,
    pub checks: Vec<CheckOutcome>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub runtime_ms: Option<u128>,
}

impl SuiteReport {
    pub fn new(suite: impl Into<String>) -> Self {
        SuiteReport {
            suite: suite.into(),
            params: BTreeMap::new(),
            checks: Vec::new(),
            runtime_ms: None,
        }
    }

    pub fn param(mut self, key: &str, value: impl fmt::Display) -> Self {
        self.params.insert(key.to_string(), value.to_string());
        self
    }

    pub fn push(&mut self, check: CheckOutcome) {
        self.checks.push(check);
    }

    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.status.ok())
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serialization")
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let params: Vec<String> = self
            .params
            .iter()
            .map(|(k, v)| format!("{k}={v}"))
            .collect();
        out.push_str(&format!("suite {} [{}]\n", self.suite, params.join(" ")));
        for c in &self.checks {
            out.push_str(&format!("  {:<44} {}\n", c.name, c.status));
            if let Some(w) = &c.witness {
                out.push_str(&format!("      witness: {w}\n"));
            }
            if let Some(d) = &c.difference {
                out.push_str(&format!("      difference: {d}\n"));
            }
        }
        out
    }

    pub fn to_csv(&self) -> String {
        let params: Vec<String> = self
            .params
            .iter()
            .map(|(k, v)| format!("{k}={v}"))
            .collect();
        let params = params.join(";");
        let mut out = String::new();
        for c in &self.checks {
            out.push_str(&format!(
                "{},{},{},{}\n",
                self.suite,
                params,
                c.name,
                c.status
            ));
        }
        out
    }
}

/// Aggregate over many suites.
#[derive(Clone, Debug, Serialize)]
pub struct AggregateReport {
    pub suites: Vec<SuiteReport>,
    pub total_checks: usize,
    pub failed_checks: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub runtime_ms: Option<u128>,
}

impl AggregateReport {
    pub fn from_suites(suites: Vec<SuiteReport>) -> Self {
        let total_checks = suites.iter().map(|s| s.checks.len()).sum();
        let failed_checks = suites
            .iter()
            .flat_map(|s| &s.checks)
            .filter(|c| !c.status.ok())
            .count();
        AggregateReport {
            suites,
            total_checks,
            failed_checks,
            runtime_ms: None,
        }
    }

    pub fn passed(&self) -> bool {
        self.failed_checks == 0
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serialization")
    }
}
