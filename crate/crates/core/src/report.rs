//! Machine-readable verification reports.

use std::time::Instant;

use serde::Serialize;
use serde_json::Value;

use crate::error::{Error, Result};

pub const SCHEMA_ID: &str = "linset-report/1";

/// Detail on success, detail and optional counterwitness on failure.
pub type Outcome = std::result::Result<String, (String, Option<Value>)>;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Status {
    Verified,
    Failed,
    #[serde(rename = "assumed-from-paper")]
    Assumed,
    SkippedBudget,
}

impl Status {
    pub fn as_str(self) -> &'static str {
        match self {
            Status::Verified => "verified",
            Status::Failed => "failed",
            Status::Assumed => "assumed-from-paper",
            Status::SkippedBudget => "skipped-budget",
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct Check {
    pub id: String,
    pub anchor: String,
    pub status: Status,
    pub elapsed_ms: u64,
    pub detail: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub counterwitness: Option<Value>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Params {
    pub q: u32,
    pub t: u32,
    pub pi: Option<Vec<usize>>,
    pub budget: u64,
    pub seed: u64,
}

#[derive(Clone, Debug, Serialize)]
pub struct Assumption {
    pub id: String,
    pub statement: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct Report {
    pub schema: String,
    pub scenario: String,
    pub params: Params,
    pub checks: Vec<Check>,
    /// ids of checks that were machine-verified
    pub verified: Vec<String>,
    /// statements taken on trust
    pub assumptions: Vec<Assumption>,
}

impl Report {
    pub fn new(scenario: &str, params: Params) -> Report {
        Report {
            schema: SCHEMA_ID.to_string(),
            scenario: scenario.to_string(),
            params,
            checks: Vec::new(),
            verified: Vec::new(),
            assumptions: Vec::new(),
        }
    }

    pub fn push(&mut self, check: Check) {
        if check.status == Status::Verified {
            self.verified.push(check.id.clone());
        }
        self.checks.push(check);
    }

    /// Records a statement taken on trust as an `assumed-from-paper` check.
    pub fn assume(&mut self, id: &str, anchor: &str, statement: &str) {
        self.assumptions.push(Assumption { id: id.to_string(), statement: statement.to_string() });
        self.push(Check {
            id: id.to_string(),
            anchor: anchor.to_string(),
            status: Status::Assumed,
            elapsed_ms: 0,
            detail: statement.to_string(),
            counterwitness: None,
        });
    }

    /// Times `body`, turning its outcome into a check: `Ok(Ok(detail))` is
    /// verified, `Ok(Err((detail, witness)))` failed, a budget error is
    /// skipped, any other error failed.
    pub fn run(
        &mut self,
        id: &str,
        anchor: &str,
        body: impl FnOnce() -> Result<Outcome>,
    ) {
        let start = Instant::now();
        let outcome = body();
        let elapsed_ms = start.elapsed().as_millis() as u64;
        let (status, detail, counterwitness) = match outcome {
            Ok(Ok(d)) => (Status::Verified, d, None),
            Ok(Err((d, w))) => (Status::Failed, d, w),
            Err(e @ Error::BudgetExceeded { .. }) => (Status::SkippedBudget, e.to_string(), None),
            Err(e) => (Status::Failed, format!("error: {e}"), None),
        };
        self.push(Check { id: id.to_string(), anchor: anchor.to_string(), status, elapsed_ms, detail, counterwitness });
    }

    pub fn extend(&mut self, other: Report) {
        for a in other.assumptions {
            self.assumptions.push(a);
        }
        for c in other.checks {
            if c.status == Status::Verified {
                self.verified.push(c.id.clone());
            }
            self.checks.push(c);
        }
    }

    pub fn count(&self, status: Status) -> usize {
        self.checks.iter().filter(|c| c.status == status).count()
    }

    pub fn any_failed(&self) -> bool {
        self.count(Status::Failed) > 0
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    /// Same report with every elapsed time zeroed.
    pub fn without_timings(&self) -> Report {
        let mut r = self.clone();
        for c in &mut r.checks {
            c.elapsed_ms = 0;
        }
        r
    }
}

/// Verified when `ok`, otherwise failed with `detail` as the reason.
pub fn outcome(ok: bool, detail: String) -> Outcome {
    if ok {
        Ok(detail)
    } else {
        Err((detail, None))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn params() -> Params {
        Params { q: 2, t: 3, pi: None, budget: 16, seed: 0 }
    }

    #[test]
    fn statuses_and_lists() {
        let mut r = Report::new("x", params());
        r.run("a", "", || Ok(outcome(true, "fine".into())));
        r.run("b", "", || Ok(outcome(false, "bad".into())));
        r.run("c", "", || Err(Error::BudgetExceeded { needed: 10, budget: 1 }));
        r.run("d", "", || Err(Error::Singular));
        r.assume("e", "", "trusted");
        let got: Vec<Status> = r.checks.iter().map(|c| c.status).collect();
        assert_eq!(
            got,
            [Status::Verified, Status::Failed, Status::SkippedBudget, Status::Failed, Status::Assumed]
        );
        assert_eq!(r.verified, ["a"]);
        assert_eq!(r.assumptions.len(), 1);
        assert!(r.any_failed());
    }

    #[test]
    fn keys_in_fixed_order() {
        let mut r = Report::new("x", params());
        r.run("a", "anchor", || Ok(outcome(true, "ok".into())));
        let json = r.without_timings().to_json();
        let pos = |k: &str| json.find(&format!("\"{k}\"")).unwrap();
        assert!(pos("schema") < pos("scenario") && pos("scenario") < pos("params") && pos("params") < pos("checks"));
        assert!(pos("checks") < pos("verified") && pos("verified") < pos("assumptions"));
        assert!(json.contains("\"status\": \"verified\""));
        assert!(!json.contains("counterwitness"));
    }
}
