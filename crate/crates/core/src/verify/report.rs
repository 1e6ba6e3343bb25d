use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Status {
    Pass,
    Fail,
    /// A budget ran out before the check could decide.
    Incomplete,
}

impl Status {
    /// The worse of two outcomes: fail over incomplete over pass.
    pub fn combine(self, other: Status) -> Status {
        use Status::*;
        match (self, other) {
            (Fail, _) | (_, Fail) => Fail,
            (Incomplete, _) | (_, Incomplete) => Incomplete,
            _ => Pass,
        }
    }
}

impl fmt::Display for Status {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Status::Pass => "pass",
            Status::Fail => "fail",
            Status::Incomplete => "incomplete",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Assertion {
    pub name: String,
    pub holds: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub detail: Option<String>,
}

/// A minimal reproduction of a failed assertion.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Witness {
    pub assertion: String,
    pub description: String,
}

/// Outcome of one named check.
///
/// `observations` hold computed values that are reported but not asserted.
/// `wall_time` (seconds) is only filled in on request, so that reports for
/// fixed inputs serialize byte-identically.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub check_id: String,
    pub parameters: BTreeMap<String, String>,
    pub claim_ref: String,
    pub status: Status,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub incomplete_reason: Option<String>,
    pub assertions: Vec<Assertion>,
    pub witnesses: Vec<Witness>,
    pub counts: BTreeMap<String, u64>,
    pub observations: BTreeMap<String, String>,
    pub seed: Option<u64>,
    pub sample_size: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub wall_time: Option<f64>,
}

impl VerificationReport {
    pub fn new(check_id: impl Into<String>, claim_ref: impl Into<String>) -> Self {
        VerificationReport {
            check_id: check_id.into(),
            parameters: BTreeMap::new(),
            claim_ref: claim_ref.into(),
            status: Status::Pass,
            incomplete_reason: None,
            assertions: Vec::new(),
            witnesses: Vec::new(),
            counts: BTreeMap::new(),
            observations: BTreeMap::new(),
            seed: None,
            sample_size: None,
            wall_time: None,
        }
    }

    pub fn param(&mut self, key: &str, value: impl ToString) -> &mut Self {
        self.parameters.insert(key.into(), value.to_string());
        self
    }

    /// Records an assertion; `witness` is only evaluated when it fails.
    pub fn check(&mut self, name: impl Into<String>, holds: bool, witness: impl FnOnce() -> String) -> bool {
        let name = name.into();
        if !holds {
            self.witnesses.push(Witness {
                assertion: name.clone(),
                description: witness(),
            });
            self.status = Status::Fail;
        }
        self.assertions.push(Assertion {
            name,
            holds,
            detail: None,
        });
        holds
    }

    /// Like [`VerificationReport::check`] with a detail string kept on pass
    /// and fail.
    pub fn check_detail(
        &mut self,
        name: impl Into<String>,
        holds: bool,
        detail: impl Into<String>,
        witness: impl FnOnce() -> String,
    ) -> bool {
        self.check(name, holds, witness);
        self.assertions.last_mut().unwrap().detail = Some(detail.into());
        holds
    }

    pub fn count(&mut self, key: &str, value: u64) -> &mut Self {
        self.counts.insert(key.into(), value);
        self
    }

    pub fn observe(&mut self, key: impl Into<String>, value: impl ToString) -> &mut Self {
        self.observations.insert(key.into(), value.to_string());
        self
    }

    /// Marks the report incomplete unless it already failed.
    pub fn incomplete(&mut self, reason: impl Into<String>) {
        self.incomplete_reason = Some(reason.into());
        self.status = self.status.combine(Status::Incomplete);
    }

    pub fn passed(&self) -> bool {
        self.status == Status::Pass
    }

    pub fn failed_assertions(&self) -> impl Iterator<Item = &Assertion> {
        self.assertions.iter().filter(|a| !a.holds)
    }
}

/// Reports of a suite run, in a fixed order.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SuiteReport {
    pub status: Status,
    pub reports: Vec<VerificationReport>,
}

impl SuiteReport {
    pub fn new(reports: Vec<VerificationReport>) -> Self {
        let status = reports.iter().fold(Status::Pass, |s, r| s.combine(r.status));
        SuiteReport { status, reports }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn failures_carry_witnesses() {
        let mut r = VerificationReport::new("demo", "claim");
        r.check("ok", true, || unreachable!());
        assert_eq!(r.status, Status::Pass);
        r.check("bad", false, || "x".into());
        assert_eq!(r.status, Status::Fail);
        assert_eq!(r.witnesses.len(), 1);
        r.incomplete("budget");
        assert_eq!(r.status, Status::Fail);
    }

    #[test]
    fn status_order() {
        assert_eq!(Status::Pass.combine(Status::Incomplete), Status::Incomplete);
        assert_eq!(Status::Incomplete.combine(Status::Fail), Status::Fail);
    }
}
