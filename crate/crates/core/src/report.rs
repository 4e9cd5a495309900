//! Pass/fail records shared by the validators and the self test.

use serde::{Deserialize, Serialize};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CheckResult {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

impl CheckResult {
    pub fn pass(name: impl Into<String>, detail: impl Into<String>) -> Self {
        CheckResult { name: name.into(), passed: true, detail: detail.into() }
    }

    pub fn fail(name: impl Into<String>, detail: impl Into<String>) -> Self {
        CheckResult { name: name.into(), passed: false, detail: detail.into() }
    }

    pub fn new(name: impl Into<String>, passed: bool, detail: impl Into<String>) -> Self {
        CheckResult { name: name.into(), passed, detail: detail.into() }
    }
}

pub fn all_passed(checks: &[CheckResult]) -> bool {
    checks.iter().all(|c| c.passed)
}
