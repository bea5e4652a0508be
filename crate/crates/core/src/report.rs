use serde::{Deserialize, Serialize};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Pass,
    Fail,
}

impl Verdict {
    pub fn from_bool(ok: bool) -> Self {
        if ok {
            Verdict::Pass
        } else {
            Verdict::Fail
        }
    }
}

/// Where a checked identity first broke.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Failure {
    pub indices: Vec<usize>,
    pub element: String,
    pub lhs: String,
    pub rhs: String,
}

/// Outcome of an identity check: `{check, verdict, first_failure}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Report {
    pub check: String,
    pub verdict: Verdict,
    pub first_failure: Option<Failure>,
}

impl Report {
    pub fn new(check: impl Into<String>, first_failure: Option<Failure>) -> Self {
        Report {
            check: check.into(),
            verdict: Verdict::from_bool(first_failure.is_none()),
            first_failure,
        }
    }

    pub fn passed(&self) -> bool {
        self.verdict == Verdict::Pass
    }
}
