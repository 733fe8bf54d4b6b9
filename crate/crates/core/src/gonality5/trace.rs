//! Machine-checked proof traces and verification reports.

use serde::Serialize;

use super::divisor::{lin_equiv, Divisor};
use crate::error::GonalityError;

/// One call to the linear-equivalence oracle.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct OracleCall {
    pub component: String,
    pub lhs: String,
    pub rhs: String,
    pub equivalent: bool,
}

impl OracleCall {
    /// Runs the oracle and records the call.
    pub fn run(lhs: &Divisor, rhs: &Divisor) -> Result<Self, GonalityError> {
        Ok(Self {
            component: lhs.component.clone(),
            lhs: lhs.to_string(),
            rhs: rhs.to_string(),
            equivalent: lin_equiv(lhs, rhs)?,
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
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

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Step {
    pub claim: String,
    pub oracle_calls: Vec<OracleCall>,
    pub verdict: Verdict,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub detail: Option<String>,
}

impl Step {
    pub fn new(claim: impl Into<String>, ok: bool) -> Self {
        Self {
            claim: claim.into(),
            oracle_calls: Vec::new(),
            verdict: Verdict::from_bool(ok),
            detail: None,
        }
    }

    pub fn with_calls(mut self, calls: Vec<OracleCall>) -> Self {
        self.oracle_calls = calls;
        self
    }

    pub fn with_detail(mut self, detail: impl Into<String>) -> Self {
        self.detail = Some(detail.into());
        self
    }

    pub fn passed(&self) -> bool {
        self.verdict == Verdict::Pass
    }
}

/// Case analysis excluding covers of one degree.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ProofTrace {
    pub degree: u32,
    pub steps: Vec<Step>,
    pub conclusion: String,
}

impl ProofTrace {
    pub fn holds(&self) -> bool {
        !self.steps.is_empty() && self.steps.iter().all(Step::passed)
    }

    pub fn oracle_call_count(&self) -> usize {
        self.steps.iter().map(|s| s.oracle_calls.len()).sum()
    }
}

/// Result of checking a cover; passes iff every step passes.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct VerificationReport {
    pub subject: String,
    pub steps: Vec<Step>,
}

impl VerificationReport {
    pub fn passed(&self) -> bool {
        !self.steps.is_empty() && self.steps.iter().all(Step::passed)
    }

    pub fn first_failure(&self) -> Option<&Step> {
        self.steps.iter().find(|s| !s.passed())
    }

    pub fn step(&self, claim_prefix: &str) -> Option<&Step> {
        self.steps
            .iter()
            .find(|s| s.claim.starts_with(claim_prefix))
    }
}
