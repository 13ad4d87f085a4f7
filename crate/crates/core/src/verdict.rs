use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::projgeom::ResolutionParams;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum Status {
    Pass,
    Fail,
    Inconclusive,
}

impl Status {
    /// Worst-of combination: any FAIL wins, then INCONCLUSIVE.
    pub fn combine(self, other: Status) -> Status {
        match (self, other) {
            (Status::Fail, _) | (_, Status::Fail) => Status::Fail,
            (Status::Inconclusive, _) | (_, Status::Inconclusive) => Status::Inconclusive,
            _ => Status::Pass,
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Status::Pass => "PASS",
            Status::Fail => "FAIL",
            Status::Inconclusive => "INCONCLUSIVE",
        }
    }
}

impl fmt::Display for Status {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// A resolution-stamped decision with the measurements that produced it.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Verdict {
    pub status: Status,
    pub residuals: BTreeMap<String, f64>,
    pub resolution: ResolutionParams,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub witness: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub reason: Option<String>,
    #[serde(default, skip_serializing_if = "BTreeSet::is_empty")]
    pub flags: BTreeSet<String>,
}

impl Verdict {
    pub fn new(status: Status, resolution: &ResolutionParams) -> Self {
        Verdict {
            status,
            residuals: BTreeMap::new(),
            resolution: resolution.clone(),
            witness: None,
            reason: None,
            flags: BTreeSet::new(),
        }
    }

    pub fn pass(resolution: &ResolutionParams) -> Self {
        Verdict::new(Status::Pass, resolution)
    }

    pub fn fail(resolution: &ResolutionParams, witness: impl Into<String>) -> Self {
        Verdict::new(Status::Fail, resolution).with_witness(witness)
    }

    pub fn inconclusive(resolution: &ResolutionParams, reason: impl Into<String>) -> Self {
        Verdict::new(Status::Inconclusive, resolution).with_reason(reason)
    }

    pub fn with_residual(mut self, name: &str, value: f64) -> Self {
        self.residuals.insert(name.to_string(), value);
        self
    }

    pub fn with_witness(mut self, witness: impl Into<String>) -> Self {
        self.witness = Some(witness.into());
        self
    }

    pub fn with_reason(mut self, reason: impl Into<String>) -> Self {
        self.reason = Some(reason.into());
        self
    }

    pub fn with_flag(mut self, flag: &str) -> Self {
        self.flags.insert(flag.to_string());
        self
    }

    pub fn residual(&self, name: &str) -> Option<f64> {
        self.residuals.get(name).copied()
    }

    pub fn has_flag(&self, flag: &str) -> bool {
        self.flags.contains(flag)
    }

    pub fn is_pass(&self) -> bool {
        self.status == Status::Pass
    }

    pub fn is_fail(&self) -> bool {
        self.status == Status::Fail
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.status)?;
        if let Some(w) = &self.witness {
            write!(f, " witness={w}")?;
        }
        if let Some(r) = &self.reason {
            write!(f, " reason={r}")?;
        }
        Ok(())
    }
}
