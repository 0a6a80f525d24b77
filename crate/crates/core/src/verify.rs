//! Verification entries shared by every suite.

use std::time::Instant;

use serde::{Deserialize, Serialize};

use crate::coeff::QRat;
use crate::error::Result;
use crate::ncalg::{Alphabet, NCExpr};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Status {
    Verified,
    Failed,
    InformationalMismatch,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Check {
    pub id: String,
    pub tag: String,
    pub status: Status,
    pub residual: String,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub detail: Option<String>,
    pub wall_time_ms: f64,
}

/// Result of one identity check before it is stamped with id and timing.
#[derive(Clone, Debug)]
pub struct Outcome {
    pub status: Status,
    pub residual: String,
    pub detail: Option<String>,
}

impl Outcome {
    /// Verified iff `residual` is zero.
    pub fn zero(residual: &NCExpr, alphabet: &Alphabet) -> Outcome {
        Outcome {
            status: if residual.is_zero() { Status::Verified } else { Status::Failed },
            residual: residual.render(alphabet),
            detail: None,
        }
    }

    /// Like [`Outcome::zero`] but a non-zero residual is only informational.
    pub fn zero_informational(residual: &NCExpr, alphabet: &Alphabet) -> Outcome {
        let mut o = Outcome::zero(residual, alphabet);
        if o.status == Status::Failed {
            o.status = Status::InformationalMismatch;
        }
        o
    }

    /// Compares a computed scalar against an expected one.
    pub fn scalar(computed: &QRat, expected: &QRat) -> Outcome {
        let diff = computed - expected;
        Outcome {
            status: if diff.is_zero() { Status::Verified } else { Status::Failed },
            residual: diff.to_string(),
            detail: Some(format!("computed {computed}, expected {expected}")),
        }
    }

    pub fn flag(ok: bool, detail: String) -> Outcome {
        Outcome {
            status: if ok { Status::Verified } else { Status::Failed },
            residual: if ok { "0".into() } else { "mismatch".into() },
            detail: Some(detail),
        }
    }

    pub fn informational(self) -> Outcome {
        let status = match self.status {
            Status::Failed => Status::InformationalMismatch,
            s => s,
        };
        Outcome { status, ..self }
    }

    pub fn with_detail(mut self, detail: impl Into<String>) -> Outcome {
        let d = detail.into();
        self.detail = Some(match self.detail.take() {
            Some(old) => format!("{old}; {d}"),
            None => d,
        });
        self
    }
}

/// Collects timed checks. An error raised while computing a check is
/// recorded as a failed entry rather than aborting the suite.
#[derive(Default)]
pub struct Checks {
    entries: Vec<Check>,
}

impl Checks {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn run<F>(&mut self, id: &str, tag: &str, f: F)
    where
        F: FnOnce() -> Result<Outcome>,
    {
        let start = Instant::now();
        let outcome = f();
        let wall_time_ms = start.elapsed().as_secs_f64() * 1e3;
        let (status, residual, detail) = match outcome {
            Ok(o) => (o.status, o.residual, o.detail),
            Err(e) => (Status::Failed, "error".to_string(), Some(e.to_string())),
        };
        self.entries.push(Check {
            id: id.to_string(),
            tag: tag.to_string(),
            status,
            residual,
            detail,
            wall_time_ms,
        });
    }

    pub fn extend(&mut self, other: Checks) {
        self.entries.extend(other.entries);
    }

    pub fn into_entries(self) -> Vec<Check> {
        self.entries
    }

    pub fn entries(&self) -> &[Check] {
        &self.entries
    }
}
