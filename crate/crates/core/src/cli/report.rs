//! Suite selection, execution and the JSON report.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use num_rational::BigRational;
use serde::{Deserialize, Serialize};

use crate::coset::{coset_suite, CosetPresentation, Example};
use crate::error::{Error, Result};
use crate::group::{cartan_suite, group_suite, GroupPresentation};
use crate::qplane::{qplane_suite, BorelPresentation, QplaneOptions};
use crate::symops::{symops_suite, SymopsOptions, VectorFields};
use crate::verify::{Check, Checks, Status};
use crate::wznw::wznw_suite;

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SuiteId {
    Group,
    Cartan,
    Wznw,
    Coset,
    Symops,
    Qplane,
    All,
}

impl SuiteId {
    pub const MODULES: [SuiteId; 6] =
        [SuiteId::Group, SuiteId::Cartan, SuiteId::Wznw, SuiteId::Coset, SuiteId::Symops, SuiteId::Qplane];

    pub fn name(self) -> &'static str {
        match self {
            SuiteId::Group => "group",
            SuiteId::Cartan => "cartan",
            SuiteId::Wznw => "wznw",
            SuiteId::Coset => "coset",
            SuiteId::Symops => "symops",
            SuiteId::Qplane => "qplane",
            SuiteId::All => "all",
        }
    }
}

impl fmt::Display for SuiteId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for SuiteId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        SuiteId::MODULES
            .into_iter()
            .chain([SuiteId::All])
            .find(|id| id.name() == s)
            .ok_or_else(|| Error::Usage(format!("unknown suite `{s}`")))
    }
}

#[derive(Clone, Debug)]
pub struct SuiteOptions {
    /// Specialize `q` to this value before checking.
    pub q0: Option<BigRational>,
    pub seed: u64,
    /// Truncation order of the quantum-plane series.
    pub order: usize,
    /// Restrict the coset suite to one example; `None` runs all of them.
    pub example: Option<Example>,
}

impl Default for SuiteOptions {
    fn default() -> Self {
        SuiteOptions { q0: None, seed: 1, order: QplaneOptions::default().order, example: None }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SuiteReport {
    pub schema_version: u32,
    pub suite: SuiteId,
    pub engine_version: String,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub q0: Option<String>,
    pub seed: u64,
    /// Hashes of the rule tables the suite ran against.
    pub fingerprints: BTreeMap<String, String>,
    pub entries: Vec<Check>,
}

impl SuiteReport {
    pub fn passed(&self) -> bool {
        self.entries.iter().all(|e| e.status != Status::Failed)
    }

    pub fn count(&self, status: Status) -> usize {
        self.entries.iter().filter(|e| e.status == status).count()
    }

    pub fn get(&self, id: &str) -> Option<&Check> {
        self.entries.iter().find(|e| e.id == id)
    }

    /// Zeroes every wall-time field so that reports can be compared.
    pub fn without_timing(mut self) -> SuiteReport {
        for e in &mut self.entries {
            e.wall_time_ms = 0.0;
        }
        self
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    /// Plain-text listing, one entry per line, followed by a summary.
    pub fn render_text(&self) -> String {
        let mut out = String::new();
        for e in &self.entries {
            let status = match e.status {
                Status::Verified => "verified",
                Status::Failed => "FAILED",
                Status::InformationalMismatch => "info",
            };
            out.push_str(&format!("{status:<9} {}", e.id));
            if e.status != Status::Verified {
                out.push_str(&format!("  residual: {}", e.residual));
            }
            if let Some(d) = &e.detail {
                out.push_str(&format!("  ({d})"));
            }
            out.push('\n');
        }
        out.push_str(&format!(
            "{}: {} verified, {} failed, {} informational\n",
            self.suite,
            self.count(Status::Verified),
            self.count(Status::Failed),
            self.count(Status::InformationalMismatch)
        ));
        out
    }
}

fn module_checks(id: SuiteId, g: &GroupPresentation, opts: &SuiteOptions) -> Checks {
    let q0 = opts.q0.as_ref();
    match id {
        SuiteId::Group => group_suite(g, opts.seed),
        SuiteId::Cartan => cartan_suite(g),
        SuiteId::Wznw => wznw_suite(g),
        SuiteId::Coset => match opts.example {
            Some(ex) => coset_suite(q0, &[ex]),
            None => coset_suite(q0, &Example::ALL),
        },
        SuiteId::Symops => symops_suite(q0, &SymopsOptions { seed: opts.seed, ..SymopsOptions::default() }),
        SuiteId::Qplane => qplane_suite(q0, g, &QplaneOptions { order: opts.order }),
        SuiteId::All => unreachable!("expanded by the caller"),
    }
}

fn fingerprints(id: SuiteId, g: &GroupPresentation, q0: Option<&BigRational>) -> Result<BTreeMap<String, String>> {
    let mut out = BTreeMap::new();
    let wanted = |m: SuiteId| id == SuiteId::All || id == m;
    if [SuiteId::Group, SuiteId::Cartan, SuiteId::Wznw, SuiteId::Qplane].into_iter().any(wanted) {
        out.insert("group".to_string(), g.sys.fingerprint());
    }
    if wanted(SuiteId::Coset) {
        out.insert("coset".to_string(), CosetPresentation::new()?.specialize(q0)?.sys.fingerprint());
    }
    if wanted(SuiteId::Symops) {
        out.insert("vector-fields".to_string(), VectorFields::new()?.specialize(q0)?.base().fingerprint());
    }
    if wanted(SuiteId::Qplane) {
        out.insert("borel".to_string(), BorelPresentation::new()?.specialize(q0)?.sys.fingerprint());
    }
    Ok(out)
}

/// Runs every check of the selected suite. Individual failures are
/// recorded in the report; an error is returned only when the base
/// presentation cannot be built.
pub fn run_suite(id: SuiteId, opts: &SuiteOptions) -> Result<SuiteReport> {
    let g = GroupPresentation::new()?;
    let g = match &opts.q0 {
        Some(q0) => g.specialize(q0)?,
        None => g,
    };
    let modules: Vec<SuiteId> = if id == SuiteId::All { SuiteId::MODULES.to_vec() } else { vec![id] };
    // Each module is independent; results are joined in module order.
    let parts: Vec<Checks> = std::thread::scope(|s| {
        let g = &g;
        let handles: Vec<_> = modules.iter().map(|&m| s.spawn(move || module_checks(m, g, opts))).collect();
        handles.into_iter().map(|h| h.join().expect("suite thread panicked")).collect()
    });
    let mut entries = Vec::new();
    for p in parts {
        entries.extend(p.into_entries());
    }
    Ok(SuiteReport {
        schema_version: SCHEMA_VERSION,
        suite: id,
        engine_version: env!("CARGO_PKG_VERSION").to_string(),
        q0: opts.q0.as_ref().map(|q| q.to_string()),
        seed: opts.seed,
        fingerprints: fingerprints(id, &g, opts.q0.as_ref())?,
        entries,
    })
}
