//! Expected suite outcomes, kept apart from the checks that produce them.

use std::collections::BTreeMap;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::docs::{read_json, DocError};
use crate::report::{OracleSummary, Report};

#[derive(Clone, Debug, Deserialize, Serialize, PartialEq, Eq)]
#[serde(deny_unknown_fields)]
pub struct OracleEntry {
    pub check_id: String,
    pub expected: Expected,
}

#[derive(Clone, Copy, Debug, Deserialize, Serialize, PartialEq, Eq)]
pub enum Expected {
    #[serde(rename = "PASS")]
    Pass,
    #[serde(rename = "FAIL")]
    Fail,
}

impl Expected {
    pub fn as_str(self) -> &'static str {
        match self {
            Expected::Pass => "PASS",
            Expected::Fail => "FAIL",
        }
    }
}

pub fn load(path: &Path) -> Result<Vec<OracleEntry>, DocError> {
    let entries: Vec<OracleEntry> = read_json(path)?;
    let mut seen = std::collections::BTreeSet::new();
    for e in &entries {
        if !seen.insert(e.check_id.as_str()) {
            return Err(DocError::Schema(format!("oracle lists `{}` twice", e.check_id)));
        }
    }
    Ok(entries)
}

/// Annotates every verdict with its expectation and fills the oracle summary.
/// A verdict without an oracle entry, or an entry without a verdict, counts
/// against agreement.
pub fn annotate(report: &mut Report, oracle: &[OracleEntry]) {
    let want: BTreeMap<&str, Expected> = oracle.iter().map(|e| (e.check_id.as_str(), e.expected)).collect();
    let mut s = OracleSummary::default();
    let mut present = std::collections::BTreeSet::new();
    for v in &mut report.verdicts {
        let Some(id) = v.check_id.as_deref() else { continue };
        present.insert(id.to_string());
        match want.get(id) {
            Some(e) => {
                v.expected = Some(e.as_str().to_string());
                if v.status == e.as_str() {
                    s.matched += 1;
                } else {
                    s.mismatched += 1;
                }
            }
            None => s.missing_from_oracle += 1,
        }
    }
    s.missing_from_suite = want.keys().filter(|k| !present.contains(**k)).count();
    report.summary.oracle = Some(s);
}
