//! Machine-readable reports. Output is deterministic: no timestamps, and
//! verdicts keep the order in which they were produced.

use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use quasilin_core::Verdict;

pub const TOOL: &str = "quasilin";
pub const VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Clone, Debug, Deserialize, Serialize, PartialEq)]
pub struct VerdictDoc {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub check_id: Option<String>,
    pub name: String,
    pub paper_ref: String,
    pub status: String,
    pub residuals: Vec<String>,
    pub numeric_max_abs: Option<f64>,
    pub detail: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub expected: Option<String>,
}

impl VerdictDoc {
    pub fn from_verdict(check_id: Option<&str>, v: &Verdict) -> Self {
        VerdictDoc {
            check_id: check_id.map(str::to_string),
            name: v.name.clone(),
            paper_ref: v.anchor.clone(),
            status: v.status.as_str().to_string(),
            residuals: v.residuals.iter().map(|r| r.to_string()).collect(),
            numeric_max_abs: v.numeric_max_abs,
            detail: v.detail.clone(),
            expected: None,
        }
    }

    pub fn passed(&self) -> bool {
        self.status == "PASS"
    }
}

/// A derived artifact (equation, conserved component, ODE) rather than a check.
#[derive(Clone, Debug, Deserialize, Serialize, PartialEq)]
pub struct ResultLine {
    pub label: String,
    pub value: String,
}

#[derive(Clone, Debug, Default, Deserialize, Serialize, PartialEq)]
pub struct OracleSummary {
    pub matched: usize,
    pub mismatched: usize,
    pub missing_from_suite: usize,
    pub missing_from_oracle: usize,
}

impl OracleSummary {
    pub fn agrees(&self) -> bool {
        self.mismatched == 0 && self.missing_from_suite == 0 && self.missing_from_oracle == 0
    }
}

#[derive(Clone, Debug, Default, Deserialize, Serialize, PartialEq)]
pub struct Summary {
    pub total: usize,
    pub pass: usize,
    pub fail: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub oracle: Option<OracleSummary>,
}

#[derive(Clone, Debug, Deserialize, Serialize, PartialEq)]
pub struct Report {
    pub tool: String,
    pub version: String,
    pub command: Vec<String>,
    pub results: Vec<ResultLine>,
    pub verdicts: Vec<VerdictDoc>,
    pub summary: Summary,
}

impl Report {
    pub fn new(command: Vec<String>) -> Self {
        Report {
            tool: TOOL.into(),
            version: VERSION.into(),
            command,
            results: Vec::new(),
            verdicts: Vec::new(),
            summary: Summary::default(),
        }
    }

    pub fn result(&mut self, label: impl Into<String>, value: impl ToString) {
        self.results.push(ResultLine { label: label.into(), value: value.to_string() });
    }

    pub fn verdict(&mut self, check_id: Option<&str>, v: &Verdict) {
        self.verdicts.push(VerdictDoc::from_verdict(check_id, v));
        self.tally();
    }

    fn tally(&mut self) {
        self.summary.total = self.verdicts.len();
        self.summary.pass = self.verdicts.iter().filter(|v| v.passed()).count();
        self.summary.fail = self.summary.total - self.summary.pass;
    }

    /// 0 when every check passed (or, against an oracle, when the oracle agrees); 1 otherwise.
    pub fn exit_code(&self) -> i32 {
        let ok = match &self.summary.oracle {
            Some(o) => o.agrees(),
            None => self.summary.fail == 0,
        };
        if ok {
            0
        } else {
            1
        }
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serializes");
        s.push('\n');
        s
    }

    pub fn to_text(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "{} {}: {}", self.tool, self.version, self.command.join(" "));
        for r in &self.results {
            let _ = writeln!(s, "{} = {}", r.label, r.value);
        }
        for v in &self.verdicts {
            let id = v.check_id.as_deref().map(|c| format!("{} ", c)).unwrap_or_default();
            let _ = write!(s, "{} {}{} [{}]", v.status, id, v.name, v.paper_ref);
            if let Some(e) = &v.expected {
                let _ = write!(s, " expected {}", e);
            }
            s.push('\n');
            for (i, r) in v.residuals.iter().enumerate() {
                let _ = writeln!(s, "    residual[{}] = {}", i, r);
            }
            if let Some(m) = v.numeric_max_abs {
                let _ = writeln!(s, "    max |residual| = {:e}", m);
            }
            for d in &v.detail {
                let _ = writeln!(s, "    {}", d);
            }
        }
        let _ =
            write!(s, "summary: {} checks, {} PASS, {} FAIL", self.summary.total, self.summary.pass, self.summary.fail);
        if let Some(o) = &self.summary.oracle {
            let _ = write!(
                s,
                "; oracle: {} matched, {} mismatched, {} missing from suite, {} missing from oracle",
                o.matched, o.mismatched, o.missing_from_suite, o.missing_from_oracle
            );
        }
        s.push('\n');
        s
    }
}
