use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use crate::expr::Expr;

#[derive(Clone, Copy, PartialEq, Eq, Debug, Hash)]
pub enum Status {
    Pass,
    Fail,
}

impl Status {
    pub fn as_str(self) -> &'static str {
        match self {
            Status::Pass => "PASS",
            Status::Fail => "FAIL",
        }
    }

    pub fn from_bool(ok: bool) -> Self {
        if ok {
            Status::Pass
        } else {
            Status::Fail
        }
    }
}

impl fmt::Display for Status {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Result of one check.
///
/// Symbolic verdicts pass iff every residual is the zero expression.
/// Numeric verdicts (built with [`Verdict::numeric`]) carry no residuals and
/// pass iff `numeric_max_abs` is within the stated tolerance.
#[derive(Clone, Debug, PartialEq)]
pub struct Verdict {
    pub name: String,
    pub anchor: String,
    pub status: Status,
    pub residuals: Vec<Expr>,
    pub numeric_max_abs: Option<f64>,
    pub detail: Vec<String>,
}

impl Verdict {
    pub fn from_residuals(name: impl Into<String>, anchor: impl Into<String>, residuals: Vec<Expr>) -> Self {
        let status = Status::from_bool(residuals.iter().all(Expr::is_zero));
        Verdict {
            name: name.into(),
            anchor: anchor.into(),
            status,
            residuals,
            numeric_max_abs: None,
            detail: Vec::new(),
        }
    }

    pub fn numeric(name: impl Into<String>, anchor: impl Into<String>, max_abs: f64, tolerance: f64) -> Self {
        Verdict {
            name: name.into(),
            anchor: anchor.into(),
            status: Status::from_bool(max_abs.is_finite() && max_abs <= tolerance),
            residuals: Vec::new(),
            numeric_max_abs: Some(max_abs),
            detail: alloc::vec![alloc::format!("tolerance {:e}", tolerance)],
        }
    }

    pub fn with_detail(mut self, line: impl Into<String>) -> Self {
        self.detail.push(line.into());
        self
    }

    pub fn with_anchor(mut self, anchor: impl Into<String>) -> Self {
        self.anchor = anchor.into();
        self
    }

    pub fn passed(&self) -> bool {
        self.status == Status::Pass
    }
}
