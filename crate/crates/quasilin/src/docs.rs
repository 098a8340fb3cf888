//! JSON input documents and their conversion into validated domain values.

use std::fs;
use std::path::Path;
use std::sync::Arc;

use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};

use quasilin_core::noether::NoetherAnsatz;
use quasilin_core::reduce::Candidate;
use quasilin_core::symmetry::VectorField;
use quasilin_core::{parse_expr, Arg, Expr, PdeSpec, ProblemSource, Scope};

#[derive(Debug, thiserror::Error)]
pub enum DocError {
    #[error("cannot read {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error("{path}: {source}")]
    Json {
        path: String,
        #[source]
        source: serde_json::Error,
    },
    #[error("{context}: {source}")]
    Invalid {
        context: String,
        #[source]
        source: quasilin_core::Error,
    },
    #[error("{0}")]
    Schema(String),
}

fn invalid(context: impl Into<String>) -> impl FnOnce(quasilin_core::Error) -> DocError {
    let context = context.into();
    move |source| DocError::Invalid { context, source }
}

pub fn read_json<T: DeserializeOwned>(path: &Path) -> Result<T, DocError> {
    let shown = path.display().to_string();
    let bytes = fs::read(path).map_err(|source| DocError::Io { path: shown.clone(), source })?;
    serde_json::from_slice(&bytes).map_err(|source| DocError::Json { path: shown, source })
}

#[derive(Clone, Debug, Deserialize, Serialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct ProblemDoc {
    #[serde(default)]
    pub params: Vec<String>,
    pub f: String,
    pub g: String,
    pub h: String,
    #[serde(default, rename = "abstract")]
    pub abstract_funcs: Vec<String>,
}

impl ProblemDoc {
    pub fn to_spec(&self) -> Result<PdeSpec, DocError> {
        let src = ProblemSource {
            params: self.params.clone(),
            f: self.f.clone(),
            g: self.g.clone(),
            h: self.h.clone(),
            abstract_funcs: self.abstract_funcs.clone(),
        };
        PdeSpec::from_source(&src).map_err(invalid("problem"))
    }
}

impl From<&ProblemSource> for ProblemDoc {
    fn from(s: &ProblemSource) -> Self {
        ProblemDoc {
            params: s.params.clone(),
            f: s.f.clone(),
            g: s.g.clone(),
            h: s.h.clone(),
            abstract_funcs: s.abstract_funcs.clone(),
        }
    }
}

fn field(name: &str, text: &str, scope: &Scope) -> Result<Expr, DocError> {
    parse_expr(text, scope).map_err(|e| invalid(name)(e.into()))
}

#[derive(Clone, Debug, Deserialize, Serialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct GeneratorDoc {
    pub xi: String,
    pub tau: String,
    pub phi: String,
    pub eta: String,
}

impl GeneratorDoc {
    pub fn to_field(&self, params: &[Arc<str>]) -> Result<VectorField, DocError> {
        let sc = Scope::empty().with_args(&Arg::ALL).with_params(params);
        let xi = field("xi", &self.xi, &sc)?;
        let tau = field("tau", &self.tau, &sc)?;
        let phi = field("phi", &self.phi, &sc)?;
        let eta = field("eta", &self.eta, &sc)?;
        VectorField::new(xi, tau, phi, eta).map_err(invalid("generator"))
    }
}

/// Exactly one of `u` and `relation_u`. `params` declares constants that
/// appear only in the solution (integration constants and the like).
#[derive(Clone, Debug, Deserialize, Serialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct SolutionDoc {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub u: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub relation_u: Option<String>,
    pub v: String,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub params: Vec<String>,
}

impl SolutionDoc {
    pub fn to_candidate(&self, spec: &PdeSpec) -> Result<Candidate, DocError> {
        let params = spec.params_with(&self.params).map_err(invalid("solution params"))?;
        let sc = Scope::empty().with_args(&[Arg::X, Arg::T]).with_params(&params);
        let v = field("v", &self.v, &sc)?;
        match (&self.u, &self.relation_u) {
            (Some(u), None) => Candidate::explicit(field("u", u, &sc)?, v).map_err(invalid("solution")),
            (None, Some(r)) => {
                let sc = Scope::empty().with_args(&[Arg::X, Arg::T, Arg::U]).with_params(&params);
                Candidate::implicit(field("relation_u", r, &sc)?, v).map_err(invalid("solution"))
            }
            _ => Err(DocError::Schema("solution needs exactly one of `u` and `relation_u`".into())),
        }
    }
}

#[derive(Clone, Debug, Deserialize, Serialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct ConservedDoc {
    #[serde(rename = "T1")]
    pub t1: String,
    #[serde(rename = "T2")]
    pub t2: String,
}

impl ConservedDoc {
    pub fn to_components(&self, spec: &PdeSpec) -> Result<(Expr, Expr), DocError> {
        let sc = Scope::empty().with_args(&Arg::ALL).with_jets().with_params(spec.params());
        Ok((field("T1", &self.t1, &sc)?, field("T2", &self.t2, &sc)?))
    }
}

/// `α`, `β`, `γ` given as expression text over x, t and the problem parameters.
pub fn parse_ansatz(spec: &PdeSpec, alpha: &str, beta: &str, gamma: &str) -> Result<NoetherAnsatz, DocError> {
    let sc = Scope::empty().with_args(&[Arg::X, Arg::T]).with_params(spec.params());
    let a = field("alpha", alpha, &sc)?;
    let b = field("beta", beta, &sc)?;
    let g = field("gamma", gamma, &sc)?;
    NoetherAnsatz::new(a, b, g).map_err(invalid("ansatz"))
}
