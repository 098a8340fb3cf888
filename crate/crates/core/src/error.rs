use alloc::string::String;
use alloc::vec::Vec;

use crate::parse::ParseError;

pub type Result<T, E = Error> = core::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("division by the zero polynomial")]
    DivisionByZero,

    #[error("`{0}` is not a differentiation direction")]
    BadDirection(String),

    #[error("total derivative leaves the jet alphabet (derivative of `{0}` is not representable)")]
    JetOverflow(String),

    #[error("atom `{0}` is not bound at the evaluation point")]
    Unbound(String),

    #[error("denominator magnitude {0:e} is below 1e-12")]
    SmallDenominator(f64),

    #[error("denominator depends on split atom `{0}`")]
    DenominatorDependsOn(String),

    #[error("expression is not polynomial in `{0}`")]
    NotPolynomialIn(String),

    #[error("{0}")]
    Parse(#[from] ParseError),

    #[error("{0}")]
    Invalid(String),

    #[error("ansatz violates {} constraint(s): {}", .0.len(), .0.join("; "))]
    ConstraintsViolated(Vec<String>),

    #[error("coefficient of F'' vanishes near x = {0}")]
    SingularOde(f64),

    #[error("non-finite value encountered near x = {0}")]
    NonFinite(f64),
}

impl Error {
    pub fn invalid(msg: impl Into<String>) -> Self {
        Error::Invalid(msg.into())
    }
}
