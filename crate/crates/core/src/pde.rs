//! The equation family `f(x)·u_tt = [g(x,u)·u_x + h(x,u)]_x`.

use alloc::string::String;
use alloc::sync::Arc;
use alloc::vec::Vec;

use crate::atom::{Arg, Atom, FuncName, Jet};
use crate::error::{Error, Result};
use crate::expr::Expr;
use crate::jet::{total_derivative, Direction};
use crate::parse::{is_valid_param_name, parse_expr, Scope};

/// Source form of a problem: parameter names, the three coefficient
/// functions as text, and which of `f`, `g`, `h` are abstract.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ProblemSource {
    pub params: Vec<String>,
    pub f: String,
    pub g: String,
    pub h: String,
    pub abstract_funcs: Vec<String>,
}

impl ProblemSource {
    pub fn new(params: &[&str], f: &str, g: &str, h: &str) -> Self {
        ProblemSource {
            params: params.iter().map(|s| String::from(*s)).collect(),
            f: f.into(),
            g: g.into(),
            h: h.into(),
            abstract_funcs: Vec::new(),
        }
    }

    /// `f`, `g`, `h` all abstract.
    pub fn fully_abstract() -> Self {
        ProblemSource {
            params: Vec::new(),
            f: "f".into(),
            g: "g".into(),
            h: "h".into(),
            abstract_funcs: ["f", "g", "h"].iter().map(|s| String::from(*s)).collect(),
        }
    }
}

/// A validated instance of the equation family.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PdeSpec {
    params: Vec<Arc<str>>,
    abstract_funcs: Vec<FuncName>,
    f: Expr,
    g: Expr,
    h: Expr,
}

impl PdeSpec {
    pub fn from_source(src: &ProblemSource) -> Result<Self> {
        let mut params: Vec<Arc<str>> = Vec::new();
        for p in &src.params {
            if !is_valid_param_name(p) {
                return Err(Error::invalid(alloc::format!("invalid parameter name `{}`", p)));
            }
            if params.iter().any(|q| &**q == p.as_str()) {
                return Err(Error::invalid(alloc::format!("duplicate parameter `{}`", p)));
            }
            params.push(Arc::from(p.as_str()));
        }
        let mut abstract_funcs = Vec::new();
        for name in &src.abstract_funcs {
            let f = match name.as_str() {
                "f" => FuncName::F,
                "g" => FuncName::G,
                "h" => FuncName::H,
                other => return Err(Error::invalid(alloc::format!("`{}` cannot be abstract (only f, g, h)", other))),
            };
            if !abstract_funcs.contains(&f) {
                abstract_funcs.push(f);
            }
        }
        let field = |name: &str, text: &str, scope: &Scope| -> Result<Expr> {
            parse_expr(text, scope).map_err(|e| Error::invalid(alloc::format!("field `{}`: {}", name, e)))
        };
        let f_funcs: Vec<FuncName> = abstract_funcs.iter().copied().filter(|f| *f == FuncName::F).collect();
        let f_scope = Scope::empty().with_args(&[Arg::X]).with_params(&params).with_funcs(&f_funcs);
        let gh_scope = Scope::empty().with_args(&[Arg::X, Arg::U]).with_params(&params).with_funcs(&abstract_funcs);
        let f = field("f", &src.f, &f_scope)?;
        let g = field("g", &src.g, &gh_scope)?;
        let h = field("h", &src.h, &gh_scope)?;
        PdeSpec::new(params, abstract_funcs, f, g, h)
    }

    /// Builds a spec from already-parsed functions, checking variable
    /// dependencies and that `f` is not identically zero.
    pub fn new(params: Vec<Arc<str>>, abstract_funcs: Vec<FuncName>, f: Expr, g: Expr, h: Expr) -> Result<Self> {
        let ok_f = |a: &Atom| match a {
            Atom::X | Atom::Exp | Atom::Param(_) => true,
            Atom::Func(fa) => fa.name == FuncName::F,
            _ => false,
        };
        let ok_gh = |a: &Atom| match a {
            Atom::X | Atom::U | Atom::Exp | Atom::Param(_) => true,
            Atom::Func(fa) => matches!(fa.name, FuncName::F | FuncName::G | FuncName::H),
            _ => false,
        };
        if let Some(a) = f.atoms().iter().find(|a| !ok_f(a)) {
            return Err(Error::invalid(alloc::format!("f may not depend on `{}`", a)));
        }
        for (name, e) in [("g", &g), ("h", &h)] {
            if let Some(a) = e.atoms().iter().find(|a| !ok_gh(a)) {
                return Err(Error::invalid(alloc::format!("{} may not depend on `{}`", name, a)));
            }
        }
        if f.is_zero() {
            return Err(Error::invalid("f must not be identically zero"));
        }
        Ok(PdeSpec { params, abstract_funcs, f, g, h })
    }

    /// The family with `f`, `g`, `h` left abstract.
    pub fn fully_abstract() -> Self {
        PdeSpec::from_source(&ProblemSource::fully_abstract()).expect("abstract spec is valid")
    }

    pub fn f(&self) -> &Expr {
        &self.f
    }

    pub fn g(&self) -> &Expr {
        &self.g
    }

    pub fn h(&self) -> &Expr {
        &self.h
    }

    pub fn params(&self) -> &[Arc<str>] {
        &self.params
    }

    pub fn abstract_funcs(&self) -> &[FuncName] {
        &self.abstract_funcs
    }

    /// Whether any of `f`, `g`, `h` is (or involves) an abstract function.
    pub fn is_abstract(&self) -> bool {
        [&self.f, &self.g, &self.h].iter().any(|e| e.contains_where(|a| matches!(a, Atom::Func(_))))
    }

    /// The spec's parameters plus `extra`, deduplicated.
    pub fn params_with(&self, extra: &[String]) -> Result<Vec<Arc<str>>> {
        let mut out = self.params.clone();
        for p in extra {
            if !is_valid_param_name(p) {
                return Err(Error::invalid(alloc::format!("invalid parameter name `{}`", p)));
            }
            if !out.iter().any(|q| &**q == p.as_str()) {
                out.push(Arc::from(p.as_str()));
            }
        }
        Ok(out)
    }

    /// `g·u_x + h`.
    pub fn flux(&self) -> Expr {
        &(&self.g * &Expr::atom(Atom::Jet(Jet::Ux))) + &self.h
    }

    /// `D_x(g·u_x + h)`.
    pub fn flux_derivative(&self) -> Expr {
        total_derivative(&self.flux(), Direction::X).expect("flux is first order")
    }

    /// `f·u_tt − D_x(g·u_x + h)`.
    pub fn equation(&self) -> Expr {
        &(&self.f * &Expr::atom(Atom::Jet(Jet::Utt))) - &self.flux_derivative()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::string::ToString;

    #[test]
    fn parses_case_problems() {
        let s = PdeSpec::from_source(&ProblemSource::new(&["a"], "a", "u", "exp(x)")).unwrap();
        assert_eq!(s.h(), &Expr::atom(Atom::Exp));
        let s = PdeSpec::from_source(&ProblemSource::new(&[], "x", "x*u", "u^2")).unwrap();
        assert_eq!(s.g().to_string(), "x*u");
    }

    #[test]
    fn rejects_bad_problems() {
        let err = PdeSpec::from_source(&ProblemSource::new(&[], "0", "u", "u")).unwrap_err();
        assert!(err.to_string().contains("zero"));
        let err = PdeSpec::from_source(&ProblemSource::new(&[], "t", "u", "u")).unwrap_err();
        assert!(err.to_string().contains("not allowed"), "{}", err);
        let err = PdeSpec::from_source(&ProblemSource::new(&[], "u", "u", "u")).unwrap_err();
        assert!(err.to_string().contains("not allowed"), "{}", err);
        assert!(PdeSpec::from_source(&ProblemSource::new(&["x"], "1", "u", "u")).is_err());
        assert!(PdeSpec::from_source(&ProblemSource::new(&["a", "a"], "1", "u", "u")).is_err());
        // f abstract, but the h field may not use an undeclared abstract g
        let mut src = ProblemSource::new(&[], "f", "u", "g");
        src.abstract_funcs = alloc::vec!["f".into()];
        assert!(PdeSpec::from_source(&src).is_err());
    }

    #[test]
    fn abstract_equation() {
        let s = PdeSpec::fully_abstract();
        let expected = crate::parse::parse_any("f*u_tt - g_x*u_x - g_u*u_x^2 - g*u_xx - h_x - h_u*u_x", &[]).unwrap();
        assert_eq!(s.equation(), expected);
    }
}
