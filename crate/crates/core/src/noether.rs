//! Partial Lagrangian `L = ½g·u_x² − ½f·u_t²` and the conservation laws
//! generated by partial Noether operators `α(x,t)·∂_u`.
//!
//! Sign convention: the partial Noether residual is
//! `ρ = X(L) − α·(δL/δu)|on-shell − D_t B¹ − D_x B²`, so `ρ = 0` exactly
//! when the operator satisfies the partial Noether condition. Off shell,
//! `D_t T¹ + D_x T² = α·(f·u_tt − D_x(g·u_x + h)) − ρ`.

use alloc::collections::BTreeMap;
use alloc::string::String;
use alloc::vec::Vec;

use crate::atom::{Atom, FuncName, Jet};
use crate::error::{Error, Result};
use crate::expr::Expr;
use crate::jet::{total_derivative, Direction, JetContext, Shell};
use crate::pde::PdeSpec;
use crate::poly::Monomial;
use crate::verdict::Verdict;

fn jet(j: Jet) -> Expr {
    Expr::atom(Atom::Jet(j))
}

pub const SIGN_CONVENTION: &str =
    "rho = X(L) - alpha*(dL/du on shell) - D_t(B1) - D_x(B2); rho = 0 iff the partial Noether condition holds";

/// `½g·u_x² − ½f·u_t²`.
pub fn partial_lagrangian(spec: &PdeSpec) -> Expr {
    let ux = jet(Jet::Ux);
    let ut = jet(Jet::Ut);
    let half = Expr::ratio(1, 2);
    &(&half * &(spec.g() * &(&ux * &ux))) - &(&half * &(spec.f() * &(&ut * &ut)))
}

/// `∂L/∂u − D_x(∂L/∂u_x) − D_t(∂L/∂u_t)` for first-order `L`.
pub fn euler_lagrange(l: &Expr) -> Result<Expr> {
    if let Some(a) = l.atoms().into_iter().find(|a| matches!(a, Atom::Jet(j) if j.order() > 1)) {
        return Err(Error::invalid(alloc::format!("Lagrangian must be first order, found `{}`", a)));
    }
    let lu = l.diff(&Atom::U)?;
    let lx = total_derivative(&l.diff(&Atom::Jet(Jet::Ux))?, Direction::X)?;
    let lt = total_derivative(&l.diff(&Atom::Jet(Jet::Ut))?, Direction::T)?;
    Ok(&(&lu - &lx) - &lt)
}

/// `∫ e du` with integration constant 0, for `e` polynomial in `u`.
pub fn antiderivative_u(e: &Expr) -> Result<Expr> {
    let hidden_u = e.contains_where(|a| matches!(a, Atom::Func(fa) if fa.name.depends_on(crate::atom::Arg::U)));
    if hidden_u || e.denominator().contains_atom(&Atom::U) {
        return Err(Error::NotPolynomialIn(String::from("u")));
    }
    let mut out = Expr::zero();
    for (k, c) in e.coefficients_in(&Atom::U)? {
        let term = &c * &Expr::atom(Atom::U).pow(k as i32 + 1)?;
        out = &out + &term.scale(&crate::coeff::Coeff::ratio(1, i64::from(k) + 1));
    }
    Ok(out)
}

/// Coefficient `α` of `∂_u` and gauge seeds `β`, `γ`, all functions of (x, t).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NoetherAnsatz {
    pub alpha: Expr,
    pub beta: Expr,
    pub gamma: Expr,
}

impl NoetherAnsatz {
    pub fn new(alpha: Expr, beta: Expr, gamma: Expr) -> Result<Self> {
        for (name, e) in [("alpha", &alpha), ("beta", &beta), ("gamma", &gamma)] {
            let bad = e.atoms().into_iter().find(|a| match a {
                Atom::X | Atom::T | Atom::Exp | Atom::Param(_) => false,
                Atom::Func(fa) => !matches!(fa.name, FuncName::Alpha | FuncName::Beta | FuncName::Gamma),
                _ => true,
            });
            if let Some(a) = bad {
                return Err(Error::invalid(alloc::format!("{} may not contain `{}`", name, a)));
            }
        }
        Ok(NoetherAnsatz { alpha, beta, gamma })
    }

    /// `α = α(x,t)`, `β = β(x,t)`, `γ = γ(x,t)` left unknown.
    pub fn abstract_ansatz() -> Self {
        let f = |n| Expr::atom(Atom::func(n));
        NoetherAnsatz { alpha: f(FuncName::Alpha), beta: f(FuncName::Beta), gamma: f(FuncName::Gamma) }
    }

    pub fn alpha_only(alpha: Expr) -> Result<Self> {
        NoetherAnsatz::new(alpha, Expr::zero(), Expr::zero())
    }
}

fn require_concrete_g(spec: &PdeSpec) -> Result<Expr> {
    antiderivative_u(spec.g())
}

/// `(B¹, B²) = (−f·α_t·u + β, α_x·∫g du − α·h + γ)`.
pub fn gauge(spec: &PdeSpec, ans: &NoetherAnsatz) -> Result<(Expr, Expr)> {
    let big_g = require_concrete_g(spec)?;
    let u = Expr::atom(Atom::U);
    let at = ans.alpha.diff(&Atom::T)?;
    let ax = ans.alpha.diff(&Atom::X)?;
    let b1 = &(&-(spec.f() * &at) * &u) + &ans.beta;
    let b2 = &(&(&ax * &big_g) - &(&ans.alpha * spec.h())) + &ans.gamma;
    Ok((b1, b2))
}

/// `½g_u·u_x² + h_x + h_u·u_x`: the Euler–Lagrange expression on shell.
pub fn euler_lagrange_on_shell(spec: &PdeSpec) -> Result<Expr> {
    let el = euler_lagrange(&partial_lagrangian(spec))?;
    JetContext::new(spec).on_shell(&el, Shell::Pde)
}

/// The partial Noether residual `ρ` (see module docs for the sign).
pub fn partial_noether_residual(spec: &PdeSpec, ans: &NoetherAnsatz) -> Result<Expr> {
    let l = partial_lagrangian(spec);
    let (b1, b2) = gauge(spec, ans)?;
    let xl = &(&(&ans.alpha * &l.diff(&Atom::U)?) + &(&ans.alpha.diff(&Atom::X)? * &l.diff(&Atom::Jet(Jet::Ux))?))
        + &(&ans.alpha.diff(&Atom::T)? * &l.diff(&Atom::Jet(Jet::Ut))?);
    let wel = &ans.alpha * &euler_lagrange_on_shell(spec)?;
    let div_b = &total_derivative(&b1, Direction::T)? + &total_derivative(&b2, Direction::X)?;
    Ok(&(&xl - &wel) - &div_b)
}

/// `ρ` for the abstract ansatz, split over powers of `u`.
pub fn noether_constraints(spec: &PdeSpec) -> Result<Vec<(Monomial, Expr)>> {
    constraint_residuals(spec, &NoetherAnsatz::abstract_ansatz())
}

/// Nonzero coefficients of `ρ` in powers of `u`; empty iff `ρ = 0`.
pub fn constraint_residuals(spec: &PdeSpec, ans: &NoetherAnsatz) -> Result<Vec<(Monomial, Expr)>> {
    let rho = partial_noether_residual(spec, ans)?;
    Ok(rho.collect(&[Atom::U])?.into_iter().collect())
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConservedVector {
    pub t1: Expr,
    pub t2: Expr,
    pub characteristic: Option<Expr>,
    pub b1: Expr,
    pub b2: Expr,
}

/// `T^i = B^i − N^i(L)` with `N^i(L) = α·∂L/∂u_i`.
pub fn build_conserved(spec: &PdeSpec, ans: &NoetherAnsatz) -> Result<ConservedVector> {
    let bad = constraint_residuals(spec, ans)?;
    if !bad.is_empty() {
        return Err(Error::ConstraintsViolated(
            bad.iter().map(|(m, c)| alloc::format!("{}: {}", Expr::monomial(m.clone()), c)).collect(),
        ));
    }
    conserved_components(spec, ans)
}

/// `T^i = B^i − N^i(L)` without checking the constraints. Off shell its
/// divergence is `α·(f·u_tt − D_x(g·u_x + h)) − ρ`.
pub fn conserved_components(spec: &PdeSpec, ans: &NoetherAnsatz) -> Result<ConservedVector> {
    let (b1, b2) = gauge(spec, ans)?;
    let l = partial_lagrangian(spec);
    let t1 = &b1 - &(&ans.alpha * &l.diff(&Atom::Jet(Jet::Ut))?);
    let t2 = &b2 - &(&ans.alpha * &l.diff(&Atom::Jet(Jet::Ux))?);
    Ok(ConservedVector { t1, t2, characteristic: Some(ans.alpha.clone()), b1, b2 })
}

/// The variant whose time component carries `α·u_t` instead of `f·α·u_t`.
/// No constraint check; it exists to be adjudicated by [`divergence_check`].
pub fn build_conserved_unweighted(spec: &PdeSpec, ans: &NoetherAnsatz) -> Result<ConservedVector> {
    let (b1, b2) = gauge(spec, ans)?;
    let t1 = &b1 + &(&ans.alpha * &jet(Jet::Ut));
    let t2 = &b2 - &(&(&ans.alpha * spec.g()) * &jet(Jet::Ux));
    Ok(ConservedVector { t1, t2, characteristic: Some(ans.alpha.clone()), b1, b2 })
}

/// `W` with `D_t T¹ + D_x T² = W·(f·u_tt − D_x(g·u_x + h))`, if one exists.
pub fn extract_characteristic(spec: &PdeSpec, div: &Expr) -> Option<Expr> {
    let utt = Atom::Jet(Jet::Utt);
    let parts = div.collect(core::slice::from_ref(&utt)).ok()?;
    let a = parts.get(&Monomial::atom(utt.clone()))?;
    let w = a.try_div(spec.f()).ok()?;
    if w.contains_where(|x| matches!(x, Atom::Jet(j) if j.order() > 1)) {
        return None;
    }
    (div - &(&w * &spec.equation())).is_zero().then_some(w)
}

/// On-shell divergence of `(T¹, T²)`; with a characteristic, also the
/// off-shell identity `div − W·E`.
pub fn divergence_check(spec: &PdeSpec, t1: &Expr, t2: &Expr, characteristic: Option<&Expr>) -> Result<Verdict> {
    let div = &total_derivative(t1, Direction::T)? + &total_derivative(t2, Direction::X)?;
    let on = JetContext::new(spec).on_shell(&div, Shell::Both)?;
    let mut residuals = alloc::vec![on];
    if let Some(w) = characteristic {
        residuals.push(&div - &(w * &spec.equation()));
    }
    let mut v = Verdict::from_residuals("conservation", "local conservation law", residuals);
    v = match extract_characteristic(spec, &div) {
        Some(w) => v.with_detail(alloc::format!("characteristic: {}", w)),
        None => v.with_detail("no characteristic form found"),
    };
    Ok(v)
}

/// Substitutes `α`, `β`, `γ` (and their partials) in `e`.
pub fn instantiate(e: &Expr, ans: &NoetherAnsatz) -> Result<Expr> {
    let mut b = BTreeMap::new();
    for a in e.atoms() {
        let Atom::Func(fa) = &a else { continue };
        let base = match fa.name {
            FuncName::Alpha => &ans.alpha,
            FuncName::Beta => &ans.beta,
            FuncName::Gamma => &ans.gamma,
            _ => continue,
        };
        let mut v = base.clone();
        for arg in crate::atom::Arg::ALL {
            for _ in 0..fa.partials[arg as usize] {
                v = v.diff(&arg.atom())?;
            }
        }
        b.insert(a.clone(), v);
    }
    e.substitute(&b)
}
