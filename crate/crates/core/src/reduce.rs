//! Invariant surfaces, candidate solutions, the static reduction
//! `u = F(x)`, `v = 0`, and RK4 integration of the reduced ODE.

use alloc::collections::BTreeMap;
use alloc::vec::Vec;

use num_complex::Complex64;

use crate::atom::{Atom, Jet};
use crate::error::{Error, Result};
use crate::expr::{Expr, Point};
use crate::pde::PdeSpec;
use crate::symmetry::{Constraint, VectorField};
use crate::verdict::Verdict;

fn jet(j: Jet) -> Expr {
    Expr::atom(Atom::Jet(j))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct InvariantSurface {
    pub q1: Expr,
    pub q2: Expr,
}

/// `Q1 = ξ·u_x + τ·u_t − φ`, `Q2 = ξ·v_x + τ·v_t − η`.
pub fn invariant_surface(vf: &VectorField) -> InvariantSurface {
    let q1 = &(&(&vf.xi * &jet(Jet::Ux)) + &(&vf.tau * &jet(Jet::Ut))) - &vf.phi;
    let q2 = &(&(&vf.xi * &jet(Jet::Vx)) + &(&vf.tau * &jet(Jet::Vt))) - &vf.eta;
    InvariantSurface { q1, q2 }
}

/// A candidate solution `(u, v)` of the potential system.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Candidate {
    Explicit {
        u: Expr,
        v: Expr,
    },
    /// `R(x, t, u) = 0`, polynomial in `u`.
    Implicit {
        relation: Expr,
        v: Expr,
    },
}

fn is_xt_atom(a: &Atom) -> bool {
    matches!(a, Atom::X | Atom::T | Atom::Exp | Atom::Param(_))
}

impl Candidate {
    pub fn explicit(u: Expr, v: Expr) -> Result<Self> {
        for (name, e) in [("u", &u), ("v", &v)] {
            if let Some(a) = e.atoms().into_iter().find(|a| !is_xt_atom(a)) {
                return Err(Error::invalid(alloc::format!(
                    "{} may only depend on x, t and parameters, found `{}`",
                    name,
                    a
                )));
            }
        }
        Ok(Candidate::Explicit { u, v })
    }

    pub fn implicit(relation: Expr, v: Expr) -> Result<Self> {
        if let Some(a) = relation.atoms().into_iter().find(|a| !is_xt_atom(a) && *a != Atom::U) {
            return Err(Error::invalid(alloc::format!("relation_u may not contain `{}`", a)));
        }
        if relation.denominator().contains_atom(&Atom::U) {
            return Err(Error::NotPolynomialIn("u".into()));
        }
        if relation.diff(&Atom::U)?.is_zero() {
            return Err(Error::invalid("relation_u must have positive degree in u"));
        }
        if v.contains_atom(&Atom::U) {
            return Err(Error::invalid("v may not depend on u"));
        }
        if let Some(a) = v.atoms().into_iter().find(|a| !is_xt_atom(a)) {
            return Err(Error::invalid(alloc::format!("v may only depend on x, t and parameters, found `{}`", a)));
        }
        Ok(Candidate::Implicit { relation, v })
    }

    pub fn v(&self) -> &Expr {
        match self {
            Candidate::Explicit { v, .. } | Candidate::Implicit { v, .. } => v,
        }
    }

    /// Values of `u`, `v` and their jets along the candidate. For implicit
    /// candidates `u` stays symbolic and the jets come from `R = 0`.
    pub fn bindings(&self) -> Result<BTreeMap<Atom, Expr>> {
        let mut b = BTreeMap::new();
        let v = self.v();
        b.insert(Atom::V, v.clone());
        b.insert(Atom::Jet(Jet::Vx), v.diff(&Atom::X)?);
        b.insert(Atom::Jet(Jet::Vt), v.diff(&Atom::T)?);
        match self {
            Candidate::Explicit { u, .. } => {
                let ux = u.diff(&Atom::X)?;
                let ut = u.diff(&Atom::T)?;
                b.insert(Atom::U, u.clone());
                b.insert(Atom::Jet(Jet::Uxx), ux.diff(&Atom::X)?);
                b.insert(Atom::Jet(Jet::Uxt), ux.diff(&Atom::T)?);
                b.insert(Atom::Jet(Jet::Utt), ut.diff(&Atom::T)?);
                b.insert(Atom::Jet(Jet::Ux), ux);
                b.insert(Atom::Jet(Jet::Ut), ut);
            }
            Candidate::Implicit { relation, .. } => {
                let ru = relation.diff(&Atom::U)?;
                let ux = -relation.diff(&Atom::X)?.try_div(&ru)?;
                let ut = -relation.diff(&Atom::T)?.try_div(&ru)?;
                // d/dx along the relation: ∂_x + u_x·∂_u
                let dx = |e: &Expr| -> Result<Expr> { Ok(&e.diff(&Atom::X)? + &(&ux * &e.diff(&Atom::U)?)) };
                let dt = |e: &Expr| -> Result<Expr> { Ok(&e.diff(&Atom::T)? + &(&ut * &e.diff(&Atom::U)?)) };
                b.insert(Atom::Jet(Jet::Uxx), dx(&ux)?);
                b.insert(Atom::Jet(Jet::Uxt), dt(&ux)?);
                b.insert(Atom::Jet(Jet::Utt), dt(&ut)?);
                b.insert(Atom::Jet(Jet::Ux), ux);
                b.insert(Atom::Jet(Jet::Ut), ut);
            }
        }
        Ok(b)
    }

    /// Evaluates `e` along the candidate; implicit results are reduced mod `R`.
    pub fn evaluate(&self, e: &Expr) -> Result<Expr> {
        let r = e.substitute(&self.bindings()?)?;
        match self {
            Candidate::Explicit { .. } => Ok(r),
            Candidate::Implicit { relation, .. } => reduce_mod(&r, relation),
        }
    }
}

/// Remainder of `p` on division by `r` as univariate polynomials in `u`
/// whose coefficients are rational functions of the remaining atoms.
pub fn poly_rem_u(p: &Expr, r: &Expr) -> Result<Expr> {
    let u = Atom::U;
    let mut num = p.coefficients_in(&u)?;
    let den = r.coefficients_in(&u)?;
    let (&dr, lead) = den.iter().next_back().ok_or(Error::DivisionByZero)?;
    if dr == 0 {
        return Err(Error::invalid("relation has degree 0 in u"));
    }
    while let Some((&dn, c)) = num.iter().next_back() {
        if dn < dr {
            break;
        }
        let q = c.try_div(lead)?;
        for (&k, rc) in &den {
            let key = k + dn - dr;
            let v = &num.get(&key).cloned().unwrap_or_else(Expr::zero) - &(&q * rc);
            if v.is_zero() {
                num.remove(&key);
            } else {
                num.insert(key, v);
            }
        }
        num.remove(&dn);
    }
    let mut out = Expr::zero();
    for (k, c) in num {
        out = &out + &(&c * &Expr::atom(u.clone()).pow(k as i32)?);
    }
    Ok(out)
}

/// `e` modulo the relation: the numerator's remainder over the denominator.
/// Zero iff `e` vanishes on `R = 0` (for `R` squarefree in `u`).
pub fn reduce_mod(e: &Expr, relation: &Expr) -> Result<Expr> {
    let num = Expr::from_poly(e.numerator().clone());
    let rem = poly_rem_u(&num, relation)?;
    if rem.is_zero() {
        return Ok(rem);
    }
    let den = Expr::from_poly(e.denominator().clone());
    rem.try_div(&den)
}

/// PDE residual and both potential-system residuals along the candidate.
pub fn check_solution(spec: &PdeSpec, c: &Candidate) -> Result<Verdict> {
    if spec.is_abstract() {
        return Err(Error::invalid("candidate checks need concrete f, g, h"));
    }
    let residuals = alloc::vec![
        c.evaluate(&spec.equation())?,
        c.evaluate(&Constraint::First.expr(spec))?,
        c.evaluate(&Constraint::Second.expr(spec))?,
    ];
    let anchor = match c {
        Candidate::Explicit { .. } => "explicit candidate solution",
        Candidate::Implicit { .. } => "implicit candidate solution",
    };
    Ok(Verdict::from_residuals("solution", anchor, residuals)
        .with_detail("residuals: pde, v_x - f*u_t, v_t - g*u_x - h"))
}

/// `Q1`, `Q2` of `vf` along the candidate (informational).
pub fn invariant_residuals(vf: &VectorField, c: &Candidate) -> Result<(Expr, Expr)> {
    let s = invariant_surface(vf);
    Ok((c.evaluate(&s.q1)?, c.evaluate(&s.q2)?))
}

/// Residual of the reduced ODE in `F`, `F'`, `F''` (atoms `Ode(0..=2)`).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ReducedOde {
    pub residual: Expr,
}

impl ReducedOde {
    /// Residual after `F ↦ sol(x)` (and derivatives).
    pub fn apply(&self, sol: &Expr) -> Result<Expr> {
        let f1 = sol.diff(&Atom::X)?;
        let f2 = f1.diff(&Atom::X)?;
        let mut b = BTreeMap::new();
        b.insert(Atom::Ode(0), sol.clone());
        b.insert(Atom::Ode(1), f1);
        b.insert(Atom::Ode(2), f2);
        self.residual.substitute(&b)
    }
}

impl core::fmt::Display for ReducedOde {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        write!(f, "{} = 0", self.residual)
    }
}

/// `D_x(g·u_x + h) − f·u_tt` under `u = F(x)`, `v = 0`.
pub fn reduced_ode(spec: &PdeSpec) -> Result<ReducedOde> {
    if spec.is_abstract() {
        return Err(Error::invalid("reduction needs concrete f, g, h"));
    }
    let mut b = BTreeMap::new();
    b.insert(Atom::U, Expr::atom(Atom::Ode(0)));
    b.insert(Atom::Jet(Jet::Ux), Expr::atom(Atom::Ode(1)));
    b.insert(Atom::Jet(Jet::Uxx), Expr::atom(Atom::Ode(2)));
    for j in [Jet::Ut, Jet::Uxt, Jet::Utt] {
        b.insert(Atom::Jet(j), Expr::zero());
    }
    Ok(ReducedOde { residual: (-spec.equation()).substitute(&b)? })
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Sample {
    pub x: f64,
    pub f: f64,
    pub fp: f64,
    /// ODE residual with `F''` from centered differences; `None` at the ends.
    pub residual: Option<f64>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Integration {
    pub samples: Vec<Sample>,
    pub max_residual: f64,
}

/// Real value of `e` at the point; errors on a non-negligible imaginary part.
fn eval_real(e: &Expr, pt: &Point) -> Result<f64> {
    let z: Complex64 = e.eval(pt)?;
    if z.im.abs() > 1e-12 * (1.0 + z.re.abs()) {
        return Err(Error::invalid("ODE evaluated to a complex value"));
    }
    Ok(z.re)
}

pub const SINGULAR_TOLERANCE: f64 = 1e-10;

/// Classical RK4 on `(F, F')` with fixed step over `x0..=x1`. `params`
/// binds any remaining parameter atoms.
pub fn integrate_ode(ode: &ReducedOde, ic: (f64, f64), grid: (f64, f64, f64), params: &Point) -> Result<Integration> {
    let (x0, x1, step) = grid;
    if !(step.is_finite() && step > 0.0 && x1 > x0) {
        return Err(Error::invalid("grid needs x1 > x0 and a positive step"));
    }
    let span = (x1 - x0) / step;
    let n = libm::round(span);
    if n < 1.0 || (span - n).abs() > 1e-9 * n.max(1.0) {
        return Err(Error::invalid("step must divide x1 - x0"));
    }
    let n = n as usize;
    let f2 = Atom::Ode(2);
    let parts = ode.residual.coefficients_in(&f2)?;
    if parts.keys().any(|&k| k > 1) {
        return Err(Error::invalid("ODE must be linear in F''"));
    }
    let a = parts.get(&1).cloned().unwrap_or_else(Expr::zero);
    let b = parts.get(&0).cloned().unwrap_or_else(Expr::zero);
    if a.is_zero() {
        return Err(Error::invalid("ODE does not involve F''"));
    }
    let point = |x: f64, f: f64, fp: f64| -> Point {
        let mut p = params.clone();
        p.insert(Atom::X, Complex64::new(x, 0.0));
        p.insert(Atom::Ode(0), Complex64::new(f, 0.0));
        p.insert(Atom::Ode(1), Complex64::new(fp, 0.0));
        p
    };
    let accel = |x: f64, f: f64, fp: f64| -> Result<f64> {
        let pt = point(x, f, fp);
        let av = eval_real(&a, &pt)?;
        if av.abs() < SINGULAR_TOLERANCE {
            return Err(Error::SingularOde(x));
        }
        let r = -eval_real(&b, &pt)? / av;
        if !r.is_finite() {
            return Err(Error::NonFinite(x));
        }
        Ok(r)
    };
    let mut xs = Vec::with_capacity(n + 1);
    let (mut f, mut fp) = ic;
    if !f.is_finite() || !fp.is_finite() {
        return Err(Error::NonFinite(x0));
    }
    xs.push((x0, f, fp));
    for k in 0..n {
        let x = x0 + k as f64 * step;
        let h = step;
        let k1 = (fp, accel(x, f, fp)?);
        let k2 = (fp + h / 2.0 * k1.1, accel(x + h / 2.0, f + h / 2.0 * k1.0, fp + h / 2.0 * k1.1)?);
        let k3 = (fp + h / 2.0 * k2.1, accel(x + h / 2.0, f + h / 2.0 * k2.0, fp + h / 2.0 * k2.1)?);
        let k4 = (fp + h * k3.1, accel(x + h, f + h * k3.0, fp + h * k3.1)?);
        f += h / 6.0 * (k1.0 + 2.0 * k2.0 + 2.0 * k3.0 + k4.0);
        fp += h / 6.0 * (k1.1 + 2.0 * k2.1 + 2.0 * k3.1 + k4.1);
        let xn = x0 + (k + 1) as f64 * step;
        if !f.is_finite() || !fp.is_finite() {
            return Err(Error::NonFinite(xn));
        }
        xs.push((xn, f, fp));
    }
    let mut samples = Vec::with_capacity(n + 1);
    let mut max_residual: f64 = 0.0;
    for (k, &(x, f, fp)) in xs.iter().enumerate() {
        let residual = if k == 0 || k == n {
            None
        } else {
            let fpp = (xs[k + 1].1 - 2.0 * f + xs[k - 1].1) / (step * step);
            let mut pt = point(x, f, fp);
            pt.insert(f2.clone(), Complex64::new(fpp, 0.0));
            let r = eval_real(&ode.residual, &pt)?.abs();
            max_residual = max_residual.max(r);
            Some(r)
        };
        samples.push(Sample { x, f, fp, residual });
    }
    Ok(Integration { samples, max_residual })
}

/// Default residual tolerance for integrated trajectories.
pub const ODE_RESIDUAL_TOLERANCE: f64 = 1e-6;

pub fn integration_verdict(run: &Integration) -> Verdict {
    Verdict::numeric("ode-integration", "reduced ODE trajectory", run.max_residual, ODE_RESIDUAL_TOLERANCE)
}
