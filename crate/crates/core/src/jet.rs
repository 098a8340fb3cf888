//! Total derivatives on the jet space and on-shell substitution.
//!
//! The alphabet is capped at second order in `u` and first order in `v`.
//! A total derivative that would need a coordinate beyond it (`u_xxx`,
//! `v_xt`, ...) is reported as [`Error::JetOverflow`].

use alloc::collections::BTreeMap;

use crate::atom::{Atom, Jet};
use crate::error::{Error, Result};
use crate::expr::Expr;
use crate::pde::PdeSpec;

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Direction {
    X,
    T,
}

impl Direction {
    pub fn atom(self) -> Atom {
        match self {
            Direction::X => Atom::X,
            Direction::T => Atom::T,
        }
    }
}

/// The coordinate `D_dir(a)` for `a` in {u, v, jets}; `None` when it falls
/// outside the alphabet.
fn next_jet(a: &Atom, dir: Direction) -> Option<Atom> {
    use Direction::*;
    let j = match (a, dir) {
        (Atom::U, X) => Jet::Ux,
        (Atom::U, T) => Jet::Ut,
        (Atom::V, X) => Jet::Vx,
        (Atom::V, T) => Jet::Vt,
        (Atom::Jet(Jet::Ux), X) => Jet::Uxx,
        (Atom::Jet(Jet::Ux), T) | (Atom::Jet(Jet::Ut), X) => Jet::Uxt,
        (Atom::Jet(Jet::Ut), T) => Jet::Utt,
        _ => return None,
    };
    Some(Atom::Jet(j))
}

/// `D_dir e = ∂_dir e + Σ (next jet)·∂e/∂(jet)`.
pub fn total_derivative(e: &Expr, dir: Direction) -> Result<Expr> {
    let mut out = e.diff(&dir.atom())?;
    // u and v may enter only through function atoms, so walk the whole
    // dependent alphabet rather than the atoms present.
    let dependents = [Atom::U, Atom::V].into_iter().chain(Jet::ALL.iter().map(|j| Atom::Jet(*j)));
    for a in dependents {
        let d = e.diff(&a)?;
        if d.is_zero() {
            continue;
        }
        let next = next_jet(&a, dir).ok_or_else(|| Error::JetOverflow(a.name()))?;
        out = &out + &(&Expr::atom(next) * &d);
    }
    Ok(out)
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Shell {
    /// `v_x ↦ f·u_t`, `v_t ↦ g·u_x + h`
    Potential,
    /// `u_tt ↦ D_x(g·u_x + h)/f`
    Pde,
    /// potential, then pde
    Both,
}

/// Jet alphabet together with the equation in force.
#[derive(Clone, Debug)]
pub struct JetContext<'a> {
    spec: &'a PdeSpec,
}

impl<'a> JetContext<'a> {
    pub fn new(spec: &'a PdeSpec) -> Self {
        JetContext { spec }
    }

    pub fn spec(&self) -> &PdeSpec {
        self.spec
    }

    pub fn potential_bindings(&self) -> BTreeMap<Atom, Expr> {
        let mut b = BTreeMap::new();
        b.insert(Atom::Jet(Jet::Vx), self.spec.f() * &Expr::atom(Atom::Jet(Jet::Ut)));
        b.insert(Atom::Jet(Jet::Vt), self.spec.flux());
        b
    }

    pub fn pde_bindings(&self) -> BTreeMap<Atom, Expr> {
        let rhs = self.spec.flux_derivative().try_div(self.spec.f()).expect("f is nonzero");
        let mut b = BTreeMap::new();
        b.insert(Atom::Jet(Jet::Utt), rhs);
        b
    }

    pub fn on_shell(&self, e: &Expr, level: Shell) -> Result<Expr> {
        match level {
            Shell::Potential => e.substitute(&self.potential_bindings()),
            Shell::Pde => e.substitute(&self.pde_bindings()),
            Shell::Both => self.on_shell(&self.on_shell(e, Shell::Potential)?, Shell::Pde),
        }
    }

    /// `D_t(f·u_t) − D_x(g·u_x + h)`: the compatibility condition of the
    /// potential system, i.e. the equation in conserved form.
    pub fn integrability_residual(&self) -> Result<Expr> {
        let ut = Expr::atom(Atom::Jet(Jet::Ut));
        let lhs = total_derivative(&(self.spec.f() * &ut), Direction::T)?;
        let rhs = total_derivative(&self.spec.flux(), Direction::X)?;
        Ok(&lhs - &rhs)
    }
}
