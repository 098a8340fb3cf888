//! Point symmetries of the potential system `v_x = f·u_t`, `v_t = g·u_x + h`.

use alloc::collections::BTreeMap;
use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::fmt;

use crate::atom::{Arg, Atom, FuncAtom, FuncName, Jet};
use crate::coeff::Coeff;
use crate::error::{Error, Result};
use crate::expr::Expr;
use crate::jet::{total_derivative, Direction, JetContext, Shell};
use crate::linalg::{self, form_to_expr, linear_form, proportional, Echelon};
use crate::pde::PdeSpec;
use crate::poly::{self, Monomial, Poly};
use crate::verdict::Verdict;

fn jet(j: Jet) -> Expr {
    Expr::atom(Atom::Jet(j))
}

fn d(e: &Expr, a: Arg) -> Expr {
    e.diff(&a.atom()).expect("x, t, u, v are valid directions")
}

/// `ξ ∂_x + τ ∂_t + φ ∂_u + η ∂_v`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VectorField {
    pub xi: Expr,
    pub tau: Expr,
    pub phi: Expr,
    pub eta: Expr,
}

impl VectorField {
    pub fn new(xi: Expr, tau: Expr, phi: Expr, eta: Expr) -> Result<Self> {
        for (name, e) in [("xi", &xi), ("tau", &tau), ("phi", &phi), ("eta", &eta)] {
            if let Some(a) = e.atoms().into_iter().find(|a| a.is_jet() || matches!(a, Atom::Ode(_))) {
                return Err(Error::invalid(alloc::format!("{} may not contain `{}`", name, a)));
            }
        }
        Ok(VectorField { xi, tau, phi, eta })
    }

    pub fn zero() -> Self {
        VectorField { xi: Expr::zero(), tau: Expr::zero(), phi: Expr::zero(), eta: Expr::zero() }
    }

    /// `∂_x`, `∂_t`, `∂_u` or `∂_v`.
    pub fn translation(arg: Arg) -> Self {
        let mut vf = VectorField::zero();
        *vf.component_mut(arg) = Expr::one();
        vf
    }

    /// ξ, τ, φ, η as unknown functions of (x, t, u, v).
    pub fn abstract_field() -> Self {
        let f = |n| Expr::atom(Atom::func(n));
        VectorField { xi: f(FuncName::Xi), tau: f(FuncName::Tau), phi: f(FuncName::Phi), eta: f(FuncName::Eta) }
    }

    pub fn components(&self) -> [&Expr; 4] {
        [&self.xi, &self.tau, &self.phi, &self.eta]
    }

    /// Coefficient of `∂_arg`.
    pub fn component(&self, arg: Arg) -> &Expr {
        match arg {
            Arg::X => &self.xi,
            Arg::T => &self.tau,
            Arg::U => &self.phi,
            Arg::V => &self.eta,
        }
    }

    fn component_mut(&mut self, arg: Arg) -> &mut Expr {
        match arg {
            Arg::X => &mut self.xi,
            Arg::T => &mut self.tau,
            Arg::U => &mut self.phi,
            Arg::V => &mut self.eta,
        }
    }

    pub fn add(&self, other: &VectorField) -> VectorField {
        VectorField {
            xi: &self.xi + &other.xi,
            tau: &self.tau + &other.tau,
            phi: &self.phi + &other.phi,
            eta: &self.eta + &other.eta,
        }
    }

    pub fn scale(&self, c: &Expr) -> VectorField {
        VectorField { xi: &self.xi * c, tau: &self.tau * c, phi: &self.phi * c, eta: &self.eta * c }
    }

    pub fn is_zero(&self) -> bool {
        self.components().iter().all(|e| e.is_zero())
    }
}

impl fmt::Display for VectorField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for arg in Arg::ALL {
            let c = self.component(arg);
            if c.is_zero() {
                continue;
            }
            if !first {
                f.write_str(" + ")?;
            }
            first = false;
            let text = c.to_string();
            if c.is_one() {
                write!(f, "d_{}", arg.letter())?;
            } else if text.contains(' ') || text.starts_with('-') {
                write!(f, "({})*d_{}", text, arg.letter())?;
            } else {
                write!(f, "{}*d_{}", text, arg.letter())?;
            }
        }
        if first {
            f.write_str("0")?;
        }
        Ok(())
    }
}

/// Coefficients of `∂_{u_x}`, `∂_{u_t}`, `∂_{v_x}`, `∂_{v_t}` in the first prolongation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ProlongedField {
    pub phi1: Expr,
    pub phi2: Expr,
    pub eta1: Expr,
    pub eta2: Expr,
}

/// First prolongation from the closed-form coefficient formulas.
pub fn prolong1(vf: &VectorField) -> ProlongedField {
    use Arg::*;
    let (ux, ut, vx, vt) = (jet(Jet::Ux), jet(Jet::Ut), jet(Jet::Vx), jet(Jet::Vt));
    let (xi, tau, phi, eta) = (&vf.xi, &vf.tau, &vf.phi, &vf.eta);
    let sum = |terms: &[Expr]| terms.iter().fold(Expr::zero(), |acc, t| &acc + t);

    let phi1 = sum(&[
        d(phi, X),
        &(&d(phi, U) - &d(xi, X)) * &ux,
        -(&d(tau, X) * &ut),
        -(&(&d(tau, U) * &ux) * &ut),
        -(&d(xi, U) * &(&ux * &ux)),
        &d(phi, V) * &vx,
        -(&(&d(tau, V) * &ut) * &vx),
        -(&(&d(xi, V) * &ux) * &vx),
    ]);
    let phi2 = sum(&[
        d(phi, T),
        &(&d(phi, U) - &d(tau, T)) * &ut,
        -(&d(tau, U) * &(&ut * &ut)),
        -(&d(xi, T) * &ux),
        -(&(&d(xi, U) * &ut) * &ux),
        &d(phi, V) * &vt,
        -(&(&d(tau, V) * &ut) * &vt),
        -(&(&d(xi, V) * &ux) * &vt),
    ]);
    let eta1 = sum(&[
        d(eta, X),
        &(&d(eta, V) - &d(xi, X)) * &vx,
        -(&d(xi, V) * &(&vx * &vx)),
        &d(eta, U) * &ux,
        -(&d(tau, X) * &vt),
        -(&(&d(tau, U) * &ux) * &vt),
        -(&(&d(tau, V) * &vx) * &vt),
        -(&(&d(xi, U) * &ux) * &vx),
    ]);
    let eta2 = sum(&[
        d(eta, T),
        &(&d(eta, V) - &d(tau, T)) * &vt,
        -(&d(tau, V) * &(&vt * &vt)),
        &d(eta, U) * &ut,
        -(&(&d(tau, U) * &ut) * &vt),
        -(&d(xi, T) * &vx),
        -(&(&d(xi, U) * &ut) * &vx),
        -(&(&d(xi, V) * &vt) * &vx),
    ]);
    ProlongedField { phi1, phi2, eta1, eta2 }
}

/// First prolongation via `ζ_i = D_i(component) − (dependent)_x·D_i ξ − (dependent)_t·D_i τ`.
pub fn prolong1_generic(vf: &VectorField) -> Result<ProlongedField> {
    let zeta = |comp: &Expr, jx: Jet, jt: Jet, dir: Direction| -> Result<Expr> {
        let dc = total_derivative(comp, dir)?;
        let dxi = total_derivative(&vf.xi, dir)?;
        let dtau = total_derivative(&vf.tau, dir)?;
        Ok(&(&dc - &(&jet(jx) * &dxi)) - &(&jet(jt) * &dtau))
    };
    Ok(ProlongedField {
        phi1: zeta(&vf.phi, Jet::Ux, Jet::Ut, Direction::X)?,
        phi2: zeta(&vf.phi, Jet::Ux, Jet::Ut, Direction::T)?,
        eta1: zeta(&vf.eta, Jet::Vx, Jet::Vt, Direction::X)?,
        eta2: zeta(&vf.eta, Jet::Vx, Jet::Vt, Direction::T)?,
    })
}

/// `X⁽¹⁾(e)` for `e` over (x, t, u, v, u_x, u_t, v_x, v_t).
pub fn apply_prolonged(vf: &VectorField, pf: &ProlongedField, e: &Expr) -> Result<Expr> {
    if let Some(a) = e.atoms().into_iter().find(|a| matches!(a, Atom::Jet(j) if j.order() > 1)) {
        return Err(Error::invalid(alloc::format!("first prolongation cannot act on `{}`", a)));
    }
    let pairs: [(&Expr, Atom); 8] = [
        (&vf.xi, Atom::X),
        (&vf.tau, Atom::T),
        (&vf.phi, Atom::U),
        (&vf.eta, Atom::V),
        (&pf.phi1, Atom::Jet(Jet::Ux)),
        (&pf.phi2, Atom::Jet(Jet::Ut)),
        (&pf.eta1, Atom::Jet(Jet::Vx)),
        (&pf.eta2, Atom::Jet(Jet::Vt)),
    ];
    let mut out = Expr::zero();
    for (c, a) in pairs {
        if c.is_zero() {
            continue;
        }
        let de = e.diff(&a)?;
        if !de.is_zero() {
            out = &out + &(c * &de);
        }
    }
    Ok(out)
}

/// The two equations of the potential system, as expressions equal to zero.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Debug, Hash)]
pub enum Constraint {
    /// `v_x − f·u_t`
    First,
    /// `v_t − g·u_x − h`
    Second,
}

impl Constraint {
    pub const ALL: [Constraint; 2] = [Constraint::First, Constraint::Second];

    pub fn expr(self, spec: &PdeSpec) -> Expr {
        match self {
            Constraint::First => &jet(Jet::Vx) - &(spec.f() * &jet(Jet::Ut)),
            Constraint::Second => &jet(Jet::Vt) - &spec.flux(),
        }
    }

    pub fn label(self) -> &'static str {
        match self {
            Constraint::First => "v_x - f*u_t",
            Constraint::Second => "v_t - g*u_x - h",
        }
    }
}

/// `(X⁽¹⁾(v_x − f·u_t), X⁽¹⁾(v_t − g·u_x − h))` with `v_x`, `v_t` eliminated.
pub fn determining_residuals(spec: &PdeSpec, vf: &VectorField) -> Result<(Expr, Expr)> {
    let pf = prolong1(vf);
    let ctx = JetContext::new(spec);
    let r =
        |c: Constraint| -> Result<Expr> { ctx.on_shell(&apply_prolonged(vf, &pf, &c.expr(spec))?, Shell::Potential) };
    Ok((r(Constraint::First)?, r(Constraint::Second)?))
}

/// One coefficient equation of the determining system.
#[derive(Clone, Debug, PartialEq)]
pub struct DeterminingEquation {
    pub constraint: Constraint,
    /// Monomial in `u_x`, `u_t` this coefficient multiplies.
    pub monomial: Monomial,
    pub coefficient: Expr,
    /// The coefficient after `τ_u ↦ f·ξ_v`, `ξ_u ↦ g·τ_v`.
    pub reduced: Expr,
    pub redundant: bool,
}

impl DeterminingEquation {
    /// e.g. `v_x - f*u_t | u_t^2`
    pub fn provenance(&self) -> String {
        alloc::format!("{} | {}", self.constraint.label(), Expr::monomial(self.monomial.clone()))
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct DeterminingSystem {
    pub equations: Vec<DeterminingEquation>,
}

impl DeterminingSystem {
    /// `Σ monomial·coefficient` for one constraint.
    pub fn expand(&self, c: Constraint) -> Expr {
        let mut e = Expr::zero();
        for eq in self.equations.iter().filter(|q| q.constraint == c) {
            e = &e + &(&Expr::monomial(eq.monomial.clone()) * &eq.coefficient);
        }
        e
    }

    pub fn non_redundant(&self) -> impl Iterator<Item = &DeterminingEquation> {
        self.equations.iter().filter(|q| !q.redundant)
    }

    /// Echelon form of all equations as linear forms in the unknown partials.
    pub fn echelon(&self) -> Result<Echelon> {
        let mut ech = Echelon::new();
        for eq in &self.equations {
            ech.insert(&linear_form(&eq.coefficient)?);
        }
        Ok(ech)
    }
}

/// The substitutions `τ_u ↦ f·ξ_v`, `ξ_u ↦ g·τ_v` read off the `u_t²` coefficients.
pub fn leading_substitutions(spec: &PdeSpec) -> BTreeMap<Atom, Expr> {
    let p = |n, a| Atom::Func(FuncAtom::with_partials(n, &[a]).expect("valid partial"));
    let mut m = BTreeMap::new();
    m.insert(p(FuncName::Tau, Arg::U), spec.f() * &Expr::atom(p(FuncName::Xi, Arg::V)));
    m.insert(p(FuncName::Xi, Arg::U), spec.g() * &Expr::atom(p(FuncName::Tau, Arg::V)));
    m
}

/// Splits the residuals of the abstract field over monomials in `u_x`, `u_t`.
pub fn determining_system(spec: &PdeSpec) -> Result<DeterminingSystem> {
    let vf = VectorField::abstract_field();
    let (r1, r2) = determining_residuals(spec, &vf)?;
    let subs = leading_substitutions(spec);
    let split = [Atom::Jet(Jet::Ux), Atom::Jet(Jet::Ut)];
    let mut equations: Vec<DeterminingEquation> = Vec::new();
    for (c, r) in [(Constraint::First, r1), (Constraint::Second, r2)] {
        for (monomial, coefficient) in r.collect(&split)? {
            let reduced = coefficient.substitute(&subs)?;
            let redundant = equations
                .iter()
                .filter(|q| !q.redundant)
                .any(|q| proportional(&coefficient, &q.coefficient) || proportional(&reduced, &q.reduced));
            equations.push(DeterminingEquation { constraint: c, monomial, coefficient, reduced, redundant });
        }
    }
    Ok(DeterminingSystem { equations })
}

/// Replaces abstract infinitesimal partials by the matching partials of `vf`.
pub fn instantiate(e: &Expr, vf: &VectorField) -> Result<Expr> {
    let mut b = BTreeMap::new();
    for a in e.atoms() {
        let Atom::Func(fa) = &a else { continue };
        let comp = match fa.name {
            FuncName::Xi => &vf.xi,
            FuncName::Tau => &vf.tau,
            FuncName::Phi => &vf.phi,
            FuncName::Eta => &vf.eta,
            _ => continue,
        };
        let mut v = comp.clone();
        for arg in Arg::ALL {
            for _ in 0..fa.partials[arg as usize] {
                v = d(&v, arg);
            }
        }
        b.insert(a.clone(), v);
    }
    e.substitute(&b)
}

pub fn check_symmetry(spec: &PdeSpec, vf: &VectorField) -> Result<Verdict> {
    let (r1, r2) = determining_residuals(spec, vf)?;
    Ok(Verdict::from_residuals("symmetry", "invariance of the potential system", alloc::vec![r1, r2]))
}

#[derive(Clone, Copy, PartialEq, Eq, Debug, Hash)]
pub enum Classification {
    Point,
    Potential,
}

impl Classification {
    pub fn as_str(self) -> &'static str {
        match self {
            Classification::Point => "point",
            Classification::Potential => "potential",
        }
    }
}

impl fmt::Display for Classification {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Potential iff ξ, τ or φ depends on v.
pub fn classify_potential(vf: &VectorField) -> Classification {
    if [&vf.xi, &vf.tau, &vf.phi].iter().any(|c| !d(c, Arg::V).is_zero()) {
        Classification::Potential
    } else {
        Classification::Point
    }
}

/// Solution space of `Σ c_k·basis_k` with constant `c_k`.
#[derive(Clone, Debug, PartialEq)]
pub struct AnsatzSolution {
    /// One coefficient vector per generator of the solution space.
    pub coefficients: Vec<Vec<Coeff>>,
    pub fields: Vec<VectorField>,
}

impl AnsatzSolution {
    pub fn dimension(&self) -> usize {
        self.fields.len()
    }
}

fn lcm(a: &Poly, b: &Poly) -> Poly {
    let g = poly::gcd(a, b);
    a.mul(&b.exact_div(&g).expect("gcd divides"))
}

pub fn solve_ansatz(spec: &PdeSpec, basis: &[VectorField]) -> Result<AnsatzSolution> {
    let n = basis.len();
    let mut residuals: Vec<[Expr; 2]> = Vec::with_capacity(n);
    for vf in basis {
        let (r1, r2) = determining_residuals(spec, vf)?;
        residuals.push([r1, r2]);
    }
    let mut rows: BTreeMap<(usize, Monomial), Vec<Coeff>> = BTreeMap::new();
    for j in 0..2 {
        let den = residuals.iter().fold(Poly::one(), |acc, r| lcm(&acc, r[j].denominator()));
        for (k, r) in residuals.iter().enumerate() {
            let scale = den.exact_div(r[j].denominator()).expect("lcm is a multiple");
            for (m, c) in r[j].numerator().mul(&scale).terms() {
                rows.entry((j, m.clone())).or_insert_with(|| alloc::vec![Coeff::zero(); n])[k] = c.clone();
            }
        }
    }
    let matrix: Vec<Vec<Coeff>> = rows.into_values().collect();
    let coefficients = linalg::nullspace(&matrix, n);
    let fields = coefficients
        .iter()
        .map(|cs| {
            basis.iter().zip(cs).fold(VectorField::zero(), |acc, (b, c)| acc.add(&b.scale(&Expr::coeff(c.clone()))))
        })
        .collect();
    Ok(AnsatzSolution { coefficients, fields })
}

/// How a reference equation was found in the derived system.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum MatchKind {
    /// Proportional to equation `index`.
    Direct(usize),
    /// Proportional to equation `index` once both sides are reduced by the
    /// leading substitutions.
    Reduced(usize),
    /// A combination of several equations.
    Span,
    None,
}

impl fmt::Display for MatchKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            MatchKind::Direct(i) => write!(f, "proportional to equation {}", i),
            MatchKind::Reduced(i) => write!(f, "proportional to equation {} after tau_u = f*xi_v, xi_u = g*tau_v", i),
            MatchKind::Span => f.write_str("linear combination of derived equations"),
            MatchKind::None => f.write_str("not implied by the derived system"),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct ReferenceMatch {
    pub kind: MatchKind,
    /// Normal form of the reference equation modulo the derived system; zero
    /// iff it is implied.
    pub residual: Expr,
}

pub fn compare_reference(
    system: &DeterminingSystem,
    echelon: &Echelon,
    subs: &BTreeMap<Atom, Expr>,
    reference: &Expr,
) -> Result<ReferenceMatch> {
    let residual = form_to_expr(&echelon.reduce(&linear_form(reference)?));
    let reduced = reference.substitute(subs)?;
    let kind = if let Some(i) = system.equations.iter().position(|q| proportional(&q.coefficient, reference)) {
        MatchKind::Direct(i)
    } else if let Some(i) = system.equations.iter().position(|q| proportional(&q.reduced, &reduced)) {
        MatchKind::Reduced(i)
    } else if residual.is_zero() {
        MatchKind::Span
    } else {
        MatchKind::None
    };
    Ok(ReferenceMatch { kind, residual })
}

/// Verdict for one reference equation: PASS iff implied by the derived system.
pub fn reference_verdict(
    spec: &PdeSpec,
    system: &DeterminingSystem,
    label: &str,
    anchor: &str,
    reference: &Expr,
) -> Result<Verdict> {
    let m = compare_reference(system, &system.echelon()?, &leading_substitutions(spec), reference)?;
    Ok(Verdict::from_residuals(label, anchor, alloc::vec![m.residual.clone()])
        .with_detail(alloc::format!("reference: {} = 0", reference))
        .with_detail(m.kind.to_string()))
}
