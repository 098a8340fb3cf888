//! Built-in problems, generators, candidate solutions and Noether ansatz
//! instances, and the suite that adjudicates all of them.
//!
//! Case ids: `C1` is `f = a, g = u, h = exp(x)`; `C2` is `f = x, g = x·u,
//! h = u²`; `C3` is `f = a, g = u, h = u`; `W0` is the linear wave sanity
//! fixture `f = 1, g = 1, h = 0`. Reference determining equations are
//! labelled `D1`–`D7`.

use alloc::string::{String, ToString};
use alloc::vec::Vec;

use crate::atom::Arg;
use crate::error::Result;
use crate::expr::{Expr, Point};
use crate::linalg::proportional;
use crate::noether::{
    build_conserved, build_conserved_unweighted, constraint_residuals, divergence_check, euler_lagrange_on_shell,
    noether_constraints, NoetherAnsatz,
};
use crate::parse::{parse_expr, Scope};
use crate::pde::{PdeSpec, ProblemSource};
use crate::reduce::{check_solution, integrate_ode, integration_verdict, invariant_residuals, reduced_ode, Candidate};
use crate::symmetry::{
    check_symmetry, classify_potential, determining_system, reference_verdict, solve_ansatz, Classification,
    VectorField,
};
use crate::verdict::Verdict;

#[derive(Clone, Debug)]
pub struct GeneratorEntry {
    pub label: &'static str,
    pub xi: &'static str,
    pub tau: &'static str,
    pub phi: &'static str,
    pub eta: &'static str,
    /// The classification the generator is listed with.
    pub claimed: Classification,
}

#[derive(Clone, Debug)]
pub enum SolutionForm {
    Explicit(&'static str),
    Implicit(&'static str),
}

#[derive(Clone, Debug)]
pub struct SolutionEntry {
    pub label: &'static str,
    pub u: SolutionForm,
    pub v: &'static str,
    pub extra_params: &'static [&'static str],
    /// Generator whose invariant surface the solution is said to come from.
    pub generator: Option<&'static str>,
}

#[derive(Clone, Debug)]
pub struct AnsatzEntry {
    pub label: &'static str,
    pub alpha: &'static str,
    pub beta: &'static str,
    pub gamma: &'static str,
}

/// `(F(x0), F'(x0))`.
pub type InitialValue = (f64, f64);
/// `(x0, x1, step)`.
pub type Grid = (f64, f64, f64);

#[derive(Clone, Debug)]
pub struct OdeEntry {
    /// Expected residual, in the F, F', F'' notation.
    pub expected: &'static str,
    /// Static solutions `F(x)` checked symbolically.
    pub solutions: &'static [&'static str],
    pub extra_params: &'static [&'static str],
    /// `(F(x0), F'(x0))` and `(x0, x1, step)` for an RK4 run.
    pub integrate: Option<(InitialValue, Grid)>,
}

#[derive(Clone, Debug)]
pub struct CaseEntry {
    pub id: &'static str,
    pub description: &'static str,
    pub params: &'static [&'static str],
    pub f: &'static str,
    pub g: &'static str,
    pub h: &'static str,
    pub generators: Vec<GeneratorEntry>,
    pub solutions: Vec<SolutionEntry>,
    pub ansatz: Vec<AnsatzEntry>,
    /// Constraint equations on α, β, γ, each up to a nonzero factor.
    pub constraints: &'static [&'static str],
    pub ode: Option<OdeEntry>,
}

impl CaseEntry {
    pub fn source(&self) -> ProblemSource {
        ProblemSource::new(self.params, self.f, self.g, self.h)
    }

    pub fn spec(&self) -> Result<PdeSpec> {
        PdeSpec::from_source(&self.source())
    }

    fn scope(&self, spec: &PdeSpec, extra: &[&str]) -> Result<Scope> {
        let extra: Vec<String> = extra.iter().map(|s| s.to_string()).collect();
        Ok(Scope::empty().with_args(&Arg::ALL).with_params(&spec.params_with(&extra)?))
    }

    pub fn generator(&self, spec: &PdeSpec, g: &GeneratorEntry) -> Result<VectorField> {
        let sc = self.scope(spec, &[])?;
        VectorField::new(
            parse_expr(g.xi, &sc)?,
            parse_expr(g.tau, &sc)?,
            parse_expr(g.phi, &sc)?,
            parse_expr(g.eta, &sc)?,
        )
    }

    pub fn candidate(&self, spec: &PdeSpec, s: &SolutionEntry) -> Result<Candidate> {
        let sc = self.scope(spec, s.extra_params)?;
        let v = parse_expr(s.v, &sc)?;
        match s.u {
            SolutionForm::Explicit(u) => Candidate::explicit(parse_expr(u, &sc)?, v),
            SolutionForm::Implicit(r) => Candidate::implicit(parse_expr(r, &sc)?, v),
        }
    }

    pub fn ansatz(&self, spec: &PdeSpec, a: &AnsatzEntry) -> Result<NoetherAnsatz> {
        let sc = Scope::empty().with_args(&[Arg::X, Arg::T]).with_params(spec.params());
        NoetherAnsatz::new(parse_expr(a.alpha, &sc)?, parse_expr(a.beta, &sc)?, parse_expr(a.gamma, &sc)?)
    }
}

use Classification::{Point as Pt, Potential as Pot};

const fn gen(
    label: &'static str,
    xi: &'static str,
    tau: &'static str,
    phi: &'static str,
    eta: &'static str,
    claimed: Classification,
) -> GeneratorEntry {
    GeneratorEntry { label, xi, tau, phi, eta, claimed }
}

const fn ans(label: &'static str, alpha: &'static str, beta: &'static str, gamma: &'static str) -> AnsatzEntry {
    AnsatzEntry { label, alpha, beta, gamma }
}

/// The three case families and the wave fixture, in suite order.
pub fn builtin_cases() -> Vec<CaseEntry> {
    alloc::vec![
        CaseEntry {
            id: "C1",
            description: "f = a, g = u, h = exp(x)",
            params: &["a"],
            f: "a",
            g: "u",
            h: "exp(x)",
            generators: alloc::vec![
                gen("X1", "x", "t", "u", "v", Pt),
                gen("X2", "1", "0", "0", "0", Pt),
                gen("X3", "0", "1", "0", "0", Pt),
                gen("X4", "0", "0", "v", "a*(u^2/2 + exp(x))", Pot),
                gen("X5", "0", "0", "1", "0", Pt),
                gen("X6", "0", "0", "0", "a*x", Pt),
                gen("X7", "0", "0", "0", "1", Pt),
            ],
            solutions: alloc::vec![SolutionEntry {
                label: "S1",
                u: SolutionForm::Implicit("u^2 + 2*exp(x)"),
                v: "0",
                extra_params: &[],
                generator: Some("X4"),
            }],
            ansatz: alloc::vec![
                ans("N1", "1", "0", "0"),
                ans("N2", "x", "0", "exp(x)"),
                ans("N3", "t", "0", "0"),
                ans("N4", "t*x", "exp(x)*t^2/2", "0"),
                ans("N5", "t^2", "0", "0"),
            ],
            constraints: &["alpha_xx", "alpha_tt", "beta_t + gamma_x - alpha_x*exp(x)"],
            ode: Some(OdeEntry {
                expected: "F'^2 + F*F'' + exp(x)",
                solutions: &[],
                extra_params: &[],
                integrate: None,
            }),
        },
        CaseEntry {
            id: "C2",
            description: "f = x, g = x*u, h = u^2",
            params: &[],
            f: "x",
            g: "x*u",
            h: "u^2",
            generators: alloc::vec![
                gen("X1", "x", "t", "u", "v", Pt),
                gen("X2", "1", "0", "0", "0", Pt),
                gen("X3", "0", "1", "0", "0", Pt),
                gen("X4", "0", "0", "2*v*t + x^2*u", "x^2*(v + u^2*t)", Pot),
                gen("X5", "0", "0", "2*t", "x^2", Pt),
                gen("X6", "0", "0", "2*v", "x^2*u^2", Pot),
                gen("X7", "0", "0", "0", "1", Pt),
                gen("X8", "0", "0", "1", "0", Pt),
            ],
            solutions: alloc::vec![SolutionEntry {
                label: "S1",
                u: SolutionForm::Explicit("1/(2*t^2*x^2)"),
                v: "1/(4*t^3)",
                extra_params: &[],
                generator: Some("X4"),
            }],
            ansatz: alloc::vec![
                ans("N1", "1", "0", "0"),
                ans("N2", "t", "0", "0"),
                ans("N3", "x^2", "0", "0"),
                ans("N4", "t*x^2", "x", "-t"),
            ],
            constraints: &["alpha_tt", "x*alpha_xx - alpha_x", "beta_t + gamma_x"],
            ode: None,
        },
        CaseEntry {
            id: "C3",
            description: "f = a, g = u, h = u",
            params: &["a"],
            f: "a",
            g: "u",
            h: "u",
            generators: alloc::vec![
                gen("X1", "v", "a*(x + u)", "-v", "0", Pot),
                gen("X2", "1", "0", "0", "0", Pt),
                gen("X3", "x", "t", "u", "v", Pt),
                gen("X4", "0", "1", "x + u", "v", Pt),
                gen("X5", "0", "0", "t + 1", "a*x", Pt),
                gen("X6", "0", "0", "0", "1", Pt),
            ],
            solutions: alloc::vec![SolutionEntry {
                label: "S1",
                u: SolutionForm::Explicit("c - x"),
                v: "0",
                extra_params: &["c"],
                generator: Some("X1"),
            }],
            ansatz: alloc::vec![ans("N1", "1", "0", "0"), ans("N2", "t", "0", "0"), ans("N3", "t^2 - 2*a*x", "0", "0"),],
            constraints: &["alpha_xx", "a*alpha_tt + alpha_x", "beta_t + gamma_x"],
            ode: Some(OdeEntry {
                expected: "F'^2 + F*F'' + F'",
                solutions: &["c - x"],
                extra_params: &["c"],
                integrate: Some(((2.0, -1.0), (0.0, 1.0, 1e-3))),
            }),
        },
        CaseEntry {
            id: "W0",
            description: "f = 1, g = 1, h = 0 (linear wave fixture)",
            params: &[],
            f: "1",
            g: "1",
            h: "0",
            generators: alloc::vec![gen("X1", "0", "0", "v", "u", Pot)],
            solutions: Vec::new(),
            ansatz: alloc::vec![ans("N1", "1", "0", "0")],
            constraints: &["alpha_tt - alpha_xx", "beta_t + gamma_x"],
            ode: None,
        },
    ]
}

/// Reference determining equations `D1`–`D7` in the abstract family.
pub const REFERENCE_EQUATIONS: [(&str, &str); 7] = [
    ("D1", "tau_u - f*xi_v"),
    ("D2", "xi_u - g*tau_v"),
    ("D3", "eta_u - g*f*phi_v + h*tau_u"),
    ("D4", "eta_x - f*phi_t - f*h*phi_v - h*tau_x"),
    ("D5", "f*(eta_v + tau_t - phi_u - xi_x) - f_x*xi"),
    ("D6", "h_x*xi - eta_t + h*tau_t - h*eta_v + h_u*phi + g*phi_x + h^2*tau_v"),
    ("D7", "g*(xi_x - tau_t - phi_u + eta_v) - g_u*phi - g_x*xi - 2*xi_u*h"),
];

/// One suite line: a stable id and its verdict.
#[derive(Clone, Debug, PartialEq)]
pub struct SuiteItem {
    pub check_id: String,
    pub verdict: Verdict,
}

fn item(id: impl Into<String>, v: Verdict) -> SuiteItem {
    SuiteItem { check_id: id.into(), verdict: v }
}

/// Turns an unexpected error into a failing verdict instead of aborting.
fn guarded(name: &str, anchor: &str, r: Result<Verdict>) -> Verdict {
    r.unwrap_or_else(|e| {
        Verdict::from_residuals(name, anchor, Vec::new()).with_detail(alloc::format!("error: {}", e)).failed()
    })
}

impl Verdict {
    fn failed(mut self) -> Self {
        self.status = crate::verdict::Status::Fail;
        self
    }
}

fn indicator(c: Classification) -> i64 {
    match c {
        Classification::Point => 0,
        Classification::Potential => 1,
    }
}

/// Matches two equation lists up to nonzero factors; residuals are the
/// unmatched members of either side.
fn compare_systems(name: &str, anchor: &str, derived: &[Expr], expected: &[Expr]) -> Verdict {
    let mut residuals = Vec::new();
    for e in expected {
        residuals.push(if derived.iter().any(|d| proportional(d, e)) { Expr::zero() } else { e.clone() });
    }
    for d in derived {
        if !expected.iter().any(|e| proportional(d, e)) {
            residuals.push(d.clone());
        }
    }
    let mut v = Verdict::from_residuals(name, anchor, residuals);
    for d in derived {
        v = v.with_detail(alloc::format!("{} = 0", d));
    }
    v
}

fn reference_items(out: &mut Vec<SuiteItem>) {
    let spec = PdeSpec::fully_abstract();
    let el_anchor = "Euler-Lagrange expression of the partial Lagrangian on shell";
    let el = guarded(
        "euler-lagrange",
        el_anchor,
        (|| {
            let got = euler_lagrange_on_shell(&spec)?;
            let want = crate::parse::parse_any("1/2*g_u*u_x^2 + h_x + h_u*u_x", &[])?;
            Ok(Verdict::from_residuals("euler-lagrange", el_anchor, alloc::vec![&got - &want])
                .with_detail(alloc::format!("dL/du on shell: {}", got)))
        })(),
    );
    out.push(item("EL/identity", el));

    let sys = determining_system(&spec);
    for (label, text) in REFERENCE_EQUATIONS {
        let anchor = alloc::format!("reference determining equation {}", label);
        let v = guarded(
            "determining-equation",
            &anchor,
            (|| {
                let sys = sys.as_ref().map_err(Clone::clone)?;
                let reference = crate::parse::parse_any(text, &[])?;
                reference_verdict(&spec, sys, "determining-equation", &anchor, &reference)
            })(),
        );
        out.push(item(alloc::format!("D/{}", label), v));
    }
}

fn case_items(case: &CaseEntry, out: &mut Vec<SuiteItem>) {
    let spec = match case.spec() {
        Ok(s) => s,
        Err(e) => {
            let v = Verdict::from_residuals("problem", case.description, Vec::new())
                .with_detail(alloc::format!("error: {}", e))
                .failed();
            out.push(item(alloc::format!("{}/problem", case.id), v));
            return;
        }
    };
    let id = case.id;
    let mut fields: Vec<(&str, VectorField)> = Vec::new();

    for g in &case.generators {
        let anchor = alloc::format!("{}: generator {}", case.description, g.label);
        let vf = case.generator(&spec, g);
        if let Ok(vf) = &vf {
            fields.push((g.label, vf.clone()));
        }
        let sym = guarded(
            "symmetry",
            &anchor,
            vf.clone().and_then(|vf| {
                Ok(check_symmetry(&spec, &vf)?.with_anchor(anchor.clone()).with_detail(alloc::format!("X = {}", vf)))
            }),
        );
        out.push(item(alloc::format!("{}/{}/symmetry", id, g.label), sym));
        let class = guarded(
            "classification",
            &anchor,
            vf.map(|vf| {
                let got = classify_potential(&vf);
                Verdict::from_residuals(
                    "classification",
                    anchor.clone(),
                    alloc::vec![Expr::int(indicator(g.claimed) - indicator(got))],
                )
                .with_detail(alloc::format!("computed {}, listed as {}", got, g.claimed))
            }),
        );
        out.push(item(alloc::format!("{}/{}/class", id, g.label), class));
    }

    if !case.generators.is_empty() {
        let anchor = alloc::format!("{}: listed generators span the symmetry ansatz", case.description);
        let listed: Vec<VectorField> = fields.iter().map(|(_, f)| f.clone()).collect();
        let v = guarded(
            "ansatz",
            &anchor,
            (|| {
                let sol = solve_ansatz(&spec, &listed)?;
                let missing = listed.len() as i64 - sol.dimension() as i64;
                let mut v = Verdict::from_residuals("ansatz", anchor.clone(), alloc::vec![Expr::int(missing)])
                    .with_detail(alloc::format!("solution space dimension {} of {}", sol.dimension(), listed.len()));
                for f in &sol.fields {
                    v = v.with_detail(alloc::format!("X = {}", f));
                }
                Ok(v)
            })(),
        );
        out.push(item(alloc::format!("{}/ansatz", id), v));
    }

    for s in &case.solutions {
        let anchor = alloc::format!("{}: candidate solution {}", case.description, s.label);
        let v = guarded(
            "solution",
            &anchor,
            (|| {
                let cand = case.candidate(&spec, s)?;
                let mut v = check_solution(&spec, &cand)?.with_anchor(anchor.clone());
                if let Some((label, vf)) = s.generator.and_then(|l| fields.iter().find(|(g, _)| *g == l)) {
                    let (q1, q2) = invariant_residuals(vf, &cand)?;
                    v = v.with_detail(alloc::format!(
                        "invariant surface of {} along candidate: Q1 = {}, Q2 = {}",
                        label,
                        q1,
                        q2
                    ));
                }
                Ok(v)
            })(),
        );
        out.push(item(alloc::format!("{}/{}/solution", id, s.label), v));
    }

    if let Some(ode) = &case.ode {
        let anchor = alloc::format!("{}: static reduction u = F(x), v = 0", case.description);
        let reduced = reduced_ode(&spec);
        let v = guarded(
            "reduced-ode",
            &anchor,
            (|| {
                let r = reduced.clone()?;
                let want = parse_expr(ode.expected, &Scope::empty().with_args(&[Arg::X]).with_ode())?;
                Ok(Verdict::from_residuals("reduced-ode", anchor.clone(), alloc::vec![&r.residual - &want])
                    .with_detail(r.to_string()))
            })(),
        );
        out.push(item(alloc::format!("{}/ode", id), v));
        for (k, sol) in ode.solutions.iter().enumerate() {
            let v = guarded(
                "ode-solution",
                &anchor,
                (|| {
                    let extra: Vec<String> = ode.extra_params.iter().map(|s| s.to_string()).collect();
                    let sc = Scope::empty().with_args(&[Arg::X]).with_params(&spec.params_with(&extra)?);
                    let fx = parse_expr(sol, &sc)?;
                    Ok(Verdict::from_residuals(
                        "ode-solution",
                        anchor.clone(),
                        alloc::vec![reduced.clone()?.apply(&fx)?],
                    )
                    .with_detail(alloc::format!("F = {}", fx)))
                })(),
            );
            out.push(item(alloc::format!("{}/ode/F{}", id, k + 1), v));
        }
        if let Some((ic, grid)) = ode.integrate {
            let v = guarded(
                "ode-integration",
                &anchor,
                (|| {
                    let run = integrate_ode(&reduced.clone()?, ic, grid, &Point::new())?;
                    Ok(integration_verdict(&run).with_anchor(anchor.clone()).with_detail(alloc::format!(
                        "F({}) = {}, F'({}) = {}, step {}",
                        grid.0,
                        ic.0,
                        grid.0,
                        ic.1,
                        grid.2
                    )))
                })(),
            );
            out.push(item(alloc::format!("{}/ode/rk4", id), v));
        }
    }

    let anchor = alloc::format!("{}: partial Noether constraints on alpha, beta, gamma", case.description);
    let v = guarded(
        "noether-constraints",
        &anchor,
        (|| {
            let derived: Vec<Expr> = noether_constraints(&spec)?.into_iter().map(|(_, c)| c).collect();
            let expected =
                case.constraints.iter().map(|s| crate::parse::parse_any(s, case.params)).collect::<Result<Vec<_>>>()?;
            Ok(compare_systems("noether-constraints", &anchor, &derived, &expected)
                .with_detail(crate::noether::SIGN_CONVENTION))
        })(),
    );
    out.push(item(alloc::format!("{}/noether", id), v));

    for a in &case.ansatz {
        let anchor =
            alloc::format!("{}: alpha = {}, beta = {}, gamma = {}", case.description, a.alpha, a.beta, a.gamma);
        let ansatz = case.ansatz(&spec, a);
        let v = guarded(
            "noether-ansatz",
            &anchor,
            ansatz.clone().and_then(|an| {
                let bad: Vec<Expr> = constraint_residuals(&spec, &an)?.into_iter().map(|(_, c)| c).collect();
                Ok(Verdict::from_residuals("noether-ansatz", anchor.clone(), bad))
            }),
        );
        out.push(item(alloc::format!("{}/{}/constraints", id, a.label), v));
        let v = guarded(
            "conservation",
            &anchor,
            ansatz.clone().and_then(|an| {
                let t = match build_conserved(&spec, &an) {
                    Err(crate::error::Error::ConstraintsViolated(_)) => {
                        let bad = constraint_residuals(&spec, &an)?.into_iter().map(|(_, c)| c).collect();
                        return Ok(Verdict::from_residuals("conservation", anchor.clone(), bad)
                            .with_detail("ansatz violates the partial Noether constraints"));
                    }
                    other => other?,
                };
                Ok(divergence_check(&spec, &t.t1, &t.t2, t.characteristic.as_ref())?
                    .with_anchor(anchor.clone())
                    .with_detail(alloc::format!("T1 = {}", t.t1))
                    .with_detail(alloc::format!("T2 = {}", t.t2)))
            }),
        );
        out.push(item(alloc::format!("{}/{}/conservation", id, a.label), v));
        let v = guarded(
            "conservation-unweighted",
            &anchor,
            ansatz.and_then(|an| {
                let t = build_conserved_unweighted(&spec, &an)?;
                Ok(divergence_check(&spec, &t.t1, &t.t2, None)?
                    .with_anchor(alloc::format!("{} (time component alpha*u_t)", anchor))
                    .with_detail(alloc::format!("T1 = {}", t.t1))
                    .with_detail(alloc::format!("T2 = {}", t.t2)))
            }),
        );
        out.push(item(alloc::format!("{}/{}/unweighted", id, a.label), v));
    }
}

/// Every registered check, in registry order.
pub fn run_paper_suite() -> Vec<SuiteItem> {
    let mut out = Vec::new();
    reference_items(&mut out);
    for case in builtin_cases() {
        case_items(&case, &mut out);
    }
    out
}
