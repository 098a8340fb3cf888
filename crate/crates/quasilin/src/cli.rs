//! Argument parsing and the subcommands. Every command builds a [`Report`];
//! printing and the exit code are decided in one place.

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};

use quasilin_core::cases::{run_paper_suite, REFERENCE_EQUATIONS};
use quasilin_core::noether::{
    build_conserved, constraint_residuals, divergence_check, euler_lagrange_on_shell, noether_constraints,
    SIGN_CONVENTION,
};
use quasilin_core::reduce::{check_solution, integrate_ode, integration_verdict, invariant_residuals, reduced_ode};
use quasilin_core::symmetry::{
    check_symmetry, classify_potential, determining_system, reference_verdict, solve_ansatz,
};
use quasilin_core::{Atom, Complex64, Error as CoreError, Expr, PdeSpec, Point, Verdict};

use crate::docs::{parse_ansatz, read_json, ConservedDoc, DocError, GeneratorDoc, ProblemDoc, SolutionDoc};
use crate::oracle;
use crate::report::Report;

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
}

#[derive(Debug, Parser)]
#[command(
    name = "quasilin",
    version,
    about = "Symmetries, reductions and conservation laws of f(x)u_tt = [g(x,u)u_x + h(x,u)]_x"
)]
pub struct Cli {
    #[arg(long, value_enum, default_value_t = Format::Text, global = true)]
    pub format: Format,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Determining equations of the potential system, split over u_x, u_t.
    DeriveDetermining(DeriveDeterminingArgs),
    /// Whether a generator leaves the potential system invariant.
    CheckSymmetry {
        #[arg(long)]
        problem: PathBuf,
        #[arg(long)]
        generator: PathBuf,
    },
    /// Point or potential: does the generator depend on v?
    Classify {
        #[arg(long)]
        generator: PathBuf,
        /// Declares the parameters the generator may use.
        #[arg(long)]
        problem: Option<PathBuf>,
    },
    /// Constant-coefficient combinations of the basis that are symmetries.
    SolveAnsatz {
        #[arg(long)]
        problem: PathBuf,
        #[arg(long, num_args = 1.., required = true)]
        basis: Vec<PathBuf>,
    },
    /// Euler-Lagrange expression on shell and the constraints on alpha, beta, gamma.
    DeriveNoether {
        #[arg(long)]
        problem: PathBuf,
    },
    /// Conserved vector for alpha(x,t)*d_u with gauge seeds beta, gamma.
    BuildConserved {
        #[arg(long)]
        problem: PathBuf,
        #[arg(long)]
        alpha: String,
        #[arg(long, default_value = "0")]
        beta: String,
        #[arg(long, default_value = "0")]
        gamma: String,
    },
    /// Divergence of (T1, T2) on solutions, with the characteristic if one exists.
    CheckConservation {
        #[arg(long)]
        problem: PathBuf,
        #[arg(long)]
        conserved: PathBuf,
    },
    /// Substitutes a candidate into the equation and the potential system.
    CheckSolution {
        #[arg(long)]
        problem: PathBuf,
        #[arg(long)]
        solution: PathBuf,
        /// Also reports the invariant surface residuals of this generator.
        #[arg(long)]
        generator: Option<PathBuf>,
    },
    /// Reduced ODE for u = F(x), optionally integrated with RK4.
    Reduce(ReduceArgs),
    /// Every registered check of the built-in cases.
    PaperSuite {
        #[arg(long)]
        oracle: Option<PathBuf>,
    },
}

#[derive(Debug, clap::Args)]
pub struct DeriveDeterminingArgs {
    #[arg(long)]
    pub problem: PathBuf,
    /// Compare against the reference equations D1-D7 (abstract problems only).
    #[arg(long)]
    pub reference: bool,
}

#[derive(Debug, clap::Args)]
pub struct ReduceArgs {
    #[arg(long)]
    pub problem: PathBuf,
    /// x0 x1 step F(x0) F'(x0)
    #[arg(long, num_args = 5, value_names = ["X0", "X1", "STEP", "F0", "F0P"], allow_negative_numbers = true)]
    pub integrate: Option<Vec<f64>>,
    /// Writes samples (x, F, F', residual) as CSV.
    #[arg(long, requires = "integrate")]
    pub csv: Option<PathBuf>,
    /// Numeric parameter values, `name=value`.
    #[arg(long = "param", value_parser = parse_param)]
    pub params: Vec<(String, f64)>,
}

fn parse_param(s: &str) -> Result<(String, f64), String> {
    let (k, v) = s.split_once('=').ok_or_else(|| format!("expected name=value, got `{}`", s))?;
    let v: f64 = v.trim().parse().map_err(|e| format!("`{}`: {}", v, e))?;
    Ok((k.trim().to_string(), v))
}

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error(transparent)]
    Doc(#[from] DocError),
    #[error(transparent)]
    Core(#[from] CoreError),
    #[error("{0}")]
    Usage(String),
    #[error("cannot write {path}: {source}")]
    Write {
        path: String,
        #[source]
        source: std::io::Error,
    },
}

fn problem(path: &Path) -> Result<PdeSpec, CliError> {
    Ok(read_json::<ProblemDoc>(path)?.to_spec()?)
}

/// Parses `argv` (program name first), runs the command and writes the
/// report. Returns the process exit code.
pub fn run<I, T>(argv: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let argv: Vec<OsString> = argv.into_iter().map(Into::into).collect();
    let cli = match Cli::try_parse_from(&argv) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let text = e.render().to_string();
            let _ = if code == 0 { out.write_all(text.as_bytes()) } else { err.write_all(text.as_bytes()) };
            return code;
        }
    };
    let echo: Vec<String> = argv.iter().skip(1).map(|a| a.to_string_lossy().into_owned()).collect();
    match execute(&cli.command, echo) {
        Ok(report) => {
            let text = match cli.format {
                Format::Json => report.to_json(),
                Format::Text => report.to_text(),
            };
            if out.write_all(text.as_bytes()).is_err() {
                return 2;
            }
            report.exit_code()
        }
        Err(e) => {
            // messages already embed their sources
            let _ = writeln!(err, "error: {}", e);
            2
        }
    }
}

pub fn execute(cmd: &Command, echo: Vec<String>) -> Result<Report, CliError> {
    let mut r = Report::new(echo);
    match cmd {
        Command::DeriveDetermining(a) => derive_determining(&mut r, a)?,
        Command::CheckSymmetry { problem: p, generator } => {
            let spec = problem(p)?;
            let vf = read_json::<GeneratorDoc>(generator)?.to_field(spec.params())?;
            r.result("generator", &vf);
            r.result("classification", classify_potential(&vf));
            r.verdict(None, &check_symmetry(&spec, &vf)?);
        }
        Command::Classify { generator, problem: p } => {
            let params = match p {
                Some(p) => problem(p)?.params().to_vec(),
                None => Vec::new(),
            };
            let vf = read_json::<GeneratorDoc>(generator)?.to_field(&params)?;
            r.result("generator", &vf);
            r.result("classification", classify_potential(&vf));
        }
        Command::SolveAnsatz { problem: p, basis } => {
            let spec = problem(p)?;
            let fields = basis
                .iter()
                .map(|b| read_json::<GeneratorDoc>(b)?.to_field(spec.params()))
                .collect::<Result<Vec<_>, _>>()?;
            let sol = solve_ansatz(&spec, &fields)?;
            r.result("dimension", sol.dimension());
            for (k, f) in sol.fields.iter().enumerate() {
                r.result(format!("Y{}", k + 1), f);
            }
        }
        Command::DeriveNoether { problem: p } => {
            let spec = problem(p)?;
            r.result("sign convention", SIGN_CONVENTION);
            r.result("dL/du on shell", euler_lagrange_on_shell(&spec)?);
            for (m, c) in noether_constraints(&spec)? {
                r.result(format!("coefficient of {}", Expr::monomial(m)), format!("{} = 0", c));
            }
        }
        Command::BuildConserved { problem: p, alpha, beta, gamma } => {
            let spec = problem(p)?;
            let ans = parse_ansatz(&spec, alpha, beta, gamma)?;
            let anchor = "partial Noether operator alpha*d_u";
            match build_conserved(&spec, &ans) {
                Ok(t) => {
                    r.result("T1", &t.t1);
                    r.result("T2", &t.t2);
                    r.verdict(None, &Verdict::from_residuals("noether-ansatz", anchor, vec![]));
                    r.verdict(None, &divergence_check(&spec, &t.t1, &t.t2, t.characteristic.as_ref())?);
                }
                Err(CoreError::ConstraintsViolated(_)) => {
                    let bad = constraint_residuals(&spec, &ans)?.into_iter().map(|(_, c)| c).collect();
                    r.verdict(None, &Verdict::from_residuals("noether-ansatz", anchor, bad));
                }
                Err(e) => return Err(e.into()),
            }
        }
        Command::CheckConservation { problem: p, conserved } => {
            let spec = problem(p)?;
            let (t1, t2) = read_json::<ConservedDoc>(conserved)?.to_components(&spec)?;
            r.verdict(None, &divergence_check(&spec, &t1, &t2, None)?);
        }
        Command::CheckSolution { problem: p, solution, generator } => {
            let spec = problem(p)?;
            let doc = read_json::<SolutionDoc>(solution)?;
            let cand = doc.to_candidate(&spec)?;
            r.verdict(None, &check_solution(&spec, &cand)?);
            if let Some(g) = generator {
                let vf = read_json::<GeneratorDoc>(g)?.to_field(&spec.params_with(&doc.params)?)?;
                let (q1, q2) = invariant_residuals(&vf, &cand)?;
                r.verdict(
                    None,
                    &Verdict::from_residuals("invariant-surface", "invariant surface conditions", vec![q1, q2]),
                );
            }
        }
        Command::Reduce(a) => reduce(&mut r, a)?,
        Command::PaperSuite { oracle: path } => {
            for item in run_paper_suite() {
                r.verdict(Some(&item.check_id), &item.verdict);
            }
            if let Some(path) = path {
                oracle::annotate(&mut r, &oracle::load(path)?);
            }
        }
    }
    Ok(r)
}

fn derive_determining(r: &mut Report, a: &DeriveDeterminingArgs) -> Result<(), CliError> {
    let spec = problem(&a.problem)?;
    let sys = determining_system(&spec)?;
    for eq in &sys.equations {
        let mut label = eq.provenance();
        if eq.redundant {
            label.push_str(" (redundant)");
        }
        r.result(label, format!("{} = 0", eq.coefficient));
    }
    if a.reference {
        if spec.abstract_funcs().len() != 3 {
            return Err(CliError::Usage("--reference needs a problem with f, g and h all abstract".into()));
        }
        for (label, text) in REFERENCE_EQUATIONS {
            let reference = quasilin_core::parse::parse_any(text, &[])?;
            let anchor = format!("reference determining equation {}", label);
            r.verdict(Some(label), &reference_verdict(&spec, &sys, "determining-equation", &anchor, &reference)?);
        }
    }
    Ok(())
}

fn reduce(r: &mut Report, a: &ReduceArgs) -> Result<(), CliError> {
    let spec = problem(&a.problem)?;
    let ode = reduced_ode(&spec)?;
    r.result("reduced ODE", &ode);
    let Some(v) = &a.integrate else { return Ok(()) };
    let &[x0, x1, step, f0, f0p] = v.as_slice() else {
        return Err(CliError::Usage("--integrate takes x0 x1 step F0 F0p".into()));
    };
    let mut pt = Point::new();
    for (name, value) in &a.params {
        if !spec.params().iter().any(|p| &**p == name) {
            return Err(CliError::Usage(format!("`{}` is not a parameter of the problem", name)));
        }
        pt.insert(Atom::param(name), Complex64::new(*value, 0.0));
    }
    let run = integrate_ode(&ode, (f0, f0p), (x0, x1, step), &pt)?;
    let last = run.samples.last().expect("at least one step");
    r.result("F(x1)", last.f);
    r.result("F'(x1)", last.fp);
    r.verdict(None, &integration_verdict(&run));
    if let Some(path) = &a.csv {
        write_csv(path, &run.samples).map_err(|source| CliError::Write { path: path.display().to_string(), source })?;
    }
    Ok(())
}

fn write_csv(path: &Path, samples: &[quasilin_core::reduce::Sample]) -> std::io::Result<()> {
    let mut w = csv::Writer::from_path(path)?;
    w.write_record(["x", "F", "F'", "residual"])?;
    for s in samples {
        let res = s.residual.map(|v| v.to_string()).unwrap_or_default();
        w.write_record([s.x.to_string(), s.f.to_string(), s.fp.to_string(), res])?;
    }
    w.flush()
}
