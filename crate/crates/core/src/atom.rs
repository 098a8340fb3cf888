//! The symbol alphabet.
//!
//! Atoms are structural values rather than entries in a mutable registry:
//! an abstract partial such as `g_xu` is the function name plus a count of
//! derivatives per variable, so `g_xu` and `g_ux` are the same value and
//! requesting a new partial can never race. The derived `Ord` is the global
//! atom order used by the monomial order.

use alloc::string::String;
use alloc::sync::Arc;
use core::fmt;

/// Jet coordinates: second order in `u`, first order in `v`.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub enum Jet {
    Ux,
    Ut,
    Uxx,
    Uxt,
    Utt,
    Vx,
    Vt,
}

impl Jet {
    pub const ALL: [Jet; 7] = [Jet::Ux, Jet::Ut, Jet::Uxx, Jet::Uxt, Jet::Utt, Jet::Vx, Jet::Vt];

    pub fn name(self) -> &'static str {
        match self {
            Jet::Ux => "u_x",
            Jet::Ut => "u_t",
            Jet::Uxx => "u_xx",
            Jet::Uxt => "u_xt",
            Jet::Utt => "u_tt",
            Jet::Vx => "v_x",
            Jet::Vt => "v_t",
        }
    }

    pub fn order(self) -> u8 {
        match self {
            Jet::Ux | Jet::Ut | Jet::Vx | Jet::Vt => 1,
            _ => 2,
        }
    }

    pub fn from_name(name: &str) -> Option<Jet> {
        Some(match name {
            "u_x" => Jet::Ux,
            "u_t" => Jet::Ut,
            "u_xx" => Jet::Uxx,
            "u_xt" | "u_tx" => Jet::Uxt,
            "u_tt" => Jet::Utt,
            "v_x" => Jet::Vx,
            "v_t" => Jet::Vt,
            _ => return None,
        })
    }
}

/// Named functions: the coefficient functions of the equation, the
/// unknown infinitesimals of a vector field, and the Noether ansatz.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub enum FuncName {
    F,
    G,
    H,
    Xi,
    Tau,
    Phi,
    Eta,
    Alpha,
    Beta,
    Gamma,
}

/// Index into [`FuncAtom::partials`].
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub enum Arg {
    X = 0,
    T = 1,
    U = 2,
    V = 3,
}

impl Arg {
    pub const ALL: [Arg; 4] = [Arg::X, Arg::T, Arg::U, Arg::V];

    pub fn letter(self) -> char {
        match self {
            Arg::X => 'x',
            Arg::T => 't',
            Arg::U => 'u',
            Arg::V => 'v',
        }
    }

    pub fn atom(self) -> Atom {
        match self {
            Arg::X => Atom::X,
            Arg::T => Atom::T,
            Arg::U => Atom::U,
            Arg::V => Atom::V,
        }
    }

    fn from_letter(c: char) -> Option<Arg> {
        Some(match c {
            'x' => Arg::X,
            't' => Arg::T,
            'u' => Arg::U,
            'v' => Arg::V,
            _ => return None,
        })
    }
}

impl FuncName {
    pub const ALL: [FuncName; 10] = [
        FuncName::F,
        FuncName::G,
        FuncName::H,
        FuncName::Xi,
        FuncName::Tau,
        FuncName::Phi,
        FuncName::Eta,
        FuncName::Alpha,
        FuncName::Beta,
        FuncName::Gamma,
    ];

    pub fn name(self) -> &'static str {
        match self {
            FuncName::F => "f",
            FuncName::G => "g",
            FuncName::H => "h",
            FuncName::Xi => "xi",
            FuncName::Tau => "tau",
            FuncName::Phi => "phi",
            FuncName::Eta => "eta",
            FuncName::Alpha => "alpha",
            FuncName::Beta => "beta",
            FuncName::Gamma => "gamma",
        }
    }

    pub fn from_name(name: &str) -> Option<FuncName> {
        FuncName::ALL.iter().copied().find(|f| f.name() == name)
    }

    /// The variables this function depends on.
    pub fn args(self) -> &'static [Arg] {
        match self {
            FuncName::F => &[Arg::X],
            FuncName::G | FuncName::H => &[Arg::X, Arg::U],
            FuncName::Xi | FuncName::Tau | FuncName::Phi | FuncName::Eta => &[Arg::X, Arg::T, Arg::U, Arg::V],
            FuncName::Alpha | FuncName::Beta | FuncName::Gamma => &[Arg::X, Arg::T],
        }
    }

    pub fn depends_on(self, arg: Arg) -> bool {
        self.args().contains(&arg)
    }

    /// Infinitesimals and ansatz functions are the unknowns of the linear
    /// systems we generate; `f`, `g`, `h` are data.
    pub fn is_unknown(self) -> bool {
        !matches!(self, FuncName::F | FuncName::G | FuncName::H)
    }
}

/// An abstract function together with a multi-index of partial derivatives
/// in the order `(x, t, u, v)`.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct FuncAtom {
    pub name: FuncName,
    pub partials: [u8; 4],
}

impl FuncAtom {
    pub fn new(name: FuncName) -> Self {
        FuncAtom { name, partials: [0; 4] }
    }

    /// `∂_arg` of this atom, or `None` when the function does not depend on `arg`.
    pub fn partial(self, arg: Arg) -> Option<FuncAtom> {
        if !self.name.depends_on(arg) {
            return None;
        }
        let mut p = self.partials;
        p[arg as usize] += 1;
        Some(FuncAtom { name: self.name, partials: p })
    }

    pub fn with_partials(name: FuncName, args: &[Arg]) -> Option<FuncAtom> {
        args.iter().try_fold(FuncAtom::new(name), |acc, &a| acc.partial(a))
    }

    /// Parses `g`, `g_xu`, `xi_tv`, ... Suffix letters may come in any order.
    pub fn from_name(ident: &str) -> Option<FuncAtom> {
        let (base, suffix) = match ident.find('_') {
            Some(k) => (&ident[..k], Some(&ident[k + 1..])),
            None => (ident, None),
        };
        let mut atom = FuncAtom::new(FuncName::from_name(base)?);
        if let Some(s) = suffix {
            if s.is_empty() {
                return None;
            }
            for c in s.chars() {
                atom = atom.partial(Arg::from_letter(c)?)?;
            }
        }
        Some(atom)
    }

    pub fn is_unknown(self) -> bool {
        self.name.is_unknown()
    }
}

impl fmt::Display for FuncAtom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.name.name())?;
        if self.partials.iter().any(|&k| k > 0) {
            write!(f, "_")?;
            for arg in Arg::ALL {
                for _ in 0..self.partials[arg as usize] {
                    write!(f, "{}", arg.letter())?;
                }
            }
        }
        Ok(())
    }
}

/// A symbol of the kernel.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub enum Atom {
    X,
    T,
    U,
    V,
    Jet(Jet),
    Param(Arc<str>),
    /// The opaque transcendental `exp(x)`.
    Exp,
    Func(FuncAtom),
    /// `F`, `F'`, `F''`: an unknown function of `x` in a reduced ODE.
    Ode(u8),
}

impl Atom {
    pub fn param(name: &str) -> Atom {
        Atom::Param(Arc::from(name))
    }

    pub fn func(name: FuncName) -> Atom {
        Atom::Func(FuncAtom::new(name))
    }

    pub fn is_jet(&self) -> bool {
        matches!(self, Atom::Jet(_))
    }

    /// Whether `self` may be used as a differentiation direction.
    pub fn is_direction(&self) -> bool {
        matches!(self, Atom::X | Atom::T | Atom::U | Atom::V | Atom::Jet(_))
    }

    pub fn as_arg(&self) -> Option<Arg> {
        match self {
            Atom::X => Some(Arg::X),
            Atom::T => Some(Arg::T),
            Atom::U => Some(Arg::U),
            Atom::V => Some(Arg::V),
            _ => None,
        }
    }

    /// Partial derivative of this atom in direction `dir`, as an atom
    /// (`Some(Ok(a))`), the constant one (`Some(Err(()))`), or zero (`None`).
    /// `dir` must satisfy [`Atom::is_direction`].
    pub(crate) fn partial(&self, dir: &Atom) -> Option<Result<Atom, ()>> {
        if self == dir {
            return Some(Err(()));
        }
        match self {
            Atom::Exp if *dir == Atom::X => Some(Ok(Atom::Exp)),
            Atom::Func(fa) => {
                let arg = dir.as_arg()?;
                fa.partial(arg).map(|p| Ok(Atom::Func(p)))
            }
            _ => None,
        }
    }

    pub fn name(&self) -> String {
        alloc::format!("{}", self)
    }
}

impl fmt::Display for Atom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Atom::X => write!(f, "x"),
            Atom::T => write!(f, "t"),
            Atom::U => write!(f, "u"),
            Atom::V => write!(f, "v"),
            Atom::Jet(j) => write!(f, "{}", j.name()),
            Atom::Param(p) => write!(f, "{}", p),
            Atom::Exp => write!(f, "exp(x)"),
            Atom::Func(fa) => write!(f, "{}", fa),
            Atom::Ode(k) => {
                write!(f, "F")?;
                for _ in 0..*k {
                    write!(f, "'")?;
                }
                Ok(())
            }
        }
    }
}
