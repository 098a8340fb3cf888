//! Exact symbolic engine for Lie point and potential symmetries and
//! partial-Noether conservation laws of the quasilinear hyperbolic family
//!
//! ```text
//! f(x)·u_tt = [g(x,u)·u_x + h(x,u)]_x
//! ```
//!
//! and its potential system `v_x = f·u_t`, `v_t = g·u_x + h`.
//!
//! The crate is `no_std` (it needs `alloc`). Everything is built on [`Expr`],
//! an exact rational function over Gaussian-rational coefficients whose
//! canonical form makes zero-testing a structural comparison.

#![no_std]

extern crate alloc;
#[cfg(test)]
extern crate std;

pub mod atom;
pub mod cases;
pub mod coeff;
pub mod error;
pub mod expr;
pub mod jet;
pub mod linalg;
pub mod noether;
pub mod parse;
pub mod pde;
pub mod poly;
pub mod reduce;
pub mod symmetry;
pub mod verdict;

pub use atom::{Arg, Atom, FuncAtom, FuncName, Jet};
pub use coeff::Coeff;
pub use error::{Error, Result};
pub use expr::{Expr, Point};
pub use jet::{total_derivative, Direction, JetContext, Shell};
pub use num_complex::Complex64;
pub use parse::{parse_expr, ParseError, ParseErrorKind, Scope};
pub use pde::{PdeSpec, ProblemSource};
pub use poly::{Monomial, Poly};
pub use symmetry::{
    check_symmetry, classify_potential, determining_residuals, determining_system, prolong1, prolong1_generic,
    solve_ansatz, Classification, DeterminingSystem, ProlongedField, VectorField,
};
pub use verdict::{Status, Verdict};
