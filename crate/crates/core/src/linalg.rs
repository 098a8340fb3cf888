//! Exact linear algebra: fraction-free nullspace over Gaussian rationals and
//! row reduction of linear forms whose coefficients are rational functions.

use alloc::collections::BTreeMap;
use alloc::vec;
use alloc::vec::Vec;

use crate::atom::Atom;
use crate::coeff::Coeff;
use crate::error::{Error, Result};
use crate::expr::Expr;

/// Unknown-function atoms: infinitesimals and Noether seeds (and their partials).
pub fn is_unknown_atom(a: &Atom) -> bool {
    matches!(a, Atom::Func(fa) if fa.is_unknown())
}

/// `a = q·b` with `q` free of unknown atoms (and both nonzero).
pub fn proportional(a: &Expr, b: &Expr) -> bool {
    if a.is_zero() || b.is_zero() {
        return false;
    }
    match a.try_div(b) {
        Ok(q) => !q.contains_where(is_unknown_atom),
        Err(_) => false,
    }
}

/// Basis of `{c : A·c = 0}`, one vector per free column, free entry 1.
///
/// Rows are first scaled to Gaussian integers; elimination is Bareiss
/// fraction-free with the lowest-index nonzero pivot.
pub fn nullspace(rows: &[Vec<Coeff>], ncols: usize) -> Vec<Vec<Coeff>> {
    let mut a: Vec<Vec<Coeff>> = rows
        .iter()
        .filter(|r| r.iter().any(|c| !c.is_zero()))
        .map(|r| {
            debug_assert_eq!(r.len(), ncols);
            let l = r
                .iter()
                .fold(num_bigint::BigInt::from(1), |acc, c| num_integer::Integer::lcm(&acc, &c.denominator_lcm()));
            let l = Coeff::from_bigint(l);
            r.iter().map(|c| c * &l).collect()
        })
        .collect();
    let m = a.len();
    let mut prev = Coeff::one();
    let mut pivots: Vec<usize> = Vec::new();
    let mut r = 0;
    for c in 0..ncols {
        if r == m {
            break;
        }
        let Some(p) = (r..m).find(|&i| !a[i][c].is_zero()) else {
            continue;
        };
        a.swap(p, r);
        for i in r + 1..m {
            for j in c + 1..ncols {
                let v = &(&(&a[r][c] * &a[i][j]) - &(&a[i][c] * &a[r][j])) / &prev;
                debug_assert!(v.is_gaussian_integer());
                a[i][j] = v;
            }
            a[i][c] = Coeff::zero();
        }
        prev = a[r][c].clone();
        pivots.push(c);
        r += 1;
    }
    let free: Vec<usize> = (0..ncols).filter(|c| !pivots.contains(c)).collect();
    let mut out = Vec::new();
    for &fc in &free {
        let mut x = vec![Coeff::zero(); ncols];
        x[fc] = Coeff::one();
        for (row, &pc) in pivots.iter().enumerate().rev() {
            let mut s = Coeff::zero();
            for j in pc + 1..ncols {
                if !a[row][j].is_zero() && !x[j].is_zero() {
                    s = &s + &(&a[row][j] * &x[j]);
                }
            }
            x[pc] = &(-s) / &a[row][pc];
        }
        out.push(x);
    }
    out
}

/// `e` as `Σ coeff·atom` over unknown atoms. Errors if `e` is not
/// homogeneous linear in them or its denominator involves one.
pub fn linear_form(e: &Expr) -> Result<BTreeMap<Atom, Expr>> {
    let unknowns: Vec<Atom> = e.atoms().into_iter().filter(is_unknown_atom).collect();
    let parts = e.collect(&unknowns)?;
    let mut out = BTreeMap::new();
    for (m, c) in parts {
        match m.factors() {
            [(a, 1)] => {
                out.insert(a.clone(), c);
            }
            _ => {
                return Err(Error::invalid(alloc::format!(
                    "not homogeneous linear in the unknowns: term {}",
                    Expr::monomial(m)
                )))
            }
        }
    }
    Ok(out)
}

pub fn form_to_expr(form: &BTreeMap<Atom, Expr>) -> Expr {
    let mut e = Expr::zero();
    for (a, c) in form {
        e = &e + &(c * &Expr::atom(a.clone()));
    }
    e
}

/// Row echelon form over the field of rational functions.
///
/// Each stored row has a pivot with coefficient 1 and no earlier pivot, so
/// reducing in insertion order is a complete normal form.
#[derive(Clone, Debug, Default)]
pub struct Echelon {
    rows: Vec<(Atom, BTreeMap<Atom, Expr>)>,
}

impl Echelon {
    pub fn new() -> Self {
        Echelon::default()
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn reduce(&self, form: &BTreeMap<Atom, Expr>) -> BTreeMap<Atom, Expr> {
        let mut f = form.clone();
        for (p, row) in &self.rows {
            let Some(c) = f.get(p).cloned() else { continue };
            for (a, rc) in row {
                let v = &f.get(a).cloned().unwrap_or_else(Expr::zero) - &(&c * rc);
                if v.is_zero() {
                    f.remove(a);
                } else {
                    f.insert(a.clone(), v);
                }
            }
        }
        f
    }

    /// Adds the form; returns whether it was independent of the rows so far.
    pub fn insert(&mut self, form: &BTreeMap<Atom, Expr>) -> bool {
        let f = self.reduce(form);
        // highest atom as pivot: deterministic and independent of insertion noise
        let Some((p, c)) = f.iter().next_back().map(|(a, c)| (a.clone(), c.clone())) else {
            return false;
        };
        let inv = c.recip().expect("nonzero pivot");
        let row = f.iter().map(|(a, v)| (a.clone(), v * &inv)).collect();
        self.rows.push((p, row));
        true
    }
}
