//! Exact rational functions over the atom alphabet.
//!
//! Every [`Expr`] is canonical by construction: numerator and denominator are
//! coprime, the denominator's leading coefficient is one, and zero is `0/1`.
//! Equality of values is therefore structural equality.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;
use core::ops::{Add, Div, Mul, Neg, Sub};

use num_complex::Complex64;

use crate::atom::Atom;
use crate::coeff::Coeff;
use crate::error::{Error, Result};
use crate::poly::{gcd, Monomial, Poly};

#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Expr {
    num: Poly,
    den: Poly,
}

/// Numeric point for [`Expr::eval`].
pub type Point = BTreeMap<Atom, Complex64>;

impl Expr {
    pub fn zero() -> Self {
        Expr::from_poly(Poly::zero())
    }

    pub fn one() -> Self {
        Expr::int(1)
    }

    pub fn int(n: i64) -> Self {
        Expr::from_poly(Poly::constant(Coeff::from_int(n)))
    }

    pub fn ratio(n: i64, d: i64) -> Self {
        Expr::from_poly(Poly::constant(Coeff::ratio(n, d)))
    }

    pub fn coeff(c: Coeff) -> Self {
        Expr::from_poly(Poly::constant(c))
    }

    pub fn i() -> Self {
        Expr::coeff(Coeff::i())
    }

    pub fn atom(a: Atom) -> Self {
        Expr::from_poly(Poly::atom(a))
    }

    pub fn monomial(m: Monomial) -> Self {
        Expr::from_poly(Poly::term(m, Coeff::one()))
    }

    pub fn from_poly(p: Poly) -> Self {
        Expr { num: p, den: Poly::one() }
    }

    /// Canonical form of `num / den`.
    pub fn from_fraction(num: Poly, den: Poly) -> Result<Self> {
        if den.is_zero() {
            return Err(Error::DivisionByZero);
        }
        if num.is_zero() {
            return Ok(Expr::zero());
        }
        if let Some(c) = den.as_constant() {
            let inv = c.inv().ok_or(Error::DivisionByZero)?;
            return Ok(Expr::from_poly(num.scale(&inv)));
        }
        let g = gcd(&num, &den);
        let (num, den) = if g.is_one() {
            (num, den)
        } else {
            (num.exact_div(&g).expect("gcd divides numerator"), den.exact_div(&g).expect("gcd divides denominator"))
        };
        Ok(Expr::monic_den(num, den))
    }

    fn monic_den(num: Poly, den: Poly) -> Self {
        let lc = den.leading().map(|(_, c)| c.clone()).unwrap_or_else(Coeff::one);
        if lc.is_one() {
            return Expr { num, den };
        }
        let inv = lc.inv().expect("nonzero");
        Expr { num: num.scale(&inv), den: den.scale(&inv) }
    }

    /// Canonical form; every `Expr` is already canonical, so this is a clone.
    pub fn normalize(&self) -> Self {
        self.clone()
    }

    pub fn numerator(&self) -> &Poly {
        &self.num
    }

    pub fn denominator(&self) -> &Poly {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.den.is_one() && self.num.is_one()
    }

    pub fn is_polynomial(&self) -> bool {
        self.den.is_one()
    }

    pub fn as_constant(&self) -> Option<Coeff> {
        if self.den.is_one() {
            self.num.as_constant()
        } else {
            None
        }
    }

    pub fn atoms(&self) -> BTreeSet<Atom> {
        let mut s = self.num.atoms();
        s.extend(self.den.atoms());
        s
    }

    pub fn contains_atom(&self, a: &Atom) -> bool {
        self.num.contains_atom(a) || self.den.contains_atom(a)
    }

    pub fn contains_where<F: Fn(&Atom) -> bool + Copy>(&self, pred: F) -> bool {
        self.num.contains_where(pred) || self.den.contains_where(pred)
    }

    pub fn contains_jet(&self) -> bool {
        self.contains_where(Atom::is_jet)
    }

    pub fn scale(&self, c: &Coeff) -> Expr {
        if c.is_zero() {
            return Expr::zero();
        }
        Expr { num: self.num.scale(c), den: self.den.clone() }
    }

    pub fn try_div(&self, other: &Expr) -> Result<Expr> {
        if other.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let inv = Expr::monic_den(other.den.clone(), other.num.clone());
        Ok(self * &inv)
    }

    pub fn recip(&self) -> Result<Expr> {
        Expr::one().try_div(self)
    }

    pub fn pow(&self, k: i32) -> Result<Expr> {
        if k >= 0 {
            let k = k as u32;
            if self.den.is_one() {
                return Ok(Expr::from_poly(self.num.pow(k)));
            }
            // powers of coprime polynomials stay coprime
            Ok(Expr::monic_den(self.num.pow(k), self.den.pow(k)))
        } else {
            self.recip()?.pow(-k)
        }
    }

    /// Formal partial derivative in direction `dir` (independent variable,
    /// dependent variable or jet coordinate).
    pub fn diff(&self, dir: &Atom) -> Result<Expr> {
        if !dir.is_direction() {
            return Err(Error::BadDirection(dir.name()));
        }
        let dn = self.num.diff(dir);
        if self.den.is_one() {
            return Ok(Expr::from_poly(dn));
        }
        let dd = self.den.diff(dir);
        if dd.is_zero() {
            return Expr::from_fraction(dn, self.den.clone());
        }
        let num = dn.mul(&self.den).sub(&self.num.mul(&dd));
        Expr::from_fraction(num, self.den.mul(&self.den))
    }

    /// Simultaneous substitution of atoms by expressions.
    pub fn substitute(&self, bindings: &BTreeMap<Atom, Expr>) -> Result<Expr> {
        if bindings.is_empty() {
            return Ok(self.clone());
        }
        let n = subst_poly(&self.num, bindings)?;
        if self.den.is_one() {
            return Ok(n);
        }
        let d = subst_poly(&self.den, bindings)?;
        n.try_div(&d)
    }

    pub fn substitute_one(&self, atom: Atom, value: Expr) -> Result<Expr> {
        let mut b = BTreeMap::new();
        b.insert(atom, value);
        self.substitute(&b)
    }

    /// Splits `self` as `Σ monomial · coefficient` over monomials in the
    /// `split` atoms. Coefficients are nonzero and free of the split atoms.
    pub fn collect(&self, split: &[Atom]) -> Result<BTreeMap<Monomial, Expr>> {
        if let Some(a) = split.iter().find(|a| self.den.contains_atom(a)) {
            return Err(Error::DenominatorDependsOn(a.name()));
        }
        let mut parts: BTreeMap<Monomial, Vec<(Monomial, Coeff)>> = BTreeMap::new();
        for (m, c) in self.num.terms() {
            let (key, rest) = m.partition(|a| split.contains(a));
            parts.entry(key).or_default().push((rest, c.clone()));
        }
        let mut out = BTreeMap::new();
        for (key, terms) in parts {
            let p = Poly::from_terms(terms);
            if !p.is_zero() {
                out.insert(key, Expr::from_fraction(p, self.den.clone())?);
            }
        }
        Ok(out)
    }

    /// Inverse of [`Expr::collect`].
    pub fn from_collected(parts: &BTreeMap<Monomial, Expr>) -> Expr {
        parts.iter().fold(Expr::zero(), |acc, (m, c)| &acc + &(&Expr::monomial(m.clone()) * c))
    }

    /// Polynomial coefficients in a single atom: `self = Σ_k c_k · a^k`.
    pub fn coefficients_in(&self, a: &Atom) -> Result<BTreeMap<u32, Expr>> {
        Ok(self.collect(core::slice::from_ref(a))?.into_iter().map(|(m, c)| (m.degree_in(a), c)).collect())
    }

    /// Floating evaluation. `exp(x)` is taken from the point if bound there,
    /// otherwise computed from `x`.
    pub fn eval(&self, point: &Point) -> Result<Complex64> {
        let n = eval_poly(&self.num, point)?;
        if self.den.is_one() {
            return Ok(n);
        }
        let d = eval_poly(&self.den, point)?;
        if d.norm() < 1e-12 {
            return Err(Error::SmallDenominator(d.norm()));
        }
        Ok(n / d)
    }
}

fn subst_poly(p: &Poly, bindings: &BTreeMap<Atom, Expr>) -> Result<Expr> {
    let mut untouched = Poly::zero();
    let mut acc = Expr::zero();
    let mut powers: BTreeMap<(Atom, u32), Expr> = BTreeMap::new();
    for (m, c) in p.terms() {
        let (bound, free) = m.partition(|a| bindings.contains_key(a));
        if bound.is_one() {
            untouched = untouched.add(&Poly::term(free, c.clone()));
            continue;
        }
        let mut t = Expr::from_poly(Poly::term(free, c.clone()));
        for (a, k) in bound.factors() {
            let key = (a.clone(), *k);
            if !powers.contains_key(&key) {
                let v = bindings[a].pow(*k as i32)?;
                powers.insert(key.clone(), v);
            }
            t = &t * &powers[&key];
        }
        acc = &acc + &t;
    }
    Ok(&acc + &Expr::from_poly(untouched))
}

fn eval_atom(a: &Atom, point: &Point) -> Result<Complex64> {
    if let Some(v) = point.get(a) {
        return Ok(*v);
    }
    if *a == Atom::Exp {
        if let Some(x) = point.get(&Atom::X) {
            let r = libm::exp(x.re);
            return Ok(Complex64::new(r * libm::cos(x.im), r * libm::sin(x.im)));
        }
    }
    Err(Error::Unbound(a.name()))
}

fn eval_poly(p: &Poly, point: &Point) -> Result<Complex64> {
    let mut acc = Complex64::new(0.0, 0.0);
    for (m, c) in p.terms() {
        let mut t = c.to_complex64();
        for (a, k) in m.factors() {
            t *= eval_atom(a, point)?.powu(*k);
        }
        acc += t;
    }
    Ok(acc)
}

impl Add for &Expr {
    type Output = Expr;
    fn add(self, rhs: &Expr) -> Expr {
        if self.den.is_one() && rhs.den.is_one() {
            return Expr::from_poly(self.num.add(&rhs.num));
        }
        if self.den == rhs.den {
            return Expr::from_fraction(self.num.add(&rhs.num), self.den.clone()).expect("nonzero denominator");
        }
        let g = gcd(&self.den, &rhs.den);
        let a = self.den.exact_div(&g).expect("gcd divides");
        let b = rhs.den.exact_div(&g).expect("gcd divides");
        let num = self.num.mul(&b).add(&rhs.num.mul(&a));
        Expr::from_fraction(num, self.den.mul(&b)).expect("nonzero denominator")
    }
}

impl Sub for &Expr {
    type Output = Expr;
    fn sub(self, rhs: &Expr) -> Expr {
        self + &(-rhs)
    }
}

impl Mul for &Expr {
    type Output = Expr;
    fn mul(self, rhs: &Expr) -> Expr {
        if self.is_zero() || rhs.is_zero() {
            return Expr::zero();
        }
        if self.den.is_one() && rhs.den.is_one() {
            return Expr::from_poly(self.num.mul(&rhs.num));
        }
        let g1 = gcd(&self.num, &rhs.den);
        let g2 = gcd(&rhs.num, &self.den);
        let n1 = self.num.exact_div(&g1).expect("gcd divides");
        let d2 = rhs.den.exact_div(&g1).expect("gcd divides");
        let n2 = rhs.num.exact_div(&g2).expect("gcd divides");
        let d1 = self.den.exact_div(&g2).expect("gcd divides");
        Expr::monic_den(n1.mul(&n2), d1.mul(&d2))
    }
}

impl Div for &Expr {
    type Output = Expr;
    /// Panics on division by zero; use [`Expr::try_div`] for a checked quotient.
    fn div(self, rhs: &Expr) -> Expr {
        self.try_div(rhs).expect("division by the zero expression")
    }
}

impl Neg for &Expr {
    type Output = Expr;
    fn neg(self) -> Expr {
        Expr { num: self.num.neg(), den: self.den.clone() }
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr for Expr {
            type Output = Expr;
            fn $m(self, rhs: Expr) -> Expr {
                (&self).$m(&rhs)
            }
        }
        impl $tr<&Expr> for Expr {
            type Output = Expr;
            fn $m(self, rhs: &Expr) -> Expr {
                (&self).$m(rhs)
            }
        }
        impl $tr<Expr> for &Expr {
            type Output = Expr;
            fn $m(self, rhs: Expr) -> Expr {
                self.$m(&rhs)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);
forward_owned!(Div, div);

impl Neg for Expr {
    type Output = Expr;
    fn neg(self) -> Expr {
        -&self
    }
}

impl From<Atom> for Expr {
    fn from(a: Atom) -> Self {
        Expr::atom(a)
    }
}

impl From<i64> for Expr {
    fn from(n: i64) -> Self {
        Expr::int(n)
    }
}

// --- printing -------------------------------------------------------------

fn write_monomial(out: &mut String, m: &Monomial) {
    for (idx, (a, k)) in m.factors().iter().enumerate() {
        if idx > 0 {
            out.push('*');
        }
        out.push_str(&a.name());
        if *k > 1 {
            out.push('^');
            out.push_str(&alloc::format!("{}", k));
        }
    }
}

/// Renders a polynomial in the parser's grammar, leading term first.
pub fn poly_to_source(p: &Poly) -> String {
    if p.is_zero() {
        return String::from("0");
    }
    let mut out = String::new();
    for (idx, (m, c)) in p.terms().rev().enumerate() {
        let neg = c.is_negative_like();
        let mag = if neg { -c } else { c.clone() };
        match (idx == 0, neg) {
            (true, true) => out.push('-'),
            (true, false) => {}
            (false, true) => out.push_str(" - "),
            (false, false) => out.push_str(" + "),
        }
        if m.is_one() {
            out.push_str(&mag.to_source());
        } else {
            if !mag.is_one() {
                out.push_str(&mag.to_source());
                out.push('*');
            }
            write_monomial(&mut out, m);
        }
    }
    out
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let n = poly_to_source(&self.num);
        if self.den.is_one() {
            return write!(f, "{}", n);
        }
        let d = poly_to_source(&self.den);
        let n = if self.num.len() > 1 { alloc::format!("({})", n) } else { n };
        let d = if self.den.len() > 1 || d.contains('*') || d.contains('/') { alloc::format!("({})", d) } else { d };
        write!(f, "{}/{}", n, d)
    }
}
