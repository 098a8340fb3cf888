//! Sparse multivariate polynomials over Q(i).
//!
//! Monomials are ordered by graded reverse lexicographic order over the atom
//! order of [`Atom`]: higher total degree first; on ties the monomial with
//! the smaller exponent in the largest atom where they differ is larger.
//! Terms are kept in a `BTreeMap` sorted by this order, so the leading term
//! is the last entry.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::vec::Vec;
use core::cmp::Ordering;

use crate::atom::Atom;
use crate::coeff::Coeff;

/// A power product of atoms, sorted by atom with positive exponents.
#[derive(Clone, PartialEq, Eq, Hash, Debug, Default)]
pub struct Monomial(Vec<(Atom, u32)>);

impl Monomial {
    pub fn one() -> Self {
        Monomial(Vec::new())
    }

    pub fn atom(a: Atom) -> Self {
        Monomial(alloc::vec![(a, 1)])
    }

    pub fn pow(a: Atom, k: u32) -> Self {
        if k == 0 {
            Monomial::one()
        } else {
            Monomial(alloc::vec![(a, k)])
        }
    }

    /// Builds a monomial from arbitrary (atom, exponent) pairs.
    pub fn from_pairs<I: IntoIterator<Item = (Atom, u32)>>(pairs: I) -> Self {
        let mut m: BTreeMap<Atom, u32> = BTreeMap::new();
        for (a, k) in pairs {
            if k > 0 {
                *m.entry(a).or_insert(0) += k;
            }
        }
        Monomial(m.into_iter().collect())
    }

    pub fn is_one(&self) -> bool {
        self.0.is_empty()
    }

    pub fn factors(&self) -> &[(Atom, u32)] {
        &self.0
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().map(|(_, k)| *k).sum()
    }

    pub fn degree_in(&self, a: &Atom) -> u32 {
        self.0.binary_search_by(|(b, _)| b.cmp(a)).map(|i| self.0[i].1).unwrap_or(0)
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        let mut out = Vec::with_capacity(self.0.len() + other.0.len());
        let (mut i, mut j) = (0, 0);
        while i < self.0.len() && j < other.0.len() {
            match self.0[i].0.cmp(&other.0[j].0) {
                Ordering::Less => {
                    out.push(self.0[i].clone());
                    i += 1;
                }
                Ordering::Greater => {
                    out.push(other.0[j].clone());
                    j += 1;
                }
                Ordering::Equal => {
                    out.push((self.0[i].0.clone(), self.0[i].1 + other.0[j].1));
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend_from_slice(&self.0[i..]);
        out.extend_from_slice(&other.0[j..]);
        Monomial(out)
    }

    /// `self / other` if `other` divides `self`.
    pub fn div(&self, other: &Monomial) -> Option<Monomial> {
        let mut out = Vec::with_capacity(self.0.len());
        let mut j = 0;
        for (a, k) in &self.0 {
            if j < other.0.len() && other.0[j].0 < *a {
                return None;
            }
            if j < other.0.len() && other.0[j].0 == *a {
                let e = other.0[j].1;
                j += 1;
                match k.cmp(&e) {
                    Ordering::Less => return None,
                    Ordering::Equal => continue,
                    Ordering::Greater => out.push((a.clone(), k - e)),
                }
            } else {
                out.push((a.clone(), *k));
            }
        }
        if j < other.0.len() {
            return None;
        }
        Some(Monomial(out))
    }

    /// Componentwise minimum of exponents.
    pub fn gcd(&self, other: &Monomial) -> Monomial {
        let mut out = Vec::new();
        for (a, k) in &self.0 {
            let e = other.degree_in(a);
            if e > 0 {
                out.push((a.clone(), (*k).min(e)));
            }
        }
        Monomial(out)
    }

    /// Removes `a` from the monomial, returning its exponent and the rest.
    pub fn split_off(&self, a: &Atom) -> (u32, Monomial) {
        let mut rest = Vec::with_capacity(self.0.len());
        let mut k = 0;
        for (b, e) in &self.0 {
            if b == a {
                k = *e;
            } else {
                rest.push((b.clone(), *e));
            }
        }
        (k, Monomial(rest))
    }

    /// Keeps only the atoms selected by `keep`; returns (kept, dropped).
    pub fn partition<F: Fn(&Atom) -> bool>(&self, keep: F) -> (Monomial, Monomial) {
        let (a, b): (Vec<_>, Vec<_>) = self.0.iter().cloned().partition(|(x, _)| keep(x));
        (Monomial(a), Monomial(b))
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        match self.degree().cmp(&other.degree()) {
            Ordering::Equal => {}
            o => return o,
        }
        let (mut i, mut j) = (self.0.len(), other.0.len());
        while i > 0 && j > 0 {
            let (a, ea) = &self.0[i - 1];
            let (b, eb) = &other.0[j - 1];
            match a.cmp(b) {
                Ordering::Greater => return Ordering::Less,
                Ordering::Less => return Ordering::Greater,
                Ordering::Equal => {
                    if ea != eb {
                        return eb.cmp(ea);
                    }
                    i -= 1;
                    j -= 1;
                }
            }
        }
        i.cmp(&j)
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// A polynomial: a finite map from monomials to nonzero coefficients.
#[derive(Clone, PartialEq, Eq, Hash, Debug, Default)]
pub struct Poly {
    terms: BTreeMap<Monomial, Coeff>,
}

impl Poly {
    pub fn zero() -> Self {
        Poly { terms: BTreeMap::new() }
    }

    pub fn one() -> Self {
        Poly::constant(Coeff::one())
    }

    pub fn constant(c: Coeff) -> Self {
        Poly::term(Monomial::one(), c)
    }

    pub fn term(m: Monomial, c: Coeff) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(m, c);
        }
        Poly { terms }
    }

    pub fn atom(a: Atom) -> Self {
        Poly::term(Monomial::atom(a), Coeff::one())
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.as_constant().is_some_and(|c| c.is_one())
    }

    /// The constant value if the polynomial has no atoms (zero included).
    pub fn as_constant(&self) -> Option<Coeff> {
        match self.terms.len() {
            0 => Some(Coeff::zero()),
            1 => {
                let (m, c) = self.terms.iter().next().unwrap();
                m.is_one().then(|| c.clone())
            }
            _ => None,
        }
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Terms in ascending monomial order.
    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Monomial, &Coeff)> {
        self.terms.iter()
    }

    pub fn leading(&self) -> Option<(&Monomial, &Coeff)> {
        self.terms.iter().next_back()
    }

    pub fn atoms(&self) -> BTreeSet<Atom> {
        let mut s = BTreeSet::new();
        for m in self.terms.keys() {
            for (a, _) in m.factors() {
                s.insert(a.clone());
            }
        }
        s
    }

    pub fn contains_atom(&self, a: &Atom) -> bool {
        self.terms.keys().any(|m| m.degree_in(a) > 0)
    }

    pub fn contains_where<F: Fn(&Atom) -> bool>(&self, pred: F) -> bool {
        self.terms.keys().any(|m| m.factors().iter().any(|(a, _)| pred(a)))
    }

    pub fn degree_in(&self, a: &Atom) -> u32 {
        self.terms.keys().map(|m| m.degree_in(a)).max().unwrap_or(0)
    }

    pub fn total_degree(&self) -> u32 {
        self.terms.keys().map(Monomial::degree).max().unwrap_or(0)
    }

    fn add_term(&mut self, m: Monomial, c: Coeff) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            alloc::collections::btree_map::Entry::Vacant(e) => {
                e.insert(c);
            }
            alloc::collections::btree_map::Entry::Occupied(mut e) => {
                let s = e.get() + &c;
                if s.is_zero() {
                    e.remove();
                } else {
                    *e.get_mut() = s;
                }
            }
        }
    }

    /// `self += c·m·other`
    fn add_scaled(&mut self, other: &Poly, c: &Coeff, m: &Monomial) {
        for (om, oc) in &other.terms {
            self.add_term(om.mul(m), oc * c);
        }
    }

    pub fn add(&self, other: &Poly) -> Poly {
        let (mut big, small) = if self.len() >= other.len() { (self.clone(), other) } else { (other.clone(), self) };
        for (m, c) in &small.terms {
            big.add_term(m.clone(), c.clone());
        }
        big
    }

    pub fn sub(&self, other: &Poly) -> Poly {
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), -c);
        }
        out
    }

    pub fn neg(&self) -> Poly {
        Poly { terms: self.terms.iter().map(|(m, c)| (m.clone(), -c)).collect() }
    }

    pub fn mul(&self, other: &Poly) -> Poly {
        if self.is_zero() || other.is_zero() {
            return Poly::zero();
        }
        let mut out = Poly::zero();
        for (m, c) in &self.terms {
            out.add_scaled(other, c, m);
        }
        out
    }

    pub fn scale(&self, c: &Coeff) -> Poly {
        if c.is_zero() {
            return Poly::zero();
        }
        Poly { terms: self.terms.iter().map(|(m, k)| (m.clone(), k * c)).collect() }
    }

    pub fn mul_monomial(&self, m: &Monomial) -> Poly {
        Poly { terms: self.terms.iter().map(|(k, c)| (k.mul(m), c.clone())).collect() }
    }

    pub fn pow(&self, mut k: u32) -> Poly {
        let mut base = self.clone();
        let mut acc = Poly::one();
        while k > 0 {
            if k & 1 == 1 {
                acc = acc.mul(&base);
            }
            k >>= 1;
            if k > 0 {
                base = base.mul(&base);
            }
        }
        acc
    }

    /// Divides by the leading coefficient. Returns the polynomial unchanged
    /// when zero.
    pub fn monic(&self) -> Poly {
        match self.leading() {
            Some((_, c)) if !c.is_one() => {
                let inv = c.inv().expect("nonzero leading coefficient");
                self.scale(&inv)
            }
            _ => self.clone(),
        }
    }

    /// Coefficients of `self` viewed as a univariate polynomial in `a`.
    pub fn coefficients_in(&self, a: &Atom) -> BTreeMap<u32, Poly> {
        let mut out: BTreeMap<u32, Poly> = BTreeMap::new();
        for (m, c) in &self.terms {
            let (k, rest) = m.split_off(a);
            out.entry(k).or_default().add_term(rest, c.clone());
        }
        out.retain(|_, p| !p.is_zero());
        out
    }

    /// Inverse of [`Poly::coefficients_in`].
    pub fn from_coefficients_in(a: &Atom, coeffs: &BTreeMap<u32, Poly>) -> Poly {
        let mut out = Poly::zero();
        for (k, p) in coeffs {
            out.add_scaled(p, &Coeff::one(), &Monomial::pow(a.clone(), *k));
        }
        out
    }

    /// Leading coefficient in `a` (a polynomial free of `a`).
    fn lead_in(&self, a: &Atom) -> (u32, Poly) {
        self.coefficients_in(a).into_iter().next_back().unwrap_or((0, Poly::zero()))
    }

    /// Exact quotient `self / d`, or `None` if `d` does not divide `self`.
    pub fn exact_div(&self, d: &Poly) -> Option<Poly> {
        let (dm, dc) = d.leading()?;
        if let Some(c) = d.as_constant() {
            return Some(self.scale(&c.inv()?));
        }
        let dinv = dc.inv()?;
        let mut rem = self.clone();
        let mut q = Poly::zero();
        while let Some((lm, lc)) = rem.leading() {
            let m = lm.div(dm)?;
            let c = lc * &dinv;
            rem.add_scaled(d, &-&c, &m);
            q.add_term(m, c);
        }
        Some(q)
    }

    /// Formal partial derivative, given the derivative rule of each atom.
    pub fn diff(&self, dir: &Atom) -> Poly {
        let mut out = Poly::zero();
        for (m, c) in &self.terms {
            for (idx, (a, k)) in m.factors().iter().enumerate() {
                let da = match a.partial(dir) {
                    None => continue,
                    Some(Ok(atom)) => Some(atom),
                    Some(Err(())) => None,
                };
                let mut pairs: Vec<(Atom, u32)> = m.factors().to_vec();
                pairs[idx].1 -= 1;
                if let Some(atom) = da {
                    pairs.push((atom, 1));
                }
                out.add_term(Monomial::from_pairs(pairs), c * &Coeff::from_int(*k as i64));
            }
        }
        out
    }

    pub fn map_coeffs<F: Fn(&Coeff) -> Coeff>(&self, f: F) -> Poly {
        let mut out = Poly::zero();
        for (m, c) in &self.terms {
            out.add_term(m.clone(), f(c));
        }
        out
    }

    pub(crate) fn from_terms<I: IntoIterator<Item = (Monomial, Coeff)>>(it: I) -> Poly {
        let mut out = Poly::zero();
        for (m, c) in it {
            out.add_term(m, c);
        }
        out
    }
}

/// Monic greatest common divisor. `gcd(0, 0) = 0`.
pub fn gcd(a: &Poly, b: &Poly) -> Poly {
    if a.is_zero() {
        return b.monic();
    }
    if b.is_zero() {
        return a.monic();
    }
    if a.as_constant().is_some() || b.as_constant().is_some() {
        return Poly::one();
    }
    if a == b {
        return a.monic();
    }
    if a.len() == 1 || b.len() == 1 {
        let (mono, other) = if a.len() == 1 { (a, b) } else { (b, a) };
        let mut g = mono.leading().unwrap().0.clone();
        for (m, _) in other.terms() {
            g = g.gcd(m);
            if g.is_one() {
                break;
            }
        }
        return Poly::term(g, Coeff::one());
    }
    let aa = a.atoms();
    let ba = b.atoms();
    if aa.is_disjoint(&ba) {
        return Poly::one();
    }
    // An atom that appears in only one argument cannot appear in the gcd.
    if let Some(var) = aa.iter().find(|v| !ba.contains(*v)) {
        return gcd_with_content(a, var, b);
    }
    if let Some(var) = ba.iter().find(|v| !aa.contains(*v)) {
        return gcd_with_content(b, var, a);
    }
    // Same atom set: eliminate the atom of smallest maximal degree.
    let var = aa.iter().min_by_key(|v| a.degree_in(v).max(b.degree_in(v))).unwrap().clone();
    gcd_prs(a, b, &var)
}

/// `gcd(a, b)` where `b` does not contain `var`: the gcd of `b` and every
/// coefficient of `a` in `var`.
fn gcd_with_content(a: &Poly, var: &Atom, b: &Poly) -> Poly {
    let mut g = b.monic();
    for c in a.coefficients_in(var).values() {
        g = gcd(c, &g);
        if g.is_one() {
            break;
        }
    }
    g
}

fn content_in(p: &Poly, var: &Atom) -> Poly {
    let mut g = Poly::zero();
    for c in p.coefficients_in(var).values() {
        g = gcd(c, &g);
        if g.is_one() {
            break;
        }
    }
    g
}

fn primitive_part(p: &Poly, var: &Atom) -> Poly {
    let c = content_in(p, var);
    p.exact_div(&c).expect("content divides")
}

/// Pseudo-remainder of `p` by `q` with respect to `var`.
fn prem(p: &Poly, q: &Poly, var: &Atom) -> Poly {
    let (dq, lq) = q.lead_in(var);
    let mut r = p.clone();
    loop {
        let (dr, lr) = r.lead_in(var);
        if r.is_zero() || dr < dq {
            return r;
        }
        let shift = Monomial::pow(var.clone(), dr - dq);
        r = r.mul(&lq).sub(&q.mul(&lr).mul_monomial(&shift));
    }
}

/// Primitive polynomial remainder sequence in `var`.
fn gcd_prs(a: &Poly, b: &Poly, var: &Atom) -> Poly {
    let ca = content_in(a, var);
    let cb = content_in(b, var);
    let c = gcd(&ca, &cb);
    let mut p = a.exact_div(&ca).expect("content divides");
    let mut q = b.exact_div(&cb).expect("content divides");
    if p.degree_in(var) < q.degree_in(var) {
        core::mem::swap(&mut p, &mut q);
    }
    let g = loop {
        let r = prem(&p, &q, var);
        if r.is_zero() {
            break q;
        }
        if r.degree_in(var) == 0 {
            break Poly::one();
        }
        p = q;
        q = primitive_part(&r, var);
    };
    c.mul(&g).monic()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn x() -> Poly {
        Poly::atom(Atom::X)
    }
    fn u() -> Poly {
        Poly::atom(Atom::U)
    }
    fn int(n: i64) -> Poly {
        Poly::constant(Coeff::from_int(n))
    }

    #[test]
    fn grevlex_order() {
        let x = Atom::X;
        let u = Atom::U;
        // total degree dominates
        assert!(Monomial::pow(x.clone(), 3) > Monomial::from_pairs([(x.clone(), 1), (u.clone(), 1)]));
        // ties: smaller exponent in the largest atom wins
        let xu = Monomial::from_pairs([(x.clone(), 1), (u.clone(), 1)]);
        let x2 = Monomial::pow(x.clone(), 2);
        let u2 = Monomial::pow(u.clone(), 2);
        assert!(x2 > xu && xu > u2);
        assert!(Monomial::atom(x) > Monomial::one());
    }

    #[test]
    fn ode_terms_order_as_written() {
        let f0 = Atom::Ode(0);
        let f1 = Atom::Ode(1);
        let f2 = Atom::Ode(2);
        let a = Monomial::pow(f1.clone(), 2);
        let b = Monomial::from_pairs([(f0, 1), (f2, 1)]);
        assert!(a > b && b > Monomial::atom(f1));
    }

    #[test]
    fn monomial_division() {
        let a = Monomial::from_pairs([(Atom::X, 2), (Atom::U, 1)]);
        let b = Monomial::from_pairs([(Atom::X, 1)]);
        assert_eq!(a.div(&b), Some(Monomial::from_pairs([(Atom::X, 1), (Atom::U, 1)])));
        assert_eq!(b.div(&a), None);
        assert_eq!(Monomial::atom(Atom::T).div(&Monomial::atom(Atom::X)), None);
    }

    #[test]
    fn exact_division_and_gcd() {
        // (u^2 - 4) / (u - 2) = u + 2
        let num = u().mul(&u()).sub(&int(4));
        let den = u().sub(&int(2));
        assert_eq!(num.exact_div(&den), Some(u().add(&int(2))));
        assert_eq!(gcd(&num, &den), den);
        assert_eq!(den.exact_div(&num), None);
    }

    #[test]
    fn multivariate_gcd() {
        let p = x().add(&u());
        let q = x().sub(&u());
        let r = x().mul(&u()).add(&int(1));
        let a = p.mul(&q).mul(&r);
        let b = p.mul(&r).mul(&r).mul(&x());
        assert_eq!(gcd(&a, &b), p.mul(&r).monic());
        assert_eq!(gcd(&p, &q), Poly::one());
    }

    #[test]
    fn gcd_with_constant_coefficient_scaling() {
        let a = x().scale(&Coeff::from_int(6)).add(&int(3));
        let b = x().scale(&Coeff::ratio(1, 2)).add(&Coeff::ratio(1, 4).into_poly());
        // both are multiples of 2x + 1
        assert_eq!(gcd(&a, &b), x().add(&Poly::constant(Coeff::ratio(1, 2))));
    }

    impl Coeff {
        fn into_poly(self) -> Poly {
            Poly::constant(self)
        }
    }
}
