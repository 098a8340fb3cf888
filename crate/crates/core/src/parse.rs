//! Recursive-descent parser for the expression grammar.
//!
//! ```text
//! expr   := term (('+' | '-') term)*
//! term   := unary (('*' | '/') unary)*
//! unary  := '-'? factor
//! factor := base ('^' signed-integer)?
//! base   := number | 'i' | identifier | 'exp' '(' expr ')' | '(' expr ')'
//! ```
//!
//! `^` binds tighter than unary minus, so `-x^2` is `-(x^2)`; `1/2*u` is
//! `(1/2)*u`. Numbers are integers or finite decimals, both read exactly.
//! Whitespace is insignificant. The printer in [`crate::expr`] emits this
//! same grammar.

use alloc::string::{String, ToString};
use alloc::sync::Arc;
use alloc::vec::Vec;
use core::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::atom::{Arg, Atom, FuncAtom, FuncName, Jet};
use crate::coeff::Coeff;
use crate::error::Error;
use crate::expr::Expr;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ParseErrorKind {
    Empty,
    UnknownIdentifier(String),
    OutOfScope(String),
    Syntax(String),
    UnsupportedExp,
    DivisionByZero,
    ExponentTooLarge,
}

/// A parse failure with a 1-based source position.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParseError {
    pub kind: ParseErrorKind,
    pub line: usize,
    pub column: usize,
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "line {}, column {}: ", self.line, self.column)?;
        match &self.kind {
            ParseErrorKind::Empty => write!(f, "empty expression"),
            ParseErrorKind::UnknownIdentifier(n) => write!(f, "unknown identifier `{}`", n),
            ParseErrorKind::OutOfScope(n) => {
                write!(f, "identifier `{}` is not allowed in this field", n)
            }
            ParseErrorKind::Syntax(m) => write!(f, "syntax error: {}", m),
            ParseErrorKind::UnsupportedExp => write!(f, "only exp(x) is supported"),
            ParseErrorKind::DivisionByZero => write!(f, "division by zero"),
            ParseErrorKind::ExponentTooLarge => write!(f, "exponent out of range"),
        }
    }
}

impl core::error::Error for ParseError {}

const MAX_EXPONENT: i64 = 64;

/// Names that may not be used as parameters.
pub fn is_reserved(name: &str) -> bool {
    matches!(name, "x" | "t" | "u" | "v" | "i" | "exp" | "F")
        || Jet::from_name(name).is_some()
        || FuncAtom::from_name(name).is_some()
        || FuncName::from_name(name.split('_').next().unwrap_or("")).is_some()
}

pub fn is_valid_param_name(name: &str) -> bool {
    let mut chars = name.chars();
    matches!(chars.next(), Some(c) if c.is_ascii_alphabetic())
        && chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
        && !is_reserved(name)
}

/// The set of atoms an expression field may mention.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Scope {
    args: [bool; 4],
    jets: bool,
    params: Vec<Arc<str>>,
    funcs: Vec<FuncName>,
    ode: bool,
}

impl Scope {
    pub fn empty() -> Self {
        Scope::default()
    }

    /// Every atom kind, with the given parameters.
    pub fn everything(params: &[Arc<str>]) -> Self {
        Scope::empty().with_args(&Arg::ALL).with_jets().with_params(params).with_funcs(&FuncName::ALL).with_ode()
    }

    pub fn with_args(mut self, args: &[Arg]) -> Self {
        for a in args {
            self.args[*a as usize] = true;
        }
        self
    }

    pub fn with_jets(mut self) -> Self {
        self.jets = true;
        self
    }

    pub fn with_params(mut self, params: &[Arc<str>]) -> Self {
        for p in params {
            if !self.params.contains(p) {
                self.params.push(p.clone());
            }
        }
        self
    }

    pub fn with_funcs(mut self, funcs: &[FuncName]) -> Self {
        for f in funcs {
            if !self.funcs.contains(f) {
                self.funcs.push(*f);
            }
        }
        self
    }

    pub fn with_ode(mut self) -> Self {
        self.ode = true;
        self
    }

    pub fn allows(&self, atom: &Atom) -> bool {
        match atom {
            Atom::X => self.args[0],
            Atom::T => self.args[1],
            Atom::U => self.args[2],
            Atom::V => self.args[3],
            Atom::Exp => self.args[0],
            Atom::Jet(_) => self.jets,
            Atom::Param(p) => self.params.contains(p),
            Atom::Func(fa) => self.funcs.contains(&fa.name),
            Atom::Ode(_) => self.ode,
        }
    }

    /// Resolves an identifier regardless of scope.
    fn resolve(&self, ident: &str) -> Option<Atom> {
        let atom = match ident {
            "x" => Atom::X,
            "t" => Atom::T,
            "u" => Atom::U,
            "v" => Atom::V,
            "F" => Atom::Ode(0),
            "F'" => Atom::Ode(1),
            "F''" => Atom::Ode(2),
            _ => {
                if let Some(j) = Jet::from_name(ident) {
                    Atom::Jet(j)
                } else if let Some(fa) = FuncAtom::from_name(ident) {
                    Atom::Func(fa)
                } else {
                    Atom::Param(self.params.iter().find(|p| &***p == ident)?.clone())
                }
            }
        };
        Some(atom)
    }
}

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Num(BigRational),
    Ident(String),
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    LParen,
    RParen,
    End,
}

struct Lexer<'a> {
    src: &'a str,
    toks: Vec<(Tok, usize)>,
}

impl<'a> Lexer<'a> {
    fn run(src: &'a str) -> Result<Vec<(Tok, usize)>, ParseError> {
        let mut lx = Lexer { src, toks: Vec::new() };
        let bytes = src.as_bytes();
        let mut i = 0;
        while i < bytes.len() {
            let c = bytes[i];
            let start = i;
            match c {
                b' ' | b'\t' | b'\n' | b'\r' => {
                    i += 1;
                    continue;
                }
                b'+' => lx.push(Tok::Plus, start),
                b'-' => lx.push(Tok::Minus, start),
                b'*' => lx.push(Tok::Star, start),
                b'/' => lx.push(Tok::Slash, start),
                b'^' => lx.push(Tok::Caret, start),
                b'(' => lx.push(Tok::LParen, start),
                b')' => lx.push(Tok::RParen, start),
                b'0'..=b'9' | b'.' => {
                    while i < bytes.len() && (bytes[i].is_ascii_digit() || bytes[i] == b'.') {
                        i += 1;
                    }
                    let num =
                        parse_number(&src[start..i]).ok_or_else(|| lx.error(start, syntax("malformed number")))?;
                    lx.toks.push((Tok::Num(num), start));
                    continue;
                }
                c if c.is_ascii_alphabetic() || c == b'_' => {
                    while i < bytes.len() && (bytes[i].is_ascii_alphanumeric() || bytes[i] == b'_') {
                        i += 1;
                    }
                    while i < bytes.len() && bytes[i] == b'\'' {
                        i += 1;
                    }
                    lx.toks.push((Tok::Ident(src[start..i].to_string()), start));
                    continue;
                }
                _ => {
                    let ch = src[start..].chars().next().unwrap_or('?');
                    return Err(
                        lx.error(start, ParseErrorKind::Syntax(alloc::format!("unexpected character `{}`", ch)))
                    );
                }
            }
            i += 1;
        }
        lx.toks.push((Tok::End, src.len()));
        Ok(lx.toks)
    }

    fn push(&mut self, t: Tok, pos: usize) {
        self.toks.push((t, pos));
    }

    fn error(&self, pos: usize, kind: ParseErrorKind) -> ParseError {
        error_at(self.src, pos, kind)
    }
}

fn syntax(msg: &str) -> ParseErrorKind {
    ParseErrorKind::Syntax(msg.to_string())
}

fn error_at(src: &str, pos: usize, kind: ParseErrorKind) -> ParseError {
    let before = &src[..pos.min(src.len())];
    let line = before.matches('\n').count() + 1;
    let column = before.rsplit('\n').next().map_or(0, |l| l.chars().count()) + 1;
    ParseError { kind, line, column }
}

fn parse_number(s: &str) -> Option<BigRational> {
    let (int, frac) = match s.split_once('.') {
        Some((a, b)) => (a, b),
        None => (s, ""),
    };
    if (int.is_empty() && frac.is_empty()) || frac.contains('.') {
        return None;
    }
    let digits = alloc::format!("{}{}", int, frac);
    let n: BigInt = digits.parse().ok()?;
    let mut d = BigInt::one();
    for _ in 0..frac.len() {
        d *= 10;
    }
    Some(BigRational::new(n, d))
}

struct Parser<'a> {
    src: &'a str,
    toks: Vec<(Tok, usize)>,
    pos: usize,
    scope: &'a Scope,
}

impl<'a> Parser<'a> {
    fn peek(&self) -> &Tok {
        &self.toks[self.pos].0
    }

    fn offset(&self) -> usize {
        self.toks[self.pos].1
    }

    fn bump(&mut self) -> (Tok, usize) {
        let t = self.toks[self.pos].clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        t
    }

    fn err(&self, pos: usize, kind: ParseErrorKind) -> ParseError {
        error_at(self.src, pos, kind)
    }

    fn expect(&mut self, t: Tok, what: &str) -> Result<(), ParseError> {
        if *self.peek() == t {
            self.bump();
            Ok(())
        } else {
            Err(self.err(self.offset(), ParseErrorKind::Syntax(alloc::format!("expected {}", what))))
        }
    }

    fn expr(&mut self) -> Result<Expr, ParseError> {
        let mut acc = self.term()?;
        loop {
            match self.peek() {
                Tok::Plus => {
                    self.bump();
                    acc = &acc + &self.term()?;
                }
                Tok::Minus => {
                    self.bump();
                    acc = &acc - &self.term()?;
                }
                _ => return Ok(acc),
            }
        }
    }

    fn term(&mut self) -> Result<Expr, ParseError> {
        let mut acc = self.unary()?;
        loop {
            match self.peek() {
                Tok::Star => {
                    self.bump();
                    acc = &acc * &self.unary()?;
                }
                Tok::Slash => {
                    let at = self.bump().1;
                    let rhs = self.unary()?;
                    acc = acc.try_div(&rhs).map_err(|_| self.err(at, ParseErrorKind::DivisionByZero))?;
                }
                _ => return Ok(acc),
            }
        }
    }

    fn unary(&mut self) -> Result<Expr, ParseError> {
        if *self.peek() == Tok::Minus {
            self.bump();
            return Ok(-self.factor()?);
        }
        self.factor()
    }

    fn factor(&mut self) -> Result<Expr, ParseError> {
        let base = self.base()?;
        if *self.peek() != Tok::Caret {
            return Ok(base);
        }
        let at = self.bump().1;
        let negative = match self.peek() {
            Tok::Minus => {
                self.bump();
                true
            }
            Tok::Plus => {
                self.bump();
                false
            }
            _ => false,
        };
        let (tok, npos) = self.bump();
        let k = match tok {
            Tok::Num(r) if r.is_integer() => r.to_integer(),
            _ => return Err(self.err(npos, syntax("expected an integer exponent"))),
        };
        let k: i64 = k
            .try_into()
            .ok()
            .filter(|k: &i64| *k <= MAX_EXPONENT)
            .ok_or_else(|| self.err(npos, ParseErrorKind::ExponentTooLarge))?;
        let k = if negative { -k } else { k };
        base.pow(k as i32).map_err(|_| self.err(at, ParseErrorKind::DivisionByZero))
    }

    fn base(&mut self) -> Result<Expr, ParseError> {
        let (tok, at) = self.bump();
        match tok {
            Tok::Num(r) => Ok(Expr::coeff(Coeff::new(r, BigRational::zero()))),
            Tok::LParen => {
                let e = self.expr()?;
                self.expect(Tok::RParen, "`)`")?;
                Ok(e)
            }
            Tok::Ident(name) => self.identifier(&name, at),
            Tok::End => Err(self.err(at, syntax("unexpected end of input"))),
            other => Err(self.err(at, ParseErrorKind::Syntax(alloc::format!("unexpected token {}", describe(&other))))),
        }
    }

    fn identifier(&mut self, name: &str, at: usize) -> Result<Expr, ParseError> {
        if name == "i" {
            return Ok(Expr::i());
        }
        if name == "exp" {
            self.expect(Tok::LParen, "`(` after exp")?;
            let arg = self.expr()?;
            self.expect(Tok::RParen, "`)`")?;
            if arg.is_zero() {
                return Ok(Expr::one());
            }
            if arg != Expr::atom(Atom::X) {
                return Err(self.err(at, ParseErrorKind::UnsupportedExp));
            }
            if !self.scope.allows(&Atom::Exp) {
                return Err(self.err(at, ParseErrorKind::OutOfScope(String::from("exp(x)"))));
            }
            return Ok(Expr::atom(Atom::Exp));
        }
        match self.scope.resolve(name) {
            Some(atom) if self.scope.allows(&atom) => Ok(Expr::atom(atom)),
            Some(_) => Err(self.err(at, ParseErrorKind::OutOfScope(name.to_string()))),
            None => Err(self.err(at, ParseErrorKind::UnknownIdentifier(name.to_string()))),
        }
    }
}

fn describe(t: &Tok) -> &'static str {
    match t {
        Tok::Num(_) => "number",
        Tok::Ident(_) => "identifier",
        Tok::Plus => "`+`",
        Tok::Minus => "`-`",
        Tok::Star => "`*`",
        Tok::Slash => "`/`",
        Tok::Caret => "`^`",
        Tok::LParen => "`(`",
        Tok::RParen => "`)`",
        Tok::End => "end of input",
    }
}

/// Parses `text` into a canonical expression, rejecting atoms outside `scope`.
pub fn parse_expr(text: &str, scope: &Scope) -> Result<Expr, ParseError> {
    if text.trim().is_empty() {
        return Err(error_at(text, 0, ParseErrorKind::Empty));
    }
    let toks = Lexer::run(text)?;
    let mut p = Parser { src: text, toks, pos: 0, scope };
    let e = p.expr()?;
    if *p.peek() != Tok::End {
        let at = p.offset();
        return Err(p.err(at, syntax("unexpected trailing input")));
    }
    Ok(e)
}

/// Parses with a scope of every atom kind; convenient for tests and tools.
pub fn parse_any(text: &str, params: &[&str]) -> Result<Expr, Error> {
    let params: Vec<Arc<str>> = params.iter().map(|p| Arc::from(*p)).collect();
    Ok(parse_expr(text, &Scope::everything(&params))?)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn all(params: &[&str]) -> Scope {
        let ps: Vec<Arc<str>> = params.iter().map(|p| Arc::from(*p)).collect();
        Scope::everything(&ps)
    }

    fn p(s: &str) -> Expr {
        parse_expr(s, &all(&["a"])).unwrap()
    }

    #[test]
    fn precedence() {
        assert_eq!(p("-x^2"), -(p("x") * p("x")));
        assert_eq!(p("1/2*u"), p("u") * Expr::ratio(1, 2));
        assert_eq!(p("2^-1"), Expr::ratio(1, 2));
        assert_eq!(p("u_x^0"), Expr::one());
        assert_eq!(p("a*-u"), -(p("a") * p("u")));
        assert_eq!(p("0.25"), Expr::ratio(1, 4));
    }

    #[test]
    fn sample_inputs() {
        let e = p("a*(u^2/2 + exp(x))");
        let expect = p("a") * (p("u") * p("u") * Expr::ratio(1, 2) + Expr::atom(Atom::Exp));
        assert_eq!(e, expect);
        let s = Scope::empty().with_args(&[Arg::X, Arg::T, Arg::U]).with_jets().with_funcs(&[FuncName::F]);
        let e = parse_expr("v_x - f*u_t", &s).unwrap();
        assert_eq!(
            e,
            Expr::atom(Atom::Jet(Jet::Vx)) - Expr::atom(Atom::func(FuncName::F)) * Expr::atom(Atom::Jet(Jet::Ut))
        );
        assert_eq!(p("i^2"), Expr::int(-1));
        assert_eq!(p("g_ux"), p("g_xu"));
        assert_eq!(p("u_tx"), p("u_xt"));
        assert_eq!(p("exp(0)"), Expr::one());
    }

    #[test]
    fn errors_carry_positions() {
        let e = parse_expr("x + \n  foo", &all(&[])).unwrap_err();
        assert_eq!(e.kind, ParseErrorKind::UnknownIdentifier("foo".into()));
        assert_eq!((e.line, e.column), (2, 3));

        let f_scope = Scope::empty().with_args(&[Arg::X]);
        let e = parse_expr("x*t", &f_scope).unwrap_err();
        assert_eq!(e.kind, ParseErrorKind::OutOfScope("t".into()));
        assert_eq!(e.column, 3);

        let e = parse_expr("(x + 1", &all(&[])).unwrap_err();
        assert!(matches!(e.kind, ParseErrorKind::Syntax(_)));
        assert_eq!(e.column, 7);

        assert_eq!(parse_expr("  ", &all(&[])).unwrap_err().kind, ParseErrorKind::Empty);
        assert_eq!(parse_expr("1/(x-x)", &all(&[])).unwrap_err().kind, ParseErrorKind::DivisionByZero);
        assert_eq!(parse_expr("exp(t)", &all(&[])).unwrap_err().kind, ParseErrorKind::UnsupportedExp);
        assert!(matches!(parse_expr("x^1.5", &all(&[])).unwrap_err().kind, ParseErrorKind::Syntax(_)));
        assert!(matches!(parse_expr("x $ 2", &all(&[])).unwrap_err().kind, ParseErrorKind::Syntax(_)));
        assert_eq!(parse_expr("x^1000", &all(&[])).unwrap_err().kind, ParseErrorKind::ExponentTooLarge);
        assert!(parse_expr("x y", &all(&[])).is_err());
    }

    #[test]
    fn param_names() {
        assert!(is_valid_param_name("a"));
        assert!(is_valid_param_name("c1"));
        assert!(!is_valid_param_name("x"));
        assert!(!is_valid_param_name("g_u"));
        assert!(!is_valid_param_name("xi"));
        assert!(!is_valid_param_name("i"));
        assert!(!is_valid_param_name("1a"));
    }

    #[test]
    fn printer_round_trips() {
        for s in [
            "a*(u^2/2 + exp(x))",
            "F'^2 + F*F'' + F'",
            "(1 + 2*i)*u_x - 3/4*i*x*u^2 + g_xu",
            "x/(x*u + 1)",
            "-u/(2*x^2)",
            "exp(x)^2/(u - t)",
        ] {
            let e = p(s);
            let back = p(&e.to_string());
            assert_eq!(e, back, "{} printed as {}", s, e);
        }
        assert_eq!(p("F'^2 + F*F'' + F'").to_string(), "F'^2 + F*F'' + F'");
    }
}
