//! Text form of polynomials and polynomial systems.
//!
//! Grammar (whitespace is insignificant):
//!
//! ```text
//! expr   := term (('+' | '-') term)*
//! term   := unary ('*' unary)*
//! unary  := '-' unary | '+' unary | power
//! power  := atom ('^' integer)?
//! atom   := integer ('/' integer)? | variable | '(' expr ')'
//! ```
//!
//! System files start with a `vars: x, y, z` line; every following
//! non-empty line not starting with `#` holds one polynomial.

use std::cmp::Ordering;
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;
use thiserror::Error;

use super::{MonomialOrder, PolySystem, Polynomial};
use crate::scalar::{Rational, Scalar};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub struct ParseError {
    /// 1-based line number, for system files.
    pub line: Option<usize>,
    /// 1-based column of the offending character.
    pub column: usize,
    pub message: String,
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.line {
            Some(l) => write!(f, "line {}, column {}: {}", l, self.column, self.message),
            None => write!(f, "column {}: {}", self.column, self.message),
        }
    }
}

/// `x1, x2, …, xn`.
pub fn default_names(nvars: usize) -> Vec<String> {
    (1..=nvars).map(|i| format!("x{i}")).collect()
}

pub fn parse_polynomial(s: &str, names: &[String]) -> Result<Polynomial<Rational>, ParseError> {
    let mut p = Parser {
        chars: s.chars().collect(),
        pos: 0,
        names,
    };
    p.skip_ws();
    if p.peek().is_none() {
        return Err(p.error("empty polynomial"));
    }
    let poly = p.expr()?;
    p.skip_ws();
    if p.peek().is_some() {
        return Err(p.error("unexpected character"));
    }
    Ok(poly)
}

struct Parser<'a> {
    chars: Vec<char>,
    pos: usize,
    names: &'a [String],
}

impl Parser<'_> {
    fn error(&self, msg: &str) -> ParseError {
        ParseError {
            line: None,
            column: self.pos + 1,
            message: msg.to_string(),
        }
    }

    fn skip_ws(&mut self) {
        while self.chars.get(self.pos).is_some_and(|c| c.is_whitespace()) {
            self.pos += 1;
        }
    }

    fn peek(&self) -> Option<char> {
        self.chars.get(self.pos).copied()
    }

    fn eat(&mut self, c: char) -> bool {
        self.skip_ws();
        if self.peek() == Some(c) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn nvars(&self) -> usize {
        self.names.len()
    }

    fn expr(&mut self) -> Result<Polynomial<Rational>, ParseError> {
        let mut acc = self.term()?;
        loop {
            if self.eat('+') {
                acc = &acc + &self.term()?;
            } else if self.eat('-') {
                acc = &acc - &self.term()?;
            } else {
                return Ok(acc);
            }
        }
    }

    fn term(&mut self) -> Result<Polynomial<Rational>, ParseError> {
        let mut acc = self.unary()?;
        while self.eat('*') {
            let rhs = self.unary()?;
            acc = acc.try_mul(&rhs).map_err(|e| self.error(&e.to_string()))?;
        }
        Ok(acc)
    }

    fn unary(&mut self) -> Result<Polynomial<Rational>, ParseError> {
        if self.eat('-') {
            return Ok(-self.unary()?);
        }
        if self.eat('+') {
            return self.unary();
        }
        self.power()
    }

    fn power(&mut self) -> Result<Polynomial<Rational>, ParseError> {
        let base = self.atom()?;
        if self.eat('^') {
            self.skip_ws();
            let start = self.pos;
            let e = self.integer()?;
            let e: u32 = e
                .try_into()
                .map_err(|_| ParseError { line: None, column: start + 1, message: "exponent too large".into() })?;
            return base.pow(e).map_err(|err| self.error(&err.to_string()));
        }
        Ok(base)
    }

    fn integer(&mut self) -> Result<BigInt, ParseError> {
        self.skip_ws();
        let start = self.pos;
        while self.peek().is_some_and(|c| c.is_ascii_digit()) {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(self.error("expected integer"));
        }
        let s: String = self.chars[start..self.pos].iter().collect();
        Ok(s.parse().expect("digits parse as integer"))
    }

    fn atom(&mut self) -> Result<Polynomial<Rational>, ParseError> {
        self.skip_ws();
        let n = self.nvars();
        match self.peek() {
            Some(c) if c.is_ascii_digit() => {
                let num = self.integer()?;
                let save = self.pos;
                if self.eat('/') {
                    self.skip_ws();
                    if self.peek().is_some_and(|c| c.is_ascii_digit()) {
                        let den_pos = self.pos;
                        let den = self.integer()?;
                        if den.is_zero() {
                            return Err(ParseError { line: None, column: den_pos + 1, message: "zero denominator".into() });
                        }
                        return Ok(Polynomial::constant(n, BigRational::new(num, den)));
                    }
                    self.pos = save;
                    return Err(self.error("expected integer denominator"));
                }
                Ok(Polynomial::constant(n, BigRational::from_integer(num)))
            }
            Some(c) if c.is_alphabetic() || c == '_' => {
                let start = self.pos;
                while self
                    .peek()
                    .is_some_and(|c| c.is_alphanumeric() || c == '_' || c == '[' || c == ']')
                {
                    self.pos += 1;
                }
                let name: String = self.chars[start..self.pos].iter().collect();
                match self.names.iter().position(|v| *v == name) {
                    Some(i) => Ok(Polynomial::var(n, i)),
                    None => Err(ParseError {
                        line: None,
                        column: start + 1,
                        message: format!("unknown variable `{name}`"),
                    }),
                }
            }
            Some('(') => {
                self.pos += 1;
                let inner = self.expr()?;
                if !self.eat(')') {
                    return Err(self.error("expected `)`"));
                }
                Ok(inner)
            }
            Some(_) => Err(self.error("unexpected character")),
            None => Err(self.error("unexpected end of input")),
        }
    }
}

/// Terms in grlex-descending order for the declared variable precedence.
fn canonical_terms<C: Scalar>(p: &Polynomial<C>) -> Vec<(&super::Monomial, &C)> {
    let ord = MonomialOrder::grlex(p.nvars());
    let mut terms: Vec<_> = p.terms().collect();
    terms.sort_by(|a, b| match ord.cmp(a.0, b.0) {
        Ordering::Less => Ordering::Greater,
        Ordering::Greater => Ordering::Less,
        Ordering::Equal => Ordering::Equal,
    });
    terms
}

pub(crate) fn format_generic<C: Scalar>(p: &Polynomial<C>, names: &[String]) -> String {
    if p.is_zero() {
        return "0".to_string();
    }
    let mut out = String::new();
    for (i, (m, c)) in canonical_terms(p).into_iter().enumerate() {
        let (neg, abs) = c.sign_and_abs_text();
        match (i, neg) {
            (0, true) => out.push('-'),
            (0, false) => {}
            (_, true) => out.push_str(" - "),
            (_, false) => out.push_str(" + "),
        }
        if m.is_one() {
            out.push_str(&abs);
        } else if abs == "1" {
            out.push_str(&m.to_text(names));
        } else {
            out.push_str(&abs);
            out.push('*');
            out.push_str(&m.to_text(names));
        }
    }
    out
}

/// Canonical text: grlex-descending terms, explicit `*` and `^`.
pub fn format_polynomial(p: &Polynomial<Rational>, names: &[String]) -> String {
    format_generic(p, names)
}

/// A parsed system file.
#[derive(Clone, Debug, PartialEq)]
pub struct SystemFile {
    pub system: PolySystem<Rational>,
    /// 1-based source line of each polynomial.
    pub lines: Vec<usize>,
}

pub fn parse_system(text: &str) -> Result<SystemFile, ParseError> {
    let mut vars: Option<Vec<String>> = None;
    let mut polys = Vec::new();
    let mut lines = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let lineno = idx + 1;
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        match &vars {
            None => {
                let rest = line.strip_prefix("vars:").ok_or(ParseError {
                    line: Some(lineno),
                    column: 1,
                    message: "expected `vars:` header".into(),
                })?;
                let names: Vec<String> = rest
                    .split(',')
                    .map(|s| s.trim().to_string())
                    .filter(|s| !s.is_empty())
                    .collect();
                if names.is_empty() {
                    return Err(ParseError { line: Some(lineno), column: 6, message: "no variables declared".into() });
                }
                for (i, n) in names.iter().enumerate() {
                    let ok = n.chars().next().is_some_and(|c| c.is_alphabetic() || c == '_')
                        && n.chars().all(|c| c.is_alphanumeric() || c == '_' || c == '[' || c == ']');
                    if !ok || names[..i].contains(n) {
                        return Err(ParseError {
                            line: Some(lineno),
                            column: 1,
                            message: format!("invalid or repeated variable name `{n}`"),
                        });
                    }
                }
                vars = Some(names);
            }
            Some(names) => {
                let offset = raw.len() - raw.trim_start().len();
                let p = parse_polynomial(line, names).map_err(|mut e| {
                    e.line = Some(lineno);
                    e.column += offset;
                    e
                })?;
                polys.push(p);
                lines.push(lineno);
            }
        }
    }
    let vars = vars.ok_or(ParseError { line: None, column: 1, message: "missing `vars:` header".into() })?;
    if polys.is_empty() {
        return Err(ParseError { line: None, column: 1, message: "system has no polynomials".into() });
    }
    let system = PolySystem::new(vars, polys).map_err(|e| ParseError { line: None, column: 1, message: e.to_string() })?;
    Ok(SystemFile { system, lines })
}
