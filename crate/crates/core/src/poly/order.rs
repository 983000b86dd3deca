use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use super::{Monomial, PolyError};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum OrderKind {
    Lex,
    Grlex,
    Grevlex,
}

impl FromStr for OrderKind {
    type Err = PolyError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "lex" => Ok(OrderKind::Lex),
            "grlex" => Ok(OrderKind::Grlex),
            "grevlex" => Ok(OrderKind::Grevlex),
            other => Err(PolyError::UnknownOrder(other.to_string())),
        }
    }
}

impl fmt::Display for OrderKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            OrderKind::Lex => "lex",
            OrderKind::Grlex => "grlex",
            OrderKind::Grevlex => "grevlex",
        })
    }
}

/// A monomial order together with a variable precedence.
///
/// `precedence[0]` is the index of the most significant variable. The
/// identity precedence gives `x1 ≻ x2 ≻ … ≻ xn`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct MonomialOrder {
    kind: OrderKind,
    precedence: Vec<usize>,
}

impl MonomialOrder {
    pub fn new(kind: OrderKind, nvars: usize) -> Self {
        MonomialOrder {
            kind,
            precedence: (0..nvars).collect(),
        }
    }

    pub fn with_precedence(kind: OrderKind, precedence: Vec<usize>) -> Result<Self, PolyError> {
        let mut seen = vec![false; precedence.len()];
        for &p in &precedence {
            if p >= seen.len() || seen[p] {
                return Err(PolyError::BadPrecedence);
            }
            seen[p] = true;
        }
        Ok(MonomialOrder { kind, precedence })
    }

    pub fn lex(nvars: usize) -> Self {
        Self::new(OrderKind::Lex, nvars)
    }

    pub fn grlex(nvars: usize) -> Self {
        Self::new(OrderKind::Grlex, nvars)
    }

    pub fn grevlex(nvars: usize) -> Self {
        Self::new(OrderKind::Grevlex, nvars)
    }

    pub fn kind(&self) -> OrderKind {
        self.kind
    }

    pub fn precedence(&self) -> &[usize] {
        &self.precedence
    }

    pub fn nvars(&self) -> usize {
        self.precedence.len()
    }

    /// Sort key whose lexicographic comparison agrees with this order.
    pub fn key(&self, m: &Monomial) -> Vec<i64> {
        let e = m.exponents();
        match self.kind {
            OrderKind::Lex => self.precedence.iter().map(|&i| e[i] as i64).collect(),
            OrderKind::Grlex => {
                let mut k = Vec::with_capacity(e.len() + 1);
                k.push(m.degree() as i64);
                k.extend(self.precedence.iter().map(|&i| e[i] as i64));
                k
            }
            OrderKind::Grevlex => {
                let mut k = Vec::with_capacity(e.len() + 1);
                k.push(m.degree() as i64);
                k.extend(self.precedence.iter().rev().map(|&i| -(e[i] as i64)));
                k
            }
        }
    }

    pub fn cmp(&self, a: &Monomial, b: &Monomial) -> Ordering {
        let ea = a.exponents();
        let eb = b.exponents();
        match self.kind {
            OrderKind::Lex => self.cmp_lex(ea, eb),
            OrderKind::Grlex => a.degree().cmp(&b.degree()).then_with(|| self.cmp_lex(ea, eb)),
            OrderKind::Grevlex => a.degree().cmp(&b.degree()).then_with(|| {
                for &i in self.precedence.iter().rev() {
                    match ea[i].cmp(&eb[i]) {
                        Ordering::Equal => continue,
                        o => return o.reverse(),
                    }
                }
                Ordering::Equal
            }),
        }
    }

    fn cmp_lex(&self, ea: &[u32], eb: &[u32]) -> Ordering {
        for &i in &self.precedence {
            match ea[i].cmp(&eb[i]) {
                Ordering::Equal => continue,
                o => return o,
            }
        }
        Ordering::Equal
    }
}
