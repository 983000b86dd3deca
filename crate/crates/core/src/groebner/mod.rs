//! Multivariate division, Buchberger's algorithm over the rationals, standard
//! monomials and elimination ideals.

use std::collections::{BTreeMap, BTreeSet};

use num_traits::{One, Zero};
use thiserror::Error;

use crate::macaulay::QuotientBasis;

mod engine;

mod modular;

use engine::{Engine, Poly};
use crate::poly::{Monomial, MonomialOrder, OrderKind, PolyError, PolySystem, Polynomial};
use crate::scalar::Rational;

/// Default bound on the number of critical pairs created by [`buchberger`].
pub const PAIR_CAP: usize = 100_000;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GroebnerError {
    #[error("critical pair limit of {0} exceeded")]
    PairCap(usize),
    #[error("the quotient ring is infinite-dimensional: no pure power of {0} among the leading terms")]
    NotZeroDimensional(String),
    #[error("cannot keep {keep} of {nvars} variables")]
    BadElimination { keep: usize, nvars: usize },
    #[error("monomial order has {order} variables, the system has {system}")]
    OrderMismatch { order: usize, system: usize },
    #[error(transparent)]
    Poly(#[from] PolyError),
}

fn rational_engine(order: &MonomialOrder) -> Engine<'_, Rational> {
    Engine { order, ctx: &() }
}

fn to_sorted(p: &Polynomial<Rational>, order: &MonomialOrder) -> Poly<Rational> {
    rational_engine(order).sort(p.terms().map(|(m, c)| (m.clone(), c.clone())).collect())
}

fn from_terms(nvars: usize, terms: Vec<(Monomial, Rational)>) -> Polynomial<Rational> {
    Polynomial::from_terms(nvars, terms).expect("exact coefficients")
}

#[derive(Clone, Debug, PartialEq)]
pub struct DivisionResult {
    pub quotients: Vec<Polynomial<Rational>>,
    pub remainder: Polynomial<Rational>,
}

/// Multivariate division of `g` by `divisors`; the first divisor whose
/// leading term divides the current leading term is used.
pub fn divide(g: &Polynomial<Rational>, divisors: &[Polynomial<Rational>], order: &MonomialOrder) -> DivisionResult {
    let n = g.nvars();
    let divs: Vec<Poly<Rational>> = divisors.iter().map(|f| to_sorted(f, order)).collect();
    let (q, r) = rational_engine(order).divide(&to_sorted(g, order).terms, &divs);
    DivisionResult { quotients: q.into_iter().map(|t| from_terms(n, t)).collect(), remainder: from_terms(n, r.terms) }
}

/// Leading monomial of a nonzero polynomial.
pub fn leading_monomial(f: &Polynomial<Rational>, order: &MonomialOrder) -> Option<Monomial> {
    f.terms().map(|(m, _)| m).max_by(|a, b| order.cmp(a, b)).cloned()
}

/// `S(f, g) = (L / LT(f)) f - (L / LT(g)) g` with `L = lcm(LM(f), LM(g))`.
pub fn s_polynomial(f: &Polynomial<Rational>, g: &Polynomial<Rational>, order: &MonomialOrder) -> Polynomial<Rational> {
    let e = rational_engine(order);
    let (mut sf, mut sg) = (to_sorted(f, order), to_sorted(g, order));
    if sf.is_zero() || sg.is_zero() {
        return Polynomial::zero(f.nvars());
    }
    e.make_monic(&mut sf);
    e.make_monic(&mut sg);
    from_terms(f.nvars(), e.s_pair(&sf, &sg).terms)
}

/// A reduced Gröbner basis: monic generators sorted by ascending leading monomial.
#[derive(Clone, Debug, PartialEq)]
pub struct GroebnerBasis {
    order: MonomialOrder,
    vars: Vec<String>,
    generators: Vec<Polynomial<Rational>>,
}

impl GroebnerBasis {
    pub fn order(&self) -> &MonomialOrder {
        &self.order
    }

    pub fn vars(&self) -> &[String] {
        &self.vars
    }

    pub fn generators(&self) -> &[Polynomial<Rational>] {
        &self.generators
    }

    pub fn len(&self) -> usize {
        self.generators.len()
    }

    pub fn is_empty(&self) -> bool {
        self.generators.is_empty()
    }

    /// Whether the basis is `{1}`.
    pub fn is_unit(&self) -> bool {
        self.generators.len() == 1 && self.generators[0].degree() == 0
    }

    pub fn leading_monomials(&self) -> Vec<Monomial> {
        self.generators.iter().filter_map(|g| leading_monomial(g, &self.order)).collect()
    }

    /// Remainder on division by the basis; supported on standard monomials.
    pub fn normal_form(&self, g: &Polynomial<Rational>) -> Polynomial<Rational> {
        let sorted: Vec<Poly<Rational>> = self.generators.iter().map(|f| to_sorted(f, &self.order)).collect();
        let refs: Vec<&Poly<Rational>> = sorted.iter().collect();
        from_terms(g.nvars(), rational_engine(&self.order).reduce(&to_sorted(g, &self.order).terms, &refs).terms)
    }

    /// Buchberger's criterion: every S-polynomial reduces to zero.
    pub fn satisfies_buchberger_criterion(&self) -> bool {
        let e = rational_engine(&self.order);
        let monic: Vec<Poly<Rational>> = self
            .generators
            .iter()
            .map(|g| {
                let mut p = to_sorted(g, &self.order);
                e.make_monic(&mut p);
                p
            })
            .collect();
        e.is_groebner(&monic)
    }

    /// Monomials divisible by no leading monomial, by degree and then
    /// descending exponent vector.
    pub fn standard_monomials(&self) -> Result<Vec<Monomial>, GroebnerError> {
        let n = self.vars.len();
        if self.is_unit() {
            return Ok(Vec::new());
        }
        let lms = self.leading_monomials();
        for k in 0..n {
            let pure = lms.iter().any(|m| m.exponents().iter().enumerate().all(|(i, &e)| (i == k) == (e > 0)));
            if !pure {
                return Err(GroebnerError::NotZeroDimensional(self.vars[k].clone()));
            }
        }
        let mut seen: BTreeSet<Monomial> = BTreeSet::new();
        let mut frontier = vec![Monomial::one(n)];
        while let Some(m) = frontier.pop() {
            if seen.contains(&m) || lms.iter().any(|l| l.divides(&m)) {
                continue;
            }
            for k in 0..n {
                frontier.push(m.mul(&Monomial::var(n, k)));
            }
            seen.insert(m);
        }
        let mut out: Vec<Monomial> = seen.into_iter().collect();
        out.sort_by(|a, b| a.degree().cmp(&b.degree()).then_with(|| b.cmp(a)));
        Ok(out)
    }

    /// Standard monomials with the normal forms of `b` and `x_k b`.
    pub fn quotient_basis(&self) -> Result<QuotientBasis<Rational>, GroebnerError> {
        let n = self.vars.len();
        let monomials = self.standard_monomials()?;
        let index: BTreeMap<&Monomial, usize> = monomials.iter().enumerate().map(|(i, m)| (m, i)).collect();
        let mut nfs = BTreeMap::new();
        for b in &monomials {
            for k in 0..n {
                let xb = b.mul(&Monomial::var(n, k));
                if index.contains_key(&xb) || nfs.contains_key(&xb) {
                    continue;
                }
                let r = self.normal_form(&Polynomial::monomial(xb.clone(), Rational::one()));
                let mut coeffs = vec![Rational::zero(); monomials.len()];
                for (m, c) in r.terms() {
                    coeffs[index[m]] = c.clone();
                }
                nfs.insert(xb, coeffs);
            }
        }
        Ok(QuotientBasis::new(self.vars.clone(), monomials, nfs))
    }
}

/// [`buchberger_with_cap`] with [`PAIR_CAP`].
pub fn buchberger(system: &PolySystem<Rational>, order: &MonomialOrder) -> Result<GroebnerBasis, GroebnerError> {
    buchberger_with_cap(system, order, PAIR_CAP)
}

/// Reduced Gröbner basis by Buchberger's algorithm.
///
/// The algorithm runs modulo a sequence of word-size primes and the result
/// is lifted to the rationals, then verified exactly: every input reduces
/// to zero and every S-polynomial reduces to zero. This sidesteps the
/// growth of intermediate rational coefficients. If no verified lift is
/// found, the algorithm runs directly over the rationals.
pub fn buchberger_with_cap(
    system: &PolySystem<Rational>,
    order: &MonomialOrder,
    cap: usize,
) -> Result<GroebnerBasis, GroebnerError> {
    let n = system.nvars();
    if order.nvars() != n {
        return Err(GroebnerError::OrderMismatch { order: order.nvars(), system: n });
    }
    let inputs: Vec<Poly<Rational>> = system.polys().iter().map(|f| to_sorted(f, order)).collect();
    let gb = match modular::modular_groebner(&inputs, order, cap)? {
        Some(gb) => gb,
        None => rational_engine(order).groebner(&inputs, cap)?,
    };
    Ok(GroebnerBasis {
        order: order.clone(),
        vars: system.vars().to_vec(),
        generators: gb.into_iter().map(|g| from_terms(n, g.terms)).collect(),
    })
}

/// Generators of `I ∩ K[x_1, …, x_keep]`, from a lex basis with `x_1 ≺ ⋯ ≺ x_n`.
pub fn eliminate(system: &PolySystem<Rational>, keep: usize) -> Result<Vec<Polynomial<Rational>>, GroebnerError> {
    let n = system.nvars();
    if keep > n {
        return Err(GroebnerError::BadElimination { keep, nvars: n });
    }
    let order = MonomialOrder::with_precedence(OrderKind::Lex, (0..n).rev().collect())?;
    let gb = buchberger(system, &order)?;
    Ok(gb
        .generators
        .into_iter()
        .filter(|g| g.terms().all(|(m, _)| m.exponents()[keep..].iter().all(|&e| e == 0)))
        .collect())
}

/// Normal form of `g` modulo a Gröbner basis.
pub fn groebner_normal_form(g: &Polynomial<Rational>, gb: &GroebnerBasis) -> Polynomial<Rational> {
    gb.normal_form(g)
}
