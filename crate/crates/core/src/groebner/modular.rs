//! Gröbner bases over prime fields, combined by Chinese remaindering and
//! rational reconstruction.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::engine::{Engine, Poly, Zp};
use super::GroebnerError;
use crate::poly::{Monomial, MonomialOrder};
use crate::scalar::Rational;

fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

/// Primes below `2^31`, largest first.
pub(crate) fn primes() -> impl Iterator<Item = u64> {
    (1u64 << 20..(1u64 << 31)).rev().filter(|&n| n % 2 == 1 && is_prime(n))
}

fn to_zp(c: &Rational, p: u64) -> Option<Zp> {
    let pb = BigInt::from(p);
    let num = c.numer().mod_floor(&pb).to_u64()?;
    let den = c.denom().mod_floor(&pb).to_u64()?;
    if den == 0 {
        return None;
    }
    use super::engine::Coeff;
    Some(Zp(num).mul(&Zp(den).inv(&p), &p))
}

/// Reduced basis modulo `p`, or `None` when `p` divides a denominator.
pub(crate) fn groebner_mod_p(
    inputs: &[Poly<Rational>],
    order: &MonomialOrder,
    p: u64,
    cap: usize,
) -> Result<Option<Vec<Poly<Zp>>>, GroebnerError> {
    let engine = Engine::<Zp> { order, ctx: &p };
    let mut reduced = Vec::with_capacity(inputs.len());
    for f in inputs {
        let mut terms = Vec::with_capacity(f.terms.len());
        for (m, c) in &f.terms {
            match to_zp(c, p) {
                Some(v) => terms.push((m.clone(), v)),
                None => return Ok(None),
            }
        }
        reduced.push(engine.sort(terms));
    }
    engine.groebner(&reduced, cap).map(Some)
}

/// `r/s ≡ a (mod m)` with `|r|, s ≤ sqrt(m/2)`.
pub(crate) fn rational_reconstruction(a: &BigInt, m: &BigInt) -> Option<Rational> {
    let bound = (m / BigInt::from(2)).sqrt();
    let (mut r0, mut r1) = (m.clone(), a.mod_floor(m));
    let (mut s0, mut s1) = (BigInt::zero(), BigInt::one());
    while r1 > bound {
        let q = &r0 / &r1;
        let r2 = &r0 - &q * &r1;
        let s2 = &s0 - &q * &s1;
        r0 = std::mem::replace(&mut r1, r2);
        s0 = std::mem::replace(&mut s1, s2);
    }
    if s1.is_zero() || s1.abs() > bound {
        return None;
    }
    let g = r1.gcd(&s1);
    if !g.is_one() {
        return None;
    }
    Some(Rational::new(r1, s1))
}

/// Residues of one basis shape accumulated over several primes.
pub(crate) struct Accumulator {
    pub leading: Vec<Monomial>,
    pub modulus: BigInt,
    /// Per generator, monomial to residue.
    pub residues: Vec<BTreeMap<Monomial, BigInt>>,
}

impl Accumulator {
    pub fn new(gb: &[Poly<Zp>], p: u64) -> Self {
        Accumulator {
            leading: gb.iter().map(|g| g.lm().clone()).collect(),
            modulus: BigInt::from(p),
            residues: gb.iter().map(|g| g.terms.iter().map(|(m, c)| (m.clone(), BigInt::from(c.0))).collect()).collect(),
        }
    }

    pub fn same_shape(&self, gb: &[Poly<Zp>]) -> bool {
        gb.len() == self.leading.len() && gb.iter().zip(&self.leading).all(|(g, l)| g.lm() == l)
    }

    /// Chinese remaindering with one more prime.
    pub fn absorb(&mut self, gb: &[Poly<Zp>], p: u64) {
        let pb = BigInt::from(p);
        let m_inv = {
            let mm = (&self.modulus % &pb).to_u64().expect("small");
            use super::engine::Coeff;
            BigInt::from(Zp(mm).inv(&p).0)
        };
        for (acc, g) in self.residues.iter_mut().zip(gb) {
            let new: BTreeMap<&Monomial, u64> = g.terms.iter().map(|(m, c)| (m, c.0)).collect();
            for m in new.keys() {
                acc.entry((*m).clone()).or_insert_with(BigInt::zero);
            }
            for (m, a) in acc.iter_mut() {
                let b = BigInt::from(new.get(m).copied().unwrap_or(0));
                // x = a + M * ((b - a) M^{-1} mod p)
                let t = ((&b - &*a) * &m_inv).mod_floor(&pb);
                *a = &*a + &self.modulus * t;
            }
        }
        self.modulus *= pb;
    }

    pub fn reconstruct(&self) -> Option<Vec<Vec<(Monomial, Rational)>>> {
        self.residues
            .iter()
            .map(|g| {
                g.iter()
                    .filter(|(_, a)| !a.is_zero())
                    .map(|(m, a)| rational_reconstruction(a, &self.modulus).map(|r| (m.clone(), r)))
                    .collect()
            })
            .collect()
    }
}

/// Upper bound on the primes tried before giving up on lifting.
const MAX_PRIMES: usize = 300;

/// Whether `gb` (monic, over the rationals) is a Gröbner basis containing
/// every input.
fn verify(inputs: &[Poly<Rational>], gb: &[Poly<Rational>], order: &MonomialOrder) -> bool {
    let engine = Engine::<Rational> { order, ctx: &() };
    let refs: Vec<&Poly<Rational>> = gb.iter().collect();
    inputs.iter().all(|f| engine.reduce(&f.terms, &refs).is_zero()) && engine.is_groebner(gb)
}

/// Gröbner basis over the rationals from bases modulo word-size primes.
///
/// Each prime runs the same Buchberger procedure. Bases whose leading
/// monomials disagree with the accumulated ones are set aside; three such
/// primes in a row restart the accumulation. Once rational reconstruction
/// gives the same result for two consecutive primes, the candidate is
/// checked exactly over the rationals. `None` means no verified candidate
/// was found within the prime budget.
pub(crate) fn modular_groebner(
    inputs: &[Poly<Rational>],
    order: &MonomialOrder,
    cap: usize,
) -> Result<Option<Vec<Poly<Rational>>>, GroebnerError> {
    let engine = Engine::<Rational> { order, ctx: &() };
    let mut acc: Option<Accumulator> = None;
    let mut last: Option<Vec<Vec<(Monomial, Rational)>>> = None;
    let mut mismatches = 0;
    for p in primes().take(MAX_PRIMES) {
        let Some(gb) = groebner_mod_p(inputs, order, p, cap)? else { continue };
        match acc.as_mut() {
            Some(a) if a.same_shape(&gb) => {
                mismatches = 0;
                a.absorb(&gb, p);
            }
            Some(_) if mismatches < 2 => {
                mismatches += 1;
                continue;
            }
            _ => {
                mismatches = 0;
                acc = Some(Accumulator::new(&gb, p));
                last = None;
                continue;
            }
        }
        let rec = acc.as_ref().expect("accumulator").reconstruct();
        if rec.is_some() && rec == last {
            let candidate: Vec<Poly<Rational>> = rec.clone().expect("reconstructed").into_iter().map(|t| engine.sort(t)).collect();
            if verify(inputs, &candidate, order) {
                return Ok(Some(candidate));
            }
        }
        last = rec;
    }
    Ok(None)
}
