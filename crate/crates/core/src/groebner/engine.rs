//! Buchberger's algorithm over an abstract coefficient field, used both
//! over the rationals and over prime fields.

use std::collections::BTreeMap;
use std::fmt;

use num_traits::{One, Zero};

use super::GroebnerError;
use crate::poly::{Monomial, MonomialOrder};
use crate::scalar::Rational;

pub(crate) trait Coeff: Clone + fmt::Debug {
    type Ctx;
    fn one(ctx: &Self::Ctx) -> Self;
    fn is_zero(&self) -> bool;
    fn is_one(&self) -> bool;
    fn add_assign(&mut self, other: &Self, ctx: &Self::Ctx);
    fn mul(&self, other: &Self, ctx: &Self::Ctx) -> Self;
    fn neg(&self, ctx: &Self::Ctx) -> Self;
    fn inv(&self, ctx: &Self::Ctx) -> Self;
}

impl Coeff for Rational {
    type Ctx = ();

    fn one(_: &()) -> Self {
        One::one()
    }

    fn is_zero(&self) -> bool {
        Zero::is_zero(self)
    }

    fn is_one(&self) -> bool {
        One::is_one(self)
    }

    fn add_assign(&mut self, other: &Self, _: &()) {
        *self += other;
    }

    fn mul(&self, other: &Self, _: &()) -> Self {
        self * other
    }

    fn neg(&self, _: &()) -> Self {
        -self
    }

    fn inv(&self, _: &()) -> Self {
        self.recip()
    }
}

/// Residue modulo the prime held in the context (below `2^31`).
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub(crate) struct Zp(pub u64);

impl Coeff for Zp {
    type Ctx = u64;

    fn one(_: &u64) -> Self {
        Zp(1)
    }

    fn is_zero(&self) -> bool {
        self.0 == 0
    }

    fn is_one(&self) -> bool {
        self.0 == 1
    }

    fn add_assign(&mut self, other: &Self, p: &u64) {
        self.0 = (self.0 + other.0) % p;
    }

    fn mul(&self, other: &Self, p: &u64) -> Self {
        Zp(self.0 * other.0 % p)
    }

    fn neg(&self, p: &u64) -> Self {
        Zp((p - self.0) % p)
    }

    fn inv(&self, p: &u64) -> Self {
        let (mut base, mut e, mut acc) = (self.0, p - 2, 1u64);
        while e > 0 {
            if e & 1 == 1 {
                acc = acc * base % p;
            }
            base = base * base % p;
            e >>= 1;
        }
        Zp(acc)
    }
}

/// Terms sorted descending in the engine's order.
#[derive(Clone, Debug)]
pub(crate) struct Poly<K> {
    pub terms: Vec<(Monomial, K)>,
}

impl<K> Poly<K> {
    pub fn lm(&self) -> &Monomial {
        &self.terms[0].0
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }
}

pub(crate) struct Engine<'a, K: Coeff> {
    pub order: &'a MonomialOrder,
    pub ctx: &'a K::Ctx,
}

/// Working polynomial keyed by order so the leading term pops first.
struct Work<K> {
    map: BTreeMap<Vec<i64>, (Monomial, K)>,
}

struct Pair {
    i: usize,
    j: usize,
    lcm: Monomial,
}

impl<K: Coeff> Engine<'_, K> {
    pub fn sort(&self, mut terms: Vec<(Monomial, K)>) -> Poly<K> {
        terms.retain(|(_, c)| !c.is_zero());
        terms.sort_by(|a, b| self.order.cmp(&b.0, &a.0));
        Poly { terms }
    }

    fn add_multiple(&self, work: &mut Work<K>, terms: &[(Monomial, K)], c: &K, shift: Option<&Monomial>) {
        for (m, v) in terms {
            let mm = match shift {
                Some(s) => m.mul(s),
                None => m.clone(),
            };
            let key = self.order.key(&mm);
            let delta = c.mul(v, self.ctx);
            match work.map.get_mut(&key) {
                Some(entry) => {
                    entry.1.add_assign(&delta, self.ctx);
                    if entry.1.is_zero() {
                        work.map.remove(&key);
                    }
                }
                None => {
                    if !delta.is_zero() {
                        work.map.insert(key, (mm, delta));
                    }
                }
            }
        }
    }

    pub fn make_monic(&self, p: &mut Poly<K>) {
        if let Some((_, c)) = p.terms.first() {
            if !c.is_one() {
                let inv = c.inv(self.ctx);
                for (_, v) in p.terms.iter_mut() {
                    *v = v.mul(&inv, self.ctx);
                }
            }
        }
    }

    /// Full remainder of `h` modulo monic `basis`; the first divisor in list order is used.
    pub fn reduce(&self, h: &[(Monomial, K)], basis: &[&Poly<K>]) -> Poly<K> {
        let mut work = Work { map: BTreeMap::new() };
        self.add_multiple(&mut work, h, &K::one(self.ctx), None);
        let mut rem = Vec::new();
        while let Some((_, (m, c))) = work.map.pop_last() {
            match basis.iter().find(|g| g.lm().divides(&m)) {
                Some(g) => {
                    let q = g.lm().quotient_of(&m).expect("divides");
                    self.add_multiple(&mut work, &g.terms[1..], &c.neg(self.ctx), Some(&q));
                }
                None => rem.push((m, c)),
            }
        }
        Poly { terms: rem }
    }

    /// Division with quotients by possibly non-monic divisors.
    pub fn divide(&self, h: &[(Monomial, K)], divisors: &[Poly<K>]) -> (Vec<Vec<(Monomial, K)>>, Poly<K>) {
        let mut work = Work { map: BTreeMap::new() };
        self.add_multiple(&mut work, h, &K::one(self.ctx), None);
        let inv: Vec<Option<K>> = divisors.iter().map(|f| f.terms.first().map(|t| t.1.inv(self.ctx))).collect();
        let mut quotients = vec![Vec::new(); divisors.len()];
        let mut rem = Vec::new();
        while let Some((_, (m, c))) = work.map.pop_last() {
            match divisors.iter().position(|f| !f.is_zero() && f.lm().divides(&m)) {
                Some(i) => {
                    let f = &divisors[i];
                    let q = f.lm().quotient_of(&m).expect("divides");
                    let coef = c.mul(inv[i].as_ref().expect("nonzero divisor"), self.ctx);
                    self.add_multiple(&mut work, &f.terms[1..], &coef.neg(self.ctx), Some(&q));
                    quotients[i].push((q, coef));
                }
                None => rem.push((m, c)),
            }
        }
        (quotients, Poly { terms: rem })
    }

    /// S-polynomial of two monic polynomials.
    pub fn s_pair(&self, f: &Poly<K>, g: &Poly<K>) -> Poly<K> {
        let l = f.lm().lcm(g.lm());
        let mut work = Work { map: BTreeMap::new() };
        let one = K::one(self.ctx);
        self.add_multiple(&mut work, &f.terms[1..], &one, Some(&f.lm().quotient_of(&l).expect("lcm")));
        self.add_multiple(&mut work, &g.terms[1..], &one.neg(self.ctx), Some(&g.lm().quotient_of(&l).expect("lcm")));
        let mut terms = Vec::with_capacity(work.map.len());
        while let Some((_, t)) = work.map.pop_last() {
            terms.push(t);
        }
        Poly { terms }
    }

    /// Reduced Gröbner basis, monic and sorted by ascending leading monomial.
    ///
    /// Pairs are processed smallest lcm first. New pairs are filtered with
    /// the product criterion and the Gebauer–Möller chain criteria, and
    /// basis elements whose leading monomial becomes divisible by a newer
    /// one stop acting as reducers.
    pub fn groebner(&self, inputs: &[Poly<K>], cap: usize) -> Result<Vec<Poly<K>>, GroebnerError> {
        let mut polys: Vec<Poly<K>> = Vec::new();
        let mut active: Vec<usize> = Vec::new();
        let mut pairs: BTreeMap<(Vec<i64>, usize, usize), Pair> = BTreeMap::new();
        let mut created = 0usize;

        for f in inputs {
            let refs: Vec<&Poly<K>> = active.iter().map(|&g| &polys[g]).collect();
            let r = self.reduce(&f.terms, &refs);
            if !r.is_zero() {
                self.update(&mut polys, &mut active, &mut pairs, r, &mut created, cap)?;
            }
        }
        while let Some((_, p)) = pairs.pop_first() {
            let s = self.s_pair(&polys[p.i], &polys[p.j]);
            let refs: Vec<&Poly<K>> = active.iter().map(|&g| &polys[g]).collect();
            let r = self.reduce(&s.terms, &refs);
            if !r.is_zero() {
                self.update(&mut polys, &mut active, &mut pairs, r, &mut created, cap)?;
            }
        }

        let mut keep: Vec<Poly<K>> = active.iter().map(|&g| polys[g].clone()).collect();
        keep.sort_by(|a, b| self.order.cmp(a.lm(), b.lm()));
        let mut out = Vec::with_capacity(keep.len());
        for i in 0..keep.len() {
            let others: Vec<&Poly<K>> = keep.iter().enumerate().filter(|(k, _)| *k != i).map(|(_, g)| g).collect();
            let mut g = self.reduce(&keep[i].terms[1..], &others);
            g.terms.insert(0, keep[i].terms[0].clone());
            self.make_monic(&mut g);
            out.push(g);
        }
        Ok(out)
    }

    /// Buchberger's criterion for monic `gb`. Pairs are checked by
    /// increasing lcm; a pair is skipped when its leading monomials are
    /// coprime, or when some third element's leading monomial divides its
    /// lcm and both pairs with that element were already settled.
    pub fn is_groebner(&self, gb: &[Poly<K>]) -> bool {
        let k = gb.len();
        let refs: Vec<&Poly<K>> = gb.iter().collect();
        let mut pairs: Vec<(Vec<i64>, usize, usize, Monomial)> = Vec::new();
        for i in 0..k {
            for j in i + 1..k {
                let l = gb[i].lm().lcm(gb[j].lm());
                pairs.push((self.order.key(&l), i, j, l));
            }
        }
        pairs.sort();
        let mut settled = vec![vec![false; k]; k];
        for (_, i, j, l) in pairs {
            let chain = (0..k).any(|m| m != i && m != j && gb[m].lm().divides(&l) && settled[i][m] && settled[j][m]);
            if !chain && !gb[i].lm().is_coprime(gb[j].lm()) && !self.reduce(&self.s_pair(&gb[i], &gb[j]).terms, &refs).is_zero() {
                return false;
            }
            settled[i][j] = true;
            settled[j][i] = true;
        }
        true
    }

    fn update(
        &self,
        polys: &mut Vec<Poly<K>>,
        active: &mut Vec<usize>,
        pairs: &mut BTreeMap<(Vec<i64>, usize, usize), Pair>,
        mut h: Poly<K>,
        created: &mut usize,
        cap: usize,
    ) -> Result<(), GroebnerError> {
        self.make_monic(&mut h);
        let t = polys.len();
        let lh = h.lm().clone();
        polys.push(h);
        let candidates: Vec<Pair> = active.iter().map(|&g| Pair { i: g, j: t, lcm: polys[g].lm().lcm(&lh) }).collect();
        *created += candidates.len();
        if *created > cap {
            return Err(GroebnerError::PairCap(cap));
        }
        let coprime: Vec<bool> = candidates.iter().map(|p| polys[p.i].lm().is_coprime(&lh)).collect();
        // Drop a new pair when another new pair's lcm properly divides its
        // lcm; among equal lcms keep one, preferring a coprime one (which is
        // then discarded by the product criterion).
        let mut fresh = Vec::new();
        for (a, p) in candidates.iter().enumerate() {
            let dominated = candidates.iter().enumerate().any(|(b, q)| {
                b != a
                    && q.lcm.divides(&p.lcm)
                    && (q.lcm != p.lcm || (coprime[b] && !coprime[a]) || (coprime[b] == coprime[a] && b < a))
            });
            if !dominated && !coprime[a] {
                fresh.push(Pair { i: p.i, j: p.j, lcm: p.lcm.clone() });
            }
        }
        pairs.retain(|_, p| {
            !(lh.divides(&p.lcm) && polys[p.i].lm().lcm(&lh) != p.lcm && polys[p.j].lm().lcm(&lh) != p.lcm)
        });
        for p in fresh {
            pairs.insert((self.order.key(&p.lcm), p.i, p.j), p);
        }
        active.retain(|&g| !lh.divides(polys[g].lm()));
        active.push(t);
        Ok(())
    }
}
